#![allow(dead_code)]

use std::path::PathBuf;

use gea_core::{Block, ElementId, FeatureAllocation, Fixed};
use rand::Rng;

pub fn iris_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/iris.csv")
}

/// Random allocation over `n` elements; weights are drawn by `weight`.
pub fn random_allocation<R: Rng>(
    rng: &mut R,
    n: usize,
    max_blocks: usize,
    r: Fixed,
    mut weight: impl FnMut(&mut R) -> Fixed,
) -> FeatureAllocation {
    let count = rng.random_range(0..=max_blocks);
    let blocks = (0..count)
        .map(|_| {
            let len = rng.random_range(1..=n);
            let mut members: Vec<usize> = (0..n).collect();
            for i in 0..len {
                let j = rng.random_range(i..n);
                members.swap(i, j);
            }
            Block::new(members[..len].iter().map(|&e| (ElementId(e), weight(rng)))).unwrap()
        })
        .collect();
    FeatureAllocation::new(n, blocks, r).unwrap()
}

pub fn int_weight<R: Rng>(max: i64) -> impl FnMut(&mut R) -> Fixed {
    move |rng| Fixed::from_int(rng.random_range(1..=max))
}

/// Weights on the millionth grid in `(0, cap]`.
pub fn bounded_weight<R: Rng>(cap: Fixed) -> impl FnMut(&mut R) -> Fixed {
    move |rng| Fixed::from_raw(rng.random_range(1..=cap.raw()))
}
