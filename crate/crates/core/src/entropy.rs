//! Generalized per-element information and generalized entropy.
//!
//! All logarithms are natural, so entropies are in nats. Changing the base
//! rescales every entropy by the same constant and leaves agglomeration
//! order untouched.

use crate::allocation::{ElementId, FeatureAllocation};
use crate::error::{GeaError, Result};
use crate::fixed::Fixed;

/// `n · r` in raw fixed-point units.
#[inline]
pub(crate) fn reference_mass(n: usize, r: Fixed) -> f64 {
    (n as i128 * r.raw() as i128) as f64
}

/// One summand `(|B| / nr) · log(nr / |B|)` from raw fixed-point units.
#[inline]
pub(crate) fn block_term(size_raw: i64, mass: f64) -> f64 {
    let size = size_raw as f64;
    (size / mass) * (mass / size).ln()
}

/// Generalized per-element information `log(n·r / |B|)`.
///
/// Negative exactly when the block is heavier than `n·r`.
pub fn gpei(block_size: Fixed, n: usize, r: Fixed) -> Result<f64> {
    if !block_size.is_positive() {
        return Err(GeaError::InvalidNumber(format!("block size {block_size} must be positive")));
    }
    if n == 0 {
        return Err(GeaError::EmptyUniverse);
    }
    if !r.is_positive() {
        return Err(GeaError::NonPositiveRecurrenceBase(r.to_string()));
    }
    Ok((reference_mass(n, r) / block_size.raw() as f64).ln())
}

/// Generalized entropy in block-sum form, summed in stored block order.
///
/// An allocation without blocks has entropy zero.
pub fn generalized_entropy(g: &FeatureAllocation) -> f64 {
    if g.blocks().is_empty() {
        return 0.0;
    }
    let mass = reference_mass(g.n(), g.r());
    g.blocks().iter().map(|b| block_term(b.size().raw(), mass)).sum()
}

/// Generalized entropy through the cumulative occurrence distribution.
///
/// Only defined when every block size is integral.
pub fn generalized_entropy_cod(g: &FeatureAllocation) -> Result<f64> {
    let cod = g.cod()?;
    if cod.max_size() == 0 {
        return Ok(0.0);
    }
    let mass = reference_mass(g.n(), g.r());
    let mut h = 0.0;
    for k in 1..=cod.max_size() {
        let count = cod.phi(k) - cod.phi(k + 1);
        if count > 0 {
            h += count as f64 * block_term(Fixed::from_int(k as i64).raw(), mass);
        }
    }
    Ok(h)
}

/// Entropy of a projection onto an element subset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubsetEntropy {
    pub value: f64,
    /// Set when no block touches the subset; `value` is then zero.
    pub empty_projection: bool,
}

/// Generalized entropy of `g` projected onto `subset` (universe size `|subset|`, same `r`).
pub fn subset_entropy(g: &FeatureAllocation, subset: &[ElementId]) -> Result<SubsetEntropy> {
    let p = g.project(subset)?;
    Ok(SubsetEntropy {
        value: generalized_entropy(&p),
        empty_projection: p.blocks().is_empty(),
    })
}
