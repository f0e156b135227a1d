mod common;

use std::collections::BTreeSet;

use gea_core::{
    categorize, categorize_detailed, gea, generalized_entropy, subset_entropy, Block, CategorizationParams, Dendrogram,
    ElementId, FeatureAllocation, Fixed, NumericDataset,
};
use proptest::prelude::*;

/// Blocks as lists of `(element, raw weight)`.
fn arb_allocation(max_n: usize, max_blocks: usize, max_raw: i64) -> impl Strategy<Value = FeatureAllocation> {
    (1..=max_n).prop_flat_map(move |n| {
        let block = prop::collection::vec((0..n, 1..=max_raw), 1..=n);
        (Just(n), prop::collection::vec(block, 0..=max_blocks)).prop_map(|(n, blocks)| {
            let blocks = blocks
                .into_iter()
                .map(|b| Block::new(b.into_iter().map(|(e, w)| (ElementId(e), Fixed::from_raw(w)))).unwrap())
                .collect();
            FeatureAllocation::new(n, blocks, Fixed::ONE).unwrap()
        })
    })
}

fn arb_multisets(max_n: usize) -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(0..n, 1..=2 * n), 0..=8)))
}

fn leaf_sets(d: &Dendrogram) -> Vec<(Vec<usize>, f64)> {
    d.merges()
        .iter()
        .enumerate()
        .map(|(i, m)| (d.leaves_of(d.n() + i), m.height))
        .collect()
}

/// Smallest gap between the best and second-best pair score over the whole
/// run, recomputed from projections.
fn min_score_gap(g: &FeatureAllocation, d: &Dendrogram) -> f64 {
    let mut clusters: Vec<Vec<usize>> = (0..g.n()).map(|i| vec![i]).collect();
    let mut gap = f64::INFINITY;
    for (i, _) in d.merges().iter().enumerate() {
        let mut scores = Vec::new();
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let union: Vec<ElementId> = clusters[a].iter().chain(&clusters[b]).map(|&e| ElementId(e)).collect();
                scores.push(subset_entropy(g, &union).unwrap().value);
            }
        }
        scores.sort_by(f64::total_cmp);
        if scores.len() > 1 {
            gap = gap.min(scores[1] - scores[0]);
        }
        let merged = d.leaves_of(d.n() + i);
        clusters.retain(|c| !merged.contains(&c[0]));
        clusters.push(merged);
    }
    gap
}

proptest! {
    #[test]
    fn projection_onto_everything_is_identity(g in arb_allocation(10, 8, 3_000_000)) {
        let all: Vec<ElementId> = (0..g.n()).map(ElementId).collect();
        prop_assert_eq!(g.project(&all).unwrap(), g);
    }

    #[test]
    fn projections_compose(g in arb_allocation(10, 8, 3_000_000), s_mask in any::<u16>(), t_mask in any::<u16>()) {
        let s: Vec<usize> = (0..g.n()).filter(|i| s_mask >> i & 1 == 1).collect();
        let t: Vec<usize> = s.iter().copied().filter(|i| t_mask >> i & 1 == 1).collect();
        prop_assume!(!t.is_empty());
        let s_ids: Vec<ElementId> = s.iter().map(|&e| ElementId(e)).collect();
        let t_ids: Vec<ElementId> = t.iter().map(|&e| ElementId(e)).collect();
        // t expressed in the re-indexed universe of the first projection
        let t_inner: Vec<ElementId> = t.iter().map(|e| ElementId(s.iter().position(|x| x == e).unwrap())).collect();
        let twice = g.project(&s_ids).unwrap().project(&t_inner).unwrap();
        prop_assert_eq!(twice, g.project(&t_ids).unwrap());
    }

    #[test]
    fn cod_is_non_increasing((n, sets) in arb_multisets(8)) {
        let ids: Vec<Vec<ElementId>> = sets.iter().map(|b| b.iter().map(|&e| ElementId(e)).collect()).collect();
        let cod = FeatureAllocation::from_multisets(&ids, n).unwrap().cod().unwrap();
        for k in 1..=cod.max_size() + 1 {
            prop_assert!(cod.phi(k) >= cod.phi(k + 1));
        }
        prop_assert_eq!(cod.phi(1), sets.len());
    }

    #[test]
    fn multisets_round_trip((n, sets) in arb_multisets(8)) {
        let ids: Vec<Vec<ElementId>> = sets
            .iter()
            .map(|b| {
                let mut v: Vec<ElementId> = b.iter().map(|&e| ElementId(e)).collect();
                v.sort();
                v
            })
            .collect();
        let g = FeatureAllocation::from_multisets(&ids, n).unwrap();
        let back: Vec<Vec<ElementId>> = g.blocks().iter().map(|b| b.to_multiset().unwrap()).collect();
        prop_assert_eq!(back, ids);
        prop_assert!(g.blocks().iter().all(|b| b.size().is_integral()));
    }

    #[test]
    fn multiset_embedding_matches_explicit_weights((n, sets) in arb_multisets(8)) {
        let ids: Vec<Vec<ElementId>> = sets.iter().map(|b| b.iter().map(|&e| ElementId(e)).collect()).collect();
        let via_multiset = FeatureAllocation::from_multisets(&ids, n).unwrap();
        let explicit: Vec<Block> = sets
            .iter()
            .map(|b| {
                let mut counts = vec![0i64; n];
                for &e in b {
                    counts[e] += 1;
                }
                let pairs = counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(e, &c)| (ElementId(e), format!("{c}.0").parse::<Fixed>().unwrap()));
                Block::new(pairs).unwrap()
            })
            .collect();
        let explicit = FeatureAllocation::new(n, explicit, "1.0".parse().unwrap()).unwrap();
        prop_assert_eq!(
            generalized_entropy(&via_multiset).to_bits(),
            generalized_entropy(&explicit).to_bits()
        );
    }

    #[test]
    fn scaling_weights_and_base_together_preserves_entropy(g in arb_allocation(10, 8, 3_000_000), c in 2i64..=9) {
        let scaled_blocks = g
            .blocks()
            .iter()
            .map(|b| Block::new(b.entries().iter().map(|&(e, w)| (e, w * c))).unwrap())
            .collect();
        let scaled = FeatureAllocation::new(g.n(), scaled_blocks, g.r() * c).unwrap();
        prop_assert!((generalized_entropy(&g) - generalized_entropy(&scaled)).abs() <= 1e-9);
    }

    #[test]
    fn cut_partitions_the_elements(g in arb_allocation(9, 6, 2_000_000), k_seed in any::<usize>()) {
        let d = gea(&g).unwrap();
        let k = 1 + k_seed % g.n();
        let c = d.cut(k).unwrap();
        let clusters = c.clusters();
        prop_assert_eq!(clusters.len(), k);
        prop_assert!(clusters.iter().all(|cl| !cl.is_empty()));
        let mut all: Vec<usize> = clusters.concat();
        all.sort();
        prop_assert_eq!(all, (0..g.n()).collect::<Vec<_>>());
    }

    #[test]
    fn gea_is_deterministic(g in arb_allocation(9, 6, 3_000_000)) {
        prop_assert_eq!(gea(&g).unwrap().to_json(), gea(&g).unwrap().to_json());
    }

    #[test]
    fn zero_one_weights_give_non_negative_heights(g in arb_allocation(9, 8, 1_000_000)) {
        let binary_blocks = g
            .blocks()
            .iter()
            .map(|b| Block::new(b.entries().iter().map(|&(e, _)| (e, Fixed::ONE))).unwrap())
            .collect();
        let binary = FeatureAllocation::new(g.n(), binary_blocks, Fixed::ONE).unwrap();
        for m in gea(&binary).unwrap().merges() {
            prop_assert!(m.height >= -1e-12, "height {}", m.height);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabeling_permutes_the_dendrogram(
        g in arb_allocation(7, 6, 2_999_999),
        perm_seed in prop::collection::vec(any::<u32>(), 7),
    ) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&i| (perm_seed[i], i));
        let permuted_blocks = g
            .blocks()
            .iter()
            .map(|b| Block::new(b.entries().iter().map(|&(e, w)| (ElementId(perm[e.index()]), w))).unwrap())
            .collect();
        let permuted = FeatureAllocation::new(n, permuted_blocks, g.r()).unwrap();

        let d = gea(&g).unwrap();
        prop_assume!(min_score_gap(&g, &d) > 1e-9);
        let expected: Vec<(Vec<usize>, f64)> = leaf_sets(&d)
            .into_iter()
            .map(|(mut leaves, h)| {
                leaves.iter_mut().for_each(|e| *e = perm[*e]);
                leaves.sort();
                (leaves, h)
            })
            .collect();
        prop_assert_eq!(leaf_sets(&gea(&permuted).unwrap()), expected);
    }
}

fn grid_dataset(d: u32, cols: &[Vec<i64>]) -> NumericDataset {
    let n = cols[0].len();
    let rows = (0..n).map(|i| cols.iter().map(|c| c[i] as f64 / f64::from(d)).collect()).collect();
    NumericDataset::new((0..cols.len()).map(|j| format!("c{j}")).collect(), rows, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grid_neighbours_share_overlapping_categories(
        d in 1u32..=20, m in 0u32..=6, gamma in 0.0f64..3.0, base in -50i64..50, j in 0i64..=16,
    ) {
        let params = CategorizationParams::new(d, m, gamma, Fixed::ONE).unwrap();
        let c = categorize_detailed(&grid_dataset(d, &[vec![base, base + j]]), &params).unwrap();
        let shared = c
            .allocation
            .blocks()
            .iter()
            .filter(|b| b.len() == 2)
            .count() as i64;
        let expected = (2 * i64::from(m) + 1 - j).max(0);
        prop_assert_eq!(shared, expected);
    }

    #[test]
    fn block_count_is_bounded(
        d in 1u32..=10, m in 0u32..=4,
        cols in prop::collection::vec(prop::collection::vec(-30i64..30, 6), 1..=3),
    ) {
        let params = CategorizationParams::new(d, m, 1.0, Fixed::ONE).unwrap();
        let g = categorize(&grid_dataset(d, &cols), &params).unwrap();
        let bound: usize = cols
            .iter()
            .map(|c| c.iter().collect::<BTreeSet<_>>().len() * (2 * m as usize + 1))
            .sum();
        prop_assert!(g.blocks().len() <= bound);
        prop_assert!(g.blocks().iter().all(|b| !b.is_empty()));
    }

    #[test]
    fn contiguous_columns_add_at_most_2m_blocks(
        d in 1u32..=10, m in 0u32..=4,
        spans in prop::collection::vec((-30i64..30, 1usize..8), 1..=3),
    ) {
        // each column covers a run of consecutive grid points
        let cols: Vec<Vec<i64>> = spans.iter().map(|&(lo, len)| (0..8).map(|i| lo + (i % len) as i64).collect()).collect();
        let params = CategorizationParams::new(d, m, 1.0, Fixed::ONE).unwrap();
        let g = categorize(&grid_dataset(d, &cols), &params).unwrap();
        let bound: usize = spans.iter().map(|&(_, len)| len + 2 * m as usize).sum();
        prop_assert_eq!(g.blocks().len(), bound);
    }

    #[test]
    fn shifting_a_column_by_grid_steps_keeps_the_dendrogram(
        d in 1u32..=10, m in 0u32..=3, shift in -40i64..40,
        cols in prop::collection::vec(prop::collection::vec(-20i64..20, 6), 2),
    ) {
        let params = CategorizationParams::new(d, m, 2.0, Fixed::ONE).unwrap();
        let original = gea(&categorize(&grid_dataset(d, &cols), &params).unwrap()).unwrap();
        let mut moved = cols.clone();
        moved[0].iter_mut().for_each(|v| *v += shift);
        let shifted = gea(&categorize(&grid_dataset(d, &moved), &params).unwrap()).unwrap();
        prop_assert_eq!(original, shifted);
    }
}
