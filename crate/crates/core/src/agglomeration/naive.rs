//! Reference agglomeration that rescores every pair from projections.

use super::{select, Candidate, Dendrogram, Merge, NodeId};
use crate::allocation::{ElementId, FeatureAllocation};
use crate::entropy::subset_entropy;
use crate::error::{GeaError, Result};

/// Same merge rule as [`super::gea`], without caching: each round projects
/// the allocation onto every candidate union. Quadratic evaluations per
/// round, so only suitable for small inputs.
pub fn gea_naive(g: &FeatureAllocation) -> Result<Dendrogram> {
    let n = g.n();
    if n == 0 {
        return Err(GeaError::EmptyUniverse);
    }
    let mut working: Vec<(NodeId, Vec<ElementId>)> = (0..n).map(|i| (i, vec![ElementId(i)])).collect();
    let mut merges = Vec::new();
    while working.len() > 1 {
        let mut candidates = Vec::new();
        for i in 0..working.len() {
            for j in i + 1..working.len() {
                let (a, sa) = &working[i];
                let (b, sb) = &working[j];
                let union: Vec<ElementId> = sa.iter().chain(sb).copied().collect();
                let h = subset_entropy(g, &union)?.value;
                let min_a = *sa.iter().min().unwrap();
                let min_b = *sb.iter().min().unwrap();
                candidates.push(Candidate::new(*a, min_a, *b, min_b, h));
            }
        }
        let best: Candidate = select(candidates.iter().copied()).expect("at least one pair");
        let take = |w: &mut Vec<(NodeId, Vec<ElementId>)>, id: NodeId| {
            let pos = w.iter().position(|(x, _)| *x == id).expect("live node");
            w.remove(pos).1
        };
        let mut members = take(&mut working, best.a);
        members.extend(take(&mut working, best.b));
        let id = n + merges.len();
        merges.push(Merge {
            left: best.a,
            right: best.b,
            height: best.height,
            size: members.len(),
        });
        working.push((id, members));
    }
    Dendrogram::new(n, g.r(), merges)
}
