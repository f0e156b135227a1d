//! Greedy entropy agglomeration.
//!
//! Starting from singletons, repeatedly merge the pair of clusters whose
//! union has the smallest projection entropy, until a single cluster holds
//! every element. The projection entropy of a candidate union `S` is the
//! generalized entropy of the allocation restricted to `S`, computed with
//! universe size `|S|` and the allocation's recurrence base.
//!
//! [`gea`] caches every pair score and, after a merge, only scores pairs
//! that involve the new cluster. [`naive::gea_naive`] recomputes everything
//! from projections each round and serves as a reference.

mod dendrogram;
pub mod naive;
mod score;

use std::collections::HashMap;

pub use dendrogram::{ClusterSet, Dendrogram, Merge, NodeId};
pub use score::{score_accuracy, Accuracy};

use crate::allocation::{ElementId, FeatureAllocation};
use crate::entropy::{block_term, reference_mass};
use crate::error::{GeaError, Result};

/// Absolute tolerance under which two pair scores count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// A scored candidate merge, keyed for deterministic tie-breaking.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Candidate {
    pub a: NodeId,
    pub b: NodeId,
    pub height: f64,
    /// `(smaller, larger)` of the two clusters' minimum element ids.
    pub key: (ElementId, ElementId),
}

impl Candidate {
    pub(crate) fn new(a: NodeId, min_a: ElementId, b: NodeId, min_b: ElementId, height: f64) -> Self {
        let (a, b, key) = if min_a <= min_b {
            (a, b, (min_a, min_b))
        } else {
            (b, a, (min_b, min_a))
        };
        Candidate { a, b, height, key }
    }
}

/// Minimum height wins; candidates within [`TIE_TOLERANCE`] of the minimum
/// are resolved by the smallest key. Independent of iteration order.
pub(crate) fn select<I>(candidates: I) -> Option<Candidate>
where
    I: IntoIterator<Item = Candidate> + Clone,
{
    let min = candidates
        .clone()
        .into_iter()
        .map(|c| c.height)
        .fold(f64::INFINITY, f64::min);
    candidates
        .into_iter()
        .filter(|c| c.height <= min + TIE_TOLERANCE)
        .min_by_key(|c| c.key)
}

/// Per-block weight totals of one cluster, sorted by block index.
type BlockSums = Vec<(u32, i64)>;

struct Cluster {
    members: Vec<ElementId>,
    sums: BlockSums,
}

impl Cluster {
    fn min(&self) -> ElementId {
        self.members[0]
    }
}

/// Sorted-merge of two sparse block-sum vectors.
fn merge_sums(a: &BlockSums, b: &BlockSums) -> BlockSums {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

struct Engine<'g> {
    g: &'g FeatureAllocation,
    clusters: HashMap<NodeId, Cluster>,
    scores: HashMap<(NodeId, NodeId), Candidate>,
}

impl<'g> Engine<'g> {
    fn new(g: &'g FeatureAllocation) -> Self {
        let mut per_element: Vec<BlockSums> = vec![Vec::new(); g.n()];
        for (bi, block) in g.blocks().iter().enumerate() {
            for &(e, w) in block.entries() {
                per_element[e.index()].push((bi as u32, w.raw()));
            }
        }
        let clusters = per_element
            .into_iter()
            .enumerate()
            .map(|(i, sums)| {
                (
                    i,
                    Cluster {
                        members: vec![ElementId(i)],
                        sums,
                    },
                )
            })
            .collect();
        Engine {
            g,
            clusters,
            scores: HashMap::new(),
        }
    }

    /// Projection entropy of the union of two clusters, from block sums.
    /// Terms are added in block order, matching a projected allocation.
    fn union_entropy(&self, a: &Cluster, b: &Cluster) -> f64 {
        let size = a.members.len() + b.members.len();
        let mass = reference_mass(size, self.g.r());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&a.sums, &b.sums);
        let mut h = 0.0;
        loop {
            let raw = match (x.get(i), y.get(j)) {
                (Some(p), Some(q)) if p.0 == q.0 => {
                    i += 1;
                    j += 1;
                    p.1 + q.1
                }
                (Some(p), Some(q)) if p.0 < q.0 => {
                    i += 1;
                    p.1
                }
                (_, Some(q)) => {
                    j += 1;
                    q.1
                }
                (Some(p), None) => {
                    i += 1;
                    p.1
                }
                (None, None) => break,
            };
            h += block_term(raw, mass);
        }
        h
    }

    fn score(&self, a: NodeId, b: NodeId) -> Candidate {
        let (ca, cb) = (&self.clusters[&a], &self.clusters[&b]);
        Candidate::new(a, ca.min(), b, cb.min(), self.union_entropy(ca, cb))
    }

    fn insert_score(&mut self, a: NodeId, b: NodeId) {
        let c = self.score(a, b);
        self.scores.insert((a.min(b), a.max(b)), c);
    }

    fn run(mut self) -> Result<Vec<Merge>> {
        let n = self.g.n();
        for a in 0..n {
            for b in a + 1..n {
                self.insert_score(a, b);
            }
        }
        let mut merges = Vec::with_capacity(n.saturating_sub(1));
        for step in 0..n.saturating_sub(1) {
            let best = select(self.scores.values().copied())
                .ok_or_else(|| GeaError::Internal(format!("no candidate pair at merge {step}")))?;
            let left = self
                .clusters
                .remove(&best.a)
                .ok_or_else(|| GeaError::Internal(format!("cluster {} missing", best.a)))?;
            let right = self
                .clusters
                .remove(&best.b)
                .ok_or_else(|| GeaError::Internal(format!("cluster {} missing", best.b)))?;
            self.scores
                .retain(|&(x, y), _| x != best.a && x != best.b && y != best.a && y != best.b);

            let mut members = left.members;
            members.extend_from_slice(&right.members);
            members.sort_unstable();
            let merged = Cluster {
                sums: merge_sums(&left.sums, &right.sums),
                members,
            };
            let id = n + step;
            merges.push(Merge {
                left: best.a,
                right: best.b,
                height: best.height,
                size: merged.members.len(),
            });
            self.clusters.insert(id, merged);

            let others: Vec<NodeId> = self.clusters.keys().copied().filter(|&k| k != id).collect();
            for other in others {
                self.insert_score(other, id);
            }
        }
        Ok(merges)
    }
}

/// Runs generalized entropy agglomeration with the cached pair engine.
pub fn gea(g: &FeatureAllocation) -> Result<Dendrogram> {
    if g.n() == 0 {
        return Err(GeaError::EmptyUniverse);
    }
    let merges = Engine::new(g).run()?;
    Dendrogram::new(g.n(), g.r(), merges)
}

/// Flat clustering obtained by undoing the last `k - 1` merges.
pub fn cut(d: &Dendrogram, k: usize) -> Result<ClusterSet> {
    d.cut(k)
}
