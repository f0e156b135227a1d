//! Feature allocations whose blocks carry rational occurrence numbers.
//!
//! A [`Block`] maps elements to positive [`Fixed`] weights; its size is the
//! exact sum of those weights. Multiset blocks are the special case of
//! integral weights with a recurrence base of one, see
//! [`FeatureAllocation::from_multisets`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GeaError, Result};
use crate::fixed::Fixed;

/// Zero-based element index. Displayed one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub usize);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    /// Builds an id from a one-based position.
    pub fn from_one_based(pos: usize) -> Option<Self> {
        pos.checked_sub(1).map(ElementId)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

/// A non-empty block: at most one entry per element, sorted by element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    entries: Vec<(ElementId, Fixed)>,
    size: Fixed,
}

impl Block {
    /// Builds a block from `(element, weight)` pairs. Repeated elements are
    /// folded by summing their weights. Non-positive weights are rejected.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ElementId, Fixed)>,
    {
        let mut entries: Vec<(ElementId, Fixed)> = Vec::new();
        for (e, w) in pairs {
            if !w.is_positive() {
                return Err(GeaError::NonPositiveWeight {
                    element: e.0 + 1,
                    weight: w.to_string(),
                });
            }
            entries.push((e, w));
        }
        if entries.is_empty() {
            return Err(GeaError::EmptyBlock { block: 0 });
        }
        entries.sort_by_key(|&(e, _)| e);
        entries.dedup_by(|next, kept| {
            if next.0 == kept.0 {
                kept.1 += next.1;
                true
            } else {
                false
            }
        });
        let size = entries.iter().map(|&(_, w)| w).sum();
        Ok(Block { entries, size })
    }

    /// A block built from an element multiset; multiplicities become weights.
    pub fn from_multiset<I>(elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = ElementId>,
    {
        Block::new(elements.into_iter().map(|e| (e, Fixed::ONE)))
    }

    #[inline]
    pub fn entries(&self) -> &[(ElementId, Fixed)] {
        &self.entries
    }

    /// Sum of occurrence weights, exact.
    #[inline]
    pub fn size(&self) -> Fixed {
        self.size
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight_of(&self, e: ElementId) -> Option<Fixed> {
        self.entries
            .binary_search_by_key(&e, |&(id, _)| id)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// Expands back into a sorted element multiset. `None` if any weight is
    /// not a positive integer.
    pub fn to_multiset(&self) -> Option<Vec<ElementId>> {
        let mut out = Vec::new();
        for &(e, w) in &self.entries {
            let count = w.as_integer()?;
            out.extend(std::iter::repeat_n(e, count as usize));
        }
        Some(out)
    }

    fn restrict(&self, keep: impl Fn(ElementId) -> Option<ElementId>) -> Option<Block> {
        let entries: Vec<_> = self
            .entries
            .iter()
            .filter_map(|&(e, w)| keep(e).map(|ne| (ne, w)))
            .collect();
        if entries.is_empty() {
            return None;
        }
        let size = entries.iter().map(|&(_, w)| w).sum();
        Some(Block { entries, size })
    }
}

/// Size of a block; the exact sum of its occurrence weights.
pub fn block_size(b: &Block) -> Fixed {
    b.size()
}

/// A multiset of blocks over the elements `0..n`, with recurrence base `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureAllocation {
    n: usize,
    blocks: Vec<Block>,
    r: Fixed,
}

impl FeatureAllocation {
    pub fn new(n: usize, blocks: Vec<Block>, r: Fixed) -> Result<Self> {
        if !r.is_positive() {
            return Err(GeaError::NonPositiveRecurrenceBase(r.to_string()));
        }
        for b in &blocks {
            if let Some(&(e, _)) = b.entries.iter().find(|&&(e, _)| e.0 >= n) {
                return Err(GeaError::ElementOutOfRange { element: e.0 + 1, n });
            }
        }
        Ok(FeatureAllocation { n, blocks, r })
    }

    /// Embeds multiset blocks: integral weights, recurrence base 1.
    pub fn from_multisets(blocks: &[Vec<ElementId>], n: usize) -> Result<Self> {
        let blocks = blocks
            .iter()
            .enumerate()
            .map(|(i, ms)| {
                Block::from_multiset(ms.iter().copied()).map_err(|e| match e {
                    GeaError::EmptyBlock { .. } => GeaError::EmptyBlock { block: i + 1 },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FeatureAllocation::new(n, blocks, Fixed::ONE)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> Fixed {
        self.r
    }

    #[inline]
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Same blocks under a different recurrence base.
    pub fn with_r(mut self, r: Fixed) -> Result<Self> {
        if !r.is_positive() {
            return Err(GeaError::NonPositiveRecurrenceBase(r.to_string()));
        }
        self.r = r;
        Ok(self)
    }

    /// Largest single occurrence weight, or zero for an empty allocation.
    pub fn max_weight(&self) -> Fixed {
        self.blocks
            .iter()
            .flat_map(|b| b.entries.iter().map(|&(_, w)| w))
            .max()
            .unwrap_or(Fixed::ZERO)
    }

    /// Restricts every block to `subset`, dropping blocks that become empty.
    ///
    /// Elements are re-indexed by ascending original id, so the result is an
    /// allocation over `0..|subset|` with the same recurrence base.
    pub fn project(&self, subset: &[ElementId]) -> Result<FeatureAllocation> {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(GeaError::EmptySubset);
        }
        if let Some(e) = sorted.iter().find(|e| e.0 >= self.n) {
            return Err(GeaError::ElementOutOfRange { element: e.0 + 1, n: self.n });
        }
        let mut remap = vec![None; self.n];
        for (new, old) in sorted.iter().enumerate() {
            remap[old.0] = Some(ElementId(new));
        }
        let blocks = self
            .blocks
            .iter()
            .filter_map(|b| b.restrict(|e| remap[e.0]))
            .collect();
        Ok(FeatureAllocation {
            n: sorted.len(),
            blocks,
            r: self.r,
        })
    }

    /// Cumulative occurrence distribution. Requires integral block sizes.
    pub fn cod(&self) -> Result<Cod> {
        let mut sizes = Vec::with_capacity(self.blocks.len());
        for (i, b) in self.blocks.iter().enumerate() {
            match b.size.as_integer() {
                Some(s) => sizes.push(s as usize),
                None => {
                    return Err(GeaError::NonIntegralSize {
                        block: i + 1,
                        size: b.size.to_string(),
                    })
                }
            }
        }
        let max = sizes.iter().copied().max().unwrap_or(0);
        // histogram, then suffix sums
        let mut phi = vec![0usize; max + 1];
        for s in sizes {
            phi[s] += 1;
        }
        for k in (1..max).rev() {
            phi[k] += phi[k + 1];
        }
        phi.remove(0);
        Ok(Cod { phi })
    }
}

/// Free-function form of [`FeatureAllocation::project`].
pub fn project(g: &FeatureAllocation, subset: &[ElementId]) -> Result<FeatureAllocation> {
    g.project(subset)
}

/// `φ_k`: the number of blocks whose size is at least `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cod {
    phi: Vec<usize>,
}

impl Cod {
    /// `φ_k` for `k ≥ 1`; zero beyond the largest block size.
    pub fn phi(&self, k: usize) -> usize {
        assert!(k >= 1, "phi is indexed from 1");
        self.phi.get(k - 1).copied().unwrap_or(0)
    }

    /// Largest block size (the last `k` with `φ_k > 0`).
    pub fn max_size(&self) -> usize {
        self.phi.len()
    }
}
