//! Generalized entropy agglomeration (GEA).
//!
//! Elements are described by a feature allocation: a multiset of blocks in
//! which every element carries a positive rational occurrence number. The
//! agglomeration repeatedly merges the two clusters whose union has the
//! smallest projection entropy and records the merges as a [`Dendrogram`].
//!
//! Numeric tables enter through [`categorize`], which turns each value into
//! a weighted neighbourhood of grid categories.
//!
//! ```
//! use gea_core::{gea, ElementId, FeatureAllocation};
//!
//! let ids = |v: &[usize]| v.iter().map(|&i| ElementId(i)).collect::<Vec<_>>();
//! let g = FeatureAllocation::from_multisets(&[ids(&[0, 1]), ids(&[2])], 3).unwrap();
//! let d = gea(&g).unwrap();
//! assert_eq!(d.cut(2).unwrap().assignment(), &[0, 0, 1]);
//! ```

pub mod agglomeration;
pub mod allocation;
pub mod categorize;
pub mod entropy;
pub mod error;
pub mod fixed;
pub mod io;

pub use agglomeration::{cut, gea, naive::gea_naive, score_accuracy, Accuracy, ClusterSet, Dendrogram, Merge, NodeId};
pub use allocation::{block_size, project, Block, Cod, ElementId, FeatureAllocation};
pub use categorize::{categorize, categorize_detailed, neighborhood, CategorizationParams, Category, NumericDataset};
pub use entropy::{generalized_entropy, generalized_entropy_cod, gpei, subset_entropy, SubsetEntropy};
pub use error::{GeaError, Result};
pub use fixed::Fixed;
