use std::collections::BTreeMap;

use super::ClusterSet;
use crate::error::{GeaError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Accuracy {
    pub correct: usize,
    pub total: usize,
}

impl Accuracy {
    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }
}

/// Majority-label accuracy: every cluster predicts its most frequent
/// ground-truth label, ties going to the smallest label.
///
/// Several clusters may predict the same label.
pub fn score_accuracy<L: Ord>(clusters: &ClusterSet, labels: &[L]) -> Result<Accuracy> {
    let assignment = clusters.assignment();
    if labels.len() != assignment.len() {
        return Err(GeaError::LabelCount {
            expected: assignment.len(),
            got: labels.len(),
        });
    }
    let mut counts: Vec<BTreeMap<&L, usize>> = (0..clusters.k()).map(|_| BTreeMap::new()).collect();
    for (&c, label) in assignment.iter().zip(labels) {
        *counts[c].entry(label).or_default() += 1;
    }
    // A cluster's errors are its size minus the chosen label's count, so the
    // error-minimizing label is the most frequent one. BTreeMap iterates in
    // label order and max_by_key keeps the last maximum, hence the reversal.
    let correct = counts
        .iter()
        .map(|m| m.iter().rev().max_by_key(|&(_, &n)| n).map_or(0, |(_, &n)| n))
        .sum();
    Ok(Accuracy {
        correct,
        total: labels.len(),
    })
}
