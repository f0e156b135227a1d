//! Numerical categorization: numeric rows to a feature allocation.
//!
//! Each value is snapped to the `1/d` grid of its column and becomes the
//! central category of weight 1. The `2m` neighbouring grid points at
//! offsets `μ = ±1..±m` get weight `(1 - |μ|/(m+1))^γ`. All contributions
//! that land on the same grid point of the same column form one block.

use std::collections::BTreeMap;

use crate::allocation::{Block, ElementId, FeatureAllocation};
use crate::error::{GeaError, Result};
use crate::fixed::Fixed;

/// Rows of numeric values with optional ground-truth labels.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericDataset {
    dims: Vec<String>,
    rows: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
}

impl NumericDataset {
    pub fn new(dims: Vec<String>, rows: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dims.len() {
                return Err(GeaError::InvalidParams(format!(
                    "row {} has {} values, expected {}",
                    i + 1,
                    row.len(),
                    dims.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(GeaError::InvalidNumber(format!("row {} column {:?}: {}", i + 1, dims[j], row[j])));
            }
        }
        if let Some(l) = &labels {
            if l.len() != rows.len() {
                return Err(GeaError::LabelCount { expected: rows.len(), got: l.len() });
            }
        }
        Ok(NumericDataset { dims, rows, labels })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn dims(&self) -> &[String] {
        &self.dims
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Rescales each column to `[0, 1]`. Constant columns map to zero.
    pub fn min_max_scaled(&self) -> NumericDataset {
        let mut rows = self.rows.clone();
        for j in 0..self.dims.len() {
            let (lo, hi) = self
                .rows
                .iter()
                .map(|r| r[j])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            let span = hi - lo;
            for row in &mut rows {
                row[j] = if span > 0.0 { (row[j] - lo) / span } else { 0.0 };
            }
        }
        NumericDataset {
            dims: self.dims.clone(),
            rows,
            labels: self.labels.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CategorizationParams {
    /// Grid points per unit.
    pub d: u32,
    /// Neighbours generated on each side of the central category.
    pub m: u32,
    /// Exponent applied to the linear neighbour weights.
    pub gamma: f64,
    /// Recurrence base of the resulting allocation.
    pub r: Fixed,
}

impl CategorizationParams {
    pub fn new(d: u32, m: u32, gamma: f64, r: Fixed) -> Result<Self> {
        let p = CategorizationParams { d, m, gamma, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(GeaError::InvalidParams("d must be at least 1".into()));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(GeaError::InvalidParams(format!("gamma must be a non-negative number, got {}", self.gamma)));
        }
        if !self.r.is_positive() {
            return Err(GeaError::NonPositiveRecurrenceBase(self.r.to_string()));
        }
        Ok(())
    }

    /// Weight at grid offset `mu`, rounded to the nearest millionth.
    pub fn weight(&self, mu: i64) -> Fixed {
        if mu == 0 {
            return Fixed::ONE;
        }
        let w = (1.0 - mu.unsigned_abs() as f64 / (f64::from(self.m) + 1.0)).powf(self.gamma);
        Fixed::from_f64(w).expect("weight lies in [0, 1]")
    }
}

/// One grid point of a column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Category {
    pub dim: usize,
    /// Position on the grid: the category's value times `d`.
    pub grid_value: i64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neighbor {
    pub offset: i64,
    /// `x + offset / d`.
    pub value: f64,
    pub weight: Fixed,
}

/// The central category of `x` and its `2m` neighbours, by ascending offset.
/// Neighbours whose rounded weight is zero are left out.
pub fn neighborhood(x: f64, params: &CategorizationParams) -> Vec<Neighbor> {
    let m = i64::from(params.m);
    (-m..=m)
        .map(|offset| Neighbor {
            offset,
            value: x + offset as f64 / f64::from(params.d),
            weight: params.weight(offset),
        })
        .filter(|nb| nb.weight.is_positive())
        .collect()
}

/// Index of the grid point nearest to `x`, halves away from zero.
pub fn snap(x: f64, d: u32) -> i64 {
    (x * f64::from(d)).round() as i64
}

/// An allocation together with the category behind each block.
#[derive(Clone, Debug)]
pub struct Categorization {
    pub allocation: FeatureAllocation,
    /// `categories[i]` is the grid point of block `i`.
    pub categories: Vec<Category>,
}

/// Builds one block per occupied category, ordered by `(dim, grid_value)`.
pub fn categorize_detailed(ds: &NumericDataset, params: &CategorizationParams) -> Result<Categorization> {
    params.validate()?;
    let offsets = neighborhood(0.0, params);
    let mut cats: BTreeMap<Category, Vec<(ElementId, Fixed)>> = BTreeMap::new();
    for (e, row) in ds.rows().iter().enumerate() {
        for (dim, &v) in row.iter().enumerate() {
            let centre = snap(v, params.d);
            for nb in &offsets {
                let entries = cats
                    .entry(Category {
                        dim,
                        grid_value: centre + nb.offset,
                    })
                    .or_default();
                if entries.last().is_some_and(|&(last, _)| last == ElementId(e)) {
                    return Err(GeaError::Internal(format!(
                        "element {} contributes twice to category ({dim}, {})",
                        e + 1,
                        centre + nb.offset
                    )));
                }
                entries.push((ElementId(e), nb.weight));
            }
        }
    }
    let mut categories = Vec::with_capacity(cats.len());
    let mut blocks = Vec::with_capacity(cats.len());
    for (cat, entries) in cats {
        categories.push(cat);
        blocks.push(Block::new(entries)?);
    }
    let allocation = FeatureAllocation::new(ds.n(), blocks, params.r)?;
    Ok(Categorization { allocation, categories })
}

pub fn categorize(ds: &NumericDataset, params: &CategorizationParams) -> Result<FeatureAllocation> {
    categorize_detailed(ds, params).map(|c| c.allocation)
}
