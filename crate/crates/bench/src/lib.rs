//! Fixtures shared by the criterion benches.

use std::path::PathBuf;

use gea_core::{categorize, io, CategorizationParams, FeatureAllocation, Fixed};

pub fn iris_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/iris.csv")
}

/// Iris categorized with `d=10, m=5, γ=3, r=1`.
pub fn iris_allocation() -> FeatureAllocation {
    let ds = io::read_csv(iris_path(), Some("species")).expect("vendored iris.csv");
    let params = CategorizationParams::new(10, 5, 3.0, Fixed::ONE).expect("valid params");
    categorize(&ds, &params).expect("categorizes")
}
