//! Shared fixtures for the criterion benchmarks.

use verlinde_core::{CartanType, RootDatum};

/// Cartan types and levels exercised by the fusion benchmarks.
pub const FUSION_CASES: &[(&str, u32)] = &[("A1", 8), ("A2", 4), ("C2", 3), ("G2", 2)];

pub fn datum(name: &str) -> RootDatum {
    let t: CartanType = name.parse().expect("valid Cartan type");
    RootDatum::new(t)
}
