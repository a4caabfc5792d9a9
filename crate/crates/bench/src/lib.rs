//! Fixed benchmark instances for akashi-core.

use std::sync::Arc;

use akashi_core::random::{exact_triple, seeded, series_with_char, torsion_presentation, ExactTriple, TripleKind};
use akashi_core::{LambdaSeries, PresentationModule, Zp};

pub fn ring(p: u64, n: u32) -> Arc<Zp> {
    Zp::new(p, n).expect("valid ring")
}

/// Exact series `p^mu * g * u` with `deg g <= lambda`.
pub fn prepared_series(p: u64, n: u32, d: usize, lambda: usize) -> LambdaSeries {
    let r = ring(p, n);
    series_with_char(&mut seeded(1), &r, d, n - 1, lambda, 2)
}

/// Torsion presentation on `k` generators.
pub fn torsion_module(p: u64, n: u32, d: usize, k: usize) -> PresentationModule {
    torsion_presentation(&mut seeded(2), &ring(p, n), d, k, 1, 1)
}

/// Exact triple with `d` scalar actions.
pub fn triple(p: u64, n: u32, d: usize, kind: TripleKind) -> ExactTriple {
    exact_triple(&mut seeded(3), &ring(p, n), 8, d, kind).expect("triple")
}
