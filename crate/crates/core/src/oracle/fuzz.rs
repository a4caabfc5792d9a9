//! Seeded random comparison runs.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use rand::Rng;

use super::check_sigma;
use crate::error::{Error, Result};
use crate::koszul::{SigmaBase, SigmaModule};
use crate::matrix::SeriesMatrix;
use crate::modules::PresentationModule;
use crate::padic::Zp;
use crate::random::{residue, seeded, series, sigma_finite, unit_series};
use crate::series::LambdaSeries;

const ATTEMPTS: usize = 100;

/// Summary of a fuzzing run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub seed: u64,
    /// Instances with at least one comparison.
    pub instances: usize,
    /// Instances generated but with nothing comparable.
    pub skipped_instances: usize,
    pub comparisons: usize,
    pub skipped_comparisons: usize,
    /// Each entry names the instance seed that reproduces it.
    pub mismatches: Vec<String>,
}

/// Compares the main path with the oracle on `count` random in-range
/// instances. Instance `i` is generated from seed `seed + i`.
pub fn fuzz(seed: u64, count: usize) -> FuzzReport {
    let mut report = FuzzReport {
        seed,
        ..FuzzReport::default()
    };
    let mut i = 0u64;
    while report.instances < count && i < 20 * count as u64 + 20 {
        let instance_seed = seed.wrapping_add(i);
        i += 1;
        let Ok(m) = random_tiny_sigma(instance_seed) else {
            continue;
        };
        let r = match check_sigma(&m) {
            Ok(r) => r,
            Err(_) => continue,
        };
        report.skipped_comparisons += r.skipped.len();
        if r.compared == 0 {
            report.skipped_instances += 1;
            continue;
        }
        report.instances += 1;
        report.comparisons += r.compared;
        for m in r.mismatches {
            report.mismatches.push(format!("seed {instance_seed}: {m}"));
        }
    }
    report
}

/// A random module with action in the oracle's range: `p` in `{2, 3}`,
/// `N <= 2`, `D <= 3`, `k <= 2`, `d <= 2`, with at most 6561 elements in
/// the truncated base.
pub fn random_tiny_sigma(seed: u64) -> Result<SigmaModule> {
    let mut rng = seeded(seed);
    for _ in 0..ATTEMPTS {
        let p: u64 = if rng.gen_bool(0.5) { 2 } else { 3 };
        let n = rng.gen_range(1..=2u32);
        let kind = rng.gen_range(0..5);
        let k = if kind == 2 { 2 } else { rng.gen_range(1..=2usize) };
        let d = rng.gen_range(0..=2usize);
        let t_degree = rng.gen_range(1..=3usize);
        if p.pow(n * k as u32 * t_degree as u32) > 6561 {
            continue;
        }
        let ring = Zp::new(p, n)?;
        let built = match kind {
            0 => polynomial_sigma(&mut rng, &ring, t_degree, k, d),
            1 => trivial_sigma(&mut rng, &ring, t_degree, k, d),
            2 => corank_one_sigma(&mut rng, &ring, t_degree, d),
            3 => free_sigma(&mut rng, &ring, t_degree, k, d),
            _ => Ok(sigma_finite(&mut rng, &ring, k, n, d)),
        };
        if let Ok(m) = built {
            return Ok(m);
        }
    }
    Err(Error::invalid(format!("no in-range module from seed {seed}")))
}

fn constant_matrix(rng: &mut impl Rng, ring: &Arc<Zp>, t_degree: usize, k: usize) -> SeriesMatrix {
    SeriesMatrix::from_fn(ring, t_degree, k, k, |_, _| {
        LambdaSeries::constant(ring, t_degree, &residue(rng, ring))
    })
}

/// `sum_i c_i B^i` with `B` constant, so entries keep the degree of the `c_i`.
fn poly_in(b: &SeriesMatrix, coeffs: &[LambdaSeries]) -> SeriesMatrix {
    let (ring, td, k) = (b.ring(), b.t_degree(), b.rows());
    let mut acc = SeriesMatrix::zeros(ring, td, k, k);
    let mut power = SeriesMatrix::identity(ring, td, k);
    for c in coeffs {
        acc = acc
            .checked_add(&power.map(|e| e.checked_mul(c).expect("same ring")))
            .expect("same ring");
        power = power.checked_mul(b).expect("same ring");
    }
    acc
}

/// `P = g(B)` and `h_i = u_i(B)` for a constant matrix `B`.
fn polynomial_sigma(rng: &mut impl Rng, ring: &Arc<Zp>, td: usize, k: usize, d: usize) -> Result<SigmaModule> {
    let b = constant_matrix(rng, ring, td, k);
    let top = td - 1;
    let mut g: Vec<LambdaSeries> = (0..rng.gen_range(1..=2)).map(|_| series(rng, ring, td, top)).collect();
    g.push(LambdaSeries::one(ring, td));
    let rel = poly_in(&b, &g);
    let actions = (0..d)
        .map(|_| poly_in(&b, &[unit_series(rng, ring, td, top), series(rng, ring, td, top)]))
        .collect();
    SigmaModule::over_presentation(PresentationModule::new(rel), actions, None)
}

/// A random square presentation with trivial actions.
fn trivial_sigma(rng: &mut impl Rng, ring: &Arc<Zp>, td: usize, k: usize, d: usize) -> Result<SigmaModule> {
    let rel = SeriesMatrix::from_fn(ring, td, k, k, |_, _| series(rng, ring, td, td - 1));
    SigmaModule::trivial(SigmaBase::Presentation(PresentationModule::new(rel)), d)
}

/// `Z_p[[T]]^2` modulo one relation `P`, with `h_i = c_i I + P w_i^T` and
/// lifts `c_i + w_i^T P`; the `w_i` are proportional so the actions commute.
fn corank_one_sigma(rng: &mut impl Rng, ring: &Arc<Zp>, td: usize, d: usize) -> Result<SigmaModule> {
    let top = td - 1;
    let rel = SeriesMatrix::from_fn(ring, td, 2, 1, |_, _| series(rng, ring, td, top));
    let w: Vec<BigUint> = (0..2).map(|_| residue(rng, ring)).collect();
    let mut actions = Vec::new();
    let mut lifts = Vec::new();
    for _ in 0..d {
        let c = unit_series(rng, ring, td, top);
        let alpha = ring.element(BigInt::from(residue(rng, ring)));
        let wi: Vec<BigUint> = w.iter().map(|x| ring.mul(x, alpha.value())).collect();
        let h = SeriesMatrix::from_fn(ring, td, 2, 2, |i, j| {
            let term = rel
                .get(i, 0)
                .scale(&ring.element(BigInt::from(wi[j].clone())))
                .expect("same ring");
            if i == j {
                c.checked_add(&term).expect("same ring")
            } else {
                term
            }
        });
        let mut q = c.clone();
        for (j, x) in wi.iter().enumerate() {
            let term = rel
                .get(j, 0)
                .scale(&ring.element(BigInt::from(x.clone())))
                .expect("same ring");
            q = q.checked_add(&term).expect("same ring");
        }
        actions.push(h);
        lifts.push(SeriesMatrix::from_fn(ring, td, 1, 1, |_, _| q.clone()));
    }
    SigmaModule::over_presentation(PresentationModule::new(rel), actions, Some(lifts))
}

/// A free base with an upper triangular first action and a second action
/// `a h_1 + b`.
fn free_sigma(rng: &mut impl Rng, ring: &Arc<Zp>, td: usize, k: usize, d: usize) -> Result<SigmaModule> {
    let top = td - 1;
    let h1 = SeriesMatrix::from_fn(ring, td, k, k, |i, j| {
        if i == j {
            unit_series(rng, ring, td, top)
        } else if i < j {
            series(rng, ring, td, top)
        } else {
            LambdaSeries::zero(ring, td)
        }
    });
    let mut actions = vec![h1.clone()];
    if d == 2 {
        let a = ring.element(BigInt::from(residue(rng, ring)));
        let b = LambdaSeries::constant(ring, td, &residue(rng, ring));
        let h2 = SeriesMatrix::from_fn(ring, td, k, k, |i, j| {
            let x = h1.get(i, j).scale(&a).expect("same ring");
            if i == j {
                x.checked_add(&b).expect("same ring")
            } else {
                x
            }
        });
        actions.push(h2);
    }
    actions.truncate(d);
    SigmaModule::over_presentation(PresentationModule::free(ring, td, k), actions, None)
}
