//! Seeded random instances: series, modules, modules with `H`-action and
//! short exact sequences.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charel::CharElement;
use crate::error::{Error, Result};
use crate::koszul::{ModuleMap, SigmaModule};
use crate::matrix::SeriesMatrix;
use crate::modules::{FiniteFormModule, PresentationModule};
use crate::padic::{PadicInt, Zp};
use crate::series::LambdaSeries;
use crate::zpn::ZpnMatrix;

pub type InstanceRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const ATTEMPTS: usize = 200;

fn modulus_u64(ring: &Zp) -> Option<u64> {
    u64::try_from(ring.modulus().clone()).ok()
}

/// Uniform element of `Z/p^N`.
pub fn residue(rng: &mut impl Rng, ring: &Arc<Zp>) -> BigUint {
    match modulus_u64(ring) {
        Some(m) => BigUint::from(rng.gen_range(0..m)),
        None => {
            let bits = ring.modulus().bits() + 64;
            let words: Vec<u32> = (0..bits.div_ceil(32)).map(|_| rng.gen()).collect();
            BigUint::from_slice(&words) % ring.modulus()
        }
    }
}

/// Uniform unit of `Z_p` modulo `p^N`.
pub fn unit(rng: &mut impl Rng, ring: &Arc<Zp>) -> PadicInt {
    loop {
        let x = ring.element(BigInt::from(residue(rng, ring)));
        if x.is_unit() {
            return x;
        }
    }
}

/// Uniform principal unit `1 + p x`.
pub fn principal_unit(rng: &mut impl Rng, ring: &Arc<Zp>) -> PadicInt {
    let x = BigInt::from(residue(rng, ring));
    ring.element(1 + BigInt::from(ring.prime()) * x)
}

/// Principal unit `1 + p x` with `x` a unit.
pub fn exact_principal_unit(rng: &mut impl Rng, ring: &Arc<Zp>) -> PadicInt {
    let x = BigInt::from(unit(rng, ring).value().clone());
    ring.element(1 + BigInt::from(ring.prime()) * x)
}

/// Exact polynomial of degree at most `max_degree` (below `D`).
pub fn series(rng: &mut impl Rng, ring: &Arc<Zp>, t_degree: usize, max_degree: usize) -> LambdaSeries {
    let len = (max_degree + 1).min(t_degree);
    let coeffs: Vec<BigInt> = (0..len).map(|_| BigInt::from(residue(rng, ring))).collect();
    LambdaSeries::new(ring, t_degree, coeffs).expect("coefficients fit")
}

/// Series with all `D` coefficients random, marked as truncated.
pub fn truncated_series(rng: &mut impl Rng, ring: &Arc<Zp>, t_degree: usize) -> LambdaSeries {
    let coeffs: Vec<BigInt> = (0..t_degree).map(|_| BigInt::from(residue(rng, ring))).collect();
    LambdaSeries::truncated(ring, t_degree, coeffs).expect("coefficients fit")
}

/// Exact polynomial with unit constant term.
pub fn unit_series(rng: &mut impl Rng, ring: &Arc<Zp>, t_degree: usize, max_degree: usize) -> LambdaSeries {
    let mut coeffs: Vec<BigInt> = vec![BigInt::from(unit(rng, ring).value().clone())];
    for _ in 1..(max_degree + 1).min(t_degree) {
        coeffs.push(BigInt::from(residue(rng, ring)));
    }
    LambdaSeries::new(ring, t_degree, coeffs).expect("coefficients fit")
}

/// Coefficients of a random distinguished polynomial of degree `lambda`.
pub fn distinguished_coeffs(rng: &mut impl Rng, ring: &Arc<Zp>, lambda: usize) -> Vec<BigInt> {
    let p = BigInt::from(ring.prime());
    let mut c: Vec<BigInt> = (0..lambda).map(|_| &p * BigInt::from(residue(rng, ring))).collect();
    c.push(BigInt::from(1));
    c
}

pub fn char_element(rng: &mut impl Rng, ring: &Arc<Zp>, max_mu: u32, max_lambda: usize) -> CharElement {
    let mu = rng.gen_range(0..=max_mu);
    let lambda = rng.gen_range(0..=max_lambda);
    CharElement::new(ring, mu, distinguished_coeffs(rng, ring, lambda)).expect("distinguished")
}

/// `p^mu * g * u` for random `mu <= max_mu`, distinguished `g` of degree
/// `<= max_lambda` and a polynomial unit `u`.
pub fn series_with_char(
    rng: &mut impl Rng,
    ring: &Arc<Zp>,
    t_degree: usize,
    max_mu: u32,
    max_lambda: usize,
    unit_degree: usize,
) -> LambdaSeries {
    let f = char_element(rng, ring, max_mu, max_lambda);
    let u = unit_series(rng, ring, t_degree, unit_degree);
    f.to_series(ring, t_degree)
        .expect("fits")
        .checked_mul(&u)
        .expect("same ring")
}

fn unitriangular(
    rng: &mut impl Rng,
    ring: &Arc<Zp>,
    t_degree: usize,
    k: usize,
    upper: bool,
    max_degree: usize,
) -> SeriesMatrix {
    SeriesMatrix::from_fn(ring, t_degree, k, k, |i, j| {
        if i == j {
            LambdaSeries::one(ring, t_degree)
        } else if (i < j) == upper {
            series(rng, ring, t_degree, max_degree)
        } else {
            LambdaSeries::zero(ring, t_degree)
        }
    })
}

/// `L * diag(f_1, ..., f_k) * U` with unitriangular `L`, `U`: a torsion module
/// with characteristic element `prod f_i`, presented by a dense matrix.
pub fn torsion_presentation(
    rng: &mut impl Rng,
    ring: &Arc<Zp>,
    t_degree: usize,
    k: usize,
    max_mu: u32,
    max_lambda: usize,
) -> PresentationModule {
    let diag: Vec<LambdaSeries> = (0..k)
        .map(|_| series_with_char(rng, ring, t_degree, max_mu, max_lambda, 1))
        .collect();
    let d = SeriesMatrix::diagonal(ring, t_degree, &diag).expect("same ring");
    let l = unitriangular(rng, ring, t_degree, k, false, 1);
    let u = unitriangular(rng, ring, t_degree, k, true, 1);
    let p = l.checked_mul(&d).and_then(|x| x.checked_mul(&u)).expect("same ring");
    PresentationModule::new(p)
}

/// Square presentation with arbitrary polynomial entries.
pub fn presentation(
    rng: &mut impl Rng,
    ring: &Arc<Zp>,
    t_degree: usize,
    k: usize,
    max_degree: usize,
) -> PresentationModule {
    PresentationModule::new(SeriesMatrix::from_fn(ring, t_degree, k, k, |_, _| {
        series(rng, ring, t_degree, max_degree)
    }))
}

/// Finite module `sum Z/p^(n_j)` with `T` acting by a matrix that is
/// strictly upper triangular modulo `p`.
pub fn finite_form(rng: &mut impl Rng, ring: &Arc<Zp>, k: usize, max_order: u32) -> FiniteFormModule {
    let max_order = max_order.min(ring.precision()).max(1);
    let orders: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=max_order)).collect();
    let p = BigUint::from(ring.prime());
    let theta = ZpnMatrix::from_fn(ring, k, k, |i, j| {
        let shift = orders[i].saturating_sub(orders[j]);
        let base = ring.p_pow(shift);
        let x = residue(rng, ring);
        let x = if i < j { x } else { x * &p };
        if shift >= ring.precision() {
            BigUint::default()
        } else {
            ring.mul(&base, &x)
        }
    });
    FiniteFormModule::new(ring, orders, theta).expect("well defined and nilpotent")
}

/// `u * (I + x_1 B + x_2 B^2)`-style element of the commutative algebra
/// generated by `b`.
fn polynomial_in(rng: &mut impl Rng, ring: &Arc<Zp>, b: &ZpnMatrix, degree: usize, unit_constant: bool) -> ZpnMatrix {
    let k = b.rows();
    let c0 = if unit_constant {
        unit(rng, ring).value().clone()
    } else {
        residue(rng, ring)
    };
    let mut acc = ZpnMatrix::from_fn(ring, k, k, |i, j| if i == j { c0.clone() } else { BigUint::default() });
    let mut power = ZpnMatrix::identity(ring, k);
    for _ in 0..degree {
        power = power.mul(b);
        let c = residue(rng, ring);
        acc = ZpnMatrix::from_fn(ring, k, k, |i, j| {
            ring.add(acc.get(i, j), &ring.mul(&c, power.get(i, j)))
        });
    }
    acc
}

/// A finite module with `d` commuting actions, each a polynomial in `theta`
/// with unit constant term.
pub fn sigma_finite(rng: &mut impl Rng, ring: &Arc<Zp>, k: usize, max_order: u32, d: usize) -> SigmaModule {
    let base = finite_form(rng, ring, k, max_order);
    let actions: Vec<ZpnMatrix> = (0..d)
        .map(|_| polynomial_in(rng, ring, base.theta(), 2, true))
        .collect();
    SigmaModule::over_finite(base, actions).expect("polynomials in theta commute")
}

/// `Z_p[[T]]^k / (T - C)` for an integer matrix `C` nilpotent modulo `p`: a
/// module free of rank `k` over `Z_p`, with actions that are polynomials in
/// `C` with unit constant term.
pub fn sigma_zp_free(rng: &mut impl Rng, ring: &Arc<Zp>, t_degree: usize, k: usize, d: usize) -> SigmaModule {
    let p = BigUint::from(ring.prime());
    let c = ZpnMatrix::from_fn(ring, k, k, |i, j| {
        let x = residue(rng, ring);
        if i < j {
            x
        } else {
            x * &p
        }
    });
    let to_series = |m: &ZpnMatrix| {
        SeriesMatrix::from_fn(ring, t_degree, k, k, |i, j| {
            LambdaSeries::constant(ring, t_degree, m.get(i, j))
        })
    };
    let t = SeriesMatrix::scalar(&LambdaSeries::t(ring, t_degree), k);
    let rel = t.checked_sub(&to_series(&c)).expect("same ring");
    let actions: Vec<SeriesMatrix> = (0..d)
        .map(|_| to_series(&polynomial_in(rng, ring, &c, 2, true)))
        .collect();
    SigmaModule::over_presentation(PresentationModule::new(rel), actions, None).expect("commuting actions")
}

fn series_polynomial_in(b: &SeriesMatrix, coeffs: &[LambdaSeries]) -> SeriesMatrix {
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

/// A presented module `Z_p[[T]]^k / g(B)` with `d` actions `h_i = u_i(B)`,
/// where `B` is a random matrix and `g`, `u_i` are polynomials with series
/// coefficients, so all actions lie in the commutative ring `Z_p[[T]][B]`.
pub fn sigma_presentation(
    rng: &mut impl Rng,
    ring: &Arc<Zp>,
    t_degree: usize,
    k: usize,
    d: usize,
) -> Result<SigmaModule> {
    for _ in 0..ATTEMPTS {
        let b = SeriesMatrix::from_fn(ring, t_degree, k, k, |_, _| series(rng, ring, t_degree, 1));
        let g_degree = rng.gen_range(1..=2);
        let mut g: Vec<LambdaSeries> = (0..g_degree).map(|_| series(rng, ring, t_degree, 1)).collect();
        g.push(LambdaSeries::one(ring, t_degree));
        let rel = series_polynomial_in(&b, &g);
        let actions: Vec<SeriesMatrix> = (0..d)
            .map(|_| {
                let c = vec![unit_series(rng, ring, t_degree, 1), series(rng, ring, t_degree, 1)];
                series_polynomial_in(&b, &c)
            })
            .collect();
        let base = PresentationModule::new(rel);
        if base.char_element().is_err() {
            continue;
        }
        if let Ok(m) = SigmaModule::over_presentation(base, actions, None) {
            return Ok(m);
        }
    }
    Err(Error::invalid("no random module with invertible actions found"))
}

/// How an exact triple is glued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleKind {
    /// `M = L + N` with block-diagonal actions.
    Split,
    /// `M` a nonsplit extension as `Z_p[[T]]`-modules, scalar `H`-actions.
    LambdaNonsplit,
    /// `M = L + N` as `Z_p[[T]]`-modules, `N` free, with upper triangular
    /// `H`-actions.
    ActionNonsplit,
}

/// `0 -> L --alpha--> M --beta--> N -> 0`.
#[derive(Debug, Clone)]
pub struct ExactTriple {
    pub kind: TripleKind,
    pub l: SigmaModule,
    pub m: SigmaModule,
    pub n: SigmaModule,
    pub alpha: ModuleMap,
    pub beta: ModuleMap,
}

fn inclusion_maps(ring: &Arc<Zp>, t_degree: usize, kl: usize, kn: usize) -> (ModuleMap, ModuleMap) {
    let one = LambdaSeries::one(ring, t_degree);
    let zero = LambdaSeries::zero(ring, t_degree);
    let alpha = SeriesMatrix::from_fn(ring, t_degree, kl + kn, kl, |i, j| {
        if i == j {
            one.clone()
        } else {
            zero.clone()
        }
    });
    let beta = SeriesMatrix::from_fn(ring, t_degree, kn, kl + kn, |i, j| {
        if j == kl + i {
            one.clone()
        } else {
            zero.clone()
        }
    });
    (ModuleMap::Series(alpha), ModuleMap::Series(beta))
}

/// Scalar series `u_i = 1 + p x_i + T y_i` with `x_i`, `y_i(0)` units, acting
/// on every module of a triple.
fn scalar_actions(rng: &mut impl Rng, ring: &Arc<Zp>, t_degree: usize, d: usize) -> Vec<LambdaSeries> {
    (0..d)
        .map(|_| {
            let u = exact_principal_unit(rng, ring);
            let t_part = unit_series(rng, ring, t_degree, 1)
                .checked_mul(&LambdaSeries::t(ring, t_degree))
                .expect("same ring");
            LambdaSeries::constant(ring, t_degree, u.value())
                .checked_add(&t_part)
                .expect("same ring")
        })
        .collect()
}

fn with_scalars(base: PresentationModule, scalars: &[LambdaSeries]) -> Result<SigmaModule> {
    let k = base.generators();
    let actions = scalars.iter().map(|u| SeriesMatrix::scalar(u, k)).collect();
    SigmaModule::over_presentation(base, actions, None)
}

pub fn exact_triple(
    rng: &mut impl Rng,
    ring: &Arc<Zp>,
    t_degree: usize,
    d: usize,
    kind: TripleKind,
) -> Result<ExactTriple> {
    for _ in 0..ATTEMPTS {
        if let Ok(t) = try_exact_triple(rng, ring, t_degree, d, kind) {
            return Ok(t);
        }
    }
    Err(Error::invalid("no exact triple with certified torsion homology found"))
}

fn try_exact_triple(
    rng: &mut impl Rng,
    ring: &Arc<Zp>,
    t_degree: usize,
    d: usize,
    kind: TripleKind,
) -> Result<ExactTriple> {
    match kind {
        TripleKind::Split | TripleKind::LambdaNonsplit => {
            let kl = 1;
            let kn = 1;
            let pl = torsion_presentation(rng, ring, t_degree, kl, 1, 1);
            let pn = torsion_presentation(rng, ring, t_degree, kn, 1, 1);
            let x = if kind == TripleKind::Split {
                SeriesMatrix::zeros(ring, t_degree, kl, kn)
            } else {
                SeriesMatrix::from_fn(ring, t_degree, kl, kn, |_, _| series(rng, ring, t_degree, 1))
            };
            let zero = SeriesMatrix::zeros(ring, t_degree, kn, kl);
            let pm = SeriesMatrix::from_blocks(pl.relations(), &x, &zero, pn.relations())?;
            let scalars = scalar_actions(rng, ring, t_degree, d);
            let (alpha, beta) = inclusion_maps(ring, t_degree, kl, kn);
            Ok(ExactTriple {
                kind,
                l: with_scalars(pl, &scalars)?,
                m: with_scalars(PresentationModule::new(pm), &scalars)?,
                n: with_scalars(pn, &scalars)?,
                alpha,
                beta,
            })
        }
        TripleKind::ActionNonsplit => {
            let kl = 1;
            let kn = 1;
            let l_base = torsion_presentation(rng, ring, t_degree, kl, 1, 1);
            let n_base = PresentationModule::free(ring, t_degree, kn);
            let scalar = scalar_actions(rng, ring, t_degree, 1).remove(0);
            let h_l = SeriesMatrix::scalar(&scalar, kl);
            let h_n = SeriesMatrix::from_fn(ring, t_degree, kn, kn, |i, j| {
                if i == j {
                    unit_series(rng, ring, t_degree, 1)
                } else if i < j {
                    series(rng, ring, t_degree, 1)
                } else {
                    LambdaSeries::zero(ring, t_degree)
                }
            });
            let y = SeriesMatrix::from_fn(ring, t_degree, kl, kn, |_, _| series(rng, ring, t_degree, 1));
            let zero = SeriesMatrix::zeros(ring, t_degree, kn, kl);
            let h_m = SeriesMatrix::from_blocks(&h_l, &y, &zero, &h_n)?;
            let m_rel = SeriesMatrix::from_blocks(
                l_base.relations(),
                &SeriesMatrix::zeros(ring, t_degree, kl, 0),
                &SeriesMatrix::zeros(ring, t_degree, kn, kl),
                &SeriesMatrix::zeros(ring, t_degree, kn, 0),
            )?;
            let u2 = exact_principal_unit(rng, ring);
            let e = rng.gen_range(1..=2u64);
            let second = |h: &SeriesMatrix| {
                let mut acc = SeriesMatrix::identity(ring, t_degree, h.rows());
                for _ in 0..e {
                    acc = acc.checked_mul(h).expect("same ring");
                }
                acc.map(|x| x.scale(&u2).expect("same ring"))
            };
            let actions = |h: &SeriesMatrix| {
                let mut v = vec![h.clone()];
                if d == 2 {
                    v.push(second(h));
                }
                v.truncate(d);
                v
            };
            let lift_l = |h: &SeriesMatrix| actions(h);
            let l = SigmaModule::over_presentation(l_base, actions(&h_l), Some(lift_l(&h_l)))?;
            let n = SigmaModule::over_presentation(n_base, actions(&h_n), None)?;
            let m = SigmaModule::over_presentation(PresentationModule::new(m_rel), actions(&h_m), Some(lift_l(&h_l)))?;
            let (alpha, beta) = inclusion_maps(ring, t_degree, kl, kn);
            Ok(ExactTriple {
                kind,
                l,
                m,
                n,
                alpha,
                beta,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::{akashi_series, verify_multiplicativity, AkashiOptions};

    #[test]
    fn generators_are_deterministic() {
        let r = Zp::new(3, 3).unwrap();
        let a = series(&mut seeded(7), &r, 6, 4);
        let b = series(&mut seeded(7), &r, 6, 4);
        assert_eq!(a, b);
    }

    #[test]
    fn torsion_presentations_have_the_planted_char() {
        let r = Zp::new(5, 3).unwrap();
        let mut rng = seeded(1);
        for _ in 0..10 {
            let m = torsion_presentation(&mut rng, &r, 10, 2, 1, 2);
            let f = m.char_element().unwrap();
            assert!(f.mu() <= 2 && f.lambda() <= 4);
        }
    }

    #[test]
    fn finite_forms_validate() {
        let r = Zp::new(2, 3).unwrap();
        let mut rng = seeded(2);
        for _ in 0..20 {
            let m = finite_form(&mut rng, &r, 3, 3);
            assert!(m.char_element().unwrap().is_one());
        }
    }

    #[test]
    fn zp_free_modules_have_trivial_akashi() {
        let r = Zp::new(3, 6).unwrap();
        let mut rng = seeded(3);
        for _ in 0..5 {
            let m = sigma_zp_free(&mut rng, &r, 8, 2, 1);
            let res = akashi_series(&m, AkashiOptions::default()).unwrap();
            assert!(res.akashi.is_one());
        }
    }

    #[test]
    fn triples_are_exact() {
        let r = Zp::new(3, 3).unwrap();
        let mut rng = seeded(4);
        for kind in [
            TripleKind::Split,
            TripleKind::LambdaNonsplit,
            TripleKind::ActionNonsplit,
        ] {
            let t = exact_triple(&mut rng, &r, 8, 1, kind).unwrap();
            let opts = AkashiOptions { stability_check: false };
            let rep = verify_multiplicativity(&t.l, &t.m, &t.n, &t.alpha, &t.beta, opts).unwrap();
            assert!(rep.holds, "{kind:?}");
        }
    }
}
