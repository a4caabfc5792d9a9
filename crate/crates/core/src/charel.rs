//! Characteristic elements: classes in `Z_p[[T]]` modulo units, stored as
//! `p^mu * g(T)` with `g` a distinguished polynomial.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{PadicInt, Zp};
use crate::poly;
use crate::series::{write_poly, LambdaSeries};
use crate::zpn::{kernel, smith, solve, ZpnMatrix};

/// `p^mu * g(T)` with `g` monic and all lower coefficients divisible by `p`.
///
/// The coefficients of `g` are known modulo `p^precision`. Two elements
/// compare equal when `mu` and `lambda` agree and the coefficients agree
/// modulo the coarser of the two precisions.
#[derive(Debug, Clone)]
pub struct CharElement {
    mu: u32,
    ring: Arc<Zp>,
    dist: Vec<BigUint>,
}

impl CharElement {
    pub(crate) fn from_parts(mu: u32, ring: &Arc<Zp>, dist: Vec<BigUint>) -> CharElement {
        debug_assert!(dist.last().is_some_and(|c| c.is_one()));
        CharElement {
            mu,
            ring: Arc::clone(ring),
            dist,
        }
    }

    /// The class of `1`.
    pub fn one(ring: &Arc<Zp>) -> CharElement {
        Self::from_parts(0, ring, vec![BigUint::one()])
    }

    /// The class of `T`.
    pub fn t(ring: &Arc<Zp>) -> CharElement {
        Self::from_parts(0, ring, vec![BigUint::zero(), BigUint::one()])
    }

    /// The class of `p^mu`.
    pub fn p_power(ring: &Arc<Zp>, mu: u32) -> CharElement {
        Self::from_parts(mu, ring, vec![BigUint::one()])
    }

    /// Validating constructor from `mu` and the coefficients of `g` (lowest
    /// degree first; a trailing `1` must be present).
    pub fn new<I, C>(ring: &Arc<Zp>, mu: u32, distinguished: I) -> Result<CharElement>
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let dist: Vec<BigUint> = distinguished
            .into_iter()
            .map(|c| ring.reduce_signed(&c.into()))
            .collect();
        let dist = poly::trim(dist);
        match dist.last() {
            Some(c) if c.is_one() => {}
            _ => return Err(Error::invalid("distinguished polynomial must be monic")),
        }
        if dist[..dist.len() - 1].iter().any(|c| ring.is_unit(c)) {
            return Err(Error::invalid(
                "non-leading coefficients of a distinguished polynomial must be divisible by p",
            ));
        }
        Ok(Self::from_parts(mu, ring, dist))
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn lambda(&self) -> usize {
        self.dist.len() - 1
    }

    pub fn prime(&self) -> u64 {
        self.ring.prime()
    }

    /// p-adic precision of the distinguished polynomial's coefficients.
    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn ring(&self) -> &Arc<Zp> {
        &self.ring
    }

    pub fn distinguished(&self) -> Vec<PadicInt> {
        self.dist
            .iter()
            .map(|c| PadicInt::from_raw(Arc::clone(&self.ring), c.clone()))
            .collect()
    }

    pub(crate) fn raw(&self) -> &[BigUint] {
        &self.dist
    }

    /// The distinguished polynomial with balanced coefficients, e.g.
    /// `T^2 - 5*T + 3`.
    pub fn distinguished_string(&self) -> String {
        Poly(&self.ring, self.raw()).to_string()
    }

    pub fn is_one(&self) -> bool {
        self.mu == 0 && self.lambda() == 0
    }

    /// Precision that matters when combining with another element: a
    /// polynomial of degree 0 carries no uncertain digits.
    fn effective_precision(&self) -> Option<u32> {
        (self.lambda() > 0).then(|| self.precision())
    }

    fn combined_ring(&self, other: &CharElement) -> Result<Arc<Zp>> {
        if self.prime() != other.prime() {
            return Err(Error::mismatch(format!(
                "characteristic elements for p = {} and p = {}",
                self.prime(),
                other.prime()
            )));
        }
        let k = match (self.effective_precision(), other.effective_precision()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => self.precision().min(other.precision()),
        };
        Ok(if k == self.precision() {
            Arc::clone(&self.ring)
        } else if k == other.precision() {
            Arc::clone(&other.ring)
        } else {
            self.ring.at_precision(k)
        })
    }

    /// Representative at a coarser precision.
    pub fn at_precision(&self, precision: u32) -> Result<CharElement> {
        if precision == 0 || precision > self.precision() {
            return Err(Error::invalid(format!(
                "cannot move a characteristic element from precision {} to {precision}",
                self.precision()
            )));
        }
        let ring = self.ring.at_precision(precision);
        let dist = poly::reduce(&ring, &self.dist);
        Ok(Self::from_parts(self.mu, &ring, dist))
    }

    pub fn checked_mul(&self, other: &CharElement) -> Result<CharElement> {
        let ring = self.combined_ring(other)?;
        let a = poly::reduce(&ring, &self.dist);
        let b = poly::reduce(&ring, &other.dist);
        Ok(Self::from_parts(
            self.mu + other.mu,
            &ring,
            poly::mul(&ring, &a, &b, None),
        ))
    }

    pub fn pow(&self, e: u32) -> CharElement {
        let dist = poly::pow(&self.ring, &self.dist, u64::from(e));
        Self::from_parts(self.mu * e, &self.ring, dist)
    }

    /// Exact quotient `self / other`, failing when `other` does not divide
    /// `self` at the available precision.
    pub fn checked_div(&self, other: &CharElement) -> Result<CharElement> {
        let ring = self.combined_ring(other)?;
        if other.mu > self.mu {
            return Err(Error::NonIntegralAkashi(format!(
                "p^{} does not divide p^{} in ({self}) / ({other})",
                other.mu, self.mu
            )));
        }
        let a = poly::reduce(&ring, &self.dist);
        let b = poly::reduce(&ring, &other.dist);
        let (q, r) = poly::divrem_monic(&ring, &a, &b);
        if !r.is_empty() {
            return Err(Error::NonIntegralAkashi(format!(
                "{} does not divide {} modulo p^{}",
                Poly(&ring, &b),
                Poly(&ring, &a),
                ring.precision()
            )));
        }
        Ok(Self::from_parts(self.mu - other.mu, &ring, q))
    }

    /// Greatest common divisor in `Z_p[[T]]`: `p^min(mu)` times the gcd of the
    /// distinguished parts.
    pub fn gcd(&self, other: &CharElement) -> Result<CharElement> {
        let ring = self.combined_ring(other)?;
        let a = poly::reduce(&ring, &self.dist);
        let b = poly::reduce(&ring, &other.dist);
        let (ring, g) = distinguished_gcd(&ring, a, b);
        Ok(Self::from_parts(self.mu.min(other.mu), &ring, g))
    }

    /// Multiplicity of `T` as a factor of the distinguished polynomial.
    pub fn ord_at_zero(&self) -> usize {
        self.dist.iter().position(|c| !c.is_zero()).expect("monic")
    }

    /// Writing `g = T^r * h` with `h(0) != 0`, the valuation of `p^mu * h(0)`.
    pub fn leading_term_valuation(&self) -> u32 {
        let r = self.ord_at_zero();
        self.mu + self.ring.val(&self.dist[r]).expect("nonzero by choice of r")
    }

    /// `p^mu * g` as a series at `(N, D)`.
    pub fn to_series(&self, ring: &Arc<Zp>, t_degree: usize) -> Result<LambdaSeries> {
        if ring.prime() != self.prime() {
            return Err(Error::mismatch("series ring has a different prime"));
        }
        let scale = ring.p_pow(self.mu);
        let coeffs = self.dist.iter().map(|c| ring.mul(c, &scale)).collect();
        LambdaSeries::from_raw(ring, t_degree, coeffs)
    }
}

/// Gcd of two monic distinguished polynomials over `Z/p^k`.
pub(crate) fn distinguished_gcd(ring: &Arc<Zp>, a: Vec<BigUint>, b: Vec<BigUint>) -> (Arc<Zp>, Vec<BigUint>) {
    let mut lattice = MonicGcd::new(ring);
    lattice.add(ring, a);
    lattice.add(ring, b);
    lattice.gcd()
}

/// Running gcd of monic polynomials over `Z/p^k`, with coefficients that
/// vanish modulo `p^k` treated as zero.
///
/// With `B = 2 * max(deg g_i)`, the `Z_p`-span of the shifts `T^j g_i` of
/// degree below `B` is a lattice in the multiples of the gcd `h` of degree
/// below `B`, of full rank there. So `deg h` is `B` minus the number of
/// nonzero Smith invariants of the span, and `h` is recovered from the
/// elements of degree at most `deg h`. The precision of `h` drops by the
/// valuation of the leading coefficient of the best such element.
#[derive(Debug, Clone)]
pub(crate) struct MonicGcd {
    ring: Arc<Zp>,
    bound: usize,
    polys: Vec<Vec<BigUint>>,
    basis: Vec<Vec<BigUint>>,
    trivial: bool,
}

impl MonicGcd {
    pub(crate) fn new(ring: &Arc<Zp>) -> MonicGcd {
        MonicGcd {
            ring: Arc::clone(ring),
            bound: 0,
            polys: Vec::new(),
            basis: Vec::new(),
            trivial: false,
        }
    }

    /// `true` once the gcd is known to be `1`.
    pub(crate) fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// Adds a monic polynomial with coefficients known modulo `ring`.
    pub(crate) fn add(&mut self, ring: &Arc<Zp>, g: Vec<BigUint>) {
        if self.trivial {
            return;
        }
        if g.len() <= 1 {
            self.trivial = true;
            return;
        }
        if ring.precision() < self.ring.precision() {
            self.ring = Arc::clone(ring);
            for f in self.polys.iter_mut() {
                *f = poly::reduce(ring, f);
            }
            for v in self.basis.iter_mut() {
                *v = v.iter().map(|c| ring.reduce(c.clone())).collect();
            }
        }
        let g = poly::reduce(&self.ring, &g);
        let lambda = g.len() - 1;
        self.polys.push(g);
        if 2 * lambda > self.bound {
            self.bound = 2 * lambda;
            self.basis.clear();
            let polys = std::mem::take(&mut self.polys);
            for f in &polys {
                self.basis.extend(shifts(f, self.bound));
                if self.basis.len() > 2 * self.bound {
                    self.compress();
                }
            }
            self.polys = polys;
        } else {
            let f = self.polys.last().expect("just pushed");
            self.basis.extend(shifts(f, self.bound));
        }
        self.compress();
        if self.degree() == 0 {
            self.trivial = true;
        }
    }

    fn compress(&mut self) {
        let m = ZpnMatrix::from_columns(&self.ring, self.bound, &self.basis);
        let s = smith(&m);
        let mut basis = Vec::new();
        for (i, v) in s.valuations.iter().enumerate() {
            if let Some(v) = v {
                let scale = self.ring.p_pow(*v);
                basis.push(s.u_inv.column(i).iter().map(|c| self.ring.mul(c, &scale)).collect());
            }
        }
        self.basis = basis;
    }

    /// An upper bound for the degree of any common divisor.
    pub(crate) fn degree(&self) -> usize {
        if self.trivial {
            return 0;
        }
        self.bound - self.basis.len()
    }

    /// The gcd and the ring to which its coefficients are known.
    pub(crate) fn gcd(&self) -> (Arc<Zp>, Vec<BigUint>) {
        let one = vec![BigUint::one()];
        if self.trivial || self.polys.is_empty() {
            return (Arc::clone(&self.ring), one);
        }
        let ring = &self.ring;
        let k = ring.precision();
        let a = ZpnMatrix::from_columns(ring, self.bound, &self.basis);
        let all: Vec<usize> = (0..a.cols()).collect();
        let mut d = self.degree();
        loop {
            if d == 0 {
                return (Arc::clone(ring), one);
            }
            let top: Vec<usize> = (d + 1..self.bound).collect();
            let kernel = if top.is_empty() {
                ZpnMatrix::identity(ring, a.cols())
            } else {
                kernel(&a.select(&top, &all))
            };
            let best = kernel
                .columns()
                .into_iter()
                .map(|x| a.apply(&x))
                .filter_map(|y| ring.val(&y[d]).map(|w| (w, y)))
                .min_by_key(|(w, _)| *w);
            if let Some((w, y)) = best {
                let lower = ring.at_precision(k - w);
                let unit = ring.div_p_pow(&y[d], w);
                let inv = lower.inv(&lower.reduce(unit)).expect("unit leading coefficient");
                let h = y[..=d].iter().map(|c| lower.mul(&ring.div_p_pow(c, w), &inv)).collect();
                return (lower, h);
            }
            d -= 1;
        }
    }
}

/// Largest number of residues kept by [`common_divisors`] at one precision.
pub const DIVISOR_SEARCH_LIMIT: usize = 1 << 14;

/// Every `g` of degree `d`, congruent to `T^d` modulo `p`, that divides each
/// `f` modulo the precision of its ring, listed modulo `p^K` for the largest
/// such precision `K`. The `f` are distinguished.
///
/// Residues are lifted one `p`-adic digit at a time: if `g` divides `f`
/// modulo `p^j`, write `f = q g + p^j r`; then `g + p^j e` divides `f` modulo
/// `p^(j+1)` exactly when `e q = r` modulo `(p, T^d)`, a linear condition on
/// `e` over `F_p`.
pub(crate) fn common_divisors(parts: &[(Arc<Zp>, Vec<BigUint>)], d: usize) -> Result<Vec<Vec<BigUint>>> {
    let Some(top) = parts.iter().map(|(r, _)| r).max_by_key(|r| r.precision()) else {
        return Ok(Vec::new());
    };
    if parts.iter().any(|(_, f)| f.len() <= d) {
        return Ok(Vec::new());
    }
    let mut start = vec![BigUint::zero(); d + 1];
    start[d] = BigUint::one();
    if d == 0 {
        return Ok(vec![start]);
    }
    let field = top.at_precision(1);
    let mut survivors = vec![start];
    for j in 1..top.precision() {
        let ring = top.at_precision(j + 1);
        let p_j = ring.p_pow(j);
        let active: Vec<Vec<BigUint>> = parts
            .iter()
            .filter(|(r, _)| r.precision() > j)
            .map(|(_, f)| poly::reduce(&ring, f))
            .collect();
        let mut next = std::collections::BTreeSet::new();
        for g in &survivors {
            let mut a = ZpnMatrix::zeros(&field, d * active.len(), d);
            let mut b = vec![BigUint::zero(); d * active.len()];
            let mut consistent = true;
            for (i, f) in active.iter().enumerate() {
                let (q, r) = poly::divrem_monic(&ring, f, g);
                if r.iter().any(|c| ring.val(c).is_some_and(|v| v < j)) {
                    consistent = false;
                    break;
                }
                for t in 0..d {
                    b[i * d + t] = field.reduce(r.get(t).map_or_else(BigUint::zero, |c| c / &p_j));
                    for c in 0..=t {
                        if let Some(x) = q.get(t - c) {
                            a.set(i * d + t, c, field.reduce(x.clone()));
                        }
                    }
                }
            }
            if !consistent {
                continue;
            }
            let Some(x0) = solve(&a, &b) else {
                continue;
            };
            let basis = kernel(&a).columns();
            let count = basis.len();
            if count >= 64 || next.len() + (1usize << count.min(63)) > DIVISOR_SEARCH_LIMIT {
                return Err(Error::PrecisionInsufficient(format!(
                    "more than {DIVISOR_SEARCH_LIMIT} candidate divisors of degree {d} modulo p^{}",
                    j + 1
                )));
            }
            let p = BigUint::from(field.prime());
            let mut digits = vec![BigUint::zero(); count];
            loop {
                let mut e = x0.clone();
                for (coef, v) in digits.iter().zip(&basis) {
                    for (x, y) in e.iter_mut().zip(v) {
                        *x = field.add(x, &field.mul(coef, y));
                    }
                }
                let lifted: Vec<BigUint> = g
                    .iter()
                    .enumerate()
                    .map(|(t, c)| {
                        if t < d {
                            ring.add(c, &ring.mul(&e[t], &p_j))
                        } else {
                            c.clone()
                        }
                    })
                    .collect();
                next.insert(lifted);
                if next.len() > DIVISOR_SEARCH_LIMIT {
                    return Err(Error::PrecisionInsufficient(format!(
                        "more than {DIVISOR_SEARCH_LIMIT} candidate divisors of degree {d} modulo p^{}",
                        j + 1
                    )));
                }
                let Some(pos) = digits.iter().position(|x| x + 1u32 < p) else {
                    break;
                };
                digits[pos] += 1u32;
                for x in digits.iter_mut().take(pos) {
                    *x = BigUint::zero();
                }
            }
        }
        survivors = next.into_iter().collect();
        if survivors.is_empty() {
            break;
        }
    }
    Ok(survivors)
}

/// The largest `k` such that all `gs` agree modulo `p^k`.
pub(crate) fn agreement(ring: &Zp, gs: &[Vec<BigUint>]) -> u32 {
    (1..=ring.precision())
        .rev()
        .find(|&k| {
            let sub = ring.at_precision(k);
            gs.windows(2)
                .all(|w| poly::reduce(&sub, &w[0]) == poly::reduce(&sub, &w[1]))
        })
        .unwrap_or(0)
}

/// Coefficient vectors of length `bound` of `T^j f` for `deg T^j f < bound`.
fn shifts(f: &[BigUint], bound: usize) -> impl Iterator<Item = Vec<BigUint>> + '_ {
    let lambda = f.len() - 1;
    (0..bound - lambda).map(move |j| {
        let mut v = vec![BigUint::zero(); bound];
        v[j..j + f.len()].clone_from_slice(f);
        v
    })
}

struct Poly<'a>(&'a Zp, &'a [BigUint]);

impl fmt::Display for Poly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.0, self.1)
    }
}

impl PartialEq for CharElement {
    fn eq(&self, other: &Self) -> bool {
        if self.prime() != other.prime() || self.mu != other.mu || self.lambda() != other.lambda() {
            return false;
        }
        let k = self.precision().min(other.precision());
        let ring = self.ring.at_precision(k);
        poly::reduce(&ring, &self.dist) == poly::reduce(&ring, &other.dist)
    }
}

impl fmt::Display for CharElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.mu, self.lambda()) {
            (0, _) => write_poly(f, &self.ring, &self.dist),
            (mu, 0) => write!(f, "p^{mu}"),
            (mu, _) => {
                write!(f, "p^{mu} * (")?;
                write_poly(f, &self.ring, &self.dist)?;
                write!(f, ")")
            }
        }
    }
}

/// A formal quotient of products of characteristic elements, resolved by
/// exact cancellation.
#[derive(Debug, Clone, Default)]
pub struct CharQuotient {
    numerator: Vec<CharElement>,
    denominator: Vec<CharElement>,
}

impl CharQuotient {
    pub fn new() -> CharQuotient {
        CharQuotient::default()
    }

    pub fn multiply(&mut self, f: CharElement) {
        self.numerator.push(f);
    }

    pub fn divide(&mut self, f: CharElement) {
        self.denominator.push(f);
    }

    pub fn numerator(&self) -> &[CharElement] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[CharElement] {
        &self.denominator
    }

    pub fn resolve(&self, ring: &Arc<Zp>) -> Result<CharElement> {
        let num = product(ring, &self.numerator)?;
        let den = product(ring, &self.denominator)?;
        num.checked_div(&den)
    }
}

pub fn product<'a>(ring: &Arc<Zp>, factors: impl IntoIterator<Item = &'a CharElement>) -> Result<CharElement> {
    factors
        .into_iter()
        .try_fold(CharElement::one(ring), |acc, f| acc.checked_mul(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32) -> Arc<Zp> {
        Zp::new(p, n).unwrap()
    }

    fn ce(r: &Arc<Zp>, mu: u32, g: &[i64]) -> CharElement {
        CharElement::new(r, mu, g.iter().copied()).unwrap()
    }

    #[test]
    fn ord_at_zero_examples() {
        let r = ring(5, 4);
        // T^2 (T - 5)
        assert_eq!(ce(&r, 0, &[0, 0, -5, 1]).ord_at_zero(), 2);
        assert_eq!(ce(&r, 3, &[1]).ord_at_zero(), 0);
        // T (T + 1 - 6)
        assert_eq!(ce(&r, 0, &[0, -5, 1]).ord_at_zero(), 1);
    }

    #[test]
    fn leading_term_examples() {
        let r = ring(5, 4);
        assert_eq!(ce(&r, 1, &[0, 1]).leading_term_valuation(), 1);
        assert_eq!(ce(&r, 0, &[-5, 1]).leading_term_valuation(), 1);
        assert_eq!(CharElement::one(&r).leading_term_valuation(), 0);
    }

    #[test]
    fn product_and_quotient() {
        let r = ring(5, 3);
        let a = ce(&r, 0, &[-5, 1]);
        let b = ce(&r, 1, &[-25, 1]);
        let ab = a.checked_mul(&b).unwrap();
        assert_eq!(ab, ce(&r, 1, &[125, -30, 1]));
        assert_eq!(ab.checked_div(&a).unwrap(), b);
        assert!(matches!(a.checked_div(&b), Err(Error::NonIntegralAkashi(_))));
    }

    #[test]
    fn equality_uses_coarser_precision() {
        let fine = ce(&ring(5, 3), 0, &[-5, 1]);
        let coarse = ce(&ring(5, 1), 0, &[0, 1]);
        assert_eq!(fine, coarse);
        assert_ne!(fine, ce(&ring(5, 2), 0, &[-10, 1]));
    }

    #[test]
    fn degree_zero_factors_do_not_cost_precision() {
        let t = CharElement::t(&ring(3, 5));
        let p2 = CharElement::p_power(&ring(3, 1), 2);
        assert_eq!(t.checked_mul(&p2).unwrap().precision(), 5);
    }

    #[test]
    fn gcd_of_coprime_and_shared_factors() {
        let r = ring(3, 4);
        let a = ce(&r, 2, &[0, 1]);
        let b = ce(&r, 1, &[-3, 1]);
        assert_eq!(a.gcd(&b).unwrap(), CharElement::p_power(&r, 1));

        let shared = ce(&r, 0, &[-3, 1]);
        let x = shared.checked_mul(&ce(&r, 0, &[0, 1])).unwrap();
        let y = shared.checked_mul(&ce(&r, 0, &[9, 0, 1])).unwrap();
        assert_eq!(x.gcd(&y).unwrap(), shared);
    }

    #[test]
    fn gcd_loses_precision_honestly() {
        // T^2 and (T + 2)^2 agree modulo 4, so at precision 2 the gcd of T^2
        // and T + 2 is T + 2.
        let r = ring(2, 2);
        let a = ce(&r, 0, &[0, 0, 1]);
        let b = ce(&r, 0, &[2, 1]);
        assert_eq!(a.gcd(&b).unwrap(), b);
    }

    #[test]
    fn gcd_certifies_only_what_the_precision_sees() {
        // T (T + 3) and T (T + 9) share T; their difference 6T costs one digit.
        let r = ring(3, 4);
        let g = ce(&r, 0, &[0, 3, 1]).gcd(&ce(&r, 0, &[0, 9, 1])).unwrap();
        assert_eq!(g, CharElement::t(&r));
        assert_eq!(g.precision(), 3);

        // T^3 and T^3 + 3 are coprime as soon as 3 is visible.
        let r = ring(3, 3);
        assert!(ce(&r, 0, &[0, 0, 0, 1])
            .gcd(&ce(&r, 0, &[3, 0, 0, 1]))
            .unwrap()
            .is_one());
        let r = ring(3, 1);
        assert_eq!(
            ce(&r, 0, &[0, 0, 0, 1])
                .gcd(&ce(&r, 0, &[3, 0, 0, 1]))
                .unwrap()
                .lambda(),
            3
        );
    }

    #[test]
    fn quotient_resolution() {
        let r = ring(5, 3);
        let t = CharElement::t(&r);
        let mut q = CharQuotient::new();
        q.multiply(t.clone());
        q.multiply(ce(&r, 0, &[-5, 1]));
        q.divide(t.clone());
        assert_eq!(q.resolve(&r).unwrap(), ce(&r, 0, &[-5, 1]));
        let mut bad = CharQuotient::new();
        bad.divide(t);
        assert!(bad.resolve(&r).is_err());
    }
}
