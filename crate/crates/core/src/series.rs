//! Truncated power series in `Z_p[[T]]`.
//!
//! A [`LambdaSeries`] stores the coefficients of `T^0 .. T^(D-1)` modulo
//! `p^N`. The `exact` flag records whether every coefficient from `T^D` on is
//! known to vanish modulo `p^N`, i.e. whether the stored data is the whole
//! series rather than a truncation of an unknown tail. Weierstrass preparation
//! uses the flag to decide how much of its output the data certifies.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{PadicInt, Zp};
use crate::poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaSeries {
    ring: Arc<Zp>,
    coeffs: Vec<BigUint>,
    exact: bool,
}

impl LambdaSeries {
    /// Builds a series from integer coefficients (lowest degree first).
    ///
    /// Coefficients beyond `t_degree` are dropped; the result is exact unless a
    /// dropped coefficient is nonzero modulo `p^N`.
    pub fn new<I, C>(ring: &Arc<Zp>, t_degree: usize, coeffs: I) -> Result<LambdaSeries>
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let raw: Vec<BigUint> = coeffs.into_iter().map(|c| ring.reduce_signed(&c.into())).collect();
        Self::from_raw(ring, t_degree, raw)
    }

    /// Like [`LambdaSeries::new`] but marks the data as a truncation of a
    /// series whose tail is unknown.
    pub fn truncated<I, C>(ring: &Arc<Zp>, t_degree: usize, coeffs: I) -> Result<LambdaSeries>
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let mut s = Self::new(ring, t_degree, coeffs)?;
        s.exact = false;
        Ok(s)
    }

    pub fn from_padic(ring: &Arc<Zp>, t_degree: usize, coeffs: &[PadicInt]) -> Result<LambdaSeries> {
        for c in coeffs {
            ring.check_same(c.ring())?;
        }
        Self::from_raw(ring, t_degree, coeffs.iter().map(|c| c.value().clone()).collect())
    }

    pub(crate) fn from_raw(ring: &Arc<Zp>, t_degree: usize, mut raw: Vec<BigUint>) -> Result<LambdaSeries> {
        if t_degree == 0 {
            return Err(Error::invalid("T-degree must be at least 1"));
        }
        let exact = raw.iter().skip(t_degree).all(|c| c.is_zero());
        raw.resize(t_degree, BigUint::zero());
        Ok(LambdaSeries {
            ring: Arc::clone(ring),
            coeffs: raw,
            exact,
        })
    }

    pub(crate) fn from_parts(ring: &Arc<Zp>, mut coeffs: Vec<BigUint>, t_degree: usize, exact: bool) -> LambdaSeries {
        let dropped = coeffs.iter().skip(t_degree).any(|c| !c.is_zero());
        coeffs.resize(t_degree, BigUint::zero());
        LambdaSeries {
            ring: Arc::clone(ring),
            coeffs,
            exact: exact && !dropped,
        }
    }

    pub fn zero(ring: &Arc<Zp>, t_degree: usize) -> LambdaSeries {
        Self::from_parts(ring, Vec::new(), t_degree.max(1), true)
    }

    pub fn one(ring: &Arc<Zp>, t_degree: usize) -> LambdaSeries {
        Self::constant(ring, t_degree, &BigUint::one())
    }

    /// The variable `T` (equivalently `gamma - 1`).
    pub fn t(ring: &Arc<Zp>, t_degree: usize) -> LambdaSeries {
        Self::from_parts(ring, vec![BigUint::zero(), BigUint::one()], t_degree.max(1), true)
    }

    pub fn constant(ring: &Arc<Zp>, t_degree: usize, c: &BigUint) -> LambdaSeries {
        Self::from_parts(ring, vec![ring.reduce(c.clone())], t_degree.max(1), true)
    }

    pub fn ring(&self) -> &Arc<Zp> {
        &self.ring
    }

    pub fn prime(&self) -> u64 {
        self.ring.prime()
    }

    /// `N`: coefficients are known modulo `p^N`.
    pub fn p_precision(&self) -> u32 {
        self.ring.precision()
    }

    /// `D`: the number of stored coefficients.
    pub fn t_degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn coeff(&self, i: usize) -> PadicInt {
        PadicInt::from_raw(Arc::clone(&self.ring), self.coeffs.get(i).cloned().unwrap_or_default())
    }

    pub fn coeffs(&self) -> Vec<PadicInt> {
        (0..self.coeffs.len()).map(|i| self.coeff(i)).collect()
    }

    pub(crate) fn raw(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Highest index with a coefficient nonzero modulo `p^N`.
    pub fn degree(&self) -> Option<usize> {
        poly::degree(&self.coeffs)
    }

    /// Minimum coefficient valuation, `None` when the series is zero at this
    /// precision.
    pub fn min_valuation(&self) -> Option<u32> {
        poly::min_valuation(&self.ring, &self.coeffs)
    }

    fn check_compatible(&self, other: &LambdaSeries) -> Result<()> {
        self.ring.check_same(&other.ring)?;
        if self.t_degree() != other.t_degree() {
            return Err(Error::mismatch(format!(
                "T-degree {} vs {}",
                self.t_degree(),
                other.t_degree()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &LambdaSeries) -> Result<LambdaSeries> {
        self.check_compatible(other)?;
        Ok(LambdaSeries {
            ring: Arc::clone(&self.ring),
            coeffs: poly::add(&self.ring, &self.coeffs, &other.coeffs),
            exact: self.exact && other.exact,
        })
    }

    pub fn checked_sub(&self, other: &LambdaSeries) -> Result<LambdaSeries> {
        self.check_compatible(other)?;
        Ok(LambdaSeries {
            ring: Arc::clone(&self.ring),
            coeffs: poly::sub(&self.ring, &self.coeffs, &other.coeffs),
            exact: self.exact && other.exact,
        })
    }

    pub fn checked_mul(&self, other: &LambdaSeries) -> Result<LambdaSeries> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &LambdaSeries) -> LambdaSeries {
        let d = self.t_degree();
        let coeffs = poly::mul(&self.ring, &self.coeffs, &other.coeffs, Some(d));
        let exact = match (self.degree(), other.degree()) {
            (None, _) => self.exact,
            (_, None) => other.exact,
            (Some(a), Some(b)) => self.exact && other.exact && a + b < d,
        };
        LambdaSeries {
            ring: Arc::clone(&self.ring),
            coeffs,
            exact,
        }
    }

    pub fn neg(&self) -> LambdaSeries {
        LambdaSeries {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
            exact: self.exact,
        }
    }

    pub fn scale(&self, s: &PadicInt) -> Result<LambdaSeries> {
        self.ring.check_same(s.ring())?;
        Ok(LambdaSeries {
            ring: Arc::clone(&self.ring),
            coeffs: poly::scale(&self.ring, &self.coeffs, s.value()),
            exact: self.exact,
        })
    }

    pub fn pow(&self, e: u64) -> LambdaSeries {
        let mut acc = LambdaSeries::one(&self.ring, self.t_degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Inverse of a series with unit constant term, truncated at `T^D`.
    pub fn unit_inverse(&self) -> Result<LambdaSeries> {
        let inv = poly::inverse_series(&self.ring, &self.coeffs, self.t_degree())
            .ok_or_else(|| Error::NotAUnit(format!("constant term of {self} is not a unit")))?;
        let exact = self.exact && self.degree() == Some(0);
        Ok(LambdaSeries {
            ring: Arc::clone(&self.ring),
            coeffs: inv,
            exact,
        })
    }

    /// `f((1+T)^(p^c) - 1)`, truncated at `T^D`.
    ///
    /// This realises the inclusion `Lambda(Gamma') -> Lambda(Gamma)` for the
    /// subgroup `Gamma' = Gamma^(p^c)`: its generator `gamma^(p^c)` maps to
    /// `(1+T)^(p^c)`. The result is exact only when `f` is exact and
    /// `deg(f) * p^c < D`.
    pub fn substitute_tower(&self, c: u32) -> LambdaSeries {
        let d = self.t_degree();
        let s = LambdaSeries::from_parts(&self.ring, poly::tower_substitution(&self.ring, c), d, true);
        let mut acc = LambdaSeries::zero(&self.ring, d);
        acc.exact = self.exact;
        for a in self.coeffs.iter().rev() {
            acc = acc.mul_unchecked(&s);
            acc.coeffs[0] = self.ring.add(&acc.coeffs[0], a);
        }
        acc
    }

    /// Value at `T = t` for `t` divisible by `p`, with the number of p-adic
    /// digits the data certifies.
    pub fn evaluate_at(&self, t: &BigUint) -> (BigUint, u32) {
        let mut acc = BigUint::zero();
        for a in self.coeffs.iter().rev() {
            acc = self.ring.add(&self.ring.mul(&acc, t), a);
        }
        let certified = if self.exact {
            self.p_precision()
        } else {
            let v = self
                .ring
                .val(&self.ring.reduce(t.clone()))
                .unwrap_or(self.p_precision());
            self.p_precision()
                .min(v.saturating_mul(u32::try_from(self.t_degree()).unwrap_or(u32::MAX)))
        };
        (acc, certified)
    }

    /// Reduces the coefficients modulo `p^n` for `n <= N`.
    pub fn at_p_precision(&self, n: u32) -> Result<LambdaSeries> {
        if n == 0 || n > self.p_precision() {
            return Err(Error::invalid(format!(
                "cannot move from p-precision {} to {n}",
                self.p_precision()
            )));
        }
        let ring = self.ring.at_precision(n);
        Ok(LambdaSeries {
            coeffs: poly::reduce(&ring, &self.coeffs),
            ring,
            exact: self.exact,
        })
    }

    /// Changes the number of stored coefficients. Growing an inexact series
    /// pads with zeros and stays inexact; shrinking drops coefficients and
    /// marks the result inexact if any of them was nonzero.
    pub fn with_t_degree(&self, d: usize) -> Result<LambdaSeries> {
        if d == 0 {
            return Err(Error::invalid("T-degree must be at least 1"));
        }
        Ok(LambdaSeries::from_parts(&self.ring, self.coeffs.clone(), d, self.exact))
    }

    pub fn weierstrass_prepare(&self) -> Result<crate::weierstrass::WeierstrassDecomposition> {
        crate::weierstrass::prepare(self)
    }

    pub fn normalize(&self) -> Result<crate::charel::CharElement> {
        crate::weierstrass::normalize_mod_units(self)
    }
}

impl fmt::Display for LambdaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.ring, &self.coeffs)?;
        if !self.exact {
            write!(f, " + O(T^{})", self.t_degree())?;
        }
        Ok(())
    }
}

/// Writes a polynomial using balanced representatives, e.g. `T^2 - 5*T + 3`.
pub(crate) fn write_poly(f: &mut fmt::Formatter<'_>, ring: &Zp, coeffs: &[BigUint]) -> fmt::Result {
    let half = ring.modulus() >> 1u32;
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let (negative, mag) = if *c > half {
            (true, ring.modulus() - c)
        } else {
            (false, c.clone())
        };
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { '-' } else { '+' })?;
        }
        first = false;
        let unit = mag.is_one();
        match (i, unit) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => write!(f, "T")?,
            (1, false) => write!(f, "{mag}*T")?,
            (_, true) => write!(f, "T^{i}")?,
            (_, false) => write!(f, "{mag}*T^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32) -> Arc<Zp> {
        Zp::new(p, n).unwrap()
    }

    fn series(r: &Arc<Zp>, d: usize, c: &[i64]) -> LambdaSeries {
        LambdaSeries::new(r, d, c.iter().copied()).unwrap()
    }

    #[test]
    fn product_of_conjugates() {
        let r = ring(5, 3);
        let f = series(&r, 4, &[1, 1]);
        let g = series(&r, 4, &[1, -1]);
        assert_eq!(f.checked_mul(&g).unwrap(), series(&r, 4, &[1, 0, -1]));
    }

    #[test]
    fn sum_cancels_t() {
        let r = ring(5, 3);
        let f = series(&r, 4, &[5, 1]);
        let g = series(&r, 4, &[5, -1]);
        assert_eq!(f.checked_add(&g).unwrap(), series(&r, 4, &[10]));
    }

    #[test]
    fn truncation_boundary() {
        let r = ring(3, 2);
        let d = 5;
        let top = series(&r, d, &[0, 0, 0, 0, 1]);
        let prod = top.checked_mul(&LambdaSeries::t(&r, d)).unwrap();
        assert!(prod.is_zero());
        assert!(!prod.is_exact());
    }

    #[test]
    fn mismatched_degrees_refused() {
        let r = ring(3, 2);
        let a = series(&r, 3, &[1]);
        let b = series(&r, 4, &[1]);
        assert!(matches!(a.checked_add(&b), Err(Error::PrecisionMismatch(_))));
    }

    #[test]
    fn tower_substitution_examples() {
        let r = ring(2, 4);
        let s = LambdaSeries::t(&r, 4).substitute_tower(1);
        assert_eq!(s, series(&r, 4, &[0, 2, 1]));

        let one = LambdaSeries::one(&r, 4);
        assert_eq!(one.substitute_tower(3), one);

        let r5 = ring(5, 4);
        let f = series(&r5, 7, &[5, 1]).substitute_tower(1);
        let binomials = [0i64, 5, 10, 10, 5, 1];
        let mut expected = binomials.to_vec();
        expected[0] += 5;
        assert_eq!(f, series(&r5, 7, &expected));
        assert!(f.is_exact());
    }

    #[test]
    fn substitution_overflowing_degree_is_inexact() {
        let r = ring(5, 2);
        let f = LambdaSeries::t(&r, 4).substitute_tower(1);
        assert!(!f.is_exact());
        assert_eq!(f, LambdaSeries::truncated(&r, 4, [0, 5, 10, 10]).unwrap());
    }

    #[test]
    fn inverse_of_one_plus_t() {
        let r = ring(3, 2);
        let inv = series(&r, 4, &[1, 1]).unit_inverse().unwrap();
        assert_eq!(inv, LambdaSeries::truncated(&r, 4, [1, -1, 1, -1]).unwrap());
        assert!(series(&r, 4, &[3, 1]).unit_inverse().is_err());
    }

    #[test]
    fn display_uses_balanced_representatives() {
        let r = ring(5, 3);
        assert_eq!(series(&r, 4, &[3, -5, 1]).to_string(), "T^2 - 5*T + 3");
        assert_eq!(LambdaSeries::zero(&r, 2).to_string(), "0");
    }
}
