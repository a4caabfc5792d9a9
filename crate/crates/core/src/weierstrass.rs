//! Weierstrass preparation `f = p^mu * g * u` of truncated series.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::charel::CharElement;
use crate::error::{Error, Result};
use crate::padic::{PadicInt, Zp};
use crate::poly;
use crate::series::LambdaSeries;

/// `f = p^mu * distinguished * unit`.
///
/// `distinguished` and `unit` live modulo `p^(N - mu)`; together with `p^mu`
/// they reproduce every stored coefficient of `f` modulo `p^N`. When `f` is a
/// truncation (not exact), the distinguished polynomial of the true series is
/// only pinned down modulo `p^certified_precision`.
#[derive(Debug, Clone)]
pub struct WeierstrassDecomposition {
    mu: u32,
    ring: Arc<Zp>,
    distinguished: Vec<BigUint>,
    unit: LambdaSeries,
    certified_precision: u32,
}

impl WeierstrassDecomposition {
    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn lambda(&self) -> usize {
        self.distinguished.len() - 1
    }

    /// Coefficients of the distinguished polynomial, lowest degree first,
    /// modulo `p^(N - mu)`.
    pub fn distinguished(&self) -> Vec<PadicInt> {
        self.distinguished
            .iter()
            .map(|c| PadicInt::from_raw(Arc::clone(&self.ring), c.clone()))
            .collect()
    }

    pub fn unit(&self) -> &LambdaSeries {
        &self.unit
    }

    /// `N - mu`, the precision of `distinguished` and `unit`.
    pub fn output_precision(&self) -> u32 {
        self.ring.precision()
    }

    /// Precision to which the distinguished polynomial is determined by the
    /// input data (equals `output_precision` for exact input).
    pub fn certified_precision(&self) -> u32 {
        self.certified_precision
    }

    /// `p^mu * distinguished * unit` at the input's `(N, D)`.
    pub fn reconstruct(&self, ring: &Arc<Zp>) -> LambdaSeries {
        let d = self.unit.t_degree();
        let prod = poly::mul(&self.ring, &self.distinguished, self.unit.raw(), Some(d));
        let scale = ring.p_pow(self.mu);
        let coeffs = prod.iter().map(|c| ring.mul(c, &scale)).collect();
        LambdaSeries::from_parts(ring, coeffs, d, self.unit.is_exact())
    }

    pub fn char_element(&self) -> CharElement {
        let ring = self.ring.at_precision(self.certified_precision);
        CharElement::from_parts(self.mu, &ring, poly::reduce(&ring, &self.distinguished))
    }
}

pub fn prepare(f: &LambdaSeries) -> Result<WeierstrassDecomposition> {
    let ring = f.ring();
    let n = f.p_precision();
    let mu = f
        .min_valuation()
        .ok_or(Error::IndistinguishableFromZero { precision: n })?;
    if mu > 0 && !f.is_exact() {
        return Err(Error::TruncationTooSmall(format!(
            "every stored coefficient is divisible by p^{mu}, but the unknown tail beyond T^{} may not be",
            f.t_degree()
        )));
    }
    let k = n - mu;
    let target = ring.at_precision(k);
    let big_f = poly::div_p_pow(ring, &target, f.raw(), mu);
    let lambda = big_f
        .iter()
        .position(|c| target.is_unit(c))
        .expect("a coefficient of valuation mu exists");
    let (g, h) = hensel_split(&target, &big_f, lambda);

    let certified = if f.is_exact() || lambda == 0 {
        k
    } else {
        match poly::min_valuation(&target, &g[..lambda]) {
            None => k,
            Some(a) => {
                let blocks = u32::try_from(f.t_degree() / lambda).unwrap_or(u32::MAX);
                k.min(a.saturating_mul(blocks))
            }
        }
    };
    let unit = LambdaSeries::from_parts(&target, h, f.t_degree(), f.is_exact());
    Ok(WeierstrassDecomposition {
        mu,
        ring: target,
        distinguished: g,
        unit,
        certified_precision: certified,
    })
}

pub fn normalize_mod_units(f: &LambdaSeries) -> Result<CharElement> {
    Ok(prepare(f)?.char_element())
}

/// Factors `F = g * h` over `Z/p^k` with `g` distinguished of degree `lambda`
/// and `h` a unit, where `lambda` is the index of the first unit coefficient
/// of `F`. Lifts the factorisation `F = T^lambda * (F / T^lambda) mod p` one
/// p-adic digit at a time.
pub(crate) fn hensel_split(ring: &Zp, f: &[BigUint], lambda: usize) -> (Vec<BigUint>, Vec<BigUint>) {
    let k = ring.precision();
    let p = BigUint::from(ring.prime());
    let mut g = vec![BigUint::zero(); lambda + 1];
    g[lambda] = BigUint::one();
    let mut h: Vec<BigUint> = f[lambda..].to_vec();
    if h.is_empty() {
        h.push(BigUint::zero());
    }
    let fp = Zp::new(ring.prime(), 1).expect("prime already validated");
    let h_bar_inv =
        poly::inverse_series(&fp, &poly::reduce(&fp, &h), lambda.max(1)).expect("leading factor is a unit mod p");

    for j in 1..k {
        let gh = poly::mul(ring, &g, &h, None);
        let e = poly::sub(ring, f, &gh);
        let pj = ring.p_pow(j);
        let delta: Vec<BigUint> = e.iter().map(|c| (c / &pj) % &p).collect();
        if delta.iter().all(|c| c.is_zero()) {
            continue;
        }
        let h_bar = poly::reduce(&fp, &h);
        let mut a = poly::mul(&fp, &delta, &h_bar_inv, Some(lambda));
        a.truncate(lambda);
        let ah = poly::mul(&fp, &a, &h_bar, None);
        let rest = poly::sub(&fp, &delta, &ah);
        debug_assert!(rest.iter().take(lambda).all(|c| c.is_zero()));
        let b: Vec<BigUint> = rest.into_iter().skip(lambda).collect();
        for (gi, ai) in g.iter_mut().zip(&a) {
            *gi = ring.add(gi, &ring.mul(&pj, ai));
        }
        if b.len() > h.len() {
            h.resize(b.len(), BigUint::zero());
        }
        for (hi, bi) in h.iter_mut().zip(&b) {
            *hi = ring.add(hi, &ring.mul(&pj, bi));
        }
    }
    (g, poly::trim(h))
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

    fn dist(w: &WeierstrassDecomposition) -> Vec<i64> {
        w.distinguished()
            .iter()
            .map(|c| i64::try_from(c.to_signed()).unwrap())
            .collect()
    }

    #[test]
    fn pure_p_power_times_unit() {
        let r = ring(5, 3);
        let w = prepare(&series(&r, 4, &[5, 5])).unwrap();
        assert_eq!((w.mu(), w.lambda()), (1, 0));
        assert_eq!(dist(&w), vec![1]);
        assert_eq!(w.unit(), &series(&w.ring, 4, &[1, 1]));
    }

    #[test]
    fn already_distinguished() {
        let r = ring(5, 3);
        let w = prepare(&series(&r, 4, &[0, 5, 1])).unwrap();
        assert_eq!((w.mu(), w.lambda()), (0, 2));
        assert_eq!(dist(&w), vec![0, 5, 1]);
        assert_eq!(w.unit(), &LambdaSeries::one(&r, 4));
    }

    #[test]
    fn linear_times_unit() {
        // (T - 5)(1 + T) = T^2 - 4T - 5
        let r = ring(5, 3);
        let f = series(&r, 6, &[-5, -4, 1]);
        let w = prepare(&f).unwrap();
        assert_eq!((w.mu(), w.lambda()), (0, 1));
        assert_eq!(dist(&w), vec![-5, 1]);
        assert_eq!(w.unit(), &series(&r, 6, &[1, 1]));
        assert_eq!(w.reconstruct(&r), f);
    }

    #[test]
    fn zero_series_is_refused() {
        let r = ring(3, 2);
        assert!(matches!(
            prepare(&series(&r, 3, &[9, 0, 18])),
            Err(Error::IndistinguishableFromZero { precision: 2 })
        ));
    }

    #[test]
    fn truncated_series_with_mu_is_refused() {
        let r = ring(3, 3);
        let f = LambdaSeries::truncated(&r, 3, [3, 6, 9]).unwrap();
        assert!(matches!(prepare(&f), Err(Error::TruncationTooSmall(_))));
    }

    #[test]
    fn truncated_series_certifies_less() {
        // T^2 + 3 + (unknown tail from T^3 on): a = 1, floor(3 / 2) = 1.
        let r = ring(3, 4);
        let f = LambdaSeries::truncated(&r, 3, [3, 0, 1]).unwrap();
        let w = prepare(&f).unwrap();
        assert_eq!(w.certified_precision(), 1);
        assert_eq!(w.output_precision(), 4);
    }
}
