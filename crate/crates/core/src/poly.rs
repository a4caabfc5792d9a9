//! Dense coefficient-vector arithmetic over `Z/p^N`, lowest degree first.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::padic::Zp;

pub(crate) fn degree(a: &[BigUint]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn trim(mut a: Vec<BigUint>) -> Vec<BigUint> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Product truncated to `cap` coefficients (no truncation when `cap` is `None`).
pub(crate) fn mul(ring: &Zp, a: &[BigUint], b: &[BigUint], cap: Option<usize>) -> Vec<BigUint> {
    let (Some(da), Some(db)) = (degree(a), degree(b)) else {
        return match cap {
            Some(c) => vec![BigUint::zero(); c],
            None => Vec::new(),
        };
    };
    let full = da + db + 1;
    let len = cap.map_or(full, |c| c.min(full));
    let mut out = vec![BigUint::zero(); len];
    for (i, x) in a.iter().enumerate().take(da + 1) {
        if x.is_zero() || i >= len {
            continue;
        }
        for (j, y) in b.iter().enumerate().take((db + 1).min(len - i)) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    for c in out.iter_mut() {
        *c = ring.reduce(std::mem::take(c));
    }
    if let Some(c) = cap {
        out.resize(c, BigUint::zero());
    }
    out
}

pub(crate) fn add(ring: &Zp, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let n = a.len().max(b.len());
    let zero = BigUint::zero();
    (0..n)
        .map(|i| ring.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect()
}

pub(crate) fn sub(ring: &Zp, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let n = a.len().max(b.len());
    let zero = BigUint::zero();
    (0..n)
        .map(|i| ring.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect()
}

pub(crate) fn scale(ring: &Zp, a: &[BigUint], s: &BigUint) -> Vec<BigUint> {
    a.iter().map(|c| ring.mul(c, s)).collect()
}

pub(crate) fn reduce(ring: &Zp, a: &[BigUint]) -> Vec<BigUint> {
    a.iter().map(|c| ring.reduce(c.clone())).collect()
}

/// Division by a monic polynomial: `a = q * g + r` with `deg r < deg g`.
pub(crate) fn divrem_monic(ring: &Zp, a: &[BigUint], g: &[BigUint]) -> (Vec<BigUint>, Vec<BigUint>) {
    let dg = degree(g).expect("divisor is monic");
    debug_assert!(g[dg].is_one());
    let mut r: Vec<BigUint> = a.to_vec();
    let Some(da) = degree(&r) else {
        return (Vec::new(), Vec::new());
    };
    if da < dg {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![BigUint::zero(); da - dg + 1];
    for i in (dg..=da).rev() {
        let c = std::mem::take(&mut r[i]);
        if c.is_zero() {
            continue;
        }
        let shift = i - dg;
        for (j, gj) in g.iter().enumerate().take(dg) {
            if !gj.is_zero() {
                let t = ring.mul(&c, gj);
                r[shift + j] = ring.sub(&r[shift + j], &t);
            }
        }
        q[shift] = c;
    }
    r.truncate(dg);
    (q, trim(r))
}

/// Minimum valuation over all coefficients, `None` for the zero polynomial.
pub(crate) fn min_valuation(ring: &Zp, a: &[BigUint]) -> Option<u32> {
    a.iter().filter_map(|c| ring.val(c)).min()
}

/// Coefficientwise exact division by `p^e`, landing in `target`.
pub(crate) fn div_p_pow(ring: &Zp, target: &Zp, a: &[BigUint], e: u32) -> Vec<BigUint> {
    a.iter().map(|c| target.reduce(ring.div_p_pow(c, e))).collect()
}

/// Inverse of a power series with unit constant term, to `n` coefficients.
pub(crate) fn inverse_series(ring: &Zp, a: &[BigUint], n: usize) -> Option<Vec<BigUint>> {
    let inv0 = ring.inv(a.first()?)?;
    let mut out = vec![BigUint::zero(); n];
    if n == 0 {
        return Some(out);
    }
    out[0] = inv0.clone();
    for k in 1..n {
        let mut acc = BigUint::zero();
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            acc += &a[j] * &out[k - j];
        }
        let acc = ring.reduce(acc);
        out[k] = ring.mul(&ring.neg(&acc), &inv0);
    }
    Some(out)
}

/// `(1 + T)^(p^c) - 1`, exactly (no truncation).
pub(crate) fn tower_substitution(ring: &Zp, c: u32) -> Vec<BigUint> {
    let mut s = vec![BigUint::one(), BigUint::one()];
    for _ in 0..c {
        s = pow(ring, &s, ring.prime());
    }
    s[0] = ring.sub(&s[0], &BigUint::one());
    trim(s)
}

pub(crate) fn pow(ring: &Zp, a: &[BigUint], mut e: u64) -> Vec<BigUint> {
    let mut base = a.to_vec();
    let mut acc = vec![BigUint::one()];
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(ring, &acc, &base, None);
        }
        e >>= 1;
        if e > 0 {
            base = mul(ring, &base, &base, None);
        }
    }
    acc
}
