//! Determinantal divisors: the gcd in `Z_p[[T]]` of all `r x r` minors of a
//! matrix, as a characteristic element.
//!
//! The ideal of `r x r` minors is unchanged by invertible row operations, and
//! splitting off a unit pivot lowers `r` by one. What remains is enumerated
//! minor by minor, keeping a running gcd that stops as soon as it reaches
//! `1`.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_bigint::BigUint;

use crate::charel::{agreement, common_divisors, CharElement, MonicGcd};
use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::padic::Zp;
use crate::poly;
use crate::series::LambdaSeries;
use crate::weierstrass::hensel_split;

type Rows = Vec<Vec<LambdaSeries>>;

/// gcd of the `r x r` minors of `m`, or `None` when every such minor vanishes
/// at the working precision.
///
/// A matrix of exact polynomials is first lifted to a `T`-degree above the
/// degree of every `r x r` minor, so no minor loses coefficients. Pivots are
/// then restricted to constant units, whose Schur complements are again
/// minors of the input.
pub fn determinantal_divisor(m: &SeriesMatrix, r: usize) -> Result<Option<CharElement>> {
    let ring = Arc::clone(m.ring());
    if r == 0 {
        return Ok(Some(CharElement::one(&ring)));
    }
    let exact = m.is_exact();
    let mut d = m.t_degree();
    let mut rows = m.to_rows();
    if exact {
        let max_degree = rows
            .iter()
            .flatten()
            .filter_map(LambdaSeries::degree)
            .max()
            .unwrap_or(0);
        let needed = r * max_degree + 1;
        if needed > d {
            d = needed;
            for f in rows.iter_mut().flatten() {
                *f = f.with_t_degree(d)?;
            }
        }
    }
    let (rows, r) = eliminate_unit_pivots(rows, r, exact);
    let rows = drop_zero_lines(rows);
    if r == 0 {
        return Ok(Some(CharElement::one(&ring)));
    }
    let cols = rows.first().map_or(0, Vec::len);
    if r > rows.len().min(cols) {
        return Ok(None);
    }

    minors_gcd(&ring, d, &rows, r)
}

fn is_exact_zero(f: &LambdaSeries) -> bool {
    f.is_zero() && f.is_exact()
}

/// Repeatedly splits off an entry with unit constant term. Returns the
/// remaining matrix and the remaining minor size.
fn eliminate_unit_pivots(mut rows: Rows, mut r: usize, constant_only: bool) -> (Rows, usize) {
    while r > 0 && !rows.is_empty() {
        let Some((pi, pj)) = find_unit_pivot(&rows, constant_only) else {
            break;
        };
        let pivot = rows[pi][pj].clone();
        let ring = Arc::clone(pivot.ring());
        let pivot_row = rows[pi].clone();
        let constant_inverse =
            (pivot.degree() == Some(0) && pivot.is_exact()).then(|| ring.inv(&pivot.raw()[0]).expect("unit pivot"));
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pi || is_exact_zero(&row[pj]) {
                continue;
            }
            let a = row[pj].clone();
            match &constant_inverse {
                Some(inv) => {
                    let factor = a
                        .scale(&crate::padic::PadicInt::from_raw(Arc::clone(&ring), inv.clone()))
                        .expect("same ring");
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        if !is_exact_zero(y) {
                            *x = x.checked_sub(&factor.mul_unchecked(y)).expect("same ring");
                        }
                    }
                }
                None => {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        let scaled = x.mul_unchecked(&pivot);
                        *x = if is_exact_zero(y) {
                            scaled
                        } else {
                            scaled.checked_sub(&a.mul_unchecked(y)).expect("same ring")
                        };
                    }
                }
            }
        }
        rows.remove(pi);
        for row in rows.iter_mut() {
            row.remove(pj);
        }
        r -= 1;
    }
    (rows, r)
}

fn find_unit_pivot(rows: &Rows, constant_only: bool) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, row) in rows.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            if !f.ring().is_unit(&f.raw()[0]) || (constant_only && f.degree() != Some(0)) {
                continue;
            }
            let cost = if f.is_exact() {
                f.degree().unwrap_or(0)
            } else {
                usize::MAX
            };
            if best.map_or(true, |(c, _, _)| cost < c) {
                best = Some((cost, i, j));
                if cost == 0 {
                    return Some((i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Removes rows and columns that vanish at the working precision: they
/// contribute only vanishing minors.
fn drop_zero_lines(rows: Rows) -> Rows {
    let keep_rows: Vec<Vec<LambdaSeries>> = rows
        .into_iter()
        .filter(|row| row.iter().any(|f| !f.is_zero()))
        .collect();
    let Some(first) = keep_rows.first() else {
        return keep_rows;
    };
    let keep_cols: Vec<usize> = (0..first.len())
        .filter(|&j| keep_rows.iter().any(|row| !row[j].is_zero()))
        .collect();
    keep_rows
        .into_iter()
        .map(|row| keep_cols.iter().map(|&j| row[j].clone()).collect())
        .collect()
}

/// Running gcd of minors: `p^mu` for the least valuation `mu`, times the
/// distinguished `g` of largest degree dividing every minor modulo `p^N`.
///
/// Distinguished parts are known to different precisions. One lattice gcd is
/// kept per precision `k`, over the parts known modulo at least `p^k`; each
/// bounds the degree of `g`, and a trivial one ends the enumeration early.
struct GcdAccumulator {
    ring: Arc<Zp>,
    t_degree: usize,
    mu: Option<u32>,
    parts: Vec<(Arc<Zp>, Vec<BigUint>)>,
    seen: HashSet<(u32, Vec<BigUint>)>,
    levels: BTreeMap<u32, MonicGcd>,
}

impl GcdAccumulator {
    fn new(ring: &Arc<Zp>, t_degree: usize) -> Self {
        GcdAccumulator {
            ring: Arc::clone(ring),
            t_degree,
            mu: None,
            parts: Vec::new(),
            seen: HashSet::new(),
            levels: BTreeMap::new(),
        }
    }

    fn trivial(&self) -> bool {
        self.levels.values().any(MonicGcd::is_trivial)
    }

    fn is_one(&self) -> bool {
        self.mu == Some(0) && self.trivial()
    }

    fn add(&mut self, m: &LambdaSeries) -> Result<()> {
        let Some(mu_m) = m.min_valuation() else {
            return Ok(());
        };
        if mu_m > 0 && !m.is_exact() {
            return Err(Error::TruncationTooSmall(format!(
                "a minor is divisible by p^{mu_m} in its first {} coefficients but its tail is unknown",
                self.t_degree
            )));
        }
        self.mu = Some(self.mu.map_or(mu_m, |mu| mu.min(mu_m)));
        if self.trivial() {
            return Ok(());
        }
        let k_m = self.ring.precision() - mu_m;
        let ring_m = self.ring.at_precision(k_m);
        let m_red = poly::div_p_pow(&self.ring, &ring_m, m.raw(), mu_m);
        let lambda = m_red.iter().position(|c| ring_m.is_unit(c)).expect("valuation zero");
        let (g, _) = hensel_split(&ring_m, &m_red, lambda);
        let k = if m.is_exact() {
            k_m
        } else {
            k_m.min(tail_cap(&ring_m, &g, self.t_degree))
        };
        if k == 0 {
            return Err(Error::TruncationTooSmall(format!(
                "the distinguished part of a minor is undetermined by its first {} coefficients",
                self.t_degree
            )));
        }
        let ring_k = ring_m.at_precision(k);
        let g = poly::reduce(&ring_k, &g);
        if !self.seen.insert((k, g.clone())) {
            return Ok(());
        }
        for (_, level) in self.levels.range_mut(..=k) {
            level.add(&ring_k, g.clone());
        }
        self.parts.push((Arc::clone(&ring_k), g));
        if !self.levels.contains_key(&k) {
            let mut level = MonicGcd::new(&ring_k);
            for (r, f) in self.parts.iter().filter(|(r, _)| r.precision() >= k) {
                level.add(r, f.clone());
            }
            self.levels.insert(k, level);
        }
        Ok(())
    }

    fn finish(self) -> Result<Option<CharElement>> {
        let Some(mu) = self.mu else {
            return Ok(None);
        };
        let bound = self.levels.values().map(MonicGcd::degree).min().unwrap_or(0);
        for d in (1..=bound).rev() {
            let found = common_divisors(&self.parts, d)?;
            if let Some(g) = found.first() {
                let top = found_ring(&self.parts);
                let ring = top.at_precision(agreement(&top, &found));
                return Ok(Some(CharElement::from_parts(mu, &ring, poly::reduce(&ring, g))));
            }
        }
        let ring = found_ring(&self.parts);
        Ok(Some(CharElement::from_parts(mu, &ring, vec![BigUint::from(1u32)])))
    }
}

fn found_ring(parts: &[(Arc<Zp>, Vec<BigUint>)]) -> Arc<Zp> {
    parts
        .iter()
        .map(|(r, _)| r)
        .max_by_key(|r| r.precision())
        .map(Arc::clone)
        .expect("a minor was added")
}

/// Precision to which the remainder of an unknown tail `T^D * e` modulo the
/// distinguished polynomial `g` vanishes: `T^lambda` is `p^a` times something
/// modulo `g`, so `T^D` is divisible by `p^(a * floor(D / lambda))`.
fn tail_cap(ring: &Zp, g: &[BigUint], t_degree: usize) -> u32 {
    let lambda = g.len() - 1;
    if lambda == 0 {
        return ring.precision();
    }
    match poly::min_valuation(ring, &g[..lambda]) {
        None => ring.precision(),
        Some(a) => a.saturating_mul(u32::try_from(t_degree / lambda).unwrap_or(u32::MAX)),
    }
}

/// gcd of all `r x r` minors, enumerated depth-first over row subsets. Each
/// node stores the minors of its row set against every column subset, keyed
/// by column bitmask, and extends them by Laplace expansion along a new last
/// row.
fn minors_gcd(ring: &Arc<Zp>, t_degree: usize, rows: &Rows, r: usize) -> Result<Option<CharElement>> {
    if r == 0 {
        return Ok(Some(CharElement::one(ring)));
    }
    let n_cols = rows.first().map_or(0, Vec::len);
    if r > rows.len() || r > n_cols {
        return Ok(None);
    }
    assert!(n_cols <= 64, "minor enumeration supports at most 64 columns");
    let mut acc = GcdAccumulator::new(ring, t_degree);
    let mut root = BTreeMap::new();
    root.insert(0u64, LambdaSeries::one(ring, t_degree));
    visit(rows, r, 0, 0, &root, &mut acc)?;
    acc.finish()
}

fn visit(
    rows: &Rows,
    r: usize,
    depth: usize,
    next_row: usize,
    table: &BTreeMap<u64, LambdaSeries>,
    acc: &mut GcdAccumulator,
) -> Result<bool> {
    if depth == r {
        for minor in table.values() {
            acc.add(minor)?;
            if acc.is_one() {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    let remaining = r - depth;
    for i in next_row..=rows.len() - remaining {
        let child = extend(&rows[i], depth, table);
        if child.is_empty() {
            continue;
        }
        if visit(rows, r, depth + 1, i + 1, &child, acc)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn extend(row: &[LambdaSeries], depth: usize, table: &BTreeMap<u64, LambdaSeries>) -> BTreeMap<u64, LambdaSeries> {
    let mut child: BTreeMap<u64, LambdaSeries> = BTreeMap::new();
    for (&mask, minor) in table {
        for (c, a) in row.iter().enumerate() {
            let bit = 1u64 << c;
            if mask & bit != 0 || is_exact_zero(a) {
                continue;
            }
            let position = (mask & (bit - 1)).count_ones() as usize;
            let term = a.mul_unchecked(minor);
            let term = if (depth + position) % 2 == 1 { term.neg() } else { term };
            let key = mask | bit;
            let updated = match child.remove(&key) {
                Some(prev) => prev.checked_add(&term).expect("same ring"),
                None => term,
            };
            child.insert(key, updated);
        }
    }
    child.retain(|_, f| !is_exact_zero(f));
    child
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32) -> Arc<Zp> {
        Zp::new(p, n).unwrap()
    }

    fn s(r: &Arc<Zp>, d: usize, c: &[i64]) -> LambdaSeries {
        LambdaSeries::new(r, d, c.iter().copied()).unwrap()
    }

    fn ce(r: &Arc<Zp>, mu: u32, g: &[i64]) -> CharElement {
        CharElement::new(r, mu, g.iter().copied()).unwrap()
    }

    fn matrix(r: &Arc<Zp>, d: usize, rows: &[&[&[i64]]]) -> SeriesMatrix {
        let cols = rows[0].len();
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|c| s(r, d, c)).collect())
            .collect();
        SeriesMatrix::from_rows(r, d, rows, cols).unwrap()
    }

    #[test]
    fn determinant_of_diagonal() {
        let r = ring(5, 3);
        let m = matrix(&r, 6, &[&[&[-5, 1], &[0]], &[&[0], &[-25, 1]]]);
        let f = determinantal_divisor(&m, 2).unwrap().unwrap();
        assert_eq!(f, ce(&r, 0, &[125, -30, 1]));
    }

    #[test]
    fn finite_cyclic_module_has_trivial_divisor() {
        // [T | p]: minors T and p are coprime.
        let r = ring(2, 3);
        let m = matrix(&r, 4, &[&[&[0, 1], &[2]]]);
        assert!(determinantal_divisor(&m, 1).unwrap().unwrap().is_one());
    }

    #[test]
    fn common_factor_survives() {
        // [T(T-3) | T(T+9)]: gcd T.
        let r = ring(3, 4);
        let m = matrix(&r, 6, &[&[&[0, -3, 1], &[0, 9, 1]]]);
        assert_eq!(determinantal_divisor(&m, 1).unwrap().unwrap(), CharElement::t(&r));
    }

    #[test]
    fn vanishing_minors_report_none() {
        let r = ring(3, 2);
        let m = matrix(&r, 4, &[&[&[0, 1], &[0, 1]], &[&[0, 2], &[0, 2]]]);
        assert!(determinantal_divisor(&m, 2).unwrap().is_none());
        assert_eq!(determinantal_divisor(&m, 1).unwrap().unwrap(), CharElement::t(&r));
    }

    #[test]
    fn unit_pivots_agree_with_plain_enumeration() {
        let r = ring(3, 3);
        let m = matrix(
            &r,
            8,
            &[
                &[&[1, 1], &[0, 1], &[0], &[3]],
                &[&[3, 0, 1], &[2, 1], &[0], &[0, 3]],
                &[&[0], &[0], &[-3, 1], &[0]],
                &[&[0], &[0], &[9], &[0, 0, 1]],
            ],
        );
        for k in 1..=4 {
            let fast = determinantal_divisor(&m, k).unwrap();
            let slow = minors_gcd(&r, 8, &m.to_rows(), k).unwrap();
            assert_eq!(fast, slow, "r = {k}");
        }
    }

    #[test]
    fn mu_of_gcd_is_minimum() {
        let r = ring(3, 4);
        let m = matrix(&r, 4, &[&[&[9, 9], &[27]]]);
        assert_eq!(
            determinantal_divisor(&m, 1).unwrap().unwrap(),
            CharElement::p_power(&r, 2)
        );
    }

    #[test]
    fn coarse_minors_do_not_blur_fine_ones() {
        // The minors include T^2 + 2 modulo 4 and 2T; T divides T^2 + 2 only
        // modulo 2, and no T + c divides it modulo 4.
        let r = ring(2, 2);
        let m = matrix(
            &r,
            3,
            &[
                &[&[3, 1, 3], &[2, 2], &[0, 2], &[0], &[3, 0, 2], &[2]],
                &[&[2, 2], &[2, 0, 1], &[0], &[0, 2], &[2], &[0, 0, 2]],
            ],
        );
        assert_eq!(determinantal_divisor(&m, 2).unwrap().unwrap(), CharElement::one(&r));
    }

    #[test]
    fn divisor_is_taken_modulo_the_precision() {
        // (2 + 3T)(2 + T) = 3T^2 modulo 4, so T divides every 2 x 2 minor.
        let r = ring(2, 2);
        let m = matrix(
            &r,
            2,
            &[&[&[0, 1], &[0], &[2, 3], &[0]], &[&[0], &[2, 1], &[0], &[0, 3]]],
        );
        let f = determinantal_divisor(&m, 2).unwrap().unwrap();
        assert_eq!((f.mu(), f.lambda(), f.precision()), (0, 1, 1));
    }
}
