//! Linear algebra over the finite chain ring `Z/p^N`: Smith normal form,
//! kernels, linear solves and the structure of finitely generated quotients.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::padic::Zp;

/// Dense matrix over `Z/p^N`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpnMatrix {
    ring: Arc<Zp>,
    rows: usize,
    cols: usize,
    data: Vec<BigUint>,
}

impl ZpnMatrix {
    pub fn zeros(ring: &Arc<Zp>, rows: usize, cols: usize) -> ZpnMatrix {
        ZpnMatrix {
            ring: Arc::clone(ring),
            rows,
            cols,
            data: vec![BigUint::zero(); rows * cols],
        }
    }

    pub fn identity(ring: &Arc<Zp>, n: usize) -> ZpnMatrix {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, BigUint::from(1u32));
        }
        m
    }

    pub fn from_fn(ring: &Arc<Zp>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigUint) -> ZpnMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(ring.reduce(f(i, j)));
            }
        }
        ZpnMatrix {
            ring: Arc::clone(ring),
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(ring: &Arc<Zp>, rows: usize, columns: &[Vec<BigUint>]) -> ZpnMatrix {
        Self::from_fn(ring, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn ring(&self) -> &Arc<Zp> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigUint) {
        let v = self.ring.reduce(v);
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigUint> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigUint>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, other: &ZpnMatrix) -> ZpnMatrix {
        assert_eq!(self.cols, other.rows, "matrix dimensions");
        let mut out = ZpnMatrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        for c in out.data.iter_mut() {
            *c = self.ring.reduce(std::mem::take(c));
        }
        out
    }

    pub fn apply(&self, x: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(self.cols, x.len(), "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigUint::zero();
                for (j, xj) in x.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !xj.is_zero() {
                        acc += a * xj;
                    }
                }
                self.ring.reduce(acc)
            })
            .collect()
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &ZpnMatrix) -> ZpnMatrix {
        assert_eq!(self.rows, other.rows, "row counts");
        Self::from_fn(&self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Rows `rows` and columns `cols` in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ZpnMatrix {
        Self::from_fn(&self.ring, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn neg(&self) -> ZpnMatrix {
        ZpnMatrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| self.ring.neg(c)).collect(),
        }
    }

    fn row_axpy(&mut self, target: usize, q: &BigUint, source: usize) {
        // row_target -= q * row_source
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let t = self.ring.mul(q, s);
            let idx = target * self.cols + j;
            self.data[idx] = self.ring.sub(&self.data[idx], &t);
        }
    }

    fn col_axpy(&mut self, target: usize, q: &BigUint, source: usize) {
        // col_target -= q * col_source
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + source];
            if s.is_zero() {
                continue;
            }
            let t = self.ring.mul(q, s);
            let idx = i * self.cols + target;
            self.data[idx] = self.ring.sub(&self.data[idx], &t);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: &BigUint) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = self.ring.mul(&self.data[idx], s);
        }
    }

    fn scale_col(&mut self, c: usize, s: &BigUint) {
        for i in 0..self.rows {
            let idx = i * self.cols + c;
            self.data[idx] = self.ring.mul(&self.data[idx], s);
        }
    }
}

/// `U * A * V = S` with `S` diagonal, `S[i][i] = p^valuations[i]` (or zero
/// when the valuation is `None`), `U` and `V` invertible.
#[derive(Debug, Clone)]
pub struct Smith {
    pub valuations: Vec<Option<u32>>,
    pub u: ZpnMatrix,
    pub u_inv: ZpnMatrix,
    pub v: ZpnMatrix,
}

pub fn smith(a: &ZpnMatrix) -> Smith {
    let ring = Arc::clone(&a.ring);
    let (r, c) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut u = ZpnMatrix::identity(&ring, r);
    let mut u_inv = ZpnMatrix::identity(&ring, r);
    let mut v = ZpnMatrix::identity(&ring, c);
    let mut valuations = Vec::with_capacity(r.min(c));
    for t in 0..r.min(c) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in t..r {
            for j in t..c {
                if let Some(val) = ring.val(m.get(i, j)) {
                    if best.map_or(true, |(b, _, _)| val < b) {
                        best = Some((val, i, j));
                        if val == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((e, pi, pj)) = best else {
            valuations.extend(std::iter::repeat(None).take(r.min(c) - t));
            break;
        };
        m.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        m.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let unit = ring.div_p_pow(m.get(t, t), e);
        let w = ring.inv(&unit).expect("unit part of the pivot");
        m.scale_row(t, &w);
        u.scale_row(t, &w);
        u_inv.scale_col(t, &unit);

        for i in t + 1..r {
            if m.get(i, t).is_zero() {
                continue;
            }
            let q = ring.div_p_pow(m.get(i, t), e);
            m.row_axpy(i, &q, t);
            u.row_axpy(i, &q, t);
            // Inverse of "row_i -= q row_t" is "col_t += q col_i" on U^-1.
            let neg_q = ring.neg(&q);
            u_inv.col_axpy(t, &neg_q, i);
        }
        for j in t + 1..c {
            if m.get(t, j).is_zero() {
                continue;
            }
            let q = ring.div_p_pow(m.get(t, j), e);
            m.col_axpy(j, &q, t);
            v.col_axpy(j, &q, t);
        }
        valuations.push(Some(e));
    }
    Smith {
        valuations,
        u,
        u_inv,
        v,
    }
}

/// Generators (as columns) of `{x : A x = 0}`.
pub fn kernel(a: &ZpnMatrix) -> ZpnMatrix {
    let ring = &a.ring;
    let s = smith(a);
    let n = ring.precision();
    let mut gens = Vec::new();
    for i in 0..a.cols {
        let scale = match s.valuations.get(i).copied().flatten() {
            Some(0) => continue,
            Some(e) => ring.p_pow(n - e),
            None => BigUint::from(1u32),
        };
        let col: Vec<BigUint> = s.v.column(i).iter().map(|x| ring.mul(x, &scale)).collect();
        gens.push(col);
    }
    ZpnMatrix::from_columns(ring, a.cols, &gens)
}

/// Some `x` with `A x = b`, if one exists.
pub fn solve(a: &ZpnMatrix, b: &[BigUint]) -> Option<Vec<BigUint>> {
    solve_with(&smith(a), a.cols, b)
}

pub fn solve_with(s: &Smith, cols: usize, b: &[BigUint]) -> Option<Vec<BigUint>> {
    let ring = &s.u.ring;
    let ub = s.u.apply(b);
    let mut y = vec![BigUint::zero(); cols];
    for (i, c) in ub.iter().enumerate() {
        match s.valuations.get(i).copied().flatten() {
            Some(e) => {
                if c.is_zero() {
                    continue;
                }
                if ring.val(c)? < e {
                    return None;
                }
                y[i] = ring.div_p_pow(c, e);
            }
            None => {
                if !c.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(s.v.apply(&y))
}

/// `(Z/p^N)^n / span(relations)` decomposed as `sum Z/p^orders[i]`.
///
/// New generator `i` is column `kept[i]` of `U^-1`; a vector `x` has
/// coordinates `(U x)[kept]`.
#[derive(Debug, Clone)]
pub struct QuotientStructure {
    pub orders: Vec<u32>,
    pub kept: Vec<usize>,
    pub u: ZpnMatrix,
    pub u_inv: ZpnMatrix,
}

impl QuotientStructure {
    /// Matrix of an endomorphism (given on the free cover and preserving the
    /// relations) in the new generators.
    pub fn transport(&self, endo: &ZpnMatrix) -> ZpnMatrix {
        let full = self.u.mul(endo).mul(&self.u_inv);
        full.select(&self.kept, &self.kept)
    }

    pub fn coordinates(&self, x: &[BigUint]) -> Vec<BigUint> {
        let y = self.u.apply(x);
        self.kept.iter().map(|&i| y[i].clone()).collect()
    }

    /// `log_p` of the order of the quotient.
    pub fn length(&self) -> u64 {
        self.orders.iter().map(|&o| u64::from(o)).sum()
    }
}

pub fn quotient_structure(relations: &ZpnMatrix) -> QuotientStructure {
    let ring = &relations.ring;
    let n = ring.precision();
    let s = smith(relations);
    let mut orders = Vec::new();
    let mut kept = Vec::new();
    for i in 0..relations.rows {
        let e = match s.valuations.get(i).copied().flatten() {
            Some(e) => e,
            None => n,
        };
        if e > 0 {
            orders.push(e);
            kept.push(i);
        }
    }
    QuotientStructure {
        orders,
        kept,
        u: s.u,
        u_inv: s.u_inv,
    }
}
