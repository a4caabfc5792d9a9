//! Matrices over truncated `Z_p[[T]]`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::padic::Zp;
use crate::series::LambdaSeries;
use crate::zpn::ZpnMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    ring: Arc<Zp>,
    t_degree: usize,
    rows: usize,
    cols: usize,
    entries: Vec<LambdaSeries>,
}

impl SeriesMatrix {
    pub fn zeros(ring: &Arc<Zp>, t_degree: usize, rows: usize, cols: usize) -> SeriesMatrix {
        SeriesMatrix {
            ring: Arc::clone(ring),
            t_degree,
            rows,
            cols,
            entries: vec![LambdaSeries::zero(ring, t_degree); rows * cols],
        }
    }

    pub fn identity(ring: &Arc<Zp>, t_degree: usize, n: usize) -> SeriesMatrix {
        Self::scalar(&LambdaSeries::one(ring, t_degree), n)
    }

    /// `f * I_n`.
    pub fn scalar(f: &LambdaSeries, n: usize) -> SeriesMatrix {
        let mut m = Self::zeros(f.ring(), f.t_degree(), n, n);
        for i in 0..n {
            m.entries[i * n + i] = f.clone();
        }
        m
    }

    pub fn diagonal(ring: &Arc<Zp>, t_degree: usize, diag: &[LambdaSeries]) -> Result<SeriesMatrix> {
        let n = diag.len();
        let mut m = Self::zeros(ring, t_degree, n, n);
        for (i, f) in diag.iter().enumerate() {
            m.set(i, i, f.clone())?;
        }
        Ok(m)
    }

    /// Builds a matrix from rows of series; all entries must share `(p, N, D)`.
    pub fn from_rows(
        ring: &Arc<Zp>,
        t_degree: usize,
        rows: Vec<Vec<LambdaSeries>>,
        cols: usize,
    ) -> Result<SeriesMatrix> {
        let n_rows = rows.len();
        let mut entries = Vec::with_capacity(n_rows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::invalid(format!("expected {cols} columns, found {}", row.len())));
            }
            for e in row {
                check_entry(ring, t_degree, &e)?;
                entries.push(e);
            }
        }
        Ok(SeriesMatrix {
            ring: Arc::clone(ring),
            t_degree,
            rows: n_rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        ring: &Arc<Zp>,
        t_degree: usize,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LambdaSeries,
    ) -> SeriesMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        SeriesMatrix {
            ring: Arc::clone(ring),
            t_degree,
            rows,
            cols,
            entries,
        }
    }

    pub fn ring(&self) -> &Arc<Zp> {
        &self.ring
    }

    pub fn t_degree(&self) -> usize {
        self.t_degree
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LambdaSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: LambdaSeries) -> Result<()> {
        check_entry(&self.ring, self.t_degree, &f)?;
        self.entries[i * self.cols + j] = f;
        Ok(())
    }

    pub fn row_vec(&self, i: usize) -> Vec<LambdaSeries> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<LambdaSeries>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(LambdaSeries::is_exact)
    }

    fn check_same_shape_ring(&self, other: &SeriesMatrix) -> Result<()> {
        self.ring.check_same(&other.ring)?;
        if self.t_degree != other.t_degree {
            return Err(Error::mismatch(format!(
                "T-degree {} vs {}",
                self.t_degree, other.t_degree
            )));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &SeriesMatrix) -> Result<SeriesMatrix> {
        self.check_same_shape_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(SeriesMatrix::from_fn(
            &self.ring,
            self.t_degree,
            self.rows,
            other.cols,
            |i, j| {
                let mut acc = LambdaSeries::zero(&self.ring, self.t_degree);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if (a.is_zero() && a.is_exact()) || (b.is_zero() && b.is_exact()) {
                        continue;
                    }
                    acc = acc.checked_add(&a.mul_unchecked(b)).expect("same ring");
                }
                acc
            },
        ))
    }

    pub fn checked_add(&self, other: &SeriesMatrix) -> Result<SeriesMatrix> {
        self.zip(other, LambdaSeries::checked_add)
    }

    pub fn checked_sub(&self, other: &SeriesMatrix) -> Result<SeriesMatrix> {
        self.zip(other, LambdaSeries::checked_sub)
    }

    fn zip(
        &self,
        other: &SeriesMatrix,
        op: impl Fn(&LambdaSeries, &LambdaSeries) -> Result<LambdaSeries>,
    ) -> Result<SeriesMatrix> {
        self.check_same_shape_ring(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::invalid("matrix shapes differ"));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| op(a, b))
            .collect::<Result<_>>()?;
        Ok(SeriesMatrix {
            ring: Arc::clone(&self.ring),
            t_degree: self.t_degree,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn map(&self, f: impl Fn(&LambdaSeries) -> LambdaSeries) -> SeriesMatrix {
        let entries: Vec<LambdaSeries> = self.entries.iter().map(f).collect();
        let (ring, t_degree) = entries
            .first()
            .map(|e| (Arc::clone(e.ring()), e.t_degree()))
            .unwrap_or((Arc::clone(&self.ring), self.t_degree));
        SeriesMatrix {
            ring,
            t_degree,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn try_map(
        &self,
        ring: &Arc<Zp>,
        t_degree: usize,
        f: impl Fn(&LambdaSeries) -> Result<LambdaSeries>,
    ) -> Result<SeriesMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(SeriesMatrix {
            ring: Arc::clone(ring),
            t_degree,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// `diag(self, other)`.
    pub fn block_diagonal(&self, other: &SeriesMatrix) -> Result<SeriesMatrix> {
        self.check_same_shape_ring(other)?;
        let zero = LambdaSeries::zero(&self.ring, self.t_degree);
        Ok(SeriesMatrix::from_fn(
            &self.ring,
            self.t_degree,
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.rows, j - self.cols).clone(),
                _ => zero.clone(),
            },
        ))
    }

    /// `[[a, b], [c, d]]` from four blocks with compatible shapes.
    pub fn from_blocks(a: &SeriesMatrix, b: &SeriesMatrix, c: &SeriesMatrix, d: &SeriesMatrix) -> Result<SeriesMatrix> {
        for m in [b, c, d] {
            a.check_same_shape_ring(m)?;
        }
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::invalid("block shapes are incompatible"));
        }
        Ok(SeriesMatrix::from_fn(
            &a.ring,
            a.t_degree,
            a.rows + c.rows,
            a.cols + b.cols,
            |i, j| match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - a.cols).clone(),
                (false, true) => c.get(i - a.rows, j).clone(),
                (false, false) => d.get(i - a.rows, j - a.cols).clone(),
            },
        ))
    }

    pub fn transpose(&self) -> SeriesMatrix {
        SeriesMatrix::from_fn(&self.ring, self.t_degree, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    /// Every entry at `(p^n, T^d)`.
    pub fn at_precision(&self, n: u32, d: usize) -> Result<SeriesMatrix> {
        let ring = self.ring.at_precision(n);
        self.try_map(&ring, d, |e| e.at_p_precision(n)?.with_t_degree(d))
    }

    /// Matrix of the `Z/p^N`-linear map induced on the truncation
    /// `(Z_p[[T]] / (p^N, T^D))^cols -> (...)^rows`, with basis vector
    /// `T^a e_j` at index `j * D + a`.
    pub fn flatten(&self) -> ZpnMatrix {
        let d = self.t_degree;
        ZpnMatrix::from_fn(&self.ring, self.rows * d, self.cols * d, |r, c| {
            let (i, a) = (r / d, r % d);
            let (j, b) = (c / d, c % d);
            if a < b {
                BigUint::default()
            } else {
                self.get(i, j).raw()[a - b].clone()
            }
        })
    }
}

fn check_entry(ring: &Zp, t_degree: usize, e: &LambdaSeries) -> Result<()> {
    ring.check_same(e.ring())?;
    if e.t_degree() != t_degree {
        return Err(Error::mismatch(format!("T-degree {} vs {}", e.t_degree(), t_degree)));
    }
    Ok(())
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
