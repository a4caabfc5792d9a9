//! Arithmetic in `R = (Z/p^e)[T]/(T^D)` on machine words.

/// `(Z/p^e)[T]/(T^D)` with `p^e` small enough for `u64` products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TinyRing {
    pub p: u64,
    pub e: u32,
    pub d: usize,
    pub q: u64,
}

/// An element of a [`TinyRing`]: `D` coefficients in `[0, p^e)`.
pub type Tiny = Vec<u64>;

impl TinyRing {
    pub fn new(p: u64, e: u32, d: usize) -> TinyRing {
        TinyRing { p, e, d, q: p.pow(e) }
    }

    pub fn zero(&self) -> Tiny {
        vec![0; self.d]
    }

    pub fn one(&self) -> Tiny {
        let mut v = self.zero();
        if self.d > 0 {
            v[0] = 1 % self.q;
        }
        v
    }

    pub fn constant(&self, c: u64) -> Tiny {
        let mut v = self.zero();
        if self.d > 0 {
            v[0] = c % self.q;
        }
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Tiny {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.q).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Tiny {
        a.iter().zip(b).map(|(x, y)| (x + self.q - y) % self.q).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Tiny {
        a.iter().map(|x| (self.q - x) % self.q).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Tiny {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(self.d - i) {
                out[i + j] = (out[i + j] + x * y) % self.q;
            }
        }
        out
    }

    pub fn scale(&self, a: &[u64], c: u64) -> Tiny {
        a.iter().map(|x| x * (c % self.q) % self.q).collect()
    }

    /// `p`-adic valuation of a residue, `None` for zero.
    pub fn val(&self, x: u64) -> Option<u32> {
        let mut x = x % self.q;
        if x == 0 {
            return None;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    /// Inverse of a unit modulo `p^e`.
    pub fn inv(&self, x: u64) -> u64 {
        let (mut a, mut b) = (i128::from(x % self.q), i128::from(self.q));
        let (mut s, mut t) = (1i128, 0i128);
        while b != 0 {
            let k = a / b;
            (a, b) = (b, a - k * b);
            (s, t) = (t, s - k * t);
        }
        assert_eq!(a, 1, "not a unit");
        u64::try_from(s.rem_euclid(i128::from(self.q))).expect("nonnegative")
    }
}

/// Polynomials over `Z/p^e` without truncation, as coefficient vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyRing {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

impl PolyRing {
    pub fn new(p: u64, e: u32) -> PolyRing {
        PolyRing { p, e, q: p.pow(e) }
    }

    /// Drops trailing zero coefficients.
    pub fn trim(&self, mut a: Vec<u64>) -> Vec<u64> {
        for x in a.iter_mut() {
            *x %= self.q;
        }
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.q)
            .collect();
        self.trim(v)
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        self.trim(a.iter().map(|x| (self.q - x % self.q) % self.q).collect())
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.q;
            }
        }
        self.trim(out)
    }

    /// `p`-adic valuation of a residue, `None` for zero.
    pub fn val(&self, x: u64) -> Option<u32> {
        let mut x = x % self.q;
        if x == 0 {
            return None;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    /// Remainder of `a` on division by the monic `g`.
    pub fn rem_monic(&self, a: &[u64], g: &[u64]) -> Vec<u64> {
        let mut r = self.trim(a.to_vec());
        let lambda = g.len() - 1;
        while r.len() > lambda {
            let top = r.len() - 1;
            let c = r[top];
            let shift = top - lambda;
            for (i, gi) in g.iter().enumerate() {
                r[shift + i] = (r[shift + i] + self.q - c * gi % self.q) % self.q;
            }
            r = self.trim(r);
        }
        r
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self, m: &[Vec<Vec<u64>>]) -> Vec<u64> {
        match m.len() {
            0 => vec![1 % self.q],
            1 => self.trim(m[0][0].clone()),
            n => {
                let mut acc = Vec::new();
                for j in 0..n {
                    if self.trim(m[0][j].clone()).is_empty() {
                        continue;
                    }
                    let minor: Vec<Vec<Vec<u64>>> = m[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|(c, _)| *c != j)
                                .map(|(_, x)| x.clone())
                                .collect()
                        })
                        .collect();
                    let term = self.mul(&m[0][j], &self.det(&minor));
                    acc = if j % 2 == 0 {
                        self.add(&acc, &term)
                    } else {
                        self.sub(&acc, &term)
                    };
                }
                acc
            }
        }
    }
}

/// All `r`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(0, n, r, &mut Vec::new(), &mut out);
    }
    out
}

/// All `r x r` minors of a polynomial matrix.
pub fn minors(ring: &PolyRing, m: &[Vec<Vec<u64>>], r: usize) -> Vec<Vec<u64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let row_sets = subsets(rows, r);
    let col_sets = subsets(cols, r);
    let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rs in &row_sets {
        for cs in &col_sets {
            let sub: Vec<Vec<Vec<u64>>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            out.push(ring.det(&sub));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn long_division() {
        let r = PolyRing::new(3, 2);
        // (T + 3) (T + 1) = T^2 + 4T + 3
        assert!(r.rem_monic(&[3, 4, 1], &[3, 1]).is_empty());
        assert_eq!(r.rem_monic(&[1, 0, 1], &[0, 1]), vec![1]);
        assert!(r.rem_monic(&[], &[3, 1]).is_empty());
    }

    #[test]
    fn determinants_and_minors() {
        let r = PolyRing::new(2, 2);
        let t = vec![0, 1];
        let m = vec![vec![t.clone(), vec![1]], vec![vec![], t.clone()]];
        assert_eq!(r.det(&m), vec![0, 0, 1]);
        assert_eq!(minors(&r, &m, 1).len(), 4);
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(TinyRing::new(2, 2, 1).inv(3), 3);
    }
}
