//! Brute-force reference computations on tiny truncated modules.
//!
//! Everything here runs on machine words and enumerates: minors of the
//! polynomial matrices by cofactor expansion over `Z/p^e`, divisors by long
//! division by every candidate `p^mu * g` with `g` distinguished, and Koszul
//! homology of the truncation `(Z/p^e)[T]/(T^D)` by listing the elements of
//! each chain group. None of it calls the linear algebra or the series code of
//! the main path.

mod arith;
mod compare;
mod fuzz;

pub use arith::{minors, subsets, PolyRing, Tiny, TinyRing};
pub use compare::{check_sigma, compare_char, compare_invariants, tiny_from_sigma, InstanceReport, Verdict};
pub use fuzz::{fuzz, random_tiny_sigma, FuzzReport};

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Largest element table enumerated for a module.
pub const MAX_ELEMENTS: u64 = 6561;

/// Largest chain group enumerated by [`brute_koszul`].
pub const MAX_CHAIN_ELEMENTS: u64 = 1 << 21;

/// A square matrix over the tiny ring, as rows of entries.
pub type TinyMatrix = Vec<Vec<Tiny>>;

/// The module underlying a [`TinyModule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TinyBase {
    /// `R^k / P R^m` with `P` given as `k` rows of `m` entries.
    Presentation { k: usize, relations: TinyMatrix },
    /// `sum Z/p^(n_j)` with `T` acting by `theta` (column `j` is `T e_j`).
    Finite { orders: Vec<u32>, theta: Vec<Vec<u64>> },
}

/// A truncated module with `d` commuting actions.
///
/// For a presentation, actions are `k x k` matrices over the ring together
/// with `m x m` lifts `Q_i` satisfying `h_i P = P Q_i`; for a finite module
/// they are integer matrices on the generators and the lifts are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TinyModule {
    pub ring: TinyRing,
    pub base: TinyBase,
    pub actions: Vec<TinyMatrix>,
    pub lifts: Vec<TinyMatrix>,
    pub finite_actions: Vec<Vec<Vec<u64>>>,
}

impl TinyModule {
    /// Checks the bounds `p in {2, 3}`, `N <= 2`, `D <= 3`, `d <= 2` and
    /// the element-table bound.
    pub fn new(
        ring: TinyRing,
        base: TinyBase,
        actions: Vec<TinyMatrix>,
        lifts: Vec<TinyMatrix>,
        finite_actions: Vec<Vec<Vec<u64>>>,
    ) -> Result<TinyModule> {
        if !(ring.p == 2 || ring.p == 3) || ring.e == 0 || ring.e > 2 || ring.d == 0 || ring.d > 3 {
            return Err(Error::SizeBound(format!(
                "oracle needs p in {{2, 3}}, 1 <= N <= 2, 1 <= D <= 3; got p = {}, N = {}, D = {}",
                ring.p, ring.e, ring.d
            )));
        }
        let m = TinyModule {
            ring,
            base,
            actions,
            lifts,
            finite_actions,
        };
        if m.rank() > 2 {
            return Err(Error::SizeBound(format!("oracle needs d <= 2, got {}", m.rank())));
        }
        let size = m.ambient_size();
        if size.map_or(true, |s| s > MAX_ELEMENTS) {
            return Err(Error::SizeBound(format!(
                "the element table would have more than {MAX_ELEMENTS} entries"
            )));
        }
        Ok(m)
    }

    /// Number of actions `d`.
    pub fn rank(&self) -> usize {
        match self.base {
            TinyBase::Presentation { .. } => self.actions.len(),
            TinyBase::Finite { .. } => self.finite_actions.len(),
        }
    }

    fn ambient_size(&self) -> Option<u64> {
        let exp = match &self.base {
            TinyBase::Presentation { k, .. } => u32::try_from(k * self.ring.d).ok()?.checked_mul(self.ring.e)?,
            TinyBase::Finite { orders, .. } => orders.iter().sum(),
        };
        self.ring.p.checked_pow(exp)
    }
}

/// The maximal divisors of a list of polynomials over `Z/p^e`: every
/// candidate `p^mu * g` (`g` distinguished of degree `lambda`, coefficients
/// modulo `p^(e - mu)`) dividing all of them, for the largest `mu` and then
/// the largest `lambda` that admit one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteChar {
    pub mu: u32,
    pub lambda: usize,
    /// `e - mu`: the modulus of the candidate coefficients.
    pub precision: u32,
    /// Coefficient vectors `g_0, ..., g_lambda` of the candidates.
    pub candidates: Vec<Vec<u64>>,
}

impl BruteChar {
    /// The class of `1`, for modules known to be finite.
    pub fn one(precision: u32) -> BruteChar {
        BruteChar {
            mu: 0,
            lambda: 0,
            precision,
            candidates: vec![vec![1]],
        }
    }
}

/// Distinguished polynomials of degree `lambda` modulo `p^prec`.
fn distinguished(p: u64, prec: u32, lambda: usize) -> Vec<Vec<u64>> {
    let choices = p.pow(prec - 1);
    let mut out = vec![Vec::new()];
    for _ in 0..lambda {
        let mut next = Vec::with_capacity(out.len() * choices as usize);
        for prefix in &out {
            for x in 0..choices {
                let mut v = prefix.clone();
                v.push(p * x);
                next.push(v);
            }
        }
        out = next;
    }
    for v in out.iter_mut() {
        v.push(1);
    }
    out
}

/// Maximal common divisors of `elements` by trial division, `None` when they
/// all vanish.
///
/// A common divisor `p^mu * g` has `mu` at most the least valuation of an
/// element and `lambda` at most the index of the first coefficient of least
/// valuation, so only those candidates are tried.
pub fn brute_divisor(ring: &PolyRing, elements: &[Vec<u64>]) -> Option<BruteChar> {
    let nonzero: Vec<Vec<u64>> = elements
        .iter()
        .map(|m| ring.trim(m.clone()))
        .filter(|m| !m.is_empty())
        .collect();
    let shape = |m: &Vec<u64>| {
        let mu = m.iter().filter_map(|&c| ring.val(c)).min().expect("nonzero");
        let lambda = m.iter().position(|&c| ring.val(c) == Some(mu)).expect("attained");
        (mu, lambda)
    };
    let shapes: Vec<(u32, usize)> = nonzero.iter().map(shape).collect();
    let mu = shapes.iter().map(|s| s.0).min()?;
    let max_lambda = shapes.iter().map(|s| s.1).min().expect("nonempty");
    let prec = ring.e - mu;
    let reduced = PolyRing::new(ring.p, prec);
    let pm = ring.p.pow(mu);
    let quotients: Vec<Vec<u64>> = nonzero
        .iter()
        .map(|m| reduced.trim(m.iter().map(|c| c / pm).collect()))
        .collect();
    for lambda in (0..=max_lambda).rev() {
        let good: Vec<Vec<u64>> = distinguished(ring.p, prec, lambda)
            .into_iter()
            .filter(|g| quotients.iter().all(|m| reduced.rem_monic(m, g).is_empty()))
            .collect();
        if !good.is_empty() {
            return Some(BruteChar {
                mu,
                lambda,
                precision: prec,
                candidates: good,
            });
        }
    }
    unreachable!("1 divides everything")
}

/// The entries of a truncated matrix as polynomials.
fn polys(m: &TinyMatrix) -> Vec<Vec<Vec<u64>>> {
    m.iter().map(|row| row.to_vec()).collect()
}

/// Characteristic element of the base: the maximal divisor of the maximal
/// minors of a presentation, whose entries are read as polynomials of degree
/// below `D`. A finite module is presented by `[T I - theta | diag(p^(n_j))]`
/// over `Z/p^(sum n + 1)`.
pub fn brute_char(m: &TinyModule) -> Option<BruteChar> {
    match &m.base {
        TinyBase::Presentation { k, relations } => {
            let cols = relations.first().map_or(0, Vec::len);
            if cols < *k {
                return None;
            }
            let ring = PolyRing::new(m.ring.p, m.ring.e);
            brute_divisor(&ring, &minors(&ring, &polys(relations), *k))
        }
        TinyBase::Finite { orders, theta } => {
            let k = orders.len();
            let ring = PolyRing::new(m.ring.p, orders.iter().sum::<u32>() + 1);
            if k == 0 {
                return Some(BruteChar::one(ring.e));
            }
            let rel: Vec<Vec<Vec<u64>>> = (0..k)
                .map(|i| {
                    let mut row: Vec<Vec<u64>> = (0..k)
                        .map(|j| {
                            let c = (ring.q - theta[i][j] % ring.q) % ring.q;
                            if i == j {
                                vec![c, 1]
                            } else {
                                vec![c]
                            }
                        })
                        .collect();
                    row.extend((0..k).map(|j| {
                        if i == j {
                            vec![ring.p.pow(orders[j])]
                        } else {
                            Vec::new()
                        }
                    }));
                    row
                })
                .collect();
            brute_divisor(&ring, &minors(&ring, &rel, k))
        }
    }
}

/// Precision of the coefficients the oracle sees in [`brute_char`].
pub fn char_precision(m: &TinyModule) -> u32 {
    match &m.base {
        TinyBase::Presentation { .. } => m.ring.e,
        TinyBase::Finite { orders, .. } => orders.iter().sum::<u32>() + 1,
    }
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `-` applied to every entry.
fn negate(ring: &TinyRing, m: &TinyMatrix) -> TinyMatrix {
    m.iter().map(|row| row.iter().map(|x| ring.neg(x)).collect()).collect()
}

/// `a - I`.
fn minus_identity(ring: &TinyRing, a: &TinyMatrix) -> TinyMatrix {
    a.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| if i == j { ring.sub(x, &ring.one()) } else { x.clone() })
                .collect()
        })
        .collect()
}

/// Koszul differential `K_q -> K_(q-1)` on blocks `phi_s` of size
/// `rows x cols`: column block `S`, row block `S \ {s_j}`, sign `(-1)^j`.
fn koszul_differential(ring: &TinyRing, phis: &[TinyMatrix], rows: usize, cols: usize, q: usize) -> TinyMatrix {
    let d = phis.len();
    let source = subsets(d, q);
    let target = subsets(d, q.wrapping_sub(1));
    let mut out = vec![vec![ring.zero(); source.len() * cols]; target.len() * rows];
    if q == 0 {
        return out;
    }
    for (c, set) in source.iter().enumerate() {
        for (j, &s) in set.iter().enumerate() {
            let smaller: Vec<usize> = set.iter().copied().filter(|&x| x != s).collect();
            let r = target.iter().position(|t| *t == smaller).expect("face of a subset");
            for a in 0..rows {
                for b in 0..cols {
                    let x = &phis[s][a][b];
                    out[r * rows + a][c * cols + b] = if j % 2 == 0 { x.clone() } else { ring.neg(x) };
                }
            }
        }
    }
    out
}

/// Characteristic elements of `H_0, ..., H_d` for a presented base: `H_(n-1)`
/// is the homology of the mapping cone of `P` on the Koszul complexes of the
/// actions and their lifts, and its characteristic element is the maximal
/// divisor of the `r_n x r_n` minors of the cone differential `D_n`, with
/// `r_1 = k` and `r_(n+1) = rank Tot_n - r_n`.
pub fn brute_homology_chars(m: &TinyModule) -> Option<Vec<Option<BruteChar>>> {
    let TinyBase::Presentation { k, relations } = &m.base else {
        return None;
    };
    let ring = &m.ring;
    let k = *k;
    let cols = relations.first().map_or(0, Vec::len);
    let d = m.actions.len();
    if d == 0 {
        return Some(vec![brute_char(m)]);
    }
    let h: Vec<TinyMatrix> = m.actions.iter().map(|a| minus_identity(ring, a)).collect();
    let q: Vec<TinyMatrix> = m.lifts.iter().map(|a| minus_identity(ring, a)).collect();
    let tot = |n: usize| binomial(d, n) * k + if n == 0 { 0 } else { binomial(d, n - 1) * cols };
    let mut out = Vec::new();
    let mut r = k;
    for n in 1..=d + 1 {
        let rows = tot(n - 1);
        let width = tot(n);
        let mut dn = vec![vec![ring.zero(); width]; rows];
        let top = koszul_differential(ring, &h, k, k, n);
        let k_n = binomial(d, n) * k;
        let k_prev = binomial(d, n - 1) * k;
        for (i, row) in top.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                dn[i][j] = x.clone();
            }
        }
        for block in 0..binomial(d, n - 1) {
            for a in 0..k {
                for b in 0..cols {
                    dn[block * k + a][k_n + block * cols + b] = relations[a][b].clone();
                }
            }
        }
        if n >= 2 {
            let low = negate(ring, &koszul_differential(ring, &q, cols, cols, n - 1));
            for (i, row) in low.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    dn[k_prev + i][k_n + j] = x.clone();
                }
            }
        }
        let poly_ring = PolyRing::new(ring.p, ring.e);
        out.push(brute_divisor(&poly_ring, &minors(&poly_ring, &polys(&dn), r)));
        r = width.saturating_sub(r);
    }
    Some(out)
}

/// A finite abelian group given by an element table: ambient vectors in
/// `prod Z/moduli[i]` modulo a subgroup, with cosets labelled `0..size`.
struct CosetTable {
    moduli: Vec<u64>,
    label: Vec<u32>,
    reps: Vec<Vec<u64>>,
}

impl CosetTable {
    fn new(moduli: Vec<u64>, generators: &[Vec<u64>]) -> CosetTable {
        let size: u64 = moduli.iter().product();
        let size = usize::try_from(size).expect("bounded table");
        let encode = |v: &[u64]| {
            v.iter()
                .zip(&moduli)
                .fold(0usize, |acc, (x, m)| acc * (*m as usize) + (*x as usize))
        };
        let decode = |mut c: usize| {
            let mut v = vec![0u64; moduli.len()];
            for i in (0..moduli.len()).rev() {
                v[i] = (c % moduli[i] as usize) as u64;
                c /= moduli[i] as usize;
            }
            v
        };
        let add = |a: &[u64], b: &[u64]| {
            a.iter()
                .zip(b)
                .zip(&moduli)
                .map(|((x, y), m)| (x + y) % m)
                .collect::<Vec<u64>>()
        };
        let mut subgroup = vec![vec![0u64; moduli.len()]];
        let mut seen = HashSet::new();
        seen.insert(encode(&subgroup[0]));
        let mut i = 0;
        while i < subgroup.len() {
            for g in generators {
                let s = add(&subgroup[i], g);
                if seen.insert(encode(&s)) {
                    subgroup.push(s);
                }
            }
            i += 1;
        }
        let mut label = vec![u32::MAX; size];
        let mut reps = Vec::new();
        for c in 0..size {
            if label[c] != u32::MAX {
                continue;
            }
            let id = u32::try_from(reps.len()).expect("bounded table");
            let v = decode(c);
            for s in &subgroup {
                label[encode(&add(&v, s))] = id;
            }
            reps.push(v);
        }
        CosetTable { moduli, label, reps }
    }

    fn size(&self) -> usize {
        self.reps.len()
    }

    fn label_of(&self, v: &[u64]) -> usize {
        let c = v
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (x, m)| acc * (*m as usize) + (*x % *m) as usize);
        self.label[c] as usize
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let v: Vec<u64> = self.reps[a]
            .iter()
            .zip(&self.reps[b])
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        self.label_of(&v)
    }

    fn neg(&self, a: usize) -> usize {
        let v: Vec<u64> = self.reps[a]
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| (m - x) % m)
            .collect();
        self.label_of(&v)
    }

    /// Table of an additive endomorphism given on ambient vectors.
    fn table(&self, f: impl Fn(&[u64]) -> Vec<u64>) -> Vec<usize> {
        self.reps.iter().map(|v| self.label_of(&f(v))).collect()
    }
}

/// The element table of the truncated base and the tables of `h_i - 1`.
fn element_tables(m: &TinyModule) -> (CosetTable, Vec<Vec<usize>>) {
    let ring = &m.ring;
    match &m.base {
        TinyBase::Presentation { k, relations } => {
            let (k, dd) = (*k, ring.d);
            let moduli = vec![ring.q; k * dd];
            let cols = relations.first().map_or(0, Vec::len);
            let mut gens = Vec::new();
            for c in 0..cols {
                for a in 0..dd {
                    let mut t_a = ring.zero();
                    t_a[a] = 1;
                    let mut v = Vec::with_capacity(k * dd);
                    for row in relations.iter().take(k) {
                        v.extend(ring.mul(&t_a, &row[c]));
                    }
                    gens.push(v);
                }
            }
            let table = CosetTable::new(moduli, &gens);
            let apply = |h: &TinyMatrix, v: &[u64]| {
                let mut out = Vec::with_capacity(k * dd);
                for row in h.iter().take(k) {
                    let mut acc = ring.zero();
                    for (j, x) in row.iter().enumerate() {
                        acc = ring.add(&acc, &ring.mul(x, &v[j * dd..(j + 1) * dd]));
                    }
                    out.extend(acc);
                }
                out
            };
            let tables = m
                .actions
                .iter()
                .map(|h| {
                    let g = minus_identity(ring, h);
                    table.table(|v| apply(&g, v))
                })
                .collect();
            (table, tables)
        }
        TinyBase::Finite { orders, .. } => {
            let moduli: Vec<u64> = orders.iter().map(|&n| ring.p.pow(n)).collect();
            let table = CosetTable::new(moduli.clone(), &[]);
            let tables = m
                .finite_actions
                .iter()
                .map(|h| {
                    table.table(|v| {
                        (0..v.len())
                            .map(|i| {
                                let s: u64 = (0..v.len()).map(|j| h[i][j] % moduli[i] * v[j]).sum();
                                (s + moduli[i] - v[i]) % moduli[i]
                            })
                            .collect()
                    })
                })
                .collect();
            (table, tables)
        }
    }
}

/// Group invariants (sorted exponents `e` of the cyclic factors `Z/p^e`) of
/// `H_0, ..., H_d` of the Koszul complex of the truncated module, by listing
/// cycles and boundaries.
pub fn brute_koszul(m: &TinyModule) -> Result<Vec<Vec<u32>>> {
    let (table, phis) = element_tables(m);
    let d = phis.len();
    let size = table.size() as u64;
    for q in 0..=d {
        let chain = size.checked_pow(u32::try_from(binomial(d, q)).expect("small"));
        if chain.map_or(true, |c| c > MAX_CHAIN_ELEMENTS) {
            return Err(Error::SizeBound(format!(
                "the chain group K_{q} has more than {MAX_CHAIN_ELEMENTS} elements"
            )));
        }
    }
    let p_table: Vec<usize> = (0..table.size())
        .map(|a| (1..m.ring.p).fold(a, |acc, _| table.add(acc, a)))
        .collect();
    let decode = |mut c: u64, len: usize| {
        let mut v = vec![0usize; len];
        for x in v.iter_mut().rev() {
            *x = (c % size) as usize;
            c /= size;
        }
        v
    };
    let encode = |v: &[usize]| v.iter().fold(0u64, |acc, &x| acc * size + x as u64);
    // d_q on a chain given by coordinates indexed by q-subsets.
    let differential = |q: usize, x: &[usize]| -> Vec<usize> {
        let source = subsets(d, q);
        let target = subsets(d, q - 1);
        let mut out = vec![0usize; target.len()];
        for (c, set) in source.iter().enumerate() {
            for (j, &s) in set.iter().enumerate() {
                let smaller: Vec<usize> = set.iter().copied().filter(|&t| t != s).collect();
                let r = target.iter().position(|t| *t == smaller).expect("face");
                let y = phis[s][x[c]];
                let y = if j % 2 == 0 { y } else { table.neg(y) };
                out[r] = table.add(out[r], y);
            }
        }
        out
    };
    let mut result = Vec::new();
    for q in 0..=d {
        let len = binomial(d, q);
        let count = size.pow(u32::try_from(len).expect("small"));
        let cycles: Vec<Vec<usize>> = (0..count)
            .map(|c| decode(c, len))
            .filter(|x| q == 0 || differential(q, x).iter().all(|&y| y == 0))
            .collect();
        let boundaries: HashSet<u64> = if q == d {
            std::iter::once(encode(&vec![0; len])).collect()
        } else {
            let above = size.pow(u32::try_from(binomial(d, q + 1)).expect("small"));
            (0..above)
                .map(|c| encode(&differential(q + 1, &decode(c, binomial(d, q + 1)))))
                .collect()
        };
        // n_i = #{h in H : p^i h = 0} = #{z in Z : p^i z in B} / |B|.
        let b = boundaries.len() as u64;
        let h_size = cycles.len() as u64 / b;
        let mut log_n = vec![0u32];
        let mut current = cycles.clone();
        loop {
            current = current
                .iter()
                .map(|z| z.iter().map(|&x| p_table[x]).collect())
                .collect();
            let n_i = current.iter().filter(|z| boundaries.contains(&encode(z))).count() as u64 / b;
            log_n.push(log_p(m.ring.p, n_i));
            if n_i == h_size {
                break;
            }
        }
        let at_least: Vec<u32> = log_n.windows(2).map(|w| w[1] - w[0]).collect();
        let mut invariants = Vec::new();
        for (idx, &c) in at_least.iter().enumerate() {
            let next = at_least.get(idx + 1).copied().unwrap_or(0);
            invariants.extend(std::iter::repeat(u32::try_from(idx + 1).expect("small")).take((c - next) as usize));
        }
        invariants.sort_unstable();
        result.push(invariants);
    }
    Ok(result)
}

fn log_p(p: u64, mut n: u64) -> u32 {
    let mut e = 0;
    while n > 1 {
        n /= p;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuzz_finds_no_mismatch() {
        let report = fuzz(7, 60);
        assert_eq!(report.instances, 60, "{report:?}");
        assert!(report.mismatches.is_empty(), "{:#?}", report.mismatches);
    }

    fn presentation(ring: TinyRing, k: usize, relations: TinyMatrix, actions: Vec<TinyMatrix>) -> TinyModule {
        let lifts = actions.clone();
        TinyModule::new(
            ring,
            TinyBase::Presentation { k, relations },
            actions,
            lifts,
            Vec::new(),
        )
        .unwrap()
    }

    #[test]
    fn brute_char_examples() {
        let r = TinyRing::new(2, 2, 3);
        let t = vec![0, 1, 0];
        let two = r.constant(2);
        let m = presentation(r, 1, vec![vec![two.clone(), t.clone()]], Vec::new());
        assert_eq!(brute_char(&m).unwrap(), BruteChar::one(2));

        let m = presentation(r, 1, vec![vec![t.clone()]], Vec::new());
        let c = brute_char(&m).unwrap();
        assert_eq!((c.mu, c.lambda), (0, 1));
        assert!(c.candidates.contains(&vec![0, 1]));

        let m = presentation(r, 1, vec![vec![two]], Vec::new());
        let c = brute_char(&m).unwrap();
        assert_eq!((c.mu, c.lambda), (1, 0));
    }

    #[test]
    fn finite_modules_have_trivial_brute_char() {
        let r = TinyRing::new(3, 2, 1);
        for (orders, theta) in [
            (vec![1], vec![vec![0]]),
            (vec![2], vec![vec![0]]),
            (vec![1, 1], vec![vec![0, 1], vec![0, 0]]),
        ] {
            let m = TinyModule::new(
                r,
                TinyBase::Finite { orders, theta },
                Vec::new(),
                Vec::new(),
                Vec::new(),
            )
            .unwrap();
            let c = brute_char(&m).unwrap();
            assert_eq!((c.mu, c.lambda), (0, 0));
        }
    }

    #[test]
    fn brute_koszul_examples() {
        let r = TinyRing::new(2, 2, 3);
        let t = vec![0, 1, 0];
        let id = vec![vec![r.one()]];
        let m = presentation(r, 1, vec![vec![t.clone()]], vec![id.clone()]);
        assert_eq!(brute_koszul(&m).unwrap(), vec![vec![2], vec![2]]);

        let one_plus_t = vec![vec![vec![1, 1, 0]]];
        let m = TinyModule::new(
            r,
            TinyBase::Presentation {
                k: 1,
                relations: vec![Vec::new()],
            },
            vec![one_plus_t],
            vec![Vec::new()],
            Vec::new(),
        )
        .unwrap();
        // In the truncation, T^(D-1) is killed by T.
        assert_eq!(brute_koszul(&m).unwrap(), vec![vec![2], vec![2]]);

        let r = TinyRing::new(2, 1, 3);
        let m = presentation(r, 1, vec![vec![r.constant(2)]], vec![id.clone(), id]);
        assert_eq!(brute_koszul(&m).unwrap(), vec![vec![1; 3], vec![1; 6], vec![1; 3]]);
    }

    #[test]
    fn size_bound_is_enforced() {
        let r = TinyRing::new(3, 2, 3);
        let z = r.zero();
        let err = TinyModule::new(
            r,
            TinyBase::Presentation {
                k: 2,
                relations: vec![vec![z.clone(), z.clone()], vec![z.clone(), z]],
            },
            Vec::new(),
            Vec::new(),
            Vec::new(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::SizeBound(_)));
    }
}
