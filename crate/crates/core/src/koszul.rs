//! Koszul homology of a `Z_p^d`-action on a `Z_p[[T]]`-module and the Akashi
//! series, the alternating product of the characteristic elements of the
//! homology groups.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::charel::{CharElement, CharQuotient};
use crate::determinantal::determinantal_divisor;
use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::modules::{FiniteFormModule, FlatModule, PresentationModule};
use crate::padic::Zp;
use crate::series::LambdaSeries;
use crate::zpn::{kernel, quotient_structure, smith, solve_with, Smith, ZpnMatrix};

/// The underlying `Z_p[[T]]`-module of a [`SigmaModule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaBase {
    Presentation(PresentationModule),
    Finite(FiniteFormModule),
}

impl SigmaBase {
    pub fn ring(&self) -> &Arc<Zp> {
        match self {
            SigmaBase::Presentation(m) => m.ring(),
            SigmaBase::Finite(m) => m.ring(),
        }
    }

    pub fn char_element(&self) -> Result<CharElement> {
        match self {
            SigmaBase::Presentation(m) => m.char_element(),
            SigmaBase::Finite(m) => m.char_element(),
        }
    }

    pub fn flatten(&self) -> FlatModule {
        match self {
            SigmaBase::Presentation(m) => m.flatten(),
            SigmaBase::Finite(m) => m.flatten(),
        }
    }
}

/// Actions of topological generators `h_1, ..., h_d` of `H = Z_p^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Actions {
    /// `h_i` on the free cover with lifts `Q_i`, `h_i P = P Q_i`.
    Series {
        h: Vec<SeriesMatrix>,
        lifts: Vec<SeriesMatrix>,
    },
    /// `h_i` on the generators of a finite form.
    Flat(Vec<ZpnMatrix>),
}

/// A `Z_p[[T]]`-module with commuting, invertible actions of `d` generators
/// of `H = Z_p^d`: a module over `Z_p[[Gamma x Z_p^d]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaModule {
    base: SigmaBase,
    actions: Actions,
}

impl SigmaModule {
    /// A presented module with actions given by `k x k` matrices and lifts
    /// `Q_i` (`m x m`) with `h_i P = P Q_i`. The `m` relations must be
    /// independent. When lifts are not supplied, `Q_i = h_i` is used if `h_i`
    /// commutes with a square `P`.
    pub fn over_presentation(
        base: PresentationModule,
        actions: Vec<SeriesMatrix>,
        lifts: Option<Vec<SeriesMatrix>>,
    ) -> Result<SigmaModule> {
        let k = base.generators();
        let m = base.relation_count();
        if m > k || determinantal_divisor(base.relations(), m)?.is_none() {
            return Err(Error::invalid(format!(
                "the {m} relations are not independent at (p^{}, T^{})",
                base.p_precision(),
                base.t_degree()
            )));
        }
        let p = base.relations();
        let lifts = match lifts {
            Some(l) if l.len() == actions.len() => l,
            Some(l) => {
                return Err(Error::invalid(format!(
                    "{} actions but {} lifts",
                    actions.len(),
                    l.len()
                )));
            }
            None if m == k => actions.clone(),
            None => vec![SeriesMatrix::zeros(base.ring(), base.t_degree(), m, m); actions.len()],
        };
        for (i, (h, q)) in actions.iter().zip(&lifts).enumerate() {
            if h.rows() != k || h.cols() != k || q.rows() != m || q.cols() != m {
                return Err(Error::invalid(format!(
                    "action {i} must be {k}x{k} with an {m}x{m} lift"
                )));
            }
            let hp = h.checked_mul(p)?;
            let pq = p.checked_mul(q)?;
            if !same_entries(&hp, &pq)? {
                return Err(Error::invalid(format!(
                    "action {i} does not descend to the module: h P != P Q"
                )));
            }
        }
        let module = SigmaModule {
            base: SigmaBase::Presentation(base),
            actions: Actions::Series { h: actions, lifts },
        };
        module.check_group_action()?;
        Ok(module)
    }

    /// A finite module with actions given on its generators.
    pub fn over_finite(base: FiniteFormModule, actions: Vec<ZpnMatrix>) -> Result<SigmaModule> {
        let k = base.generators();
        for (i, h) in actions.iter().enumerate() {
            base.ring().check_same(h.ring())?;
            if h.rows() != k || h.cols() != k {
                return Err(Error::invalid(format!("action {i} must be {k}x{k}")));
            }
            if !base.respects_relations(h) {
                return Err(Error::invalid(format!("action {i} does not preserve the relations")));
            }
        }
        let module = SigmaModule {
            base: SigmaBase::Finite(base),
            actions: Actions::Flat(actions),
        };
        module.check_group_action()?;
        Ok(module)
    }

    /// The base with `d` generators acting trivially.
    pub fn trivial(base: SigmaBase, d: usize) -> Result<SigmaModule> {
        match base {
            SigmaBase::Presentation(m) => {
                let id = SeriesMatrix::identity(m.ring(), m.t_degree(), m.generators());
                SigmaModule::over_presentation(m, vec![id; d], None)
            }
            SigmaBase::Finite(m) => {
                let id = ZpnMatrix::identity(m.ring(), m.generators());
                SigmaModule::over_finite(m, vec![id; d])
            }
        }
    }

    pub fn base(&self) -> &SigmaBase {
        &self.base
    }

    pub fn ring(&self) -> &Arc<Zp> {
        self.base.ring()
    }

    pub fn prime(&self) -> u64 {
        self.ring().prime()
    }

    /// Rank `d` of `H`.
    pub fn rank(&self) -> usize {
        match &self.actions {
            Actions::Series { h, .. } => h.len(),
            Actions::Flat(h) => h.len(),
        }
    }

    /// Action matrices of a presented module.
    pub fn series_actions(&self) -> Option<(&[SeriesMatrix], &[SeriesMatrix])> {
        match &self.actions {
            Actions::Series { h, lifts } => Some((h, lifts)),
            Actions::Flat(_) => None,
        }
    }

    /// Action matrices of a finite module.
    pub fn finite_actions(&self) -> Option<&[ZpnMatrix]> {
        match &self.actions {
            Actions::Flat(h) => Some(h),
            Actions::Series { .. } => None,
        }
    }

    /// The module at truncation `(p^N, T^D)` (the module itself for a finite
    /// base) as exact linear algebra over `Z/p^N`.
    pub fn flat_model(&self) -> FlatSigma {
        let module = self.base.flatten();
        let actions = match &self.actions {
            Actions::Series { h, .. } => h.iter().map(SeriesMatrix::flatten).collect(),
            Actions::Flat(h) => h.clone(),
        };
        FlatSigma { module, actions }
    }

    fn check_group_action(&self) -> Result<()> {
        let flat = self.flat_model();
        let rel = smith(&flat.module.relations);
        let cols = flat.module.relations.cols();
        let theta = &flat.module.theta;
        for (i, a) in flat.actions.iter().enumerate() {
            if !image_in_span(&rel, cols, &commutator(a, theta)) {
                return Err(Error::invalid(format!("action {i} is not Z_p[[T]]-linear")));
            }
            for (j, b) in flat.actions.iter().enumerate().skip(i + 1) {
                if !image_in_span(&rel, cols, &commutator(a, b)) {
                    return Err(Error::invalid(format!("actions {i} and {j} do not commute")));
                }
            }
            if quotient_structure(&a.hconcat(&flat.module.relations)).length() != 0 {
                return Err(Error::invalid(format!("action {i} is not invertible on the module")));
            }
        }
        Ok(())
    }

    /// The same module at `(p^n, T^d)`.
    fn at_precision(&self, n: u32, d: usize) -> Result<SigmaModule> {
        match (&self.base, &self.actions) {
            (SigmaBase::Presentation(m), Actions::Series { h, lifts }) => Ok(SigmaModule {
                base: SigmaBase::Presentation(m.at_precision(n, d)?),
                actions: Actions::Series {
                    h: h.iter().map(|x| x.at_precision(n, d)).collect::<Result<_>>()?,
                    lifts: lifts.iter().map(|x| x.at_precision(n, d)).collect::<Result<_>>()?,
                },
            }),
            _ => Ok(self.clone()),
        }
    }
}

fn same_entries(a: &SeriesMatrix, b: &SeriesMatrix) -> Result<bool> {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if !a.get(i, j).checked_sub(b.get(i, j))?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn commutator(a: &ZpnMatrix, b: &ZpnMatrix) -> ZpnMatrix {
    let ab = a.mul(b);
    let ba = b.mul(a);
    let ring = a.ring();
    ZpnMatrix::from_fn(ring, ab.rows(), ab.cols(), |i, j| ring.sub(ab.get(i, j), ba.get(i, j)))
}

fn image_in_span(span: &Smith, cols: usize, m: &ZpnMatrix) -> bool {
    (0..m.cols()).all(|j| solve_with(span, cols, &m.column(j)).is_some())
}

/// A module at truncation together with its `H`-action, all as matrices over
/// `Z/p^N` acting on a free cover.
#[derive(Debug, Clone)]
pub struct FlatSigma {
    pub module: FlatModule,
    pub actions: Vec<ZpnMatrix>,
}

/// Subsets of `{0, ..., d-1}` of size `q`, in lexicographic order.
pub fn koszul_basis(d: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for s in start..d {
            cur.push(s);
            go(s + 1, d, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if q <= d {
        go(0, d, q, &mut Vec::new(), &mut out);
    }
    out
}

/// A nonzero block of a Koszul differential: (row slot, column slot,
/// operator index, sign).
type KoszulBlock = (usize, usize, usize, bool);

/// Block structure of `d_q : K_q -> K_{q-1}`.
fn koszul_blocks(d: usize, q: usize) -> (usize, usize, Vec<KoszulBlock>) {
    let cols = koszul_basis(d, q);
    let rows = if q == 0 { Vec::new() } else { koszul_basis(d, q - 1) };
    let mut blocks = Vec::new();
    for (c, s) in cols.iter().enumerate() {
        if q == 0 {
            break;
        }
        for (j, &sj) in s.iter().enumerate() {
            let face: Vec<usize> = s.iter().copied().filter(|&x| x != sj).collect();
            let r = rows.iter().position(|x| *x == face).expect("face is a subset");
            blocks.push((r, c, sj, j % 2 == 1));
        }
    }
    (rows.len(), cols.len(), blocks)
}

fn series_koszul(ops: &[SeriesMatrix], ring: &Arc<Zp>, t_degree: usize, k: usize, q: usize) -> SeriesMatrix {
    let d = ops.len();
    let (r, c, blocks) = koszul_blocks(d, q);
    let mut m = SeriesMatrix::zeros(ring, t_degree, r * k, c * k);
    for (br, bc, op, negative) in blocks {
        for i in 0..k {
            for j in 0..k {
                let e = ops[op].get(i, j);
                let e = if negative { e.neg() } else { e.clone() };
                m.set(br * k + i, bc * k + j, e).expect("same ring");
            }
        }
    }
    m
}

fn zpn_koszul(ops: &[ZpnMatrix], ring: &Arc<Zp>, n: usize, q: usize) -> ZpnMatrix {
    let d = ops.len();
    let (r, c, blocks) = koszul_blocks(d, q);
    let mut m = ZpnMatrix::zeros(ring, r * n, c * n);
    for (br, bc, op, negative) in blocks {
        for i in 0..n {
            for j in 0..n {
                let e = ops[op].get(i, j);
                let e = if negative { ring.neg(e) } else { e.clone() };
                m.set(br * n + i, bc * n + j, e);
            }
        }
    }
    m
}

fn zpn_block_repeat(m: &ZpnMatrix, copies: usize) -> ZpnMatrix {
    let (r, c) = (m.rows(), m.cols());
    ZpnMatrix::from_fn(m.ring(), r * copies, c * copies, |i, j| {
        if i / r.max(1) == j / c.max(1) {
            m.get(i % r, j % c).clone()
        } else {
            BigUint::zero()
        }
    })
}

fn series_block_repeat(m: &SeriesMatrix, copies: usize) -> SeriesMatrix {
    let mut out = SeriesMatrix::zeros(m.ring(), m.t_degree(), m.rows() * copies, m.cols() * copies);
    for b in 0..copies {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(b * m.rows() + i, b * m.cols() + j, m.get(i, j).clone())
                    .expect("same ring");
            }
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Characteristic elements of `H_0, ..., H_d` of a presented module.
///
/// With `F_1 --P--> F_0 -> M -> 0` and lifts `Q_i`, `P` is a map of Koszul
/// complexes `K(F_1; Q - 1) -> K(F_0; h - 1)`; since `P` is injective, the
/// homology of `M` is that of the mapping cone. The cone differential `D_n`
/// has generic rank `r_n` fixed by `r_1 = rank Tot_0` and
/// `r_(n+1) = rank Tot_n - r_n`, and `char H_(n-1)` is the gcd of the
/// `r_n`-minors of `D_n`.
fn presentation_homology_chars(
    m: &PresentationModule,
    h: &[SeriesMatrix],
    lifts: &[SeriesMatrix],
) -> Result<Vec<CharElement>> {
    let ring = m.ring();
    let td = m.t_degree();
    let d = h.len();
    let k = m.generators();
    let rels = m.relation_count();
    let p = m.relations();
    let one_minus = |x: &SeriesMatrix| x.checked_sub(&SeriesMatrix::identity(ring, td, x.rows()));
    let phi: Vec<SeriesMatrix> = h.iter().map(one_minus).collect::<Result<_>>()?;
    let psi: Vec<SeriesMatrix> = lifts.iter().map(one_minus).collect::<Result<_>>()?;
    let tot = |n: usize| binomial(d, n) * k + if n == 0 { 0 } else { binomial(d, n - 1) * rels };

    let mut chars = Vec::with_capacity(d + 1);
    let mut rank = tot(0);
    for n in 1..=d + 1 {
        let top_left = series_koszul(&phi, ring, td, k, n);
        let top_right = series_block_repeat(p, binomial(d, n - 1));
        let bottom_right = series_koszul(&psi, ring, td, rels, n - 1).map(LambdaSeries::neg);
        let bottom_left = SeriesMatrix::zeros(ring, td, bottom_right.rows(), top_left.cols());
        let dn = SeriesMatrix::from_blocks(&top_left, &top_right, &bottom_left, &bottom_right)?;
        let f = determinantal_divisor(&dn, rank)?.ok_or_else(|| {
            Error::NotTorsionAtPrecision(format!(
                "H_{} is not certified torsion at (p^{}, T^{td})",
                n - 1,
                ring.precision()
            ))
        })?;
        chars.push(f);
        rank = tot(n)
            .checked_sub(rank)
            .ok_or_else(|| Error::NotTorsionAtPrecision(format!("H_{n} has negative generic rank")))?;
    }
    if rank != 0 {
        return Err(Error::NotTorsionAtPrecision(format!(
            "H_{d} is not torsion: the top differential has a kernel of rank {rank}"
        )));
    }
    Ok(chars)
}

/// Options for [`akashi_series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AkashiOptions {
    /// Recompute at `T`-degree `D + 1` and at `p`-precision `N - 1` and require
    /// the same characteristic elements.
    pub stability_check: bool,
}

impl Default for AkashiOptions {
    fn default() -> Self {
        AkashiOptions { stability_check: true }
    }
}

/// Characteristic elements of `H_0(H, M), ..., H_d(H, M)`.
pub fn homology_chars(m: &SigmaModule, opts: AkashiOptions) -> Result<Vec<CharElement>> {
    let chars = unchecked_homology_chars(m)?;
    if let (true, SigmaBase::Presentation(base)) = (opts.stability_check, &m.base) {
        let (n, d) = (base.p_precision(), base.t_degree());
        let mut variants = vec![(n, d + 1)];
        if n >= 2 {
            variants.push((n - 1, d));
        }
        for (n2, d2) in variants {
            let other = m.at_precision(n2, d2).and_then(|x| unchecked_homology_chars(&x));
            let other = other
                .map_err(|e| Error::TruncationNotStable(format!("at (p^{n2}, T^{d2}) the computation fails: {e}")))?;
            for (i, (a, b)) in chars.iter().zip(&other).enumerate() {
                if a != b {
                    return Err(Error::TruncationNotStable(format!(
                        "char H_{i} is {a} at (p^{n}, T^{d}) but {b} at (p^{n2}, T^{d2})"
                    )));
                }
            }
        }
    }
    Ok(chars)
}

fn unchecked_homology_chars(m: &SigmaModule) -> Result<Vec<CharElement>> {
    match (&m.base, &m.actions) {
        (SigmaBase::Presentation(base), Actions::Series { h, lifts }) => {
            if h.is_empty() {
                return Ok(vec![base.char_element()?]);
            }
            presentation_homology_chars(base, h, lifts)
        }
        _ => (0..=m.rank())
            .map(|i| truncated_koszul_homology(m, i).char_element())
            .collect(),
    }
}

/// `H_i(H, M)`: its characteristic element and the homology of the
/// truncated module (the module itself for a finite base) in finite form.
#[derive(Debug, Clone)]
pub struct KoszulHomology {
    pub degree: usize,
    pub char_element: CharElement,
    pub truncated: FiniteFormModule,
}

pub fn koszul_homology(m: &SigmaModule, i: usize, opts: AkashiOptions) -> Result<KoszulHomology> {
    if i > m.rank() {
        return Err(Error::invalid(format!("homology degree {i} exceeds d = {}", m.rank())));
    }
    let chars = homology_chars(m, opts)?;
    Ok(KoszulHomology {
        degree: i,
        char_element: chars[i].clone(),
        truncated: truncated_koszul_homology(m, i),
    })
}

/// `H_i` of the Koszul complex of the truncated module, computed by exact
/// linear algebra over `Z/p^N`, with its induced `T`-action.
pub fn truncated_koszul_homology(m: &SigmaModule, i: usize) -> FiniteFormModule {
    let flat = m.flat_model();
    flat_koszul_homology(&flat, i)
}

/// `H_q` of the Koszul complex on `(h_1 - 1, ..., h_d - 1)` for a module
/// given on a free cover.
pub fn flat_koszul_homology(flat: &FlatSigma, q: usize) -> FiniteFormModule {
    let ring = Arc::clone(flat.module.ring());
    let n = flat.module.rank();
    let d = flat.actions.len();
    let ops: Vec<ZpnMatrix> = flat
        .actions
        .iter()
        .map(|a| {
            ZpnMatrix::from_fn(&ring, n, n, |i, j| {
                if i == j {
                    ring.sub(a.get(i, j), &BigUint::from(1u32))
                } else {
                    a.get(i, j).clone()
                }
            })
        })
        .collect();
    let rel = |deg: usize| zpn_block_repeat(&flat.module.relations, binomial(d, deg));
    let dim = binomial(d, q) * n;
    let rel_q = rel(q);

    let cycles = if q == 0 {
        ZpnMatrix::identity(&ring, dim)
    } else {
        let dq = zpn_koszul(&ops, &ring, n, q);
        let ker = kernel(&dq.hconcat(&rel(q - 1).neg()));
        let top: Vec<usize> = (0..dim).collect();
        let all: Vec<usize> = (0..ker.cols()).collect();
        ker.select(&top, &all)
    };
    let boundaries = if q < d {
        zpn_koszul(&ops, &ring, n, q + 1).hconcat(&rel_q)
    } else {
        rel_q
    };
    let s = cycles.cols();
    let span = cycles.hconcat(&boundaries);
    let ker = kernel(&span);
    let relations = ker.select(&(0..s).collect::<Vec<_>>(), &(0..ker.cols()).collect::<Vec<_>>());

    let theta = zpn_block_repeat(&flat.module.theta, binomial(d, q));
    let span_smith = smith(&span);
    let image = theta.mul(&cycles);
    let columns: Vec<Vec<BigUint>> = (0..s)
        .map(|j| {
            let w = solve_with(&span_smith, span.cols(), &image.column(j)).expect("T preserves the cycles");
            w[..s].to_vec()
        })
        .collect();
    let action = ZpnMatrix::from_columns(&ring, s, &columns);
    let structure = quotient_structure(&relations);
    FiniteFormModule::from_parts(structure.orders.clone(), structure.transport(&action))
}

/// Akashi series with the data it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct AkashiResult {
    pub homology_chars: Vec<CharElement>,
    pub akashi: CharElement,
    pub ord_at_zero: usize,
    pub leading_valuation: u32,
}

/// Alternating product `prod_i char(H_i)^((-1)^i)`, resolved by exact
/// cancellation.
pub fn akashi_from_chars(ring: &Arc<Zp>, chars: &[CharElement]) -> Result<AkashiResult> {
    let mut q = CharQuotient::new();
    for (i, f) in chars.iter().enumerate() {
        if i % 2 == 0 {
            q.multiply(f.clone());
        } else {
            q.divide(f.clone());
        }
    }
    let akashi = q.resolve(ring)?;
    Ok(AkashiResult {
        homology_chars: chars.to_vec(),
        ord_at_zero: akashi.ord_at_zero(),
        leading_valuation: akashi.leading_term_valuation(),
        akashi,
    })
}

pub fn akashi_series(m: &SigmaModule, opts: AkashiOptions) -> Result<AkashiResult> {
    let chars = homology_chars(m, opts)?;
    akashi_from_chars(m.ring(), &chars)
}

/// A morphism between [`SigmaModule`]s: a matrix over `Z_p[[T]]` on
/// generators of presented modules, or a matrix over `Z/p^N` on the free
/// covers of the flat models.
#[derive(Debug, Clone)]
pub enum ModuleMap {
    Series(SeriesMatrix),
    Flat(ZpnMatrix),
}

impl ModuleMap {
    fn flatten(&self) -> ZpnMatrix {
        match self {
            ModuleMap::Series(m) => m.flatten(),
            ModuleMap::Flat(m) => m.clone(),
        }
    }
}

/// Outcome of [`verify_multiplicativity`].
#[derive(Debug, Clone)]
pub struct MultiplicativityReport {
    pub holds: bool,
    pub akashi_l: AkashiResult,
    pub akashi_m: AkashiResult,
    pub akashi_n: AkashiResult,
}

/// Checks that `0 -> L --alpha--> M --beta--> N -> 0` is a short exact
/// sequence of modules with `H`-action at truncation, then compares
/// `akashi(M)` with `akashi(L) akashi(N)`.
///
/// At a truncation, exactness in the middle and surjectivity are certified by
/// lengths over `Z/p^N`; injectivity of `alpha` is checked when `L` and `M`
/// are finite.
pub fn verify_multiplicativity(
    l: &SigmaModule,
    m: &SigmaModule,
    n: &SigmaModule,
    alpha: &ModuleMap,
    beta: &ModuleMap,
    opts: AkashiOptions,
) -> Result<MultiplicativityReport> {
    if l.rank() != m.rank() || m.rank() != n.rank() {
        return Err(Error::invalid("the three modules carry actions of different rank"));
    }
    l.ring().check_same(m.ring())?;
    m.ring().check_same(n.ring())?;
    let (fl, fm, fn_) = (l.flat_model(), m.flat_model(), n.flat_model());
    let (a, b) = (alpha.flatten(), beta.flatten());
    check_morphism(&fl, &fm, &a, "alpha")?;
    check_morphism(&fm, &fn_, &b, "beta")?;

    let n_rel = smith(&fn_.module.relations);
    if !image_in_span(&n_rel, fn_.module.relations.cols(), &b.mul(&a)) {
        return Err(Error::NotExact("beta o alpha is not zero".into()));
    }
    if quotient_structure(&b.hconcat(&fn_.module.relations)).length() != 0 {
        return Err(Error::NotExact("beta is not surjective".into()));
    }
    let len_n = quotient_structure(&fn_.module.relations).length();
    let len_coker_alpha = quotient_structure(&a.hconcat(&fm.module.relations)).length();
    if len_coker_alpha != len_n {
        return Err(Error::NotExact(
            "the kernel of beta is larger than the image of alpha".into(),
        ));
    }
    if matches!((&l.base, &m.base), (SigmaBase::Finite(_), SigmaBase::Finite(_))) {
        let len_l = quotient_structure(&fl.module.relations).length();
        let len_m = quotient_structure(&fm.module.relations).length();
        if len_l + len_n != len_m {
            return Err(Error::NotExact("alpha is not injective".into()));
        }
    }

    let akashi_l = akashi_series(l, opts)?;
    let akashi_m = akashi_series(m, opts)?;
    let akashi_n = akashi_series(n, opts)?;
    let holds = akashi_l.akashi.checked_mul(&akashi_n.akashi)? == akashi_m.akashi;
    Ok(MultiplicativityReport {
        holds,
        akashi_l,
        akashi_m,
        akashi_n,
    })
}

fn check_morphism(src: &FlatSigma, dst: &FlatSigma, f: &ZpnMatrix, name: &str) -> Result<()> {
    if f.rows() != dst.module.rank() || f.cols() != src.module.rank() {
        return Err(Error::invalid(format!(
            "{name} is {}x{}, expected {}x{} on the truncated modules",
            f.rows(),
            f.cols(),
            dst.module.rank(),
            src.module.rank()
        )));
    }
    let rel = smith(&dst.module.relations);
    let cols = dst.module.relations.cols();
    if !image_in_span(&rel, cols, &f.mul(&src.module.relations)) {
        return Err(Error::invalid(format!("{name} does not respect the relations")));
    }
    let linear = |x: &ZpnMatrix, y: &ZpnMatrix| {
        let ring = f.ring();
        let lhs = f.mul(x);
        let rhs = y.mul(f);
        ZpnMatrix::from_fn(ring, lhs.rows(), lhs.cols(), |i, j| {
            ring.sub(lhs.get(i, j), rhs.get(i, j))
        })
    };
    if !image_in_span(&rel, cols, &linear(&src.module.theta, &dst.module.theta)) {
        return Err(Error::invalid(format!("{name} is not Z_p[[T]]-linear")));
    }
    for (i, (hs, hd)) in src.actions.iter().zip(&dst.actions).enumerate() {
        if !image_in_span(&rel, cols, &linear(hs, hd)) {
            return Err(Error::invalid(format!("{name} does not commute with h_{i}")));
        }
    }
    Ok(())
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

    fn cyclic(r: &Arc<Zp>, d: usize, c: &[i64]) -> PresentationModule {
        PresentationModule::cyclic(&s(r, d, c))
    }

    #[test]
    fn koszul_basis_is_lex() {
        assert_eq!(koszul_basis(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(koszul_basis(2, 0), vec![Vec::<usize>::new()]);
        assert!(koszul_basis(1, 2).is_empty());
    }

    #[test]
    fn trivial_action_on_zp() {
        let r = ring(5, 3);
        let m = SigmaModule::trivial(SigmaBase::Presentation(cyclic(&r, 6, &[0, 1])), 1).unwrap();
        let res = akashi_series(&m, AkashiOptions::default()).unwrap();
        assert_eq!(res.homology_chars, vec![CharElement::t(&r), CharElement::t(&r)]);
        assert!(res.akashi.is_one());
        assert_eq!(res.ord_at_zero, 0);
    }

    #[test]
    fn free_module_with_one_plus_t() {
        let r = ring(3, 3);
        let base = PresentationModule::free(&r, 6, 1);
        let h = SeriesMatrix::scalar(&s(&r, 6, &[1, 1]), 1);
        let m = SigmaModule::over_presentation(base, vec![h], None).unwrap();
        let res = akashi_series(&m, AkashiOptions::default()).unwrap();
        assert_eq!(res.homology_chars[0], CharElement::t(&r));
        assert!(res.homology_chars[1].is_one());
        assert_eq!(res.akashi, CharElement::t(&r));
        let h0 = truncated_koszul_homology(&m, 0);
        assert_eq!(h0.group_invariants(), vec![3]);
        // T^(D-1) is killed by T in the truncation, but not in the module.
        assert_eq!(truncated_koszul_homology(&m, 1).group_invariants(), vec![3]);
    }

    #[test]
    fn finite_base_with_two_trivial_generators() {
        let r = ring(2, 1);
        let flat = cyclic(&r, 3, &[2]).flatten().structure();
        let m = SigmaModule::trivial(SigmaBase::Finite(flat), 2).unwrap();
        for (i, copies) in [1usize, 2, 1].into_iter().enumerate() {
            let h = truncated_koszul_homology(&m, i);
            assert_eq!(h.log_order(), 3 * copies as u64);
        }
        assert!(akashi_series(&m, AkashiOptions::default()).unwrap().akashi.is_one());
    }

    #[test]
    fn trivial_actions_give_binomial_powers() {
        let r = ring(3, 3);
        let base = cyclic(&r, 8, &[-3, 1]);
        let f = base.char_element().unwrap();
        let m = SigmaModule::trivial(SigmaBase::Presentation(base), 2).unwrap();
        let res = akashi_series(&m, AkashiOptions::default()).unwrap();
        assert_eq!(res.homology_chars, vec![f.clone(), f.pow(2), f.clone()]);
        assert!(res.akashi.is_one());
    }

    #[test]
    fn rank_zero_is_the_characteristic_element() {
        let r = ring(5, 3);
        let base = cyclic(&r, 6, &[5, 1]);
        let m = SigmaModule::trivial(SigmaBase::Presentation(base), 0).unwrap();
        let res = akashi_series(&m, AkashiOptions::default()).unwrap();
        assert_eq!(res.akashi.mu(), 0);
        assert_eq!(res.akashi.lambda(), 1);
    }

    #[test]
    fn non_torsion_homology_is_rejected() {
        let r = ring(3, 2);
        let base = PresentationModule::free(&r, 4, 1);
        let m = SigmaModule::trivial(SigmaBase::Presentation(base), 1).unwrap();
        assert!(matches!(
            akashi_series(&m, AkashiOptions::default()),
            Err(Error::NotTorsionAtPrecision(_))
        ));
        let dependent = PresentationModule::new(SeriesMatrix::zeros(&r, 4, 1, 1));
        assert!(SigmaModule::trivial(SigmaBase::Presentation(dependent), 1).is_err());
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let r = ring(3, 2);
        let base = cyclic(&r, 4, &[0, 1]);
        let not_invertible = SeriesMatrix::scalar(&s(&r, 4, &[3]), 1);
        assert!(SigmaModule::over_presentation(base.clone(), vec![not_invertible], None).is_err());
        let p = SeriesMatrix::from_rows(
            &r,
            4,
            vec![
                vec![s(&r, 4, &[0, 1]), s(&r, 4, &[0])],
                vec![s(&r, 4, &[0]), s(&r, 4, &[1])],
            ],
            2,
        )
        .unwrap();
        let swap = SeriesMatrix::from_rows(
            &r,
            4,
            vec![
                vec![s(&r, 4, &[0]), s(&r, 4, &[1])],
                vec![s(&r, 4, &[1]), s(&r, 4, &[0])],
            ],
            2,
        )
        .unwrap();
        assert!(SigmaModule::over_presentation(PresentationModule::new(p), vec![swap], None).is_err());
    }

    #[test]
    fn nonsplit_extension_inside_t_squared() {
        let r = ring(2, 2);
        let d = 6;
        let l = SigmaModule::trivial(SigmaBase::Presentation(cyclic(&r, d, &[0, 1])), 1).unwrap();
        let m = SigmaModule::trivial(SigmaBase::Presentation(cyclic(&r, d, &[0, 0, 1])), 1).unwrap();
        let n = l.clone();
        let alpha = ModuleMap::Series(SeriesMatrix::scalar(&s(&r, d, &[0, 1]), 1));
        let beta = ModuleMap::Series(SeriesMatrix::identity(&r, d, 1));
        let rep = verify_multiplicativity(&l, &m, &n, &alpha, &beta, AkashiOptions::default()).unwrap();
        assert!(rep.holds);
        let zero = ModuleMap::Series(SeriesMatrix::zeros(&r, d, 1, 1));
        assert!(matches!(
            verify_multiplicativity(&l, &m, &n, &alpha, &zero, AkashiOptions::default()),
            Err(Error::NotExact(_))
        ));
    }
}
