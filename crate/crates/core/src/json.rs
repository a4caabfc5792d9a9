//! JSON wire formats for every input and output of the toolkit.
//!
//! Integers are read from JSON numbers or decimal strings and written as
//! decimal strings, so residues modulo large `p^N` survive intact. Ring
//! parameters (`p`, `N`, `D`) may be left out of a document and supplied
//! through [`RingDefaults`] instead.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::assembler::{EulerCharCorrection, FormulaReport, SplitPlace};
use crate::charel::CharElement;
use crate::elliptic::{CurveData, LocalPlaceData};
use crate::error::{Error, Result};
use crate::koszul::{AkashiResult, SigmaBase, SigmaModule};
use crate::matrix::SeriesMatrix;
use crate::modules::{FiniteFormModule, PresentationModule};
use crate::padic::{PadicInt, Zp};
use crate::series::LambdaSeries;
use crate::weierstrass::WeierstrassDecomposition;
use crate::zpn::ZpnMatrix;

/// An integer given as a JSON number or a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Int {
    Number(i64),
    Text(String),
}

impl Int {
    pub fn to_bigint(&self) -> Result<BigInt> {
        match self {
            Int::Number(n) => Ok(BigInt::from(*n)),
            Int::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{s:?} is not an integer"))),
        }
    }
}

impl From<&PadicInt> for Int {
    fn from(x: &PadicInt) -> Int {
        Int::Text(x.value().to_string())
    }
}

fn ints(xs: &[Int]) -> Result<Vec<BigInt>> {
    xs.iter().map(Int::to_bigint).collect()
}

/// Ring parameters used where a document leaves them out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RingDefaults {
    pub prime: Option<u64>,
    pub p_precision: Option<u32>,
    pub t_degree: Option<usize>,
}

fn pick<T: PartialEq + std::fmt::Display + Copy>(name: &str, doc: Option<T>, default: Option<T>) -> Result<T> {
    match (doc, default) {
        (Some(a), Some(b)) if a != b => Err(Error::invalid(format!(
            "{name} is {a} in the input but {b} on the command line"
        ))),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Err(Error::invalid(format!("{name} is not given"))),
    }
}

impl RingDefaults {
    pub fn ring(&self, p: Option<u64>, n: Option<u32>) -> Result<Arc<Zp>> {
        Zp::new(pick("p", p, self.prime)?, pick("N", n, self.p_precision)?)
    }

    pub fn t_degree(&self, d: Option<usize>) -> Result<usize> {
        pick("D", d, self.t_degree)
    }
}

fn yes() -> bool {
    true
}

/// A series `sum c_i T^i`, lowest degree first. With `exact` false the data
/// is a truncation whose tail beyond `T^D` is unknown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub coeffs: Vec<Int>,
    #[serde(default = "yes")]
    pub exact: bool,
}

impl SeriesJson {
    pub fn to_series(&self, defaults: &RingDefaults) -> Result<LambdaSeries> {
        let ring = defaults.ring(self.p, self.n)?;
        let d = defaults.t_degree(self.d)?;
        series(&ring, d, &self.coeffs, self.exact)
    }

    pub fn from_series(f: &LambdaSeries) -> SeriesJson {
        SeriesJson {
            p: Some(f.prime()),
            n: Some(f.p_precision()),
            d: Some(f.t_degree()),
            coeffs: f.coeffs().iter().map(Int::from).collect(),
            exact: f.is_exact(),
        }
    }
}

fn series(ring: &Arc<Zp>, d: usize, coeffs: &[Int], exact: bool) -> Result<LambdaSeries> {
    let c = ints(coeffs)?;
    if exact {
        LambdaSeries::new(ring, d, c)
    } else {
        LambdaSeries::truncated(ring, d, c)
    }
}

/// `p^mu * g(T)`. On output the derived invariants are filled in; on input
/// they are ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharElementJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Precision of the coefficients of `g`.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub mu: u32,
    /// Coefficients of `g`, lowest degree first, ending in `1`.
    pub distinguished: Vec<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ord_at_zero: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leading_valuation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

impl CharElementJson {
    pub fn to_char(&self, defaults: &RingDefaults) -> Result<CharElement> {
        CharElement::new(&defaults.ring(self.p, self.n)?, self.mu, ints(&self.distinguished)?)
    }

    pub fn from_char(f: &CharElement) -> CharElementJson {
        CharElementJson {
            p: Some(f.prime()),
            n: Some(f.precision()),
            mu: f.mu(),
            distinguished: f.distinguished().iter().map(Int::from).collect(),
            lambda: Some(f.lambda()),
            ord_at_zero: Some(f.ord_at_zero()),
            leading_valuation: Some(f.leading_term_valuation()),
            text: Some(f.to_string()),
        }
    }
}

/// A matrix of series (entries are coefficient lists) or of integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Series(Vec<Vec<Vec<Int>>>),
    Integer(Vec<Vec<Int>>),
}

impl MatrixJson {
    fn shape(&self) -> (usize, Option<usize>) {
        match self {
            MatrixJson::Series(rows) => (rows.len(), rows.first().map(Vec::len)),
            MatrixJson::Integer(rows) => (rows.len(), rows.first().map(Vec::len)),
        }
    }

    fn to_series(&self, ring: &Arc<Zp>, d: usize, cols: Option<usize>, exact: bool) -> Result<SeriesMatrix> {
        let (n_rows, first) = self.shape();
        let n_cols = first.or(cols).unwrap_or(0);
        let rows: Vec<Vec<LambdaSeries>> = match self {
            MatrixJson::Series(rows) => rows
                .iter()
                .map(|row| row.iter().map(|c| series(ring, d, c, exact)).collect::<Result<_>>())
                .collect::<Result<_>>()?,
            MatrixJson::Integer(rows) => rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| series(ring, d, std::slice::from_ref(c), true))
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?,
        };
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::invalid("matrix rows have different lengths"));
        }
        if n_rows == 0 {
            return Err(Error::invalid("matrix has no rows"));
        }
        SeriesMatrix::from_rows(ring, d, rows, n_cols)
    }

    fn to_integer(&self, ring: &Arc<Zp>) -> Result<ZpnMatrix> {
        let MatrixJson::Integer(rows) = self else {
            return Err(Error::invalid("a finite module takes integer matrices"));
        };
        integer_matrix(ring, rows)
    }

    pub fn from_series(m: &SeriesMatrix) -> MatrixJson {
        MatrixJson::Series(
            (0..m.rows())
                .map(|i| {
                    (0..m.cols())
                        .map(|j| {
                            let f = m.get(i, j);
                            let len = f.degree().map_or(0, |d| d + 1);
                            f.coeffs()[..len].iter().map(Int::from).collect()
                        })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn from_integer(m: &ZpnMatrix) -> MatrixJson {
        MatrixJson::Integer(
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| Int::Text(m.get(i, j).to_string())).collect())
                .collect(),
        )
    }
}

fn integer_matrix(ring: &Arc<Zp>, rows: &[Vec<Int>]) -> Result<ZpnMatrix> {
    let n = rows.len();
    let values: Vec<Vec<BigInt>> = rows.iter().map(|r| ints(r)).collect::<Result<_>>()?;
    if values.iter().any(|r| r.len() != n) {
        return Err(Error::invalid("integer matrices here must be square"));
    }
    Ok(ZpnMatrix::from_fn(ring, n, n, |i, j| ring.reduce_signed(&values[i][j])))
}

/// A module over `Z_p[[T]]`: a presentation `Z_p[[T]]^k / P` with `P` a
/// `k x m` matrix, or a finite module `sum Z/p^(n_j)` with `T` acting by
/// `theta` (column `j` is the image of generator `j`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ModuleJson {
    Presentation {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
        #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
        n: Option<u32>,
        #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
        d: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
        #[serde(rename = "P")]
        relations: MatrixJson,
        #[serde(default = "yes")]
        exact: bool,
    },
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
        #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
        n: Option<u32>,
        orders: Vec<u32>,
        theta: Vec<Vec<Int>>,
    },
}

impl ModuleJson {
    pub fn to_base(&self, defaults: &RingDefaults) -> Result<SigmaBase> {
        match self {
            ModuleJson::Presentation {
                p,
                n,
                d,
                k,
                relations,
                exact,
            } => {
                let ring = defaults.ring(*p, *n)?;
                let d = defaults.t_degree(*d)?;
                let (rows, _) = relations.shape();
                if let Some(k) = *k {
                    if rows == 0 && k > 0 {
                        return Ok(SigmaBase::Presentation(PresentationModule::free(&ring, d, k)));
                    }
                    if k != rows {
                        return Err(Error::invalid(format!("k = {k} but P has {rows} rows")));
                    }
                }
                let m = relations.to_series(&ring, d, Some(0), *exact)?;
                Ok(SigmaBase::Presentation(PresentationModule::new(m)))
            }
            ModuleJson::Finite { p, n, orders, theta } => {
                let ring = defaults.ring(*p, *n)?;
                let theta = integer_matrix(&ring, theta)?;
                Ok(SigmaBase::Finite(FiniteFormModule::new(&ring, orders.clone(), theta)?))
            }
        }
    }

    pub fn to_presentation(&self, defaults: &RingDefaults) -> Result<PresentationModule> {
        match self.to_base(defaults)? {
            SigmaBase::Presentation(m) => Ok(m),
            SigmaBase::Finite(_) => Err(Error::invalid("expected a presentation")),
        }
    }

    pub fn from_presentation(m: &PresentationModule) -> ModuleJson {
        ModuleJson::Presentation {
            p: Some(m.prime()),
            n: Some(m.p_precision()),
            d: Some(m.t_degree()),
            k: Some(m.generators()),
            relations: MatrixJson::from_series(m.relations()),
            exact: m.relations().is_exact(),
        }
    }

    pub fn from_finite(m: &FiniteFormModule) -> ModuleJson {
        let MatrixJson::Integer(theta) = MatrixJson::from_integer(m.theta()) else {
            unreachable!("integer matrix")
        };
        ModuleJson::Finite {
            p: Some(m.prime()),
            n: Some(m.ring().precision()),
            orders: m.orders().to_vec(),
            theta,
        }
    }

    pub fn from_base(b: &SigmaBase) -> ModuleJson {
        match b {
            SigmaBase::Presentation(m) => ModuleJson::from_presentation(m),
            SigmaBase::Finite(m) => ModuleJson::from_finite(m),
        }
    }
}

/// A module with `d` commuting actions `h_i` (and, for a presentation with
/// fewer relations than generators, lifts `Q_i` with `h_i P = P Q_i`).
/// Without `actions`, `d` copies of the identity are used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaModuleJson {
    #[serde(flatten)]
    pub base: ModuleJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifts: Option<Vec<MatrixJson>>,
}

impl SigmaModuleJson {
    pub fn to_module(&self, defaults: &RingDefaults) -> Result<SigmaModule> {
        let base = self.base.to_base(defaults)?;
        let Some(actions) = &self.actions else {
            return SigmaModule::trivial(base, self.d.unwrap_or(0));
        };
        if let Some(d) = self.d {
            if d != actions.len() {
                return Err(Error::invalid(format!(
                    "d = {d} but {} actions are given",
                    actions.len()
                )));
            }
        }
        match base {
            SigmaBase::Presentation(m) => {
                let (ring, td, k) = (Arc::clone(m.ring()), m.t_degree(), m.generators());
                let exact = m.relations().is_exact();
                let h = actions
                    .iter()
                    .map(|a| a.to_series(&ring, td, Some(k), exact))
                    .collect::<Result<Vec<_>>>()?;
                let lifts = match &self.lifts {
                    Some(l) => Some(
                        l.iter()
                            .map(|a| a.to_series(&ring, td, Some(m.relation_count()), exact))
                            .collect::<Result<Vec<_>>>()?,
                    ),
                    None => None,
                };
                SigmaModule::over_presentation(m, h, lifts)
            }
            SigmaBase::Finite(m) => {
                if self.lifts.is_some() {
                    return Err(Error::invalid("lifts apply only to presentations"));
                }
                let ring = Arc::clone(m.ring());
                let h = actions
                    .iter()
                    .map(|a| a.to_integer(&ring))
                    .collect::<Result<Vec<_>>>()?;
                SigmaModule::over_finite(m, h)
            }
        }
    }

    pub fn from_module(m: &SigmaModule) -> SigmaModuleJson {
        let (actions, lifts) = match (m.series_actions(), m.finite_actions()) {
            (Some((h, q)), _) => (
                h.iter().map(MatrixJson::from_series).collect(),
                Some(q.iter().map(MatrixJson::from_series).collect()),
            ),
            (None, Some(h)) => (h.iter().map(MatrixJson::from_integer).collect(), None),
            (None, None) => (Vec::new(), None),
        };
        SigmaModuleJson {
            base: ModuleJson::from_base(m.base()),
            d: Some(m.rank()),
            actions: Some(actions),
            lifts,
        }
    }
}

/// Output of the Weierstrass preparation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassJson {
    pub mu: u32,
    pub lambda: usize,
    pub distinguished: Vec<Int>,
    pub unit: SeriesJson,
    pub output_precision: u32,
    pub certified_precision: u32,
    pub char_element: CharElementJson,
}

impl WeierstrassJson {
    pub fn from_decomposition(w: &WeierstrassDecomposition) -> WeierstrassJson {
        WeierstrassJson {
            mu: w.mu(),
            lambda: w.lambda(),
            distinguished: w.distinguished().iter().map(Int::from).collect(),
            unit: SeriesJson::from_series(w.unit()),
            output_precision: w.output_precision(),
            certified_precision: w.certified_precision(),
            char_element: CharElementJson::from_char(&w.char_element()),
        }
    }
}

/// Characteristic elements of the homology and their alternating product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AkashiJson {
    pub homology_chars: Vec<CharElementJson>,
    pub akashi: CharElementJson,
    pub ord_at_zero: usize,
    pub leading_valuation: u32,
}

impl AkashiJson {
    pub fn from_result(r: &AkashiResult) -> AkashiJson {
        AkashiJson {
            homology_chars: r.homology_chars.iter().map(CharElementJson::from_char).collect(),
            akashi: CharElementJson::from_char(&r.akashi),
            ord_at_zero: r.ord_at_zero,
            leading_valuation: r.leading_valuation,
        }
    }
}

/// An exact rational number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl RationalJson {
    pub fn from_rational(x: &BigRational) -> RationalJson {
        RationalJson {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }
}

/// The curve `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub a: [i64; 5],
}

impl CurveJson {
    pub fn to_curve(&self) -> Result<CurveData> {
        CurveData::new(self.a)
    }
}

/// A place above `p` of split multiplicative reduction: `chi(gamma) = u` and
/// `[Gamma : Gamma_v] = p^(c_v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlaceJson {
    pub u: Int,
    #[serde(default)]
    pub c_v: u32,
}

impl SplitPlaceJson {
    pub fn to_place(&self, ring: &Arc<Zp>) -> Result<SplitPlace> {
        Ok(SplitPlace {
            u: ring.element(self.u.to_bigint()?),
            c_v: self.c_v,
        })
    }
}

/// One factor of an assembled formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub label: String,
    pub element: CharElementJson,
}

/// An assembled formula. `consistent` records that `rhs` was recomputed as
/// the product of `factors` when the report was written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub rhs: CharElementJson,
    pub r: usize,
    pub ord_at_zero: usize,
    pub leading_valuation: u32,
    pub factors: Vec<FactorJson>,
    pub consistent: bool,
    pub assumptions: Vec<String>,
}

impl ReportJson {
    pub fn from_report(r: &FormulaReport, assumptions: &[String]) -> ReportJson {
        ReportJson {
            rhs: CharElementJson::from_char(&r.rhs),
            r: r.r,
            ord_at_zero: r.ord_at_zero,
            leading_valuation: r.leading_valuation,
            factors: r
                .factors
                .iter()
                .map(|f| FactorJson {
                    label: f.label.clone(),
                    element: CharElementJson::from_char(&f.element),
                })
                .collect(),
            consistent: r.is_consistent(),
            assumptions: assumptions.to_vec(),
        }
    }
}

/// Input of `assemble-main`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssembleMainJson {
    pub f_cyc: CharElementJson,
    #[serde(default)]
    pub locals: Vec<CharElementJson>,
    #[serde(default)]
    pub r: usize,
}

/// Input of `assemble-gl2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssembleGl2Json {
    pub f_cyc: CharElementJson,
    #[serde(default)]
    pub m_places: Vec<LocalPlaceData>,
    #[serde(default)]
    pub r_places: Vec<SplitPlaceJson>,
    /// Truncation of the local series.
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

/// Input of `euler-char`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCharJson {
    #[serde(default)]
    pub m_places: Vec<LocalPlaceData>,
    #[serde(default)]
    pub r_places: Vec<SplitPlaceJson>,
}

/// Output of `euler-char`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCharOutputJson {
    pub euler_valuations: Vec<i64>,
    pub mu_valuations: Vec<u32>,
    pub total: i64,
}

impl From<&EulerCharCorrection> for EulerCharOutputJson {
    fn from(c: &EulerCharCorrection) -> Self {
        EulerCharOutputJson {
            euler_valuations: c.euler_valuations.clone(),
            mu_valuations: c.mu_valuations.clone(),
            total: c.total,
        }
    }
}

/// Input of `local-series`: a place and the ring of the result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSeriesJson {
    #[serde(flatten)]
    pub place: LocalPlaceData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

/// Input of `euler`: one place, or a curve over `Q` with the primes to
/// visit (every good prime up to `bound` when `ells` is absent).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EulerInputJson {
    Place(LocalPlaceData),
    Curve {
        a: [i64; 5],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ells: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound: Option<u64>,
    },
}

/// `L_v(E, 1)^-1 = P_v(q_v^-1)` at one place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerFactorJson {
    pub ell: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<u64>,
    pub value: RationalJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<i64>,
}
