//! Assembly of Akashi series of Selmer groups from a cyclotomic
//! characteristic element and local factors.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::charel::{product, CharElement};
use crate::elliptic::{
    euler_factor_at_one, local_correction_series, mu_valuation, FrobeniusConvention, LocalPlaceData,
};
use crate::error::{Error, Result};
use crate::modules::{rank_one_twist, TwistConvention};
use crate::padic::{PadicInt, Zp};

/// Hypotheses under which the assembled formulas hold; they cannot be
/// checked by computation and must be asserted by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption {
    /// The extension contains the unramified `Z_p`-extension locally at
    /// every prime above `p`.
    StronglyAdmissible,
    /// The reduction condition at primes above `p`.
    ReductionCondition,
    /// The dual Selmer group lies in the category `M_H(G)`.
    MhG,
    /// The curve has no complex multiplication.
    NoComplexMultiplication,
}

impl Assumption {
    pub const ALL: [Assumption; 4] = [
        Assumption::StronglyAdmissible,
        Assumption::ReductionCondition,
        Assumption::MhG,
        Assumption::NoComplexMultiplication,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Assumption::StronglyAdmissible => "strongly-admissible",
            Assumption::ReductionCondition => "reduction-condition",
            Assumption::MhG => "mhg",
            Assumption::NoComplexMultiplication => "no-cm",
        }
    }

    pub fn parse(s: &str) -> Option<Assumption> {
        Assumption::ALL.into_iter().find(|a| a.name() == s)
    }
}

/// Hypotheses needed by [`assemble_main`].
pub const MAIN_ASSUMPTIONS: [Assumption; 3] = [
    Assumption::StronglyAdmissible,
    Assumption::ReductionCondition,
    Assumption::MhG,
];

/// Hypotheses needed by [`assemble_gl2`].
pub const GL2_ASSUMPTIONS: [Assumption; 2] = [Assumption::MhG, Assumption::NoComplexMultiplication];

/// Fails with `MissingAssumption` unless every required hypothesis is asserted.
pub fn require_assumptions(asserted: &[Assumption], required: &[Assumption]) -> Result<()> {
    let missing: Vec<&str> = required
        .iter()
        .filter(|a| !asserted.contains(a))
        .map(|a| a.name())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingAssumption(missing.join(", ")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportFactor {
    pub label: String,
    pub element: CharElement,
}

/// An assembled right-hand side with its factors.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaReport {
    pub rhs: CharElement,
    pub r: usize,
    pub ord_at_zero: usize,
    pub leading_valuation: u32,
    pub factors: Vec<ReportFactor>,
}

impl FormulaReport {
    fn from_factors(ring: &Arc<Zp>, r: usize, factors: Vec<ReportFactor>) -> Result<FormulaReport> {
        let rhs = product(ring, factors.iter().map(|f| &f.element))?;
        Ok(FormulaReport {
            ord_at_zero: rhs.ord_at_zero(),
            leading_valuation: rhs.leading_term_valuation(),
            rhs,
            r,
            factors,
        })
    }

    /// Whether `rhs` is the product of the listed factors.
    pub fn is_consistent(&self) -> bool {
        product(self.rhs.ring(), self.factors.iter().map(|f| &f.element))
            .map(|p| p == self.rhs)
            .unwrap_or(false)
    }

    /// Table of factors: label, mu, distinguished polynomial, order at
    /// `T = 0` and leading-term valuation.
    pub fn audit_table(&self) -> String {
        let mut rows: Vec<[String; 5]> = vec![[
            "factor".into(),
            "mu".into(),
            "distinguished".into(),
            "ord_T=0".into(),
            "v_p(lead)".into(),
        ]];
        let line = |label: &str, e: &CharElement| {
            [
                label.to_string(),
                e.mu().to_string(),
                e.distinguished_string(),
                e.ord_at_zero().to_string(),
                e.leading_term_valuation().to_string(),
            ]
        };
        for f in &self.factors {
            rows.push(line(&f.label, &f.element));
        }
        rows.push(line("total", &self.rhs));
        let widths: Vec<usize> = (0..5)
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &rows {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }
}

/// `T^r * f_cyc * prod(local factors)`.
pub fn assemble_main(f_cyc: &CharElement, locals: &[CharElement], r: usize) -> Result<FormulaReport> {
    let ring = f_cyc.ring();
    let mut factors = vec![
        ReportFactor {
            label: format!("T^{r}"),
            element: CharElement::t(ring).pow(r as u32),
        },
        ReportFactor {
            label: "f_cyc".into(),
            element: f_cyc.clone(),
        },
    ];
    for (i, f) in locals.iter().enumerate() {
        check_prime(ring, f)?;
        factors.push(ReportFactor {
            label: format!("local[{i}]"),
            element: f.clone(),
        });
    }
    FormulaReport::from_factors(ring, r, factors)
}

fn check_prime(ring: &Zp, f: &CharElement) -> Result<()> {
    if f.prime() != ring.prime() {
        return Err(Error::mismatch(format!("p = {} and p = {}", ring.prime(), f.prime())));
    }
    Ok(())
}

/// A prime above `p` of split multiplicative reduction for the `GL_2` formula:
/// `chi(gamma)` and the index exponent `c_v` with `gamma_v = gamma^(p^(c_v))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlace {
    pub u: PadicInt,
    pub c_v: u32,
}

impl SplitPlace {
    /// `chi(gamma_v) = u^(p^(c_v))`.
    pub fn chi_gamma_v(&self) -> Result<PadicInt> {
        self.u.power_tower(self.c_v)
    }
}

/// Conventions and truncation shared by the local computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalOptions {
    pub t_degree: usize,
    pub frobenius: FrobeniusConvention,
    pub twist: TwistConvention,
}

/// `f_cyc * prod_(v in M) f_(J_v) * prod_(v in R) (T + 1 - chi(gamma_v))`.
///
/// Factors from `R` are reported as local factors; an extra zero appears only
/// through a factor equal to `T`, so `r` is reported as 0.
pub fn assemble_gl2(
    f_cyc: &CharElement,
    m_places: &[LocalPlaceData],
    r_places: &[SplitPlace],
    opts: LocalOptions,
) -> Result<FormulaReport> {
    let ring = Arc::clone(f_cyc.ring());
    let mut factors = vec![ReportFactor {
        label: "f_cyc".into(),
        element: f_cyc.clone(),
    }];
    for place in m_places {
        let f = local_correction_series(place, &ring, opts.t_degree, opts.frobenius)?;
        factors.push(ReportFactor {
            label: format!("J_v[ell={}]", place.ell),
            element: f,
        });
    }
    for (i, place) in r_places.iter().enumerate() {
        let u = place.u.reduce_to(ring.precision())?;
        mu_valuation(&u)?;
        let chi = SplitPlace { u, c_v: place.c_v }.chi_gamma_v()?;
        let f = rank_one_twist(&chi, opts.t_degree, opts.twist)?.char_element()?;
        factors.push(ReportFactor {
            label: format!("twist[{i}] c_v={}", place.c_v),
            element: f,
        });
    }
    FormulaReport::from_factors(&ring, 0, factors)
}

/// The `p`-adic valuation of the Euler-characteristic correction factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerCharCorrection {
    /// `v_p(P_v(q_v^-1))` for each place in `M`.
    pub euler_valuations: Vec<i64>,
    /// `v_p(chi(gamma_v) - 1)` for each place in `R`.
    pub mu_valuations: Vec<u32>,
    pub total: i64,
}

/// `sum_(v in M) v_p(P_v(q_v^-1)) + sum_(v in R) v_p(chi(gamma_v) - 1)`.
///
/// The first sum is the valuation of `prod L_v(E, 1)^-1`, matching the
/// constant terms of the local characteristic series.
pub fn euler_characteristic_correction(
    p: u64,
    m_places: &[LocalPlaceData],
    r_places: &[SplitPlace],
) -> Result<EulerCharCorrection> {
    let euler_valuations = m_places
        .iter()
        .map(|place| {
            if place.ell == p {
                return Err(Error::PlaceDividesP { ell: p });
            }
            Ok(euler_factor_at_one(place)?.valuation(p))
        })
        .collect::<Result<Vec<_>>>()?;
    let mu_valuations = r_places
        .iter()
        .map(|place| {
            if place.u.prime() != p {
                return Err(Error::mismatch(format!("p = {p} and p = {}", place.u.prime())));
            }
            mu_valuation(&place.chi_gamma_v()?)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = euler_valuations.iter().sum::<i64>() + mu_valuations.iter().map(|&v| i64::from(v)).sum::<i64>();
    Ok(EulerCharCorrection {
        euler_valuations,
        mu_valuations,
        total,
    })
}

/// `f_Sel * prod_(v in S') f_(J_v)`: the characteristic element of the
/// large Selmer group from the classical one.
pub fn cyclotomic_bookkeeping(f_sel: &CharElement, locals: &[CharElement]) -> Result<CharElement> {
    for f in locals {
        check_prime(f_sel.ring(), f)?;
    }
    product(f_sel.ring(), std::iter::once(f_sel).chain(locals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::Reduction;

    fn ring() -> Arc<Zp> {
        Zp::new(5, 4).unwrap()
    }

    fn ce(r: &Arc<Zp>, mu: u32, g: &[i64]) -> CharElement {
        CharElement::new(r, mu, g.iter().copied()).unwrap()
    }

    fn opts() -> LocalOptions {
        LocalOptions {
            t_degree: 10,
            frobenius: FrobeniusConvention::Arithmetic,
            twist: TwistConvention::Character,
        }
    }

    #[test]
    fn main_formula() {
        let r = ring();
        let one = assemble_main(&CharElement::one(&r), &[], 0).unwrap();
        assert!(one.rhs.is_one());
        let rep = assemble_main(&ce(&r, 0, &[5, 1]), &[], 1).unwrap();
        assert_eq!(rep.rhs, ce(&r, 0, &[0, 5, 1]));
        assert_eq!((rep.ord_at_zero, rep.leading_valuation), (1, 1));
        assert!(rep.is_consistent());

        let split = LocalPlaceData::new(11, 1, Reduction::SplitMult, 1, 0).unwrap();
        let local = local_correction_series(&split, &r, 10, FrobeniusConvention::Arithmetic).unwrap();
        let rep = assemble_main(&CharElement::one(&r), &[local], 1).unwrap();
        assert_eq!((rep.ord_at_zero, rep.leading_valuation), (1, 1));
    }

    #[test]
    fn gl2_formula() {
        let r = ring();
        let f = ce(&r, 1, &[5, 1]);
        assert_eq!(assemble_gl2(&f, &[], &[], opts()).unwrap().rhs, f);
        let six = SplitPlace {
            u: r.element(6),
            c_v: 0,
        };
        let rep = assemble_gl2(&CharElement::one(&r), &[], &[six], opts()).unwrap();
        assert_eq!(rep.factors[1].element, ce(&r, 0, &[-5, 1]));
        assert_eq!(rep.factors[1].element.leading_term_valuation(), 1);
        let tower = SplitPlace {
            u: r.element(6),
            c_v: 1,
        };
        let rep = assemble_gl2(&CharElement::one(&r), &[], &[tower], opts()).unwrap();
        assert_eq!(rep.factors[1].element, ce(&r, 0, &[1 - 7776, 1]));
        assert_eq!(rep.factors[1].element.leading_term_valuation(), 2);
        assert_eq!(rep.r, 0);
    }

    #[test]
    fn euler_characteristic() {
        let none = euler_characteristic_correction(5, &[], &[]).unwrap();
        assert_eq!(none.total, 0);
        let r = ring();
        let six = SplitPlace {
            u: r.element(6),
            c_v: 0,
        };
        assert_eq!(euler_characteristic_correction(5, &[], &[six]).unwrap().total, 1);
        let split = LocalPlaceData::new(11, 1, Reduction::SplitMult, 1, 0).unwrap();
        assert_eq!(euler_characteristic_correction(5, &[split], &[]).unwrap().total, 1);
    }

    #[test]
    fn bookkeeping() {
        let r = ring();
        let t = CharElement::t(&r);
        assert_eq!(cyclotomic_bookkeeping(&t, &[]).unwrap(), t);
        assert_eq!(cyclotomic_bookkeeping(&t, &[CharElement::one(&r)]).unwrap(), t);
        let f = ce(&r, 0, &[5, 1]);
        let split = LocalPlaceData::new(11, 1, Reduction::SplitMult, 1, 0).unwrap();
        let local = local_correction_series(&split, &r, 10, FrobeniusConvention::Arithmetic).unwrap();
        let big = cyclotomic_bookkeeping(&f, std::slice::from_ref(&local)).unwrap();
        assert_eq!(
            big.leading_term_valuation(),
            f.leading_term_valuation() + local.leading_term_valuation()
        );
    }

    #[test]
    fn assumptions_are_required() {
        assert!(require_assumptions(&MAIN_ASSUMPTIONS, &MAIN_ASSUMPTIONS).is_ok());
        assert!(matches!(
            require_assumptions(&[Assumption::MhG], &MAIN_ASSUMPTIONS),
            Err(Error::MissingAssumption(_))
        ));
        assert_eq!(Assumption::parse("no-cm"), Some(Assumption::NoComplexMultiplication));
    }

    #[test]
    fn audit_table_lists_factors() {
        let r = ring();
        let rep = assemble_main(&ce(&r, 0, &[5, 1]), &[], 1).unwrap();
        let table = rep.audit_table();
        assert!(table.contains("T^1"));
        assert!(table.lines().count() == 4);
    }
}
