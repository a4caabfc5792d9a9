//! Reading main-path modules into the oracle and comparing the answers.

use num_traits::ToPrimitive;

use super::{
    brute_char, brute_homology_chars, brute_koszul, char_precision, BruteChar, TinyBase, TinyMatrix, TinyModule,
    TinyRing,
};
use crate::charel::CharElement;
use crate::error::{Error, Result};
use crate::koszul::{homology_chars, truncated_koszul_homology, AkashiOptions, SigmaBase, SigmaModule};
use crate::matrix::SeriesMatrix;

/// Outcome of one comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch(String),
    /// The main path gave no certified answer the oracle can check.
    Skip(String),
}

fn tiny_matrix(ring: &TinyRing, m: &SeriesMatrix) -> TinyMatrix {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let f = m.get(i, j);
                    (0..ring.d)
                        .map(|a| f.coeff(a).to_u64().expect("residue below p^N") % ring.q)
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// The oracle's copy of a module. Fails with `SizeBound` outside the oracle's
/// range.
pub fn tiny_from_sigma(m: &SigmaModule) -> Result<TinyModule> {
    let p = m.prime();
    let n = m.ring().precision();
    match m.base() {
        SigmaBase::Presentation(base) => {
            let ring = TinyRing::new(p, n, base.t_degree());
            if ring.d == 0 || ring.d > 3 || n > 2 {
                return Err(Error::SizeBound("outside the oracle range".into()));
            }
            let (h, lifts) = m.series_actions().expect("presentation base has series actions");
            TinyModule::new(
                ring,
                TinyBase::Presentation {
                    k: base.generators(),
                    relations: tiny_matrix(&ring, base.relations()),
                },
                h.iter().map(|a| tiny_matrix(&ring, a)).collect(),
                lifts.iter().map(|a| tiny_matrix(&ring, a)).collect(),
                Vec::new(),
            )
        }
        SigmaBase::Finite(base) => {
            let ring = TinyRing::new(p, n, 1);
            if n > 2 {
                return Err(Error::SizeBound("outside the oracle range".into()));
            }
            let to_rows = |z: &crate::zpn::ZpnMatrix| -> Vec<Vec<u64>> {
                (0..z.rows())
                    .map(|i| {
                        (0..z.cols())
                            .map(|j| z.get(i, j).to_u64().expect("residue below p^N"))
                            .collect()
                    })
                    .collect()
            };
            TinyModule::new(
                ring,
                TinyBase::Finite {
                    orders: base.orders().to_vec(),
                    theta: to_rows(base.theta()),
                },
                Vec::new(),
                Vec::new(),
                m.finite_actions()
                    .expect("finite base has finite actions")
                    .iter()
                    .map(to_rows)
                    .collect(),
            )
        }
    }
}

/// Compares a main-path characteristic element with the oracle's maximal
/// divisors, whose coefficients are known modulo `p^precision`.
///
/// The invariants `mu` and `lambda` must agree, and the distinguished part
/// must agree with one of the oracle's candidates modulo the coarser of the
/// two precisions. Answers with `mu >= precision` are invisible to the
/// oracle's minors and are skipped.
pub fn compare_char(main: &Result<CharElement>, brute: Option<&BruteChar>, precision: u32) -> Verdict {
    let f = match (main, brute) {
        (Err(Error::NotTorsionAtPrecision(_)), None) => return Verdict::Match,
        (Err(Error::NotTorsionAtPrecision(e)), Some(b)) => {
            return Verdict::Mismatch(format!(
                "main: not torsion ({e}); oracle: mu {} lambda {}",
                b.mu, b.lambda
            ))
        }
        (Err(e), _) => return Verdict::Skip(format!("main path: {e}")),
        (Ok(f), _) if f.mu() >= precision => {
            return Verdict::Skip(format!("mu = {} is not below the oracle precision {precision}", f.mu()))
        }
        (Ok(f), None) => return Verdict::Mismatch(format!("main: {f}; oracle: every minor vanishes")),
        (Ok(f), Some(_)) => f,
    };
    let b = brute.expect("handled above");
    if f.mu() != b.mu || f.lambda() != b.lambda {
        return Verdict::Mismatch(format!(
            "main: {f} (mu {}, lambda {}); oracle: mu {}, lambda {}",
            f.mu(),
            f.lambda(),
            b.mu,
            b.lambda
        ));
    }
    let k = f.precision().min(b.precision);
    let modulus = f.prime().pow(k);
    let main_coeffs: Vec<u64> = f
        .distinguished()
        .iter()
        .map(|c| c.to_u64().expect("residue") % modulus)
        .collect();
    let found = b
        .candidates
        .iter()
        .any(|g| g.iter().zip(&main_coeffs).all(|(x, y)| x % modulus == *y));
    if found {
        Verdict::Match
    } else {
        Verdict::Mismatch(format!(
            "main: {f}; no oracle candidate agrees modulo p^{k} (candidates {:?})",
            b.candidates
        ))
    }
}

/// Compares sorted group invariants.
pub fn compare_invariants(main: &[u32], brute: &[u32]) -> Verdict {
    let mut a = main.to_vec();
    a.sort_unstable();
    let mut b = brute.to_vec();
    b.sort_unstable();
    if a == b {
        Verdict::Match
    } else {
        Verdict::Mismatch(format!("main invariants {a:?}, oracle invariants {b:?}"))
    }
}

/// Tally of the comparisons made for one module.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceReport {
    pub compared: usize,
    pub skipped: Vec<String>,
    pub mismatches: Vec<String>,
}

impl InstanceReport {
    fn record(&mut self, what: &str, v: Verdict) {
        match v {
            Verdict::Match => self.compared += 1,
            Verdict::Mismatch(m) => {
                self.compared += 1;
                self.mismatches.push(format!("{what}: {m}"));
            }
            Verdict::Skip(s) => self.skipped.push(format!("{what}: {s}")),
        }
    }
}

/// Runs every comparison available for a module: the characteristic element
/// of the base, the characteristic elements of the homology, and the group
/// structure of the homology of the truncated module.
pub fn check_sigma(m: &SigmaModule) -> Result<InstanceReport> {
    let tiny = tiny_from_sigma(m)?;
    let mut report = InstanceReport::default();
    report.record(
        "base char",
        compare_char(
            &m.base().char_element(),
            brute_char(&tiny).as_ref(),
            char_precision(&tiny),
        ),
    );

    let opts = AkashiOptions { stability_check: false };
    let main_chars = homology_chars(m, opts);
    let brute_chars: Vec<Option<BruteChar>> = match brute_homology_chars(&tiny) {
        Some(c) => c,
        None => vec![Some(BruteChar::one(tiny.ring.e)); m.rank() + 1],
    };
    match &main_chars {
        Ok(chars) => {
            for (i, (f, b)) in chars.iter().zip(&brute_chars).enumerate() {
                report.record(
                    &format!("char H_{i}"),
                    compare_char(&Ok(f.clone()), b.as_ref(), tiny.ring.e),
                );
            }
        }
        Err(Error::NotTorsionAtPrecision(_)) if brute_chars.iter().any(Option::is_none) => {
            report.record("homology chars", Verdict::Match);
        }
        Err(e) => report.record("homology chars", Verdict::Skip(format!("main path: {e}"))),
    }

    match brute_koszul(&tiny) {
        Ok(invariants) => {
            for (i, inv) in invariants.iter().enumerate() {
                let main = truncated_koszul_homology(m, i).group_invariants();
                report.record(&format!("truncated H_{i}"), compare_invariants(&main, inv));
            }
        }
        Err(e) => report.record("truncated homology", Verdict::Skip(format!("oracle: {e}"))),
    }
    Ok(report)
}
