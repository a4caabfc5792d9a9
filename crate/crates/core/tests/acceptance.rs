//! Acceptance run: one line per criterion with its verdict, counts and time.
//! Exits nonzero when a criterion fails other than the ones listed in
//! `KNOWN_FAILURES`, whose computed values are still checked exactly.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use akashi_core::assembler::{LocalOptions, SplitPlace};
use akashi_core::elliptic::{count_points_by_pairs, FrobeniusConvention};
use akashi_core::koszul::homology_chars;
use akashi_core::oracle::fuzz;
use akashi_core::random::{
    char_element, exact_triple, principal_unit, seeded, series_with_char, sigma_finite, sigma_zp_free,
    truncated_series, TripleKind,
};
use akashi_core::{
    akashi_series, assemble_gl2, assemble_main, count_points, euler_characteristic_correction, euler_factor_at_one,
    rank_one_twist, verify_multiplicativity, weierstrass_prepare, AkashiOptions, CharElement, CurveData, LambdaSeries,
    LocalPlaceData, PresentationModule, Reduction, SeriesMatrix, SigmaBase, SigmaModule, TwistConvention, Zp,
};

/// Criteria expected to fail, with what the computation gives instead.
const KNOWN_FAILURES: [usize; 1] = [7];

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn count(failures: usize, total: usize, extra: &str) -> Verdict {
        Verdict {
            passed: failures == 0,
            detail: format!("{failures} failures in {total}{extra}"),
        }
    }
}

fn ring(p: u64, n: u32) -> Arc<Zp> {
    Zp::new(p, n).expect("valid ring")
}

fn modulus(p: u64, n: u32) -> BigInt {
    BigInt::from(p).pow(n)
}

/// `sum a_i T^i * sum b_j T^j` truncated below `T^d`, over the integers.
fn convolve(a: &[BigInt], b: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); d];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < d {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn values(xs: &[akashi_core::PadicInt]) -> Vec<BigInt> {
    xs.iter().map(|x| BigInt::from(x.value().clone())).collect()
}

/// Check 1: `p^mu * g * u` reproduces the input modulo `p^N`, `g` is distinguished
/// and `u` is a unit.
fn weierstrass_roundtrip() -> Verdict {
    let mut rng = seeded(1001);
    let mut failures = 0;
    let total = 1000;
    for i in 0..total {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=4u32);
        let d = rng.gen_range(1..=12usize);
        let r = ring(p, n);
        let f = if i % 4 == 3 {
            loop {
                let f = truncated_series(&mut rng, &r, d);
                if f.min_valuation() == Some(0) {
                    break f;
                }
            }
        } else {
            let half = (d - 1) / 2;
            loop {
                let f = series_with_char(&mut rng, &r, d, n - 1, half.min(4), half);
                if !f.is_zero() {
                    break f;
                }
            }
        };
        let Ok(w) = weierstrass_prepare(&f) else {
            failures += 1;
            continue;
        };
        let g = values(&w.distinguished());
        let u = values(&w.unit().coeffs());
        let q = modulus(p, n);
        let scale = BigInt::from(p).pow(w.mu());
        let rebuilt: Vec<BigInt> = convolve(&g, &u, d).iter().map(|c| (c * &scale).mod_floor(&q)).collect();
        let input: Vec<BigInt> = values(&f.coeffs());
        let distinguished = g.last().is_some_and(|c| c.is_one()) && g[..g.len() - 1].iter().all(|c| (c % p).is_zero());
        let unit = !(&u[0] % p).is_zero();
        if rebuilt != input || !distinguished || !unit {
            failures += 1;
        }
    }
    Verdict::count(failures, total, " series")
}

/// `L * diag(f_1, ..., f_k) * U` with constant unitriangular `L`, `U` and
/// each `f_i = p^mu g` for `mu <= 1` and `g` distinguished of degree `<= 1`.
fn linear_torsion_presentation(rng: &mut impl Rng, r: &Arc<Zp>, d: usize, k: usize) -> PresentationModule {
    let diag: Vec<LambdaSeries> = (0..k).map(|_| series_with_char(rng, r, d, 1, 1, 0)).collect();
    let mut triangular = |upper: bool| {
        SeriesMatrix::from_fn(r, d, k, k, |i, j| {
            if i == j {
                LambdaSeries::one(r, d)
            } else if (i < j) == upper {
                LambdaSeries::constant(r, d, &BigUint::from(rng.gen_range(0..r.prime())))
            } else {
                LambdaSeries::zero(r, d)
            }
        })
    };
    let l = triangular(false);
    let u = triangular(true);
    let diag = SeriesMatrix::diagonal(r, d, &diag).expect("same ring");
    PresentationModule::new(l.checked_mul(&diag).and_then(|x| x.checked_mul(&u)).expect("same ring"))
}

/// Check 2: `char(induce(M, c)) = normalize(substitute_tower(char(M), c))`.
fn induced_module_char() -> Verdict {
    let mut rng = seeded(2002);
    let mut failures = 0;
    let total = 200;
    for _ in 0..total {
        let p = [2u64, 3][rng.gen_range(0..2)];
        let c = rng.gen_range(0..=2u32);
        let k = rng.gen_range(1..=3usize);
        let r = ring(p, 4);
        let d = k * p.pow(c) as usize + 2;
        let m = linear_torsion_presentation(&mut rng, &r, d, k);
        let ok = (|| -> akashi_core::Result<bool> {
            let f = m.char_element()?;
            let expected = f.to_series(&r, d)?.substitute_tower(c).normalize()?;
            Ok(m.induce(c).char_element()? == expected)
        })();
        if !matches!(ok, Ok(true)) {
            failures += 1;
        }
    }
    Verdict::count(failures, total, " presentations")
}

/// Check 3: `akashi(M) = akashi(L) akashi(N)` on exact triples.
fn multiplicativity() -> Verdict {
    let mut rng = seeded(3003);
    let mut failures = 0;
    let total = 100;
    let kinds = [
        TripleKind::Split,
        TripleKind::LambdaNonsplit,
        TripleKind::ActionNonsplit,
    ];
    let r = ring(3, 12);
    for i in 0..total {
        let d = 1 + i % 2;
        let holds = exact_triple(&mut rng, &r, 8, d, kinds[i % 3])
            .and_then(|t| verify_multiplicativity(&t.l, &t.m, &t.n, &t.alpha, &t.beta, AkashiOptions::default()));
        if !matches!(holds, Ok(ref rep) if rep.holds) {
            failures += 1;
        }
    }
    Verdict::count(failures, total, " triples")
}

/// Check 4: Modules finitely generated over `Z_p` have Akashi series 1.
fn triviality() -> Verdict {
    let mut rng = seeded(4004);
    let mut failures = 0;
    let total = 200;
    for i in 0..total {
        let d = 1 + i % 2;
        let k = rng.gen_range(1..=2usize);
        let m = if i % 4 < 2 {
            sigma_finite(&mut rng, &ring(3, 3), k, 3, d)
        } else {
            sigma_zp_free(&mut rng, &ring(3, 5), 8, k, d)
        };
        match akashi_series(&m, AkashiOptions::default()) {
            Ok(res) if res.akashi.is_one() => {}
            _ => failures += 1,
        }
    }
    Verdict::count(failures, total, " modules")
}

/// Check 5: The main path agrees with the brute-force oracle.
fn oracle_equivalence() -> Verdict {
    let report = fuzz(5005, 500);
    let mut v = Verdict::count(
        report.mismatches.len(),
        report.instances,
        &format!(
            " instances ({} comparisons, {} skipped)",
            report.comparisons, report.skipped_comparisons
        ),
    );
    v.passed &= report.instances == 500;
    if let Some(first) = report.mismatches.first() {
        v.detail.push_str(&format!("; first: {first}"));
    }
    v
}

/// Check 6: `Z_p` with trivial actions has `H_0` with char `T`; so does the trivial
/// rank-one twist.
fn split_multiplicative_factor() -> Verdict {
    let r = ring(5, 4);
    let d = 6;
    let t = CharElement::t(&r);
    let base = PresentationModule::cyclic(&LambdaSeries::t(&r, d));
    let h0 = SigmaModule::trivial(SigmaBase::Presentation(base), 1)
        .and_then(|m| homology_chars(&m, AkashiOptions::default()))
        .map(|chars| chars[0].clone());
    let twist = rank_one_twist(&r.one(), d, TwistConvention::Character).and_then(|m| m.char_element());
    let (h0_ok, twist_ok) = (matches!(&h0, Ok(f) if *f == t), matches!(&twist, Ok(f) if *f == t));
    Verdict {
        passed: h0_ok && twist_ok,
        detail: format!("char H_0 = {}, char twist(1) = {}", show(&h0), show(&twist)),
    }
}

fn show(f: &akashi_core::Result<CharElement>) -> String {
    match f {
        Ok(f) => f.to_string(),
        Err(e) => format!("error ({e})"),
    }
}

fn v5(x: &BigInt) -> u32 {
    let mut x = x.abs();
    let mut v = 0;
    while !x.is_zero() && (&x % 5u32).is_zero() {
        x /= 5u32;
        v += 1;
    }
    v
}

/// Check 7: Factors `T - 5` and `T + 1 - 6^5` with leading valuations 1 and 1 and
/// a correction total of 2. Returns the verdict and whether the computed
/// values match exact integer arithmetic.
fn gl2_factors() -> (Verdict, bool) {
    let r = ring(5, 8);
    let places = [
        SplitPlace {
            u: r.element(6),
            c_v: 0,
        },
        SplitPlace {
            u: r.element(6),
            c_v: 1,
        },
    ];
    let opts = LocalOptions {
        t_degree: 6,
        frobenius: FrobeniusConvention::Arithmetic,
        twist: TwistConvention::Character,
    };
    let report = assemble_gl2(&CharElement::one(&r), &[], &places, opts).expect("assembles");
    let factors: Vec<&CharElement> = report.factors[1..].iter().map(|f| &f.element).collect();
    let expected = [
        CharElement::new(&r, 0, [-5, 1]).expect("distinguished"),
        CharElement::new(&r, 0, [BigInt::from(1) - BigInt::from(6).pow(5), BigInt::one()]).expect("distinguished"),
    ];
    let shapes_ok = factors.len() == 2 && factors.iter().zip(&expected).all(|(a, b)| *a == b);
    let leading: Vec<u32> = factors.iter().map(|f| f.leading_term_valuation()).collect();
    let total = euler_characteristic_correction(5, &[], &places)
        .expect("principal units")
        .total;

    let exact_leading = [v5(&BigInt::from(5)), v5(&(BigInt::from(6).pow(5) - 1))];
    let exact_total = i64::from(exact_leading[0] + exact_leading[1]);
    let consistent = shapes_ok && leading == exact_leading && total == exact_total;
    let verdict = Verdict {
        passed: shapes_ok && leading == [1, 1] && total == 2,
        detail: format!(
            "factors {} and {}; leading valuations {leading:?} (required [1, 1]); total {total} (required 2); \
             6^5 - 1 = 7775 = 5^2 * 311",
            factors[0], factors[1]
        ),
    };
    (verdict, consistent)
}

/// Check 8: `ord_at_zero` and leading valuations add up along assembled reports.
fn extra_zero_laws() -> Verdict {
    let mut rng = seeded(8008);
    let r = ring(5, 12);
    let t = CharElement::t(&r);
    let mut failures = 0;
    let total = 100;
    let small = |rng: &mut akashi_core::random::InstanceRng| {
        let f = char_element(rng, &r, 1, 2);
        f.checked_mul(&t.pow(rng.gen_range(0..=1u32))).expect("same ring")
    };
    for i in 0..total {
        let f_cyc = small(&mut rng);
        let ok = if i % 2 == 0 {
            let locals: Vec<CharElement> = (0..rng.gen_range(0..=2)).map(|_| small(&mut rng)).collect();
            let r_count = rng.gen_range(0..=2usize);
            assemble_main(&f_cyc, &locals, r_count).is_ok_and(|rep| {
                let ord = f_cyc.ord_at_zero() + r_count + locals.iter().map(CharElement::ord_at_zero).sum::<usize>();
                let lead = f_cyc.leading_term_valuation()
                    + locals.iter().map(CharElement::leading_term_valuation).sum::<u32>();
                rep.ord_at_zero == ord && rep.leading_valuation == lead && rep.is_consistent()
            })
        } else {
            let m_places: Vec<LocalPlaceData> = (0..rng.gen_range(0..=2))
                .map(|_| {
                    let ell = [2u64, 3, 7, 11, 13][rng.gen_range(0..5)];
                    LocalPlaceData::new(ell, 1, Reduction::SplitMult, 1, rng.gen_range(0..=1)).expect("valid")
                })
                .collect();
            let r_places: Vec<SplitPlace> = (0..rng.gen_range(0..=2))
                .map(|_| SplitPlace {
                    u: principal_unit(&mut rng, &r),
                    c_v: rng.gen_range(0..=1),
                })
                .collect();
            let opts = LocalOptions {
                t_degree: 40,
                frobenius: FrobeniusConvention::Arithmetic,
                twist: TwistConvention::Character,
            };
            assemble_gl2(&f_cyc, &m_places, &r_places, opts).is_ok_and(|rep| {
                let parts: Vec<&CharElement> = rep.factors.iter().map(|f| &f.element).collect();
                let ord: usize = parts.iter().map(|f| f.ord_at_zero()).sum();
                let lead: u32 = parts.iter().map(|f| f.leading_term_valuation()).sum();
                *parts[0] == f_cyc && rep.ord_at_zero == ord && rep.leading_valuation == lead && rep.is_consistent()
            })
        };
        if !ok {
            failures += 1;
        }
    }
    Verdict::count(failures, total, " reports")
}

/// Check 9: `P_v(1/ell) = #E(F_ell) / ell` at good primes, with the Hasse bound.
fn euler_factors() -> Verdict {
    let curves = [[0, 0, 0, 0, 1], [0, 0, 0, 1, 0], [0, -1, 1, 0, 0]];
    let mut failures = 0;
    let mut total = 0;
    for a in curves {
        let curve = CurveData::new(a).expect("nonsingular");
        for ell in (2..=100u64).filter(|&l| akashi_core::padic::is_prime(l) && curve.has_good_reduction_at(l)) {
            total += 1;
            let count = count_points(&curve, ell).expect("good prime");
            let trace = ell as i64 + 1 - count as i64;
            let hasse = trace * trace <= 4 * ell as i64;
            let place = LocalPlaceData::good_from_curve(&curve, ell, 0).expect("good prime");
            let value = euler_factor_at_one(&place).expect("good prime").value;
            let expected = BigRational::new(BigInt::from(count), BigInt::from(ell));
            if !hasse || value != expected || count_points_by_pairs(&curve, ell) != count {
                failures += 1;
            }
        }
    }
    Verdict::count(failures, total, " good primes")
}

fn main() -> ExitCode {
    type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Verdict + 'a>);
    let consistent = std::cell::Cell::new(true);
    let criteria: Vec<Criterion> = vec![
        (
            "weierstrass roundtrip",
            Duration::from_secs(5),
            Box::new(weierstrass_roundtrip),
        ),
        ("induced module", Duration::from_secs(10), Box::new(induced_module_char)),
        (
            "akashi multiplicativity",
            Duration::from_secs(30),
            Box::new(multiplicativity),
        ),
        ("akashi triviality", Duration::from_secs(60), Box::new(triviality)),
        (
            "oracle equivalence",
            Duration::from_secs(300),
            Box::new(oracle_equivalence),
        ),
        (
            "split multiplicative factor",
            Duration::from_secs(5),
            Box::new(split_multiplicative_factor),
        ),
        (
            "gl2 factors and correction",
            Duration::from_secs(5),
            Box::new(|| {
                let (v, ok) = gl2_factors();
                consistent.set(ok);
                v
            }),
        ),
        (
            "extra zero and leading term laws",
            Duration::from_secs(5),
            Box::new(extra_zero_laws),
        ),
        (
            "euler factor consistency",
            Duration::from_secs(5),
            Box::new(euler_factors),
        ),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        let start = Instant::now();
        let mut v = run();
        let elapsed = start.elapsed();
        if elapsed > *limit {
            v.passed = false;
            v.detail.push_str(&format!("; over the {}s limit", limit.as_secs()));
        }
        let status = if v.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {number} [{status}] {name}: {} ({:.2}s)",
            v.detail,
            elapsed.as_secs_f64()
        );
        if !v.passed && !KNOWN_FAILURES.contains(&number) {
            unexpected.push(number);
        }
    }
    if !consistent.get() {
        println!("criterion 7 computed values disagree with exact integer arithmetic");
        unexpected.push(7);
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
