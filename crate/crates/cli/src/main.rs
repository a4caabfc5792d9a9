//! `akashi`: characteristic elements, Akashi series and the assembled
//! formulas, over JSON files or standard input and output.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use akashi_core::assembler::{GL2_ASSUMPTIONS, MAIN_ASSUMPTIONS};
use akashi_core::elliptic::enumeration_bound;
use akashi_core::json::{
    AkashiJson, AssembleGl2Json, AssembleMainJson, CharElementJson, EulerCharJson, EulerCharOutputJson,
    EulerFactorJson, EulerInputJson, LocalSeriesJson, ModuleJson, RationalJson, ReportJson, RingDefaults, SeriesJson,
    SigmaModuleJson, WeierstrassJson,
};
use akashi_core::oracle::fuzz;
use akashi_core::padic::is_prime;
use akashi_core::{
    akashi_series, assemble_gl2, assemble_main, count_points, euler_characteristic_correction, euler_factor_at_one,
    local_correction_series, require_assumptions, weierstrass_prepare, AkashiOptions, Assumption, CurveData, Error,
    ErrorClass, FormulaReport, FrobeniusConvention, LocalOptions, LocalPlaceData, TwistConvention, Zp,
};

#[derive(Debug, Parser)]
#[command(
    name = "akashi",
    version,
    about = "Characteristic elements and Akashi series over Z_p[[T]]"
)]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Globals {
    /// The prime p, for inputs that do not name it.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// p-adic precision N, for inputs that do not name it.
    #[arg(long = "p-prec", global = true)]
    p_prec: Option<u32>,
    /// T-adic truncation D, for inputs that do not name it.
    #[arg(long = "t-deg", global = true)]
    t_deg: Option<usize>,
    #[arg(long = "frobenius-convention", value_enum, global = true, default_value_t = Frobenius::Arithmetic)]
    frobenius_convention: Frobenius,
    #[arg(long = "dual-convention", value_enum, global = true, default_value_t = Dual::Character)]
    dual_convention: Dual,
    /// Assert a hypothesis of the assembled formulas (repeatable).
    #[arg(long, value_enum, global = true)]
    assume: Vec<Hypothesis>,
    /// Print an audit table of the factors to standard error.
    #[arg(long, global = true)]
    report: bool,
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Frobenius {
    Arithmetic,
    Geometric,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Dual {
    Character,
    InverseCharacter,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Hypothesis {
    StronglyAdmissible,
    ReductionCondition,
    Mhg,
    NoCm,
}

impl From<Hypothesis> for Assumption {
    fn from(h: Hypothesis) -> Assumption {
        match h {
            Hypothesis::StronglyAdmissible => Assumption::StronglyAdmissible,
            Hypothesis::ReductionCondition => Assumption::ReductionCondition,
            Hypothesis::Mhg => Assumption::MhG,
            Hypothesis::NoCm => Assumption::NoComplexMultiplication,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weierstrass preparation of a series.
    Wprep(Input),
    /// Characteristic element of a module.
    Char(Input),
    /// Koszul homology characteristic elements and the Akashi series.
    Akashi {
        #[command(flatten)]
        input: Input,
        /// Skip the recomputation at coarser precision and finer truncation.
        #[arg(long)]
        no_stability_check: bool,
    },
    /// Induction along the index-p^c subgroup of Gamma.
    Induce {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        c: u32,
    },
    /// Euler factors P_v(q_v^-1) = L_v(E, 1)^-1 of a place or of a curve.
    Euler(Input),
    /// Characteristic element of the local correction J_v.
    LocalSeries(Input),
    /// T^r * f_cyc * prod(local factors).
    AssembleMain(Input),
    /// f_cyc * prod over M of f_(J_v) * prod over R of (T + 1 - chi(gamma_v)).
    AssembleGl2(Input),
    /// p-adic valuation of the Euler characteristic correction.
    EulerChar(Input),
    /// Compare the main algorithms with the brute-force oracle.
    OracleFuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Debug, Args)]
struct Input {
    /// JSON input file; standard input when absent or `-`.
    input: Option<PathBuf>,
}

/// Failure of a run, with the exit code it maps to.
#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
    Mismatches(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) => match e.class() {
                ErrorClass::Precision => 2,
                ErrorClass::Hypothesis => 3,
                ErrorClass::Input => 1,
            },
            Failure::Io(_) | Failure::Mismatches(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(s) => write!(f, "{s}"),
            Failure::Mismatches(n) => write!(f, "{n} mismatches between the main path and the oracle"),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read_json<T: DeserializeOwned>(input: &Input) -> std::result::Result<T, Failure> {
    let text = match &input.input {
        Some(path) if path.as_os_str() != "-" => {
            fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("standard input: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Core(Error::invalid(format!("JSON: {e}"))))
}

struct Context {
    globals: Globals,
    defaults: RingDefaults,
}

impl Context {
    fn new(globals: Globals) -> Context {
        let defaults = RingDefaults {
            prime: globals.prime,
            p_precision: globals.p_prec,
            t_degree: globals.t_deg,
        };
        Context { globals, defaults }
    }

    fn frobenius(&self) -> FrobeniusConvention {
        match self.globals.frobenius_convention {
            Frobenius::Arithmetic => FrobeniusConvention::Arithmetic,
            Frobenius::Geometric => FrobeniusConvention::Geometric,
        }
    }

    fn twist(&self) -> TwistConvention {
        match self.globals.dual_convention {
            Dual::Character => TwistConvention::Character,
            Dual::InverseCharacter => TwistConvention::InverseCharacter,
        }
    }

    fn assumptions(&self) -> Vec<Assumption> {
        let mut a: Vec<Assumption> = self.globals.assume.iter().map(|&h| h.into()).collect();
        a.sort();
        a.dedup();
        a
    }

    fn assumption_names(&self) -> Vec<String> {
        self.assumptions().iter().map(|a| a.name().to_string()).collect()
    }

    fn emit<T: Serialize>(&self, value: &T) -> Outcome {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
        text.push('\n');
        match &self.globals.output {
            Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
            None => io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(format!("standard output: {e}"))),
        }
    }

    fn audit(&self, report: &FormulaReport) {
        if self.globals.report {
            eprint!("{}", report.audit_table());
        }
    }

    fn emit_report(&self, report: &FormulaReport) -> Outcome {
        self.audit(report);
        self.emit(&ReportJson::from_report(report, &self.assumption_names()))
    }
}

fn euler_factors(ctx: &Context, input: EulerInputJson) -> std::result::Result<Vec<EulerFactorJson>, Failure> {
    let places: Vec<(LocalPlaceData, Option<u64>)> = match input {
        EulerInputJson::Place(place) => vec![(place, None)],
        EulerInputJson::Curve { a, ells, bound } => {
            let curve = CurveData::new(a)?;
            let ells = match ells {
                Some(ells) => ells,
                None => {
                    let bound = bound.unwrap_or(100).min(enumeration_bound());
                    (2..=bound)
                        .filter(|&ell| is_prime(ell) && curve.has_good_reduction_at(ell))
                        .collect()
                }
            };
            ells.into_iter()
                .map(|ell| {
                    let points = count_points(&curve, ell)?;
                    Ok((LocalPlaceData::good_from_curve(&curve, ell, 0)?, Some(points)))
                })
                .collect::<Result<_, Error>>()?
        }
    };
    places
        .into_iter()
        .map(|(place, points)| {
            let e = euler_factor_at_one(&place)?;
            Ok(EulerFactorJson {
                ell: place.ell,
                points,
                value: RationalJson::from_rational(&e.value),
                valuation: ctx.globals.prime.map(|p| e.valuation(p)),
            })
        })
        .collect()
}

fn run(cli: Cli) -> Outcome {
    let ctx = Context::new(cli.globals);
    let d = &ctx.defaults;
    match cli.command {
        Command::Wprep(input) => {
            let s: SeriesJson = read_json(&input)?;
            let w = weierstrass_prepare(&s.to_series(d)?)?;
            ctx.emit(&WeierstrassJson::from_decomposition(&w))
        }
        Command::Char(input) => {
            let m: ModuleJson = read_json(&input)?;
            let f = m.to_base(d)?.char_element()?;
            ctx.emit(&CharElementJson::from_char(&f))
        }
        Command::Akashi {
            input,
            no_stability_check,
        } => {
            let m: SigmaModuleJson = read_json(&input)?;
            let opts = AkashiOptions {
                stability_check: !no_stability_check,
            };
            let r = akashi_series(&m.to_module(d)?, opts)?;
            ctx.emit(&AkashiJson::from_result(&r))
        }
        Command::Induce { input, c } => {
            let m: ModuleJson = read_json(&input)?;
            let induced = m.to_presentation(d)?.induce(c);
            #[derive(Serialize)]
            struct Induced {
                module: ModuleJson,
                char_element: CharElementJson,
            }
            ctx.emit(&Induced {
                module: ModuleJson::from_presentation(&induced),
                char_element: CharElementJson::from_char(&induced.char_element()?),
            })
        }
        Command::Euler(input) => {
            let e: EulerInputJson = read_json(&input)?;
            ctx.emit(&euler_factors(&ctx, e)?)
        }
        Command::LocalSeries(input) => {
            let l: LocalSeriesJson = read_json(&input)?;
            let ring = d.ring(l.p, l.n)?;
            let f = local_correction_series(&l.place, &ring, d.t_degree(l.d)?, ctx.frobenius())?;
            ctx.emit(&CharElementJson::from_char(&f))
        }
        Command::AssembleMain(input) => {
            require_assumptions(&ctx.assumptions(), &MAIN_ASSUMPTIONS)?;
            let a: AssembleMainJson = read_json(&input)?;
            let f_cyc = a.f_cyc.to_char(d)?;
            let locals = a.locals.iter().map(|f| f.to_char(d)).collect::<Result<Vec<_>, _>>()?;
            ctx.emit_report(&assemble_main(&f_cyc, &locals, a.r)?)
        }
        Command::AssembleGl2(input) => {
            require_assumptions(&ctx.assumptions(), &GL2_ASSUMPTIONS)?;
            let a: AssembleGl2Json = read_json(&input)?;
            let f_cyc = a.f_cyc.to_char(d)?;
            if f_cyc.prime() < 5 {
                eprintln!("warning: p = {} < 5; reduction types are used as given", f_cyc.prime());
            }
            let r_places = a
                .r_places
                .iter()
                .map(|r| r.to_place(f_cyc.ring()))
                .collect::<Result<Vec<_>, _>>()?;
            let opts = LocalOptions {
                t_degree: d.t_degree(a.d)?,
                frobenius: ctx.frobenius(),
                twist: ctx.twist(),
            };
            ctx.emit_report(&assemble_gl2(&f_cyc, &a.m_places, &r_places, opts)?)
        }
        Command::EulerChar(input) => {
            require_assumptions(&ctx.assumptions(), &GL2_ASSUMPTIONS)?;
            let e: EulerCharJson = read_json(&input)?;
            let ring = Zp::new(
                d.prime.ok_or_else(|| Error::invalid("euler-char needs --prime"))?,
                d.p_precision.unwrap_or(20),
            )?;
            let r_places = e
                .r_places
                .iter()
                .map(|r| r.to_place(&ring))
                .collect::<Result<Vec<_>, _>>()?;
            let c = euler_characteristic_correction(ring.prime(), &e.m_places, &r_places)?;
            ctx.emit(&EulerCharOutputJson::from(&c))
        }
        Command::OracleFuzz { seed, count } => {
            let report = fuzz(seed, count);
            #[derive(Serialize)]
            struct FuzzJson {
                seed: u64,
                instances: usize,
                skipped_instances: usize,
                comparisons: usize,
                skipped_comparisons: usize,
                mismatches: Vec<String>,
            }
            let mismatches = report.mismatches.len();
            ctx.emit(&FuzzJson {
                seed: report.seed,
                instances: report.instances,
                skipped_instances: report.skipped_instances,
                comparisons: report.comparisons,
                skipped_comparisons: report.skipped_comparisons,
                mismatches: report.mismatches,
            })?;
            if mismatches > 0 {
                return Err(Failure::Mismatches(mismatches));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
