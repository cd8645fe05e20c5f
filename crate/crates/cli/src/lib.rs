//! Argument parsing and dispatch for the `bow` binary.
//!
//! [`run`] never panics on bad input and never exits the process, so it can
//! be driven from tests.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;

use bow_core::brane::{cyclic_gaps, is_quiver, is_quiver_like};
use bow_core::maya::{count_fixed_points, enumerate_fixed_points};
use bow_core::modular::{appendix_f_check, check_sigma_series, sigma_case};
use bow_core::nekrasov::partition_series;
use bow_core::series::{covering_check, euler_series_enum, euler_series_formula, poincare_series, stabilization_report};
use bow_core::tangent::{tangent_via_eyd, tangent_via_pairs};
use bow_core::{BowError, BraneTriple, CellSign, GammaOrientation, IntSeries, KClass, Rational, RationalPoint};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Environment variable holding the worker thread count.
pub const THREADS_VAR: &str = "BOW_THREADS";

#[derive(Debug, Parser)]
#[command(name = "bow", version, about = "Fixed points and generating series of affine type A bow varieties")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Seed for every randomized choice.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Minus,
    Plus,
}

impl From<SignArg> for CellSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Minus => CellSign::Minus,
            SignArg::Plus => CellSign::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Standard,
    Reversed,
}

impl From<OrientationArg> for GammaOrientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Standard => GammaOrientation::Standard,
            OrientationArg::Reversed => GammaOrientation::Reversed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Enum,
    Formula,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Move {
    Move1,
    Move1Inv,
    Move2,
    Move2Inv,
    D5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SigmaCase {
    #[value(name = "321")]
    C321,
    #[value(name = "neg111")]
    Neg111,
}

#[derive(Debug, Args)]
pub struct Margins {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub e: Vec<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub f: Vec<i64>,
}

#[derive(Debug, Args)]
pub struct Triple {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[command(flatten)]
    pub margins: Margins,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the fixed points of M(d, e, f) as Maya diagrams.
    FixedPoints {
        #[command(flatten)]
        triple: Triple,
        /// Print only the number of fixed points.
        #[arg(long)]
        count: bool,
    },
    /// Tangent character at every fixed point.
    Tangent {
        #[command(flatten)]
        triple: Triple,
        /// Also compute the Young diagram formula and fail on disagreement.
        #[arg(long)]
        check: bool,
    },
    /// Euler characteristics Z(q) = Σ χ(M(d, e, f)) q^d.
    EulerSeries {
        #[command(flatten)]
        margins: Margins,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Cell-count series Z^±(q, t).
    PoincareSeries {
        #[command(flatten)]
        margins: Margins,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SignArg::Minus)]
        sign: SignArg,
        #[arg(long, value_enum, default_value_t = OrientationArg::Standard)]
        orientation: OrientationArg,
    },
    /// Z_d = Σ 1/e(T_M) at a rational point; a seeded random point if omitted.
    PartitionFunction {
        #[command(flatten)]
        margins: Margins,
        #[arg(long, allow_hyphen_values = true)]
        eps1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eps2: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Option<Vec<String>>,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Quiver and quiver-like tests on a charge vector.
    Classify {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        e: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Option<Vec<i64>>,
        /// Number of NS5 branes; defaults to the length of --f.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
    },
    /// Apply a Hanany-Witten move or a D5 swap to a triple.
    Hw {
        #[command(flatten)]
        triple: Triple,
        #[arg(long = "move", value_enum)]
        mv: Move,
        /// 1-based row for --move d5; swaps rows j and j+1.
        #[arg(long, default_value_t = 1)]
        j: usize,
    },
    /// The (m+1)-bounded covering criterion and its witness.
    Covering {
        #[command(flatten)]
        triple: Triple,
        #[arg(long, value_enum, default_value_t = OrientationArg::Standard)]
        orientation: OrientationArg,
    },
    /// Normalized q-coefficients of Z^±(q, t) above the lowest degree.
    Stabilize {
        #[command(flatten)]
        margins: Margins,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SignArg::Minus)]
        sign: SignArg,
        #[arg(long, value_enum, default_value_t = OrientationArg::Standard)]
        orientation: OrientationArg,
    },
    /// σ-identities of Z_0 and the quadratic-form parametrization.
    ModularCheck {
        #[arg(long = "case", value_enum, default_value_t = SigmaCase::C321)]
        case: SigmaCase,
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Half-width of the box for the parametrization check.
        #[arg(long = "box", default_value_t = 3)]
        radius: i64,
    },
}

/// Exit code, standard output and standard error of one invocation.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Validation(String),
    Consistency(String, String),
}

impl From<BowError> for Failure {
    fn from(e: BowError) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Res = std::result::Result<String, Failure>;

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => match v.parse::<usize>() {
            Ok(t) => t,
            Err(_) => {
                return Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: format!("error: {THREADS_VAR} must be a non-negative integer, got {v:?}\n"),
                }
            }
        },
        Err(_) => 0,
    };
    let result = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| dispatch(&cli)),
        Err(e) => Err(Failure::Validation(e.to_string())),
    };
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(Failure::Validation(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Consistency(stdout, msg)) => Outcome {
            code: 2,
            stdout,
            stderr: format!("consistency failure: {msg}\n"),
        },
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn triple(t: &Triple) -> Result<BraneTriple, Failure> {
    let bt = BraneTriple::new(t.d, t.margins.e.clone(), t.margins.f.clone())?;
    bt.check_margins()?;
    Ok(bt)
}

fn margins(m: &Margins) -> Result<(), Failure> {
    bow_core::brane::check_margins(&m.e, &m.f)?;
    Ok(())
}

fn dispatch(cli: &Cli) -> Res {
    let fmt = cli.format;
    match &cli.command {
        Command::FixedPoints { triple: t, count } => {
            let bt = triple(t)?;
            if *count {
                let c = count_fixed_points(bt.d, &bt.e, &bt.f)?;
                return Ok(format!("{c}\n"));
            }
            let fps: Vec<_> = enumerate_fixed_points(bt.d, &bt.e, &bt.f)?.collect();
            Ok(match fmt {
                Format::Json => json(&fps),
                Format::Text => {
                    let mut s = String::new();
                    for (k, md) in fps.iter().enumerate() {
                        let _ = writeln!(s, "# {} (2k from {})", k + 1, md.two_k_lo());
                        for row in 0..md.n() {
                            let line: Vec<String> = md
                                .blocks()
                                .iter()
                                .map(|b| b[row].iter().map(|x| x.to_string()).collect())
                                .collect();
                            let _ = writeln!(s, "{}", line.join(" "));
                        }
                    }
                    s
                }
            })
        }
        Command::Tangent { triple: t, check } => {
            let bt = triple(t)?;
            let mut classes = Vec::new();
            let mut mismatch = None;
            for (k, md) in enumerate_fixed_points(bt.d, &bt.e, &bt.f)?.enumerate() {
                let x = tangent_via_pairs(&md);
                if *check && mismatch.is_none() && tangent_via_eyd(&md) != x {
                    mismatch = Some(k + 1);
                }
                classes.push(x);
            }
            let out = match fmt {
                Format::Json => json(&classes),
                Format::Text => classes.iter().map(|c: &KClass| format!("{c}\n")).collect(),
            };
            match mismatch {
                Some(k) => Err(Failure::Consistency(out, format!("formulas disagree at fixed point {k}"))),
                None => Ok(out),
            }
        }
        Command::EulerSeries { margins: mg, order, method } => {
            margins(mg)?;
            let (series, mismatch) = match method {
                Method::Enum => (euler_series_enum::<i64>(&mg.e, &mg.f, *order)?, false),
                Method::Formula => (euler_series_formula::<i64>(&mg.e, &mg.f, *order)?, false),
                Method::Both => {
                    let a = euler_series_enum::<i64>(&mg.e, &mg.f, *order)?;
                    let b = euler_series_formula::<i64>(&mg.e, &mg.f, *order)?;
                    let bad = a != b;
                    (a, bad)
                }
            };
            let out = series_out(&series, fmt);
            if mismatch {
                Err(Failure::Consistency(out, "enumeration and closed formula disagree".into()))
            } else {
                Ok(out)
            }
        }
        Command::PoincareSeries { margins: mg, order, sign, orientation } => {
            margins(mg)?;
            let s = poincare_series::<i64>(&mg.e, &mg.f, *order, (*sign).into(), (*orientation).into())?;
            Ok(match fmt {
                Format::Json => json(&s),
                Format::Text => {
                    let rows: Vec<(String, String)> = s
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(k, p)| (k.to_string(), tpoly(p)))
                        .collect();
                    table(("d", "cells"), &rows)
                }
            })
        }
        Command::PartitionFunction { margins: mg, eps1, eps2, a, order } => {
            margins(mg)?;
            let n = mg.e.len();
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let pick = |given: Option<&String>, rng: &mut ChaCha8Rng| match given {
                Some(s) => parse_rational(s).map_err(Failure::Validation),
                None => Ok(random_rational(rng)),
            };
            let e1 = pick(eps1.as_ref(), &mut rng)?;
            let e2 = pick(eps2.as_ref(), &mut rng)?;
            let av = match a {
                Some(v) => {
                    if v.len() != n {
                        return Err(BowError::RankMismatch(n, v.len()).into());
                    }
                    v.iter()
                        .map(|s| parse_rational(s))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(Failure::Validation)?
                }
                None => (0..n).map(|_| random_rational(&mut rng)).collect(),
            };
            let p = RationalPoint::new(e1, e2, av);
            let z = partition_series(&mg.e, &mg.f, &p, *order)?;
            let z: Vec<String> = z.iter().map(rational_str).collect();
            Ok(match fmt {
                Format::Json => json(&PartitionOut {
                    eps1: rational_str(&p.eps1),
                    eps2: rational_str(&p.eps2),
                    a: p.a.iter().map(rational_str).collect(),
                    z,
                }),
                Format::Text => {
                    let rows: Vec<(String, String)> =
                        z.into_iter().enumerate().map(|(d, v)| (d.to_string(), v)).collect();
                    format!(
                        "eps1 = {}, eps2 = {}, a = ({})\n{}",
                        rational_str(&p.eps1),
                        rational_str(&p.eps2),
                        p.a.iter().map(rational_str).collect::<Vec<_>>().join(", "),
                        table(("d", "Z_d"), &rows)
                    )
                }
            })
        }
        Command::Classify { e, f, m, d } => {
            if e.is_empty() {
                return Err(BowError::EmptyDiagram { n: 0, m: m.unwrap_or(0) }.into());
            }
            let m = match (m, f) {
                (Some(m), _) => *m,
                (None, Some(f)) => f.len(),
                (None, None) => return Err(Failure::Validation("need --m or --f".into())),
            };
            let mut out = ClassifyOut {
                n: e.len(),
                m,
                quiver: is_quiver(e, m),
                quiver_like: is_quiver_like(e, m),
                gaps: cyclic_gaps(e, m),
                multiplicities: None,
                valid: None,
                quiver_data: None,
            };
            if let (Some(d), Some(f)) = (d, f) {
                let bt = BraneTriple::new(*d, e.clone(), f.clone())?;
                let diag = bt.validate();
                out.valid = Some(diag.is_valid());
                out.multiplicities = diag.multiplicities.clone();
                if out.quiver && bt.check_margins().is_ok() {
                    out.quiver_data = bt.to_quiver().ok();
                }
            }
            Ok(match fmt {
                Format::Json => json(&out),
                Format::Text => {
                    let yn = |b: bool| if b { "yes" } else { "no" };
                    let mut s = format!(
                        "quiver: {}\nquiver-like: {}\ngaps: {:?}\n",
                        yn(out.quiver),
                        yn(out.quiver_like),
                        out.gaps
                    );
                    if let Some(v) = out.valid {
                        let _ = writeln!(s, "valid: {}", yn(v));
                    }
                    if let Some(mu) = &out.multiplicities {
                        let _ = writeln!(s, "multiplicities: {mu:?}");
                    }
                    if let Some(q) = &out.quiver_data {
                        let _ = writeln!(s, "node dims: {:?}\nframing: {:?}", q.node_dims, q.framing);
                    }
                    s
                }
            })
        }
        Command::Hw { triple: t, mv, j } => {
            let bt = BraneTriple::new(t.d, t.margins.e.clone(), t.margins.f.clone())?;
            let out = match mv {
                Move::Move1 => bt.move1(),
                Move::Move1Inv => bt.move1_inv(),
                Move::Move2 => bt.move2(),
                Move::Move2Inv => bt.move2_inv(),
                Move::D5 => {
                    if *j == 0 {
                        return Err(Failure::Validation("--j is 1-based".into()));
                    }
                    bt.d5_swap(j - 1)?
                }
            };
            Ok(match fmt {
                Format::Json => json(&out),
                Format::Text => format!("d = {}\ne = {:?}\nf = {:?}\n", out.d, out.e, out.f),
            })
        }
        Command::Covering { triple: t, orientation } => {
            let bt = BraneTriple::new(t.d, t.margins.e.clone(), t.margins.f.clone())?;
            let r = covering_check(bt.d, &bt.e, &bt.f, (*orientation).into())?;
            let out = match fmt {
                Format::Json => json(&r),
                Format::Text => format!(
                    "condition: {}\nrotation: {:?}\nquiver-like: {}\nsearched: d = {}, e = {:?}, f = {:?}\nfixed points: {}\nwitness: {}\nimplication: {}\n",
                    r.condition,
                    r.rotation,
                    r.quiver_like,
                    r.searched.d,
                    r.searched.e,
                    r.searched.f,
                    r.fixed_points,
                    r.witness_found,
                    r.implication_holds
                ),
            };
            if r.implication_holds {
                Ok(out)
            } else {
                Err(Failure::Consistency(out, "condition holds but no witness was found".into()))
            }
        }
        Command::Stabilize { margins: mg, order, sign, orientation } => {
            margins(mg)?;
            let r = stabilization_report(&mg.e, &mg.f, *order, (*sign).into(), (*orientation).into())?;
            Ok(match fmt {
                Format::Json => json(&r),
                Format::Text => {
                    let rows: Vec<(String, String)> = r
                        .rows
                        .iter()
                        .map(|row| {
                            let m = row.matched_degree.map_or("-".to_string(), |x| x.to_string());
                            (row.s.to_string(), format!("[{m}] {}", tpoly(&row.poly)))
                        })
                        .collect();
                    format!("d0 = {}, t0 = {}\n{}", r.d0, r.t0, table(("s", "[matched] P_s(t)"), &rows))
                }
            })
        }
        Command::ModularCheck { case, order, radius } => {
            if *radius < 0 {
                return Err(Failure::Validation("--box must be non-negative".into()));
            }
            let name = match case {
                SigmaCase::C321 => "321",
                SigmaCase::Neg111 => "neg111",
            };
            let (e, f, residue, offset) = sigma_case(name).expect("known case");
            let sig = check_sigma_series(&e, &f, residue, offset, *order)?;
            let app = appendix_f_check(*radius);
            let ok = sig.holds() && app.holds();
            let out = match fmt {
                Format::Json => json(&ModularOut { sigma: &sig, appendix: &app }),
                Format::Text => {
                    let rows: Vec<(String, String)> = (0..sig.coeffs.len())
                        .map(|n| {
                            (
                                format!("{}", n + offset),
                                format!("{} {} sigma({})", sig.coeffs[n], sig.expected[n], 3 * n as i64 + residue),
                            )
                        })
                        .collect();
                    format!(
                        "{}appendix box {}: {} points, {}\n",
                        table(("q^k", "Z_0 sigma"), &rows),
                        radius,
                        app.points,
                        if app.holds() { "ok" } else { "FAILED" }
                    )
                }
            };
            if ok {
                Ok(out)
            } else {
                let msg = match sig.first_failure {
                    Some(n) => format!("sigma identity fails at n = {n}"),
                    None => "parametrization check failed".into(),
                };
                Err(Failure::Consistency(out, msg))
            }
        }
    }
}

#[derive(Serialize)]
struct PartitionOut {
    eps1: String,
    eps2: String,
    a: Vec<String>,
    z: Vec<String>,
}

#[derive(Serialize)]
struct ClassifyOut {
    n: usize,
    m: usize,
    quiver: bool,
    quiver_like: bool,
    gaps: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    valid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicities: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quiver_data: Option<bow_core::QuiverData>,
}

#[derive(Serialize)]
struct ModularOut<'a> {
    sigma: &'a bow_core::modular::SigmaReport,
    appendix: &'a bow_core::modular::AppendixReport,
}

fn series_out(s: &IntSeries, fmt: Format) -> String {
    match fmt {
        Format::Json => json(s),
        Format::Text => {
            let rows: Vec<(String, String)> =
                s.coeffs().iter().enumerate().map(|(k, c)| (k.to_string(), c.to_string())).collect();
            table(("d", "coeff"), &rows)
        }
    }
}

fn table(head: (&str, &str), rows: &[(String, String)]) -> String {
    let w = rows.iter().map(|r| r.0.len()).chain([head.0.len()]).max().unwrap_or(0);
    let mut s = format!("{:>w$}  {}\n", head.0, head.1);
    for (a, b) in rows {
        let _ = writeln!(s, "{a:>w$}  {b}");
    }
    s
}

fn tpoly(p: &BTreeMap<i64, i64>) -> String {
    if p.is_empty() {
        return "0".into();
    }
    p.iter()
        .map(|(t, c)| match (*t, *c) {
            (0, c) => c.to_string(),
            (t, 1) => format!("t^{t}"),
            (t, c) => format!("{c}t^{t}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let bad = || format!("malformed rational {s:?}");
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Always `num/den`, also for integers.
pub fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut num = 0i64;
    while num == 0 {
        num = rng.gen_range(-40..=40);
    }
    let den = rng.gen_range(1..=17i64);
    Rational::new(num.into(), den.into())
}
