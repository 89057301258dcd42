use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::Serialize;

use pc::{CensusOptions, CyclicChain, PlumbingSpec, Sign, Slope};
use plumbing_census as pc;

const DEFAULT_GRID_CAP: usize = 100_000;

#[derive(Parser)]
#[command(
    name = "plumbing-census",
    version,
    about = "Exact contact-structure census toolkit for plumbed 3-manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (json is the canonical machine format)
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Reserved; accepted for interface stability, currently unused
    #[arg(long, global = true, hide = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Negative continued fraction utilities
    Cf(CfArgs),
    /// Farey bypass attachment on a torus dividing set
    Bypass(BypassArgs),
    /// Gluing matrices, dividing-slope triple, and normal-form targets
    Slopes(SlopesArgs),
    /// Dual framing cycle via the Kirby rewriting engine
    Dual(DualArgs),
    /// Golla-Lisca embeddability verdict with witness
    Embeddable(EmbeddableArgs),
    /// Stein-diagram stabilization enumeration at one torsion level
    Stein(SteinArgs),
    /// Tight-contact-structure census (single spec or batch grid)
    Census(CensusArgs),
    /// Exhaustive self-checks over coefficient sweeps
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CfArgs {
    /// Evaluate a coefficient list, e.g. 3,2
    #[arg(long, allow_hyphen_values = true)]
    eval: Option<String>,
    /// Expand a reduced rational p/q > 1, e.g. 5/2
    #[arg(long)]
    expand: Option<String>,
    /// Convergents p/q and p'/q' of a coefficient list
    #[arg(long)]
    convergents: Option<String>,
    /// Four-lemma report for a coefficient list
    #[arg(long)]
    lemmas: Option<String>,
}

#[derive(Args)]
struct BypassArgs {
    /// Dividing slope, e.g. -5/2 or inf
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Ruling slope
    #[arg(long, allow_hyphen_values = true)]
    r: String,
    /// Attachment side
    #[arg(long, default_value = "front")]
    side: String,
    /// Number of dividing-curve pairs (defaults to 1)
    #[arg(long)]
    pairs: Option<u32>,
}

#[derive(Args)]
struct SlopesArgs {
    /// Cycle tuple, e.g. 3,2
    #[arg(long)]
    a: String,
    /// Arm tuple, e.g. 2
    #[arg(long)]
    z: String,
    /// Splitting-torus dividing slope (defaults to -1)
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    t0: String,
    /// Fiber twisting parameter
    #[arg(long, default_value_t = 10)]
    m: i64,
}

#[derive(Args)]
struct DualArgs {
    /// Cycle tuple
    #[arg(long)]
    a: String,
    /// Edge sign
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    sign: String,
}

#[derive(Args)]
struct EmbeddableArgs {
    /// Cycle tuple; the dual is computed first
    #[arg(long)]
    a: Option<String>,
    /// Direct dominance query against these dual framings
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    /// Edge sign for --a
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    sign: String,
    /// Blowup depth bound
    #[arg(long, default_value_t = pc::cycles::DEFAULT_BLOWUP_BOUND)]
    max_k: usize,
}

#[derive(Args)]
struct SteinArgs {
    /// Cycle tuple
    #[arg(long)]
    a: String,
    /// Arm tuple (omit for a bare cycle)
    #[arg(long)]
    z: Option<String>,
    /// Edge sign
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    sign: String,
    /// Torsion level l
    #[arg(long, default_value_t = 0)]
    torsion: u32,
}

#[derive(Args)]
struct CensusArgs {
    /// Cycle tuple
    #[arg(long)]
    a: Option<String>,
    /// Arm tuple (omit for a bare cycle)
    #[arg(long)]
    z: Option<String>,
    /// Edge sign
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    /// Consult the Kirby engine for the conditional fillability tag
    #[arg(long)]
    resolve_embeddable: bool,
    /// Blowup depth bound for embeddability resolution
    #[arg(long, default_value_t = pc::cycles::DEFAULT_BLOWUP_BOUND)]
    max_k: usize,
    /// Run a batch grid instead of a single spec
    #[arg(long)]
    grid: bool,
    /// Inclusive entry range for cycle tuples, e.g. 2..4
    #[arg(long)]
    a_entries: Option<String>,
    /// Inclusive length range for cycle tuples, e.g. 2..3
    #[arg(long)]
    a_len: Option<String>,
    /// Inclusive entry range for arm tuples
    #[arg(long)]
    z_entries: Option<String>,
    /// Inclusive length range for arm tuples
    #[arg(long)]
    z_len: Option<String>,
    /// Sign set, e.g. +,-
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sweep the four continued-fraction lemmas
    #[arg(long)]
    appendix: bool,
    /// Largest coefficient in the sweep
    #[arg(long, default_value_t = 6)]
    max_entry: i64,
    /// Largest tuple length in the sweep
    #[arg(long, default_value_t = 6)]
    max_len: usize,
}

enum CliError {
    Usage(String),
    Domain(pc::Error),
}

impl From<pc::Error> for CliError {
    fn from(e: pc::Error) -> Self {
        CliError::Domain(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Outcome of a subcommand: the bytes for stdout plus the exit status.
struct Outcome {
    stdout: String,
    status: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, status: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.status)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Cf(args) => run_cf(args, cli.format),
        Command::Bypass(args) => run_bypass(args, cli.format),
        Command::Slopes(args) => run_slopes(args, cli.format),
        Command::Dual(args) => run_dual(args, cli.format),
        Command::Embeddable(args) => run_embeddable(args, cli.format),
        Command::Stein(args) => run_stein(args, cli.format),
        Command::Census(args) => run_census(args, cli.format),
        Command::Verify(args) => run_verify(args, cli.format),
    }
}

// ---- argument parsing helpers ----

fn parse_list(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("invalid integer {t:?} in list {s:?}")))
        })
        .collect()
}

fn parse_slope(s: &str) -> Result<Slope, CliError> {
    Slope::from_str(s).map_err(|_| usage(format!("invalid slope {s:?} (expected p/q, n, or inf)")))
}

fn parse_sign(s: &str) -> Result<Sign, CliError> {
    Sign::from_str(s).map_err(|_| usage(format!("invalid sign {s:?} (expected + or -)")))
}

fn parse_range(s: &str) -> Result<(i64, i64), CliError> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| usage(format!("invalid range {s:?} (expected LO..HI, inclusive)")))?;
    let lo = lo
        .parse::<i64>()
        .map_err(|_| usage(format!("invalid range bound {lo:?}")))?;
    let hi = hi
        .parse::<i64>()
        .map_err(|_| usage(format!("invalid range bound {hi:?}")))?;
    if lo > hi {
        return Err(usage(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

fn parse_fraction(s: &str) -> Result<BigRational, CliError> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p = BigInt::from_str(p.trim()).map_err(|_| usage(format!("invalid numerator {p:?}")))?;
    let q = BigInt::from_str(q.trim()).map_err(|_| usage(format!("invalid denominator {q:?}")))?;
    if q.is_negative() || q.is_zero() {
        return Err(CliError::Domain(pc::Error::usage(
            "denominator must be positive",
        )));
    }
    if !p.gcd(&q).is_one() {
        return Err(CliError::Domain(pc::Error::usage(format!(
            "fraction {s} is not reduced"
        ))));
    }
    Ok(BigRational::new(p, q))
}

fn env_bound() -> Option<usize> {
    std::env::var("PLUMBING_CENSUS_BOUND")
        .ok()
        .and_then(|v| v.parse().ok())
}

fn rewrite_bound() -> usize {
    env_bound().unwrap_or(pc::cycles::DEFAULT_REWRITE_STEPS)
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

// ---- cf ----

#[derive(Serialize)]
struct CfReport {
    op: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    convergents: Option<ConvergentsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemmas: Option<pc::AppendixReport>,
}

#[derive(Serialize)]
struct ConvergentsReport {
    p: String,
    q: String,
    p_prev: String,
    q_prev: String,
}

fn run_cf(args: &CfArgs, format: Format) -> Result<Outcome, CliError> {
    let chosen = [&args.eval, &args.expand, &args.convergents, &args.lemmas]
        .iter()
        .filter(|o| o.is_some())
        .count();
    if chosen != 1 {
        return Err(usage(
            "cf needs exactly one of --eval, --expand, --convergents, --lemmas",
        ));
    }

    let (report, text, tsv) = if let Some(list) = &args.eval {
        let coeffs = parse_list(list)?;
        let value = pc::eval_neg_cf(&coeffs)?;
        let text = format!("{value}\n");
        let tsv = format!("value\n{value}\n");
        (
            CfReport {
                op: "eval",
                coeffs: Some(coeffs),
                value: Some(value.to_string()),
                convergents: None,
                lemmas: None,
            },
            text,
            tsv,
        )
    } else if let Some(frac) = &args.expand {
        let x = parse_fraction(frac)?;
        let coeffs = pc::expand_neg_cf(&x)?;
        let rendered = join_i64(&coeffs);
        (
            CfReport {
                op: "expand",
                coeffs: Some(coeffs),
                value: Some(x.to_string()),
                convergents: None,
                lemmas: None,
            },
            format!("{rendered}\n"),
            format!("coeffs\n{rendered}\n"),
        )
    } else if let Some(list) = &args.convergents {
        let coeffs = parse_list(list)?;
        let c = pc::convergents(&coeffs)?;
        let text = format!("p/q = {}/{}  p'/q' = {}/{}\n", c.p, c.q, c.p_prev, c.q_prev);
        let tsv = format!(
            "p\tq\tp_prev\tq_prev\n{}\t{}\t{}\t{}\n",
            c.p, c.q, c.p_prev, c.q_prev
        );
        (
            CfReport {
                op: "convergents",
                coeffs: Some(coeffs),
                value: None,
                convergents: Some(ConvergentsReport {
                    p: c.p.to_string(),
                    q: c.q.to_string(),
                    p_prev: c.p_prev.to_string(),
                    q_prev: c.q_prev.to_string(),
                }),
                lemmas: None,
            },
            text,
            tsv,
        )
    } else {
        let coeffs = parse_list(args.lemmas.as_ref().unwrap())?;
        let report = pc::verify_appendix(&coeffs)?;
        let mut text = String::new();
        let mut tsv = String::from("lemma\tstatus\tlhs_rhs\n");
        let named: [(&str, &pc::LemmaCheck); 4] = [
            ("growth", &report.growth),
            ("gcd-symmetry", &report.gcd_symmetry),
            ("decrement-last", &report.decrement_last),
            ("reversed-decrement", &report.reversed_decrement),
        ];
        for (name, check) in named {
            match check {
                pc::LemmaCheck::Holds { lhs, rhs } => {
                    let _ = writeln!(text, "{name}: holds ({lhs} | {rhs})");
                    let _ = writeln!(tsv, "{name}\tholds\t{lhs} | {rhs}");
                }
                pc::LemmaCheck::NotApplicable { reason } => {
                    let _ = writeln!(text, "{name}: not applicable ({reason})");
                    let _ = writeln!(tsv, "{name}\tnot_applicable\t{reason}");
                }
                pc::LemmaCheck::Fails { lhs, rhs } => {
                    let _ = writeln!(text, "{name}: FAILS ({lhs} | {rhs})");
                    let _ = writeln!(tsv, "{name}\tfails\t{lhs} | {rhs}");
                }
            }
        }
        (
            CfReport {
                op: "lemmas",
                coeffs: Some(coeffs),
                value: None,
                convergents: None,
                lemmas: Some(report),
            },
            text,
            tsv,
        )
    };

    let stdout = match format {
        Format::Json => render(&report),
        Format::Text => text,
        Format::Tsv => tsv,
    };
    Ok(Outcome::ok(stdout))
}

// ---- bypass ----

#[derive(Serialize)]
struct BypassReport {
    s: String,
    r: String,
    side: String,
    pairs_before: u32,
    slope: String,
    pairs: u32,
}

fn run_bypass(args: &BypassArgs, format: Format) -> Result<Outcome, CliError> {
    let s = parse_slope(&args.s)?;
    let r = parse_slope(&args.r)?;
    let side = pc::Side::from_str(&args.side).map_err(|_| {
        usage(format!(
            "invalid side {:?} (expected front or back)",
            args.side
        ))
    })?;
    let pairs = args.pairs.unwrap_or(1);
    let d = pc::DividingSet::new(s, pairs)?;
    let out = pc::bypass_on_dividing_set(&d, r, side)?;
    let report = BypassReport {
        s: s.to_string(),
        r: r.to_string(),
        side: args.side.clone(),
        pairs_before: pairs,
        slope: out.slope.to_string(),
        pairs: out.pairs,
    };
    let stdout = match format {
        Format::Json => render(&report),
        Format::Text => {
            if args.pairs.is_some() {
                format!("slope={} pairs={}\n", out.slope, out.pairs)
            } else {
                format!("{}\n", out.slope)
            }
        }
        Format::Tsv => format!("slope\tpairs\n{}\t{}\n", out.slope, out.pairs),
    };
    Ok(Outcome::ok(stdout))
}

// ---- slopes ----

#[derive(Serialize)]
struct SlopesReport {
    a: Vec<i64>,
    z: Vec<i64>,
    t0: String,
    m: i64,
    b_matrix: [[i64; 2]; 2],
    a_matrix: [[i64; 2]; 2],
    g_matrix: [[i64; 2]; 2],
    dividing_slopes: [String; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    normal_form: Option<[String; 3]>,
}

fn run_slopes(args: &SlopesArgs, format: Format) -> Result<Outcome, CliError> {
    let a = parse_list(&args.a)?;
    let z = parse_list(&args.z)?;
    let t0 = parse_slope(&args.t0)?;
    let (b, a_mat, g) = pc::build_matrices(&a, &z)?;
    let (s0, s1, s2) = pc::slope_triple(&a, &z, t0, args.m)?;
    let normal_form = pc::normal_form_targets(&a)
        .ok()
        .map(|(n0, n1, n2)| [n0.to_string(), n1.to_string(), n2.to_string()]);
    let report = SlopesReport {
        a,
        z,
        t0: t0.to_string(),
        m: args.m,
        b_matrix: b.entries(),
        a_matrix: a_mat.entries(),
        g_matrix: g.entries(),
        dividing_slopes: [s0.to_string(), s1.to_string(), s2.to_string()],
        normal_form,
    };
    let stdout = match format {
        Format::Json => render(&report),
        Format::Text => {
            let mut t = String::new();
            let _ = writeln!(t, "B = {:?}", report.b_matrix);
            let _ = writeln!(t, "A = {:?}", report.a_matrix);
            let _ = writeln!(t, "g = {:?}", report.g_matrix);
            let _ = writeln!(
                t,
                "dividing slopes: T0={} T1={} T2={}",
                report.dividing_slopes[0], report.dividing_slopes[1], report.dividing_slopes[2]
            );
            if let Some(n) = &report.normal_form {
                let _ = writeln!(
                    t,
                    "normal form targets: T0={} T1={} T2={}",
                    n[0], n[1], n[2]
                );
            }
            t
        }
        Format::Tsv => format!(
            "t0\tt1\tt2\n{}\t{}\t{}\n",
            report.dividing_slopes[0], report.dividing_slopes[1], report.dividing_slopes[2]
        ),
    };
    Ok(Outcome::ok(stdout))
}

// ---- dual ----

#[derive(Serialize)]
struct DualReport {
    chain: String,
    dual: String,
    framings: Vec<i64>,
    sign: Sign,
    abs_trace: i64,
}

fn run_dual(args: &DualArgs, format: Format) -> Result<Outcome, CliError> {
    let a = parse_list(&args.a)?;
    let sign = parse_sign(&args.sign)?;
    let chain = CyclicChain::new(a, sign)?;
    let dual = pc::dual_cycle_with_bound(&chain, rewrite_bound())?;
    let (_, class) = pc::monodromy(&dual)?;
    let report = DualReport {
        chain: chain.to_string(),
        dual: dual.to_string(),
        framings: dual.framings().to_vec(),
        sign: dual.sign(),
        abs_trace: class.trace.abs(),
    };
    let stdout = match format {
        Format::Json => render(&report),
        Format::Text => format!("{}\n", report.dual),
        Format::Tsv => format!("dual\tabs_trace\n{}\t{}\n", report.dual, report.abs_trace),
    };
    Ok(Outcome::ok(stdout))
}

// ---- embeddable ----

#[derive(Serialize)]
struct EmbeddableReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<Vec<i64>>,
    d: Vec<i64>,
    max_k: usize,
    #[serde(flatten)]
    verdict: pc::Embeddability,
}

fn run_embeddable(args: &EmbeddableArgs, format: Format) -> Result<Outcome, CliError> {
    let (a, d) = match (&args.a, &args.d) {
        (Some(a), None) => {
            let a = parse_list(a)?;
            let sign = parse_sign(&args.sign)?;
            let chain = CyclicChain::new(a.clone(), sign)?;
            let dual = pc::dual_cycle_with_bound(&chain, rewrite_bound())?;
            (Some(a), dual.framings().to_vec())
        }
        (None, Some(d)) => (None, parse_list(d)?),
        _ => return Err(usage("embeddable needs exactly one of --a or --d")),
    };
    let verdict = pc::find_dominating_blowup(&d, args.max_k)?;
    let embeddable = verdict.is_embeddable();
    let report = EmbeddableReport {
        a,
        d,
        max_k: args.max_k,
        verdict,
    };
    let stdout = match format {
        Format::Json => render(&report),
        Format::Text => match &report.verdict {
            pc::Embeddability::Embeddable { witness } => {
                let mut t = format!(
                    "embeddable: blowup {} via moves {:?}, offset {}, reflected {}\n",
                    witness.blowup, witness.moves, witness.offset, witness.reflected
                );
                let _ = writeln!(t, "dual framings: {:?}", report.d);
                t
            }
            pc::Embeddability::NotEmbeddable { reason } => {
                format!("not embeddable within bound: {reason}\n")
            }
        },
        Format::Tsv => match &report.verdict {
            pc::Embeddability::Embeddable { witness } => format!(
                "verdict\tblowup\toffset\treflected\nembeddable\t{}\t{}\t{}\n",
                witness.blowup, witness.offset, witness.reflected
            ),
            pc::Embeddability::NotEmbeddable { .. } => {
                "verdict\tblowup\toffset\treflected\nnot_embeddable\t\t\t\n".to_string()
            }
        },
    };
    Ok(Outcome {
        stdout,
        status: if embeddable { 0 } else { 1 },
    })
}

// ---- stein ----

#[derive(Serialize)]
struct SteinReport {
    spec: PlumbingSpec,
    torsion: u32,
    count: usize,
    structures: Vec<pc::StructureDescriptor>,
}

fn run_stein(args: &SteinArgs, format: Format) -> Result<Outcome, CliError> {
    let a = parse_list(&args.a)?;
    let z = match &args.z {
        Some(z) => parse_list(z)?,
        None => Vec::new(),
    };
    let sign = parse_sign(&args.sign)?;
    let spec = PlumbingSpec::new(sign, a, z)?;
    let structures = pc::enumerate_tight(&spec, args.torsion)?;
    let report = SteinReport {
        spec: spec.clone(),
        torsion: args.torsion,
        count: structures.len(),
        structures,
    };
    let stdout = match format {
        Format::Json => render(&report),
        Format::Text => {
            let mut t = format!(
                "{} structures at torsion level {}\n",
                report.count, args.torsion
            );
            for d in &report.structures {
                let _ = writeln!(
                    t,
                    "rotation=({}) twisting={} fillability={}",
                    join_i64(&d.rotation),
                    d.twisting,
                    d.fillability
                );
            }
            t
        }
        Format::Tsv => {
            let mut t = String::from("rotation\ttorsion\ttwisting\tfillability\n");
            for d in &report.structures {
                let _ = writeln!(
                    t,
                    "{}\t{}\t{}\t{}",
                    join_i64(&d.rotation),
                    d.torsion,
                    d.twisting,
                    d.fillability
                );
            }
            t
        }
    };
    Ok(Outcome::ok(stdout))
}

fn join_i64(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

// ---- census ----

use plumbing_census_cli::{GridReport, GridRow, GridSummary};

fn run_census(args: &CensusArgs, format: Format) -> Result<Outcome, CliError> {
    if args.grid {
        run_census_grid(args, format)
    } else {
        run_census_single(args, format)
    }
}

fn census_opts(args: &CensusArgs) -> CensusOptions {
    CensusOptions {
        resolve_embeddable: args.resolve_embeddable,
        max_k: args.max_k,
    }
}

fn run_census_single(args: &CensusArgs, format: Format) -> Result<Outcome, CliError> {
    let a = parse_list(args.a.as_deref().ok_or_else(|| usage("census needs --a"))?)?;
    let z = match &args.z {
        Some(z) => parse_list(z)?,
        None => Vec::new(),
    };
    let sign = parse_sign(args.sign.as_deref().unwrap_or("+"))?;
    let spec = PlumbingSpec::new(sign, a, z)?;
    let report = pc::census(&spec, &census_opts(args))?;
    let stdout = match format {
        Format::Json => render(&report),
        Format::Text => {
            let mut t = format!("spec: {}\n", report.spec);
            let _ = writeln!(
                t,
                "counts: min_twisting={} per_torsion={} no_giroux={}",
                report.counts.min_twisting, report.counts.per_torsion, report.counts.no_giroux
            );
            for d in &report.structures {
                let _ = writeln!(
                    t,
                    "rotation=({}) torsion={} twisting={} fillability={}",
                    join_i64(&d.rotation),
                    d.torsion,
                    d.twisting,
                    d.fillability
                );
            }
            if let Some(e) = &report.embeddable {
                match e {
                    pc::Embeddability::Embeddable { witness } => {
                        let _ = writeln!(t, "embeddable: yes (witness {})", witness.blowup);
                    }
                    pc::Embeddability::NotEmbeddable { reason } => {
                        let _ = writeln!(t, "embeddable: no ({reason})");
                    }
                }
            }
            t
        }
        Format::Tsv => {
            let mut t = String::from(
                "sign\ta\tz\tmin_twisting\tper_torsion\tno_giroux\trotation\ttorsion\ttwisting\tfillability\n",
            );
            for d in &report.structures {
                let _ = writeln!(
                    t,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    report.spec.sign(),
                    join_i64(report.spec.a()),
                    join_i64(report.spec.z()),
                    report.counts.min_twisting,
                    report.counts.per_torsion,
                    report.counts.no_giroux,
                    join_i64(&d.rotation),
                    d.torsion,
                    d.twisting,
                    d.fillability
                );
            }
            t
        }
    };
    Ok(Outcome::ok(stdout))
}

/// All tuples with entries in `[entries.0, entries.1]` and lengths in
/// `[len.0, len.1]`, lexicographic within each length. Length 0 yields the
/// empty tuple.
fn tuples_in_range(entries: (i64, i64), len: (i64, i64)) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for n in len.0..=len.1 {
        if n <= 0 {
            out.push(Vec::new());
            continue;
        }
        let n = n as usize;
        let mut current = vec![entries.0; n];
        'tuples: loop {
            out.push(current.clone());
            let mut i = n;
            while i > 0 {
                i -= 1;
                if current[i] < entries.1 {
                    current[i] += 1;
                    for c in current.iter_mut().skip(i + 1) {
                        *c = entries.0;
                    }
                    continue 'tuples;
                }
            }
            break;
        }
    }
    out
}

fn run_census_grid(args: &CensusArgs, format: Format) -> Result<Outcome, CliError> {
    let a_entries = parse_range(
        args.a_entries
            .as_deref()
            .ok_or_else(|| usage("census --grid needs --a-entries"))?,
    )?;
    let a_len = parse_range(
        args.a_len
            .as_deref()
            .ok_or_else(|| usage("census --grid needs --a-len"))?,
    )?;
    let (z_entries, z_len) = match (&args.z_entries, &args.z_len) {
        (Some(e), Some(l)) => (parse_range(e)?, parse_range(l)?),
        (None, None) => ((2, 2), (0, 0)),
        _ => {
            return Err(usage(
                "census --grid needs both --z-entries and --z-len or neither",
            ))
        }
    };
    if a_len.0 < 1 || z_len.0 < 0 {
        return Err(usage("lengths must be non-negative"));
    }
    let signs: Vec<Sign> = match &args.signs {
        Some(s) => {
            let mut v: Vec<Sign> = s
                .split(',')
                .map(|t| parse_sign(t.trim()))
                .collect::<Result<_, _>>()?;
            v.sort();
            v.dedup();
            v
        }
        None => vec![Sign::Plus, Sign::Minus],
    };
    if signs.is_empty() {
        return Err(usage("empty sign set"));
    }

    let cap = env_bound().unwrap_or(DEFAULT_GRID_CAP);
    let count_tuples = |entries: (i64, i64), len: (i64, i64)| -> u128 {
        let span = (entries.1 - entries.0 + 1) as u128;
        (len.0..=len.1).map(|n| span.saturating_pow(n as u32)).sum()
    };
    let raw = count_tuples(a_entries, a_len)
        .saturating_mul(count_tuples(z_entries, z_len))
        .saturating_mul(signs.len() as u128);
    if raw == 0 {
        return Err(usage("empty grid"));
    }
    if raw > cap as u128 {
        return Err(usage(format!("grid size {raw} exceeds cap {cap}")));
    }

    let a_tuples = tuples_in_range(a_entries, a_len);
    let z_tuples = tuples_in_range(z_entries, z_len);

    let mut specs = Vec::new();
    for sign in &signs {
        for a in &a_tuples {
            for z in &z_tuples {
                if let Ok(spec) = PlumbingSpec::new(*sign, a.clone(), z.clone()) {
                    specs.push(spec);
                }
            }
        }
    }
    specs.sort();
    specs.dedup();

    let opts = census_opts(args);
    let mut rows = Vec::with_capacity(specs.len());
    let mut summary = GridSummary {
        rows: 0,
        stein: 0,
        weak: 0,
        stein_if_embeddable: 0,
    };
    for spec in &specs {
        let report = pc::census(spec, &opts)?;
        summary.rows += 1;
        summary.stein += report.counts.min_twisting;
        match spec.sign() {
            Sign::Plus => summary.weak += report.counts.per_torsion,
            Sign::Minus => summary.stein_if_embeddable += report.counts.per_torsion,
        }
        rows.push(GridRow {
            spec: report.spec,
            counts: report.counts,
            embeddable: report.embeddable,
        });
    }
    let report = GridReport { rows, summary };

    let stdout = match format {
        Format::Json => render(&report),
        Format::Text => {
            let mut t = String::new();
            for row in &report.rows {
                let _ = writeln!(
                    t,
                    "{}  min_twisting={} per_torsion={} no_giroux={}",
                    row.spec, row.counts.min_twisting, row.counts.per_torsion, row.counts.no_giroux
                );
            }
            let _ = writeln!(
                t,
                "summary: rows={} stein={} weak={} stein-if-embeddable={}",
                report.summary.rows,
                report.summary.stein,
                report.summary.weak,
                report.summary.stein_if_embeddable
            );
            t
        }
        Format::Tsv => {
            let mut t =
                String::from("sign\ta\tz\tmin_twisting\tper_torsion\tno_giroux\tembeddable\n");
            for row in &report.rows {
                let verdict = match &row.embeddable {
                    Some(pc::Embeddability::Embeddable { .. }) => "embeddable",
                    Some(pc::Embeddability::NotEmbeddable { .. }) => "not_embeddable",
                    None => "-",
                };
                let _ = writeln!(
                    t,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    row.spec.sign(),
                    join_i64(row.spec.a()),
                    join_i64(row.spec.z()),
                    row.counts.min_twisting,
                    row.counts.per_torsion,
                    row.counts.no_giroux,
                    verdict
                );
            }
            let _ = writeln!(
                t,
                "# summary rows={} stein={} weak={} stein_if_embeddable={}",
                report.summary.rows,
                report.summary.stein,
                report.summary.weak,
                report.summary.stein_if_embeddable
            );
            t
        }
    };
    Ok(Outcome::ok(stdout))
}

// ---- verify ----

#[derive(Serialize)]
struct VerifyReport {
    max_entry: i64,
    max_len: usize,
    tuples: usize,
    all_hold: bool,
    failures: Vec<Vec<i64>>,
}

fn run_verify(args: &VerifyArgs, format: Format) -> Result<Outcome, CliError> {
    if !args.appendix {
        return Err(usage("verify needs --appendix"));
    }
    if args.max_entry < 2 || args.max_len < 1 {
        return Err(usage("sweep needs --max-entry >= 2 and --max-len >= 1"));
    }
    let mut tuples = 0;
    let mut failures = Vec::new();
    for tuple in tuples_in_range((2, args.max_entry), (1, args.max_len as i64)) {
        tuples += 1;
        let report = pc::verify_appendix(&tuple)?;
        if !report.all_hold() {
            failures.push(tuple);
        }
    }
    let all_hold = failures.is_empty();
    let report = VerifyReport {
        max_entry: args.max_entry,
        max_len: args.max_len,
        tuples,
        all_hold,
        failures,
    };
    let stdout = match format {
        Format::Json => render(&report),
        Format::Text => {
            if report.all_hold {
                format!("all lemmas hold ({} tuples)\n", report.tuples)
            } else {
                format!("lemma failures on {} tuples\n", report.failures.len())
            }
        }
        Format::Tsv => format!("tuples\tall_hold\n{}\t{}\n", report.tuples, report.all_hold),
    };
    Ok(Outcome {
        stdout,
        status: if all_hold { 0 } else { 1 },
    })
}
