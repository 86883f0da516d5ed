//! Batch command-line workbench over the `fricke` library: tree dumps,
//! excision covers with measure tables and figures, identity partial sums,
//! folding, dribbles, and Lagrange estimation.
//!
//! Exit codes: 0 success, 2 invalid input or domain error, 3 bookkeeping
//! invariant violation (overlapping excisions).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational};
use serde_json::json;

use fricke::cf::CfWord;
use fricke::dribble;
use fricke::error::Error;
use fricke::excision;
use fricke::fricke::{build_group, fricke_complete, FrickeTriple, GroupData};
use fricke::lagrange;
use fricke::report;
use fricke::scalar::Scalar;
use fricke::shadow;

use fricke::words;

const DEFAULT_PRECISION_ENV: &str = "FRICKE_PRECISION";

#[derive(Parser)]
#[command(name = "fricke", version, about = "Fricke group / Markoff tree / shadow excision workbench")]
struct Cli {
    /// Arithmetic mode for triple-based commands.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Float precision in bits (flag beats the FRICKE_PRECISION env var;
    /// default 256).
    #[arg(long, global = true)]
    precision: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Hard cap on the tree depth.
    #[arg(long, global = true, default_value_t = 20)]
    depth_cap: u32,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct TripleArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    /// Omitted: completed from (a, b) when a normalized completion exists.
    #[arg(long)]
    c: Option<String>,
    #[arg(long, default_value_t = 2)]
    depth: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the generator-triple tree.
    Tree(TripleArgs),
    /// Build the periodic excision cover and its measure tables.
    Excise {
        #[command(flatten)]
        triple: TripleArgs,
        /// What the CSV format emits.
        #[arg(long, value_enum, default_value_t = Dump::Summary)]
        dump: Dump,
    },
    /// Partial sums of the length identity over the tree.
    Mcshane(TripleArgs),
    /// Iterated folding of a rational with the successor-word machinery.
    Fold {
        #[arg(long)]
        rational: String,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 2)]
        iterations: u32,
    },
    /// Dribble endpoints about a rational.
    Dribble {
        #[arg(long)]
        rational: String,
        #[arg(long)]
        m: i64,
    },
    /// Convergent-based Lagrange value estimate.
    Lagrange {
        /// Comma-separated partial quotients; `VxN` repeats V, N times.
        #[arg(long, conflicts_with = "value")]
        cf: Option<String>,
        /// Decimal input, interpreted at the session precision.
        #[arg(long)]
        value: Option<String>,
        #[arg(long, default_value_t = 40)]
        window: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dump {
    Summary,
    Intervals,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let res = match &cli.output {
                Some(path) => std::fs::write(path, out.as_bytes()).map_err(|e| e.to_string()),
                None => std::io::stdout()
                    .write_all(out.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            match res {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ExcisionOverlap { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn precision(cli: &Cli) -> usize {
    cli.precision
        .or_else(|| {
            std::env::var(DEFAULT_PRECISION_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(fricke::DEFAULT_PRECISION)
}

/// Parses an integer, `p/q` fraction, or finite decimal. Exact mode keeps
/// the value rational; float mode rounds to the session precision.
fn parse_scalar(s: &str, mode: Mode, prec: usize) -> Result<Scalar, Error> {
    let exact = parse_rational(s)?;
    Ok(match mode {
        Mode::Exact => Scalar::Exact(exact),
        Mode::Float => Scalar::float_from_rational(&exact, prec),
    })
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let t = s.trim();
    let bad = |_| Error::InvalidInput(format!("unparseable rational {t:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(bad)?;
        let d: BigInt = d.trim().parse().map_err(bad)?;
        if d == BigInt::from(0) {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::from(0)
        } else {
            int.trim().parse().map_err(bad)?
        };
        let digits = frac.trim();
        let fnum: BigInt = if digits.is_empty() {
            BigInt::from(0)
        } else {
            digits.parse().map_err(bad)?
        };
        let den = BigInt::from(10).pow(digits.len() as u32);
        return Ok(BigRational::from_integer(int)
            + BigRational::new(fnum * sign, den));
    }
    let n: BigInt = t.parse().map_err(bad)?;
    Ok(BigRational::from_integer(n))
}

fn build_triple(args: &TripleArgs, cli: &Cli) -> Result<GroupData, Error> {
    if args.depth > cli.depth_cap {
        return Err(Error::InvalidInput(format!(
            "depth {} exceeds the cap {}",
            args.depth, cli.depth_cap
        )));
    }
    let prec = precision(cli);
    let a = parse_scalar(&args.a, cli.mode, prec)?;
    let b = parse_scalar(&args.b, cli.mode, prec)?;
    let c = match &args.c {
        Some(c) => parse_scalar(c, cli.mode, prec)?,
        None => fricke_complete(&a, &b)?,
    };
    build_group(FrickeTriple::new(a, b, c)?)
}

fn identity_tolerance(group: &GroupData) -> Scalar {
    let a = &group.triple.a;
    // |L_d - a (1 - 2 S_d)| must stay below 1e-6 a.
    a.to_float(a.precision().unwrap_or(fricke::DEFAULT_PRECISION))
        .mul(&Scalar::from_ratio(1, 1_000_000))
}

fn run(cli: &Cli) -> Result<String, Error> {
    match &cli.cmd {
        Cmd::Tree(args) => {
            let group = build_triple(args, cli)?;
            let rep = report::tree_report(&group, args.depth)?;
            match cli.format {
                OutFormat::Json => to_json(&rep),
                OutFormat::Csv => {
                    let mut out = String::from("path,x,y,z,trace,length,peak_height\n");
                    for n in &rep.nodes {
                        out.push_str(&format!(
                            "{},{},{},{},{},{},{}\n",
                            n.path,
                            n.x.to_wire(),
                            n.y.to_wire(),
                            n.z.to_wire(),
                            n.trace.to_wire(),
                            n.length.to_wire(),
                            n.peak_height.to_wire()
                        ));
                    }
                    Ok(out)
                }
                OutFormat::Svg => Err(Error::InvalidInput(
                    "tree has no svg form; use excise".into(),
                )),
            }
        }
        Cmd::Excise { triple, dump } => {
            let group = build_triple(triple, cli)?;
            let cover = excision::build_excision(&group, triple.depth)?;
            match cli.format {
                OutFormat::Svg => Ok(report::cover_svg(&cover)),
                OutFormat::Csv => match dump {
                    Dump::Intervals => Ok(report::intervals_csv(&cover)),
                    Dump::Summary => {
                        let tol = identity_tolerance(&group);
                        let rows = excision::depth_table(&group, triple.depth, &tol)?;
                        let eps = excision::eps_table(&cover, &[4, 8, 12, 16, 20])?;
                        Ok(format!(
                            "{}\n{}",
                            report::depth_table_csv(&rows),
                            report::eps_csv(&eps)
                        ))
                    }
                },
                OutFormat::Json => {
                    let tol = identity_tolerance(&group);
                    let rows = excision::depth_table(&group, triple.depth, &tol)?;
                    let eps = excision::eps_table(&cover, &[4, 8, 12, 16, 20])?;
                    to_json(&json!({
                        "schema_version": report::SCHEMA_VERSION,
                        "a": group.triple.a,
                        "b": group.triple.b,
                        "c": group.triple.c,
                        "depth": triple.depth,
                        "excised_pieces": cover.excised.len(),
                        "table": rows,
                        "eps_table": eps,
                    }))
                }
            }
        }
        Cmd::Mcshane(args) => {
            let group = build_triple(args, cli)?;
            let table = excision::mcshane_table(&group, args.depth)?;
            let half = Scalar::from_ratio(1, 2);
            match cli.format {
                OutFormat::Csv => {
                    let mut out = String::from("depth,partial_sum,gap_to_half\n");
                    for (d, s) in &table {
                        out.push_str(&format!(
                            "{},{},{}\n",
                            d,
                            s.to_wire(),
                            half.sub(s).to_wire()
                        ));
                    }
                    Ok(out)
                }
                _ => to_json(&json!({
                    "schema_version": report::SCHEMA_VERSION,
                    "a": group.triple.a,
                    "b": group.triple.b,
                    "c": group.triple.c,
                    "rows": table.iter().map(|(d, s)| json!({
                        "depth": d,
                        "partial_sum": s,
                        "gap_to_half": half.sub(s),
                    })).collect::<Vec<_>>(),
                })),
            }
        }
        Cmd::Fold {
            rational,
            m,
            iterations,
        } => {
            let r = parse_rational(rational)?;
            let rec = words::word_machinery(&r, *m)?;
            let mut steps = Vec::new();
            for k in 1..=*iterations {
                let vw = words::v_words(&r, *m, k)?;
                steps.push(json!({
                    "k": k,
                    "value": Scalar::Exact(vw.iterate.clone()),
                    "word": vw.predicted,
                    "v_prime_len": vw.v_prime.as_ref().map(|v| v.len()),
                }));
            }
            to_json(&json!({
                "schema_version": report::SCHEMA_VERSION,
                "rational": Scalar::Exact(r),
                "m": m,
                "case": rec.case,
                "u": rec.u,
                "w": rec.w,
                "steps": steps,
            }))
        }
        Cmd::Dribble { rational, m } => {
            let r = parse_rational(rational)?;
            let prec = precision(cli);
            let d = dribble::dribble_endpoints(&r, *m, prec)?;
            let case = if *m >= 2 {
                words::word_machinery(&r, *m).ok()
            } else {
                None
            };
            let shadows: Vec<shadow::Shadow> = (0..=4u32)
                .map(|k| dribble::descendant_shadow(&r, *m, k, dribble::Direction::Right))
                .collect::<Result<_, _>>()?;
            to_json(&json!({
                "schema_version": report::SCHEMA_VERSION,
                "p": d.p.to_string(),
                "q": d.q.to_string(),
                "m": m,
                "alpha_decimal": d.right_endpoint,
                "beta_decimal": d.left_endpoint,
                "k_terms": d.k_terms,
                "tail_bound_exponent": d.tail_bound_exponent,
                "case": case.as_ref().map(|c| c.case),
                "words": case.as_ref().map(|c| json!({"u": c.u, "w": c.w})),
                "right_shadows": shadows,
            }))
        }
        Cmd::Lagrange { cf, value, window } => {
            let est = match (cf, value) {
                (Some(list), None) => {
                    let entries = parse_cf_list(list)?;
                    if entries.is_empty() {
                        return Err(Error::InvalidInput("empty cf list".into()));
                    }
                    let word = CfWord::new(entries[0], entries[1..].to_vec());
                    lagrange::estimate_from_word(&word, *window as usize)?
                }
                (None, Some(v)) => {
                    let x = Scalar::float_from_decimal(v, precision(cli))?;
                    lagrange::estimate_from_scalar(&x, *window as usize)?
                }
                _ => {
                    return Err(Error::InvalidInput(
                        "lagrange needs exactly one of --cf or --value".into(),
                    ))
                }
            };
            to_json(&json!({
                "schema_version": report::SCHEMA_VERSION,
                "window": window,
                "estimate": est,
                "estimate_decimal": est.to_f64(),
            }))
        }
    }
}

/// `1,2,3` with `VxN` repetition, e.g. `1x40` or `2,1x39`.
fn parse_cf_list(s: &str) -> Result<Vec<i64>, Error> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        if let Some((v, n)) = tok.split_once(['x', '*']) {
            let v: i64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad quotient {tok:?}")))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad repeat count {tok:?}")))?;
            out.extend(std::iter::repeat(v).take(n));
        } else {
            out.push(
                tok.parse()
                    .map_err(|_| Error::InvalidInput(format!("bad quotient {tok:?}")))?,
            );
        }
    }
    Ok(out)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
}
