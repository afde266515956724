//! `srtool`: command-line front end for the srmat library.
//!
//! Subcommands: `check`, `classify`, `powers`, `witness`, `expsum`, `gen`.
//! Every run prints one JSON [`Report`] to stdout. Exit codes: `0`
//! success/true, `1` certified-false, `2` undetermined or out of
//! construction scope, `3` usage or parse error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use srmat::classify::{self, EntryDomain, Mode, Query, Scope};
use srmat::expsum::ExpSum;
use srmat::genmat::{self, GenSpec};
use srmat::matcore::SrOutcome;
use srmat::rat::{format_rational, parse_rational};
use srmat::report::{
    expsum_terms, BracketsPayload, CheckPayload, ExpsumPayload, GenPayload, GridPoint, Payload,
    PowersPayload, Report, WitnessSummary,
};
use srmat::witnesses::{
    self, FamilyParams, MatrixData, WitnessError, WitnessFamilyId,
};
use srmat::{CertCtx, Matrix, SignPattern, Q};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exact arithmetic for sign-regular matrices: detection, entrywise
/// preserver classification, and constructive counterexamples.
#[derive(Parser)]
#[command(name = "srtool", version = VERSION, max_term_width = 100)]
struct Cli {
    /// Initial mantissa precision (bits) for certified evaluation.
    #[arg(long, global = true, default_value_t = 128)]
    bits: u32,
    /// Precision cap; beyond it verdicts report undetermined.
    #[arg(long, global = true, default_value_t = 1024)]
    max_bits: u32,
    /// Width tolerance for bracketing searches.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a matrix: detect strict sign-regularity, or verify a pattern.
    Check {
        /// Matrix file (JSON {rows, cols, entries} or CSV of exact literals).
        matrix: PathBuf,
        /// "sr" or "ssr".
        mode: String,
        /// Sign pattern like "++-"; omit to detect (ssr) or scan all
        /// patterns (sr).
        eps: Option<String>,
    },
    /// Print the classified entrywise-preserver family for a query.
    Classify(QueryArgs),
    /// Print the admissible power exponents and probe a grid of exponents.
    Powers {
        #[command(flatten)]
        query: QueryArgs,
        /// Comma-separated rational exponents to probe (defaults to a
        /// 12-point grid spanning every table region).
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Construct a certified counterexample for an inadmissible exponent,
    /// or instantiate a named witness family.
    Witness(WitnessArgs),
    /// Expand det(A^{entrywise alpha}) as an exponential sum and analyze it.
    Expsum {
        /// Matrix file (square, positive entries, side <= 6).
        matrix: PathBuf,
        /// Compute Taylor coefficients at alpha = 0 up to this order.
        #[arg(long)]
        taylor: Option<usize>,
        /// Bracket real roots on "lo,hi" (rationals).
        #[arg(long, allow_hyphen_values = true)]
        brackets: Option<String>,
    },
    /// Generate a random certified matrix.
    Gen {
        rows: usize,
        cols: usize,
        /// "tp" (totally positive), "ssr", or "sr".
        #[arg(long, default_value = "tp")]
        target: String,
        /// Sign pattern for ssr/sr targets, like "+-+".
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
}

#[derive(Args, Clone)]
struct WitnessArgs {
    /// Query rows (omit when using --family).
    rows: Option<usize>,
    /// Query cols.
    cols: Option<usize>,
    /// "sr" or "ssr".
    mode: Option<String>,
    /// Sign pattern like "++-".
    eps: Option<String>,
    /// Quantify over every sign pattern instead of a fixed one.
    #[arg(long)]
    all_signs: bool,
    /// "nonneg", "positive", "real", or "real-nonzero" (defaults by scope).
    #[arg(long)]
    entry_domain: Option<String>,
    /// Exponent to refute (rational, e.g. "1/2").
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Named family (see --list-families).
    #[arg(long)]
    family: Option<String>,
    /// Family parameter t.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Family parameter delta.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Family parameter eta.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    /// Shape override "MxN" for shape-parametric families.
    #[arg(long)]
    shape: Option<String>,
    /// List the known family identifiers and exit.
    #[arg(long)]
    list_families: bool,
}

#[derive(Args, Clone)]
struct QueryArgs {
    rows: usize,
    cols: usize,
    /// "sr" or "ssr".
    mode: String,
    /// Sign pattern like "++-" (fixed-pattern scope).
    eps: Option<String>,
    /// Quantify over every sign pattern instead of a fixed one.
    #[arg(long)]
    all_signs: bool,
    /// "nonneg", "positive", "real", or "real-nonzero" (defaults by scope).
    #[arg(long)]
    entry_domain: Option<String>,
}

/// Error → (message, exit code).
struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            message: msg.into(),
            code: 3,
        }
    }

    fn undetermined(msg: impl Into<String>) -> Failure {
        Failure {
            message: msg.into(),
            code: 2,
        }
    }
}

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Failure {
        let code = match &e {
            WitnessError::AdmissibleAlpha(_) => 1,
            WitnessError::BudgetExhausted(_)
            | WitnessError::UnsupportedQuery(_)
            | WitnessError::CertificationFailed(_) => 2,
            WitnessError::Mat(m) if matches!(m, srmat::matcore::MatError::UndeterminedSign(_)) => 2,
            _ => 3,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn main() -> ExitCode {
    // Route argument errors to exit 3 (usage); keep --help/--version at 0.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = CertCtx {
        bits: cli.bits,
        max_bits: cli.max_bits,
        tol: cli.tol,
    };
    match run(cli.command, &ctx) {
        Ok((report, code)) => {
            print!("{}", report.to_json_pretty());
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("srtool: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Cmd, ctx: &CertCtx) -> Result<(Report, u8), Failure> {
    match cmd {
        Cmd::Check { matrix, mode, eps } => cmd_check(&matrix, &mode, eps.as_deref(), ctx),
        Cmd::Classify(q) => cmd_classify(&q, ctx),
        Cmd::Powers { query, grid } => cmd_powers(&query, grid.as_deref(), ctx),
        Cmd::Witness(args) => cmd_witness(&args, ctx),
        Cmd::Expsum {
            matrix,
            taylor,
            brackets,
        } => cmd_expsum(&matrix, taylor, brackets.as_deref(), ctx),
        Cmd::Gen {
            rows,
            cols,
            target,
            eps,
            seed,
            trial,
        } => cmd_gen(rows, cols, &target, eps.as_deref(), seed, trial, ctx),
    }
}

// ---------------------------------------------------------------------------
// Shared parsing.
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

fn load_matrix(path: &PathBuf) -> Result<Matrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let trimmed = text.trim_start();
    let (rows, cols, entries) = if trimmed.starts_with('{') {
        let f: MatrixFile = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("{}: bad matrix JSON: {e}", path.display())))?;
        (f.rows, f.cols, f.entries)
    } else {
        let mut grid: Vec<Vec<String>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            grid.push(line.split(',').map(|c| c.trim().to_string()).collect());
        }
        if grid.is_empty() {
            return Err(Failure::usage(format!("{}: empty matrix", path.display())));
        }
        let cols = grid[0].len();
        if grid.iter().any(|r| r.len() != cols) {
            return Err(Failure::usage(format!(
                "{}: ragged CSV rows",
                path.display()
            )));
        }
        (grid.len(), cols, grid.into_iter().flatten().collect())
    };
    if entries.len() != rows * cols {
        return Err(Failure::usage(format!(
            "{}: {} entries for a {rows}x{cols} matrix",
            path.display(),
            entries.len()
        )));
    }
    let mut data = Vec::with_capacity(entries.len());
    for s in &entries {
        data.push(
            parse_rational(s)
                .map_err(|e| Failure::usage(format!("{}: entry {s:?}: {e}", path.display())))?,
        );
    }
    Matrix::from_rationals(rows, cols, data)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn parse_mode(s: &str) -> Result<Mode, Failure> {
    match s.to_ascii_lowercase().as_str() {
        "sr" => Ok(Mode::Sr),
        "ssr" => Ok(Mode::Ssr),
        other => Err(Failure::usage(format!(
            "mode must be \"sr\" or \"ssr\", got {other:?}"
        ))),
    }
}

fn parse_eps(s: &str) -> Result<SignPattern, Failure> {
    SignPattern::from_str(s).map_err(|e| Failure::usage(format!("bad sign pattern {s:?}: {e}")))
}

fn parse_alpha(s: &str) -> Result<Q, Failure> {
    parse_rational(s).map_err(|e| Failure::usage(format!("bad rational {s:?}: {e}")))
}

fn build_query(args: &QueryArgs) -> Result<Query, Failure> {
    let mode = parse_mode(&args.mode)?;
    let scope = match (&args.eps, args.all_signs) {
        (Some(_), true) => {
            return Err(Failure::usage("give either a pattern or --all-signs, not both"));
        }
        (Some(e), false) => Scope::FixedPattern {
            eps: parse_eps(e)?,
        },
        (None, true) => Scope::AllPatterns,
        (None, false) => {
            return Err(Failure::usage(
                "fixed-pattern queries need a pattern argument (or pass --all-signs)",
            ));
        }
    };
    let entry_domain = match &args.entry_domain {
        Some(s) => EntryDomain::from_str(s)
            .map_err(|e| Failure::usage(format!("bad entry domain {s:?}: {e}")))?,
        None => match (&scope, mode) {
            (Scope::FixedPattern { .. }, Mode::Sr) => EntryDomain::Nonneg,
            (Scope::FixedPattern { .. }, Mode::Ssr) => EntryDomain::Positive,
            (Scope::AllPatterns, Mode::Sr) => EntryDomain::Real,
            (Scope::AllPatterns, Mode::Ssr) => EntryDomain::RealNonzero,
        },
    };
    let q = Query {
        m: args.rows,
        n: args.cols,
        mode,
        scope,
        entry_domain,
    };
    classify::validate(&q).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(q)
}

fn query_inputs(args: &QueryArgs) -> serde_json::Value {
    serde_json::json!({
        "rows": args.rows,
        "cols": args.cols,
        "mode": args.mode.to_ascii_lowercase(),
        "eps": args.eps,
        "all_signs": args.all_signs,
        "entry_domain": args.entry_domain,
    })
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

fn cmd_check(
    path: &PathBuf,
    mode: &str,
    eps: Option<&str>,
    ctx: &CertCtx,
) -> Result<(Report, u8), Failure> {
    let a = load_matrix(path)?;
    let mode = parse_mode(mode)?;
    let inputs = serde_json::json!({
        "matrix": path.display().to_string(),
        "mode": match mode { Mode::Sr => "sr", Mode::Ssr => "ssr" },
        "eps": eps,
    });
    let (payload, code) = match (mode, eps) {
        (Mode::Ssr, None) => {
            let rep = a.detect_ssr(ctx);
            let code = if rep.is_ssr { 0 } else { 1 };
            (
                CheckPayload {
                    check: "ssr-detect".into(),
                    holds: Some(rep.is_ssr),
                    pattern: rep.pattern,
                    witness: rep.violating_minor,
                    compatible: None,
                },
                code,
            )
        }
        (Mode::Sr, None) => {
            let constraints = a
                .compatible_patterns(ctx)
                .map_err(|e| Failure::undetermined(e.to_string()))?;
            let any = constraints.is_sr_any();
            (
                CheckPayload {
                    check: "sr".into(),
                    holds: Some(any),
                    pattern: None,
                    witness: None,
                    compatible: Some(constraints),
                },
                u8::from(!any),
            )
        }
        (mode, Some(e)) => {
            let eps = parse_eps(e)?;
            let outcome = match mode {
                Mode::Sr => a.check_sr_with(&eps, ctx),
                Mode::Ssr => a.check_ssr_with(&eps, ctx),
            }
            .map_err(|err| Failure::usage(err.to_string()))?;
            let (holds, witness, code) = match outcome {
                SrOutcome::Holds => (Some(true), None, 0u8),
                SrOutcome::Fails(w) => (Some(false), Some(w), 1),
                SrOutcome::Undetermined(w) => (None, Some(w), 2),
            };
            (
                CheckPayload {
                    check: match mode {
                        Mode::Sr => "sr".into(),
                        Mode::Ssr => "ssr".into(),
                    },
                    holds,
                    pattern: Some(eps),
                    witness,
                    compatible: None,
                },
                code,
            )
        }
    };
    Ok((
        Report::new(VERSION, "check", inputs, ctx, Payload::Check(payload)),
        code,
    ))
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(args: &QueryArgs, ctx: &CertCtx) -> Result<(Report, u8), Failure> {
    let q = build_query(args)?;
    let family = classify::classify(&q).map_err(|e| Failure::usage(e.to_string()))?;
    Ok((
        Report::new(
            VERSION,
            "classify",
            query_inputs(args),
            ctx,
            Payload::Classify { family },
        ),
        0,
    ))
}

// ---------------------------------------------------------------------------
// powers
// ---------------------------------------------------------------------------

fn default_grid() -> Vec<Q> {
    ["-2", "-1", "0", "1/4", "1/2", "3/4", "1", "5/4", "3/2", "2", "3", "5"]
        .iter()
        .map(|s| parse_rational(s).expect("grid literal"))
        .collect()
}

fn cmd_powers(
    args: &QueryArgs,
    grid: Option<&str>,
    ctx: &CertCtx,
) -> Result<(Report, u8), Failure> {
    let q = build_query(args)?;
    let admissible = classify::admissible_exponents(&q).map_err(|e| Failure::usage(e.to_string()))?;
    let alphas: Vec<Q> = match grid {
        Some(s) => s
            .split(',')
            .map(|t| parse_alpha(t.trim()))
            .collect::<Result<_, _>>()?,
        None => default_grid(),
    };
    let mut points = Vec::with_capacity(alphas.len());
    for alpha in &alphas {
        let adm = admissible.contains(alpha);
        let (witness, note) = if adm {
            (None, Some("admissible: no violation exists".to_string()))
        } else {
            match witnesses::find_violation(alpha, &q, ctx) {
                Ok(rep) => (Some(WitnessSummary::from(&rep)), None),
                Err(WitnessError::UnsupportedQuery(msg)) => (None, Some(msg)),
                Err(e) => return Err(e.into()),
            }
        };
        points.push(GridPoint {
            alpha: format_rational(alpha),
            admissible: adm,
            witness,
            note,
        });
    }
    let mut inputs = query_inputs(args);
    inputs["grid"] = serde_json::json!(alphas.iter().map(format_rational).collect::<Vec<_>>());
    Ok((
        Report::new(
            VERSION,
            "powers",
            inputs,
            ctx,
            Payload::Powers(PowersPayload {
                query: q,
                admissible,
                grid: points,
            }),
        ),
        0,
    ))
}

// ---------------------------------------------------------------------------
// witness
// ---------------------------------------------------------------------------

fn parse_shape(s: &str) -> Result<(usize, usize), Failure> {
    let (m, n) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Failure::usage(format!("bad shape {s:?}; expected MxN")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| Failure::usage(format!("bad shape {s:?}: {e}")))
    };
    Ok((parse(m)?, parse(n)?))
}

fn cmd_witness(args: &WitnessArgs, ctx: &CertCtx) -> Result<(Report, u8), Failure> {
    if args.list_families {
        let mut msg = String::new();
        for f in WitnessFamilyId::all() {
            let _ = writeln!(msg, "{f}");
        }
        print!("{msg}");
        std::process::exit(0);
    }
    let params = FamilyParams {
        t: args.t.as_deref().map(parse_alpha).transpose()?,
        delta: args.delta.as_deref().map(parse_alpha).transpose()?,
        eta: args.eta.as_deref().map(parse_alpha).transpose()?,
        alpha: args.alpha.as_deref().map(parse_alpha).transpose()?,
        shape: args.shape.as_deref().map(parse_shape).transpose()?,
    };
    let query = match (args.rows, args.cols, &args.mode) {
        (Some(rows), Some(cols), Some(mode)) => Some(QueryArgs {
            rows,
            cols,
            mode: mode.clone(),
            eps: args.eps.clone(),
            all_signs: args.all_signs,
            entry_domain: args.entry_domain.clone(),
        }),
        (None, None, None) => None,
        _ => {
            return Err(Failure::usage(
                "a witness query needs ROWS COLS MODE together",
            ));
        }
    };
    let (rep, inputs) = match (&args.family, &query) {
        (Some(name), None) => {
            let id = WitnessFamilyId::from_str(name).map_err(|e| Failure::usage(e.to_string()))?;
            let rep = witnesses::canonical_report(id, &params, ctx)?;
            let inputs = serde_json::json!({
                "family": name,
                "alpha": args.alpha,
                "t": args.t,
                "delta": args.delta,
                "eta": args.eta,
                "shape": args.shape,
            });
            (rep, inputs)
        }
        (None, Some(qargs)) => {
            let q = build_query(qargs)?;
            let a = params
                .alpha
                .clone()
                .ok_or_else(|| Failure::usage("query-driven witnesses need --alpha"))?;
            let rep = witnesses::find_violation(&a, &q, ctx)?;
            let mut inputs = query_inputs(qargs);
            inputs["alpha"] = serde_json::json!(format_rational(&a));
            (rep, inputs)
        }
        _ => {
            return Err(Failure::usage(
                "give either --family NAME or a query (ROWS COLS MODE [EPS|--all-signs]) with --alpha",
            ));
        }
    };
    witnesses::verify_report(&rep, ctx)
        .map_err(|e| Failure::undetermined(format!("report failed reverification: {e}")))?;
    Ok((
        Report::new(VERSION, "witness", inputs, ctx, Payload::Witness { report: rep }),
        0,
    ))
}

// ---------------------------------------------------------------------------
// expsum
// ---------------------------------------------------------------------------

fn cmd_expsum(
    path: &PathBuf,
    taylor: Option<usize>,
    brackets: Option<&str>,
    ctx: &CertCtx,
) -> Result<(Report, u8), Failure> {
    let a = load_matrix(path)?;
    let sum = ExpSum::from_hadamard_det(&a).map_err(|e| Failure::usage(e.to_string()))?;
    let taylor_out = taylor.map(|k| sum.taylor_at_zero(k, ctx));
    let brackets_out = brackets
        .map(|s| -> Result<BracketsPayload, Failure> {
            let (lo, hi) = s
                .split_once(',')
                .ok_or_else(|| Failure::usage("expected --brackets LO,HI"))?;
            let lo = parse_alpha(lo.trim())?;
            let hi = parse_alpha(hi.trim())?;
            let found = sum
                .bracket_roots(&lo, &hi, ctx)
                .map_err(|e| Failure::undetermined(e.to_string()))?;
            Ok(BracketsPayload {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
                brackets: found,
            })
        })
        .transpose()?;
    let inputs = serde_json::json!({
        "matrix": path.display().to_string(),
        "taylor": taylor,
        "brackets": brackets,
    });
    Ok((
        Report::new(
            VERSION,
            "expsum",
            inputs,
            ctx,
            Payload::Expsum(ExpsumPayload {
                terms: expsum_terms(&sum),
                descartes_bound: sum.descartes_bound(),
                taylor: taylor_out,
                brackets: brackets_out,
            }),
        ),
        0,
    ))
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

fn cmd_gen(
    rows: usize,
    cols: usize,
    target: &str,
    eps: Option<&str>,
    seed: u64,
    trial: u64,
    ctx: &CertCtx,
) -> Result<(Report, u8), Failure> {
    let spec = GenSpec {
        seed,
        rejection_budget: 256,
        ctx: ctx.clone(),
    };
    let d = rows.min(cols);
    let (matrix, pattern) = match target.to_ascii_lowercase().as_str() {
        "tp" => {
            if eps.is_some() {
                return Err(Failure::usage("tp target takes no pattern"));
            }
            (
                genmat::random_tp(rows, cols, &spec, trial),
                Some(SignPattern::all_plus(d)),
            )
        }
        t @ ("ssr" | "sr") => {
            let e = match eps {
                Some(s) => parse_eps(s)?,
                None => SignPattern::all_plus(d),
            };
            if e.d() != d {
                return Err(Failure::usage(format!(
                    "pattern length {} does not match min(rows, cols) = {d}",
                    e.d()
                )));
            }
            let m = if t == "ssr" {
                genmat::random_ssr(rows, cols, &e, &spec, trial)
            } else {
                genmat::random_sr(rows, cols, &e, &spec, trial)
            }
            .map_err(|err| Failure::undetermined(err.to_string()))?;
            (m, Some(e))
        }
        other => {
            return Err(Failure::usage(format!(
                "target must be tp, ssr, or sr; got {other:?}"
            )));
        }
    };
    let inputs = serde_json::json!({
        "rows": rows,
        "cols": cols,
        "target": target.to_ascii_lowercase(),
        "eps": eps,
        "seed": seed,
        "trial": trial,
    });
    Ok((
        Report::new(
            VERSION,
            "gen",
            inputs,
            ctx,
            Payload::Gen(GenPayload {
                matrix: MatrixData::from_matrix(&matrix),
                target: target.to_ascii_lowercase(),
                pattern,
                seed,
                trial,
            }),
        ),
        0,
    ))
}
