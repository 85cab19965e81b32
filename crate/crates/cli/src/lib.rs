//! `sumrule`: line-delimited JSON on stdout, human summary on stderr.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use sumrule_core::algmodel::{build_g2k_hl, d_count, enum_d, enum_d_filter, verify_suite};
use sumrule_core::lab::{self, ReportFormat, StudyConfig, StudyLimits, Verdict};
use sumrule_core::opuc::{bs_weight_quadrature, log_term, VerblunskySeq};
use sumrule_core::trig::{Angle, CriticalPoint, CriticalPoints, ExactTrigPoly, NumericTrigPoly};

pub const WORKERS_ENV: &str = "SUMRULE_WORKERS";
pub const SZEGO_TOLERANCE: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "sumrule", version, about = "Verification suites and experiments for higher-order OPUC sum rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the symbolic verification suite.
    Verify {
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
    },
    /// Convergence study from a JSON config.
    Gem {
        #[arg(long)]
        config: PathBuf,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Exit 1 unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        #[arg(long, default_value_t = lab::DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Print the normal form of G'_{2k} for a single critical point of multiplicity d.
    DumpG2k {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: u32,
        /// Critical angle as a multiple of pi (`p/q`); generic symbol when omitted.
        #[arg(long)]
        theta: Option<String>,
    },
    /// Compare the Bernstein-Szego quadrature with the log sum (H = 1).
    SzegoCheck {
        /// JSON array of `[re, im]` pairs, or a file holding one.
        #[arg(long)]
        alphas: String,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// List D_{2k,l}.
    EnumD {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Expect {
    Bounded,
    Diverging,
    Inconclusive,
}

impl From<Expect> for Verdict {
    fn from(e: Expect) -> Self {
        match e {
            Expect::Bounded => Verdict::Bounded,
            Expect::Diverging => Verdict::Diverging,
            Expect::Inconclusive => Verdict::Inconclusive,
        }
    }
}

enum Failure {
    Check(String),
    Input(String),
}

type Outcome = Result<String, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn line<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), Failure> {
    let s = serde_json::to_string(v).map_err(input)?;
    writeln!(out, "{s}").map_err(input)
}

/// Parses `args` (program name first) and runs the command.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let pool = match workers() {
        Ok(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| dispatch(cli.command, &mut buf));
    let _ = out.write_all(&buf).and_then(|_| out.flush());
    match result {
        Ok(summary) => {
            let _ = writeln!(err, "{summary}");
            0
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "FAILED: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Worker count from the environment; 0 lets rayon decide.
fn workers() -> Result<usize, String> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{WORKERS_ENV}={v} is not a count")),
        Err(_) => Ok(0),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Verify { kmax, dmax } => verify(kmax, dmax, out),
        Command::Gem { config, out: path, format, expect, max_n } => gem(&config, path.as_deref(), format, expect, max_n, out),
        Command::DumpG2k { k, d, theta } => dump_g2k(k, d, theta.as_deref(), out),
        Command::SzegoCheck { alphas, grid } => szego_check(&alphas, grid, out),
        Command::EnumD { k, l } => enumerate(k, l, out),
    }
}

fn verify(kmax: usize, dmax: usize, out: &mut dyn Write) -> Outcome {
    if kmax == 0 || dmax == 0 {
        return Err(Failure::Input("--kmax and --dmax must be positive".into()));
    }
    if kmax > 5 || dmax > 4 {
        return Err(Failure::Input("suite is limited to kmax <= 5, dmax <= 4".into()));
    }
    let records = verify_suite(kmax, dmax);
    for r in &records {
        line(out, r)?;
    }
    let failed: Vec<&str> = records.iter().filter(|r| !r.passed()).map(|r| r.case.as_str()).collect();
    if failed.is_empty() {
        Ok(format!("verify: {} cases, all pass", records.len()))
    } else {
        Err(Failure::Check(format!("verify: {} of {} cases failed: {}", failed.len(), records.len(), failed.join(", "))))
    }
}

fn gem(config: &Path, path: Option<&Path>, format: Format, expect: Option<Expect>, max_n: usize, out: &mut dyn Write) -> Outcome {
    let text = std::fs::read_to_string(config).map_err(|e| Failure::Input(format!("{}: {e}", config.display())))?;
    let cfg: StudyConfig = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", config.display())))?;
    let limits = StudyLimits { max_n, base_dir: config.parent().map(Path::to_path_buf) };
    let report = lab::convergence_study(&cfg, &limits).map_err(input)?;
    for row in &report.rows {
        line(out, &json!({"N": row.n, "traceRoute": row.trace_route, "corollaryRoute": row.corollary_route,
            "logTermSum": row.log_term_sum, "diffNorm": row.diff_norm}))?;
    }
    line(out, &json!({"family": cfg.family.key(), "verdict": report.verdict, "slope": report.slope, "range": report.range}))?;
    if let Some(p) = path {
        let fmt = match format {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        };
        let bytes = lab::export_report(&report, fmt).map_err(input)?;
        std::fs::write(p, bytes).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    }
    let summary = format!("gem {}: {} (slope {:.3e}, range {:.3e})", cfg.family.key(), report.verdict, report.slope, report.range);
    match expect {
        Some(e) if Verdict::from(e) != report.verdict => Err(Failure::Check(format!("{summary}, expected {}", Verdict::from(e)))),
        _ => Ok(summary),
    }
}

fn dump_g2k(k: usize, d: u32, theta: Option<&str>, out: &mut dyn Write) -> Outcome {
    if k == 0 || d == 0 || k > d as usize {
        return Err(Failure::Input("need 1 <= k <= d".into()));
    }
    let h = match theta {
        None => ExactTrigPoly::generic(&[d]).map_err(input)?,
        Some(t) => {
            let angle: Angle = t.parse().map_err(input)?;
            let points = CriticalPoints::new(vec![CriticalPoint { angle, multiplicity: d }]).map_err(input)?;
            ExactTrigPoly::from_points(&points).map_err(input)?
        }
    };
    let g = build_g2k_hl(k, &h).map_err(|e| Failure::Check(e.to_string()))?.g;
    let numer = g.numer.normal_form();
    line(out, &json!({
        "k": k, "d": d, "theta": theta, "terms": numer.len(),
        "numerator": numer.to_string(), "denominator": g.denom.to_string(),
    }))?;
    Ok(format!("G'_{} for d = {d}: {} terms", 2 * k, numer.len()))
}

fn parse_alphas(arg: &str) -> Result<VerblunskySeq, Failure> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))?
    };
    let values: Vec<Complex64> = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("alphas: {e}")))?;
    VerblunskySeq::new(values).map_err(input)
}

fn szego_check(alphas: &str, grid: usize, out: &mut dyn Write) -> Outcome {
    let alpha = parse_alphas(alphas)?;
    let quad = bs_weight_quadrature(&alpha, &NumericTrigPoly::constant_one(), grid).map_err(input)?;
    let logs = log_term(&alpha, alpha.len());
    let diff = (quad - logs).abs();
    let ok = diff <= SZEGO_TOLERANCE;
    line(out, &json!({"quadrature": quad, "logSum": logs, "diff": diff, "status": if ok { "pass" } else { "fail" }}))?;
    let summary = format!("szego: quadrature {quad:.12} vs log sum {logs:.12}, |diff| {diff:.2e}");
    if ok {
        Ok(summary)
    } else {
        Err(Failure::Check(summary))
    }
}

fn enumerate(k: usize, l: u32, out: &mut dyn Write) -> Outcome {
    if k == 0 || l == 0 {
        return Err(Failure::Input("--k and --l must be positive".into()));
    }
    if d_count(k, l) > 1_000_000 {
        return Err(Failure::Input(format!("|D| = {} is too large to list", d_count(k, l))));
    }
    let list = enum_d(k, l);
    for t in &list {
        line(out, &t.flat())?;
    }
    let expected = d_count(k, l);
    let filtered = enum_d_filter(k, l);
    let same = filtered.len() == list.len() && list.iter().all(|t| filtered.contains(t));
    let summary = format!("D_{{{},{l}}}: {} tuples, formula {expected}", 2 * k, list.len());
    if same && list.len() as u64 == expected {
        Ok(summary)
    } else {
        Err(Failure::Check(format!("{summary}, direct filter {}", filtered.len())))
    }
}
