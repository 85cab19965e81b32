//! Sequence families, coefficient-side condition diagnostics and convergence
//! studies of the sum-rule functional.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algmodel::CorollaryEvaluator;
use crate::error::{LabError, OpucError};
use crate::opuc::{ggt_matrix, log_term, trace_v, VerblunskySeq};
use crate::trig::{Angle, CriticalPoints, NumericTrigPoly};

pub const DEFAULT_SCHEDULE: [usize; 6] = [50, 100, 200, 400, 800, 1600];
pub const DEFAULT_MAX_N: usize = 1 << 16;

fn zero_angle() -> Angle {
    Angle::PiFloat(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "camelCase")]
pub enum SequenceFamily {
    /// `alpha_n = c e^{-i theta n} / (n+1)^gamma`.
    #[serde(rename_all = "camelCase")]
    PowerDecay {
        c: f64,
        gamma: f64,
        #[serde(default = "zero_angle")]
        theta_over_pi: Angle,
    },
    /// `alpha_n = c e^{-i theta n}`.
    #[serde(rename_all = "camelCase")]
    Constant {
        c: f64,
        #[serde(default = "zero_angle")]
        theta_over_pi: Angle,
    },
    FiniteSupport { values: Vec<Complex64> },
    /// `support` values uniform in the disk of radius `rmax`, from the study seed.
    #[serde(rename_all = "camelCase")]
    RandomFinite { support: usize, rmax: f64 },
    /// JSON array of `[re, im]` pairs, zero beyond its end.
    Custom { file: PathBuf },
}

impl SequenceFamily {
    /// Short name used to order merged reports.
    pub fn key(&self) -> String {
        match self {
            SequenceFamily::PowerDecay { c, gamma, theta_over_pi } => format!("powerDecay(c={c},gamma={gamma},theta={theta_over_pi}pi)"),
            SequenceFamily::Constant { c, theta_over_pi } => format!("constant(c={c},theta={theta_over_pi}pi)"),
            SequenceFamily::FiniteSupport { values } => format!("finiteSupport(len={})", values.len()),
            SequenceFamily::RandomFinite { support, rmax } => format!("randomFinite(support={support},rmax={rmax})"),
            SequenceFamily::Custom { file } => format!("custom({})", file.display()),
        }
    }

    /// The first `len` coefficients (a finite family keeps its own length).
    pub fn materialize(&self, len: usize, seed: u64, base_dir: Option<&Path>) -> Result<VerblunskySeq, LabError> {
        let rotating = |c: f64, theta: &Angle, decay: &dyn Fn(usize) -> f64| -> Vec<Complex64> {
            let w = theta.radians();
            (0..len).map(|n| Complex64::from_polar(c * decay(n), -w * n as f64)).collect()
        };
        let values = match self {
            SequenceFamily::PowerDecay { c, gamma, theta_over_pi } => {
                if !gamma.is_finite() || *gamma < 0.0 {
                    return Err(LabError::BadFamily(format!("gamma = {gamma} must be nonnegative")));
                }
                rotating(*c, theta_over_pi, &|n| (n as f64 + 1.0).powf(-gamma))
            }
            SequenceFamily::Constant { c, theta_over_pi } => rotating(*c, theta_over_pi, &|_| 1.0),
            SequenceFamily::FiniteSupport { values } => values.clone(),
            SequenceFamily::RandomFinite { support, rmax } => {
                if !(0.0..1.0).contains(rmax) {
                    return Err(LabError::BadFamily(format!("rmax = {rmax} must lie in [0, 1)")));
                }
                return Ok(VerblunskySeq::random_finite(seed, *support, *rmax));
            }
            SequenceFamily::Custom { file } => {
                let path = match base_dir {
                    Some(b) if file.is_relative() => b.join(file),
                    _ => file.clone(),
                };
                let text = std::fs::read_to_string(&path)?;
                serde_json::from_str::<Vec<Complex64>>(&text)?
            }
        };
        Ok(VerblunskySeq::new(values)?)
    }
}

/// Partial norms of the coefficient-side conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConditionTable {
    pub n: usize,
    /// `sum_{n<N} |(prod_j (S - e^{-i theta_j})^{m_j} alpha)_n|^2`.
    pub difference_l2: f64,
    /// `(p, sum_{n<N} |alpha_n|^p)` for `p = 2m + 2`, `m = 0..=d`.
    pub power_norms: Vec<(u32, f64)>,
    /// `sum_{n<N} |alpha_n|^4`.
    pub l4: f64,
}

/// Coefficients of `prod_j (S - e^{-i theta_j})^{m_j}` in powers of `S`.
pub fn difference_operator(points: &CriticalPoints) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for p in points.points() {
        let root = p.angle.unit().conj();
        for _ in 0..p.multiplicity {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (r, v) in c.iter().enumerate() {
                next[r + 1] += v;
                next[r] -= root * v;
            }
            c = next;
        }
    }
    c
}

pub fn condition_diagnostics(alpha: &VerblunskySeq, points: &CriticalPoints, n: usize) -> Result<ConditionTable, LabError> {
    let d = points.degree();
    if n < d {
        return Err(OpucError::DegreeTooLarge { d, n }.into());
    }
    let op = difference_operator(points);
    let mut diff = 0.0;
    let mut powers: Vec<(u32, f64)> = (0..=d as u32).map(|m| (2 * m + 2, 0.0)).collect();
    for i in 0..n as i64 {
        let v: Complex64 = op.iter().enumerate().map(|(r, c)| c * alpha.get(i + r as i64)).sum();
        diff += v.norm_sqr();
        let a2 = alpha.get(i).norm_sqr();
        for (p, acc) in powers.iter_mut() {
            *acc += a2.powi(*p as i32 / 2);
        }
    }
    let l4 = (0..n as i64).map(|i| alpha.get(i).norm_sqr().powi(2)).sum();
    Ok(ConditionTable { n, difference_l2: diff, power_norms: powers, l4 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounded,
    Diverging,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Bounded => "bounded",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

pub const BOUNDED_SLOPE: f64 = 1e-4;
pub const BOUNDED_RANGE: f64 = 1.0;
pub const DIVERGING_SLOPE: f64 = 1e-2;

/// Least-squares slope and range of `values` against `ns` over the top half
/// of the schedule, and the resulting verdict.
pub fn classify(ns: &[usize], values: &[f64]) -> (Verdict, f64, f64) {
    let start = ns.len() / 2;
    let (xs, ys) = (&ns[start..], &values[start..]);
    if xs.len() < 2 {
        return (Verdict::Inconclusive, f64::NAN, f64::NAN);
    }
    let m = xs.len() as f64;
    let mx = xs.iter().map(|&x| x as f64).sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(&x, y)| (x as f64 - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|&x| (x as f64 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let range = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let verdict = if slope.abs() < BOUNDED_SLOPE && range < BOUNDED_RANGE {
        Verdict::Bounded
    } else if slope > DIVERGING_SLOPE {
        Verdict::Diverging
    } else {
        Verdict::Inconclusive
    };
    (verdict, slope, range)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GemRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub trace_route: f64,
    pub corollary_route: f64,
    pub log_term_sum: f64,
    pub diff_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GemReport {
    pub family: SequenceFamily,
    pub critical_points: CriticalPoints,
    /// `h_l` for `l = -d..=d` as `[re, im]`.
    pub h: Vec<Complex64>,
    pub schedule: Vec<usize>,
    pub rows: Vec<GemRow>,
    /// Condition norms at the largest `N`.
    pub conditions: Option<ConditionTable>,
    pub slope: f64,
    pub range: f64,
    pub verdict: Verdict,
}

fn default_schedule() -> Vec<usize> {
    DEFAULT_SCHEDULE.to_vec()
}

/// The single input of a study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StudyConfig {
    pub family: SequenceFamily,
    pub critical_points: CriticalPoints,
    #[serde(default = "default_schedule")]
    pub schedule: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct StudyLimits {
    pub max_n: usize,
    /// Directory against which relative `custom` files resolve.
    pub base_dir: Option<PathBuf>,
}

impl Default for StudyLimits {
    fn default() -> Self {
        StudyLimits { max_n: DEFAULT_MAX_N, base_dir: None }
    }
}

fn check_schedule(schedule: &[usize], d: usize, limit: usize) -> Result<(), LabError> {
    if schedule.windows(2).any(|w| w[0] >= w[1]) || schedule.first().is_some_and(|&n| n <= d) {
        return Err(LabError::BadSchedule);
    }
    if let Some(&max) = schedule.last() {
        if max >= limit {
            return Err(LabError::ScheduleTooLong(max, limit));
        }
    }
    Ok(())
}

/// Evaluates both routes of the functional along the schedule.
pub fn convergence_study(config: &StudyConfig, limits: &StudyLimits) -> Result<GemReport, LabError> {
    let points = &config.critical_points;
    let d = points.degree();
    check_schedule(&config.schedule, d, limits.max_n)?;
    let h = NumericTrigPoly::new(points);
    let ev = CorollaryEvaluator::new(points)?;
    let nmax = config.schedule.last().copied().unwrap_or(0);
    let alpha = config.family.materialize(nmax + ev.reach() as usize + d + 1, config.seed, limits.base_dir.as_deref())?;
    let corollary = ev.partial_sums(&alpha, &config.schedule);
    let rows = config
        .schedule
        .par_iter()
        .zip(corollary.par_iter())
        .map(|(&n, &c)| -> Result<GemRow, LabError> {
            let u = ggt_matrix(&alpha, n)?;
            let logs = log_term(&alpha, n);
            let trace = trace_v(&u, &h)? - logs;
            let diff = condition_diagnostics(&alpha, points, n)?.difference_l2;
            Ok(GemRow { n, trace_route: trace, corollary_route: c, log_term_sum: logs, diff_norm: diff })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let values: Vec<f64> = rows.iter().map(|r| r.trace_route).collect();
    let (verdict, slope, range) = classify(&config.schedule, &values);
    let conditions = if nmax > 0 { Some(condition_diagnostics(&alpha, points, nmax)?) } else { None };
    Ok(GemReport {
        family: config.family.clone(),
        critical_points: points.clone(),
        h: h.coefficients().to_vec(),
        schedule: config.schedule.clone(),
        rows,
        conditions,
        slope,
        range,
        verdict,
    })
}

/// Independent studies in parallel, merged in family-key order.
pub fn run_studies(configs: &[StudyConfig], limits: &StudyLimits) -> Vec<Result<GemReport, LabError>> {
    let mut out: Vec<(String, Result<GemReport, LabError>)> =
        configs.par_iter().map(|c| (c.family.key(), convergence_study(c, limits))).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, r)| r).collect()
}

/// `(range of traceRoute - corollaryRoute over all rows, range over rows with N in [lo, hi])`.
pub fn difference_ranges(report: &GemReport, lo: usize, hi: usize) -> (f64, f64) {
    let range = |it: &mut dyn Iterator<Item = f64>| {
        let v: Vec<f64> = it.collect();
        if v.is_empty() {
            return 0.0;
        }
        v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let diff = |r: &GemRow| r.trace_route - r.corollary_route;
    let all = range(&mut report.rows.iter().filter(|r| r.n >= lo).map(diff));
    let early = range(&mut report.rows.iter().filter(|r| r.n >= lo && r.n <= hi).map(diff));
    (all, early)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "traceRoute")]
    trace_route: f64,
    #[serde(rename = "corollaryRoute")]
    corollary_route: f64,
    #[serde(rename = "logTermSum")]
    log_term_sum: f64,
    #[serde(rename = "diffNorm")]
    diff_norm: f64,
    verdict: &'a str,
}

pub const CSV_HEADER: [&str; 6] = ["N", "traceRoute", "corollaryRoute", "logTermSum", "diffNorm", "verdict"];

pub fn export_report(report: &GemReport, format: ReportFormat) -> Result<Vec<u8>, LabError> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_vec_pretty(report)?),
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            let verdict = report.verdict.to_string();
            let mut rows: Vec<&GemRow> = report.rows.iter().collect();
            rows.sort_by_key(|r| r.n);
            for r in rows {
                w.serialize(CsvRow {
                    n: r.n,
                    trace_route: r.trace_route,
                    corollary_route: r.corollary_route,
                    log_term_sum: r.log_term_sum,
                    diff_norm: r.diff_norm,
                    verdict: &verdict,
                })?;
            }
            w.into_inner().map_err(|e| LabError::Io(e.into_error()))
        }
    }
}
