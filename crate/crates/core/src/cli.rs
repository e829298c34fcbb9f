//! Command implementations behind the `qforest` binary.
//!
//! Every command returns a plain report value with a text rendering and a
//! versioned JSON rendering. Wall time is shown in text only, so the JSON of a
//! seeded run is byte-reproducible.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::compile_forest_op;
use crate::error::{Error, Result};
use crate::forest::{
    beta_classical, forecast_classical, generate_random_forest, random_input, save_forest,
    AttributeDomain, ForestParams, InputObject, PredictionPair, RandomForest,
};
use crate::metrics::{error_metric, Metric};
use crate::qae::{
    error_bound, estimate_with_boosting, query_count, reconstruct_r, PhaseEstimation, QaeConfig,
    Target,
};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Lower bound on the single-run success probability of amplitude estimation.
pub const SUCCESS_FLOOR: f64 = 8.0 / (PI * PI);

/// Process exit code for an error: 2 parse, 3 validation, 4 resources, 5 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } => 2,
        Error::InvalidInput(_)
        | Error::DegenerateRange(_)
        | Error::DivisionDegenerate { .. }
        | Error::InvalidGate(_)
        | Error::Unnormalized(_)
        | Error::Compile(_) => 3,
        Error::Resource(_) => 4,
        Error::Io(_) => 5,
    }
}

/// Parses a schema list such as `binary,binary,real,discrete:1/2/3`.
pub fn parse_schema(text: &str) -> Result<Vec<AttributeDomain>> {
    text.split(',')
        .map(str::trim)
        .map(|item| match item {
            "real" => Ok(AttributeDomain::Real),
            "binary" => Ok(AttributeDomain::binary()),
            _ => {
                let cats = item.strip_prefix("discrete:").ok_or_else(|| {
                    Error::parse("--attrs", format!("unknown attribute kind {item:?}"))
                })?;
                let categories = cats
                    .split('/')
                    .map(|c| {
                        c.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::parse("--attrs", format!("bad category {c:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AttributeDomain::Discrete { categories })
            }
        })
        .collect()
}

/// Parses `lo:hi`.
pub fn parse_range(text: &str) -> Result<(f64, f64)> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| Error::parse("--range", "expected lo:hi"))?;
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::parse("--range", format!("bad number {s:?}")))
    };
    Ok((num(lo)?, num(hi)?))
}

/// An input object given inline as `0.2,1,0` or as a path to a file holding such a list.
pub fn parse_input(arg: &str) -> Result<InputObject> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        fs::read_to_string(path)?
    } else {
        arg.to_string()
    };
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(k, s)| {
            s.parse::<f64>()
                .map_err(|_| Error::parse(format!("--input value {}", k + 1), format!("{s:?} is not a number")))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(Error::parse("--input", "no values"));
    }
    Ok(InputObject::new(values))
}

/// Two numeric columns per line (comma or whitespace separated); `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<Vec<PredictionPair>> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let location = || format!("line {}", n + 1);
        if fields.len() != 2 {
            return Err(Error::parse(location(), format!("expected 2 columns, got {}", fields.len())));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::parse(location(), format!("{s:?} is not a number")))
        };
        pairs.push(PredictionPair {
            truth: num(fields[0])?,
            forecast: num(fields[1])?,
        });
    }
    if pairs.is_empty() {
        return Err(Error::parse("pairs", "no pairs"));
    }
    Ok(pairs)
}

/// Generates a forest and writes its canonical document to `out`.
pub fn cmd_generate(params: &ForestParams, seed: u64, out: &Path) -> Result<RandomForest> {
    let forest = generate_random_forest(params, seed)?;
    fs::write(out, save_forest(&forest))?;
    Ok(forest)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classical,
    Quantum,
    Both,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForecastOptions {
    pub mode: Mode,
    pub qae: QaeConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForestSummary {
    pub n: usize,
    pub h: usize,
    pub y_min: f64,
    pub y_max: f64,
}

impl From<&RandomForest> for ForestSummary {
    fn from(f: &RandomForest) -> Self {
        ForestSummary {
            n: f.num_trees(),
            h: f.height(),
            y_min: f.y_min(),
            y_max: f.y_max(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalResult {
    pub r: f64,
    /// Absent for a degenerate label range.
    pub beta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantumResult {
    pub target: Target,
    pub t: usize,
    pub delta: Option<f64>,
    pub repetitions: usize,
    pub beta_estimate: f64,
    pub r_estimate: f64,
    /// Bound on `|β̃ - β|`, evaluated at `β̃`.
    pub beta_error_bound: f64,
    /// The same bound in label units.
    pub r_error_bound: f64,
    pub raw_estimates: Vec<f64>,
    pub grover_calls: usize,
    pub query_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricValue {
    pub metric: Metric,
    pub value: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub beta_abs_error: f64,
    pub within_bound: bool,
    pub r_abs_error: f64,
    pub r_relative_error: Option<f64>,
    /// Metrics over the single pair `(classical R, quantum R̃)`.
    pub metrics: Vec<MetricValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub mode: Mode,
    pub seed: u64,
    pub forest: ForestSummary,
    pub input: Vec<f64>,
    pub classical: Option<ClassicalResult>,
    pub quantum: Option<QuantumResult>,
    pub comparison: Option<Comparison>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

fn metric_table(pairs: &[PredictionPair], metrics: &[Metric]) -> Vec<MetricValue> {
    metrics
        .iter()
        .map(|&metric| match error_metric(pairs, metric) {
            Ok(v) => MetricValue {
                metric,
                value: Some(v),
                error: None,
            },
            Err(e) => MetricValue {
                metric,
                value: None,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

/// Classical and/or simulated quantum forecast of `x`.
///
/// A forest whose leaves all share one label has no normalized target. With
/// `--target r` or in classical mode the constant is returned with a warning;
/// asking for a quantum `β` on such a forest is an error.
pub fn cmd_forecast(forest: &RandomForest, x: &InputObject, opts: &ForecastOptions) -> Result<RunReport> {
    let started = Instant::now();
    let mut warnings = Vec::new();
    let r_classical = forecast_classical(forest, x)?;
    let degenerate = forest.is_degenerate();
    let wants_quantum = opts.mode != Mode::Classical;

    if degenerate {
        if wants_quantum && opts.qae.target == Target::Beta {
            return Err(Error::DegenerateRange(forest.y_min()));
        }
        warnings.push(format!(
            "all leaves are labelled {}; the forecast is that constant and no circuit was run",
            forest.y_min()
        ));
    }

    let classical = (opts.mode != Mode::Quantum || degenerate).then(|| ClassicalResult {
        r: r_classical,
        beta: beta_classical(forest, x).ok(),
    });

    let quantum = if wants_quantum && !degenerate {
        let circuit = compile_forest_op(forest, x)?;
        let est = estimate_with_boosting(&circuit, &opts.qae)?;
        let range = forest.y_max() - forest.y_min();
        Some(QuantumResult {
            target: opts.qae.target,
            t: est.t,
            delta: opts.qae.delta,
            repetitions: est.repetitions,
            beta_estimate: est.beta_estimate,
            r_estimate: reconstruct_r(est.beta_estimate, forest.y_min(), forest.y_max())?,
            beta_error_bound: est.error_bound,
            r_error_bound: est.error_bound * range,
            raw_estimates: est.raw_estimates.clone(),
            grover_calls: est.grover_calls,
            query_count: query_count(&est),
        })
    } else {
        None
    };

    let comparison = match (&classical, &quantum) {
        (Some(c), Some(q)) if opts.mode == Mode::Both => {
            let beta = c.beta.expect("non-degenerate forest");
            let pair = [PredictionPair {
                truth: c.r,
                forecast: q.r_estimate,
            }];
            let beta_abs_error = (q.beta_estimate - beta).abs();
            Some(Comparison {
                beta_abs_error,
                within_bound: beta_abs_error <= q.beta_error_bound,
                r_abs_error: (q.r_estimate - c.r).abs(),
                r_relative_error: (c.r != 0.0).then(|| (q.r_estimate - c.r).abs() / c.r.abs()),
                metrics: metric_table(&pair, &Metric::ALL),
            })
        }
        _ => None,
    };

    Ok(RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        mode: opts.mode,
        seed: opts.qae.seed,
        forest: forest.into(),
        input: x.values.clone(),
        classical,
        quantum,
        comparison,
        warnings,
        wall_time: started.elapsed(),
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let f = &self.forest;
        let _ = writeln!(s, "forest      n={} h={} y_min={} y_max={}", f.n, f.h, f.y_min, f.y_max);
        let _ = writeln!(s, "input       {:?}", self.input);
        let _ = writeln!(s, "seed        {}", self.seed);
        if let Some(c) = &self.classical {
            let _ = writeln!(s, "classical   R={:.6} beta={}", c.r, fmt_opt(c.beta));
        }
        if let Some(q) = &self.quantum {
            let _ = writeln!(
                s,
                "quantum     beta~={:.6} R~={:.6} bound={:.6} (R units {:.6})",
                q.beta_estimate, q.r_estimate, q.beta_error_bound, q.r_error_bound
            );
            let _ = writeln!(
                s,
                "            t={} repetitions={} grover_calls={} queries={}",
                q.t, q.repetitions, q.grover_calls, q.query_count
            );
        }
        if let Some(c) = &self.comparison {
            let _ = writeln!(
                s,
                "comparison  |beta~-beta|={:.6} within_bound={} |R~-R|={:.6} rel={}",
                c.beta_abs_error,
                c.within_bound,
                c.r_abs_error,
                fmt_opt(c.r_relative_error)
            );
            for m in &c.metrics {
                let _ = writeln!(
                    s,
                    "  {:<6} {}",
                    m.metric.name(),
                    m.value.map_or_else(|| m.error.clone().unwrap_or_default(), |v| format!("{v:.6}"))
                );
            }
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning     {w}");
        }
        let _ = writeln!(s, "wall time   {:.3} ms", self.wall_time.as_secs_f64() * 1e3);
        s
    }
}

/// One randomized small-forest experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproductionRow {
    pub seed: u64,
    pub beta: f64,
    pub beta_estimate: f64,
    pub k: usize,
    /// `2π√(β(1-β))/t + π²/t²` at the classical `β`.
    pub bound: f64,
    pub within_bound: bool,
    pub y_min: f64,
    pub y_max: f64,
    pub r: f64,
    pub r_estimate: f64,
    pub r_relative_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproductionReport {
    pub schema_version: u32,
    pub t: usize,
    pub phase_qubits: usize,
    pub circuit_qubits: usize,
    pub value_range: (f64, f64),
    pub rows: Vec<ReproductionRow>,
    pub success_rate: f64,
    pub success_floor: f64,
    pub mean_abs_beta_error: f64,
    pub median_relative_r_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReproduceOptions {
    /// One independent experiment per seed: fresh forest, input and readout.
    pub seeds: Vec<u64>,
    pub t: usize,
    pub value_range: (f64, f64),
}

impl Default for ReproduceOptions {
    /// Ten experiments on two height-2 trees over three binary attributes, `t = 32`.
    fn default() -> Self {
        ReproduceOptions {
            seeds: (0..10).collect(),
            t: 32,
            value_range: (10.0, 20.0),
        }
    }
}

const INPUT_STREAM: u64 = 1;
const READOUT_STREAM: u64 = 2;

/// Two height-2 trees over three binary attributes with labels in `value_range`,
/// and a random input object, both derived from `seed`.
pub fn small_experiment_instance(
    seed: u64,
    value_range: (f64, f64),
) -> Result<(RandomForest, InputObject)> {
    let forest = generate_random_forest(&ForestParams::small_binary(value_range), seed)?;
    let mut input_rng = ChaCha8Rng::seed_from_u64(seed);
    input_rng.set_stream(INPUT_STREAM);
    let x = random_input(forest.schema(), &mut input_rng);
    Ok((forest, x))
}

/// Runs the small-forest experiment once per seed.
pub fn cmd_reproduce(opts: &ReproduceOptions) -> Result<ReproductionReport> {
    if opts.seeds.is_empty() {
        return Err(Error::InvalidInput("no seeds given".into()));
    }
    let t = opts.t;
    let rows = opts
        .seeds
        .par_iter()
        .map(|&seed| {
            let (forest, x) = small_experiment_instance(seed, opts.value_range)?;
            let beta = beta_classical(&forest, &x)?;
            let r = forecast_classical(&forest, &x)?;
            let circuit = compile_forest_op(&forest, &x)?;
            let run = PhaseEstimation::run(&circuit, t)?;
            let mut readout_rng = ChaCha8Rng::seed_from_u64(seed);
            readout_rng.set_stream(READOUT_STREAM);
            let k = run.sample_k(&mut readout_rng)?;
            let beta_estimate = crate::qae::grid_value(k, t);
            let r_estimate = reconstruct_r(beta_estimate, forest.y_min(), forest.y_max())?;
            let bound = error_bound(beta, t);
            Ok(ReproductionRow {
                seed,
                beta,
                beta_estimate,
                k,
                bound,
                within_bound: (beta_estimate - beta).abs() <= bound,
                y_min: forest.y_min(),
                y_max: forest.y_max(),
                r,
                r_estimate,
                r_relative_error: (r != 0.0).then(|| (r_estimate - r).abs() / r.abs()),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let m = rows.len() as f64;
    let success_rate = rows.iter().filter(|r| r.within_bound).count() as f64 / m;
    let mean_abs_beta_error = rows.iter().map(|r| (r.beta_estimate - r.beta).abs()).sum::<f64>() / m;
    let rel: Vec<f64> = rows.iter().filter_map(|r| r.r_relative_error).collect();
    let median_relative_r_error = (!rel.is_empty()).then(|| crate::qae::median(&rel));
    Ok(ReproductionReport {
        schema_version: REPORT_SCHEMA_VERSION,
        t,
        phase_qubits: t.trailing_zeros() as usize,
        circuit_qubits: 1 + 3 + 1,
        value_range: opts.value_range,
        rows,
        success_rate,
        success_floor: SUCCESS_FLOOR,
        mean_abs_beta_error,
        median_relative_r_error,
    })
}

impl ReproductionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "t={} ({} phase qubits + {} circuit qubits), labels in [{}, {})",
            self.t, self.phase_qubits, self.circuit_qubits, self.value_range.0, self.value_range.1
        );
        let _ = writeln!(
            s,
            "{:>6} {:>9} {:>9} {:>3} {:>9} {:>6} {:>10} {:>10} {:>8}",
            "seed", "beta", "beta~", "k", "bound", "ok", "R", "R~", "rel R"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>6} {:>9.5} {:>9.5} {:>3} {:>9.5} {:>6} {:>10.4} {:>10.4} {:>8}",
                r.seed,
                r.beta,
                r.beta_estimate,
                r.k,
                r.bound,
                r.within_bound,
                r.r,
                r.r_estimate,
                r.r_relative_error
                    .map_or_else(|| "-".into(), |v| format!("{:.2}%", 100.0 * v))
            );
        }
        let _ = writeln!(
            s,
            "success rate {:.3} (floor 8/pi^2 = {:.3}), mean |beta~-beta| {:.5}, median relative R error {}",
            self.success_rate,
            self.success_floor,
            self.mean_abs_beta_error,
            self.median_relative_r_error
                .map_or_else(|| "-".into(), |v| format!("{:.2}%", 100.0 * v))
        );
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricReport {
    pub schema_version: u32,
    pub pairs: usize,
    pub metrics: Vec<MetricValue>,
}

/// Evaluates each requested metric; degenerate ones carry an error instead of a value.
pub fn cmd_metrics(pairs: &[PredictionPair], metrics: &[Metric]) -> MetricReport {
    MetricReport {
        schema_version: REPORT_SCHEMA_VERSION,
        pairs: pairs.len(),
        metrics: metric_table(pairs, metrics),
    }
}

impl MetricReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for m in &self.metrics {
            match (&m.value, &m.error) {
                (Some(v), _) => {
                    let _ = writeln!(s, "{:<6} {v:.6}", m.metric.name());
                }
                (None, err) => {
                    let _ = writeln!(s, "{:<6} undefined: {}", m.metric.name(), err.as_deref().unwrap_or(""));
                }
            }
        }
        s
    }
}
