//! Deterministic Monte Carlo engine.
//!
//! Repeated sampling from a configured model with per-k aggregation of
//! estimator means, RMSEs against the analytic model truths, and mean test
//! p-values. Replication `r` draws from its own RNG stream `(seed, r)`, the
//! per-replication results are collected in index order, and aggregation runs
//! sequentially over that order, so output is bit-identical no matter how
//! many worker threads run the replications.
//!
//! Estimator failures (a failed tail-index solve at small `k` under light
//! truncation, an unbounded endpoint reading, degenerate moments) are
//! expected; aggregates report the conditional mean over successes together
//! with the failure count.

use crate::error::{Error, Result};
use crate::estimators::{
    self, d_hat, endpoint_hat, hill, mom_endpoint, mom_fit, mom_quantile, quantile_trunc,
    quantile_weissman, Endpoint, DEFAULT_TOL,
};
use crate::models::TailModel;
use crate::par;
use crate::rng::StreamRng;
use crate::sample::SortedSample;
use crate::truncation_tests::{test_ta, test_tb};
use serde::Serialize;
use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

/// Estimators and tests the engine can track, in canonical output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    AlphaTrunc,
    HillInverse,
    Mom,
    QTrunc,
    QWeissman,
    QMom,
    EndpointTrunc,
    EndpointMom,
    TestTa,
    TestTb,
}

pub const ALL_ESTIMATORS: [EstimatorKind; 10] = [
    EstimatorKind::AlphaTrunc,
    EstimatorKind::HillInverse,
    EstimatorKind::Mom,
    EstimatorKind::QTrunc,
    EstimatorKind::QWeissman,
    EstimatorKind::QMom,
    EstimatorKind::EndpointTrunc,
    EstimatorKind::EndpointMom,
    EstimatorKind::TestTa,
    EstimatorKind::TestTb,
];

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::AlphaTrunc => "alpha_trunc",
            EstimatorKind::HillInverse => "hill_inverse",
            EstimatorKind::Mom => "mom",
            EstimatorKind::QTrunc => "q_trunc",
            EstimatorKind::QWeissman => "q_weissman",
            EstimatorKind::QMom => "q_mom",
            EstimatorKind::EndpointTrunc => "endpoint_trunc",
            EstimatorKind::EndpointMom => "endpoint_mom",
            EstimatorKind::TestTa => "test_ta",
            EstimatorKind::TestTb => "test_tb",
        }
    }

    fn is_test(&self) -> bool {
        matches!(self, EstimatorKind::TestTa | EstimatorKind::TestTb)
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_ESTIMATORS
            .iter()
            .find(|e| e.name() == s)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown estimator `{s}`")))
    }
}

/// Enabled-estimator set; defaults to everything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimatorSet {
    enabled: Vec<EstimatorKind>,
}

impl Default for EstimatorSet {
    fn default() -> Self {
        EstimatorSet {
            enabled: ALL_ESTIMATORS.to_vec(),
        }
    }
}

impl EstimatorSet {
    /// Parses `all` or a comma-separated list of estimator names, keeping the
    /// canonical order.
    pub fn parse(list: &str) -> Result<Self> {
        if list.trim().eq_ignore_ascii_case("all") {
            return Ok(EstimatorSet::default());
        }
        let mut wanted = Vec::new();
        for part in list.split(',') {
            let kind: EstimatorKind = part.trim().parse()?;
            if !wanted.contains(&kind) {
                wanted.push(kind);
            }
        }
        if wanted.is_empty() {
            return Err(Error::Config("empty estimator list".to_string()));
        }
        let enabled = ALL_ESTIMATORS
            .iter()
            .filter(|e| wanted.contains(e))
            .copied()
            .collect();
        Ok(EstimatorSet { enabled })
    }

    pub fn enabled(&self) -> &[EstimatorKind] {
        &self.enabled
    }
}

impl fmt::Display for EstimatorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.enabled.iter().map(|e| e.name()).collect();
        write!(f, "{}", names.join(","))
    }
}

/// One simulation cell: a model, sample size, replication count, the `k`
/// values to evaluate, the extreme-quantile level, the master seed, and the
/// estimators to track.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub model: TailModel,
    pub n: usize,
    pub runs: usize,
    pub k_grid: Vec<usize>,
    pub p_target: f64,
    pub seed: u64,
    pub estimators: EstimatorSet,
}

impl SimConfig {
    /// Every 5th `k` from 10 to `n - 10`, the default resolution.
    pub fn default_k_grid(n: usize) -> Vec<usize> {
        if n < 21 {
            return (1..n.max(2) - 1).collect();
        }
        (10..=n - 10).step_by(5).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n = {} too small", self.n)));
        }
        if self.runs == 0 {
            return Err(Error::Config("runs must be >= 1".to_string()));
        }
        if self.k_grid.is_empty() {
            return Err(Error::Config("k_grid is empty".to_string()));
        }
        for &k in &self.k_grid {
            if k < 1 || k >= self.n {
                return Err(Error::Config(format!(
                    "k = {k} outside [1, n-1] with n = {}",
                    self.n
                )));
            }
        }
        if !(self.p_target > 0.0 && self.p_target < 1.0) {
            return Err(Error::Config(format!(
                "p = {} outside (0, 1)",
                self.p_target
            )));
        }
        Ok(())
    }

    /// Reads a flat `key = value` config file. Keys: `model`, `n`, `runs`,
    /// `k_grid`, `p`, `seed`, `estimators`; `#` starts a comment. `k_grid`
    /// accepts a comma list (`10,20,50`) or a range `lo:hi:step`.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut model: Option<TailModel> = None;
        let mut n: Option<usize> = None;
        let mut runs: Option<usize> = None;
        let mut k_grid: Option<Vec<usize>> = None;
        let mut p: Option<f64> = None;
        let mut seed: Option<u64> = None;
        let mut estimators = EstimatorSet::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", idx + 1))
            })?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            let bad = |what: &str| Error::Config(format!("line {}: bad {what}: `{value}`", idx + 1));
            match key.as_str() {
                "model" => model = Some(value.parse()?),
                "n" => n = Some(value.parse().map_err(|_| bad("n"))?),
                "runs" => runs = Some(value.parse().map_err(|_| bad("runs"))?),
                "k_grid" => k_grid = Some(parse_k_grid(value)?),
                "p" => p = Some(value.parse().map_err(|_| bad("p"))?),
                "seed" => seed = Some(value.parse().map_err(|_| bad("seed"))?),
                "estimators" => estimators = EstimatorSet::parse(value)?,
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key `{other}`",
                        idx + 1
                    )))
                }
            }
        }
        let model = model.ok_or_else(|| Error::Config("missing key `model`".to_string()))?;
        let n = n.ok_or_else(|| Error::Config("missing key `n`".to_string()))?;
        let config = SimConfig {
            model,
            n,
            runs: runs.unwrap_or(200),
            k_grid: k_grid.unwrap_or_else(|| Self::default_k_grid(n)),
            p_target: p.unwrap_or(0.002),
            seed: seed.unwrap_or(1),
            estimators,
        };
        config.validate()?;
        Ok(config)
    }
}

/// `lo:hi:step` range (inclusive ends) or a comma list.
pub fn parse_k_grid(value: &str) -> Result<Vec<usize>> {
    let bad = |reason: &str| Error::Config(format!("bad k_grid `{value}`: {reason}"));
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(bad("expected lo:hi or lo:hi:step"));
        }
        let lo: usize = parts[0].trim().parse().map_err(|_| bad("lo"))?;
        let hi: usize = parts[1].trim().parse().map_err(|_| bad("hi"))?;
        let step: usize = if parts.len() == 3 {
            parts[2].trim().parse().map_err(|_| bad("step"))?
        } else {
            1
        };
        if step == 0 || lo > hi {
            return Err(bad("need lo <= hi and step >= 1"));
        }
        Ok((lo..=hi).step_by(step).collect())
    } else {
        value
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| bad("entry")))
            .collect()
    }
}

/// Aggregate for one `(estimator, k)` cell.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub estimator: EstimatorKind,
    pub k: usize,
    /// Mean estimate over successful replications (test statistic mean for
    /// the tests); `None` when every replication failed.
    pub mean: Option<f64>,
    /// Root mean squared error against the model truth; `None` for tests and
    /// for endpoints of unbounded models.
    pub rmse: Option<f64>,
    /// Mean p-value (tests only).
    pub mean_p: Option<f64>,
    /// Replications excluded from the aggregate (failed solves, degenerate
    /// moments, unbounded endpoint readings).
    pub failures: u32,
}

/// Aggregated simulation output for one config, in long format.
#[derive(Debug, Clone, Serialize)]
pub struct SimSummary {
    pub model: String,
    pub t_spec: String,
    pub n: usize,
    pub runs: usize,
    pub p_target: f64,
    pub seed: u64,
    pub truth_alpha: f64,
    pub truth_quantile: f64,
    /// `None` for unbounded models.
    pub truth_endpoint: Option<f64>,
    pub rows: Vec<SummaryRow>,
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline
/// (the model spec holds commas, e.g. `burr(alpha=2,rho=-1)`).
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl SimSummary {
    /// Comment line with the cell parameters and analytic truths.
    pub fn write_csv_comment<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(
            w,
            "# model={} T_spec={} n={} runs={} p={} seed={} truth_alpha={} truth_quantile={} truth_endpoint={}",
            self.model,
            self.t_spec,
            self.n,
            self.runs,
            self.p_target,
            self.seed,
            self.truth_alpha,
            self.truth_quantile,
            self.truth_endpoint
                .map_or("inf".to_string(), |t| t.to_string()),
        )
    }

    /// Long-format CSV: the comment line, a column header when requested
    /// (set `with_column_header` only for the first summary of a stream),
    /// then `model,T_spec,estimator,k,mean,rmse,mean_p,failures`.
    pub fn write_csv<W: Write>(&self, w: &mut W, with_column_header: bool) -> io::Result<()> {
        self.write_csv_comment(w)?;
        if with_column_header {
            writeln!(w, "model,T_spec,estimator,k,mean,rmse,mean_p,failures")?;
        }
        let model = csv_field(&self.model);
        let t_spec = csv_field(&self.t_spec);
        for row in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                model,
                t_spec,
                row.estimator.name(),
                row.k,
                fmt_opt(row.mean),
                fmt_opt(row.rmse),
                fmt_opt(row.mean_p),
                row.failures,
            )?;
        }
        Ok(())
    }

    /// Row lookup helper for analysis code.
    pub fn row(&self, estimator: EstimatorKind, k: usize) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.estimator == estimator && r.k == k)
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

/// One evaluated cell of one replication: the tracked value and, for tests,
/// the p-value. `None` means the estimator failed on this replication.
type CellResult = Option<(f64, Option<f64>)>;

/// Runs the configured simulation. Output is identical for identical configs
/// regardless of the parallel schedule.
pub fn run_simulation(config: &SimConfig) -> Result<SimSummary> {
    config.validate()?;
    let truth_alpha = config.model.alpha();
    let truth_quantile = config.model.upper_quantile(config.p_target)?;
    let truth_endpoint = config.model.truncation_point();
    let enabled = config.estimators.enabled().to_vec();
    let cells_per_rep = enabled.len() * config.k_grid.len();

    let per_rep: Vec<Vec<CellResult>> = par::map_indexed(config.runs, |r| {
        let mut rng = StreamRng::new(config.seed, r as u64);
        let sample = config
            .model
            .sample(config.n, &mut rng)
            .expect("n >= 1 was validated");
        let mut out = Vec::with_capacity(cells_per_rep);
        for &k in &config.k_grid {
            evaluate_at_k(&sample, k, config.p_target, &enabled, &mut out);
        }
        out
    });

    // Sequential aggregation in replication order. Cells are laid out
    // k-major inside each replication: cell i covers estimator i % E at
    // grid position i / E.
    let n_estimators = enabled.len();
    let mut n_ok = vec![0u32; cells_per_rep];
    let mut sums = vec![0.0f64; cells_per_rep];
    let mut sq_errs = vec![0.0f64; cells_per_rep];
    let mut p_sums = vec![0.0f64; cells_per_rep];
    for rep in &per_rep {
        for (i, cell) in rep.iter().enumerate() {
            if let Some((value, p)) = cell {
                n_ok[i] += 1;
                sums[i] += value;
                if let Some(p) = p {
                    p_sums[i] += p;
                }
                let truth = truth_for(
                    enabled[i % n_estimators],
                    truth_alpha,
                    truth_quantile,
                    truth_endpoint,
                );
                if let Some(t) = truth {
                    let e = value - t;
                    sq_errs[i] += e * e;
                }
            }
        }
    }

    // Rows come out estimator-major in the canonical order.
    let mut rows = Vec::with_capacity(cells_per_rep);
    for (ei, &estimator) in enabled.iter().enumerate() {
        let truth = truth_for(estimator, truth_alpha, truth_quantile, truth_endpoint);
        for (ki, &k) in config.k_grid.iter().enumerate() {
            let i = ki * n_estimators + ei;
            let ok = n_ok[i];
            rows.push(SummaryRow {
                estimator,
                k,
                mean: (ok > 0).then(|| sums[i] / ok as f64),
                rmse: match (ok > 0, truth.is_some(), estimator.is_test()) {
                    (true, true, false) => Some((sq_errs[i] / ok as f64).sqrt()),
                    _ => None,
                },
                mean_p: (ok > 0 && estimator.is_test()).then(|| p_sums[i] / ok as f64),
                failures: config.runs as u32 - ok,
            });
        }
    }

    Ok(SimSummary {
        model: config.model.base_spec_string(),
        t_spec: config.model.t_spec_string(),
        n: config.n,
        runs: config.runs,
        p_target: config.p_target,
        seed: config.seed,
        truth_alpha,
        truth_quantile,
        truth_endpoint,
        rows,
    })
}

/// Truth value an estimator is judged against, if any.
fn truth_for(
    estimator: EstimatorKind,
    alpha: f64,
    quantile: f64,
    endpoint: Option<f64>,
) -> Option<f64> {
    match estimator {
        EstimatorKind::AlphaTrunc | EstimatorKind::HillInverse => Some(alpha),
        // The moment estimator targets the extreme value index of the parent.
        EstimatorKind::Mom => Some(1.0 / alpha),
        EstimatorKind::QTrunc | EstimatorKind::QWeissman | EstimatorKind::QMom => Some(quantile),
        EstimatorKind::EndpointTrunc | EstimatorKind::EndpointMom => endpoint,
        EstimatorKind::TestTa | EstimatorKind::TestTb => None,
    }
}

fn evaluate_at_k(
    sample: &SortedSample,
    k: usize,
    p: f64,
    enabled: &[EstimatorKind],
    out: &mut Vec<CellResult>,
) {
    // Shared pieces, computed lazily at most once.
    let needs_alpha = enabled.iter().any(|e| {
        matches!(
            e,
            EstimatorKind::AlphaTrunc | EstimatorKind::QTrunc | EstimatorKind::EndpointTrunc
        )
    });
    let alpha = if needs_alpha {
        estimators::alpha_trunc(sample, k, DEFAULT_TOL).ok()
    } else {
        None
    };
    let d0 = alpha.and_then(|a| d_hat(sample, k, a).ok().map(|d| d.max(0.0)));

    for &estimator in enabled {
        let cell: CellResult = match estimator {
            EstimatorKind::AlphaTrunc => alpha.map(|a| (a, None)),
            EstimatorKind::HillInverse => match hill(sample, k) {
                Ok(h) if h > 0.0 => Some((1.0 / h, None)),
                _ => None,
            },
            EstimatorKind::Mom => mom_fit(sample, k).ok().map(|f| (f.xi_mom, None)),
            EstimatorKind::QTrunc => match (alpha, d0) {
                (Some(a), Some(d)) => quantile_trunc(sample, k, p, d, a)
                    .ok()
                    .map(|q| (q, None)),
                _ => None,
            },
            EstimatorKind::QWeissman => quantile_weissman(sample, k, p).ok().map(|q| (q, None)),
            EstimatorKind::QMom => mom_quantile(sample, k, p).ok().map(|q| (q, None)),
            EstimatorKind::EndpointTrunc => match (alpha, d0) {
                (Some(a), Some(d)) => match endpoint_hat(sample, k, d, a) {
                    Ok(Endpoint::Finite(t)) => Some((t, None)),
                    _ => None,
                },
                _ => None,
            },
            EstimatorKind::EndpointMom => match mom_endpoint(sample, k) {
                Ok(Endpoint::Finite(t)) => Some((t, None)),
                _ => None,
            },
            EstimatorKind::TestTa => test_ta(sample, k, 0.05)
                .ok()
                .map(|t| (t.statistic, Some(t.p_value))),
            EstimatorKind::TestTb => test_tb(sample, k, 0.05)
                .ok()
                .map(|t| (t.statistic, Some(t.p_value))),
        };
        out.push(cell);
    }
}

/// The nine-cell simulation grid: parents Pareto(0.5), Pareto(2),
/// Burr(2, -1), each untruncated and truncated at the parent's 0.90 and 0.99
/// quantiles; `n = 400`, `p = 0.002`, every estimator tracked. Cell seeds are
/// derived from `base_seed` and the cell index.
pub fn reference_grid(base_seed: u64, runs: usize) -> Result<Vec<SimSummary>> {
    let bases = ["pareto(alpha=0.5)", "pareto(alpha=2)", "burr(alpha=2,rho=-1)"];
    let truncations = [Some(0.90), Some(0.99), None];
    let mut summaries = Vec::with_capacity(9);
    let mut cell_index = 0u64;
    for base in bases {
        for trunc in truncations {
            let spec = match trunc {
                Some(level) => format!("trunc({base},Tq={level})"),
                None => base.to_string(),
            };
            let config = SimConfig {
                model: spec.parse()?,
                n: 400,
                runs,
                k_grid: SimConfig::default_k_grid(400),
                p_target: 0.002,
                seed: base_seed.wrapping_add(cell_index.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
                estimators: EstimatorSet::default(),
            };
            summaries.push(run_simulation(&config)?);
            cell_index += 1;
        }
    }
    Ok(summaries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SimConfig {
        SimConfig {
            model: "trunc(pareto(alpha=2),Tq=0.9)".parse().unwrap(),
            n: 80,
            runs: 5,
            k_grid: vec![10, 20, 40],
            p_target: 0.01,
            seed: 99,
            estimators: EstimatorSet::default(),
        }
    }

    #[test]
    fn validation_catches_bad_configs() {
        let mut c = small_config();
        c.runs = 0;
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.k_grid = vec![80];
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.p_target = 1.0;
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.k_grid.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn summary_has_full_schema() {
        let c = small_config();
        let s = run_simulation(&c).unwrap();
        assert_eq!(s.rows.len(), 10 * 3);
        assert_eq!(s.model, "pareto(alpha=2)");
        assert_eq!(s.t_spec, "Tq=0.9");
        assert!(s.truth_endpoint.is_some());
        for row in &s.rows {
            assert!(row.failures <= c.runs as u32);
            if let Some(rmse) = row.rmse {
                assert!(rmse >= 0.0);
            }
        }
        // Tests report mean p-values, point estimators do not.
        assert!(s.row(EstimatorKind::TestTa, 20).unwrap().mean_p.is_some());
        assert!(s.row(EstimatorKind::QTrunc, 20).unwrap().mean_p.is_none());
        assert!(s.row(EstimatorKind::TestTa, 20).unwrap().rmse.is_none());
    }

    #[test]
    fn single_run_matches_direct_calls() {
        let mut c = small_config();
        c.runs = 1;
        let summary = run_simulation(&c).unwrap();

        let mut rng = StreamRng::new(c.seed, 0);
        let sample = c.model.sample(c.n, &mut rng).unwrap();
        let k = 20;
        let alpha = estimators::alpha_trunc(&sample, k, DEFAULT_TOL).unwrap();
        let row = summary.row(EstimatorKind::AlphaTrunc, k).unwrap();
        assert_eq!(row.mean, Some(alpha));
        assert_eq!(row.failures, 0);

        let d0 = estimators::d_hat_admissible(&sample, k, alpha).unwrap();
        let q = estimators::quantile_trunc(&sample, k, c.p_target, d0, alpha).unwrap();
        assert_eq!(summary.row(EstimatorKind::QTrunc, k).unwrap().mean, Some(q));

        let ta = test_ta(&sample, k, 0.05).unwrap();
        let row = summary.row(EstimatorKind::TestTa, k).unwrap();
        assert_eq!(row.mean, Some(ta.statistic));
        assert_eq!(row.mean_p, Some(ta.p_value));
    }

    #[test]
    fn identical_configs_identical_output() {
        let c = small_config();
        let a = run_simulation(&c).unwrap();
        let b = run_simulation(&c).unwrap();
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        a.write_csv(&mut buf_a, true).unwrap();
        b.write_csv(&mut buf_b, true).unwrap();
        assert_eq!(buf_a, buf_b);
    }

    #[test]
    fn unbounded_model_has_no_endpoint_truth() {
        let mut c = small_config();
        c.model = "pareto(alpha=2)".parse().unwrap();
        let s = run_simulation(&c).unwrap();
        assert!(s.truth_endpoint.is_none());
        for row in &s.rows {
            if matches!(
                row.estimator,
                EstimatorKind::EndpointTrunc | EstimatorKind::EndpointMom
            ) {
                assert!(row.rmse.is_none());
            }
        }
    }

    #[test]
    fn estimator_set_parsing() {
        let set = EstimatorSet::parse("test_tb, alpha_trunc").unwrap();
        assert_eq!(
            set.enabled(),
            &[EstimatorKind::AlphaTrunc, EstimatorKind::TestTb]
        );
        assert!(EstimatorSet::parse("bogus").is_err());
        assert!(EstimatorSet::parse("").is_err());
        assert_eq!(EstimatorSet::parse("ALL").unwrap(), EstimatorSet::default());
    }

    #[test]
    fn config_file_round_trip() {
        let text = "\
# a cell
model = trunc(pareto(alpha=2), Tq=0.9)
n = 100
runs = 7
k_grid = 10:30:10
p = 0.01
seed = 5
estimators = test_ta,test_tb
";
        let c = SimConfig::parse_str(text).unwrap();
        assert_eq!(c.n, 100);
        assert_eq!(c.runs, 7);
        assert_eq!(c.k_grid, vec![10, 20, 30]);
        assert_eq!(c.seed, 5);
        assert_eq!(c.estimators.enabled().len(), 2);

        assert!(SimConfig::parse_str("n = 100").is_err()); // missing model
        assert!(SimConfig::parse_str("model = pareto(alpha=1)\nn = 100\nbogus = 1").is_err());
    }

    #[test]
    fn k_grid_forms() {
        assert_eq!(parse_k_grid("10,20,30").unwrap(), vec![10, 20, 30]);
        assert_eq!(parse_k_grid("2:8:3").unwrap(), vec![2, 5, 8]);
        assert_eq!(parse_k_grid("2:4").unwrap(), vec![2, 3, 4]);
        assert!(parse_k_grid("5:1").is_err());
        assert!(parse_k_grid("1:5:0").is_err());
        assert!(parse_k_grid("a,b").is_err());
    }

    #[test]
    fn default_grid_shape() {
        let g = SimConfig::default_k_grid(400);
        assert_eq!(g.first(), Some(&10));
        assert_eq!(g.last(), Some(&390));
        assert_eq!(g.len(), 77);
        assert!(g.windows(2).all(|w| w[1] - w[0] == 5));
    }

    #[test]
    fn csv_quotes_model_specs_with_commas() {
        let config = SimConfig {
            model: "burr(alpha=2,rho=-1)".parse().unwrap(),
            n: 50,
            runs: 2,
            k_grid: vec![10],
            p_target: 0.01,
            seed: 1,
            estimators: EstimatorSet::parse("hill_inverse").unwrap(),
        };
        let mut buf = Vec::new();
        run_simulation(&config)
            .unwrap()
            .write_csv(&mut buf, true)
            .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row = text.lines().nth(2).unwrap();
        assert!(row.starts_with("\"burr(alpha=2,rho=-1)\",inf,hill_inverse,10,"));
        // Unquoting restores the spec and the remaining fields stay aligned.
        let rest = row.strip_prefix("\"burr(alpha=2,rho=-1)\",").unwrap();
        assert_eq!(rest.split(',').count(), 7);
    }

    #[test]
    fn grid_emits_nine_cells() {
        let summaries = reference_grid(3, 2).unwrap();
        assert_eq!(summaries.len(), 9);
        let specs: Vec<String> = summaries
            .iter()
            .map(|s| format!("{}|{}", s.model, s.t_spec))
            .collect();
        assert_eq!(specs[0], "pareto(alpha=0.5)|Tq=0.9");
        assert_eq!(specs[2], "pareto(alpha=0.5)|inf");
        assert_eq!(specs[8], "burr(alpha=2,rho=-1)|inf");
        // Distinct cells use distinct seeds.
        let seeds: std::collections::HashSet<u64> =
            summaries.iter().map(|s| s.seed).collect();
        assert_eq!(seeds.len(), 9);
    }
}
