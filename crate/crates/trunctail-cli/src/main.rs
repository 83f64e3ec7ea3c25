//! Command-line front end for truncated heavy-tail fitting.
//!
//! Subcommands: `fit` (per-k estimate table), `test` (truncation tests),
//! `qq` (QQ-plot data), `quantile`, `endpoint`, and `simulate` (Monte Carlo
//! studies). Exit codes: 0 success (possibly with per-k status flags),
//! 2 usage or input error, 3 internal error.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::*;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use trunctail::error::Error;
use trunctail::estimators::{
    self, alpha_trunc, d_hat, endpoint_hat, mom_endpoint, mom_fit, mom_quantile,
    quantile_light, quantile_trunc, quantile_weissman, DEFAULT_TOL,
};
use trunctail::ingest::{self, ColumnSpec, DatasetSpec};
use trunctail::montecarlo::{reference_grid, run_simulation, EstimatorSet, SimConfig};
use trunctail::qq::{pareto_qq, select_k_star_stride, tpa_qq, tpa_qq_fitted};
use trunctail::rng::StreamRng;
use trunctail::truncation_tests::{test_ta, test_tb};
use trunctail::{SortedSample, TailModel};

#[derive(Parser)]
#[command(
    name = "trunctail",
    version,
    about = "Tail-index, quantile and endpoint estimation for possibly upper-truncated heavy tails"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-k estimate table: Hill, tail index, odds, scale, quantiles, endpoints.
    Fit(FitArgs),
    /// Truncation tests T_A and T_B with p-values and decisions per k.
    Test(TestArgs),
    /// QQ-plot data (plain Pareto or truncated with automatic anchor).
    Qq(QqArgs),
    /// Extreme-quantile estimates at a target level per k.
    Quantile(QuantileArgs),
    /// Right-endpoint estimates per k.
    Endpoint(EndpointArgs),
    /// Seeded Monte Carlo study; config file, flags, or the 9-cell reference grid.
    Simulate(SimulateArgs),
}

/// Where the observations come from: a data file or a synthetic model.
#[derive(Args)]
struct InputArgs {
    /// Data file (one value per line, or delimited with --column).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Column to read from a delimited file: header name or 0-based index.
    #[arg(long, value_name = "NAME|IDX")]
    column: Option<String>,
    /// Field delimiter for --column.
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Keep only values >= this threshold.
    #[arg(long, value_name = "X")]
    min_threshold: Option<f64>,
    /// Synthetic model spec, e.g. 'trunc(pareto(alpha=2),Tq=0.9)'.
    #[arg(long, value_name = "SPEC", conflicts_with = "input")]
    model: Option<String>,
    /// Sample size for --model.
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    /// RNG seed for --model sampling.
    #[arg(long, value_name = "U64", default_value_t = 1)]
    seed: u64,
    /// Use the noise-free quantile grid of --model instead of sampling.
    #[arg(long)]
    grid: bool,
}

#[derive(Args)]
struct RangeArgs {
    /// Single k (top order statistics used).
    #[arg(long, value_name = "K", conflicts_with = "k_range")]
    k: Option<usize>,
    /// k range lo:hi[:step]; default 1:n-1.
    #[arg(long, value_name = "LO:HI[:STEP]")]
    k_range: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Quantile level for the q_* columns.
    #[arg(long, default_value_t = 0.01)]
    p: f64,
    /// Extrapolate quantiles with the raw (unclamped) odds estimate.
    #[arg(long)]
    d_raw: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Test level.
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QqKindArg {
    Pareto,
    Tpa,
}

#[derive(Args)]
struct QqArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = QqKindArg::Pareto)]
    kind: QqKindArg,
    /// Smallest anchor candidate for automatic k* selection.
    #[arg(long, default_value_t = 11)]
    k_min: usize,
    /// Fix the anchor k* instead of selecting it.
    #[arg(long, value_name = "K")]
    k_star: Option<usize>,
    /// Fix the odds shift d instead of estimating it (requires --k-star).
    #[arg(long, value_name = "D", requires = "k_star")]
    d: Option<f64>,
    /// Evaluate every STRIDE-th anchor candidate.
    #[arg(long, default_value_t = 1)]
    stride: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct QuantileArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Quantile level (required).
    #[arg(long)]
    p: f64,
    /// Extrapolate with the raw (unclamped) odds estimate.
    #[arg(long)]
    d_raw: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct EndpointArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    range: RangeArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Flat key=value config file (model, n, runs, k_grid, p, seed, estimators).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Model spec override.
    #[arg(long, value_name = "SPEC")]
    model: Option<String>,
    /// Sample size override.
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    /// Replication count override.
    #[arg(long, value_name = "RUNS")]
    runs: Option<usize>,
    /// Extreme-quantile level override.
    #[arg(long, value_name = "P")]
    p: Option<f64>,
    /// Master seed override.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// k grid override: comma list or lo:hi:step.
    #[arg(long, value_name = "GRID")]
    k_grid: Option<String>,
    /// Estimator subset: 'all' or comma list.
    #[arg(long, value_name = "LIST")]
    estimators: Option<String>,
    /// Run the full 9-cell study grid (3 parents x {Tq=0.90, Tq=0.99, inf}).
    #[arg(long, alias = "paper-grid")]
    reference_grid: bool,
    #[command(flatten)]
    out: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Usage and input problems exit 2; anything unexpected exits 3.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_)
        | Error::Dataset { .. }
        | Error::ModelParse { .. }
        | Error::Config(_)
        | Error::InvalidParameter { .. }
        | Error::KOutOfRange { .. } => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Test(args) => cmd_test(args),
        Command::Qq(args) => cmd_qq(args),
        Command::Quantile(args) => cmd_quantile(args),
        Command::Endpoint(args) => cmd_endpoint(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn load_sample(input: &InputArgs) -> Result<SortedSample, Error> {
    if let Some(path) = &input.input {
        let spec = DatasetSpec {
            path: path.clone(),
            column: input.column.as_deref().map(ColumnSpec::parse),
            delimiter: input.delimiter,
            min_threshold: input.min_threshold,
        };
        return ingest::load(&spec);
    }
    let spec = input
        .model
        .as_deref()
        .ok_or_else(|| Error::Config("need --input FILE or --model SPEC".to_string()))?;
    let model: TailModel = spec.parse()?;
    let n = input
        .n
        .ok_or_else(|| Error::Config("--model requires --n".to_string()))?;
    if input.grid {
        model.quantile_grid(n)
    } else {
        model.sample(n, &mut StreamRng::new(input.seed, 0))
    }
}

fn resolve_ks(range: &RangeArgs, n: usize) -> Result<Vec<usize>, Error> {
    if let Some(k) = range.k {
        if k < 1 || k >= n {
            return Err(Error::KOutOfRange { k, n });
        }
        return Ok(vec![k]);
    }
    let ks = match &range.k_range {
        Some(spec) => trunctail::montecarlo::parse_k_grid(spec)?,
        None => (1..n).collect(),
    };
    for &k in &ks {
        if k < 1 || k >= n {
            return Err(Error::KOutOfRange { k, n });
        }
    }
    if ks.is_empty() {
        return Err(Error::Config("empty k range".to_string()));
    }
    Ok(ks)
}

/// Writes with a buffered writer to the chosen sink.
fn with_writer<F>(out: &OutputArgs, f: F) -> Result<(), Error>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    match &out.output {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn write_json<T: serde::Serialize>(out: &OutputArgs, value: &T) -> Result<(), Error> {
    with_writer(out, |w| {
        serde_json::to_writer_pretty(&mut *w, value)
            .map_err(std::io::Error::other)?;
        writeln!(w)
    })
}

fn status_string(tokens: Vec<&'static str>) -> String {
    if tokens.is_empty() {
        "ok".to_string()
    } else {
        tokens.join(";")
    }
}

fn cmd_fit(args: FitArgs) -> Result<(), Error> {
    let sample = load_sample(&args.input)?;
    let ks = resolve_ks(&args.range, sample.n())?;
    if !(args.p > 0.0 && args.p < 1.0) {
        return Err(Error::Config(format!("--p {} outside (0,1)", args.p)));
    }
    let options = estimators::FitOptions {
        tol: DEFAULT_TOL,
        use_raw_d: args.d_raw,
    };
    let fits = estimators::fit_path(&sample, &ks, args.p, &options);
    let rows: Vec<FitRow> = fits
        .iter()
        .map(|fit| {
            let mut status = Vec::new();
            if fit.status != estimators::FitStatus::Ok {
                status.push(fit.status.as_str());
            }
            let (q_mom, xi_mom, endpoint_mom) = match mom_fit(&sample, fit.k) {
                Ok(m) => (
                    mom_quantile(&sample, fit.k, args.p).ok(),
                    Some(m.xi_mom),
                    mom_endpoint(&sample, fit.k).ok(),
                ),
                Err(_) => {
                    status.push("degenerate_moments");
                    (None, None, None)
                }
            };
            FitRow {
                k: fit.k,
                hill: fit.hill,
                hill_inv: (fit.hill > 0.0).then(|| 1.0 / fit.hill),
                alpha_trunc: fit.alpha_trunc,
                d_raw: fit.d_raw,
                d_admissible: fit.d_admissible,
                tau_hat: fit.tau_hat,
                q_trunc: fit.quantile,
                q_weissman: quantile_weissman(&sample, fit.k, args.p).ok(),
                q_mom,
                xi_mom,
                endpoint_trunc: fit.endpoint,
                endpoint_mom,
                status: status_string(status),
            }
        })
        .collect();
    match args.out.format {
        Format::Csv => with_writer(&args.out, |mut w| write_fit_csv(&mut w, &rows)),
        Format::Json => write_json(&args.out, &rows),
    }
}

fn cmd_test(args: TestArgs) -> Result<(), Error> {
    let sample = load_sample(&args.input)?;
    let ks = resolve_ks(&args.range, sample.n())?;
    let rows: Vec<TestRow> = ks
        .iter()
        .map(|&k| {
            let mut status = Vec::new();
            let ta = match test_ta(&sample, k, args.level) {
                Ok(t) => Some(t),
                Err(_) => {
                    status.push("ta_failed");
                    None
                }
            };
            let tb = match test_tb(&sample, k, args.level) {
                Ok(t) => Some(t),
                Err(_) => {
                    status.push("tb_failed");
                    None
                }
            };
            TestRow {
                k,
                ta_stat: ta.map(|t| t.statistic),
                ta_p: ta.map(|t| t.p_value),
                tb_stat: tb.map(|t| t.statistic),
                tb_p: tb.map(|t| t.p_value),
                ta_reject: ta.map(|t| t.reject),
                tb_reject: tb.map(|t| t.reject),
                status: status_string(status),
            }
        })
        .collect();
    match args.out.format {
        Format::Csv => with_writer(&args.out, |mut w| write_test_csv(&mut w, &rows)),
        Format::Json => write_json(&args.out, &rows),
    }
}

fn cmd_qq(args: QqArgs) -> Result<(), Error> {
    let sample = load_sample(&args.input)?;
    let plot = match args.kind {
        QqKindArg::Pareto => pareto_qq(&sample),
        QqKindArg::Tpa => match (args.k_star, args.d) {
            (Some(k_star), Some(d)) => tpa_qq(&sample, k_star, d)?,
            (Some(k_star), None) => tpa_qq_fitted(&sample, k_star, DEFAULT_TOL)?,
            (None, _) => {
                let (k_star, _) =
                    select_k_star_stride(&sample, args.k_min, args.stride, DEFAULT_TOL)?;
                tpa_qq_fitted(&sample, k_star, DEFAULT_TOL)?
            }
        },
    };
    match args.out.format {
        Format::Csv => with_writer(&args.out, |mut w| plot.write_csv(&mut w)),
        Format::Json => write_json(&args.out, &plot),
    }
}

fn cmd_quantile(args: QuantileArgs) -> Result<(), Error> {
    let sample = load_sample(&args.input)?;
    let ks = resolve_ks(&args.range, sample.n())?;
    if !(args.p > 0.0 && args.p < 1.0) {
        return Err(Error::Config(format!("--p {} outside (0,1)", args.p)));
    }
    let rows: Vec<QuantileRow> = ks
        .iter()
        .map(|&k| {
            let mut status = Vec::new();
            let (q_trunc, q_light) = match alpha_trunc(&sample, k, DEFAULT_TOL) {
                Ok(alpha) => {
                    let d_for_q = match d_hat(&sample, k, alpha) {
                        Ok(d) if args.d_raw => d,
                        Ok(d) => d.max(0.0),
                        Err(_) => 0.0,
                    };
                    let q = match quantile_trunc(&sample, k, args.p, d_for_q, alpha) {
                        Ok(q) => Some(q),
                        Err(_) => {
                            status.push("raw_d_unusable");
                            None
                        }
                    };
                    (q, quantile_light(&sample, k, args.p, alpha).ok())
                }
                Err(Error::NoRoot { .. }) => {
                    status.push("no_root");
                    (None, None)
                }
                Err(Error::TiedExtremes { .. }) => {
                    status.push("tied_extremes");
                    (None, None)
                }
                Err(_) => {
                    status.push("solve_failed");
                    (None, None)
                }
            };
            let q_mom = match mom_quantile(&sample, k, args.p) {
                Ok(q) => Some(q),
                Err(_) => {
                    status.push("degenerate_moments");
                    None
                }
            };
            QuantileRow {
                k,
                p: args.p,
                q_trunc,
                q_light,
                q_weissman: quantile_weissman(&sample, k, args.p).ok(),
                q_mom,
                status: status_string(status),
            }
        })
        .collect();
    match args.out.format {
        Format::Csv => with_writer(&args.out, |mut w| write_quantile_csv(&mut w, &rows)),
        Format::Json => write_json(&args.out, &rows),
    }
}

fn cmd_endpoint(args: EndpointArgs) -> Result<(), Error> {
    let sample = load_sample(&args.input)?;
    let ks = resolve_ks(&args.range, sample.n())?;
    let rows: Vec<EndpointRow> = ks
        .iter()
        .map(|&k| {
            let mut status = Vec::new();
            let endpoint_trunc = match alpha_trunc(&sample, k, DEFAULT_TOL) {
                Ok(alpha) => {
                    let d0 = d_hat(&sample, k, alpha).map(|d| d.max(0.0)).unwrap_or(0.0);
                    endpoint_hat(&sample, k, d0, alpha).ok()
                }
                Err(Error::NoRoot { .. }) => {
                    status.push("no_root");
                    None
                }
                Err(Error::TiedExtremes { .. }) => {
                    status.push("tied_extremes");
                    None
                }
                Err(_) => {
                    status.push("solve_failed");
                    None
                }
            };
            let endpoint_mom = match mom_endpoint(&sample, k) {
                Ok(e) => Some(e),
                Err(_) => {
                    status.push("degenerate_moments");
                    None
                }
            };
            EndpointRow {
                k,
                endpoint_trunc,
                endpoint_mom,
                status: status_string(status),
            }
        })
        .collect();
    match args.out.format {
        Format::Csv => with_writer(&args.out, |mut w| write_endpoint_csv(&mut w, &rows)),
        Format::Json => write_json(&args.out, &rows),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Error> {
    if args.reference_grid {
        let runs = args.runs.unwrap_or(200);
        let seed = args.seed.unwrap_or(1);
        let summaries = reference_grid(seed, runs)?;
        return match args.out.format {
            Format::Csv => with_writer(&args.out, |mut w| {
                for (i, s) in summaries.iter().enumerate() {
                    s.write_csv(&mut w, i == 0)?;
                }
                Ok(())
            }),
            Format::Json => write_json(&args.out, &summaries),
        };
    }

    let mut config = match &args.config {
        Some(path) => SimConfig::from_file(path)?,
        None => {
            let spec = args
                .model
                .as_deref()
                .ok_or_else(|| Error::Config("need --config or --model".to_string()))?;
            let model: TailModel = spec.parse()?;
            let n = args
                .n
                .ok_or_else(|| Error::Config("--model requires --n".to_string()))?;
            SimConfig {
                model,
                n,
                runs: 200,
                k_grid: SimConfig::default_k_grid(n),
                p_target: 0.002,
                seed: 1,
                estimators: EstimatorSet::default(),
            }
        }
    };
    if let Some(spec) = &args.model {
        config.model = spec.parse()?;
    }
    if let Some(n) = args.n {
        config.n = n;
        if args.k_grid.is_none() && args.config.is_none() {
            config.k_grid = SimConfig::default_k_grid(n);
        }
    }
    if let Some(runs) = args.runs {
        config.runs = runs;
    }
    if let Some(p) = args.p {
        config.p_target = p;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(grid) = &args.k_grid {
        config.k_grid = trunctail::montecarlo::parse_k_grid(grid)?;
    }
    if let Some(list) = &args.estimators {
        config.estimators = EstimatorSet::parse(list)?;
    }
    config.validate()?;
    let summary = run_simulation(&config)?;
    match args.out.format {
        Format::Csv => with_writer(&args.out, |mut w| summary.write_csv(&mut w, true)),
        Format::Json => write_json(&args.out, &summary),
    }
}
