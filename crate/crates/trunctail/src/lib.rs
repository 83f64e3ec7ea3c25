//! Tail fitting for heavy-tailed data that may be truncated at an unknown
//! high point.
//!
//! The crate estimates the Pareto tail index, the odds of truncated-away
//! mass, extreme quantiles, and the right endpoint for samples whose top
//! order statistics follow a (possibly upper-truncated) power law. It also
//! provides two formal tests for deciding between an unbounded tail and
//! light versus rough truncation, QQ-plot diagnostics with automatic anchor
//! selection, and a deterministic Monte Carlo harness for calibration
//! studies.
//!
//! Entry points:
//!
//! * [`SortedSample`] holds ascending positive observations; build it from a
//!   vector, from a file via [`ingest`], or by sampling a [`TailModel`].
//! * [`estimators`] has the per-`k` point estimators and the
//!   [`estimators::fit_path`] driver.
//! * [`truncation_tests`] has the `T_A`/`T_B` tests and asymptotic reference
//!   functions.
//! * [`qq`] builds Pareto and truncated-Pareto QQ-plot data.
//! * [`montecarlo`] runs seeded simulation studies with schedule-independent
//!   output.
//!
//! With the default `parallel` feature, per-`k` paths, anchor selection, and
//! Monte Carlo replications fan out over rayon; disabling it yields a fully
//! sequential build with bit-identical results.
//!
//! ```
//! use trunctail::{StreamRng, TailModel};
//! use trunctail::estimators::{alpha_trunc, d_hat_admissible, quantile_trunc, DEFAULT_TOL};
//!
//! let model: TailModel = "trunc(pareto(alpha=2),Tq=0.9)".parse()?;
//! let sample = model.sample(400, &mut StreamRng::new(42, 0))?;
//! let k = 200;
//! let alpha = alpha_trunc(&sample, k, DEFAULT_TOL)?;
//! let d = d_hat_admissible(&sample, k, alpha)?;
//! let q = quantile_trunc(&sample, k, 0.002, d, alpha)?;
//! assert!(alpha > 0.0 && q >= sample.threshold(k));
//! # Ok::<(), trunctail::Error>(())
//! ```

pub mod error;
pub mod estimators;
pub mod ingest;
pub mod models;
pub mod montecarlo;
pub mod normal;
mod par;
pub mod qq;
pub mod rng;
pub mod sample;

pub use error::{Error, Result};
pub use estimators::{Endpoint, FitOptions, FitStatus, MomFit, TailFit, DEFAULT_TOL};
pub use models::{BaseModel, Burr, Pareto, TailModel, TruncationSpec};
pub use montecarlo::{SimConfig, SimSummary};
pub use rng::StreamRng;
pub use sample::SortedSample;
pub use truncation_tests::{TestName, TestOutcome};
