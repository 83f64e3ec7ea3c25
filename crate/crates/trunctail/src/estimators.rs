//! Point estimators for possibly upper-truncated Pareto-type tails.
//!
//! The central quantity is the truncation-adjusted tail index `alpha_trunc`,
//! the root of
//!
//! ```text
//! H = 1/alpha + r^alpha * ln(r) / (1 - r^alpha)
//! ```
//!
//! where `H` is the Hill statistic of the top `k` log-excesses and
//! `r = X_(n-k,n) / X_(n,n)` the threshold-to-maximum ratio. The left side
//! exceeds the right for every `alpha > 0` unless `H < -ln(r)/2`, so root
//! existence is decided up front and a distinct [`Error::NoRoot`] marks the
//! light-truncation boundary.
//!
//! On top of the index sit the truncation odds estimate `d_hat`, quantile
//! extrapolators (truncation-adjusted, plain power-law, and Weissman),
//! endpoint estimators, and the classical moment (MOM) baseline suite.

use crate::error::{Error, Result};
use crate::par;
use crate::sample::SortedSample;
use serde::Serialize;
use std::fmt;

/// Default residual tolerance for the tail-index solve.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_NEWTON_ITER: usize = 50;
const MAX_BISECT_ITER: usize = 200;

/// A right endpoint estimate: finite, or unbounded when no finite endpoint is
/// detected. Serialises as the string `inf` in the unbounded case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Finite(f64),
    Unbounded,
}

impl Endpoint {
    pub fn as_finite(&self) -> Option<f64> {
        match self {
            Endpoint::Finite(v) => Some(*v),
            Endpoint::Unbounded => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Endpoint::Finite(_))
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Finite(v) => write!(f, "{v}"),
            Endpoint::Unbounded => write!(f, "inf"),
        }
    }
}

impl Serialize for Endpoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Endpoint::Finite(v) => s.serialize_f64(*v),
            Endpoint::Unbounded => s.serialize_str("inf"),
        }
    }
}

// ---------------------------------------------------------------------------
// Hill statistic and threshold ratio
// ---------------------------------------------------------------------------

/// Mean log-excess of `X_(n-j+1,n)` over `X_(n-k,n)` for `j = from..=k`.
fn log_excess_mean(sample: &SortedSample, from: usize, k: usize) -> f64 {
    let log_thr = sample.threshold(k).ln();
    let mut sum = 0.0;
    for j in from..=k {
        sum += sample.from_top(j).ln() - log_thr;
    }
    sum / (k - from + 1) as f64
}

/// Hill statistic `H_(k,n)`: the mean of the top `k` log-excesses.
pub fn hill(sample: &SortedSample, k: usize) -> Result<f64> {
    sample.check_k(k)?;
    Ok(log_excess_mean(sample, 1, k))
}

/// Threshold-to-maximum ratio `R_(k,n) = X_(n-k,n) / X_(n,n)` in (0, 1].
pub fn ratio_stat(sample: &SortedSample, k: usize) -> Result<f64> {
    sample.check_k(k)?;
    Ok(sample.threshold(k) / sample.max())
}

// ---------------------------------------------------------------------------
// Tail-index solve
// ---------------------------------------------------------------------------

/// `g(alpha) = r^alpha ln(r) / (1 - r^alpha)` and the Newton denominator
/// `1 - alpha^2 r^alpha ln^2(r) / (1 - r^alpha)^2`, computed through `expm1`
/// so the `r^alpha -> 1` regime stays accurate.
#[inline]
fn eq_terms(alpha: f64, log_r: f64) -> (f64, f64) {
    let t = alpha * log_r; // < 0
    let et = t.exp();
    let em = t.exp_m1(); // e^t - 1 = -(1 - r^alpha)
    let g = log_r * et / (-em);
    let denom = 1.0 - t * t * et / (em * em);
    (g, denom)
}

/// Residual of the defining equation at `alpha`, decreasing in `alpha`.
#[inline]
fn residual(alpha: f64, log_r: f64, h: f64) -> f64 {
    let (g, _) = eq_terms(alpha, log_r);
    1.0 / alpha + g - h
}

/// Solves `h = 1/alpha + r^alpha ln(r)/(1 - r^alpha)` for `alpha > 0`.
///
/// A root exists iff `h < -ln(r)/2`; otherwise [`Error::NoRoot`] signals the
/// light-truncation boundary and callers may substitute `1/h`. Newton runs in
/// the variable `1/alpha` from the initial value `h`, falling back to
/// bisection on the bracket `(1e-12, max(10/h, 1e3))` when an iterate leaves
/// the domain or the iteration budget is exhausted. The returned root has
/// residual below `tol` and is unique by monotonicity.
pub fn solve_alpha(h: f64, ratio: f64, tol: f64) -> Result<f64> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "hill",
            value: h,
            reason: "must be finite and > 0",
        });
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidParameter {
            name: "ratio",
            value: ratio,
            reason: "must lie strictly in (0, 1)",
        });
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be > 0",
        });
    }
    let log_r = ratio.ln();
    let bound = -log_r / 2.0;
    if h >= bound {
        return Err(Error::NoRoot { hill: h, bound });
    }

    // Newton in x = 1/alpha, x0 = h.
    let mut x = h;
    for _ in 0..MAX_NEWTON_ITER {
        let alpha = 1.0 / x;
        let (g, denom) = eq_terms(alpha, log_r);
        let f = h - x - g;
        if !denom.is_finite() || denom == 0.0 {
            break;
        }
        let next = x + f / denom;
        if !next.is_finite() || next <= 0.0 {
            break;
        }
        if (next - x).abs() <= tol * next.abs().max(1.0) {
            let alpha = 1.0 / next;
            if residual(alpha, log_r, h).abs() <= tol {
                return Ok(alpha);
            }
            break;
        }
        x = next;
    }

    bisect_alpha(h, log_r, tol)
}

/// Bisection on the decreasing residual; the bracket is guaranteed once the
/// existence check has passed (`residual(0+) = -ln(r)/2 - h > 0`,
/// `residual(inf) = -h < 0`).
fn bisect_alpha(h: f64, log_r: f64, tol: f64) -> Result<f64> {
    let mut lo = 1e-12;
    let mut hi = (10.0 / h).max(1e3);
    let mut expand = 0;
    while residual(hi, log_r, h) >= 0.0 {
        hi *= 10.0;
        expand += 1;
        if expand > 20 {
            return Err(Error::NonConvergence);
        }
    }
    if residual(lo, log_r, h) <= 0.0 {
        // Root sits below the numeric floor of the bracket.
        return Err(Error::NonConvergence);
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECT_ITER {
        mid = 0.5 * (lo + hi);
        let r = residual(mid, log_r, h);
        if r.abs() <= tol {
            return Ok(mid);
        }
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= f64::EPSILON * mid {
            break;
        }
    }
    if residual(mid, log_r, h).abs() <= tol {
        Ok(mid)
    } else {
        Err(Error::NonConvergence)
    }
}

/// Shared inputs of the (possibly trimmed) tail-index equation: the mean
/// log-excess over `j = r..=k` and the ratio `X_(n-k,n) / X_(n-r+1,n)`.
fn trimmed_inputs(sample: &SortedSample, r: usize, k: usize) -> Result<(f64, f64)> {
    sample.check_k(k)?;
    if r < 1 || r > k {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r as f64,
            reason: "must satisfy 1 <= r <= k",
        });
    }
    let thr = sample.threshold(k);
    let top = sample.from_top(r);
    if thr == top {
        return Err(Error::TiedExtremes { k });
    }
    Ok((log_excess_mean(sample, r, k), thr / top))
}

/// Truncation-adjusted tail index `alpha_trunc_(k,n)` from the top `k`
/// order statistics.
pub fn alpha_trunc(sample: &SortedSample, k: usize, tol: f64) -> Result<f64> {
    alpha_trunc_trimmed(sample, 1, k, tol)
}

/// Trimmed variant discarding the `r - 1` largest observations; `r = 1`
/// reduces exactly to [`alpha_trunc`]. With `r = k` the single-term mean
/// always violates the root-existence bound, so the call reports
/// [`Error::NoRoot`].
pub fn alpha_trunc_trimmed(sample: &SortedSample, r: usize, k: usize, tol: f64) -> Result<f64> {
    let (h, ratio) = trimmed_inputs(sample, r, k)?;
    solve_alpha(h, ratio, tol)
}

// ---------------------------------------------------------------------------
// Scale, odds, quantiles, endpoint
// ---------------------------------------------------------------------------

/// Conditional MLE of the lower bound:
/// `tau_hat = k^(1/alpha) X_(n-k,n) (n - (n-k) R^alpha)^(-1/alpha)`.
pub fn tau_hat(sample: &SortedSample, k: usize, alpha: f64) -> Result<f64> {
    sample.check_k(k)?;
    check_alpha(alpha)?;
    let n = sample.n() as f64;
    let thr = sample.threshold(k);
    let ra = ratio_stat(sample, k)?.powf(alpha);
    let inner = n - (n - k as f64) * ra;
    debug_assert!(inner > 0.0, "inner base must stay positive for R <= 1");
    Ok(((k as f64).ln() / alpha + thr.ln() - inner.ln() / alpha).exp())
}

/// Odds estimate
/// `d_hat = ((k+1)/(n+1)) (R^alpha - 1/(k+1)) / (1 - R^alpha)`;
/// negative values indicate no detectable truncation.
pub fn d_hat(sample: &SortedSample, k: usize, alpha: f64) -> Result<f64> {
    sample.check_k(k)?;
    check_alpha(alpha)?;
    let ra = ratio_stat(sample, k)?.powf(alpha);
    if ra == 1.0 {
        return Err(Error::TiedExtremes { k });
    }
    let kp1 = (k + 1) as f64;
    let frac = kp1 / (sample.n() + 1) as f64;
    Ok(frac * (ra - 1.0 / kp1) / (1.0 - ra))
}

/// Admissible odds estimate `max(d_hat, 0)`.
pub fn d_hat_admissible(sample: &SortedSample, k: usize, alpha: f64) -> Result<f64> {
    Ok(d_hat(sample, k, alpha)?.max(0.0))
}

/// Extrapolation kernel shared by the quantile estimators:
/// `anchor * ((d + a) / (d + p))^exponent` with `a = (k+1)/(n+1)`.
/// Routing every estimator through it makes the algebraic identities
/// (`p = a`, `d = 0`) exact in floating point.
fn extrapolate(anchor: f64, d: f64, a: f64, p: f64, exponent: f64) -> Result<f64> {
    let num = d + a;
    let den = d + p;
    if !(num > 0.0 && den > 0.0) {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "d + p and d + (k+1)/(n+1) must be positive",
        });
    }
    Ok(anchor * (num / den).powf(exponent))
}

/// Truncation-adjusted extreme quantile estimate at level `p`:
/// `ln q = ln X_(n-k,n) + (1/alpha) ln((d + (k+1)/(n+1)) / (d + p))`.
///
/// `d` is normally the admissible odds estimate; slightly negative raw values
/// are accepted as long as both shifted terms stay positive, which is the
/// smoother variant used when the tail is known to be truncated. At
/// `p = (k+1)/(n+1)` the estimate equals the threshold exactly.
pub fn quantile_trunc(sample: &SortedSample, k: usize, p: f64, d: f64, alpha: f64) -> Result<f64> {
    sample.check_k(k)?;
    check_p(p)?;
    check_alpha(alpha)?;
    if !d.is_finite() {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "must be finite",
        });
    }
    let a = (k + 1) as f64 / (sample.n() + 1) as f64;
    extrapolate(sample.threshold(k), d, a, p, 1.0 / alpha)
}

/// Power-law quantile estimate without truncation adjustment:
/// `X_(n-k,n) ((k+1)/((n+1)p))^(1/alpha)`. Identical to [`quantile_trunc`]
/// with `d = 0`.
pub fn quantile_light(sample: &SortedSample, k: usize, p: f64, alpha: f64) -> Result<f64> {
    quantile_trunc(sample, k, p, 0.0, alpha)
}

/// Weissman quantile estimate `X_(n-k,n) ((k+1)/((n+1)p))^H_(k,n)`.
pub fn quantile_weissman(sample: &SortedSample, k: usize, p: f64) -> Result<f64> {
    sample.check_k(k)?;
    check_p(p)?;
    let h = hill(sample, k)?;
    let a = (k + 1) as f64 / (sample.n() + 1) as f64;
    extrapolate(sample.threshold(k), 0.0, a, p, h)
}

/// Endpoint estimate: the `p -> 0` limit of [`quantile_trunc`], floored at
/// the sample maximum. `d = 0` (or a value whose extrapolation overflows)
/// means no finite endpoint is detected.
pub fn endpoint_hat(sample: &SortedSample, k: usize, d: f64, alpha: f64) -> Result<Endpoint> {
    sample.check_k(k)?;
    check_alpha(alpha)?;
    if !d.is_finite() || d < 0.0 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "must be finite and >= 0",
        });
    }
    if d == 0.0 {
        return Ok(Endpoint::Unbounded);
    }
    let a = (k + 1) as f64 / (sample.n() + 1) as f64;
    let raw = sample.threshold(k) * ((d + a) / d).powf(1.0 / alpha);
    if raw.is_finite() {
        Ok(Endpoint::Finite(raw.max(sample.max())))
    } else {
        Ok(Endpoint::Unbounded)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must be finite and > 0",
        });
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "must lie strictly in (0, 1)",
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Moment (MOM) baseline
// ---------------------------------------------------------------------------

/// Log-moment fit: `M^(j) = (1/k) sum_i ln^j(X_(n-i,n)/X_(n-k,n))` for
/// `i = 0..k-1`, the shape correction `xi_minus`, and the moment index
/// `xi_mom = M^(1) + xi_minus`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomFit {
    pub k: usize,
    pub m1: f64,
    pub m2: f64,
    pub xi_minus: f64,
    pub xi_mom: f64,
}

pub fn mom_fit(sample: &SortedSample, k: usize) -> Result<MomFit> {
    sample.check_k(k)?;
    let log_thr = sample.threshold(k).ln();
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for i in 0..k {
        let l = sample.from_top(i + 1).ln() - log_thr;
        m1 += l;
        m2 += l * l;
    }
    m1 /= k as f64;
    m2 /= k as f64;
    if m2 == 0.0 || m1 * m1 == m2 {
        return Err(Error::DegenerateMoments);
    }
    let xi_minus = 1.0 - 0.5 / (1.0 - m1 * m1 / m2);
    Ok(MomFit {
        k,
        m1,
        m2,
        xi_minus,
        xi_mom: m1 + xi_minus,
    })
}

/// `((k/(np))^xi - 1)/xi`, continuous through `xi = 0` where it is
/// `ln(k/(np))`.
fn pow_growth(xi: f64, log_ratio: f64) -> f64 {
    if xi == 0.0 {
        log_ratio
    } else {
        (xi * log_ratio).exp_m1() / xi
    }
}

/// Moment-based quantile estimate at level `p`.
pub fn mom_quantile(sample: &SortedSample, k: usize, p: f64) -> Result<f64> {
    check_p(p)?;
    let fit = mom_fit(sample, k)?;
    let thr = sample.threshold(k);
    let log_ratio = (k as f64 / (sample.n() as f64 * p)).ln();
    Ok(thr + thr * fit.m1 * (1.0 - fit.xi_minus) * pow_growth(fit.xi_mom, log_ratio))
}

/// Moment-based endpoint estimate, admissible (floored at the maximum);
/// `xi_mom >= 0` means no finite endpoint.
pub fn mom_endpoint(sample: &SortedSample, k: usize) -> Result<Endpoint> {
    let fit = mom_fit(sample, k)?;
    if fit.xi_mom >= 0.0 {
        return Ok(Endpoint::Unbounded);
    }
    let thr = sample.threshold(k);
    let raw = thr - thr * fit.m1 * (1.0 - fit.xi_minus) / fit.xi_mom;
    Ok(Endpoint::Finite(raw.max(sample.max())))
}

// ---------------------------------------------------------------------------
// Per-k driver
// ---------------------------------------------------------------------------

/// Outcome marker for one `k` in a fit path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitStatus {
    Ok,
    NoRoot,
    TiedExtremes,
    /// The requested raw `d` made the quantile extrapolation undefined; all
    /// other fields are still filled in.
    RawDUnusable,
    /// Any other per-k solve failure.
    SolveFailed,
}

impl FitStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            FitStatus::Ok => "ok",
            FitStatus::NoRoot => "no_root",
            FitStatus::TiedExtremes => "tied_extremes",
            FitStatus::RawDUnusable => "raw_d_unusable",
            FitStatus::SolveFailed => "solve_failed",
        }
    }
}

/// Estimation bundle at one `k`. Fields that depend on a failed tail-index
/// solve stay `None`; `status` says why.
#[derive(Debug, Clone, Serialize)]
pub struct TailFit {
    pub k: usize,
    pub hill: f64,
    pub ratio: f64,
    pub status: FitStatus,
    pub alpha_trunc: Option<f64>,
    pub d_raw: Option<f64>,
    pub d_admissible: Option<f64>,
    pub tau_hat: Option<f64>,
    /// Quantile at the requested level, using the admissible `d` by default
    /// or the raw `d` when [`FitOptions::use_raw_d`] is set.
    pub quantile: Option<f64>,
    /// Endpoint from the admissible `d` (a raw negative `d` has no endpoint
    /// reading).
    pub endpoint: Option<Endpoint>,
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub tol: f64,
    /// Extrapolate quantiles with the raw `d_hat` instead of the admissible
    /// clamp; smoother under known truncation, undefined when the raw value
    /// drops too low.
    pub use_raw_d: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            tol: DEFAULT_TOL,
            use_raw_d: false,
        }
    }
}

/// Evaluates the full estimation bundle at every `k` in `ks`. Per-k failures
/// are recorded in the output rather than aborting the path; results do not
/// depend on evaluation order.
pub fn fit_path(sample: &SortedSample, ks: &[usize], p: f64, options: &FitOptions) -> Vec<TailFit> {
    par::map_indexed(ks.len(), |i| fit_at(sample, ks[i], p, options))
}

fn fit_at(sample: &SortedSample, k: usize, p: f64, options: &FitOptions) -> TailFit {
    let hill_v = hill(sample, k).unwrap_or(f64::NAN);
    let ratio_v = ratio_stat(sample, k).unwrap_or(f64::NAN);
    let mut fit = TailFit {
        k,
        hill: hill_v,
        ratio: ratio_v,
        status: FitStatus::Ok,
        alpha_trunc: None,
        d_raw: None,
        d_admissible: None,
        tau_hat: None,
        quantile: None,
        endpoint: None,
    };
    let alpha = match alpha_trunc(sample, k, options.tol) {
        Ok(a) => a,
        Err(Error::NoRoot { .. }) => {
            fit.status = FitStatus::NoRoot;
            return fit;
        }
        Err(Error::TiedExtremes { .. }) => {
            fit.status = FitStatus::TiedExtremes;
            return fit;
        }
        Err(_) => {
            fit.status = FitStatus::SolveFailed;
            return fit;
        }
    };
    fit.alpha_trunc = Some(alpha);
    let d_raw = d_hat(sample, k, alpha).expect("solve succeeded, so extremes are not tied");
    let d0 = d_raw.max(0.0);
    fit.d_raw = Some(d_raw);
    fit.d_admissible = Some(d0);
    fit.tau_hat = tau_hat(sample, k, alpha).ok();
    fit.endpoint = endpoint_hat(sample, k, d0, alpha).ok();
    let d_for_quantile = if options.use_raw_d { d_raw } else { d0 };
    match quantile_trunc(sample, k, p, d_for_quantile, alpha) {
        Ok(q) => fit.quantile = Some(q),
        Err(_) => fit.status = FitStatus::RawDUnusable,
    }
    fit
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn s(values: &[f64]) -> SortedSample {
        SortedSample::new(values.to_vec()).unwrap()
    }

    #[test]
    fn hill_hand_values() {
        let sample = s(&[1.0, E, E * E]);
        assert!((hill(&sample, 2).unwrap() - 1.5).abs() < 1e-12);
        let two = s(&[1.0, 2.0]);
        assert!((hill(&two, 1).unwrap() - 2f64.ln()).abs() < 1e-15);
        let tied = s(&[1.0, 5.0, 5.0, 5.0]);
        assert_eq!(hill(&tied, 2).unwrap(), 0.0);
        assert!(hill(&sample, 0).is_err());
        assert!(hill(&sample, 3).is_err());
    }

    #[test]
    fn ratio_hand_values() {
        assert_eq!(ratio_stat(&s(&[1.0, 2.0, 4.0]), 2).unwrap(), 0.25);
        assert_eq!(ratio_stat(&s(&[1.0, 10.0, 100.0]), 1).unwrap(), 0.1);
        assert_eq!(ratio_stat(&s(&[1.0, 3.0, 3.0]), 1).unwrap(), 1.0);
    }

    #[test]
    fn solve_alpha_unit_root() {
        // At alpha = 1, r = 1/2 the right side is 1 - ln 2.
        let h = 1.0 - 2f64.ln();
        let a = solve_alpha(h, 0.5, 1e-12).unwrap();
        assert!((a - 1.0).abs() < 1e-9, "alpha = {a}");
    }

    #[test]
    fn solve_alpha_degenerates_to_inverse_hill() {
        let a = solve_alpha(0.5, 1e-12, 1e-12).unwrap();
        assert!((a - 2.0).abs() < 1e-6, "alpha = {a}");
    }

    #[test]
    fn solve_alpha_no_root_at_boundary() {
        // -ln(0.5)/2 = 0.3466 <= 0.5.
        match solve_alpha(0.5, 0.5, 1e-12) {
            Err(Error::NoRoot { .. }) => {}
            other => panic!("expected NoRoot, got {other:?}"),
        }
        assert!(solve_alpha(-(0.5f64.ln()) / 2.0, 0.5, 1e-12).is_err());
    }

    #[test]
    fn solve_alpha_residual_contract() {
        // Scan a spread of (h, r) pairs with roots and check the residual.
        for &r in &[0.05, 0.3, 0.6, 0.9, 0.99] {
            let bound = -f64::ln(r) / 2.0;
            for frac in [0.1, 0.5, 0.9] {
                let h = bound * frac;
                let a = solve_alpha(h, r, 1e-12).unwrap();
                let res = residual(a, r.ln(), h).abs();
                assert!(res <= 1e-12, "h={h} r={r}: residual {res}");
            }
        }
    }

    #[test]
    fn solve_alpha_rejects_bad_inputs() {
        assert!(solve_alpha(0.0, 0.5, 1e-12).is_err());
        assert!(solve_alpha(0.5, 1.0, 1e-12).is_err());
        assert!(solve_alpha(0.5, 0.0, 1e-12).is_err());
        assert!(solve_alpha(0.5, 0.3, 0.0).is_err());
    }

    #[test]
    fn trimmed_reduces_to_untrimmed_at_r1() {
        let sample = s(&[1.0, 1.7, 2.9, 3.4, 3.8, 3.95, 4.0]);
        for k in 2..=6 {
            let full = alpha_trunc(&sample, k, 1e-12);
            let trim = alpha_trunc_trimmed(&sample, 1, k, 1e-12);
            match (full, trim) {
                (Ok(a), Ok(b)) => assert_eq!(a, b, "k={k}"),
                (Err(_), Err(_)) => {}
                other => panic!("mismatch at k={k}: {other:?}"),
            }
        }
    }

    #[test]
    fn trimmed_geometric_sample_has_no_root() {
        // {1,2,4,8,16} with r=2, k=4: mean log-excess 2 ln 2 sits above the
        // existence bound (3/2) ln 2 for ratio 1/8, so no root exists. An
        // independent scan of the decreasing residual confirms no sign change.
        let sample = s(&[1.0, 2.0, 4.0, 8.0, 16.0]);
        let h = (2f64.ln() + 4f64.ln() + 8f64.ln()) / 3.0;
        assert!((h - 2.0 * 2f64.ln()).abs() < 1e-14);
        match alpha_trunc_trimmed(&sample, 2, 4, 1e-12) {
            Err(Error::NoRoot { .. }) => {}
            other => panic!("expected NoRoot, got {other:?}"),
        }
        let log_r = (1f64 / 8.0).ln();
        let mut alpha = 1e-6;
        while alpha < 1e3 {
            assert!(residual(alpha, log_r, h) < 0.0, "sign change at {alpha}");
            alpha *= 1.5;
        }
    }

    /// Noise-free grid from a heavily truncated Pareto: the top is compressed
    /// enough that the tail-index equation has a root at moderate k.
    fn truncated_grid(n: usize) -> SortedSample {
        use crate::models::TailModel;
        let model: TailModel = "trunc(pareto(alpha=1),Tq=0.9)".parse().unwrap();
        model.quantile_grid(n).unwrap()
    }

    #[test]
    fn trimmed_root_matches_bisection_oracle() {
        // A compressed top (rough-truncation shape) gives the trimmed
        // equation a genuine root; verify against a plain bisection scan.
        let sample = truncated_grid(60);
        let (r, k) = (2, 30);
        let got = alpha_trunc_trimmed(&sample, r, k, 1e-12).unwrap();

        let thr = sample.threshold(k);
        let top = sample.from_top(r);
        let h = (r..=k)
            .map(|j| (sample.from_top(j) / thr).ln())
            .sum::<f64>()
            / (k - r + 1) as f64;
        let log_r = (thr / top).ln();
        let (mut lo, mut hi) = (1e-9, 1e4);
        assert!(residual(lo, log_r, h) > 0.0 && residual(hi, log_r, h) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if residual(mid, log_r, h) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!(
            (got - oracle).abs() <= 1e-9 * oracle,
            "solver {got} vs oracle {oracle}"
        );
    }

    #[test]
    fn trimmed_single_term_reports_no_root() {
        let sample = s(&[1.0, 2.0, 4.0, 8.0]);
        match alpha_trunc_trimmed(&sample, 3, 3, 1e-12) {
            Err(Error::NoRoot { .. }) => {}
            other => panic!("expected NoRoot at r=k, got {other:?}"),
        }
    }

    #[test]
    fn tied_extremes_detected() {
        let sample = s(&[1.0, 2.0, 5.0, 5.0]);
        match alpha_trunc(&sample, 1, 1e-12) {
            Err(Error::TiedExtremes { .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tau_hat_hand_value() {
        // n=4, k=2, X_(n-k)=2, X_(n)=4, alpha=1: 2*2/(4-2*0.5) = 4/3.
        let sample = s(&[1.0, 2.0, 3.0, 4.0]);
        let t = tau_hat(&sample, 2, 1.0).unwrap();
        assert!((t - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tau_hat_small_ratio_limit() {
        // R^alpha -> 0 collapses tau_hat to (k/n)^(1/alpha) X_(n-k,n).
        let sample = s(&[1.0, 2.0, 3.0, 1e12]);
        let alpha = 3.0;
        let t = tau_hat(&sample, 1, alpha).unwrap();
        let want = (1f64 / 4.0).powf(1.0 / alpha) * 3.0;
        assert!((t - want).abs() < 1e-9 * want);
    }

    #[test]
    fn d_hat_hand_value() {
        // k=9, n=99, R=0.5, alpha=1 -> 0.1*(0.5-0.1)/0.5 = 0.08.
        let sample = direct_sample_for_d();
        let d = d_hat(&sample, 9, 1.0).unwrap();
        assert!((d - 0.08).abs() < 1e-12, "d = {d}");
        assert!((d_hat_admissible(&sample, 9, 1.0).unwrap() - 0.08).abs() < 1e-12);
    }

    /// n = 99 sample whose threshold at k = 9 is half the maximum.
    fn direct_sample_for_d() -> SortedSample {
        let mut values: Vec<f64> = (1..=89).map(|i| 1.0 + i as f64 / 100.0).collect();
        values.push(5.0); // X_(90,99) = threshold at k = 9
        values.extend((1..=8).map(|i| 5.0 + i as f64 / 10.0));
        values.push(10.0); // maximum
        let s = SortedSample::new(values).unwrap();
        assert_eq!(s.n(), 99);
        assert_eq!(s.threshold(9), 5.0);
        assert_eq!(s.max(), 10.0);
        s
    }

    #[test]
    fn d_hat_sign_cases() {
        let sample = direct_sample_for_d();
        // R^alpha = 1/(k+1) exactly: alpha = ln(10)/ln(2) makes 0.5^a = 0.1.
        let alpha = 10f64.ln() / 2f64.ln();
        let d = d_hat(&sample, 9, alpha).unwrap();
        assert!(d.abs() < 1e-15, "d = {d}");
        // Larger alpha pushes R^alpha below 1/(k+1): negative, clamped to 0.
        let d_neg = d_hat(&sample, 9, alpha + 1.0).unwrap();
        assert!(d_neg < 0.0);
        assert_eq!(d_hat_admissible(&sample, 9, alpha + 1.0).unwrap(), 0.0);
    }

    #[test]
    fn quantile_trunc_hand_value() {
        let sample = direct_sample_for_d();
        // (d + 0.1)/(d + 0.01) = 0.18/0.09 = 2 at d = 0.08, alpha = 1,
        // anchored at the threshold 5.
        let q = quantile_trunc(&sample, 9, 0.01, 0.08, 1.0).unwrap();
        assert!((q - 10.0).abs() < 1e-12, "q = {q}");
    }

    #[test]
    fn quantile_identity_at_design_level() {
        let sample = direct_sample_for_d();
        let p = 10.0 / 100.0; // (k+1)/(n+1)
        for &d in &[0.0, 0.05, 0.3, 2.0] {
            let q = quantile_trunc(&sample, 9, p, d, 1.7).unwrap();
            assert_eq!(q, sample.threshold(9));
        }
    }

    #[test]
    fn quantile_light_equals_trunc_at_zero_d() {
        let sample = direct_sample_for_d();
        let a = quantile_trunc(&sample, 9, 0.001, 0.0, 2.0).unwrap();
        let b = quantile_light(&sample, 9, 0.001, 2.0).unwrap();
        assert_eq!(a, b);
        // Hand value: 5 * (0.1/0.001)^(1/2) = 50.
        assert!((b - 50.0).abs() < 1e-12);
    }

    #[test]
    fn weissman_hand_values() {
        let sample = direct_sample_for_d();
        // Exponent H of this sample at k=9 is whatever it is; check the
        // identity p = (k+1)/(n+1) first.
        let q = quantile_weissman(&sample, 9, 0.1).unwrap();
        assert_eq!(q, sample.threshold(9));
        // Against quantile_light with alpha = 1/H.
        let h = hill(&sample, 9).unwrap();
        let a = quantile_light(&sample, 9, 0.004, 1.0 / h).unwrap();
        let b = quantile_weissman(&sample, 9, 0.004).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn weissman_hand_value_at_known_hill() {
        // Threshold 10 with the top 9 values all at 10 e^0.5 gives H = 0.5
        // exactly; at k=9, n=99, p=0.01 the estimate is 10 * 10^0.5.
        let mut values: Vec<f64> = (1..=90).map(|i| 10.0 * i as f64 / 90.0).collect();
        values.extend(std::iter::repeat(10.0 * 0.5f64.exp()).take(9));
        let sample = SortedSample::new(values).unwrap();
        assert_eq!(sample.n(), 99);
        assert_eq!(sample.threshold(9), 10.0);
        assert!((hill(&sample, 9).unwrap() - 0.5).abs() < 1e-15);
        let q = quantile_weissman(&sample, 9, 0.01).unwrap();
        assert!((q - 31.6227766016838).abs() < 1e-10, "q = {q}");
    }

    #[test]
    fn weissman_flat_tail() {
        let tied = s(&[1.0, 1.0, 1.0, 7.0, 7.0, 7.0, 7.0]);
        // Top k+1 all equal -> H = 0 -> estimate equals the threshold.
        let q = quantile_weissman(&tied, 3, 0.01).unwrap();
        assert_eq!(q, 7.0);
    }

    #[test]
    fn endpoint_hand_values() {
        let sample = direct_sample_for_d();
        // threshold 5, d = 0.08: 5 * (0.18/0.08) = 11.25 > max 10.
        let e = endpoint_hat(&sample, 9, 0.08, 1.0).unwrap();
        assert_eq!(e, Endpoint::Finite(11.25));
        assert_eq!(
            endpoint_hat(&sample, 9, 0.0, 1.0).unwrap(),
            Endpoint::Unbounded
        );
        // Huge d drives the raw value to the threshold ~5 < max -> clamps.
        let e = endpoint_hat(&sample, 9, 1e12, 1.0).unwrap();
        assert_eq!(e, Endpoint::Finite(10.0));
        assert!(endpoint_hat(&sample, 9, -0.1, 1.0).is_err());
    }

    #[test]
    fn mom_hand_values() {
        let sample = s(&[1.0, E, E * E]);
        let fit = mom_fit(&sample, 2).unwrap();
        assert!((fit.m1 - 1.5).abs() < 1e-12);
        assert!((fit.m2 - 2.5).abs() < 1e-12);
        assert!((fit.xi_minus + 4.0).abs() < 1e-10);
        assert!((fit.xi_mom + 2.5).abs() < 1e-10);

        let q = mom_quantile(&sample, 2, 0.1).unwrap();
        assert!((q - 3.9738573624131).abs() < 1e-6, "q = {q}");

        let e = mom_endpoint(&sample, 2).unwrap();
        assert_eq!(e, Endpoint::Finite(E * E));
    }

    #[test]
    fn mom_degenerate_cases() {
        let tied = s(&[1.0, 3.0, 3.0, 3.0]);
        assert!(matches!(
            mom_fit(&tied, 2),
            Err(Error::DegenerateMoments)
        ));
    }

    #[test]
    fn mom_quantile_identity_and_limit() {
        let sample = direct_sample_for_d();
        // k/(np) = 1 -> estimate equals the threshold exactly.
        let k = 9;
        let p = k as f64 / sample.n() as f64;
        let q = mom_quantile(&sample, k, p).unwrap();
        assert_eq!(q, sample.threshold(k));
        // xi -> 0 path is continuous.
        let lr = 2.0f64.ln();
        let up = pow_growth(1e-8, lr);
        let down = pow_growth(-1e-8, lr);
        let at0 = pow_growth(0.0, lr);
        assert!((up - at0).abs() < 1e-6 * at0.abs());
        assert!((down - at0).abs() < 1e-6 * at0.abs());
    }

    #[test]
    fn mom_endpoint_unbounded_when_xi_nonnegative() {
        // A heavy, spread-out tail gives xi_mom > 0.
        let sample = s(&[1.0, 2.0, 4.0, 9.0, 30.0, 200.0, 5000.0]);
        let fit = mom_fit(&sample, 5).unwrap();
        assert!(fit.xi_mom > 0.0);
        assert_eq!(mom_endpoint(&sample, 5).unwrap(), Endpoint::Unbounded);
    }

    #[test]
    fn mom_endpoint_clamps_to_max() {
        let sample = s(&[1.0, E, E * E]);
        // Hand case: raw endpoint 4 < e^2, so the maximum wins.
        match mom_endpoint(&sample, 2).unwrap() {
            Endpoint::Finite(v) => assert!(v >= sample.max()),
            Endpoint::Unbounded => panic!("expected finite"),
        }
    }

    #[test]
    fn moment_inequality_holds() {
        let sample = s(&[1.0, 1.4, 2.0, 3.7, 9.9, 27.0]);
        for k in 1..=5 {
            if let Ok(fit) = mom_fit(&sample, k) {
                assert!(fit.m2 >= fit.m1 * fit.m1 - 1e-12, "k={k}");
            }
        }
    }

    #[test]
    fn fit_path_covers_failures_and_order() {
        let sample = truncated_grid(9);
        let ks: Vec<usize> = (1..=8).collect();
        let fits = fit_path(&sample, &ks, 0.01, &FitOptions::default());
        assert_eq!(fits.len(), 8);
        for (fit, &k) in fits.iter().zip(&ks) {
            assert_eq!(fit.k, k);
            match fit.status {
                FitStatus::Ok => {
                    let alpha = fit.alpha_trunc.unwrap();
                    assert_eq!(
                        alpha,
                        alpha_trunc(&sample, k, DEFAULT_TOL).unwrap(),
                        "k={k}"
                    );
                    assert_eq!(fit.d_admissible.unwrap(), fit.d_raw.unwrap().max(0.0));
                    if let Some(Endpoint::Finite(t)) = fit.endpoint {
                        assert!(t >= sample.max());
                    }
                }
                _ => assert!(fit.alpha_trunc.is_none()),
            }
        }
    }

    #[test]
    fn fit_path_single_k_matches_direct_calls() {
        let sample = truncated_grid(60);
        let fits = fit_path(&sample, &[30], 0.05, &FitOptions::default());
        let fit = &fits[0];
        assert_eq!(fit.hill, hill(&sample, 30).unwrap());
        assert_eq!(fit.ratio, ratio_stat(&sample, 30).unwrap());
        let alpha = fit.alpha_trunc.unwrap();
        let d0 = d_hat_admissible(&sample, 30, alpha).unwrap();
        assert_eq!(
            fit.quantile.unwrap(),
            quantile_trunc(&sample, 30, 0.05, d0, alpha).unwrap()
        );
    }
}
