//! QQ-plot data for Pareto and truncated-Pareto fits.
//!
//! The plain Pareto plot pairs `(ln X_(n-j+1,n), ln(j/n))`; the truncated
//! variant shifts the theoretical coordinate by an odds estimate `d`,
//! pairing `(ln X_(n-j+1,n), ln(d + j/n))`, which is exactly the plain plot
//! when `d = 0`. The anchor count `k*` is chosen to maximise the magnitude of
//! the (inherently negative) Pearson correlation over the top `k*` points,
//! recomputing `d` per candidate.

use crate::error::{Error, Result};
use crate::estimators::{alpha_trunc, d_hat_admissible};
use crate::par;
use crate::sample::SortedSample;
use serde::Serialize;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QQKind {
    Pareto,
    TruncatedPareto,
}

impl QQKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            QQKind::Pareto => "pareto",
            QQKind::TruncatedPareto => "tpa",
        }
    }
}

/// QQ-plot point set, ordered by `j = 1..n` (largest observation first).
#[derive(Debug, Clone, Serialize)]
pub struct QQPlot {
    pub points: Vec<(f64, f64)>,
    pub kind: QQKind,
    pub d_used: f64,
    pub k_star: Option<usize>,
    /// Pearson correlation over the top `k_star` points; `None` when it is
    /// undefined (constant coordinates) or no anchor was requested.
    pub correlation: Option<f64>,
}

impl QQPlot {
    /// Two-column CSV with a comment header carrying the metadata.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(
            w,
            "# kind={} k_star={} d_used={} correlation={}",
            self.kind.as_str(),
            self.k_star.map_or("na".to_string(), |k| k.to_string()),
            self.d_used,
            self.correlation
                .map_or("na".to_string(), |c| c.to_string()),
        )?;
        writeln!(w, "x,y")?;
        for (x, y) in &self.points {
            writeln!(w, "{x},{y}")?;
        }
        Ok(())
    }
}

fn plot_points(sample: &SortedSample, d: f64) -> Vec<(f64, f64)> {
    let n = sample.n();
    (1..=n)
        .map(|j| {
            (
                sample.from_top(j).ln(),
                (d + j as f64 / n as f64).ln(),
            )
        })
        .collect()
}

/// Classical Pareto QQ-plot (log-log plot): `(ln X_(n-j+1,n), ln(j/n))`.
pub fn pareto_qq(sample: &SortedSample) -> QQPlot {
    QQPlot {
        points: plot_points(sample, 0.0),
        kind: QQKind::Pareto,
        d_used: 0.0,
        k_star: None,
        correlation: None,
    }
}

/// Truncated-Pareto QQ-plot at a given odds value `d` (normally the
/// admissible estimate at `k_star`); the correlation over the top `k_star`
/// points is recorded on the plot.
pub fn tpa_qq(sample: &SortedSample, k_star: usize, d: f64) -> Result<QQPlot> {
    sample.check_k(k_star)?;
    if !d.is_finite() || d < 0.0 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "must be finite and >= 0",
        });
    }
    let points = plot_points(sample, d);
    let correlation = pearson_top(&points, k_star);
    Ok(QQPlot {
        points,
        kind: QQKind::TruncatedPareto,
        d_used: d,
        k_star: Some(k_star),
        correlation,
    })
}

/// Convenience form of [`tpa_qq`] that fits `alpha` and the admissible odds
/// at `k_star` before building the plot.
pub fn tpa_qq_fitted(sample: &SortedSample, k_star: usize, tol: f64) -> Result<QQPlot> {
    let alpha = alpha_trunc(sample, k_star, tol)?;
    let d = d_hat_admissible(sample, k_star, alpha)?;
    tpa_qq(sample, k_star, d)
}

/// Pearson correlation of the first `k` plot points; `None` if either
/// coordinate is constant.
fn pearson_top(points: &[(f64, f64)], k: usize) -> Option<f64> {
    if k < 2 || k > points.len() {
        return None;
    }
    let k_f = k as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &(x, y) in &points[..k] {
        sx += x;
        sy += y;
    }
    let (mx, my) = (sx / k_f, sy / k_f);
    let (mut cxy, mut cxx, mut cyy) = (0.0, 0.0, 0.0);
    for &(x, y) in &points[..k] {
        let (dx, dy) = (x - mx, y - my);
        cxy += dx * dy;
        cxx += dx * dx;
        cyy += dy * dy;
    }
    if cxx == 0.0 || cyy == 0.0 {
        return None;
    }
    Some(cxy / (cxx * cyy).sqrt())
}

/// Chooses the anchor `k*` in `[k_min, n-1]` maximising `|correlation|` of
/// the truncated-Pareto plot over its top `k*` points, with the odds estimate
/// recomputed at each candidate. Ties break to the smallest `k*`; candidates
/// whose tail-index solve fails are skipped.
pub fn select_k_star(sample: &SortedSample, k_min: usize, tol: f64) -> Result<(usize, f64)> {
    select_k_star_stride(sample, k_min, 1, tol)
}

/// [`select_k_star`] over the subsampled candidate set
/// `k_min, k_min + stride, ...`; `stride > 1` trades optimality for speed on
/// large samples.
pub fn select_k_star_stride(
    sample: &SortedSample,
    k_min: usize,
    stride: usize,
    tol: f64,
) -> Result<(usize, f64)> {
    if k_min < 11 {
        return Err(Error::InvalidParameter {
            name: "k_min",
            value: k_min as f64,
            reason: "must be >= 11",
        });
    }
    if stride == 0 {
        return Err(Error::InvalidParameter {
            name: "stride",
            value: 0.0,
            reason: "must be >= 1",
        });
    }
    let n = sample.n();
    if k_min >= n {
        return Err(Error::KOutOfRange { k: k_min, n });
    }
    let candidates: Vec<usize> = (k_min..n).step_by(stride).collect();
    let scored = par::map_indexed(candidates.len(), |i| {
        let k = candidates[i];
        let alpha = alpha_trunc(sample, k, tol).ok()?;
        let d = d_hat_admissible(sample, k, alpha).ok()?;
        let xs: Vec<(f64, f64)> = (1..=k)
            .map(|j| {
                (
                    sample.from_top(j).ln(),
                    (d + j as f64 / n as f64).ln(),
                )
            })
            .collect();
        pearson_top(&xs, k).map(|c| (k, c))
    });
    let mut best: Option<(usize, f64)> = None;
    for entry in scored.into_iter().flatten() {
        match best {
            // Strict improvement only, so earlier (smaller) k wins ties.
            Some((_, c)) if entry.1.abs() <= c.abs() => {}
            _ => best = Some(entry),
        }
    }
    best.ok_or(Error::NoCandidate)
}
