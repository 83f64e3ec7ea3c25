//! Generative tail models: Pareto, Burr, and their upper-truncated versions.
//!
//! Every model exposes an exact CDF, an upper quantile `Q(1-p)` (the value
//! carrying right-tail mass `p`), an inverse-transform sampler, and the true
//! truncation odds `D_T = Fbar_W(T) / F_W(T)` of the parent mass cut away at
//! the truncation point. Truncated models are parameterised either by a raw
//! point `T` or by the parent quantile level it sits at (`Tq`), the form used
//! in simulation configs.

use crate::error::{Error, Result};
use crate::rng::StreamRng;
use crate::sample::SortedSample;
use std::fmt;
use std::str::FromStr;

/// Pareto with tail index `alpha` and lower bound `tau`:
/// `Fbar(x) = (tau/x)^alpha` for `x >= tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pareto {
    alpha: f64,
    tau: f64,
}

impl Pareto {
    pub fn new(alpha: f64, tau: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("tau", tau)?;
        Ok(Pareto { alpha, tau })
    }

    /// Standard form with `tau = 1`.
    pub fn standard(alpha: f64) -> Result<Self> {
        Pareto::new(alpha, 1.0)
    }
}

/// Burr with tail index `alpha` and second-order parameter `rho < 0`:
/// `Fbar(x) = (1 + x^(-rho*alpha))^(1/rho)` for `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Burr {
    alpha: f64,
    rho: f64,
}

impl Burr {
    pub fn new(alpha: f64, rho: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        if !rho.is_finite() || rho >= 0.0 {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: rho,
                reason: "must be finite and < 0",
            });
        }
        Ok(Burr { alpha, rho })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        });
    }
    Ok(())
}

/// Untruncated parent distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseModel {
    Pareto(Pareto),
    Burr(Burr),
}

impl BaseModel {
    pub fn alpha(&self) -> f64 {
        match self {
            BaseModel::Pareto(p) => p.alpha,
            BaseModel::Burr(b) => b.alpha,
        }
    }

    /// Infimum of the support (closed for Pareto at `tau`, open for Burr at 0).
    pub fn lower_bound(&self) -> f64 {
        match self {
            BaseModel::Pareto(p) => p.tau,
            BaseModel::Burr(_) => 0.0,
        }
    }

    /// Right tail function `Fbar_W(x)` for `x > 0`.
    fn upper_tail(&self, x: f64) -> f64 {
        match self {
            BaseModel::Pareto(p) => {
                if x < p.tau {
                    1.0
                } else {
                    (p.tau / x).powf(p.alpha)
                }
            }
            BaseModel::Burr(b) => (1.0 + x.powf(-b.rho * b.alpha)).powf(1.0 / b.rho),
        }
    }

    /// `Q_W(1-p)`: inverts `Fbar_W` at mass `p` in (0, 1].
    fn upper_quantile(&self, p: f64) -> f64 {
        match self {
            BaseModel::Pareto(m) => m.tau * p.powf(-1.0 / m.alpha),
            BaseModel::Burr(m) => (p.powf(m.rho) - 1.0).powf(-1.0 / (m.rho * m.alpha)),
        }
    }

    fn spec_string(&self) -> String {
        match self {
            BaseModel::Pareto(p) => {
                if p.tau == 1.0 {
                    format!("pareto(alpha={})", p.alpha)
                } else {
                    format!("pareto(alpha={},tau={})", p.alpha, p.tau)
                }
            }
            BaseModel::Burr(b) => format!("burr(alpha={},rho={})", b.alpha, b.rho),
        }
    }
}

/// How a truncation point was specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationSpec {
    /// Raw point `T`.
    Point(f64),
    /// Parent quantile level: `T = Q_W(level)`, i.e. `F_W(T) = level`.
    ParentQuantile(f64),
}

/// Upper-truncated version of a base model; samples live in `(lower, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated {
    base: BaseModel,
    spec: TruncationSpec,
    t: f64,
    /// `Fbar_W(T)`, kept exact for the quantile-level form.
    parent_upper_mass: f64,
}

impl Truncated {
    pub fn new(base: BaseModel, spec: TruncationSpec) -> Result<Self> {
        let (t, parent_upper_mass) = match spec {
            TruncationSpec::Point(t) => {
                if !t.is_finite() || t <= base.lower_bound() {
                    return Err(Error::InvalidParameter {
                        name: "T",
                        value: t,
                        reason: "must be finite and above the lower support bound",
                    });
                }
                (t, base.upper_tail(t))
            }
            TruncationSpec::ParentQuantile(level) => {
                if !(level > 0.0 && level < 1.0) {
                    return Err(Error::InvalidParameter {
                        name: "Tq",
                        value: level,
                        reason: "must lie in (0, 1)",
                    });
                }
                (base.upper_quantile(1.0 - level), 1.0 - level)
            }
        };
        if !(parent_upper_mass > 0.0 && parent_upper_mass < 1.0) {
            return Err(Error::InvalidParameter {
                name: "T",
                value: t,
                reason: "parent mass F_W(T) must lie strictly in (0, 1)",
            });
        }
        Ok(Truncated {
            base,
            spec,
            t,
            parent_upper_mass,
        })
    }

    pub fn truncation_point(&self) -> f64 {
        self.t
    }

    pub fn t_spec_string(&self) -> String {
        match self.spec {
            TruncationSpec::Point(t) => format!("T={t}"),
            TruncationSpec::ParentQuantile(q) => format!("Tq={q}"),
        }
    }
}

/// A generative model: Pareto, Burr, or an upper-truncated version of either.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    Pareto(Pareto),
    Burr(Burr),
    Truncated(Truncated),
}

impl TailModel {
    pub fn truncated(base: BaseModel, spec: TruncationSpec) -> Result<Self> {
        Ok(TailModel::Truncated(Truncated::new(base, spec)?))
    }

    pub fn alpha(&self) -> f64 {
        match self {
            TailModel::Pareto(p) => p.alpha,
            TailModel::Burr(b) => b.alpha,
            TailModel::Truncated(t) => t.base.alpha(),
        }
    }

    pub fn lower_bound(&self) -> f64 {
        match self {
            TailModel::Pareto(p) => p.tau,
            TailModel::Burr(_) => 0.0,
            TailModel::Truncated(t) => t.base.lower_bound(),
        }
    }

    /// Truncation point, or `None` for unbounded models.
    pub fn truncation_point(&self) -> Option<f64> {
        match self {
            TailModel::Truncated(t) => Some(t.t),
            _ => None,
        }
    }

    /// `F_T(x)`. `x` must be positive and, for truncated models, at most `T`.
    /// Values below the lower support bound map to 0.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "x",
                value: x,
                reason: "must be finite and > 0",
            });
        }
        match self {
            TailModel::Pareto(_) | TailModel::Burr(_) => {
                let base = self.base_copy();
                Ok(1.0 - base.upper_tail(x))
            }
            TailModel::Truncated(t) => {
                if x > t.t {
                    return Err(Error::InvalidParameter {
                        name: "x",
                        value: x,
                        reason: "lies above the truncation point",
                    });
                }
                if x == t.t {
                    return Ok(1.0);
                }
                let pm = t.parent_upper_mass;
                let fbar_t = (t.base.upper_tail(x) - pm) / (1.0 - pm);
                Ok((1.0 - fbar_t).clamp(0.0, 1.0))
            }
        }
    }

    /// `Q_T(1-p)`, the value with right-tail mass `p`, for `p` in (0, 1].
    pub fn upper_quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "must lie in (0, 1]",
            });
        }
        Ok(match self {
            TailModel::Pareto(_) | TailModel::Burr(_) => self.base_copy().upper_quantile(p),
            TailModel::Truncated(t) => {
                let pm = t.parent_upper_mass;
                t.base.upper_quantile(pm + p * (1.0 - pm))
            }
        })
    }

    /// `n` inverse-transform draws, sorted ascending; deterministic for a
    /// fixed rng state. Uniform variates stay strictly inside (0, 1).
    pub fn sample(&self, n: usize, rng: &mut StreamRng) -> Result<SortedSample> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: 0.0,
                reason: "must be >= 1",
            });
        }
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            let u = rng.next_open01();
            values.push(self.upper_quantile(u)?);
        }
        SortedSample::new(values)
    }

    /// Noise-free quantile grid `X_(n-j+1,n) = Q_T(1 - j/(n+1))`, `j = 1..n`,
    /// returned ascending. Used as a consistency oracle for the estimators.
    pub fn quantile_grid(&self, n: usize) -> Result<SortedSample> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: 0.0,
                reason: "must be >= 1",
            });
        }
        let mut values = Vec::with_capacity(n);
        for j in (1..=n).rev() {
            values.push(self.upper_quantile(j as f64 / (n + 1) as f64)?);
        }
        SortedSample::new(values)
    }

    /// Odds `D_T = Fbar_W(T) / F_W(T)` of the truncated-away parent mass;
    /// 0 for non-truncated models.
    pub fn true_odds(&self) -> f64 {
        match self {
            TailModel::Truncated(t) => t.parent_upper_mass / (1.0 - t.parent_upper_mass),
            _ => 0.0,
        }
    }

    /// Spec string of the parent model (truncation stripped).
    pub fn base_spec_string(&self) -> String {
        self.base_copy().spec_string()
    }

    /// Truncation descriptor: `T=...`, `Tq=...`, or `inf`.
    pub fn t_spec_string(&self) -> String {
        match self {
            TailModel::Truncated(t) => t.t_spec_string(),
            _ => "inf".to_string(),
        }
    }

    fn base_copy(&self) -> BaseModel {
        match self {
            TailModel::Pareto(p) => BaseModel::Pareto(*p),
            TailModel::Burr(b) => BaseModel::Burr(*b),
            TailModel::Truncated(t) => t.base,
        }
    }
}

impl fmt::Display for TailModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailModel::Truncated(t) => {
                write!(f, "trunc({},{})", t.base.spec_string(), t.t_spec_string())
            }
            _ => write!(f, "{}", self.base_spec_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Model spec grammar
// ---------------------------------------------------------------------------
//
//   pareto(alpha=A[,tau=T0])
//   burr(alpha=A,rho=R)
//   trunc(<base>,T=<value>)
//   trunc(<base>,Tq=<level>)
//
// Case-insensitive; whitespace ignored.

impl FromStr for TailModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = compact.to_ascii_lowercase();
        parse_spec(&lower)
    }
}

fn parse_spec(s: &str) -> Result<TailModel> {
    let (name, body) = split_call(s)?;
    match name {
        "pareto" | "burr" => Ok(match parse_base_call(name, body)? {
            BaseModel::Pareto(p) => TailModel::Pareto(p),
            BaseModel::Burr(b) => TailModel::Burr(b),
        }),
        "trunc" => {
            let (base_str, t_str) = split_trunc_args(body)?;
            let base = match parse_spec(base_str)? {
                TailModel::Pareto(p) => BaseModel::Pareto(p),
                TailModel::Burr(b) => BaseModel::Burr(b),
                TailModel::Truncated(_) => {
                    return Err(parse_err(base_str, "nested trunc(...) is not allowed"))
                }
            };
            let (key, value) = split_key_value(t_str)?;
            let spec = match key {
                "t" => TruncationSpec::Point(parse_number(value)?),
                "tq" => TruncationSpec::ParentQuantile(parse_number(value)?),
                other => return Err(parse_err(other, "expected T=<value> or Tq=<level>")),
            };
            TailModel::truncated(base, spec)
        }
        other => Err(parse_err(other, "expected pareto, burr, or trunc")),
    }
}

fn parse_base_call(name: &str, body: &str) -> Result<BaseModel> {
    let mut alpha = None;
    let mut tau = None;
    let mut rho = None;
    for part in body.split(',') {
        let (key, value) = split_key_value(part)?;
        let v = parse_number(value)?;
        match key {
            "alpha" => alpha = Some(v),
            "tau" if name == "pareto" => tau = Some(v),
            "rho" if name == "burr" => rho = Some(v),
            other => return Err(parse_err(other, "unknown parameter")),
        }
    }
    let alpha = alpha.ok_or_else(|| parse_err(body, "missing alpha"))?;
    match name {
        "pareto" => Ok(BaseModel::Pareto(Pareto::new(alpha, tau.unwrap_or(1.0))?)),
        "burr" => {
            let rho = rho.ok_or_else(|| parse_err(body, "missing rho"))?;
            Ok(BaseModel::Burr(Burr::new(alpha, rho)?))
        }
        _ => unreachable!(),
    }
}

/// Splits `name(body)`, requiring the parentheses to close at the end.
fn split_call(s: &str) -> Result<(&str, &str)> {
    let open = s
        .find('(')
        .ok_or_else(|| parse_err(s, "expected a model call like pareto(...)"))?;
    if !s.ends_with(')') {
        return Err(parse_err(s, "unbalanced parentheses"));
    }
    let name = &s[..open];
    let body = &s[open + 1..s.len() - 1];
    if name.is_empty() || body.is_empty() {
        return Err(parse_err(s, "empty model name or argument list"));
    }
    Ok((name, body))
}

/// Splits the body of `trunc(...)` at the top-level comma separating the base
/// spec from the truncation argument.
fn split_trunc_args(body: &str) -> Result<(&str, &str)> {
    let mut depth = 0usize;
    for (i, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| parse_err(body, "unbalanced parentheses"))?
            }
            ',' if depth == 0 => {
                return Ok((&body[..i], &body[i + 1..]));
            }
            _ => {}
        }
    }
    Err(parse_err(body, "trunc needs a base and T=/Tq= argument"))
}

fn split_key_value(s: &str) -> Result<(&str, &str)> {
    let eq = s
        .find('=')
        .ok_or_else(|| parse_err(s, "expected key=value"))?;
    Ok((&s[..eq], &s[eq + 1..]))
}

fn parse_number(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| parse_err(s, "not a number"))
}

fn parse_err(token: &str, reason: &str) -> Error {
    Error::ModelParse {
        token: token.to_string(),
        reason: reason.to_string(),
    }
}
