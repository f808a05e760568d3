use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Above this `v`, `1 − γ = e^{−2v}` is below double resolution relative to 1.
pub const V_SATURATION: f64 = 18.0;

/// A point `(s, γ)` of the log-gas together with `v = −½ ln(1−γ)` and
/// `κ = v/s`.
///
/// `v` is the primary coordinate: `γ` is always derived from it, so points
/// built with `v > 18` keep their exact `v` even though `γ` rounds to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasPoint {
    pub s: f64,
    pub gamma: f64,
    pub v: f64,
    pub kappa: f64,
}

impl GasPoint {
    pub fn from_gamma(s: f64, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::domain("GasPoint", format!("gamma = {gamma} not in [0,1]")));
        }
        let v = if gamma == 1.0 { f64::INFINITY } else { -0.5 * (-gamma).ln_1p() };
        Self::build(s, gamma, v)
    }

    pub fn from_v(s: f64, v: f64) -> Result<Self> {
        if !(v >= 0.0) {
            return Err(Error::domain("GasPoint", format!("v = {v} must be nonnegative")));
        }
        let gamma = if v.is_infinite() { 1.0 } else { -(-2.0 * v).exp_m1() };
        Self::build(s, gamma, v)
    }

    fn build(s: f64, gamma: f64, v: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain("GasPoint", format!("s = {s} must be positive")));
        }
        Ok(GasPoint {
            s,
            gamma,
            v,
            kappa: v / s,
        })
    }

    /// `1 − γ = e^{−2v}`, computed from `v` without cancellation.
    pub fn one_minus_gamma(&self) -> f64 {
        (-2.0 * self.v).exp()
    }

    /// Whether `γ` is indistinguishable from 1 in double precision.
    pub fn is_saturated(&self) -> bool {
        self.v > V_SATURATION
    }
}

/// Where a log-determinant value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Nystrom,
    Toeplitz,
    Gap,
    FixedV,
    Extended,
    Transition,
    FhToeplitz,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Nystrom => "nystrom",
            Method::Toeplitz => "toeplitz",
            Method::Gap => "gap",
            Method::FixedV => "fixed_v",
            Method::Extended => "extended",
            Method::Transition => "transition",
            Method::FhToeplitz => "fh_toeplitz",
        }
    }

    pub const ALL: [Method; 7] = [
        Method::Nystrom,
        Method::Toeplitz,
        Method::Gap,
        Method::FixedV,
        Method::Extended,
        Method::Transition,
        Method::FhToeplitz,
    ];

    /// Whether the value comes from an expansion rather than an exact evaluator.
    pub fn is_asymptotic(self) -> bool {
        !matches!(self, Method::Nystrom | Method::Toeplitz)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::domain("method", format!("unknown method {s:?}")))
    }
}

/// Floating-point format used for a Nyström evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Double,
    DoubleDouble,
    /// Double-double when the smallest eigenvalue of `I − γK_s` would lose
    /// more than four digits in double precision.
    Auto,
}

/// A log-determinant with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetResult {
    pub log_det: f64,
    pub method: Method,
    /// `|value(n) − value(2n)|` for Nyström, `|D_n − D_{n/2}|` for Toeplitz.
    pub accuracy_estimate: f64,
    pub order: usize,
    pub precision: Precision,
    /// Set when a saturated point (`v > 18`) was evaluated at `γ = 1`.
    pub gamma_substituted: bool,
}
