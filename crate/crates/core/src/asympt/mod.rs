//! Large-`s` expansions of `ln det(I − γK_s)` with a term-by-term breakdown.
//!
//! | evaluator | regime | budget |
//! |---|---|---|
//! | [`gap_expansion`] | `γ = 1` | `c_gap/s` |
//! | [`fixed_v_expansion`], [`extended_expansion`] | `0 ≤ v < s^{1/3}` | `c₁v/s + c₂v³/s` |
//! | [`transition_expansion`] | `0 < v ≤ s(1−δ)` | `C₀ + c s^{−1/4} ln s` |
//! | [`fh_toeplitz_expansion`] | `2s/n < t₀` | `c_fh(1+v²)/s` |

use std::f64::consts::{LN_2, PI};
use std::fmt;

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::kappa_map;
use crate::mfun::TailIntegrator;
use crate::specfun::{arg_gamma_ratio, log_barnes_pair, ThetaIndex, ZETA_PRIME_MINUS_ONE};

/// `ln c₀ = (1/12) ln 2 + 3ζ′(−1)`.
pub const LN_C0: f64 = -0.438_501_166_054_690_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Gap,
    FixedV,
    ExtendedV,
    Transition,
    FisherHartwig,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Gap => "gap",
            Regime::FixedV => "fixed_v",
            Regime::ExtendedV => "extended_v",
            Regime::Transition => "transition",
            Regime::FisherHartwig => "fisher_hartwig",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticResult {
    pub total: f64,
    /// Summands in evaluation order; `total` is their sum.
    pub terms: Vec<Term>,
    pub regime: Regime,
    pub error_budget: f64,
    pub warnings: Vec<String>,
}

impl AsymptoticResult {
    fn assemble(regime: Regime, terms: Vec<Term>, error_budget: f64, warnings: Vec<String>) -> Self {
        let total = terms.iter().map(|t| t.value).sum();
        AsymptoticResult {
            total,
            terms,
            regime,
            error_budget,
            warnings,
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

fn term(name: &'static str, value: f64) -> Term {
    Term { name, value }
}

fn check_s(op: &'static str, s: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(op, format!("s = {s} must be positive and finite")));
    }
    Ok(())
}

fn check_v(op: &'static str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::domain(op, format!("v = {v} must be finite and >= 0")));
    }
    Ok(())
}

fn small_s_warning(s: f64, cfg: &Config, out: &mut Vec<String>) {
    if s < cfg.s0 {
        out.push(format!("s = {s} below s0 = {}", cfg.s0));
    }
}

/// `γ = 1`: `−s²/2 − ¼ ln s + ln c₀`.
pub fn gap_expansion(s: f64, cfg: &Config) -> Result<AsymptoticResult> {
    check_s("gap_expansion", s)?;
    let mut warnings = Vec::new();
    small_s_warning(s, cfg, &mut warnings);
    Ok(AsymptoticResult::assemble(
        Regime::Gap,
        vec![term("quadratic", -0.5 * s * s), term("log", -0.25 * s.ln()), term("constant", LN_C0)],
        cfg.c_gap / s,
        warnings,
    ))
}

fn extended_checks(op: &'static str, s: f64, v: f64, cfg: &Config) -> Result<Vec<String>> {
    check_s(op, s)?;
    check_v(op, v)?;
    let mut warnings = Vec::new();
    small_s_warning(s, cfg, &mut warnings);
    if v >= s.cbrt() {
        warnings.push(format!("v = {v} >= s^(1/3) = {:.6}", s.cbrt()));
    }
    Ok(warnings)
}

/// `−(4v/π)s + (2v²/π²) ln 4s + 2 ln G(1+iv/π)G(1−iv/π)`.
pub fn extended_expansion(s: f64, v: f64, cfg: &Config) -> Result<AsymptoticResult> {
    let warnings = extended_checks("extended_expansion", s, v, cfg)?;
    Ok(AsymptoticResult::assemble(
        Regime::ExtendedV,
        vec![
            term("linear", -4.0 * v * s / PI),
            term("log", 2.0 * v * v / (PI * PI) * (4.0 * s).ln()),
            term("barnes", log_barnes_pair(v)?),
        ],
        cfg.c1 * v / s + cfg.c2 * v.powi(3) / s,
        warnings,
    ))
}

/// The same expansion grouped as `−(4v/π)s + (2v²/π²) ln s + C(v)` with
/// `C(v) = (2v²/π²) ln 4 + 2 ln G(1+iv/π)G(1−iv/π)`.
pub fn fixed_v_expansion(s: f64, v: f64, cfg: &Config) -> Result<AsymptoticResult> {
    let warnings = extended_checks("fixed_v_expansion", s, v, cfg)?;
    let w = 2.0 * v * v / (PI * PI);
    Ok(AsymptoticResult::assemble(
        Regime::FixedV,
        vec![
            term("linear", -4.0 * v * s / PI),
            term("log", w * s.ln()),
            term("constant", w * 2.0 * LN_2 + log_barnes_pair(v)?),
        ],
        cfg.c1 * v / s + cfg.c2 * v.powi(3) / s,
        warnings,
    ))
}

/// `A(v) = 2 ln G(1+iv/π)G(1−iv/π) − (v²/π²)(3 + 2 ln(π/v))`, with `A(0) = 0`.
pub fn a_constant(v: f64) -> Result<f64> {
    check_v("a_constant", v)?;
    if v == 0.0 {
        return Ok(0.0);
    }
    Ok(log_barnes_pair(v)? - v * v / (PI * PI) * (3.0 + 2.0 * (PI / v).ln()))
}

/// `s·V mod 1`, using the exact product error so the reduction stays
/// accurate when `sV` is large.
pub fn phase_mod_one(s: f64, v_freq: f64) -> f64 {
    let p = s * v_freq;
    let err = s.mul_add(v_freq, -p);
    let head = p - p.floor();
    let x = head + err;
    x - x.floor()
}

/// `−(s²/2)(1−a²) + vsV + ln θ₃(sV|τ) + A(v) + tail`, `tail` being the
/// integral of M along the ray (see [`crate::mfun::tail_integral`]).
pub fn transition_expansion(s: f64, v: f64, tail: f64, cfg: &Config) -> Result<AsymptoticResult> {
    check_s("transition_expansion", s)?;
    if !(v > 0.0 && v <= s * (1.0 - cfg.delta)) {
        return Err(Error::domain(
            "transition_expansion",
            format!("need 0 < v <= s(1-delta), got s = {s}, v = {v}"),
        ));
    }
    let mut warnings = Vec::new();
    small_s_warning(s, cfg, &mut warnings);
    let d = kappa_map::build_with(v / s, cfg.delta)?;
    let ctx = d.theta_context()?;
    let x = phase_mod_one(s, d.v_freq);
    let theta3 = ctx.eval(ThetaIndex::Three, x.into(), 0, false).re;
    if !(theta3 > 0.0) {
        return Err(Error::ThetaZero("theta3(sV)"));
    }
    Ok(AsymptoticResult::assemble(
        Regime::Transition,
        vec![
            term("quadratic", -0.5 * s * s * d.pair.a_prime_sq()),
            term("linear", v * s * d.v_freq),
            term("theta", theta3.ln()),
            term("a_v", a_constant(v)?),
            term("tail", tail),
        ],
        cfg.big_c0 + cfg.c_transition * s.powf(-0.25) * s.ln(),
        warnings,
    ))
}

/// [`transition_expansion`] with the tail computed here.
pub fn transition_expansion_auto(s: f64, v: f64, cfg: &Config) -> Result<AsymptoticResult> {
    check_s("transition_expansion", s)?;
    if !(v > 0.0 && v <= s * (1.0 - cfg.delta)) {
        return Err(Error::domain(
            "transition_expansion",
            format!("need 0 < v <= s(1-delta), got s = {s}, v = {v}"),
        ));
    }
    let tail = TailIntegrator::new(v / s, cfg)?.evaluate(s)?;
    let mut out = transition_expansion(s, v, tail.value, cfg)?;
    out.warnings.extend(tail.warnings);
    Ok(out)
}

/// `−(4v/π)s + (2v²/π²) ln(2n sin(2s/n)) + 2 ln G(1+iv/π)G(1−iv/π)`.
pub fn fh_toeplitz_expansion(n: usize, s: f64, v: f64, cfg: &Config) -> Result<AsymptoticResult> {
    check_s("fh_toeplitz_expansion", s)?;
    check_v("fh_toeplitz_expansion", v)?;
    let nf = n as f64;
    let t = 2.0 * s / nf;
    if n == 0 || t >= PI {
        return Err(Error::domain("fh_toeplitz_expansion", format!("need 2s/n < pi, got n = {n}, s = {s}")));
    }
    let mut warnings = Vec::new();
    if t >= cfg.t0 {
        warnings.push(format!("2s/n = {t} >= t0 = {}", cfg.t0));
    }
    Ok(AsymptoticResult::assemble(
        Regime::FisherHartwig,
        vec![
            term("linear", -4.0 * v * s / PI),
            term("log", 2.0 * v * v / (PI * PI) * (2.0 * nf * t.sin()).ln()),
            term("barnes", log_barnes_pair(v)?),
        ],
        cfg.c_fh * (1.0 + v * v) / s,
        warnings,
    ))
}

/// `φ(s, v) = 4s − (4v/π) ln 4s + 2 arg(Γ(ν)/Γ(−ν))`, `ν = iv/π`.
pub fn phase(s: f64, v: f64) -> Result<f64> {
    check_s("phase", s)?;
    Ok(4.0 * s - 4.0 * v / PI * (4.0 * s).ln() + 2.0 * arg_gamma_ratio(v)?)
}

/// `(v²/(2π²s²)) sin φ(s, v)`, zero at `v = 0`.
pub fn dlogdet_oscillation(s: f64, v: f64) -> Result<f64> {
    check_s("dlogdet_oscillation", s)?;
    check_v("dlogdet_oscillation", v)?;
    if v == 0.0 {
        return Ok(0.0);
    }
    Ok(v * v / (2.0 * PI * PI * s * s) * phase(s, v)?.sin())
}

/// `∂_s ln det ≈ −4v/π + 2v²/(π²s) + (v²/(2π²s²)) sin φ(s, v)`.
pub fn dlogdet_expansion(s: f64, v: f64) -> Result<f64> {
    check_s("dlogdet_expansion", s)?;
    check_v("dlogdet_expansion", v)?;
    Ok(-4.0 * v / PI + 2.0 * v * v / (PI * PI * s) + dlogdet_oscillation(s, v)?)
}

/// `ln c₀` rebuilt from `ζ′(−1)`.
pub fn ln_c0_from_zeta() -> f64 {
    LN_2 / 12.0 + 3.0 * ZETA_PRIME_MINUS_ONE
}
