//! The elliptic parameter map `κ ↦ a(κ)` and the quantities built on it.
//!
//! `a ∈ (0,1)` solves
//!
//! ```text
//! κ = ∫_a^1 √((μ² − a²)/(1 − μ²)) dμ
//! ```
//!
//! and, with `K = K(a)`, `K′ = K(a′)`, `a′ = √(1 − a²)`,
//!
//! ```text
//! V = −(2/π)(E − a′²K),   τ = 2iK/K′,   c = i/(2K′).
//! ```
//!
//! κ-derivatives come from `da/dκ = −1/(aK′)` and the closed-form
//! derivatives of `K`, `E`; nothing is differenced.

pub mod series;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::config::DEFAULT_DELTA;
use crate::error::{Error, Result};
use crate::oracles::Quadrature;
use crate::specfun::{pair_from_moduli, EllipticPair, ThetaContext};

const ROOT_QUAD_ORDER: usize = 64;
const RESIDUAL_TOL: f64 = 1e-12;
const SELF_CHECK_TOL: f64 = 1e-13;
const BRACKET: (f64, f64) = (1e-12, 1.0 - 1e-12);

/// Everything derived from κ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticData {
    pub kappa: f64,
    pub pair: EllipticPair,
    /// Frequency `V(κ) < 0`.
    pub v_freq: f64,
    pub tau: Complex64,
    pub c: Complex64,
    pub dv_dkappa: f64,
    pub dtau_dkappa: Complex64,
    pub da_dkappa: f64,
}

impl EllipticData {
    pub fn a(&self) -> f64 {
        self.pair.a
    }

    pub fn tau_im(&self) -> f64 {
        self.tau.im
    }

    pub fn theta_context(&self) -> Result<ThetaContext> {
        ThetaContext::new(self.tau.im)
    }
}

/// `∫_a^1 √((μ²−a²)/(1−μ²)) dμ` after `μ = a + (1−a) sin²φ`, which turns
/// the integrand into `2(1−a) sin²φ √((μ+a)/(1+μ))`, smooth on `[0, π/2]`.
fn defining_integral(a: f64, q: &Quadrature) -> f64 {
    let one_minus_a = 1.0 - a;
    q.integrate(0.0, FRAC_PI_2, |phi| {
        let s2 = phi.sin().powi(2);
        let mu = a + one_minus_a * s2;
        2.0 * one_minus_a * s2 * ((mu + a) / (1.0 + mu)).sqrt()
    })
}

fn check_kappa(op: &'static str, kappa: f64, delta: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa <= 1.0 - delta) {
        return Err(Error::domain(op, format!("kappa = {kappa} not in (0, {}]", 1.0 - delta)));
    }
    Ok(())
}

/// `a(κ)` with the default domain cut `κ ≤ 1 − δ`.
pub fn solve_a(kappa: f64) -> Result<f64> {
    solve_a_with(kappa, DEFAULT_DELTA)
}

/// Bisection down to a short bracket, then safeguarded secant.
pub fn solve_a_with(kappa: f64, delta: f64) -> Result<f64> {
    check_kappa("solve_a", kappa, delta)?;
    let q = Quadrature::gauss_legendre(ROOT_QUAD_ORDER)?;
    // F decreases from 1 at a = 0 to 0 at a = 1
    let f = |a: f64| defining_integral(a, &q) - kappa;
    let (mut lo, mut hi) = BRACKET;
    let (mut f_lo, mut f_hi) = (f(lo), f(hi));
    if f_lo < 0.0 || f_hi > 0.0 {
        return Err(Error::NonConvergence {
            op: "solve_a",
            detail: format!("root not bracketed for kappa = {kappa}"),
        });
    }
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm > 0.0 {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    let (mut a0, mut f0, mut a1, mut f1) = (lo, f_lo, hi, f_hi);
    let mut root = None;
    for _ in 0..60 {
        let mut a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
        if !(a2 > lo && a2 < hi) {
            a2 = 0.5 * (lo + hi);
        }
        let f2 = f(a2);
        if f2 > 0.0 {
            lo = a2;
        } else {
            hi = a2;
        }
        let step = (a2 - a1).abs();
        (a0, f0, a1, f1) = (a1, f1, a2, f2);
        if f2 == 0.0 || step <= 4.0 * f64::EPSILON * a2 || hi - lo <= 4.0 * f64::EPSILON {
            root = Some(a2);
            break;
        }
    }
    let a = root.ok_or_else(|| Error::NonConvergence {
        op: "solve_a",
        detail: format!("secant did not settle for kappa = {kappa}"),
    })?;
    let residual = f(a).abs();
    let fine = Quadrature::gauss_legendre(2 * ROOT_QUAD_ORDER)?;
    let drift = (defining_integral(a, &fine) - defining_integral(a, &q)).abs();
    if residual > RESIDUAL_TOL || drift > SELF_CHECK_TOL {
        return Err(Error::NonConvergence {
            op: "solve_a",
            detail: format!("residual {residual:e}, quadrature drift {drift:e} at kappa = {kappa}"),
        });
    }
    Ok(a)
}

/// The full map at κ with the default domain cut.
pub fn build(kappa: f64) -> Result<EllipticData> {
    build_with(kappa, DEFAULT_DELTA)
}

pub fn build_with(kappa: f64, delta: f64) -> Result<EllipticData> {
    let a = solve_a_with(kappa, delta)?;
    Ok(from_modulus(kappa, a))
}

pub(crate) fn from_modulus(kappa: f64, a: f64) -> EllipticData {
    let a_prime = ((1.0 - a) * (1.0 + a)).sqrt();
    let pair = pair_from_moduli(a, a_prime);
    let (k, kp, e) = (pair.k, pair.k_prime, pair.e);
    let a_prime_sq = pair.a_prime_sq();
    let v_freq = -(2.0 / PI) * (e - a_prime_sq * k);
    EllipticData {
        kappa,
        pair,
        v_freq,
        tau: Complex64::new(0.0, 2.0 * k / kp),
        c: Complex64::new(0.0, 0.5 / kp),
        dv_dkappa: 2.0 * k / (PI * kp),
        dtau_dkappa: Complex64::new(0.0, -PI / (a * a * a_prime_sq * kp.powi(3))),
        da_dkappa: -1.0 / (a * kp),
    }
}

/// `|V − κ dV/dκ − 2ic|`, which vanishes identically: both sides equal
/// `−1/K(a′)`. This is the boundary coefficient of the integration by parts
/// in the tail integral, `d/dt[tV(v/t)] = V − κV′`.
pub fn phase_identity_check(kappa: f64) -> Result<f64> {
    let d = build(kappa)?;
    Ok(phase_identity_residual(&d))
}

pub fn phase_identity_residual(d: &EllipticData) -> f64 {
    let lhs = d.v_freq - d.kappa * d.dv_dkappa;
    let rhs = 2.0 * Complex64::new(0.0, 1.0) * d.c;
    (Complex64::new(lhs, 0.0) - rhs).norm()
}
