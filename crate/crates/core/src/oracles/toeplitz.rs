//! Finite Toeplitz determinants of the two-arc symbol
//! `f^t(θ) = e^{−2v}` on `|θ| < t` (mod 2π), `1` elsewhere, with `t = 2s/n`.
//!
//! As `n → ∞` with `s` fixed, `D_n(f^{2s/n}) → det(I − γK_s)`.

use std::f64::consts::PI;

use super::gas::{DetResult, Method, Precision};
use super::linalg::{Lu, Matrix};
use super::quadrature::Quadrature;
use crate::error::{Error, Result};

/// Value of the symbol at angle `theta ∈ [0, 2π)`.
pub fn symbol_eval(theta: f64, t: f64, v: f64) -> f64 {
    let th = theta.rem_euclid(2.0 * PI);
    if th < t || th >= 2.0 * PI - t {
        (-2.0 * v).exp()
    } else {
        1.0
    }
}

/// Closed-form Fourier coefficient `f_k = (1/2π)∫ f^t(θ) e^{−ikθ} dθ`.
pub fn symbol_coefficient(k: i64, t: f64, gamma: f64) -> f64 {
    if k == 0 {
        1.0 - gamma * t / PI
    } else {
        let kf = k as f64;
        -gamma * (kf * t).sin() / (PI * kf)
    }
}

/// `f_k` by direct quadrature of the symbol, split at its two jumps.
pub fn symbol_coefficient_numeric(k: i64, t: f64, v: f64) -> Result<f64> {
    if !(t > 0.0 && t < PI) {
        return Err(Error::domain("symbol_coefficient_numeric", format!("t = {t} not in (0, pi)")));
    }
    let kf = k as f64;
    let order = 40 + (kf.abs() * PI).ceil() as usize;
    let q = Quadrature::gauss_legendre(order)?;
    let f = |th: f64| symbol_eval(th, t, v) * (kf * th).cos();
    // the symbol is even, so the sine part vanishes
    let arcs = [(0.0, t), (t, 2.0 * PI - t), (2.0 * PI - t, 2.0 * PI)];
    let total: f64 = arcs.iter().map(|&(a, b)| q.integrate(a, b, &f)).sum();
    Ok(total / (2.0 * PI))
}

fn logdet_n(n: usize, s: f64, gamma: f64) -> Result<f64> {
    let t = 2.0 * s / n as f64;
    let coeffs: Vec<f64> = (0..n as i64).map(|k| symbol_coefficient(k, t, gamma)).collect();
    let m = Matrix::from_fn(n, |i, j| coeffs[(i as i64 - j as i64).unsigned_abs() as usize]);
    let d = Lu::factor(m)?.log_det();
    if d.sign < 0.0 {
        return Err(Error::NegativeDeterminant { log_abs: d.log_abs });
    }
    Ok(d.log_abs)
}

/// `ln D_n(f^{2s/n})` by dense pivoted LU.
///
/// The accuracy estimate is `|ln D_n − ln D_{⌈n/2⌉}|`, a measure of the
/// distance to the `n → ∞` limit rather than of rounding error.
pub fn toeplitz_logdet(n: usize, s: f64, gamma: f64) -> Result<DetResult> {
    let t = 2.0 * s / n.max(1) as f64;
    if n == 0 || !(t > 0.0 && t < 2.0 * PI) {
        return Err(Error::domain("toeplitz_logdet", format!("t = 2s/n = {t} not in (0, 2pi)")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::domain("toeplitz_logdet", format!("gamma = {gamma} not in [0,1]")));
    }
    let value = logdet_n(n, s, gamma)?;
    let half = n.div_ceil(2);
    let accuracy_estimate = if n >= 2 && 2.0 * s / (half as f64) < 2.0 * PI {
        (value - logdet_n(half, s, gamma)?).abs()
    } else {
        f64::NAN
    };
    Ok(DetResult {
        log_det: value,
        method: Method::Toeplitz,
        accuracy_estimate,
        order: n,
        precision: Precision::Double,
        gamma_substituted: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let r = toeplitz_logdet(1, 1.0, 0.5).unwrap();
        assert!((r.log_det - (1.0 - 1.0 / PI).ln()).abs() < 1e-15);
    }

    #[test]
    fn two_by_two() {
        let (s, g) = (1.2, 0.8);
        let f0 = 1.0 - 2.0 * g * s / (2.0 * PI);
        let f1 = -g * s.sin() / PI;
        let r = toeplitz_logdet(2, s, g).unwrap();
        assert!((r.log_det - (f0 * f0 - f1 * f1).ln()).abs() < 1e-14);
    }

    #[test]
    fn symbol_shape() {
        assert_eq!(symbol_eval(1.0, 0.4, 0.0), 1.0);
        assert_eq!(symbol_eval(PI, 0.4, 2.0), 1.0);
        assert_eq!(symbol_eval(0.1, 0.4, 2.0), (-4.0f64).exp());
        assert_eq!(symbol_eval(2.0 * PI - 0.1, 0.4, 2.0), (-4.0f64).exp());
    }

    #[test]
    fn closed_form_coefficients_match_quadrature() {
        let (t, g) = (0.4, 0.7f64);
        let v = -0.5 * (-g).ln_1p();
        for k in [0, 1, 3, 10] {
            let exact = symbol_coefficient(k, t, g);
            let numeric = symbol_coefficient_numeric(k, t, v).unwrap();
            assert!((exact - numeric).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn domain_checks() {
        assert!(toeplitz_logdet(0, 1.0, 0.5).is_err());
        assert!(toeplitz_logdet(1, 4.0, 0.5).is_err());
        assert!(toeplitz_logdet(4, 1.0, 1.5).is_err());
    }
}
