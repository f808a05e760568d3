//! Complex log-Gamma on the principal branch.
//!
//! Stirling's series is applied once the argument has been pushed to
//! `Re z >= 15` by the recurrence `ln Γ(z) = ln Γ(z+n) − Σ ln(z+k)`. Summing
//! principal logarithms (rather than multiplying and taking one log at the
//! end) keeps the imaginary part continuous along the imaginary axis.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Even-index Bernoulli numbers B_2, B_4, ..., B_30.
pub(crate) const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

const STIRLING_SHIFT: f64 = 15.0;
const STIRLING_TERMS: usize = 12;
const MAX_SHIFT: f64 = 1.0e6;

/// `ln(2π)/2`
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Principal branch of `ln Γ(z)`.
///
/// Fails with [`Error::Pole`] at non-positive integers.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain("log_gamma", format!("non-finite argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::Pole(z.re));
    }
    if z.re < -MAX_SHIFT {
        return Err(Error::domain(
            "log_gamma",
            format!("Re z = {} is below the supported range", z.re),
        ));
    }

    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < STIRLING_SHIFT {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

fn stirling(w: Complex64) -> Complex64 {
    let mut acc = (w - 0.5) * w.ln() - w + HALF_LN_TWO_PI;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for (k, b) in BERNOULLI_EVEN.iter().take(STIRLING_TERMS).enumerate() {
        let k = (k + 1) as f64;
        acc += pow * (b / (2.0 * k * (2.0 * k - 1.0)));
        pow *= inv2;
    }
    acc
}

/// `Γ(z)` as `exp(ln Γ(z))`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(|l| l.exp())
}

/// `arg(Γ(ν)/Γ(−ν))` for `ν = iv/π`, taken on the continuous branch
/// `2·Im ln Γ(iv/π)` (for imaginary ν, `Γ(−ν)` is the conjugate of `Γ(ν)`).
///
/// Undefined at `v = 0`; callers carry the `v²` prefactor themselves.
pub fn arg_gamma_ratio(v: f64) -> Result<f64> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain(
            "arg_gamma_ratio",
            format!("requires v > 0, got {v}"),
        ));
    }
    let nu = Complex64::new(0.0, v / PI);
    Ok(2.0 * log_gamma(nu)?.im)
}

/// Riemann zeta at an integer `k >= 2`.
///
/// Euler–Maclaurin with cut `N = 40` and eight correction terms.
pub(crate) fn zeta_int(k: u32) -> f64 {
    debug_assert!(k >= 2);
    let s = k as f64;
    const N: usize = 40;
    if k >= 24 {
        return (1..=N).rev().map(|n| (n as f64).powf(-s)).sum();
    }
    let n = N as f64;
    let head: f64 = (1..N).rev().map(|j| (j as f64).powf(-s)).sum();
    let mut acc = head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial (s)_{2j-1} / (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        acc += b / fact * rising * npow;
        let j = (j + 1) as f64;
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        npow /= n * n;
    }
    acc
}
