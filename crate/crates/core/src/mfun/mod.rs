//! The one-periodic correction `M(x, κ)` and its Fourier data.
//!
//! ```text
//! M = [Ξ₀Θ₀ + 6aΞ₂] / (48a(1+a)) + (i/4π) (κ/θ₃(x)) θ₃″(x) dτ/dκ
//! Ξ_j = 2 θ₃²(0)/θ₃²(x) · θ_j(x+d) θ_j(x−d) / θ_j²(d),   d = −τ/4
//! ```
//!
//! `Θ₀` is a quadratic form in the logarithmic derivatives
//! `L = θ₀′/θ₀`, `L₂ = θ₀″/θ₀` at `x ± d` and `d`; see [`MContext::theta0_big`].

mod filon;
mod tail;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kappa_map::{self, EllipticData};
use crate::specfun::{ThetaContext, ThetaIndex};

pub use filon::filon_quadratic;
pub use tail::{tail_integral, ModeTable, TailIntegrator, TailResult};

/// Theta data at one κ, with the constant factors of `M` precomputed.
#[derive(Debug, Clone)]
pub struct MContext {
    pub data: EllipticData,
    pub theta_ctx: ThetaContext,
    /// Half-nome shift `d = −τ/4`.
    pub d: Complex64,
    theta3_zero: Complex64,
    theta0_d: Complex64,
    theta2_d: Complex64,
    l_d: Complex64,
    dl_d: Complex64,
}

const VANISHING: f64 = 1e-280;

impl MContext {
    pub fn new(kappa: f64) -> Result<Self> {
        Self::from_data(kappa_map::build(kappa)?)
    }

    pub fn from_data(data: EllipticData) -> Result<Self> {
        let theta_ctx = data.theta_context()?;
        let d = -data.tau / 4.0;
        let [t0, t0p, t0pp] = theta_ctx.jet(ThetaIndex::Zero, d);
        let theta2_d = theta_ctx.eval(ThetaIndex::Two, d, 0, false);
        if t0.norm() < VANISHING {
            return Err(Error::ThetaZero("theta0(d)"));
        }
        if theta2_d.norm() < VANISHING {
            return Err(Error::ThetaZero("theta2(d)"));
        }
        let l_d = t0p / t0;
        Ok(MContext {
            theta3_zero: theta_ctx.eval(ThetaIndex::Three, Complex64::new(0.0, 0.0), 0, false),
            theta0_d: t0,
            theta2_d,
            l_d,
            dl_d: t0pp / t0 - l_d * l_d,
            data,
            theta_ctx,
            d,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.data.kappa
    }

    fn theta3_at(&self, x: f64) -> Result<[Complex64; 3]> {
        let jet = self.theta_ctx.jet(ThetaIndex::Three, Complex64::new(x, 0.0));
        if jet[0].norm() < VANISHING {
            return Err(Error::ThetaZero("theta3(x)"));
        }
        Ok(jet)
    }

    fn xi_with(&self, j: ThetaIndex, x: f64, theta3_x: Complex64) -> Complex64 {
        let xc = Complex64::new(x, 0.0);
        let (num, den) = match j {
            ThetaIndex::Two => (
                self.theta_ctx.eval(j, xc + self.d, 0, false) * self.theta_ctx.eval(j, xc - self.d, 0, false),
                self.theta2_d * self.theta2_d,
            ),
            _ => (
                self.theta_ctx.eval(j, xc + self.d, 0, false) * self.theta_ctx.eval(j, xc - self.d, 0, false),
                self.theta0_d * self.theta0_d,
            ),
        };
        2.0 * self.theta3_zero * self.theta3_zero / (theta3_x * theta3_x) * num / den
    }

    /// `Ξ_j(x, κ)` for `j ∈ {0, 2}`, complex (the imaginary part is rounding).
    pub fn xi_complex(&self, j: usize, x: f64) -> Result<Complex64> {
        let idx = match j {
            0 => ThetaIndex::Zero,
            2 => ThetaIndex::Two,
            _ => return Err(Error::domain("xi", format!("index {j} not in {{0, 2}}"))),
        };
        let t3 = self.theta3_at(x)?;
        Ok(self.xi_with(idx, x, t3[0]))
    }

    pub fn xi(&self, j: usize, x: f64) -> Result<f64> {
        self.xi_complex(j, x).map(|z| z.re)
    }

    /// `Θ₀(x, κ)`:
    ///
    /// ```text
    /// 5c²(L₂(x+d) − 2L′(d) + L₂(x−d)) + 14c² L(x−d)L(x+d)
    ///   − 4c²(L(x−d) + L(d) − L(x+d)) L(d)
    ///   − 2c(1+a)(L(x+d) − 2L(d) − L(x−d)) − 2(2+a)
    /// ```
    ///
    /// with `L′(d) = L₂(d) − L(d)²`.
    pub fn theta0_big_complex(&self, x: f64) -> Result<Complex64> {
        let xc = Complex64::new(x, 0.0);
        let [p0, p1, p2] = self.theta_ctx.jet(ThetaIndex::Zero, xc + self.d);
        let [m0, m1, m2] = self.theta_ctx.jet(ThetaIndex::Zero, xc - self.d);
        if p0.norm() < VANISHING || m0.norm() < VANISHING {
            return Err(Error::ThetaZero("theta0(x +- d)"));
        }
        let (lp, l2p) = (p1 / p0, p2 / p0);
        let (lm, l2m) = (m1 / m0, m2 / m0);
        let c = self.data.c;
        let a = self.data.a();
        let c2 = c * c;
        let ld = self.l_d;
        Ok(5.0 * c2 * (l2p - 2.0 * self.dl_d + l2m) + 14.0 * c2 * lm * lp
            - 4.0 * c2 * (lm + ld - lp) * ld
            - 2.0 * c * (1.0 + a) * (lp - 2.0 * ld - lm)
            - 2.0 * (2.0 + a))
    }

    pub fn theta0_big(&self, x: f64) -> Result<f64> {
        self.theta0_big_complex(x).map(|z| z.re)
    }

    /// `M(x, κ)` before discarding the (rounding-level) imaginary part.
    pub fn m_complex(&self, x: f64) -> Result<Complex64> {
        let [t3, _, t3pp] = self.theta3_at(x)?;
        let a = self.data.a();
        let xi0 = self.xi_with(ThetaIndex::Zero, x, t3);
        let xi2 = self.xi_with(ThetaIndex::Two, x, t3);
        let big = self.theta0_big_complex(x)?;
        let first = (xi0 * big + 6.0 * a * xi2) / (48.0 * a * (1.0 + a));
        let second = Complex64::new(0.0, 1.0 / (4.0 * PI)) * (self.data.kappa / t3) * t3pp * self.data.dtau_dkappa;
        Ok(first + second)
    }

    pub fn m(&self, x: f64) -> Result<f64> {
        self.m_complex(x).map(|z| z.re)
    }

    /// `a_n = ∫₀¹ M(x) e^{−2πinx} dx`, `|n| ≤ modes`, by the trapezoidal rule on
    /// `max(8·modes, 64)` points.
    pub fn fourier(&self, modes: usize) -> Result<FourierTable> {
        let g = (8 * modes).max(64);
        let samples: Vec<f64> = (0..g).map(|k| self.m(k as f64 / g as f64)).collect::<Result<_>>()?;
        let mut coeffs = Vec::with_capacity(modes + 1);
        for n in 0..=modes {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &m) in samples.iter().enumerate() {
                // exact reduction of nk/g mod 1 before the exponential
                let frac = ((n * k) % g) as f64 / g as f64;
                acc += m * Complex64::from_polar(1.0, -2.0 * PI * frac);
            }
            coeffs.push(acc / g as f64);
        }
        Ok(FourierTable {
            kappa: self.data.kappa,
            modes,
            coeffs,
        })
    }
}

/// `M(x, κ)` for a one-off evaluation.
pub fn m_eval(x: f64, kappa: f64) -> Result<f64> {
    MContext::new(kappa)?.m(x)
}

/// `M` on an x-grid, evaluated in parallel; order is that of `xs`.
pub fn m_grid(ctx: &MContext, xs: &[f64]) -> Result<Vec<f64>> {
    xs.par_iter().map(|&x| ctx.m(x)).collect()
}

/// Fourier coefficients of `M(·, κ)`; `a_{−n} = conj(a_n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierTable {
    pub kappa: f64,
    pub modes: usize,
    /// `a_0, a_1, ..., a_N`.
    pub coeffs: Vec<Complex64>,
}

impl FourierTable {
    pub fn get(&self, n: i64) -> Option<Complex64> {
        let k = n.unsigned_abs() as usize;
        let c = *self.coeffs.get(k)?;
        Some(if n < 0 { c.conj() } else { c })
    }

    /// Sum of the series at `x`.
    pub fn synthesize(&self, x: f64) -> f64 {
        let mut acc = self.coeffs[0].re;
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            acc += 2.0 * (c * Complex64::from_polar(1.0, 2.0 * PI * n as f64 * x)).re;
        }
        acc
    }
}

pub fn fourier_coeffs(kappa: f64, modes: usize) -> Result<FourierTable> {
    if modes == 0 {
        return Err(Error::domain("fourier_coeffs", "mode cutoff must be at least 1"));
    }
    MContext::new(kappa)?.fourier(modes)
}
