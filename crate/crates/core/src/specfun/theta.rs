//! Jacobi theta functions for a purely imaginary period `τ = iT`.
//!
//! Period-one convention, `θ₃(z|τ) = Σ_m q^{m²} e^{2πimz}` with
//! `q = e^{iπτ} = e^{−πT}`. The other three follow from half-period shifts:
//!
//! ```text
//! θ₀(z) = θ₃(z + 1/2)
//! θ₂(z) = e^{iπτ/4 + iπz} θ₃(z + τ/2)
//! θ₁(z) = −i e^{iπτ/4 + iπz} θ₃(z + 1/2 + τ/2)
//! ```
//!
//! Expanding the shifted series term by term gives, for each `θ_j`, a sum
//! `Σ_m σ_m q^{e_m} e^{iπ f_m z}` with integer frequency `f_m` and exponent
//! `e_m` (`m²` or `(m+1/2)²`). x-derivatives bring down `(iπ f_m)^k`, the
//! τ-derivative brings down `iπ e_m`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tail tolerance for the truncated q-series.
pub const THETA_EPS: f64 = 1e-17;
const MAX_TERMS: usize = 2000;

/// Which of the four theta functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThetaIndex {
    Zero,
    One,
    Two,
    Three,
}

impl TryFrom<usize> for ThetaIndex {
    type Error = Error;

    fn try_from(j: usize) -> Result<Self> {
        match j {
            0 => Ok(ThetaIndex::Zero),
            1 => Ok(ThetaIndex::One),
            2 => Ok(ThetaIndex::Two),
            3 => Ok(ThetaIndex::Three),
            _ => Err(Error::domain("theta", format!("index {j} not in 0..=3"))),
        }
    }
}

/// Nome data and truncation for `τ = i·tau_im`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaContext {
    tau_im: f64,
    q: f64,
    m_max: usize,
    /// `q^{m²}` for `m = 0..=m_max`
    integer_weights: Vec<f64>,
    /// `q^{(m+1/2)²}` for `m = 0..=m_max`
    half_weights: Vec<f64>,
}

impl ThetaContext {
    /// Context with the default truncation
    /// `m_max = ceil(sqrt(ln(1/ε) / (π Im τ))) + 2`.
    pub fn new(tau_im: f64) -> Result<Self> {
        if !(tau_im > 0.0) || !tau_im.is_finite() {
            return Err(Error::domain("ThetaContext", format!("Im tau = {tau_im} must be positive")));
        }
        let m = ((1.0 / THETA_EPS).ln() / (PI * tau_im)).sqrt().ceil() as usize + 2;
        Self::with_truncation(tau_im, m)
    }

    /// Context with an explicit truncation index.
    pub fn with_truncation(tau_im: f64, m_max: usize) -> Result<Self> {
        if !(tau_im > 0.0) || !tau_im.is_finite() {
            return Err(Error::domain("ThetaContext", format!("Im tau = {tau_im} must be positive")));
        }
        let q = (-PI * tau_im).exp();
        if m_max > MAX_TERMS || q >= 1.0 {
            return Err(Error::Truncation { q });
        }
        let integer_weights = (0..=m_max)
            .map(|m| (-PI * tau_im * (m * m) as f64).exp())
            .collect();
        let half_weights = (0..=m_max)
            .map(|m| {
                let h = m as f64 + 0.5;
                (-PI * tau_im * h * h).exp()
            })
            .collect();
        Ok(ThetaContext {
            tau_im,
            q,
            m_max,
            integer_weights,
            half_weights,
        })
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(0.0, self.tau_im)
    }

    pub fn tau_im(&self) -> f64 {
        self.tau_im
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// Same τ, truncation index multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::with_truncation(self.tau_im, self.m_max * factor.max(1))
    }

    /// `∂^{dx} θ_j(z|τ) / ∂z^{dx}`, or its τ-derivative when `dtau` is set.
    pub fn eval(&self, j: ThetaIndex, z: Complex64, dx_order: u32, dtau: bool) -> Complex64 {
        let i_pi = Complex64::new(0.0, PI);
        let (half, alternating) = match j {
            ThetaIndex::Three => (false, false),
            ThetaIndex::Zero => (false, true),
            ThetaIndex::Two => (true, false),
            ThetaIndex::One => (true, true),
        };
        let term = |m: i64| -> Complex64 {
            // frequency f and exponent e for index m
            let (f, e, w) = if half {
                let h = m as f64 + 0.5;
                let idx = if m >= 0 { m as usize } else { (-m - 1) as usize };
                (2.0 * h, h * h, self.half_weights[idx])
            } else {
                let mf = m as f64;
                (2.0 * mf, mf * mf, self.integer_weights[m.unsigned_abs() as usize])
            };
            let sign = if alternating && m.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            let mut t = (i_pi * f * z).exp() * (sign * w);
            if dx_order > 0 {
                t *= (i_pi * f).powu(dx_order);
            }
            if dtau {
                t *= i_pi * e;
            }
            t
        };
        let m_max = self.m_max as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        // smallest terms first
        for m in (0..=m_max).rev() {
            acc += term(m);
            if half {
                acc += term(-m - 1);
            } else if m > 0 {
                acc += term(-m);
            }
        }
        if j == ThetaIndex::One {
            acc *= Complex64::new(0.0, -1.0);
        }
        acc
    }
}

impl ThetaContext {
    /// `[θ_j, θ_j′, θ_j″]` at `z` from one pass over the series.
    pub fn jet(&self, j: ThetaIndex, z: Complex64) -> [Complex64; 3] {
        let i_pi = Complex64::new(0.0, PI);
        let half = matches!(j, ThetaIndex::One | ThetaIndex::Two);
        let alternating = matches!(j, ThetaIndex::Zero | ThetaIndex::One);
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        let mut add = |m: i64| {
            let (f, w) = if half {
                let idx = if m >= 0 { m as usize } else { (-m - 1) as usize };
                (2.0 * m as f64 + 1.0, self.half_weights[idx])
            } else {
                (2.0 * m as f64, self.integer_weights[m.unsigned_abs() as usize])
            };
            let sign = if alternating && m.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            let k = i_pi * f;
            let t = (k * z).exp() * (sign * w);
            acc[0] += t;
            acc[1] += t * k;
            acc[2] += t * k * k;
        };
        for m in (0..=self.m_max as i64).rev() {
            add(m);
            if half {
                add(-m - 1);
            } else if m > 0 {
                add(-m);
            }
        }
        if j == ThetaIndex::One {
            let mi = Complex64::new(0.0, -1.0);
            for a in acc.iter_mut() {
                *a *= mi;
            }
        }
        acc
    }
}

/// Free-function form of [`ThetaContext::eval`] with an integer index.
pub fn theta(j: usize, z: Complex64, ctx: &ThetaContext, dx_order: u32, dtau: bool) -> Result<Complex64> {
    Ok(ctx.eval(ThetaIndex::try_from(j)?, z, dx_order, dtau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn tau_for_q(q: f64) -> f64 {
        -q.ln() / PI
    }

    #[test]
    fn tiny_nome_gives_one() {
        let ctx = ThetaContext::new(200.0).unwrap();
        assert!((ctx.eval(ThetaIndex::Three, c(0.0), 0, false) - 1.0).norm() < 1e-300);
        assert!(ctx.m_max() <= 3);
    }

    #[test]
    fn jacobi_identity() {
        for q in [0.05, 0.1, 0.3] {
            let ctx = ThetaContext::new(tau_for_q(q)).unwrap();
            let t3 = ctx.eval(ThetaIndex::Three, c(0.0), 0, false).re;
            let t0 = ctx.eval(ThetaIndex::Zero, c(0.0), 0, false).re;
            let t2 = ctx.eval(ThetaIndex::Two, c(0.0), 0, false).re;
            let lhs = t3.powi(4);
            let rhs = t0.powi(4) + t2.powi(4);
            assert!((lhs - rhs).abs() < 1e-12 * lhs, "q = {q}");
            if q == 0.1 {
                // 30-digit reference: 2.07498275946931616...
                assert!((lhs - 2.074_982_759_469_316).abs() < 1e-13, "{lhs}");
            }
        }
    }

    #[test]
    fn periodic_in_x() {
        let ctx = ThetaContext::new(tau_for_q(0.2)).unwrap();
        let a = ctx.eval(ThetaIndex::Three, c(0.37), 0, false);
        let b = ctx.eval(ThetaIndex::Three, c(1.37), 0, false);
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn heat_equation() {
        for q in [0.02, 0.2, 0.5] {
            let ctx = ThetaContext::new(tau_for_q(q)).unwrap();
            for x in [0.0, 0.13, 0.41, 0.77] {
                for j in [ThetaIndex::Zero, ThetaIndex::One, ThetaIndex::Two, ThetaIndex::Three] {
                    let z = Complex64::new(x, 0.05);
                    let dt = ctx.eval(j, z, 0, true);
                    let dxx = ctx.eval(j, z, 2, false) / Complex64::new(0.0, 4.0 * PI);
                    assert!((dt - dxx).norm() <= 1e-10 * (1.0 + dt.norm()));
                }
            }
        }
    }

    #[test]
    fn shift_relations_hold() {
        let ctx = ThetaContext::new(0.9).unwrap();
        let tau = ctx.tau();
        let i = Complex64::new(0.0, 1.0);
        for z in [Complex64::new(0.21, 0.0), Complex64::new(-0.3, 0.1)] {
            let prefactor = (i * PI * tau / 4.0 + i * PI * z).exp();
            let t0 = ctx.eval(ThetaIndex::Three, z + 0.5, 0, false);
            let t2 = prefactor * ctx.eval(ThetaIndex::Three, z + tau / 2.0, 0, false);
            let t1 = -i * prefactor * ctx.eval(ThetaIndex::Three, z + 0.5 + tau / 2.0, 0, false);
            assert!((ctx.eval(ThetaIndex::Zero, z, 0, false) - t0).norm() < 1e-14);
            assert!((ctx.eval(ThetaIndex::Two, z, 0, false) - t2).norm() < 1e-14);
            assert!((ctx.eval(ThetaIndex::One, z, 0, false) - t1).norm() < 1e-14);
        }
    }

    #[test]
    fn real_on_real_axis() {
        let ctx = ThetaContext::new(0.4).unwrap();
        for x in [0.0, 0.1, 0.35, 0.8] {
            for j in [ThetaIndex::Zero, ThetaIndex::Two, ThetaIndex::Three] {
                let v = ctx.eval(j, c(x), 0, false);
                assert!(v.im.abs() < 1e-14 * v.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let ctx = ThetaContext::new(0.6).unwrap();
        let z = Complex64::new(0.23, -0.04);
        let h = 1e-5;
        for j in [ThetaIndex::Zero, ThetaIndex::One, ThetaIndex::Two, ThetaIndex::Three] {
            let d1 = ctx.eval(j, z, 1, false);
            let fd = (ctx.eval(j, z + h, 0, false) - ctx.eval(j, z - h, 0, false)) / (2.0 * h);
            assert!((d1 - fd).norm() < 1e-8 * (1.0 + d1.norm()));
            let hi = ThetaContext::new(0.6 + h).unwrap();
            let lo = ThetaContext::new(0.6 - h).unwrap();
            // d/dτ with τ = iT: dθ/dT = i dθ/dτ
            let fd_t = (hi.eval(j, z, 0, false) - lo.eval(j, z, 0, false)) / (2.0 * h);
            let dtau = ctx.eval(j, z, 0, true);
            assert!((fd_t - Complex64::new(0.0, 1.0) * dtau).norm() < 1e-7 * (1.0 + dtau.norm()));
        }
    }

    #[test]
    fn jet_matches_single_evaluations() {
        let ctx = ThetaContext::new(0.45).unwrap();
        let z = Complex64::new(0.17, 0.2);
        for j in [ThetaIndex::Zero, ThetaIndex::One, ThetaIndex::Two, ThetaIndex::Three] {
            let jet = ctx.jet(j, z);
            for (k, v) in jet.iter().enumerate() {
                let single = ctx.eval(j, z, k as u32, false);
                assert!((v - single).norm() < 1e-13 * (1.0 + single.norm()));
            }
        }
    }

    #[test]
    fn truncation_refinement_is_stable() {
        let ctx = ThetaContext::new(0.3).unwrap();
        let fine = ctx.refined(2).unwrap();
        let z = Complex64::new(0.31, -0.075);
        for j in [ThetaIndex::Zero, ThetaIndex::Two, ThetaIndex::Three] {
            let a = ctx.eval(j, z, 2, false);
            let b = fine.eval(j, z, 2, false);
            assert_relative_eq!(a.re, b.re, max_relative = 1e-14);
        }
    }

    #[test]
    fn refuses_unreachable_truncation() {
        assert!(matches!(ThetaContext::new(1e-9), Err(Error::Truncation { .. })));
        assert!(ThetaContext::new(-1.0).is_err());
        assert!(theta(4, c(0.0), &ThetaContext::new(1.0).unwrap(), 0, false).is_err());
    }
}
