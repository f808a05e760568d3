//! `J(s, v) = ∫_s^∞ M(tV(v/t), v/t) dt/t = ∫_0^κ M((v/u)V(u), u) du/u`.
//!
//! Mode by mode, `J = ∫_0^κ a_0(u) du/u + Σ_{n≥1} 2 Re I_n` with
//!
//! ```text
//! I_n = ∫_0^κ a_n(u) e^{2πin w(u)} du/u,   w(u) = vV(u)/u.
//! ```
//!
//! `dw/du = v(uV′ − V)/u² = v/(K(a′)u²) > 0`, so `w` is a valid
//! integration variable: `I_n = ∫_{−∞}^{sV(κ)} h_n e^{2πinw} dw` with
//! amplitude `h_n = a_n(u) u K(a′(u))/v`. Each panel is integrated by Filon's
//! rule; below `u_min` only the first integration-by-parts term is kept.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::filon::filon_quadratic;
use super::MContext;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::kappa_map;
use crate::oracles::Quadrature;
use crate::specfun::pair_from_moduli;

/// Panels in `ln u` between `u_min` and κ.
const PANELS: usize = 600;
const A0_QUAD_ORDER: usize = 64;

/// Fourier coefficients `a_0..a_N` tabulated at Chebyshev–Lobatto points in
/// `y = ln u` and interpolated barycentrically.
#[derive(Debug, Clone)]
pub struct ModeTable {
    y_min: f64,
    y_max: f64,
    ys: Vec<f64>,
    weights: Vec<f64>,
    /// `values[k][n] = a_n(e^{y_k})`
    values: Vec<Vec<Complex64>>,
    modes: usize,
}

impl ModeTable {
    pub fn new(u_min: f64, u_max: f64, nodes: usize, modes: usize) -> Result<Self> {
        if !(u_min > 0.0 && u_min < u_max) || nodes < 2 {
            return Err(Error::domain("ModeTable", format!("bad range [{u_min}, {u_max}] or nodes {nodes}")));
        }
        let (y_min, y_max) = (u_min.ln(), u_max.ln());
        let mid = 0.5 * (y_min + y_max);
        let half = 0.5 * (y_max - y_min);
        let m = nodes - 1;
        let mut ys: Vec<f64> = (0..=m).map(|k| mid - half * (PI * k as f64 / m as f64).cos()).collect();
        // pin the ends exactly
        ys[0] = y_min;
        ys[m] = y_max;
        let weights = (0..=m)
            .map(|k| {
                let w = if k % 2 == 0 { 1.0 } else { -1.0 };
                if k == 0 || k == m {
                    0.5 * w
                } else {
                    w
                }
            })
            .collect();
        let values = ys
            .par_iter()
            .map(|&y| {
                let u = y.exp().min(u_max);
                MContext::new(u)?.fourier(modes).map(|t| t.coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModeTable {
            y_min,
            y_max,
            ys,
            weights,
            values,
            modes,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn range(&self) -> (f64, f64) {
        (self.y_min.exp(), self.y_max.exp())
    }

    /// `a_0..a_N` at `u`, `u` inside the tabulated range.
    pub fn at(&self, u: f64) -> Vec<Complex64> {
        let y = u.ln().clamp(self.y_min, self.y_max);
        let mut num = vec![Complex64::new(0.0, 0.0); self.modes + 1];
        let mut den = 0.0;
        for (k, (&yk, &wk)) in self.ys.iter().zip(&self.weights).enumerate() {
            let diff = y - yk;
            if diff == 0.0 {
                return self.values[k].clone();
            }
            let c = wk / diff;
            den += c;
            for (acc, v) in num.iter_mut().zip(&self.values[k]) {
                *acc += *v * c;
            }
        }
        num.into_iter().map(|z| z / den).collect()
    }
}

/// `a(u_i)` for increasing `u_i`: one full solve at the top node, then Newton
/// on `κ(a) = E(a′) − a²K(a′)` (`dκ/da = −aK(a′)`) from the neighbour.
fn node_moduli(us: &[f64], delta: f64) -> Result<Vec<f64>> {
    let top = *us.last().expect("nonempty node list");
    let mut a = kappa_map::solve_a_with(top, delta)?;
    let mut out = vec![0.0; us.len()];
    for (slot, &u) in out.iter_mut().zip(us).rev() {
        let mut converged = false;
        for _ in 0..50 {
            let a_prime = ((1.0 - a) * (1.0 + a)).sqrt();
            let p = pair_from_moduli(a, a_prime);
            let step = (p.e_prime - a * a * p.k_prime - u) / (a * p.k_prime);
            let next = (a + step).clamp(0.5 * a, 0.5 * (1.0 + a));
            let done = (next - a).abs() <= 4.0 * f64::EPSILON;
            a = next;
            if done {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                op: "tail_integral",
                detail: format!("modulus Newton iteration at u = {u}"),
            });
        }
        *slot = a;
    }
    Ok(out)
}

/// Value of the tail integral with its two parts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailResult {
    pub value: f64,
    /// `∫_0^κ a_0(u) du/u`.
    pub a0_integral: f64,
    /// `Σ_{n≥1} 2 Re I_n`.
    pub oscillatory: f64,
    pub warnings: Vec<String>,
}

/// Per-κ precomputation; evaluates `J(s, v)` for any `s` with `v = κs`.
#[derive(Debug, Clone)]
pub struct TailIntegrator {
    kappa: f64,
    modes: usize,
    bound: f64,
    /// panel nodes `u_0 < ... < u_{2P}`, geometric
    us: Vec<f64>,
    /// `V(u)/u`
    phase_rate: Vec<f64>,
    /// `u K(a′(u))`
    jacobian: Vec<f64>,
    /// `a_1..a_N` at each node
    coeffs: Vec<Vec<Complex64>>,
    a0_integral: f64,
}

impl TailIntegrator {
    pub fn new(kappa: f64, cfg: &Config) -> Result<Self> {
        Self::with_panels(kappa, cfg, PANELS)
    }

    pub fn with_panels(kappa: f64, cfg: &Config, panels: usize) -> Result<Self> {
        if !(kappa > 0.0 && kappa <= 1.0 - cfg.delta) {
            return Err(Error::domain("tail_integral", format!("kappa = {kappa} not in (0, {}]", 1.0 - cfg.delta)));
        }
        let u_min = cfg.u_min.min(kappa / 16.0);
        let table = ModeTable::new(u_min, kappa, cfg.cheb_nodes, cfg.modes)?;
        let count = 2 * panels + 1;
        let ratio = (kappa / u_min).ln() / (count - 1) as f64;
        let us: Vec<f64> = (0..count)
            .map(|i| if i == count - 1 { kappa } else { u_min * (ratio * i as f64).exp() })
            .collect();
        let moduli = node_moduli(&us, cfg.delta)?;
        let per_node: Vec<_> = us
            .par_iter()
            .zip(&moduli)
            .map(|(&u, &m)| {
                let d = kappa_map::from_modulus(u, m);
                let mut a = table.at(u);
                a.remove(0);
                (d.v_freq / u, u * d.pair.k_prime, a)
            })
            .collect();
        let mut phase_rate = Vec::with_capacity(count);
        let mut jacobian = Vec::with_capacity(count);
        let mut coeffs = Vec::with_capacity(count);
        for (g, j, a) in per_node {
            phase_rate.push(g);
            jacobian.push(j);
            coeffs.push(a);
        }
        // a_0 = O(u²): ∫_0^{u_min} a_0 du/u ≈ a_0(u_min)/2
        let q = Quadrature::gauss_legendre(A0_QUAD_ORDER)?;
        let a0_integral = q.integrate(u_min.ln(), kappa.ln(), |y| table.at(y.exp())[0].re) + 0.5 * table.at(u_min)[0].re;
        Ok(TailIntegrator {
            kappa,
            modes: cfg.modes,
            bound: cfg.tail_bound,
            us,
            phase_rate,
            jacobian,
            coeffs,
            a0_integral,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn a0_integral(&self) -> f64 {
        self.a0_integral
    }

    pub fn lower_cutoff(&self) -> f64 {
        self.us[0]
    }

    /// `J(s, κs)`.
    pub fn evaluate(&self, s: f64) -> Result<TailResult> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain("tail_integral", format!("s = {s} must be positive")));
        }
        let v = self.kappa * s;
        let w: Vec<f64> = self.phase_rate.iter().map(|g| v * g).collect();
        let frac: Vec<f64> = w.iter().map(|x| x - x.floor()).collect();
        let mut oscillatory = 0.0;
        for n in 1..=self.modes {
            let omega = 2.0 * PI * n as f64;
            let h = |i: usize| self.coeffs[i][n - 1] * (self.jacobian[i] / v);
            let phase = |i: usize| {
                let f = (n as f64 * frac[i]).fract();
                Complex64::from_polar(1.0, 2.0 * PI * f)
            };
            // below u_min: h(W) e^{iωW} / (iω)
            let mut total = h(0) * phase(0) / Complex64::new(0.0, omega);
            for p in 0..(self.us.len() - 1) / 2 {
                let (i0, i1, i2) = (2 * p, 2 * p + 1, 2 * p + 2);
                let t1 = w[i1] - w[i0];
                let t2 = w[i2] - w[i0];
                total += phase(i0) * filon_quadratic(t1, t2, [h(i0), h(i1), h(i2)], omega);
            }
            oscillatory += 2.0 * total.re;
        }
        let value = self.a0_integral + oscillatory;
        let mut warnings = Vec::new();
        if value.abs() > self.bound {
            warnings.push(format!(
                "tail integral {value:.3e} exceeds the configured bound {:.3e}",
                self.bound
            ));
        }
        Ok(TailResult {
            value,
            a0_integral: self.a0_integral,
            oscillatory,
            warnings,
        })
    }
}

/// `J(s, v)` with the default configuration.
pub fn tail_integral(s: f64, v: f64) -> Result<TailResult> {
    let cfg = Config::default();
    if !(s > 0.0) || !(v > 0.0 && v <= s * (1.0 - cfg.delta)) {
        return Err(Error::domain("tail_integral", format!("need 0 < v <= s(1-delta), got s = {s}, v = {v}")));
    }
    TailIntegrator::new(v / s, &cfg)?.evaluate(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_interpolates_direct_coefficients() {
        let table = ModeTable::new(1e-3, 0.3, 32, 4).unwrap();
        for u in [2e-3, 0.017, 0.2] {
            let direct = MContext::new(u).unwrap().fourier(4).unwrap().coeffs;
            let interp = table.at(u);
            for n in 0..=4 {
                assert!((direct[n] - interp[n]).norm() < 1e-12, "u={u} n={n}");
            }
        }
    }

    #[test]
    fn node_moduli_match_full_solve() {
        let us = [1e-4, 3e-3, 0.05, 0.2, 0.3];
        let fast = node_moduli(&us, 0.01).unwrap();
        for (u, a) in us.iter().zip(fast) {
            let full = kappa_map::solve_a(*u).unwrap();
            assert!((a - full).abs() < 1e-14, "u={u}: {a} vs {full}");
        }
    }

    #[test]
    fn panel_refinement_is_stable() {
        let cfg = Config::default();
        let coarse = TailIntegrator::new(0.3, &cfg).unwrap().evaluate(50.0).unwrap();
        let fine = TailIntegrator::with_panels(0.3, &cfg, 4 * PANELS).unwrap().evaluate(50.0).unwrap();
        assert!((coarse.value - fine.value).abs() < 2e-10, "{} vs {}", coarse.value, fine.value);
    }

    #[test]
    fn vanishes_with_kappa() {
        let small = tail_integral(100.0, 0.1).unwrap();
        let larger = tail_integral(100.0, 10.0).unwrap();
        assert!(small.value.abs() < 1e-3 && small.value.abs() < larger.value.abs());
    }

    #[test]
    fn domain() {
        assert!(tail_integral(10.0, 0.0).is_err());
        assert!(tail_integral(10.0, 10.0).is_err());
    }
}
