//! Small-κ expansions of the elliptic map, truncated after the terms that
//! are known in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `a(κ) = 1 − 2κ/π − κ²/π² + O(κ³)`.
pub fn a_series(kappa: f64) -> f64 {
    1.0 - 2.0 * kappa / PI - kappa * kappa / (PI * PI)
}

/// Coefficient of `κ ln κ` inside `V = −(2/π)(1 + u₁ κ ln κ + v₁ κ + …)`.
pub const V_U1: f64 = 1.0 / PI;

/// Coefficient of `κ` inside the same bracket, `−(1 + ln 4π)/π`.
pub fn v_v1() -> f64 {
    -(1.0 + (4.0 * PI).ln()) / PI
}

/// `V(κ) = −(2/π)(1 + κ ln κ/π − (1 + ln 4π)κ/π) + O(κ² ln κ)`.
pub fn v_series(kappa: f64) -> f64 {
    -(2.0 / PI) * (1.0 + V_U1 * kappa * kappa.ln() + v_v1() * kappa)
}

/// `τ(κ) = −(2i/π) ln κ + (2i/π) ln 4π + o(1)`.
pub fn tau_series(kappa: f64) -> Complex64 {
    Complex64::new(0.0, (2.0 / PI) * ((4.0 * PI).ln() - kappa.ln()))
}

/// `c(κ) = (i/π)(1 − κ/π + …)`.
pub fn c_series(kappa: f64) -> Complex64 {
    Complex64::new(0.0, (1.0 - kappa / PI) / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kappa_map::build;

    fn slope(xs: &[f64], ys: &[f64]) -> f64 {
        let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
        let n = lx.len() as f64;
        let mx = lx.iter().sum::<f64>() / n;
        let my = ly.iter().sum::<f64>() / n;
        let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
        num / den
    }

    fn grid() -> Vec<f64> {
        (0..9).map(|i| 1e-3 * 10f64.powf(i as f64 / 4.0)).collect()
    }

    #[test]
    fn a_residual_is_cubic() {
        let k = grid();
        let r: Vec<f64> = k.iter().map(|&x| build(x).unwrap().a() - a_series(x)).collect();
        let m = slope(&k, &r);
        assert!((m - 3.0).abs() < 0.1, "slope {m}");
    }

    #[test]
    fn v_residual_is_quadratic_up_to_log() {
        let k = grid();
        let r: Vec<f64> = k.iter().map(|&x| build(x).unwrap().v_freq - v_series(x)).collect();
        let m = slope(&k, &r);
        assert!(m > 1.7 && m < 2.1, "slope {m}");
    }

    #[test]
    fn tau_and_c_leading_terms() {
        let k = grid();
        let rt: Vec<f64> = k.iter().map(|&x| (build(x).unwrap().tau - tau_series(x)).norm()).collect();
        assert!(rt.windows(2).all(|w| w[0] < w[1]));
        let mt = slope(&k, &rt);
        assert!(mt > 0.8 && mt < 1.2, "tau slope {mt}");
        let rc: Vec<f64> = k.iter().map(|&x| (build(x).unwrap().c - c_series(x)).norm()).collect();
        let mc = slope(&k, &rc);
        assert!(mc > 1.7 && mc < 2.1, "c slope {mc}");
    }
}
