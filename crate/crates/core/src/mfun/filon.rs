//! Filon quadrature with a quadratic amplitude on three arbitrary nodes.

use num_complex::Complex64;

/// `∫_0^Δ t^k e^{iωt} dt` for `k = 0, 1, 2`.
fn moments(delta: f64, omega: f64) -> [Complex64; 3] {
    let theta = omega * delta;
    let i = Complex64::new(0.0, 1.0);
    if theta.abs() < 2.0 {
        // Δ^{k+1} Σ_j (iθ)^j / (j! (k+j+1))
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..60 {
                acc += term / (k + j + 1) as f64;
                term *= i * theta / (j + 1) as f64;
                if term.norm() < 1e-20 {
                    break;
                }
            }
            *slot = acc * delta.powi(k as i32 + 1);
        }
        return out;
    }
    let e = Complex64::from_polar(1.0, theta);
    let inv = 1.0 / (i * omega);
    let m0 = (e - 1.0) * inv;
    let m1 = (delta * e - m0) * inv;
    let m2 = (delta * delta * e - 2.0 * m1) * inv;
    [m0, m1, m2]
}

/// `∫_0^{t₂} p(t) e^{iωt} dt` where `p` is the quadratic through
/// `(0, h₀)`, `(t₁, h₁)`, `(t₂, h₂)`, `0 < t₁ < t₂`.
pub fn filon_quadratic(t1: f64, t2: f64, h: [Complex64; 3], omega: f64) -> Complex64 {
    // Newton form p = h₀ + d₁ t + d₂ t (t − t₁)
    let d1 = (h[1] - h[0]) / t1;
    let d12 = (h[2] - h[1]) / (t2 - t1);
    let d2 = (d12 - d1) / t2;
    let [m0, m1, m2] = moments(t2, omega);
    h[0] * m0 + (d1 - d2 * t1) * m1 + d2 * m2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_quadratic(c: [f64; 3], delta: f64, omega: f64) -> Complex64 {
        // fine composite Simpson as an independent reference
        let n = 20_000;
        let h = delta / n as f64;
        let f = |t: f64| (c[0] + c[1] * t + c[2] * t * t) * Complex64::from_polar(1.0, omega * t);
        let mut acc = f(0.0) + f(delta);
        for k in 1..n {
            acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn exact_for_quadratics_at_all_frequencies() {
        let c = [0.3, -1.2, 0.7];
        let p = |t: f64| Complex64::new(c[0] + c[1] * t + c[2] * t * t, 0.0);
        for omega in [0.0, 1e-3, 0.9, 1.1, 7.0, 60.0] {
            let (t1, t2) = (0.35, 1.3);
            let got = filon_quadratic(t1, t2, [p(0.0), p(t1), p(t2)], omega);
            let want = exact_quadratic(c, t2, omega);
            assert!((got - want).norm() < 1e-12, "omega = {omega}: {got} vs {want}");
        }
    }

    #[test]
    fn moments_continuous_across_switch() {
        let below = moments(1.0, 2.0 - 4e-16);
        let above = moments(1.0, 2.0);
        for k in 0..3 {
            assert!((below[k] - above[k]).norm() < 1e-14, "{k}: {}", (below[k] - above[k]).norm());
        }
    }
}
