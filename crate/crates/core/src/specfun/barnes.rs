//! Barnes G-function on the lines `1 ± iy`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::gamma::{log_gamma, zeta_int, BERNOULLI_EVEN};
use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// ζ′(−1) = 1/12 − ln A, A = Glaisher–Kinkelin constant.
pub const ZETA_PRIME_MINUS_ONE: f64 = -0.165_421_143_700_450_93;

const SERIES_RADIUS: f64 = 0.5;
const SERIES_TERMS: usize = 60;
const ASYMPTOTIC_RADIUS: f64 = 10.0;

fn zeta_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=SERIES_TERMS as u32 + 2).map(|k| if k < 2 { 0.0 } else { zeta_int(k) }).collect())
}

/// Taylor series of `ln G(1+z)` about `z = 0`, valid for `|z| < 1`.
pub(crate) fn log_barnes_series(z: Complex64) -> Complex64 {
    let ln_two_pi = (2.0 * PI).ln();
    let mut acc = z * (0.5 * ln_two_pi) - 0.5 * (z + (1.0 + EULER_GAMMA) * z * z);
    let zeta = zeta_table();
    let mut pow = z * z * z;
    for k in 2..=SERIES_TERMS {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += pow * (sign * zeta[k] / (k as f64 + 1.0));
        pow *= z;
    }
    acc
}

/// Large-|z| expansion of `ln G(1+z)`, `|arg z| < π`.
pub(crate) fn log_barnes_asymptotic(z: Complex64) -> Complex64 {
    let ln_z = z.ln();
    let z2 = z * z;
    let mut acc = 0.5 * z2 * ln_z - 0.75 * z2 + 0.5 * z * (2.0 * PI).ln() - ln_z / 12.0
        + ZETA_PRIME_MINUS_ONE;
    let inv2 = z2.inv();
    let mut pow = inv2;
    for k in 1..=10 {
        let kf = k as f64;
        acc += pow * (BERNOULLI_EVEN[k] / (4.0 * kf * (kf + 1.0)));
        pow *= inv2;
    }
    acc
}

/// Shift `Re z` upward with `G(2+z) = Γ(1+z) G(1+z)` until `|z+n|` is in the
/// asymptotic region.
pub(crate) fn log_barnes_recurrence(z: Complex64) -> Result<Complex64> {
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    let mut lg = log_gamma(w + 1.0)?;
    while w.norm() < ASYMPTOTIC_RADIUS || w.re < 0.0 {
        shift += lg;
        lg += (w + 1.0).ln();
        w += 1.0;
    }
    Ok(log_barnes_asymptotic(w) - shift)
}

/// `ln G(1+z)` for `Re z > −1`.
///
/// The imaginary part is the branch produced by summing principal
/// `ln Γ` values; only the real part is branch independent.
pub fn log_barnes_g1p(z: Complex64) -> Result<Complex64> {
    if !(z.re > -1.0) {
        return Err(Error::domain(
            "log_barnes_g1p",
            format!("requires Re z > -1, got {z}"),
        ));
    }
    if z.norm() <= SERIES_RADIUS {
        Ok(log_barnes_series(z))
    } else {
        log_barnes_recurrence(z)
    }
}

/// `2 ln G(1+iv/π) G(1−iv/π)`, a real number.
pub fn log_barnes_pair(v: f64) -> Result<f64> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::domain(
            "log_barnes_pair",
            format!("requires finite v >= 0, got {v}"),
        ));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let z = Complex64::new(0.0, v / PI);
    // the two factors are conjugate, so the sum of logs is 2·Re
    Ok(4.0 * log_barnes_g1p(z)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// ln G(1+z) = z ln(2π)/2 − z(z+1)/2 + z ln Γ(1+z) − ∫₀^z ln Γ(1+t) dt
    fn integral_oracle(z: Complex64) -> Complex64 {
        // 40-point Gauss–Legendre on the segment [0, z]
        let (x, w) = crate::oracles::quadrature::gauss_legendre_f64(40);
        let mut integral = Complex64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(&w) {
            let t = z * (0.5 * (xi + 1.0));
            integral += log_gamma(t + 1.0).unwrap() * (0.5 * wi);
        }
        integral *= z;
        z * (0.5 * (2.0 * PI).ln()) - 0.5 * z * (z + 1.0) + z * log_gamma(z + 1.0).unwrap()
            - integral
    }

    #[test]
    fn g_at_one_is_one() {
        assert_eq!(log_barnes_pair(0.0).unwrap(), 0.0);
        assert!(log_barnes_series(Complex64::new(0.0, 0.0)).norm() < 1e-300);
    }

    #[test]
    fn known_real_values() {
        // G(2) = 1, G(3) = 1, G(4) = 2, G(1/2) from ln G(1/2) = 0.0324...
        for (z, want) in [(1.0, 0.0), (2.0, 0.0), (3.0, 2f64.ln())] {
            let got = log_barnes_g1p(Complex64::new(z, 0.0)).unwrap();
            assert!((got.re - want).abs() < 1e-13, "G(1+{z})");
        }
        let g_half = log_barnes_series(Complex64::new(-0.5, 0.0)).re;
        // ln G(1/2) = (1/24)ln2 + (3/2)ζ'(−1) − (1/4)ln π
        let reference = 2f64.ln() / 24.0 + 1.5 * ZETA_PRIME_MINUS_ONE - 0.25 * PI.ln();
        assert_relative_eq!(g_half, reference, epsilon = 1e-14);
    }

    #[test]
    fn series_and_recurrence_agree_in_overlap() {
        for z in [
            Complex64::new(0.0, 0.45),
            Complex64::new(0.3, -0.35),
            Complex64::new(-0.4, 0.2),
        ] {
            let a = log_barnes_series(z);
            let b = log_barnes_recurrence(z).unwrap();
            assert!((a - b).norm() < 1e-13, "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn two_method_agreement_at_v_one() {
        let z = Complex64::new(0.0, 1.0 / PI);
        let series = log_barnes_g1p(z).unwrap();
        let oracle = integral_oracle(z);
        assert!((series - oracle).norm() < 1e-10);
        let pair = log_barnes_pair(1.0).unwrap();
        assert_relative_eq!(pair, 4.0 * oracle.re, epsilon = 1e-10);
    }

    #[test]
    fn recurrence_chain_at_v_pi() {
        // ν = i: ln G(1+i) = ln G(2+i) − ln Γ(1+i), with ln G(2+i) from the
        // asymptotic side of the recurrence
        let z = Complex64::new(0.0, 1.0);
        let chain = log_barnes_recurrence(z + 1.0).unwrap() - log_gamma(z + 1.0).unwrap();
        let oracle = integral_oracle(z);
        assert!((chain - oracle).norm() < 1e-10, "{chain} vs {oracle}");
        assert_relative_eq!(log_barnes_pair(PI).unwrap(), 4.0 * chain.re, epsilon = 1e-10);
    }

    #[test]
    fn barnes_recurrence_identity() {
        // G(1+z) = Γ(z) G(z), compared modulo 2πi
        for z in [
            Complex64::new(0.7, 0.3),
            Complex64::new(1.5, 2.0),
            Complex64::new(0.2, 6.0),
            Complex64::new(3.0, -1.0),
        ] {
            let lhs = log_barnes_g1p(z).unwrap();
            let rhs = log_gamma(z).unwrap() + log_barnes_g1p(z - 1.0).unwrap();
            let d = lhs - rhs;
            let wrapped = d.im - (2.0 * PI) * (d.im / (2.0 * PI)).round();
            assert!(d.re.abs() < 1e-10 * (1.0 + lhs.norm()), "{z}: {d}");
            assert!(wrapped.abs() < 1e-10 * (1.0 + lhs.norm()), "{z}: {d}");
        }
    }

    #[test]
    fn pair_is_real_and_conjugate_symmetric() {
        for v in [0.3, 1.0, 2.5, 9.0, 40.0] {
            let y = v / PI;
            let plus = log_barnes_g1p(Complex64::new(0.0, y)).unwrap();
            let minus = log_barnes_g1p(Complex64::new(0.0, -y)).unwrap();
            assert!((plus.im + minus.im).abs() < 1e-12 * (1.0 + plus.norm()));
            assert_relative_eq!(
                2.0 * (plus + minus).re,
                log_barnes_pair(v).unwrap(),
                max_relative = 1e-14
            );
        }
    }
}
