//! Complete elliptic integrals by the arithmetic–geometric mean.
//!
//! Both moduli are carried explicitly: `K(a′)` runs the AGM on `(1, a)`, so
//! no value is ever reconstructed from `sqrt(1 − a′²)` near the singular end.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};

const AGM_MAX_ITER: usize = 40;

/// `K`, `E` at modulus `a` and at the complementary modulus `a′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticPair {
    pub a: f64,
    pub a_prime: f64,
    pub k: f64,
    pub k_prime: f64,
    pub e: f64,
    pub e_prime: f64,
}

impl EllipticPair {
    /// `1 − a² = a′²`, formed without cancellation.
    pub fn a_prime_sq(&self) -> f64 {
        self.a_prime * self.a_prime
    }

    /// `E K′ + E′ K − K K′ − π/2`, zero by Legendre's relation.
    pub fn legendre_residual(&self) -> f64 {
        self.e * self.k_prime + self.e_prime * self.k - self.k * self.k_prime - FRAC_PI_2
    }
}

/// `(K(k), E(k))` given the modulus `k` and its complement `kp`.
///
/// `K = π / (2 AGM(1, k′))` and `E = K (1 − Σ 2^{n−1} c_n²)` with `c_0 = k`.
fn agm_ke(k: f64, kp: f64) -> (f64, f64) {
    let mut a = 1.0;
    let mut b = kp;
    let mut c = k;
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    for _ in 0..AGM_MAX_ITER {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let kk = FRAC_PI_2 / a;
    (kk, kk * (1.0 - sum))
}

/// Complete elliptic integrals at modulus `a ∈ (0, 1)` and at `a′ = √(1−a²)`.
pub fn elliptic_ke(a: f64) -> Result<EllipticPair> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain("elliptic_ke", format!("modulus {a} not in (0,1)")));
    }
    let a_prime = ((1.0 - a) * (1.0 + a)).sqrt();
    Ok(pair_from_moduli(a, a_prime))
}

pub(crate) fn pair_from_moduli(a: f64, a_prime: f64) -> EllipticPair {
    let (k, e) = agm_ke(a, a_prime);
    let (k_prime, e_prime) = agm_ke(a_prime, a);
    EllipticPair {
        a,
        a_prime,
        k,
        k_prime,
        e,
        e_prime,
    }
}

/// `(dK/da, dE/da)` from the closed forms
/// `dK/da = (E − a′²K)/(a a′²)` and `dE/da = (E − K)/a`.
pub fn elliptic_derivatives(p: &EllipticPair) -> (f64, f64) {
    let a = p.a;
    if a < 1e-4 {
        // leading terms of the a² series; the closed forms are 0/0 here
        let a2 = a * a;
        let dk = FRAC_PI_2 * (0.5 * a + 0.5625 * a * a2);
        let de = -FRAC_PI_2 * (0.5 * a + 0.1875 * a * a2);
        return (dk, de);
    }
    let dk = (p.e - p.a_prime_sq() * p.k) / (a * p.a_prime_sq());
    let de = (p.e - p.k) / a;
    (dk, de)
}
