//! Gauss–Legendre rules on (−1, 1), with nodes and weights carried to
//! double-double accuracy for the high-precision Nyström path.

use std::f64::consts::PI;

use super::dd::Dd;
use super::linalg::Scalar;
use crate::error::{Error, Result};

/// An `n`-point Gauss–Legendre rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    nodes: Vec<Dd>,
    weights: Vec<Dd>,
}

/// `(P_n(x), P_{n−1}(x))` by the three-term recurrence.
fn legendre<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::ONE;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = (T::from_f64(2.0 * kf + 1.0) * x * p1 - T::from_f64(kf) * p0) / T::from_f64(kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Newton step `x − P_n/P_n′` and the derivative at `x`.
fn newton<T: Scalar>(n: usize, x: T) -> (T, T) {
    let (p, pm1) = legendre(n, x);
    let dp = T::from_f64(n as f64) * (x * p - pm1) / (x * x - T::ONE);
    (x - p / dp, dp)
}

impl Quadrature {
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("gauss_legendre", "order must be positive"));
        }
        if n == 1 {
            return Ok(Quadrature {
                nodes: vec![Dd::ZERO],
                weights: vec![Dd::new(2.0)],
            });
        }
        let half = n / 2;
        let mut nodes = vec![Dd::ZERO; n];
        let mut weights = vec![Dd::ZERO; n];
        for i in 0..half {
            // Tricomi's initial guess for the i-th largest root
            let nf = n as f64;
            let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
            let mut x = theta.cos() * (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf));
            for _ in 0..100 {
                let (next, _) = newton(n, x);
                let done = (next - x).abs() <= 2.0 * f64::EPSILON * next.abs();
                x = next;
                if done {
                    break;
                }
            }
            let mut xd = Dd::new(x);
            for _ in 0..2 {
                xd = newton(n, xd).0;
            }
            let (_, dp) = newton(n, xd);
            let w = Dd::new(2.0) / ((Dd::ONE - xd * xd) * dp * dp);
            nodes[i] = -xd;
            weights[i] = w;
            nodes[n - 1 - i] = xd;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            let (_, dp) = newton(n, Dd::ZERO);
            nodes[half] = Dd::ZERO;
            weights[half] = Dd::new(2.0) / (dp * dp);
        }
        Ok(Quadrature { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.nodes.iter().map(|x| x.to_f64()).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.weights.iter().map(|x| x.to_f64()).collect()
    }

    /// Nodes and weights converted to the requested scalar type.
    pub fn rule<T: ScalarFromDd>(&self) -> (Vec<T>, Vec<T>) {
        (
            self.nodes.iter().map(|&x| T::from_dd(x)).collect(),
            self.weights.iter().map(|&x| T::from_dd(x)).collect(),
        )
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w.to_f64() * f(mid + half * x.to_f64()))
            .sum::<f64>()
            * half
    }
}

/// Scalars that can receive a double-double value without losing what they
/// can represent.
pub trait ScalarFromDd: Scalar {
    fn from_dd(x: Dd) -> Self;
}

impl ScalarFromDd for f64 {
    fn from_dd(x: Dd) -> Self {
        x.to_f64()
    }
}

impl ScalarFromDd for Dd {
    fn from_dd(x: Dd) -> Self {
        x
    }
}

/// Plain `(nodes, weights)` of the `n`-point rule.
pub fn gauss_legendre_f64(n: usize) -> (Vec<f64>, Vec<f64>) {
    let q = Quadrature::gauss_legendre(n.max(1)).expect("positive order");
    (q.nodes(), q.weights())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_increase() {
        for n in [1, 2, 5, 40, 121, 400] {
            let q = Quadrature::gauss_legendre(n).unwrap();
            let (x, w) = q.rule::<Dd>();
            let total = w.iter().fold(Dd::ZERO, |acc, &wi| acc + wi);
            assert!((total - 2.0).to_f64().abs() < 1e-28, "n = {n}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            assert!(w.iter().all(|wi| wi.hi > 0.0));
        }
    }

    #[test]
    fn exact_on_high_degree_monomials() {
        let n = 20;
        let q = Quadrature::gauss_legendre(n).unwrap();
        let (x, w) = q.rule::<Dd>();
        for deg in [0usize, 2, 10, 2 * n - 2] {
            let mut acc = Dd::ZERO;
            for (xi, wi) in x.iter().zip(&w) {
                let mut p = Dd::ONE;
                for _ in 0..deg {
                    p *= *xi;
                }
                acc += *wi * p;
            }
            // ∫ x^deg = 2/(deg+1)
            let err = acc * (deg as f64 + 1.0) - 2.0;
            assert!(err.to_f64().abs() < 1e-28, "degree {deg}: {err:?}");
        }
    }

    #[test]
    fn three_point_rule() {
        let (x, w) = gauss_legendre_f64(3);
        assert!((x[2] - 0.6f64.sqrt()).abs() < 1e-16);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn integrates_oscillatory_function() {
        let q = Quadrature::gauss_legendre(60).unwrap();
        let got = q.integrate(0.0, 3.0, |t| (5.0 * t).cos());
        assert!((got - 15f64.sin() / 5.0).abs() < 1e-15);
    }
}
