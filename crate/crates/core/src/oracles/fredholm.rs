//! Nyström discretization of `det(I − γK_s)` on `L²(−1, 1)`.

use std::f64::consts::PI;

use serde::Serialize;

use super::dd::Dd;
use super::gas::{DetResult, GasPoint, Method, Precision};
use super::linalg::{Lu, Matrix, Scalar};
use super::quadrature::{Quadrature, ScalarFromDd};
use crate::error::{Error, Result};

/// Double-double is used when the smallest eigenvalue of `I − γK_s` drops
/// below this.
const DD_THRESHOLD: f64 = 1e-4;

/// Knobs for a Nyström evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NystromOptions {
    pub precision: Precision,
    /// Accepted `|value(n) − value(2n)|`, relative to `max(1, |value|)`.
    pub tolerance: f64,
    /// Run the order-doubling check.
    pub estimate: bool,
}

impl Default for NystromOptions {
    fn default() -> Self {
        NystromOptions {
            precision: Precision::Auto,
            tolerance: 1e-9,
            estimate: true,
        }
    }
}

/// `∂_s ln det(I − γK_s)` with its order-doubling estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivResult {
    pub value: f64,
    pub accuracy_estimate: f64,
    pub order: usize,
    pub precision: Precision,
}

/// Smallest order resolving the kernel: `ceil(1.3·2s/π) + 40`.
pub fn required_order(s: f64) -> usize {
    (1.3 * 2.0 * s / PI).ceil() as usize + 40
}

/// Default order: [`required_order`], raised to `s + 4s^{1/3} + 40` once the
/// kernel's oscillation outgrows the minimum (around `s ≈ 150`).
pub fn auto_order(s: f64) -> usize {
    required_order(s).max((s + 4.0 * s.cbrt()).ceil() as usize + 40)
}

fn resolve_precision(p: &GasPoint, requested: Precision) -> Precision {
    match requested {
        Precision::Auto => {
            // 1 − λ_0(K_s) ≈ 4√(πs) e^{−2s}
            let floor = p.one_minus_gamma().max(4.0 * (PI * p.s).sqrt() * (-2.0 * p.s).exp());
            if floor < DD_THRESHOLD {
                Precision::DoubleDouble
            } else {
                Precision::Double
            }
        }
        other => other,
    }
}

trait GammaOf: Scalar {
    fn gamma_of(p: &GasPoint) -> Self;
}

impl GammaOf for f64 {
    fn gamma_of(p: &GasPoint) -> Self {
        p.gamma
    }
}

impl GammaOf for Dd {
    fn gamma_of(p: &GasPoint) -> Self {
        if p.v < 1.0 {
            Dd::new(p.gamma)
        } else {
            // exact 1 − e^{−2v}, even when it rounds to 1 in double
            Dd::ONE - Dd::new(p.one_minus_gamma())
        }
    }
}

/// Symmetric matrices `I − γ W^{1/2} K W^{1/2}` and, optionally,
/// `W^{1/2} ∂_sK W^{1/2}`.
fn assemble<T: ScalarFromDd + GammaOf>(p: &GasPoint, q: &Quadrature, with_ds: bool) -> (Matrix<T>, Option<Matrix<T>>) {
    let n = q.order();
    let (x, w) = q.rule::<T>();
    let sw: Vec<T> = w.iter().map(|&wi| wi.sqrt()).collect();
    let gamma = T::gamma_of(p);
    let s = T::from_f64(p.s);
    let mut a = Matrix::zeros(n);
    let mut b = if with_ds { Some(Matrix::zeros(n)) } else { None };
    for i in 0..n {
        let diag = sw[i] * sw[i];
        a.set(i, i, T::ONE - gamma * diag * s / T::PI);
        if let Some(b) = b.as_mut() {
            b.set(i, i, diag / T::PI);
        }
        for j in i + 1..n {
            let d = x[i] - x[j];
            let arg = s * d;
            let ww = sw[i] * sw[j];
            let k = arg.sin() / (T::PI * d);
            let aij = -(gamma * ww * k);
            a.set(i, j, aij);
            a.set(j, i, aij);
            if let Some(b) = b.as_mut() {
                let bij = ww * arg.cos() / T::PI;
                b.set(i, j, bij);
                b.set(j, i, bij);
            }
        }
    }
    (a, b)
}

fn logdet_at<T: ScalarFromDd + GammaOf>(p: &GasPoint, q: &Quadrature) -> Result<f64> {
    let (a, _) = assemble::<T>(p, q, false);
    let d = Lu::factor(a)?.log_det();
    if d.sign < 0.0 {
        return Err(Error::NegativeDeterminant { log_abs: d.log_abs });
    }
    Ok(d.log_abs)
}

fn dlogdet_at<T: ScalarFromDd + GammaOf>(p: &GasPoint, q: &Quadrature) -> Result<f64> {
    let (a, b) = assemble::<T>(p, q, true);
    let b = b.expect("derivative matrix requested");
    let n = a.dim();
    let lu = Lu::factor(a)?;
    let mut trace = T::ZERO;
    let mut col = vec![T::ZERO; n];
    for j in 0..n {
        for (i, c) in col.iter_mut().enumerate() {
            *c = b.get(i, j);
        }
        trace = trace + lu.solve(&col)[j];
    }
    Ok(-(T::gamma_of(p) * trace).to_f64())
}

fn dispatch<F64, DD>(precision: Precision, f64_path: F64, dd_path: DD) -> Result<f64>
where
    F64: FnOnce() -> Result<f64>,
    DD: FnOnce() -> Result<f64>,
{
    match precision {
        Precision::DoubleDouble => dd_path(),
        _ => f64_path(),
    }
}

fn check_order(p: &GasPoint, q: &Quadrature) -> Result<()> {
    let need = required_order(p.s);
    if q.order() < need {
        return Err(Error::UnderResolved(format!(
            "order {} below ceil(1.3*2s/pi)+40 = {need} at s = {}",
            q.order(),
            p.s
        )));
    }
    Ok(())
}

/// `ln det(I − γK_s)` with the default options.
pub fn fredholm_logdet(p: &GasPoint, q: &Quadrature) -> Result<DetResult> {
    fredholm_logdet_with(p, q, &NystromOptions::default())
}

/// `ln det(I − γK_s)` at the smallest resolving order.
pub fn fredholm_logdet_auto(p: &GasPoint) -> Result<DetResult> {
    fredholm_logdet(p, &Quadrature::gauss_legendre(auto_order(p.s))?)
}

pub fn fredholm_logdet_with(p: &GasPoint, q: &Quadrature, opts: &NystromOptions) -> Result<DetResult> {
    check_order(p, q)?;
    let precision = resolve_precision(p, opts.precision);
    let eval = |q: &Quadrature| dispatch(precision, || logdet_at::<f64>(p, q), || logdet_at::<Dd>(p, q));
    let value = eval(q)?;
    let accuracy_estimate = if opts.estimate {
        let fine = eval(&Quadrature::gauss_legendre(2 * q.order())?)?;
        let est = (value - fine).abs();
        if est > opts.tolerance * value.abs().max(1.0) {
            return Err(Error::NonConvergence {
                op: "fredholm_logdet",
                detail: format!("order-doubling difference {est:e} at n = {}", q.order()),
            });
        }
        est
    } else {
        f64::NAN
    };
    Ok(DetResult {
        log_det: value,
        method: Method::Nystrom,
        accuracy_estimate,
        order: q.order(),
        precision,
        gamma_substituted: precision == Precision::Double && p.is_saturated() && p.v.is_finite(),
    })
}

/// `∂_s ln det(I − γK_s) = −γ tr[(I − γK_s)^{−1} ∂_sK_s]`.
pub fn fredholm_dlogdet_ds(p: &GasPoint, q: &Quadrature) -> Result<DerivResult> {
    fredholm_dlogdet_ds_with(p, q, &NystromOptions::default())
}

pub fn fredholm_dlogdet_ds_with(p: &GasPoint, q: &Quadrature, opts: &NystromOptions) -> Result<DerivResult> {
    check_order(p, q)?;
    let precision = resolve_precision(p, opts.precision);
    let eval = |q: &Quadrature| dispatch(precision, || dlogdet_at::<f64>(p, q), || dlogdet_at::<Dd>(p, q));
    let value = eval(q)?;
    let accuracy_estimate = if opts.estimate {
        let est = (value - eval(&Quadrature::gauss_legendre(2 * q.order())?)?).abs();
        if est > opts.tolerance * value.abs().max(1.0) {
            return Err(Error::NonConvergence {
                op: "fredholm_dlogdet_ds",
                detail: format!("order-doubling difference {est:e} at n = {}", q.order()),
            });
        }
        est
    } else {
        f64::NAN
    };
    Ok(DerivResult {
        value,
        accuracy_estimate,
        order: q.order(),
        precision,
    })
}
