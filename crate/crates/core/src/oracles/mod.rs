//! Exact evaluators: Nyström quadrature of the Fredholm determinant and its
//! s-derivative, and finite Toeplitz determinants converging to it.

pub mod dd;
mod fredholm;
mod gas;
pub mod linalg;
pub mod quadrature;
mod toeplitz;

pub use fredholm::{
    fredholm_dlogdet_ds, fredholm_dlogdet_ds_with, fredholm_logdet, fredholm_logdet_auto,
    auto_order, fredholm_logdet_with, required_order, DerivResult, NystromOptions,
};
pub use gas::{DetResult, GasPoint, Method, Precision, V_SATURATION};
pub use quadrature::{gauss_legendre_f64, Quadrature};
pub use toeplitz::{symbol_coefficient, symbol_coefficient_numeric, symbol_eval, toeplitz_logdet};
