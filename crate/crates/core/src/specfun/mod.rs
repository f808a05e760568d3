//! Special functions: log-Gamma, Barnes G, complete elliptic integrals and
//! Jacobi theta functions.

mod barnes;
mod elliptic;
mod gamma;
mod theta;

pub use barnes::{log_barnes_g1p, log_barnes_pair, ZETA_PRIME_MINUS_ONE};
pub use elliptic::{elliptic_derivatives, elliptic_ke, EllipticPair};
pub use gamma::{arg_gamma_ratio, gamma, log_gamma};
pub use theta::{theta, ThetaContext, ThetaIndex, THETA_EPS};

pub(crate) use elliptic::pair_from_moduli;
