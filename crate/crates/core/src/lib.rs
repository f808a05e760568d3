//! Numerics for the sine-kernel determinant `det(I − γK_s)`.

pub mod asympt;
pub mod config;
pub mod error;
pub mod kappa_map;
pub mod mfun;
pub mod oracles;
pub mod scan;
pub mod specfun;
pub mod verify;

pub use config::Config;
pub use error::{Error, Result};
