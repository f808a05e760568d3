//! Runtime constants: domain cuts, error-budget constants and numerical
//! policy.
//!
//! Sources, later ones winning:
//!
//! 1. built-in defaults ([`Config::default`]),
//! 2. a flat `key = value` file (`#` starts a comment),
//! 3. environment variables `SINE_GAS_<KEY>` with the key upper-cased.
//!
//! `SINE_GAS_CONFIG` names a file to use when none is given explicitly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default domain cut `κ ≤ 1 − δ`.
pub const DEFAULT_DELTA: f64 = 0.01;

pub const ENV_PREFIX: &str = "SINE_GAS_";
pub const ENV_FILE: &str = "SINE_GAS_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    /// Smallest `s` at which asymptotic formulas are evaluated without a
    /// warning.
    pub s0: f64,
    /// Domain cut `κ ≤ 1 − δ`.
    pub delta: f64,
    /// Largest `2s/n` for the Toeplitz expansion.
    pub t0: f64,
    /// Gap expansion budget `c_gap / s`.
    pub c_gap: f64,
    /// Fixed/extended-v budget `c1 v/s + c2 v³/s`.
    pub c1: f64,
    pub c2: f64,
    /// Transition budget `C0 + c s^{−1/4} ln s`.
    pub big_c0: f64,
    pub c_transition: f64,
    /// Toeplitz expansion budget `C0(v)/s` as `c_fh (1 + v²)/s`.
    pub c_fh: f64,
    /// Bound on the tail integral of M.
    pub tail_bound: f64,
    /// Fourier mode cutoff for M.
    pub modes: usize,
    /// Chebyshev nodes per mode table in `ln u`.
    pub cheb_nodes: usize,
    /// Lower cutoff of the tail integral in `u = v/t`.
    pub u_min: f64,
    /// Accepted Nyström order-doubling difference (relative).
    pub nystrom_tol: f64,
    /// Extra nodes above the resolving order for Nyström evaluations.
    pub nystrom_margin: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            s0: 2.0,
            delta: DEFAULT_DELTA,
            t0: 0.5,
            // fitted by tests/calibration.rs (twice the largest observed ratio)
            c_gap: 0.025,
            c1: 0.055,
            c2: 0.07,
            big_c0: 0.11,
            c_transition: 0.025,
            c_fh: 0.15,
            tail_bound: 0.11,
            modes: 32,
            cheb_nodes: 48,
            u_min: 1e-4,
            nystrom_tol: 1e-9,
            nystrom_margin: 0,
        }
    }
}

const KEYS: &[&str] = &[
    "s0",
    "delta",
    "t0",
    "c_gap",
    "c1",
    "c2",
    "big_c0",
    "c_transition",
    "c_fh",
    "tail_bound",
    "modes",
    "cheb_nodes",
    "u_min",
    "nystrom_tol",
    "nystrom_margin",
];

impl Config {
    /// Defaults, then `SINE_GAS_CONFIG` if set, then environment overrides.
    pub fn load() -> Result<Self> {
        let file = std::env::var(ENV_FILE).ok();
        Self::load_from(file.as_deref().map(Path::new))
    }

    /// Defaults, then `path` if given, then environment overrides.
    pub fn load_from(path: Option<&Path>) -> Result<Self> {
        let mut cfg = Config::default();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            cfg.apply_text(&text)?;
        }
        let env: BTreeMap<String, String> = std::env::vars().collect();
        cfg.apply_env(&env)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn apply_env(&mut self, env: &BTreeMap<String, String>) -> Result<()> {
        for key in KEYS {
            let name = format!("{ENV_PREFIX}{}", key.to_uppercase());
            if let Some(v) = env.get(&name) {
                self.set(key, v)?;
            }
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let float = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?} as a number")))
        };
        let int = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?} as an integer")))
        };
        match key {
            "s0" => self.s0 = float(value)?,
            "delta" => self.delta = float(value)?,
            "t0" => self.t0 = float(value)?,
            "c_gap" => self.c_gap = float(value)?,
            "c1" => self.c1 = float(value)?,
            "c2" => self.c2 = float(value)?,
            "big_c0" => self.big_c0 = float(value)?,
            "c_transition" => self.c_transition = float(value)?,
            "c_fh" => self.c_fh = float(value)?,
            "tail_bound" => self.tail_bound = float(value)?,
            "modes" => self.modes = int(value)?,
            "cheb_nodes" => self.cheb_nodes = int(value)?,
            "u_min" => self.u_min = float(value)?,
            "nystrom_tol" => self.nystrom_tol = float(value)?,
            "nystrom_margin" => self.nystrom_margin = int(value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        self.validate()
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta = {} not in (0,1)", self.delta)));
        }
        if self.modes == 0 || self.cheb_nodes < 4 {
            return Err(Error::Config("modes must be >= 1 and cheb_nodes >= 4".into()));
        }
        if !(self.u_min > 0.0) || !(self.t0 > 0.0) || !(self.s0 > 0.0) {
            return Err(Error::Config("u_min, t0 and s0 must be positive".into()));
        }
        Ok(())
    }

    /// The file format, with the current values.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let pairs: [(&str, String); 15] = [
            ("s0", self.s0.to_string()),
            ("delta", self.delta.to_string()),
            ("t0", self.t0.to_string()),
            ("c_gap", self.c_gap.to_string()),
            ("c1", self.c1.to_string()),
            ("c2", self.c2.to_string()),
            ("big_c0", self.big_c0.to_string()),
            ("c_transition", self.c_transition.to_string()),
            ("c_fh", self.c_fh.to_string()),
            ("tail_bound", self.tail_bound.to_string()),
            ("modes", self.modes.to_string()),
            ("cheb_nodes", self.cheb_nodes.to_string()),
            ("u_min", self.u_min.to_string()),
            ("nystrom_tol", self.nystrom_tol.to_string()),
            ("nystrom_margin", self.nystrom_margin.to_string()),
        ];
        for (k, v) in pairs {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let mut c = Config::default();
        c.c2 = 0.125;
        c.modes = 16;
        let mut d = Config::default();
        d.apply_text(&c.to_text()).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn comments_and_errors() {
        let mut c = Config::default();
        c.apply_text("# header\n\ndelta = 0.05 # trailing\n").unwrap();
        assert_eq!(c.delta, 0.05);
        assert!(c.apply_text("nonsense").is_err());
        assert!(c.apply_text("bogus = 1").is_err());
        assert!(c.apply_text("delta = 2").is_err());
        assert!(c.apply_text("modes = x").is_err());
    }

    #[test]
    fn env_overrides_file() {
        let mut c = Config::default();
        c.apply_text("t0 = 0.25").unwrap();
        let env: BTreeMap<String, String> =
            [("SINE_GAS_T0".to_string(), "0.75".to_string())].into_iter().collect();
        c.apply_env(&env).unwrap();
        assert_eq!(c.t0, 0.75);
    }
}
