//! Grid scans comparing the exact evaluators with the expansions.
//!
//! One [`ComparisonRecord`] per `(s, v)` point, emitted in grid order
//! (`s` outer, `v` or κ inner) whatever the worker count. CSV layout:
//!
//! ```text
//! # sine-gas scan v1
//! # residual_<m> = <m> - oracle (toeplitz for fh_toeplitz, nystrom otherwise)
//! s,v,kappa,gamma,nystrom,accuracy_estimate,order,toeplitz,toeplitz_n,tail,
//!   gap,residual_gap,budget_gap, ... ,fh_toeplitz,residual_fh_toeplitz,budget_fh_toeplitz,status
//! ```
//!
//! Floats are written with 17 significant digits; missing values are empty.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::asympt::{
    extended_expansion, fh_toeplitz_expansion, fixed_v_expansion, gap_expansion, transition_expansion,
    AsymptoticResult,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::mfun::TailIntegrator;
use crate::oracles::{
    auto_order, fredholm_logdet_with, DetResult, GasPoint, Method, NystromOptions, Quadrature,
};

pub const CSV_VERSION_LINE: &str = "# sine-gas scan v1";

/// Expansions in column order.
pub const ASYMPTOTIC_METHODS: [Method; 5] =
    [Method::Gap, Method::Extended, Method::FixedV, Method::Transition, Method::FhToeplitz];

const LEADING_COLUMNS: [&str; 10] =
    ["s", "v", "kappa", "gamma", "nystrom", "accuracy_estimate", "order", "toeplitz", "toeplitz_n", "tail"];

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    V(Vec<f64>),
    Kappa(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderPolicy {
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub s_values: Vec<f64>,
    pub grid: Grid,
    pub methods: Vec<Method>,
    pub order: OrderPolicy,
    /// Toeplitz matrix size for `toeplitz` and `fh_toeplitz`.
    pub toeplitz_n: usize,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        let inner = match &self.grid {
            Grid::V(v) | Grid::Kappa(v) => v,
        };
        if self.s_values.is_empty() || inner.is_empty() {
            return Err(Error::Config("scan grid is empty".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods selected".into()));
        }
        if self.toeplitz_n == 0 {
            return Err(Error::Config("toeplitz_n must be positive".into()));
        }
        Ok(())
    }

    /// `(s, v)` pairs in emission order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &s in &self.s_values {
            match &self.grid {
                Grid::V(vs) => out.extend(vs.iter().map(|&v| (s, v))),
                Grid::Kappa(ks) => out.extend(ks.iter().map(|&k| (s, k * s))),
            }
        }
        out
    }

    fn wants(&self, m: Method) -> bool {
        self.methods.contains(&m)
    }
}

/// One expansion's value at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticEntry {
    pub value: f64,
    /// `value − oracle`.
    pub residual: Option<f64>,
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRecord {
    pub s: f64,
    pub v: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub nystrom: Option<f64>,
    pub accuracy_estimate: Option<f64>,
    pub order: Option<usize>,
    pub toeplitz: Option<f64>,
    pub toeplitz_n: Option<usize>,
    pub tail: Option<f64>,
    /// Keyed by method name.
    pub asymptotic: BTreeMap<String, AsymptoticEntry>,
    /// `ok`, or `;`-separated `skip:<method>` / `error:<method>:<kind>` markers.
    pub status: String,
}

impl ComparisonRecord {
    pub fn entry(&self, m: Method) -> Option<&AsymptoticEntry> {
        self.asymptotic.get(m.as_str())
    }
}

/// Per-κ tail integrators shared by every point on that ray.
struct TailCache {
    by_kappa: Vec<(f64, TailIntegrator)>,
}

impl TailCache {
    fn build(spec: &ScanSpec, cfg: &Config) -> Self {
        let mut by_kappa = Vec::new();
        if let (Grid::Kappa(ks), true) = (&spec.grid, spec.wants(Method::Transition)) {
            by_kappa = ks
                .par_iter()
                .filter_map(|&k| TailIntegrator::new(k, cfg).ok().map(|t| (k, t)))
                .collect();
        }
        TailCache { by_kappa }
    }

    fn evaluate(&self, s: f64, v: f64, cfg: &Config) -> Result<f64> {
        let kappa = v / s;
        if let Some((_, t)) = self.by_kappa.iter().find(|(k, _)| k * s == v) {
            return Ok(t.evaluate(s)?.value);
        }
        Ok(TailIntegrator::new(kappa, cfg)?.evaluate(s)?.value)
    }
}

fn nystrom(p: &GasPoint, order: OrderPolicy, cfg: &Config) -> Result<DetResult> {
    let n = match order {
        OrderPolicy::Auto => auto_order(p.s) + cfg.nystrom_margin,
        OrderPolicy::Fixed(n) => n,
    };
    let opts = NystromOptions {
        tolerance: cfg.nystrom_tol,
        ..Default::default()
    };
    fredholm_logdet_with(p, &Quadrature::gauss_legendre(n)?, &opts)
}

fn evaluate_point(s: f64, v: f64, spec: &ScanSpec, cfg: &Config, tails: &TailCache) -> ComparisonRecord {
    let mut markers: Vec<String> = Vec::new();
    let failure = |m: Method, e: &Error| format!("error:{}:{}", m.as_str(), e.kind());
    let point = GasPoint::from_v(s, v);
    let (gamma, kappa) = match &point {
        Ok(p) => (p.gamma, p.kappa),
        Err(_) => (f64::NAN, v / s),
    };
    let mut rec = ComparisonRecord {
        s,
        v,
        kappa,
        gamma,
        nystrom: None,
        accuracy_estimate: None,
        order: None,
        toeplitz: None,
        toeplitz_n: None,
        tail: None,
        asymptotic: BTreeMap::new(),
        status: String::new(),
    };
    let point = match point {
        Ok(p) => p,
        Err(e) => {
            rec.status = format!("error:point:{}", e.kind());
            return rec;
        }
    };

    let needs_nystrom = spec.wants(Method::Nystrom)
        || ASYMPTOTIC_METHODS.iter().any(|&m| m != Method::FhToeplitz && spec.wants(m));
    if needs_nystrom {
        match nystrom(&point, spec.order, cfg) {
            Ok(d) => {
                rec.nystrom = Some(d.log_det);
                rec.accuracy_estimate = Some(d.accuracy_estimate);
                rec.order = Some(d.order);
            }
            Err(e) => markers.push(failure(Method::Nystrom, &e)),
        }
    }
    if spec.wants(Method::Toeplitz) || spec.wants(Method::FhToeplitz) {
        match crate::oracles::toeplitz_logdet(spec.toeplitz_n, s, gamma) {
            Ok(d) => {
                rec.toeplitz = Some(d.log_det);
                rec.toeplitz_n = Some(spec.toeplitz_n);
            }
            Err(e) => markers.push(failure(Method::Toeplitz, &e)),
        }
    }

    for m in ASYMPTOTIC_METHODS {
        if !spec.wants(m) {
            continue;
        }
        let applicable = match m {
            Method::Gap => v.is_infinite(),
            Method::Transition => v.is_finite() && v > 0.0 && v <= s * (1.0 - cfg.delta),
            _ => v.is_finite(),
        };
        if !applicable {
            markers.push(format!("skip:{}", m.as_str()));
            continue;
        }
        let result: Result<AsymptoticResult> = match m {
            Method::Gap => gap_expansion(s, cfg),
            Method::Extended => extended_expansion(s, v, cfg),
            Method::FixedV => fixed_v_expansion(s, v, cfg),
            Method::FhToeplitz => fh_toeplitz_expansion(spec.toeplitz_n, s, v, cfg),
            Method::Transition => tails.evaluate(s, v, cfg).and_then(|tail| {
                rec.tail = Some(tail);
                transition_expansion(s, v, tail, cfg)
            }),
            Method::Nystrom | Method::Toeplitz => unreachable!(),
        };
        match result {
            Ok(a) => {
                let oracle = if m == Method::FhToeplitz { rec.toeplitz } else { rec.nystrom };
                rec.asymptotic.insert(
                    m.as_str().to_string(),
                    AsymptoticEntry {
                        value: a.total,
                        residual: oracle.map(|o| a.total - o),
                        budget: a.error_budget,
                    },
                );
            }
            Err(e) => markers.push(failure(m, &e)),
        }
    }
    rec.status = if markers.is_empty() { "ok".into() } else { markers.join(";") };
    rec
}

/// Evaluates every grid point on a pool of `workers` threads.
pub fn run_scan(spec: &ScanSpec, cfg: &Config, workers: usize) -> Result<Vec<ComparisonRecord>> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let points = spec.points();
    Ok(pool.install(|| {
        let tails = TailCache::build(spec, cfg);
        points
            .par_iter()
            .map(|&(s, v)| evaluate_point(s, v, spec, cfg, &tails))
            .collect()
    }))
}

pub fn csv_header() -> Vec<String> {
    let mut cols: Vec<String> = LEADING_COLUMNS.iter().map(|c| c.to_string()).collect();
    for m in ASYMPTOTIC_METHODS {
        let name = m.as_str();
        cols.push(name.to_string());
        cols.push(format!("residual_{name}"));
        cols.push(format!("budget_{name}"));
    }
    cols.push("status".into());
    cols
}

/// 17 significant digits, which round-trips every finite double.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn record_fields(r: &ComparisonRecord) -> Vec<String> {
    let mut f = vec![
        format_float(r.s),
        format_float(r.v),
        format_float(r.kappa),
        format_float(r.gamma),
        opt_float(r.nystrom),
        opt_float(r.accuracy_estimate),
        r.order.map(|n| n.to_string()).unwrap_or_default(),
        opt_float(r.toeplitz),
        r.toeplitz_n.map(|n| n.to_string()).unwrap_or_default(),
        opt_float(r.tail),
    ];
    for m in ASYMPTOTIC_METHODS {
        match r.entry(m) {
            Some(e) => {
                f.push(format_float(e.value));
                f.push(opt_float(e.residual));
                f.push(format_float(e.budget));
            }
            None => f.extend([String::new(), String::new(), String::new()]),
        }
    }
    f.push(r.status.clone());
    f
}

pub fn write_csv<W: Write>(mut out: W, records: &[ComparisonRecord]) -> Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    writeln!(out, "# residual_<m> = <m> - oracle (toeplitz for fh_toeplitz, nystrom otherwise)")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header())?;
    for r in records {
        w.write_record(record_fields(r))?;
    }
    w.flush()?;
    Ok(())
}

fn parse_float(field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| Error::Format(format!("cannot parse {field:?} as a number")))
}

fn parse_opt_float(field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_float(field).map(Some)
    }
}

fn parse_opt_usize(field: &str) -> Result<Option<usize>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<usize>()
        .map(Some)
        .map_err(|_| Error::Format(format!("cannot parse {field:?} as an integer")))
}

/// Reads back what [`write_csv`] wrote.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<ComparisonRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != csv_header() {
        return Err(Error::Format("unexpected column layout".into()));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let g = |i: usize| row.get(i).unwrap_or("");
        let mut rec = ComparisonRecord {
            s: parse_float(g(0))?,
            v: parse_float(g(1))?,
            kappa: parse_float(g(2))?,
            gamma: parse_float(g(3))?,
            nystrom: parse_opt_float(g(4))?,
            accuracy_estimate: parse_opt_float(g(5))?,
            order: parse_opt_usize(g(6))?,
            toeplitz: parse_opt_float(g(7))?,
            toeplitz_n: parse_opt_usize(g(8))?,
            tail: parse_opt_float(g(9))?,
            asymptotic: BTreeMap::new(),
            status: String::new(),
        };
        let mut col = LEADING_COLUMNS.len();
        for m in ASYMPTOTIC_METHODS {
            if !g(col).is_empty() {
                rec.asymptotic.insert(
                    m.as_str().to_string(),
                    AsymptoticEntry {
                        value: parse_float(g(col))?,
                        residual: parse_opt_float(g(col + 1))?,
                        budget: parse_float(g(col + 2))?,
                    },
                );
            }
            col += 3;
        }
        rec.status = g(col).to_string();
        out.push(rec);
    }
    Ok(out)
}
