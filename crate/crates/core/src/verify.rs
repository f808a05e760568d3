//! Numerical acceptance checks, grouped into suites.
//!
//! Every check compares an exact evaluator with an expansion (or two exact
//! routes with each other) and reports the measured numbers next to its
//! verdict. Thresholds are the constants below.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::asympt::{
    dlogdet_oscillation, extended_expansion, fh_toeplitz_expansion, gap_expansion, transition_expansion,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::kappa_map::{self, series};
use crate::mfun::{fourier_coeffs, MContext, TailIntegrator};
use crate::oracles::{
    auto_order, fredholm_dlogdet_ds, fredholm_logdet_auto, toeplitz_logdet, GasPoint, Quadrature,
};
use crate::specfun::{elliptic_ke, gamma, log_barnes_g1p, log_gamma, ThetaContext, ThetaIndex};

// gap regime
pub const GAP_S: [f64; 3] = [5.0, 10.0, 20.0];
pub const GAP_RATIO: (f64, f64) = (1.5, 3.0);
pub const GAP_R20_MAX: f64 = 0.01;
pub const GAP_MAX_ORDER: usize = 120;
pub const GAP_SECONDS: f64 = 10.0;

// fixed v
pub const FIXED_V: f64 = 1.0;
pub const FIXED_S: [f64; 3] = [25.0, 50.0, 100.0];
pub const FIXED_SLOPE: (f64, f64) = (-1.3, -0.7);
pub const FIXED_R100_MAX: f64 = 5e-3;
pub const FIXED_MAX_ORDER: usize = 400;
pub const FIXED_SECONDS: f64 = 60.0;

// extended v = 0.8 s^{1/3}
pub const EXTENDED_S: [f64; 3] = [64.0, 125.0, 216.0];
pub const EXTENDED_V_FACTOR: f64 = 0.8;
/// Largest allowed ratio `ρ(last)/ρ(first)` of the scaled residuals.
pub const EXTENDED_GROWTH_MAX: f64 = 1.5;

// Toeplitz limit
pub const TOEPLITZ_S: f64 = 2.0;
pub const TOEPLITZ_GAMMA: f64 = 0.5;
pub const TOEPLITZ_N: [usize; 3] = [100, 200, 400];
pub const TOEPLITZ_SLOPE: (f64, f64) = (-1.3, -0.7);
pub const TOEPLITZ_ERR400_MAX: f64 = 1e-3;
pub const TOEPLITZ_SECONDS: f64 = 30.0;

// Fisher-Hartwig expansion of the Toeplitz determinant
pub const FH_S: f64 = 2.0;
pub const FH_V: [f64; 2] = [0.5, 1.0];
pub const FH_N: (usize, usize) = (400, 800);
pub const FH_MAX: f64 = 0.02;

// transition
pub const TRANSITION_KAPPA: f64 = 0.4;
pub const TRANSITION_S: [f64; 4] = [16.0, 24.0, 32.0, 40.0];
pub const TRANSITION_BOUND: f64 = 1.5;
/// Largest allowed `max|R|(second half) / max|R|(first half)`.
pub const TRANSITION_GROWTH_MAX: f64 = 2.0;

// derivative
pub const DERIV_V: f64 = 1.0;
pub const DERIV_S: (f64, f64, f64) = (30.0, 60.0, 0.25);
pub const DERIV_CORRELATION_MIN: f64 = 0.5;
pub const DERIV_AMPLITUDE_FACTOR: f64 = 3.0;

// M
pub const M_KAPPAS: [f64; 4] = [1e-3, 3e-3, 1e-2, 3e-2];
pub const M_SLOPE: (f64, f64) = (1.85, 2.15);
pub const M_GRID: usize = 64;
pub const A0_FACTOR: f64 = 0.5;

// tail
pub const TAIL_KAPPA: f64 = 0.3;
pub const TAIL_S: (f64, f64) = (100.0, 200.0);
pub const TAIL_RATIO: (f64, f64) = (1.5, 2.5);

// identities
pub const IDENTITY_TOL: f64 = 1e-10;
pub const IDENTITY_SECONDS: f64 = 1.0;

// series
pub const SERIES_KAPPAS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Informational only; never fails a suite.
    Reported,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Reported => "NOTE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2} s)",
            self.status, self.id, self.title, self.detail, self.seconds
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Specfun,
    Elliptic,
    Mfun,
    Oracle,
    Asympt,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u32] {
        match self {
            Suite::Specfun => &[11],
            Suite::Elliptic => &[12],
            Suite::Mfun => &[8, 9, 10],
            Suite::Oracle => &[4],
            Suite::Asympt => &[1, 2, 3, 5, 6, 7],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "specfun" => Suite::Specfun,
            "elliptic" => Suite::Elliptic,
            "mfun" => Suite::Mfun,
            "oracle" => Suite::Oracle,
            "asympt" => Suite::Asympt,
            "all" => Suite::All,
            _ => return Err(Error::domain("verify", format!("unknown suite {s:?}"))),
        })
    }
}

pub fn run_suite(suite: Suite, cfg: &Config) -> Vec<CriterionReport> {
    suite.criteria().iter().map(|&id| run_criterion(id, cfg)).collect()
}

pub fn run_criterion(id: u32, cfg: &Config) -> CriterionReport {
    let start = Instant::now();
    let (title, outcome): (&'static str, Result<(Status, String)>) = match id {
        1 => ("gap regime", gap_regime(cfg)),
        2 => ("fixed-v regime", fixed_v_regime(cfg)),
        3 => ("extended regime", extended_regime(cfg)),
        4 => ("Toeplitz limit", toeplitz_limit()),
        5 => ("Toeplitz expansion", fh_expansion(cfg)),
        6 => ("transition regime", transition_regime(cfg)),
        7 => ("derivative expansion", derivative_expansion()),
        8 => ("M small-kappa law", m_small_kappa()),
        9 => ("a0 conjecture probe", a0_probe(cfg)),
        10 => ("tail average", tail_average(cfg)),
        11 => ("special-function identities", identities()),
        12 => ("small-kappa series", series_suite()),
        _ => ("unknown", Err(Error::domain("verify", format!("no criterion {id}")))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (status, detail) = match outcome {
        Ok(v) => v,
        Err(e) => (Status::Fail, format!("error: {e}")),
    };
    // runtime caps are part of the verdict
    let cap = match id {
        1 => Some(GAP_SECONDS),
        2 => Some(FIXED_SECONDS),
        4 => Some(TOEPLITZ_SECONDS),
        11 => Some(IDENTITY_SECONDS),
        _ => None,
    };
    let (status, detail) = match cap {
        Some(c) if seconds > c && status == Status::Pass => (Status::Fail, format!("{detail}; runtime above {c} s")),
        _ => (status, detail),
    };
    CriterionReport {
        id,
        title,
        status,
        detail,
        seconds,
    }
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn within((lo, hi): (f64, f64), x: f64) -> bool {
    x >= lo && x <= hi
}

/// Least-squares slope of `ln|y|` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    linear_slope(&lx, &ly)
}

fn linear_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let mx = mean(xs);
    let my = mean(ys);
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let (mx, my) = (mean(xs), mean(ys));
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

fn gap_regime(cfg: &Config) -> Result<(Status, String)> {
    let mut r = Vec::new();
    let mut max_order = 0;
    for s in GAP_S {
        let det = fredholm_logdet_auto(&GasPoint::from_gamma(s, 1.0)?)?;
        max_order = max_order.max(det.order);
        r.push((det.log_det - gap_expansion(s, cfg)?.total).abs());
    }
    let ratio = r[1] / r[2];
    let ok = within(GAP_RATIO, ratio) && r[2] < GAP_R20_MAX && max_order <= GAP_MAX_ORDER;
    Ok((
        verdict(ok),
        format!(
            "R(5)={:.3e} R(10)={:.3e} R(20)={:.3e} R(10)/R(20)={ratio:.3} in [{}, {}], R(20) < {}, max order {max_order} <= {}",
            r[0], r[1], r[2], GAP_RATIO.0, GAP_RATIO.1, GAP_R20_MAX, GAP_MAX_ORDER
        ),
    ))
}

fn fixed_v_regime(cfg: &Config) -> Result<(Status, String)> {
    let mut r = Vec::new();
    let mut max_order = 0;
    for s in FIXED_S {
        let det = fredholm_logdet_auto(&GasPoint::from_v(s, FIXED_V)?)?;
        max_order = max_order.max(det.order);
        r.push(det.log_det - extended_expansion(s, FIXED_V, cfg)?.total);
    }
    let slope = loglog_slope(&FIXED_S, &r);
    let ok = within(FIXED_SLOPE, slope) && r[2].abs() < FIXED_R100_MAX && max_order <= FIXED_MAX_ORDER;
    Ok((
        verdict(ok),
        format!(
            "R={:.3e},{:.3e},{:.3e} slope={slope:.3} in [{}, {}], |R(100)| < {}, max order {max_order} <= {}",
            r[0], r[1], r[2], FIXED_SLOPE.0, FIXED_SLOPE.1, FIXED_R100_MAX, FIXED_MAX_ORDER
        ),
    ))
}

fn extended_regime(cfg: &Config) -> Result<(Status, String)> {
    let mut ratios = Vec::new();
    for s in EXTENDED_S {
        let v = EXTENDED_V_FACTOR * s.cbrt();
        let det = fredholm_logdet_auto(&GasPoint::from_v(s, v)?)?;
        let r = det.log_det - extended_expansion(s, v, cfg)?.total;
        ratios.push(r.abs() / (v / s + v.powi(3) / s));
    }
    let growth = ratios[ratios.len() - 1] / ratios[0];
    let ok = ratios.iter().all(|r| r.is_finite()) && growth <= EXTENDED_GROWTH_MAX;
    Ok((
        verdict(ok),
        format!(
            "|R|/(v/s+v^3/s)={:.4},{:.4},{:.4}, last/first={growth:.3} <= {}",
            ratios[0], ratios[1], ratios[2], EXTENDED_GROWTH_MAX
        ),
    ))
}

fn toeplitz_limit() -> Result<(Status, String)> {
    let det = fredholm_logdet_auto(&GasPoint::from_gamma(TOEPLITZ_S, TOEPLITZ_GAMMA)?)?;
    let mut err = Vec::new();
    for n in TOEPLITZ_N {
        err.push(toeplitz_logdet(n, TOEPLITZ_S, TOEPLITZ_GAMMA)?.log_det - det.log_det);
    }
    let ns: Vec<f64> = TOEPLITZ_N.iter().map(|&n| n as f64).collect();
    let slope = loglog_slope(&ns, &err);
    let ok = within(TOEPLITZ_SLOPE, slope) && err[2].abs() < TOEPLITZ_ERR400_MAX;
    Ok((
        verdict(ok),
        format!(
            "err={:.3e},{:.3e},{:.3e} slope={slope:.3} in [{}, {}], |err(400)| < {}",
            err[0], err[1], err[2], TOEPLITZ_SLOPE.0, TOEPLITZ_SLOPE.1, TOEPLITZ_ERR400_MAX
        ),
    ))
}

fn fh_expansion(cfg: &Config) -> Result<(Status, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for v in FH_V {
        let gamma = -(-2.0 * v).exp_m1();
        let mut r = [0.0; 2];
        for (slot, n) in r.iter_mut().zip([FH_N.0, FH_N.1]) {
            *slot = toeplitz_logdet(n, FH_S, gamma)?.log_det - fh_toeplitz_expansion(n, FH_S, v, cfg)?.total;
        }
        ok &= r[0].abs() < FH_MAX && r[1].abs() < r[0].abs();
        parts.push(format!("v={v}: R(400)={:.6e} R(800)={:.6e}", r[0], r[1]));
    }
    Ok((
        verdict(ok),
        format!("{}; need |R(400)| < {FH_MAX} and |R(800)| < |R(400)|", parts.join(", ")),
    ))
}

fn transition_regime(cfg: &Config) -> Result<(Status, String)> {
    let tail = TailIntegrator::new(TRANSITION_KAPPA, cfg)?;
    let mut r = Vec::new();
    for s in TRANSITION_S {
        let v = TRANSITION_KAPPA * s;
        let det = fredholm_logdet_auto(&GasPoint::from_v(s, v)?)?;
        let asym = transition_expansion(s, v, tail.evaluate(s)?.value, cfg)?;
        r.push((asym.total - det.log_det).abs());
    }
    let half = r.len() / 2;
    let early = r[..half].iter().cloned().fold(0.0, f64::max);
    let late = r[half..].iter().cloned().fold(0.0, f64::max);
    let growth = late / early;
    let ok = r.iter().all(|x| *x <= TRANSITION_BOUND) && growth <= TRANSITION_GROWTH_MAX;
    Ok((
        verdict(ok),
        format!(
            "|R|={:.3e},{:.3e},{:.3e},{:.3e} <= {TRANSITION_BOUND}, late/early max={growth:.3} <= {TRANSITION_GROWTH_MAX}",
            r[0], r[1], r[2], r[3]
        ),
    ))
}

fn derivative_expansion() -> Result<(Status, String)> {
    let (lo, hi, step) = DERIV_S;
    let count = ((hi - lo) / step).round() as usize + 1;
    let v = DERIV_V;
    let q = Quadrature::gauss_legendre(auto_order(hi))?;
    let mut rem = Vec::with_capacity(count);
    let mut model = Vec::with_capacity(count);
    for k in 0..count {
        let s = lo + step * k as f64;
        let d = fredholm_dlogdet_ds(&GasPoint::from_v(s, v)?, &q)?;
        rem.push(d.value - (-4.0 * v / PI + 2.0 * v * v / (PI * PI * s)));
        model.push(dlogdet_oscillation(s, v)?);
    }
    let corr = pearson(&rem, &model);
    let amp = std_dev(&rem) / std_dev(&model);
    let f = DERIV_AMPLITUDE_FACTOR;
    let ok = corr > DERIV_CORRELATION_MIN && amp >= 1.0 / f && amp <= f;
    Ok((
        verdict(ok),
        format!("{count} points, correlation={corr:.4} > {DERIV_CORRELATION_MIN}, std ratio={amp:.4} within factor {f}"),
    ))
}

fn m_small_kappa() -> Result<(Status, String)> {
    let mut sup = Vec::new();
    for kappa in M_KAPPAS {
        let ctx = MContext::new(kappa)?;
        let mut worst: f64 = 0.0;
        for j in 0..M_GRID {
            let x = j as f64 / M_GRID as f64;
            let lead = -kappa / (6.0 * PI) * (2.0 * PI * x).cos();
            worst = worst.max((ctx.m(x)? - lead).abs());
        }
        sup.push(worst);
    }
    let slope = loglog_slope(&M_KAPPAS, &sup);
    Ok((
        verdict(within(M_SLOPE, slope)),
        format!(
            "sup={:.3e},{:.3e},{:.3e},{:.3e} slope={slope:.4} in [{}, {}]",
            sup[0], sup[1], sup[2], sup[3], M_SLOPE.0, M_SLOPE.1
        ),
    ))
}

fn a0_probe(cfg: &Config) -> Result<(Status, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for kappa in M_KAPPAS {
        let a0 = fourier_coeffs(kappa, cfg.modes)?.coeffs[0].re;
        let scaled = a0.abs() / (kappa * kappa);
        ok &= scaled <= A0_FACTOR;
        parts.push(format!("{scaled:.3e}"));
    }
    let tag = if ok { "holds" } else { "violated (reported only)" };
    Ok((
        if ok { Status::Pass } else { Status::Reported },
        format!("|a0|/kappa^2={} vs {A0_FACTOR}: {tag}", parts.join(",")),
    ))
}

fn tail_average(cfg: &Config) -> Result<(Status, String)> {
    let tail = TailIntegrator::new(TAIL_KAPPA, cfg)?;
    let d1 = tail.evaluate(TAIL_S.0)?.oscillatory;
    let d2 = tail.evaluate(TAIL_S.1)?.oscillatory;
    let ratio = d1.abs() / d2.abs();
    Ok((
        verdict(within(TAIL_RATIO, ratio)),
        format!(
            "J-A0: s=100 {d1:.4e}, s=200 {d2:.4e}, ratio={ratio:.3} in [{}, {}]",
            TAIL_RATIO.0, TAIL_RATIO.1
        ),
    ))
}

fn identities() -> Result<(Status, String)> {
    let mut worst = [0.0f64; 5];
    // Legendre relation
    for a in [0.05, 0.3, 0.7, 0.95, 0.999_999] {
        let p = elliptic_ke(a)?;
        worst[0] = worst[0].max(p.legendre_residual().abs() / (PI / 2.0));
    }
    // θ₃⁴ = θ₀⁴ + θ₂⁴ and the heat equation
    for tau_im in [0.3, 1.0, 2.5] {
        let ctx = ThetaContext::new(tau_im)?;
        let z0 = Complex64::new(0.0, 0.0);
        let t3 = ctx.eval(ThetaIndex::Three, z0, 0, false).re.powi(4);
        let rhs = ctx.eval(ThetaIndex::Zero, z0, 0, false).re.powi(4) + ctx.eval(ThetaIndex::Two, z0, 0, false).re.powi(4);
        worst[1] = worst[1].max((t3 - rhs).abs() / t3);
        for x in [0.1, 0.37, 0.8] {
            let z = Complex64::new(x, 0.03);
            for j in [ThetaIndex::Zero, ThetaIndex::One, ThetaIndex::Two, ThetaIndex::Three] {
                let dt = ctx.eval(j, z, 0, true);
                let dxx = ctx.eval(j, z, 2, false) / Complex64::new(0.0, 4.0 * PI);
                worst[2] = worst[2].max((dt - dxx).norm() / dt.norm().max(dxx.norm()).max(1.0));
            }
        }
    }
    // |Γ(1−β)/Γ(β)| = |β| for β = iv/π
    for v in [0.1, 1.0, 4.0, 12.0] {
        let beta = Complex64::new(0.0, v / PI);
        let ratio = (log_gamma(1.0 - beta)? - log_gamma(beta)?).exp().norm();
        worst[3] = worst[3].max((ratio - beta.norm()).abs() / beta.norm());
    }
    // G(1+z) = Γ(z) G(z)
    for z in [Complex64::new(0.3, 0.2), Complex64::new(1.7, -0.4), Complex64::new(0.5, 2.0), Complex64::new(2.2, 3.1)] {
        let lhs = log_barnes_g1p(z)?;
        let rhs = log_barnes_g1p(z - 1.0)?;
        let g = gamma(z)?;
        let e = (lhs - rhs).exp();
        worst[4] = worst[4].max((e - g).norm() / g.norm());
    }
    let ok = worst.iter().all(|w| *w < IDENTITY_TOL);
    Ok((
        verdict(ok),
        format!(
            "legendre={:.1e} jacobi={:.1e} heat={:.1e} gamma-ratio={:.1e} barnes={:.1e} < {IDENTITY_TOL:e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    ))
}

fn series_suite() -> Result<(Status, String)> {
    let ks: Vec<f64> = (0..SERIES_KAPPAS).map(|i| 1e-3 * 10f64.powf(i as f64 / 4.0)).collect();
    let data = ks.iter().map(|&k| kappa_map::build(k)).collect::<Result<Vec<_>>>()?;
    let ra: Vec<f64> = data.iter().zip(&ks).map(|(d, &k)| d.a() - series::a_series(k)).collect();
    let rv: Vec<f64> = data.iter().zip(&ks).map(|(d, &k)| d.v_freq - series::v_series(k)).collect();
    let rt: Vec<f64> = data.iter().zip(&ks).map(|(d, &k)| (d.tau - series::tau_series(k)).norm()).collect();
    let rc: Vec<f64> = data.iter().zip(&ks).map(|(d, &k)| (d.c - series::c_series(k)).norm()).collect();
    let (sa, sv, st, sc) = (
        loglog_slope(&ks, &ra),
        loglog_slope(&ks, &rv),
        loglog_slope(&ks, &rt),
        loglog_slope(&ks, &rc),
    );
    let ok = (sa - 3.0).abs() < 0.1
        && sv > 1.7
        && sv < 2.1
        && st > 0.8
        && st < 1.2
        && rt.windows(2).all(|w| w[0] < w[1])
        && sc > 1.7
        && sc < 2.1;
    Ok((
        verdict(ok),
        format!("slopes a={sa:.3} (3+-0.1) V={sv:.3} (1.7,2.1) tau={st:.3} (0.8,1.2) c={sc:.3} (1.7,2.1)"),
    ))
}
