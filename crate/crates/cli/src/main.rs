use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sine_gas::asympt::{
    dlogdet_expansion, dlogdet_oscillation, extended_expansion, fh_toeplitz_expansion, fixed_v_expansion,
    gap_expansion, phase, transition_expansion, AsymptoticResult,
};
use sine_gas::kappa_map::{self, phase_identity_residual};
use sine_gas::mfun::{MContext, TailIntegrator};
use sine_gas::oracles::{
    auto_order, fredholm_dlogdet_ds_with, fredholm_logdet_with, toeplitz_logdet, GasPoint, Method, NystromOptions,
    Quadrature,
};
use sine_gas::scan::{self, Grid, OrderPolicy, ScanSpec};
use sine_gas::verify::{self, Suite};
use sine_gas::{Config, Error, Result};

#[derive(Parser)]
#[command(name = "sine-gas", version, about = "Sine-kernel determinant ln det(I − γK_s): oracles and asymptotics")]
struct Cli {
    /// Flat key = value configuration file (overrides SINE_GAS_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ln det(I − γK_s) by Nyström quadrature or the Toeplitz limit.
    Det(DetArgs),
    /// ∂_s ln det(I − γK_s) by Nyström quadrature.
    Dlogdet(DlogdetArgs),
    /// ln D_n of the discretised symbol.
    Toeplitz(ToeplitzArgs),
    /// One asymptotic expansion at a point.
    Asym(AsymArgs),
    /// The oscillatory function M(x, κ), its Fourier modes and the tail integral.
    Mfun(MfunArgs),
    /// Elliptic data for a given κ.
    Kappa(KappaArgs),
    /// Oracle-vs-asymptotics comparison over an (s, v) grid.
    Scan(ScanArgs),
    /// Run the acceptance criteria.
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Copy)]
#[group(required = true, multiple = false)]
struct Coupling {
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// v = −½ ln(1 − γ).
    #[arg(long, allow_negative_numbers = true)]
    v: Option<f64>,
}

impl Coupling {
    fn point(self, s: f64) -> Result<GasPoint> {
        match (self.gamma, self.v) {
            (Some(g), _) => GasPoint::from_gamma(s, g),
            (_, Some(v)) => GasPoint::from_v(s, v),
            _ => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DetMethod {
    Nystrom,
    Toeplitz,
}

#[derive(Args)]
struct DetArgs {
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    #[command(flatten)]
    coupling: Coupling,
    /// Gauss–Legendre order (default: resolved from s).
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long, value_enum, default_value = "nystrom")]
    method: DetMethod,
    /// Toeplitz matrix size.
    #[arg(long, default_value_t = 400)]
    n: usize,
}

#[derive(Args)]
struct DlogdetArgs {
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    #[command(flatten)]
    coupling: Coupling,
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Args)]
struct ToeplitzArgs {
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    #[command(flatten)]
    coupling: Coupling,
    #[arg(long, default_value_t = 400)]
    n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum AsymKind {
    Gap,
    FixedV,
    Extended,
    Transition,
    FhToeplitz,
    Dlogdet,
}

#[derive(Args)]
struct AsymArgs {
    #[arg(long, value_enum)]
    regime: AsymKind,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    #[arg(long, allow_negative_numbers = true)]
    v: Option<f64>,
    /// Alternative to --v for the transition regime: v = κs.
    #[arg(long, conflicts_with = "v", allow_negative_numbers = true)]
    kappa: Option<f64>,
    /// Matrix size for fh_toeplitz.
    #[arg(long, default_value_t = 400)]
    n: usize,
    /// Use this tail value instead of integrating it.
    #[arg(long, allow_negative_numbers = true)]
    tail: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct MfunArgs {
    #[arg(long, allow_negative_numbers = true)]
    kappa: f64,
    /// Evaluation points (comma-separated or repeated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    x: Vec<f64>,
    /// Fourier coefficients a_0..a_N.
    #[arg(long)]
    modes: Option<usize>,
    /// Also integrate the tail J at --s.
    #[arg(long, requires = "s")]
    tail: bool,
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct KappaArgs {
    #[arg(long, allow_negative_numbers = true)]
    kappa: f64,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("grid").required(true).args(["v", "kappa"])))]
struct ScanArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    s: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    v: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    kappa: Vec<f64>,
    /// Any of nystrom, toeplitz, gap, fixed_v, extended, transition, fh_toeplitz.
    #[arg(long, value_delimiter = ',', default_value = "nystrom,extended")]
    methods: Vec<String>,
    /// `auto` or a fixed Gauss–Legendre order.
    #[arg(long, default_value = "auto")]
    order: String,
    /// Toeplitz matrix size.
    #[arg(long, default_value_t = 400)]
    n: usize,
    /// Worker threads (default: available cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let loaded = match &cli.config {
        Some(path) => Config::load_from(Some(path)),
        None => Config::load(),
    };
    let cfg = match loaded {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match run(cli.command, &cfg) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    let body = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
    println!("{body}");
    ExitCode::FAILURE
}

fn run(cmd: Command, cfg: &Config) -> Result<ExitCode> {
    match cmd {
        Command::Det(a) => print_json(&det(&a, cfg)?)?,
        Command::Dlogdet(a) => print_json(&dlogdet(&a, cfg)?)?,
        Command::Toeplitz(a) => {
            let p = a.coupling.point(a.s)?;
            let r = toeplitz_logdet(a.n, p.s, p.gamma)?;
            print_json(&with_point(serde_json::to_value(r).map_err(format_err)?, &p))?
        }
        Command::Asym(a) => print_json(&asym(&a, cfg)?)?,
        Command::Mfun(a) => mfun(&a, cfg)?,
        Command::Kappa(a) => {
            let d = kappa_map::build_with(a.kappa, cfg.delta)?;
            let mut out = serde_json::to_value(d).map_err(format_err)?;
            out["a"] = json!(d.a());
            out["phase_identity_residual"] = json!(phase_identity_residual(&d));
            print_json(&out)?
        }
        Command::Scan(a) => scan_cmd(&a, cfg)?,
        Command::Verify(a) => return verify_cmd(&a, cfg),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_json(v: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(format_err)?;
    writeln!(out)?;
    Ok(())
}

fn format_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

fn with_point(mut v: Value, p: &GasPoint) -> Value {
    v["s"] = json!(p.s);
    v["gamma"] = json!(p.gamma);
    v["v"] = json!(p.v);
    v
}

fn nystrom(cfg: &Config, s: f64, nodes: Option<usize>) -> Result<(Quadrature, NystromOptions)> {
    let order = nodes.unwrap_or_else(|| auto_order(s) + cfg.nystrom_margin);
    let opts = NystromOptions {
        tolerance: cfg.nystrom_tol,
        ..NystromOptions::default()
    };
    Ok((Quadrature::gauss_legendre(order)?, opts))
}

fn det(a: &DetArgs, cfg: &Config) -> Result<Value> {
    let p = a.coupling.point(a.s)?;
    let r = match a.method {
        DetMethod::Nystrom => {
            let (q, opts) = nystrom(cfg, p.s, a.nodes)?;
            fredholm_logdet_with(&p, &q, &opts)?
        }
        DetMethod::Toeplitz => toeplitz_logdet(a.n, p.s, p.gamma)?,
    };
    Ok(with_point(serde_json::to_value(r).map_err(format_err)?, &p))
}

fn dlogdet(a: &DlogdetArgs, cfg: &Config) -> Result<Value> {
    let p = a.coupling.point(a.s)?;
    let (q, opts) = nystrom(cfg, p.s, a.nodes)?;
    let r = fredholm_dlogdet_ds_with(&p, &q, &opts)?;
    let mut out = with_point(serde_json::to_value(r).map_err(format_err)?, &p);
    if let Ok(asym) = dlogdet_expansion(p.s, p.v) {
        out["asymptotic"] = json!(asym);
        out["residual"] = json!(asym - r.value);
    }
    Ok(out)
}

fn asym(a: &AsymArgs, cfg: &Config) -> Result<Value> {
    let v = match (a.v, a.kappa) {
        (Some(v), _) => Some(v),
        (None, Some(k)) => Some(k * a.s),
        (None, None) => None,
    };
    let need_v = || v.ok_or_else(|| Error::Config("this regime needs --v or --kappa".into()));
    let r: AsymptoticResult = match a.regime {
        AsymKind::Gap => gap_expansion(a.s, cfg)?,
        AsymKind::FixedV => fixed_v_expansion(a.s, need_v()?, cfg)?,
        AsymKind::Extended => extended_expansion(a.s, need_v()?, cfg)?,
        AsymKind::FhToeplitz => fh_toeplitz_expansion(a.n, a.s, need_v()?, cfg)?,
        AsymKind::Transition => {
            let v = need_v()?;
            let tail = match a.tail {
                Some(t) => t,
                None => TailIntegrator::new(v / a.s, cfg)?.evaluate(a.s)?.value,
            };
            transition_expansion(a.s, v, tail, cfg)?
        }
        AsymKind::Dlogdet => {
            let v = need_v()?;
            return Ok(json!({
                "s": a.s,
                "v": v,
                "value": dlogdet_expansion(a.s, v)?,
                "oscillation": dlogdet_oscillation(a.s, v)?,
                "phase": phase(a.s, v)?,
            }));
        }
    };
    let mut out = serde_json::to_value(r).map_err(format_err)?;
    out["s"] = json!(a.s);
    if let Some(v) = v {
        out["v"] = json!(v);
    }
    Ok(out)
}

fn mfun(a: &MfunArgs, cfg: &Config) -> Result<()> {
    let ctx = MContext::from_data(kappa_map::build_with(a.kappa, cfg.delta)?)?;
    let xs: Vec<f64> = if a.x.is_empty() && a.modes.is_none() && !a.tail { vec![0.0] } else { a.x.clone() };
    let values = xs.iter().map(|&x| Ok((x, ctx.m(x)?))).collect::<Result<Vec<_>>>()?;
    let fourier = a.modes.map(|n| ctx.fourier(n)).transpose()?;
    let tail = match (a.tail, a.s) {
        (true, Some(s)) => Some(TailIntegrator::new(a.kappa, cfg)?.evaluate(s)?),
        _ => None,
    };

    match a.format {
        Format::Json => {
            let mut out = json!({ "kappa": a.kappa });
            if !values.is_empty() {
                out["m"] = values.iter().map(|&(x, m)| json!({ "x": x, "value": m })).collect();
            }
            if let Some(f) = &fourier {
                out["fourier"] = f
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, c)| json!({ "n": n, "re": c.re, "im": c.im }))
                    .collect();
            }
            if let Some(t) = &tail {
                out["tail"] = serde_json::to_value(t).map_err(format_err)?;
                out["s"] = json!(a.s);
            }
            print_json(&out)
        }
        Format::Csv => {
            let f = scan::format_float;
            let mut out = io::stdout().lock();
            writeln!(out, "# kappa = {}", f(a.kappa))?;
            if !values.is_empty() {
                writeln!(out, "# x,m")?;
                for (x, m) in &values {
                    writeln!(out, "{},{}", f(*x), f(*m))?;
                }
            }
            if let Some(t) = &fourier {
                writeln!(out, "\n# n,re,im")?;
                for (n, c) in t.coeffs.iter().enumerate() {
                    writeln!(out, "{n},{},{}", f(c.re), f(c.im))?;
                }
            }
            if let Some(t) = &tail {
                writeln!(out, "\n# s,tail,a0_integral,oscillatory")?;
                writeln!(
                    out,
                    "{},{},{},{}",
                    f(a.s.unwrap_or(f64::NAN)),
                    f(t.value),
                    f(t.a0_integral),
                    f(t.oscillatory)
                )?;
            }
            Ok(())
        }
    }
}

fn scan_cmd(a: &ScanArgs, cfg: &Config) -> Result<()> {
    let grid = if a.v.is_empty() { Grid::Kappa(a.kappa.clone()) } else { Grid::V(a.v.clone()) };
    let methods = a.methods.iter().map(|m| m.trim().parse::<Method>()).collect::<Result<Vec<_>>>()?;
    let order = match a.order.as_str() {
        "auto" => OrderPolicy::Auto,
        n => OrderPolicy::Fixed(
            n.parse()
                .map_err(|_| Error::Config(format!("--order expects `auto` or an integer, got {n:?}")))?,
        ),
    };
    let spec = ScanSpec {
        s_values: a.s.clone(),
        grid,
        methods,
        order,
        toeplitz_n: a.n,
    };
    let workers = a
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let records = scan::run_scan(&spec, cfg, workers)?;

    let mut out: Box<dyn Write> = match &a.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match a.format {
        Format::Csv => scan::write_csv(&mut out, &records)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &records).map_err(format_err)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn verify_cmd(a: &VerifyArgs, cfg: &Config) -> Result<ExitCode> {
    let suite: Suite = a.suite.parse()?;
    let mut all_passed = true;
    let mut reports = Vec::new();
    for &id in suite.criteria() {
        let r = verify::run_criterion(id, cfg);
        all_passed &= r.passed();
        if let ReportFormat::Text = a.format {
            println!("{r}");
        }
        reports.push(r);
    }
    if let ReportFormat::Json = a.format {
        print_json(&json!({ "suite": suite, "passed": all_passed, "criteria": reports }))?;
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
