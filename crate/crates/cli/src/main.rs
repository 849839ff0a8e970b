//! `ghcs`: batch driver emitting CSV/JSON for the verification and
//! figure-reproduction tasks of the library.

mod config;
mod output;
mod verify;

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ghcs::dynamics::density_scan;
use ghcs::kernel::kernel;
use ghcs::measure::{figure1_curves, figure1_scan, Figure1Curve, RadialMeasure, WeightForm};
use ghcs::quantize::{discrepancy_report, ladder_closed_form, quantize_symbol, ClosedSource, Ladder, Symbol};
use ghcs::thermal::{cs_moments_by_differences, cs_number_moments, thermal_rows, thermal_table};
use ghcs::util::{linspace, CsvTable};
use ghcs::{Complex64, Family};
use serde_json::json;

use config::{CommonArgs, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "ghcs", version, about = "Generalized hypergeometric coherent states: checks and tables")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CurveSet {
    /// the three caption regimes of the weight figure
    Figure1,
    /// one curve for the configured family and parameters
    Config,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Source {
    Quadrature,
    Hratio,
    Paper,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weight-function curves as CSV
    Weight {
        #[arg(long, value_enum, default_value = "figure1")]
        curves: CurveSet,
        /// draw the index-n literal weight instead of the resolved one (config curves)
        #[arg(long)]
        literal_n: Option<u32>,
        #[arg(long, default_value_t = 0.0)]
        x_min: f64,
        /// defaults to 1 for Jacobi curves and 10 for Bessel
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Full oracle suite as JSON; exit code 1 when any check fails
    Verify,
    /// Kernel samples and kernel checks as JSON
    Kernel,
    /// Operator matrix or the three-way discrepancy report as JSON
    Quantize {
        #[arg(long, default_value = "z")]
        symbol: String,
        #[arg(long, value_enum, default_value = "quadrature")]
        source: Source,
        /// emit the discrepancy report instead of one matrix
        #[arg(long)]
        report: bool,
    },
    /// Coherent-state number moments, series against difference quotients (CSV)
    Expect {
        /// defaults to 10 (Bessel) or 0.9 (Jacobi)
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Time-evolved densities on a polar grid (CSV, Bessel family)
    Evolve {
        #[arg(long, default_value_t = 0.8, allow_hyphen_values = true)]
        z0_re: f64,
        #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
        z0_im: f64,
        #[arg(long, default_value_t = 3.0)]
        r_max: f64,
        #[arg(long, default_value_t = 6)]
        r_points: usize,
        #[arg(long, default_value_t = 8)]
        theta_points: usize,
        /// defaults to one rotation period
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 5)]
        t_points: usize,
    },
    /// Thermal observables, oracle next to the closed forms (CSV)
    Thermal {
        #[arg(long, default_value_t = verify::THERMAL_MU, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, default_value_t = 0.1)]
        beta_min: f64,
        #[arg(long, default_value_t = 2.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 10)]
        beta_points: usize,
    },
}

fn cmd_weight(
    cfg: &RunConfig,
    curves: CurveSet,
    literal_n: Option<u32>,
    x_min: f64,
    x_max: Option<f64>,
    points: usize,
) -> Result<u8> {
    let list = match curves {
        CurveSet::Figure1 => figure1_curves()?,
        CurveSet::Config => {
            let form = literal_n.map_or(WeightForm::Resolved, |n| WeightForm::Literal { n });
            vec![Figure1Curve { params: cfg.params()?, form }]
        }
    };
    let bessel = matches!(curves, CurveSet::Config) && cfg.family == Family::Bessel;
    let x_max = x_max.unwrap_or(if bessel { 10.0 } else { 1.0 });
    if !(x_min >= 0.0 && x_max >= x_min) {
        bail!("weight grid needs 0 <= x-min <= x-max, got [{x_min}, {x_max}]");
    }
    let table = figure1_scan(&list, &linspace(x_min, x_max, points))?;
    output::emit_csv(cfg, "weight", table.as_str())?;
    Ok(0)
}

fn report_checks(checks: &[verify::Check]) -> u8 {
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
    for c in &failed {
        eprintln!("FAIL {}: {}", c.name, c.message);
    }
    u8::from(!failed.is_empty())
}

fn cmd_verify(cfg: &RunConfig) -> Result<u8> {
    let (checks, doc) = verify::run(cfg)?;
    output::emit_json(cfg, "verify", doc)?;
    Ok(report_checks(&checks))
}

fn cmd_kernel(cfg: &RunConfig) -> Result<u8> {
    let p = cfg.params()?;
    let m = RadialMeasure::with_nodes(p, cfg.nodes)?;
    let labels = verify::sample_labels(&p);
    let mut values = Vec::new();
    for &a in &labels {
        let row = labels.iter().map(|&b| kernel(&p, a, b).map(|k| [k.re, k.im])).collect::<Result<Vec<_>, _>>()?;
        values.push(row);
    }
    let checks = verify::kernel_checks(&p, &m)?;
    let doc = json!({
        "labels": labels.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "kernel": values,
        "checks": checks.iter().map(verify::Check::to_json).collect::<Vec<_>>(),
    });
    output::emit_json(cfg, "kernel", doc)?;
    Ok(report_checks(&checks))
}

fn cmd_quantize(cfg: &RunConfig, symbol: &str, source: Source, report: bool) -> Result<u8> {
    let p = cfg.params()?;
    if report {
        let m = RadialMeasure::with_nodes(p, cfg.nodes)?;
        let r = discrepancy_report(&p, cfg.n_max, &m)?;
        output::emit_json(cfg, "quantize", serde_json::to_value(&r)?)?;
        return Ok(0);
    }
    let sym: Symbol = symbol.parse()?;
    let op = match source {
        Source::Quadrature => {
            let m = RadialMeasure::with_nodes(p, cfg.nodes)?;
            quantize_symbol(&p, sym, cfg.n_max, &m)?
        }
        Source::Hratio | Source::Paper => {
            let ladder = match sym {
                Symbol::Z => Ladder::Az,
                Symbol::ZBar => Ladder::AzBar,
                Symbol::AbsZ2 => Ladder::AbsZ2,
                _ => bail!("closed forms exist for z, zbar and absz2 only"),
            };
            let src = if matches!(source, Source::Hratio) { ClosedSource::HRatio } else { ClosedSource::Paper };
            ladder_closed_form(&p, ladder, cfg.n_max, src)?
        }
    };
    output::emit_json(cfg, "quantize", op.to_json(&p))?;
    Ok(0)
}

fn cmd_expect(cfg: &RunConfig, x_max: Option<f64>, points: usize, step: f64) -> Result<u8> {
    let p = cfg.params()?;
    let x_max = x_max.unwrap_or(match p.family {
        Family::Bessel => 10.0,
        Family::Jacobi => 0.9,
    });
    if x_max.is_nan() || x_max <= 0.0 || (p.family == Family::Jacobi && x_max >= 1.0) {
        bail!("x-max = {x_max} outside the label range of the {} family", p.family);
    }
    let mut t = CsvTable::new(&["x", "N_series", "N2_series", "N_diff", "N2_diff", "rel_N", "rel_N2"]);
    for i in 1..=points {
        let x = x_max * i as f64 / points as f64;
        let (n1, n2) = cs_number_moments(&p, x)?;
        let (d1, d2) = cs_moments_by_differences(&p, x, step)?;
        t.push(&[x, n1, n2, d1, d2, (d1 - n1).abs() / n1, (d2 - n2).abs() / n2]);
    }
    output::emit_csv(cfg, "expect", t.as_str())?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    cfg: &RunConfig,
    z0: Complex64,
    r_max: f64,
    r_points: usize,
    theta_points: usize,
    t_max: Option<f64>,
    t_points: usize,
) -> Result<u8> {
    let p = cfg.params()?;
    let rate = (p.b() - 1.0).abs();
    let t_max = t_max.unwrap_or(if rate > 0.0 { std::f64::consts::TAU / rate } else { 1.0 });
    let rs = linspace(0.0, r_max, r_points);
    let tau = std::f64::consts::TAU;
    let thetas: Vec<f64> = (0..theta_points).map(|i| tau * i as f64 / theta_points as f64).collect();
    let ts = linspace(0.0, t_max, t_points);
    let table = density_scan(&p, z0, &rs, &thetas, &ts)?;
    output::emit_csv(cfg, "evolve", table.as_str())?;
    Ok(0)
}

fn cmd_thermal(cfg: &RunConfig, mu: f64, lo: f64, hi: f64, n: usize) -> Result<u8> {
    let rows = thermal_rows(&linspace(lo, hi, n), mu, cfg.g2)?;
    output::emit_csv(cfg, "thermal", thermal_table(&rows).as_str())?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = RunConfig::resolve(&cli.common)?;
    match cli.command {
        Command::Weight { curves, literal_n, x_min, x_max, points } => {
            cmd_weight(&cfg, curves, literal_n, x_min, x_max, points)
        }
        Command::Verify => cmd_verify(&cfg),
        Command::Kernel => cmd_kernel(&cfg),
        Command::Quantize { symbol, source, report } => cmd_quantize(&cfg, &symbol, source, report),
        Command::Expect { x_max, points, step } => cmd_expect(&cfg, x_max, points, step),
        Command::Evolve { z0_re, z0_im, r_max, r_points, theta_points, t_max, t_points } => {
            cmd_evolve(&cfg, Complex64::new(z0_re, z0_im), r_max, r_points, theta_points, t_max, t_points)
        }
        Command::Thermal { mu, beta_min, beta_max, beta_points } => {
            cmd_thermal(&cfg, mu, beta_min, beta_max, beta_points)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
