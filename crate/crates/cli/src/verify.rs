//! Aggregate oracle suite behind `ghcs verify`.

use anyhow::Result;
use ghcs::dynamics::{density_evolved, density_static, evolve, rotation_property};
use ghcs::kernel::{check_idempotence, gram_min_eigenvalue, kernel};
use ghcs::measure::{verify_with, RadialMeasure};
use ghcs::quantize::{discrepancy_report, quantize_symbol, Symbol};
use ghcs::states::{normalization, normalization_bessel_closed, overlap, state};
use ghcs::thermal::{
    cs_moments_by_differences, cs_number_moments, oracle_observables, partition, synthetic_p_candidate, thermal_rows,
    verify_p_function, PFunctionCandidate,
};
use ghcs::util::linspace;
use ghcs::{Complex64, Family, FamilyParams};
use serde_json::{json, Value};

use crate::config::RunConfig;

/// Thermal checks run at the spectrum parameter of the worked example.
pub const THERMAL_MU: f64 = 2.0;
/// Inverse temperature of the synthetic P-function check.
pub const P_BETA: f64 = 0.01;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub message: String,
    pub detail: Value,
}

impl Check {
    fn new(name: &'static str, worst: f64, limit: f64, what: &str, detail: Value) -> Self {
        let pass = worst <= limit;
        let message = format!("{what}: worst {worst:.3e} against limit {limit:.1e}");
        Self { name, pass, message, detail }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "status": if self.pass { "PASS" } else { "FAIL" },
            "message": self.message,
            "detail": self.detail,
        })
    }
}

/// Fixed labels spread over the family's disc.
pub fn sample_labels(p: &FamilyParams) -> Vec<Complex64> {
    let radii: [f64; 6] = match p.family {
        Family::Bessel => [0.05, 0.3, 0.8, 1.5, 2.2, 3.0],
        Family::Jacobi => [0.1, 0.3, 0.5, 0.6, 0.7, 0.85],
    };
    let angles = [1.0, 0.3, 0.7, -1.2, 2.5, -2.9];
    radii.iter().zip(angles).map(|(&r, a)| Complex64::from_polar(r, a)).collect()
}

/// `count` label pairs from an additive low-discrepancy sequence.
pub fn pair_sequence(p: &FamilyParams, count: usize) -> Vec<(Complex64, Complex64)> {
    let r_max = p.radius().min(3.0) * 0.95;
    let alphas = [0.618_033_988_749_895, 0.754_877_666_246_693, 0.569_840_290_998_053, 0.839_286_755_214_161];
    (1..=count)
        .map(|i| {
            let u: Vec<f64> = alphas.iter().map(|a| (i as f64 * a).fract()).collect();
            let tau = std::f64::consts::TAU;
            (
                Complex64::from_polar(r_max * u[0].sqrt(), tau * u[1]),
                Complex64::from_polar(r_max * u[2].sqrt(), tau * u[3]),
            )
        })
        .collect()
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn normalization_check(p: &FamilyParams) -> Result<Check> {
    Ok(match p.family {
        Family::Bessel => {
            let xs: Vec<f64> = (0..20).map(|i| 10f64.powf(-3.0 + i as f64 * (30f64.log10() + 3.0) / 19.0)).collect();
            let mut worst = 0.0f64;
            for &x in &xs {
                let s = normalization(p, x, &Default::default())?;
                let c = normalization_bessel_closed(p, x)?;
                worst = worst.max((s - c).abs() / c);
            }
            Check::new("normalization", worst, 1e-10, "series against I-Bessel closed form", json!({"points": xs.len()}))
        }
        Family::Jacobi => {
            let mut worst = 0.0f64;
            for z in sample_labels(p) {
                worst = worst.max((state(p, z, None)?.norm_sqr() - 1.0).abs());
            }
            Check::new("normalization", worst, 1e-12, "unit norm of coherent states", json!({}))
        }
    })
}

fn identity_check(p: &FamilyParams, m: &RadialMeasure, tol: f64) -> Result<Check> {
    let n_check = match p.family {
        Family::Bessel => 20,
        Family::Jacobi => 12,
    };
    let r = verify_with(m, n_check, tol)?;
    let mut c = Check::new(
        "identity",
        r.worst.rel_error,
        tol,
        &format!("moments n <= {n_check} against h_n^2"),
        serde_json::to_value(&r)?,
    );
    if !c.pass {
        c.message = format!(
            "{}; moment {} misses by {:.3e}: the {}-node radial quadrature is insufficient for this tolerance, raise --nodes",
            c.message,
            r.worst.order,
            r.worst.rel_error,
            m.nodes.len()
        );
    }
    Ok(c)
}

pub fn kernel_checks(p: &FamilyParams, m: &RadialMeasure) -> Result<Vec<Check>> {
    let pairs = pair_sequence(p, 1000);
    let mut herm = 0.0f64;
    for &(a, b) in &pairs {
        herm = herm.max((kernel(p, a, b)? - kernel(p, b, a)?.conj()).norm());
    }
    let labels = sample_labels(p);
    let diag = max_of(labels.iter().map(|&z| kernel(p, z, z).map(|k| (k - 1.0).norm())).collect::<Result<Vec<_>, _>>()?);
    let grid = &labels[1..];
    let mut idem = 0.0f64;
    for &a in grid {
        for &b in grid {
            idem = idem.max(check_idempotence(p, a, b, m)?);
        }
    }
    let gram = gram_min_eigenvalue(p, &labels)?;
    Ok(vec![
        Check::new("kernel.hermiticity", herm, 1e-13, "|K(z1,z2) - conj K(z2,z1)| over 1000 pairs", json!({})),
        Check::new("kernel.diagonal", diag, 1e-12, "|K(z,z) - 1|", json!({})),
        Check::new("kernel.idempotence", idem, 1e-6, "reproducing residual on a 5x5 label grid", json!({})),
        Check::new("kernel.gram", (-gram).max(0.0), 1e-9, "negative part of the 6-point Gram spectrum", json!({"min_eigenvalue": gram})),
    ])
}

fn quantize_checks(p: &FamilyParams, m: &RadialMeasure, n_max: usize) -> Result<(Vec<Check>, Value)> {
    let report = discrepancy_report(p, n_max, m)?;
    let worst = max_of(report.rows.iter().map(|r| r.quadrature_vs_hratio));
    let az = quantize_symbol(p, Symbol::Z, n_max, m)?;
    let azb = quantize_symbol(p, Symbol::ZBar, n_max, m)?;
    let adj = az.adjoint().max_rel_diff(&azb)?;
    let mut checks = vec![
        Check::new("quantize.closed_form", worst, 1e-7, "quadrature against moment-ratio closed forms", json!({})),
        Check::new("quantize.adjoint", adj, 1e-8, "A_z^dagger against A_zbar", json!({})),
    ];
    if p.family == Family::Bessel {
        let a2 = quantize_symbol(p, Symbol::AbsZ2, n_max, m)?;
        let diag = max_of((0..=n_max).map(|n| {
            let want = (n as f64 + 1.0) * (p.b() + n as f64);
            (a2.get(n, n).re - want).abs() / want
        }));
        checks.push(Check::new("quantize.number_diagonal", diag, 1e-7, "A_|z|^2 diagonal against (n+1)(b+n)", json!({})));
    }
    Ok((checks, serde_json::to_value(&report)?))
}

fn dynamics_checks(p: &FamilyParams) -> Result<Vec<Check>> {
    let labels = sample_labels(p);
    let ts = [0.0, 0.37, 1.3, 4.0];
    let mut unit = 0.0f64;
    let mut rot = 0.0f64;
    for &z in &labels[1..5] {
        let v = state(p, z, None)?;
        for &t in &ts {
            unit = unit.max((evolve(p, &v, t).norm_sqr() - v.norm_sqr()).abs());
            rot = rot.max(rotation_property(p, z, t)?);
        }
    }
    let mut out = vec![
        Check::new("dynamics.unitarity", unit, 1e-12, "norm change under evolution", json!({})),
        Check::new("dynamics.rotation", rot, 1e-10, "evolved state against rotated label, 4x4 (z,t) grid", json!({})),
    ];
    if p.family == Family::Bessel {
        let mut dens = 0.0f64;
        for &a in &labels {
            for &b in &labels {
                dens = dens.max((density_static(p, a, b)? - overlap(p, b, a)?.norm_sqr()).abs());
            }
        }
        out.push(Check::new("dynamics.density", dens, 1e-8, "closed-form density against |overlap|^2", json!({})));
        let rate = p.b() - 1.0;
        if rate.abs() > 1e-12 {
            let period = std::f64::consts::TAU / rate.abs();
            let z0 = labels[3];
            let mut back = 0.0f64;
            for &z in &labels {
                let a = density_evolved(p, z0, z, 0.0)?.formula;
                let b = density_evolved(p, z0, z, period)?.formula;
                back = back.max((a - b).abs());
            }
            out.push(Check::new("dynamics.recurrence", back, 1e-8, "density after one rotation period against t = 0", json!({"period": period})));
        }
    }
    Ok(out)
}

fn thermal_checks(p: &FamilyParams, m: &RadialMeasure, cfg: &RunConfig) -> Result<(Vec<Check>, Value)> {
    let betas = linspace(0.1, 2.0, 10);
    let mut tail = 0.0f64;
    let mut var_neg = 0.0f64;
    let mut mono = 0.0f64;
    let mut prev: Option<f64> = None;
    for &beta in &betas {
        let z = partition(beta, THERMAL_MU)?;
        tail = tail.max(z.tail_bound / z.value);
        let o = oracle_observables(beta, THERMAL_MU, cfg.g2)?;
        var_neg = var_neg.max(o.n_mean * o.n_mean - o.n2_mean);
        if let Some(pr) = prev {
            mono = mono.max(o.n_mean - pr);
        }
        prev = Some(o.n_mean);
    }
    let xs: &[f64] = match p.family {
        Family::Bessel => &[0.1, 1.0, 5.0],
        Family::Jacobi => &[0.1, 0.5, 0.9],
    };
    let mut fd = 0.0f64;
    for &x in xs {
        let (n1, n2) = cs_number_moments(p, x)?;
        let (d1, d2) = cs_moments_by_differences(p, x, 1e-3)?;
        fd = fd.max((n1 - d1).abs() / n1).max((n2 - d2).abs() / n2);
    }
    let cand = synthetic_p_candidate(p, P_BETA, THERMAL_MU, 12, m)?;
    let pr = verify_p_function(p, P_BETA, THERMAL_MU, &cand, 12, m, 1e-8)?;
    let p_worst = max_of(pr.rows.iter().map(|r| r.rel_error));
    let rows = thermal_rows(&betas, THERMAL_MU, cfg.g2)?;
    let mut paper = json!({
        "mu": THERMAL_MU,
        "rows": rows.iter().map(|r| json!({
            "beta": r.beta, "Z": r.z, "oracle": r.oracle, "paper": r.paper, "rel_diff": r.rel_diff(),
        })).collect::<Vec<_>>(),
    });
    if p.family == Family::Jacobi {
        let mut series = Vec::new();
        for sign_corrected in [false, true] {
            let c = PFunctionCandidate::PaperSeries { k_max: 4, sign_corrected };
            let r = verify_p_function(p, 0.1, THERMAL_MU, &c, 6, m, 1e-8);
            series.push(match r {
                Ok(r) => json!({"sign_corrected": sign_corrected, "beta": 0.1, "k_max": 4,
                    "worst": max_of(r.rows.iter().map(|x| x.rel_error)), "moments": r.rows}),
                Err(e) => json!({"sign_corrected": sign_corrected, "error": e.to_string()}),
            });
        }
        paper["p_series"] = Value::Array(series);
    }
    Ok((
        vec![
            Check::new("thermal.partition_tail", tail, 1e-14, "relative tail bound of Z on the beta grid", json!({})),
            Check::new("thermal.variance", var_neg.max(0.0), 0.0, "negative part of <N^2> - <N>^2", json!({})),
            Check::new("thermal.monotone", mono.max(0.0), 0.0, "increase of <N> with beta", json!({})),
            Check::new("thermal.finite_differences", fd, 1e-5, "difference-quotient moments against the series", json!({})),
            Check::new(
                "thermal.p_function",
                p_worst,
                1e-8,
                "moment-matched P candidate, n <= 12",
                json!({"beta": P_BETA, "mu": THERMAL_MU, "report": pr}),
            ),
        ],
        paper,
    ))
}

/// Runs every oracle check; comparisons against the published closed forms are informational.
pub fn run(cfg: &RunConfig) -> Result<(Vec<Check>, Value)> {
    let p = cfg.params()?;
    let m = RadialMeasure::with_nodes(p, cfg.nodes)?;
    let mut checks = vec![normalization_check(&p)?, identity_check(&p, &m, cfg.tol)?];
    checks.extend(kernel_checks(&p, &m)?);
    let (q, discrepancy) = quantize_checks(&p, &m, cfg.n_max)?;
    checks.extend(q);
    checks.extend(dynamics_checks(&p)?);
    let (t, thermal_paper) = thermal_checks(&p, &m, cfg)?;
    checks.extend(t);
    let all = checks.iter().all(|c| c.pass);
    let doc = json!({
        "status": if all { "PASS" } else { "FAIL" },
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        "informational": {
            "quantization_discrepancy": discrepancy,
            "thermal_paper_forms": thermal_paper,
        },
    });
    Ok((checks, doc))
}
