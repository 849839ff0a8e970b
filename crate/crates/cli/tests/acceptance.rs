//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ghcs::dynamics::{density_evolved, density_static, evolve, rotated_label, rotation_property};
use ghcs::kernel::{check_idempotence, gram_min_eigenvalue, kernel};
use ghcs::measure::{verify_with, RadialMeasure};
use ghcs::quantize::{discrepancy_report, ladder_closed_form, quantize_symbol, ClosedSource, Ladder, Symbol};
use ghcs::states::{normalization, normalization_bessel_closed, overlap, state};
use ghcs::thermal::{
    cs_moments_by_differences, cs_number_moments, oracle_observables, partition, synthetic_p_candidate, thermal_rows,
    thermal_table, verify_p_function, G2Convention,
};
use ghcs::util::linspace;
use ghcs::{Complex64, Family, FamilyParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn both_families() -> [FamilyParams; 2] {
    [FamilyParams::bessel(1, 0.5).unwrap(), FamilyParams::jacobi(1, 0.5).unwrap()]
}

fn labels(p: &FamilyParams, count: usize) -> Vec<Complex64> {
    let r_max = match p.family {
        Family::Bessel => 2.5,
        Family::Jacobi => 0.85,
    };
    (0..count)
        .map(|i| {
            let f = (i as f64 + 1.0) / count as f64;
            Complex64::from_polar(r_max * f, 0.9 + 2.3 * i as f64)
        })
        .collect()
}

fn c1_normalization() -> Outcome {
    let start = Instant::now();
    let grid: Vec<f64> = linspace(-3.0, 30f64.log10(), 20).into_iter().map(|e| 10f64.powf(e)).collect();
    let mut worst = 0.0f64;
    for m in [0, 1, 2, 5] {
        for nu in [0.3, 0.5, 0.7, 1.5] {
            let p = FamilyParams::bessel(m, nu).map_err(err)?;
            for &x in &grid {
                let s = normalization(&p, x, &Default::default()).map_err(err)?;
                let c = normalization_bessel_closed(&p, x).map_err(err)?;
                worst = worst.max((s - c).abs() / c);
            }
        }
    }
    let t = start.elapsed();
    ensure(worst <= 1e-10, format!("worst relative error {worst:.2e}"))?;
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("320 points, worst {worst:.2e}, {t:.0?}"))
}

fn c2_moments() -> Outcome {
    let start = Instant::now();
    let mut worst = [0.0f64; 2];
    let mut max_nodes = 0;
    let mut slowest = Duration::ZERO;
    for m in [0, 1, 2] {
        for nu in [0.3, 0.5, 0.7, 1.5] {
            for (k, (p, n_check)) in
                [(FamilyParams::bessel(m, nu), 20), (FamilyParams::jacobi(m, nu), 12)].into_iter().enumerate()
            {
                let t = Instant::now();
                let meas = RadialMeasure::new(p.map_err(err)?).map_err(err)?;
                let r = verify_with(&meas, n_check, 1.0).map_err(err)?;
                slowest = slowest.max(t.elapsed());
                max_nodes = max_nodes.max(meas.nodes.len());
                worst[k] = worst[k].max(r.worst.rel_error);
            }
        }
    }
    ensure(worst[0] <= 1e-8, format!("Bessel worst {:.2e}", worst[0]))?;
    ensure(worst[1] <= 1e-5, format!("Jacobi worst {:.2e}", worst[1]))?;
    ensure(max_nodes <= 400, format!("{max_nodes} nodes"))?;
    ensure(slowest < Duration::from_secs(10), format!("one certificate took {slowest:?}"))?;
    Ok(format!(
        "24 parameter sets, Bessel n<=20 {:.2e}, Jacobi n<=12 {:.2e}, <= {max_nodes} nodes, slowest {slowest:.0?}, total {:.0?}",
        worst[0],
        worst[1],
        start.elapsed()
    ))
}

fn c3_kernel() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6b65726e);
    let mut summary = Vec::new();
    for p in both_families() {
        let meas = RadialMeasure::new(p).map_err(err)?;
        let r_max = p.radius().min(3.0) * 0.95;
        let mut herm = 0.0f64;
        let mut diag = 0.0f64;
        for _ in 0..1000 {
            let mut z = || Complex64::from_polar(r_max * rng.random::<f64>().sqrt(), rng.random_range(-3.2..3.2));
            let (a, b) = (z(), z());
            herm = herm.max((kernel(&p, a, b).map_err(err)? - kernel(&p, b, a).map_err(err)?.conj()).norm());
            diag = diag.max((kernel(&p, a, a).map_err(err)? - 1.0).norm());
        }
        let grid = labels(&p, 5);
        let mut idem = 0.0f64;
        for &a in &grid {
            for &b in &grid {
                idem = idem.max(check_idempotence(&p, a, b, &meas).map_err(err)?);
            }
        }
        let gram = gram_min_eigenvalue(&p, &labels(&p, 6)).map_err(err)?;
        ensure(herm <= 1e-14, format!("{}: hermiticity {herm:.2e}", p.family))?;
        ensure(diag <= 1e-12, format!("{}: K(z,z) off by {diag:.2e}", p.family))?;
        ensure(idem <= 1e-6, format!("{}: idempotence {idem:.2e}", p.family))?;
        ensure(gram >= -1e-9, format!("{}: Gram eigenvalue {gram:.2e}", p.family))?;
        summary.push(format!("{} herm {herm:.1e} diag {diag:.1e} idem {idem:.1e} gram {gram:.1e}", p.family));
    }
    Ok(summary.join("; "))
}

fn c4_quantization() -> Outcome {
    let n_max = 32;
    let mut summary = Vec::new();
    for p in both_families() {
        let meas = RadialMeasure::new(p).map_err(err)?;
        let mut worst = 0.0f64;
        for (sym, lad) in [(Symbol::Z, Ladder::Az), (Symbol::ZBar, Ladder::AzBar), (Symbol::AbsZ2, Ladder::AbsZ2)] {
            let q = quantize_symbol(&p, sym, n_max, &meas).map_err(err)?;
            let h = ladder_closed_form(&p, lad, n_max, ClosedSource::HRatio).map_err(err)?;
            worst = worst.max(q.max_rel_diff(&h).map_err(err)?);
        }
        let az = quantize_symbol(&p, Symbol::Z, n_max, &meas).map_err(err)?;
        let azb = quantize_symbol(&p, Symbol::ZBar, n_max, &meas).map_err(err)?;
        let adj = az.adjoint().max_abs_diff(&azb).map_err(err)? / azb.max_abs();
        ensure(worst <= 1e-7, format!("{}: quadrature vs closed form {worst:.2e}", p.family))?;
        ensure(adj <= 1e-8, format!("{}: adjointness {adj:.2e}", p.family))?;
        if p.family == Family::Bessel {
            let a2 = quantize_symbol(&p, Symbol::AbsZ2, n_max, &meas).map_err(err)?;
            let d = (0..=n_max)
                .map(|n| {
                    let want = (n as f64 + 1.0) * (p.b() + n as f64);
                    (a2.get(n, n).re - want).abs() / want
                })
                .fold(0.0, f64::max);
            ensure(d <= 1e-7, format!("number-operator diagonal {d:.2e}"))?;
            summary.push(format!("(n+1)(b+n) diagonal {d:.1e}"));
        }
        summary.push(format!("{} entrywise {worst:.1e} adjoint {adj:.1e}", p.family));
    }
    Ok(summary.join("; "))
}

fn c5_discrepancy() -> Outcome {
    let [b, j] = both_families();
    let rb = discrepancy_report(&b, 16, &RadialMeasure::new(b).map_err(err)?).map_err(err)?;
    let rj = discrepancy_report(&j, 16, &RadialMeasure::new(j).map_err(err)?).map_err(err)?;
    let json = serde_json::to_string(&[&rb, &rj]).map_err(err)?;
    ensure(!rb.rows.is_empty() && !rj.rows.is_empty() && json.len() > 100, "empty report".into())?;
    let bessel_worst = rb
        .rows
        .iter()
        .map(|r| r.quadrature_vs_hratio.max(r.quadrature_vs_paper).max(r.hratio_vs_paper))
        .fold(0.0, f64::max);
    ensure(bessel_worst <= 1e-8, format!("Bessel provenances disagree by {bessel_worst:.2e}"))?;
    let z = rj.rows.iter().find(|r| r.symbol == "z").ok_or("no z row")?;
    let c = j.m as f64 + j.nu;
    let factor_err = z
        .paper_over_hratio
        .iter()
        .enumerate()
        .map(|(n, f)| (f - (c + n as f64 + 1.0).powi(2)).abs() / (c + n as f64 + 1.0).powi(2))
        .fold(0.0, f64::max);
    ensure(z.hratio_vs_paper > 0.5, "Jacobi deviation not visible".into())?;
    ensure(factor_err <= 1e-12, format!("Jacobi factor pattern off by {factor_err:.2e}"))?;
    Ok(format!(
        "Bessel three-way agreement {bessel_worst:.1e}; Jacobi paper/closed ratio = (c+n+1)^2 to {factor_err:.1e}, relative deviation {:.3}",
        z.hratio_vs_paper
    ))
}

fn c6_dynamics() -> Outcome {
    let mut summary = Vec::new();
    for p in both_families() {
        let zs = labels(&p, 4);
        let ts = [0.0, 0.41, 1.7, 6.3];
        let (mut unit, mut rot) = (0.0f64, 0.0f64);
        for &z in &zs {
            let v = state(&p, z, None).map_err(err)?;
            for &t in &ts {
                unit = unit.max((evolve(&p, &v, t).norm_sqr() - v.norm_sqr()).abs());
                rot = rot.max(rotation_property(&p, z, t).map_err(err)?);
            }
        }
        let period = std::f64::consts::TAU / (p.b() - 1.0);
        let mut back = zs.iter().map(|&z| (rotated_label(&p, z, period) - z).norm()).fold(0.0, f64::max);
        back = back.max(zs.iter().map(|&z| rotation_property(&p, z, period).unwrap_or(f64::INFINITY)).fold(0.0, f64::max));
        ensure(unit <= 1e-12, format!("{}: unitarity {unit:.2e}", p.family))?;
        ensure(rot <= 1e-10, format!("{}: rotation residual {rot:.2e}", p.family))?;
        ensure(back <= 1e-10, format!("{}: period recurrence {back:.2e}", p.family))?;
        if p.family == Family::Bessel {
            let mut dens = 0.0f64;
            let mut per = 0.0f64;
            for &a in &zs {
                for &b in &zs {
                    dens = dens.max((density_static(&p, a, b).map_err(err)? - overlap(&p, b, a).map_err(err)?.norm_sqr()).abs());
                    let d0 = density_evolved(&p, a, b, 0.0).map_err(err)?.formula;
                    let d1 = density_evolved(&p, a, b, period).map_err(err)?.formula;
                    per = per.max((d0 - d1).abs());
                }
            }
            ensure(dens <= 1e-8, format!("density_static vs |overlap|^2 {dens:.2e}"))?;
            ensure(per <= 1e-8, format!("density after one period {per:.2e}"))?;
            summary.push(format!("density {dens:.1e} period {per:.1e}"));
        }
        summary.push(format!("{} unitarity {unit:.1e} rotation {rot:.1e} recurrence {back:.1e}", p.family));
    }
    Ok(summary.join("; "))
}

fn c7_thermal() -> Outcome {
    let mu = 2.0;
    let betas = linspace(0.2, 2.0, 10);
    let mut prev = f64::INFINITY;
    let mut tail = 0.0f64;
    for &beta in &betas {
        let z = partition(beta, mu).map_err(err)?;
        tail = tail.max(z.tail_bound / z.value);
        let o = oracle_observables(beta, mu, G2Convention::AsWritten).map_err(err)?;
        ensure(o.n2_mean - o.n_mean * o.n_mean >= 0.0, format!("negative variance at beta {beta}"))?;
        ensure(o.n_mean < prev, format!("<N> not decreasing at beta {beta}"))?;
        prev = o.n_mean;
    }
    ensure(tail <= 1e-14, format!("tail bound {tail:.2e}"))?;
    let mut fd = 0.0f64;
    let mut p_worst = 0.0f64;
    for p in both_families() {
        let xs: &[f64] = if p.family == Family::Bessel { &[0.2, 1.0, 5.0] } else { &[0.2, 0.5, 0.9] };
        for &x in xs {
            let (n1, n2) = cs_number_moments(&p, x).map_err(err)?;
            let (d1, d2) = cs_moments_by_differences(&p, x, 1e-3).map_err(err)?;
            fd = fd.max((n1 - d1).abs() / n1).max((n2 - d2).abs() / n2);
        }
        let meas = RadialMeasure::new(p).map_err(err)?;
        let cand = synthetic_p_candidate(&p, 0.01, mu, 12, &meas).map_err(err)?;
        let r = verify_p_function(&p, 0.01, mu, &cand, 12, &meas, 1e-8).map_err(err)?;
        ensure(r.pass, format!("{}: P-function check failed", p.family))?;
        p_worst = p_worst.max(r.rows.iter().map(|x| x.rel_error).fold(0.0, f64::max));
    }
    ensure(fd <= 1e-5, format!("finite differences off by {fd:.2e}"))?;
    let rows = thermal_rows(&[1.0], mu, G2Convention::AsWritten).map_err(err)?;
    let table = thermal_table(&rows);
    ensure(table.rows() == 1, "paper table missing".into())?;
    let d = rows[0].rel_diff();
    Ok(format!(
        "tail {tail:.1e}, differences {fd:.1e}, P candidate {p_worst:.1e}; paper vs oracle at beta=1: <N> {:.1e}, <N^2> {:.1e}, g2 {:.1e}, Q {:.1e} (reported)",
        d[0], d[1], d[2], d[3]
    ))
}

fn c8_figure() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let o = Command::new(env!("CARGO_BIN_EXE_ghcs"))
            .args(["weight", "--points", "201", "--out"])
            .arg(&path)
            .output()
            .map_err(err)?;
        ensure(o.status.success(), String::from_utf8_lossy(&o.stderr).into_owned())?;
        outputs.push(std::fs::read(&path).map_err(err)?);
    }
    ensure(outputs[0] == outputs[1], "reruns differ".into())?;
    let text = String::from_utf8(outputs.swap_remove(0)).map_err(err)?;
    let mut min_w = f64::INFINITY;
    let mut curves = std::collections::BTreeSet::new();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let w: f64 = cells[1].parse().map_err(err)?;
        ensure(w.is_finite() && w >= -1e-12, format!("W = {w} in row {line}"))?;
        min_w = min_w.min(w);
        curves.insert((cells[2].to_string(), cells[3].to_string(), cells[4].to_string()));
        rows += 1;
    }
    ensure(curves.len() >= 10, format!("only {} distinct curves", curves.len()))?;
    Ok(format!("{} curves, {rows} samples, min W {min_w:.3e}, byte-identical rerun", curves.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("normalization identity", c1_normalization),
        ("moment certificate", c2_moments),
        ("kernel suite", c3_kernel),
        ("quantization equivalence", c4_quantization),
        ("discrepancy ledger", c5_discrepancy),
        ("dynamics", c6_dynamics),
        ("thermal suite", c7_thermal),
        ("weight figure", c8_figure),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("PASS [{}] {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
