//! Canonical ensemble with `E_n = n (n + mu + 1)`: direct Boltzmann sums as
//! ground truth, the closed forms they are compared against, coherent-state
//! generating functions, and P-function checks through moment conditions.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::measure::{MomentReport, RadialMeasure};
use crate::specfun::G2022;
use crate::states::{coeff_h, normalization, Family, FamilyParams};
use crate::util::{fmt_f64, CsvTable};
use crate::{Error, Result};

/// Tail target relative to the accumulated sum.
const TAIL_REL: f64 = 1e-16;
const MAX_LEVELS: usize = 10_000_000;

pub fn energy(mu: f64, n: usize) -> f64 {
    let nf = n as f64;
    nf * (nf + mu + 1.0)
}

/// `sum_n n^s e^{-beta (E_n - shift)}` with a geometric tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalSum {
    pub value: f64,
    pub n_cut: usize,
    pub tail_bound: f64,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta = {beta} must be positive")));
    }
    Ok(())
}

/// Smallest level, used as the exponent shift.
fn ground(mu: f64) -> f64 {
    let n_star = (-(mu + 1.0) / 2.0).round().max(0.0) as usize;
    (n_star.saturating_sub(1)..=n_star + 1).map(|n| energy(mu, n)).fold(0.0, f64::min)
}

fn weighted_sum(beta: f64, mu: f64, s: u32) -> Result<ThermalSum> {
    check_beta(beta)?;
    let e0 = ground(mu);
    let mut acc = 0.0;
    for n in 0..MAX_LEVELS {
        let nf = n as f64;
        let t = nf.powi(s as i32) * (-beta * (energy(mu, n) - e0)).exp();
        acc += t;
        // once levels increase, consecutive ratios are bounded by
        // q = ((n+2)/(n+1))^s e^{-beta (2n + mu + 4)} and keep shrinking
        if 2.0 * nf + mu + 2.0 > 0.0 && n > 0 {
            let q = ((nf + 2.0) / (nf + 1.0)).powi(s as i32) * (-beta * (2.0 * nf + mu + 4.0)).exp();
            if q < 1.0 {
                let next = (nf + 1.0).powi(s as i32) * (-beta * (energy(mu, n + 1) - e0)).exp();
                let tail = next / (1.0 - q);
                if tail <= TAIL_REL * acc {
                    return Ok(ThermalSum { value: acc, n_cut: n, tail_bound: tail });
                }
            }
        }
    }
    Err(Error::NonConvergence { terms: MAX_LEVELS })
}

/// Partition function `Z = sum e^{-beta E_n}`.
pub fn partition(beta: f64, mu: f64) -> Result<ThermalSum> {
    let mut z = weighted_sum(beta, mu, 0)?;
    let scale = (-beta * ground(mu)).exp();
    z.value *= scale;
    z.tail_bound *= scale;
    Ok(z)
}

/// `<N^s> = sum n^s e^{-beta E_n} / Z`.
pub fn boltzmann_moment(beta: f64, mu: f64, s: u32) -> Result<f64> {
    if s == 0 {
        check_beta(beta)?;
        return Ok(1.0);
    }
    Ok(weighted_sum(beta, mu, s)?.value / weighted_sum(beta, mu, 0)?.value)
}

/// How `g2` is normalized.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum G2Convention {
    /// `(<N^2> - <N>) / <N^2>`
    #[default]
    AsWritten,
    /// `(<N^2> - <N>) / <N>^2`
    Conventional,
}

impl std::str::FromStr for G2Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-written" => Ok(Self::AsWritten),
            "conventional" => Ok(Self::Conventional),
            _ => Err(Error::InvalidParameter(format!("unknown g2 convention '{s}'"))),
        }
    }
}

impl G2Convention {
    pub fn g2(self, n1: f64, n2: f64) -> f64 {
        match self {
            Self::AsWritten => (n2 - n1) / n2,
            Self::Conventional => (n2 - n1) / (n1 * n1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalObservables {
    pub n_mean: f64,
    pub n2_mean: f64,
    pub g2: f64,
    pub q: f64,
}

/// Direct-sum observables; `Q = <N> (g2 - 1)`.
pub fn oracle_observables(beta: f64, mu: f64, conv: G2Convention) -> Result<ThermalObservables> {
    let n_mean = boltzmann_moment(beta, mu, 1)?;
    let n2_mean = boltzmann_moment(beta, mu, 2)?;
    let g2 = conv.g2(n_mean, n2_mean);
    Ok(ThermalObservables { n_mean, n2_mean, g2, q: n_mean * (g2 - 1.0) })
}

/// Closed forms with `e = e^{beta (2 - mu)}`: `<N> = 1 + 2e`, `<N^2> = 1 + 4e`,
/// `g2 = 2e / (1 + 2e)^2`, `Q = -(1 + 4 e^2 / (1 + 2e))`.
pub fn paper_thermal_forms(beta: f64, mu: f64) -> ThermalObservables {
    let e = (beta * (2.0 - mu)).exp();
    ThermalObservables {
        n_mean: 1.0 + 2.0 * e,
        n2_mean: 1.0 + 4.0 * e,
        g2: 2.0 * e / (1.0 + 2.0 * e).powi(2),
        q: -(1.0 + 4.0 * e * e / (1.0 + 2.0 * e)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalRow {
    pub beta: f64,
    pub mu: f64,
    pub z: f64,
    pub oracle: ThermalObservables,
    pub paper: ThermalObservables,
}

impl ThermalRow {
    /// `|published - oracle| / |oracle|` for `<N>`, `<N^2>`, `g2`, `Q`.
    pub fn rel_diff(&self) -> [f64; 4] {
        let r = |p: f64, o: f64| (p - o).abs() / o.abs();
        [
            r(self.paper.n_mean, self.oracle.n_mean),
            r(self.paper.n2_mean, self.oracle.n2_mean),
            r(self.paper.g2, self.oracle.g2),
            r(self.paper.q, self.oracle.q),
        ]
    }
}

pub fn thermal_rows(betas: &[f64], mu: f64, conv: G2Convention) -> Result<Vec<ThermalRow>> {
    betas
        .iter()
        .map(|&beta| {
            Ok(ThermalRow {
                beta,
                mu,
                z: partition(beta, mu)?.value,
                oracle: oracle_observables(beta, mu, conv)?,
                paper: paper_thermal_forms(beta, mu),
            })
        })
        .collect()
}

/// CSV `beta,mu,Z,N_oracle,N2_oracle,g2_oracle,Q_oracle,N_paper,N2_paper,g2_paper,Q_paper`.
pub fn thermal_table(rows: &[ThermalRow]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "beta", "mu", "Z", "N_oracle", "N2_oracle", "g2_oracle", "Q_oracle", "N_paper", "N2_paper", "g2_paper",
        "Q_paper",
    ]);
    for r in rows {
        t.push(&[
            r.beta,
            r.mu,
            r.z,
            r.oracle.n_mean,
            r.oracle.n2_mean,
            r.oracle.g2,
            r.oracle.q,
            r.paper.n_mean,
            r.paper.n2_mean,
            r.paper.g2,
            r.paper.q,
        ]);
    }
    t
}

/// `<e^{eps N}>` in the coherent state with `|z|^2 = x`: `N(e^eps x) / N(x)`.
pub fn cs_thermal_expectation(p: &FamilyParams, x: f64, eps: f64) -> Result<f64> {
    let ctl = Default::default();
    let shifted = eps.exp() * x;
    if p.family == Family::Jacobi && shifted >= 1.0 {
        return Err(Error::Domain { what: "e^eps x leaves the unit disc", arg: shifted });
    }
    Ok(normalization(p, shifted, &ctl)? / normalization(p, x, &ctl)?)
}

/// `(<N>, <N^2>)` in the coherent state by direct series.
pub fn cs_number_moments(p: &FamilyParams, x: f64) -> Result<(f64, f64)> {
    let norm = normalization(p, x, &Default::default())?;
    let (mut s1, mut s2) = (0.0, 0.0);
    let mut t = 1.0;
    let cap = crate::states::DEFAULT_N_MAX * 4096;
    for n in 1..cap {
        t *= x * p.ratio_sq(n - 1);
        let nf = n as f64;
        s1 += nf * t;
        s2 += nf * nf * t;
        // bound on the ratio of consecutive n^2 t_n terms from here on
        let q = x * p.ratio_sq(n) * ((nf + 1.0) / nf).powi(2);
        if q < 1.0 && nf * nf * t * q / (1.0 - q) < 1e-17 * s2 {
            return Ok((s1 / norm, s2 / norm));
        }
    }
    Err(Error::NonConvergence { terms: cap })
}

/// First two `eps`-derivatives of `<e^{eps N}>` at 0 by central differences
/// with one Richardson step.
pub fn cs_moments_by_differences(p: &FamilyParams, x: f64, h: f64) -> Result<(f64, f64)> {
    let f = |e: f64| cs_thermal_expectation(p, x, e);
    let f0 = f(0.0)?;
    let d = |h: f64| -> Result<(f64, f64)> {
        let (fp, fm) = (f(h)?, f(-h)?);
        Ok(((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)))
    };
    let (a1, a2) = d(h)?;
    let (b1, b2) = d(h / 2.0)?;
    Ok(((4.0 * b1 - a1) / 3.0, (4.0 * b2 - a2) / 3.0))
}

/// Radial P-function to be checked.
#[derive(Clone)]
pub enum PFunctionCandidate {
    /// `P(x) = sum_j c_j phi_j(x)`.
    Polynomial { coeffs: Vec<f64>, basis: PolyBasis },
    /// The derivative series
    /// `e^{beta mu} sum_{k<=K} (sigma beta)^k / k! e^a [(1+theta)^{2k} G](e^a x) / G(x)`,
    /// `a = beta (mu + 1)`, `sigma = +1` as written or `-1` when
    /// `sign_corrected`. Jacobi family only.
    PaperSeries { k_max: u32, sign_corrected: bool },
    Tabulated(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for PFunctionCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Polynomial { coeffs, basis } => {
                f.debug_struct("Polynomial").field("coeffs", coeffs).field("basis", basis).finish()
            }
            Self::PaperSeries { k_max, sign_corrected } => f
                .debug_struct("PaperSeries")
                .field("k_max", k_max)
                .field("sign_corrected", sign_corrected)
                .finish(),
            Self::Tabulated(_) => f.write_str("Tabulated(..)"),
        }
    }
}

fn paper_series_value(p: &FamilyParams, beta: f64, mu: f64, k_max: u32, sign: f64, x: f64) -> Result<f64> {
    let g = G2022::new(p.shift(), p.b() - 1.0)?;
    let a = beta * (mu + 1.0);
    let y = a.exp() * x;
    let gx = g.eval(x)?;
    if y == 1.0 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    let mut fact = 1.0;
    for k in 0..=k_max {
        if k > 0 {
            fact *= k as f64;
        }
        acc += (sign * beta).powi(k as i32) / fact * g.eval_theta(y, 2 * k)?;
    }
    Ok((beta * mu).exp() * a.exp() * acc / gx)
}

/// Checks `int x^n omega P dx / h_n^2` against `e^{-beta E_n} / Z`, both
/// normalized by their `n = 0` values.
pub fn verify_p_function(
    p: &FamilyParams,
    beta: f64,
    mu: f64,
    candidate: &PFunctionCandidate,
    n_check: usize,
    m: &RadialMeasure,
    tol: f64,
) -> Result<PFunctionReport> {
    check_beta(beta)?;
    if m.params != *p {
        return Err(Error::InvalidParameter("measure built for different parameters".into()));
    }
    let values: Vec<f64> = match candidate {
        PFunctionCandidate::PaperSeries { k_max, sign_corrected } => {
            if p.family != Family::Jacobi {
                return Err(Error::FamilyMismatch("the derivative series uses the Jacobi-family density"));
            }
            let sign = if *sign_corrected { -1.0 } else { 1.0 };
            m.nodes
                .iter()
                .map(|q| paper_series_value(p, beta, mu, *k_max, sign, q.x))
                .collect::<Result<_>>()?
        }
        PFunctionCandidate::Polynomial { coeffs, basis } => {
            m.nodes.iter().map(|q| basis.eval_series(coeffs, q.x)).collect()
        }
        PFunctionCandidate::Tabulated(f) => m.nodes.iter().map(|q| f(q.x)).collect(),
    };
    let moment = |n: usize| -> f64 {
        m.nodes
            .iter()
            .zip(&values)
            .map(|(q, v)| q.sign * (q.ln_mass + n as f64 * q.ln_x).exp() * v)
            .sum()
    };
    let raw: Vec<f64> = (0..=n_check)
        .map(|n| {
            let h = coeff_h(p, n)?;
            Ok(moment(n) / (h * h))
        })
        .collect::<Result<_>>()?;
    if raw.iter().any(|v| !v.is_finite()) || raw[0] == 0.0 {
        return Err(Error::Quadrature("candidate moments are not finite".into()));
    }
    let rows: Vec<MomentReport> = raw
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let target = (-beta * energy(mu, n)).exp();
            let computed = v / raw[0];
            MomentReport { order: n, computed, target, rel_error: (computed - target).abs() / target }
        })
        .collect();
    let worst = rows.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    Ok(PFunctionReport { trace: raw.iter().sum::<f64>(), rows, tol, pass: worst <= tol })
}

#[derive(Debug, Clone, Serialize)]
pub struct PFunctionReport {
    pub rows: Vec<MomentReport>,
    pub tol: f64,
    pub pass: bool,
    /// `sum_n` of the unnormalized diagonal over the checked orders.
    pub trace: f64,
}

/// Polynomial basis for P-function candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyBasis {
    /// `(x / scale)^j`
    Monomial { scale: f64 },
    /// `T_j(2x - 1)`, bounded by 1 on `(0,1)`
    ShiftedChebyshev,
}

impl PolyBasis {
    /// `phi_0(x), ..., phi_{len-1}(x)`.
    pub fn eval_all(&self, len: usize, x: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(len);
        match *self {
            PolyBasis::Monomial { scale } => {
                let mut v = 1.0;
                for _ in 0..len {
                    out.push(v);
                    v *= x / scale;
                }
            }
            PolyBasis::ShiftedChebyshev => {
                let y = 2.0 * x - 1.0;
                let (mut a, mut b) = (1.0, y);
                for _ in 0..len {
                    out.push(a);
                    let c = 2.0 * y * b - a;
                    a = b;
                    b = c;
                }
            }
        }
        out
    }

    pub fn eval_series(&self, coeffs: &[f64], x: f64) -> f64 {
        self.eval_all(coeffs.len(), x).iter().zip(coeffs).map(|(p, c)| p * c).sum()
    }
}

/// Polynomial `P` of degree `n_check` whose first `n_check + 1` diagonal
/// elements reproduce the Boltzmann weights against the measure's moments.
/// The basis is bounded on the bulk of the support so that a modest `P` has
/// modest coefficients.
pub fn synthetic_p_candidate(
    p: &FamilyParams,
    beta: f64,
    mu: f64,
    n_check: usize,
    m: &RadialMeasure,
) -> Result<PFunctionCandidate> {
    if m.params != *p {
        return Err(Error::InvalidParameter("measure built for different parameters".into()));
    }
    let z = partition(beta, mu)?.value;
    let dim = n_check + 1;
    let basis = match p.family {
        Family::Jacobi => PolyBasis::ShiftedChebyshev,
        // keeps (x/scale)^j of order one where omega x^n has its mass
        Family::Bessel => PolyBasis::Monomial { scale: 0.25 * (p.b() + dim as f64) * dim as f64 },
    };
    let h2 = (0..dim).map(|k| coeff_h(p, k).map(|h| h * h)).collect::<Result<Vec<_>>>()?;
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    for q in &m.nodes {
        let phi = basis.eval_all(dim, q.x);
        for n in 0..dim {
            let w = q.sign * (q.ln_mass + n as f64 * q.ln_x).exp() / h2[n];
            for j in 0..dim {
                a[(n, j)] += w * phi[j];
            }
        }
    }
    let rhs = DVector::from_fn(dim, |n, _| (-beta * energy(mu, n)).exp() / z);
    let c = a
        .full_piv_lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidParameter("moment system is singular".into()))?;
    Ok(PFunctionCandidate::Polynomial { coeffs: c.iter().copied().collect(), basis })
}

/// CSV rows of a P-function report: `n,computed,target,rel_error`.
pub fn p_report_table(r: &PFunctionReport) -> CsvTable {
    let mut t = CsvTable::new(&["n", "computed", "target", "rel_error"]);
    for row in &r.rows {
        t.push_cells(&[row.order.to_string(), fmt_f64(row.computed), fmt_f64(row.target), fmt_f64(row.rel_error)]);
    }
    t
}
