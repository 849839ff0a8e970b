//! Radial weight density `omega = W / N` and the moment certificate for the
//! resolution of the identity: `int_0^R x^n omega(x) dx = h_n^2`.
//!
//! Bessel family: `omega(x) = 2/Gamma(b) x^{(b-1)/2} K_{b-1}(2 sqrt x)`.
//! Jacobi family: `omega = Gamma(c+1)^2 / Gamma(b) G^{2,0}_{2,2}(x | c,c; 0,b-1)`,
//! supported on `(0,1)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::quadrature::{gauss_jacobi01, gauss_laguerre};
use crate::specfun::{bessel_i, bessel_k_scaled, hyp_2f1, ln_gamma, sin_pi, SeriesControl, G2022};
use crate::states::{coeff_h, normalization, Family, FamilyParams};
use crate::util::CsvTable;
use crate::{Error, Result};

pub const DEFAULT_NODES: usize = 200;
/// `ln x` range of the exp-sinh rule.
const ES_LN_X_MIN: f64 = 700.0;
const ES_LN_X_MAX: f64 = 13.0;
/// `-ln(1 - x)` at the upper end of the tanh-sinh rule.
const TS_LN_EDGE: f64 = 34.0;

fn g_instance(p: &FamilyParams) -> Result<G2022> {
    G2022::new(p.shift(), p.b() - 1.0)
}

/// `Gamma(c+1)^2 / Gamma(b)`.
fn jacobi_prefactor_ln(p: &FamilyParams) -> Result<f64> {
    Ok(2.0 * ln_gamma(p.shift() + 1.0)? - ln_gamma(p.b())?)
}

/// Normalized density `omega(x)`; `+inf` flags the integrable singularity
/// at `x = 0` when `b <= 1`.
pub fn density(p: &FamilyParams, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain { what: "density argument", arg: x });
    }
    let b = p.b();
    if x == 0.0 {
        // limits of the small-x expansion
        return Ok(if b <= 1.0 {
            f64::INFINITY
        } else {
            match p.family {
                Family::Bessel => 1.0 / (b - 1.0),
                Family::Jacobi => p.shift().powi(2) / (b - 1.0),
            }
        });
    }
    match p.family {
        Family::Bessel => {
            let t = 2.0 * x.sqrt();
            let ln = 2f64.ln() - ln_gamma(b)? + 0.5 * (b - 1.0) * x.ln() - t;
            Ok(ln.exp() * bessel_k_scaled(b - 1.0, t)?)
        }
        Family::Jacobi => {
            let g = g_instance(p)?;
            let gv = if x == 1.0 {
                // left limit (1-x)^e / Gamma(e+1)
                if g.edge_exponent() == 0.0 { 1.0 } else { 0.0 }
            } else {
                g.eval(x)?
            };
            Ok(jacobi_prefactor_ln(p)?.exp() * gv)
        }
    }
}

/// Weight `W = omega N` on the interior of the support.
pub fn weight(p: &FamilyParams, x: f64) -> Result<f64> {
    match p.family {
        Family::Bessel => {
            if x == 0.0 {
                return density(p, 0.0);
            }
            // 2 K_{b-1}(t) I_{b-1}(t), t = 2 sqrt x
            let t = 2.0 * x.sqrt();
            let nu = p.b() - 1.0;
            let i = bessel_i(nu, t)?;
            if !i.is_finite() {
                return Err(Error::Overflow("I_{b-1} in the weight"));
            }
            Ok(2.0 * bessel_k_scaled(nu, t)? * i * (-t).exp())
        }
        Family::Jacobi => {
            if x >= 1.0 {
                return Err(Error::Domain { what: "Jacobi weight needs x < 1", arg: x });
            }
            Ok(density(p, x)? * normalization(p, x, &SeriesControl::default())?)
        }
    }
}

/// Weight with the caption's extra index: `omega(x) 2F1(-c-n, -c-n; b; x) sin^2(pi c) / pi^2`
/// on `0 <= x <= 1`, with one-sided limits at the ends.
pub fn weight_literal(p: &FamilyParams, n: u32, x: f64) -> Result<f64> {
    if p.family != Family::Jacobi {
        return Err(Error::FamilyMismatch("literal weight is defined for the Jacobi family"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain { what: "literal weight needs 0 <= x <= 1", arg: x });
    }
    let a = -p.shift() - n as f64;
    let b = p.b();
    let f = if x == 0.0 {
        1.0
    } else if x == 1.0 {
        // Gauss: Gamma(b) Gamma(b - 2a) / Gamma(b - a)^2, b - 2a > 0 here
        (ln_gamma(b)? + ln_gamma(b - 2.0 * a)? - 2.0 * ln_gamma(b - a)?).exp()
    } else {
        hyp_2f1(a, a, b, x, &SeriesControl::default())?
    };
    let s = sin_pi(p.shift()) / std::f64::consts::PI;
    Ok(density(p, x)? * f * s * s)
}

/// Quadrature node with the density folded into its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureNode {
    pub x: f64,
    pub ln_x: f64,
    /// `ln |w_i omega(x_i) / rule weight function|`
    pub ln_mass: f64,
    pub sign: f64,
}

/// Density with a precomputed quadrature table.
#[derive(Debug, Clone)]
pub struct RadialMeasure {
    pub params: FamilyParams,
    pub support: (f64, f64),
    pub nodes: Vec<MeasureNode>,
}

impl RadialMeasure {
    pub fn new(params: FamilyParams) -> Result<Self> {
        Self::with_nodes(params, DEFAULT_NODES)
    }

    pub fn with_nodes(params: FamilyParams, n: usize) -> Result<Self> {
        match params.family {
            Family::Bessel => Self::bessel(params, n),
            Family::Jacobi => Self::jacobi(params, n),
        }
    }

    fn bessel(params: FamilyParams, n: usize) -> Result<Self> {
        if params.b() < 2.0 {
            return Self::bessel_exp_sinh(params, n);
        }
        // x = u^2, t = 2u; omega dx = 2^{1-b}/Gamma(b) t^b K_{b-1}(t) dt
        let b = params.b();
        let alpha = b - (b - 1.0).abs();
        let rule = gauss_laguerre(n, alpha)?;
        let c = (1.0 - b) * 2f64.ln() - ln_gamma(b)?;
        let nodes = rule
            .nodes
            .par_iter()
            .zip(rule.ln_weights.par_iter())
            .map(|(&t, &lw)| {
                let ks = bessel_k_scaled(b - 1.0, t)?;
                let x = 0.25 * t * t;
                Ok(MeasureNode {
                    x,
                    ln_x: 2.0 * (0.5 * t).ln(),
                    ln_mass: lw + c + (b - alpha) * t.ln() + ks.ln(),
                    sign: 1.0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, support: (0.0, f64::INFINITY), nodes })
    }

    /// Exp-sinh rule `x = exp(pi/2 sinh tau)`. Used when `b < 2`, where the
    /// `u^{2b-2}` term of the Laguerre integrand is not smooth at the origin.
    /// The table holds `2n` nodes.
    fn bessel_exp_sinh(params: FamilyParams, n: usize) -> Result<Self> {
        let n = 2 * n;
        if n < 16 {
            return Err(Error::Quadrature(format!("{n} nodes is too few for the exp-sinh rule")));
        }
        let half_pi = std::f64::consts::FRAC_PI_2;
        let b = params.b();
        // int_0^eps omega ~ eps^b / b below e^{-40}
        let ln_x_min = ((40.0 - b.ln()) / b).clamp(40.0, ES_LN_X_MIN);
        let (lo, hi) = ((ln_x_min / half_pi).asinh(), (ES_LN_X_MAX / half_pi).asinh());
        let h = (hi + lo) / (n - 1) as f64;
        let c = 2f64.ln() - ln_gamma(b)?;
        let nodes = (0..n)
            .into_par_iter()
            .map(|k| {
                let tau = -lo + k as f64 * h;
                let ln_x = half_pi * tau.sinh();
                let t = 2.0 * (0.5 * ln_x).exp();
                let ks = bessel_k_scaled(b - 1.0, t)?;
                let ln_omega = c + 0.5 * (b - 1.0) * ln_x - t + ks.ln();
                Ok(MeasureNode {
                    x: ln_x.exp(),
                    ln_x,
                    ln_mass: ln_omega + ln_x + (h * half_pi * tau.cosh()).ln(),
                    sign: 1.0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, support: (0.0, f64::INFINITY), nodes })
    }

    /// Tanh-sinh rule `x = 1 / (1 + e^{-pi sinh tau})` with `2n` nodes, for
    /// `b < 2` where `G` mixes `x^{b-1}` and `x^0` terms at the origin.
    fn jacobi_tanh_sinh(params: FamilyParams, n: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::Quadrature(format!("{n} nodes is too few for the tanh-sinh rule")));
        }
        let n = 2 * n;
        let pi = std::f64::consts::PI;
        let b = params.b();
        let ln_x_min = ((40.0 - b.ln()) / b).clamp(40.0, ES_LN_X_MIN);
        let (lo, hi) = ((ln_x_min / pi).asinh(), (TS_LN_EDGE / pi).asinh());
        let h = (hi + lo) / (n - 1) as f64;
        let g = g_instance(&params)?;
        let pre = jacobi_prefactor_ln(&params)?;
        let nodes = (0..n)
            .into_par_iter()
            .map(|k| {
                let tau = -lo + k as f64 * h;
                let q = pi * tau.sinh();
                let ln_x = -(-q).exp().ln_1p();
                let ln_1mx = -q.exp().ln_1p();
                let x = ln_x.exp();
                let gv = g.eval(x)?;
                Ok(MeasureNode {
                    x,
                    ln_x,
                    ln_mass: pre + gv.abs().ln() + ln_x + ln_1mx + (h * pi * tau.cosh()).ln(),
                    sign: gv.signum(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, support: (0.0, 1.0), nodes })
    }

    fn jacobi(params: FamilyParams, n: usize) -> Result<Self> {
        if params.b() < 2.0 {
            return Self::jacobi_tanh_sinh(params, n);
        }
        let g = g_instance(&params)?;
        // endpoint exponents from the rightmost pole and the gamma balance
        let beta = (params.b() - 1.0).min(0.0);
        let alpha = g.edge_exponent();
        let rule = gauss_jacobi01(n, alpha, beta)?;
        let pre = jacobi_prefactor_ln(&params)?;
        let nodes = rule
            .nodes
            .par_iter()
            .zip(rule.ln_weights.par_iter())
            .map(|(&x, &lw)| {
                let gv = g.eval(x)?;
                let lx = x.ln();
                Ok(MeasureNode {
                    x,
                    ln_x: lx,
                    ln_mass: lw + pre + gv.abs().ln() - beta * lx - alpha * (-x).ln_1p(),
                    sign: gv.signum(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, support: (0.0, 1.0), nodes })
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        density(&self.params, x)
    }

    /// `int x^s omega(x) dx` for real `s > -1`.
    pub fn moment(&self, s: f64) -> f64 {
        self.nodes.iter().map(|q| q.sign * (q.ln_mass + s * q.ln_x).exp()).sum()
    }

    /// `int f(x) omega(x) dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().map(|q| q.sign * q.ln_mass.exp() * f(q.x)).sum()
    }

    /// Smallest density value at the nodes.
    pub fn min_node_density(&self) -> Result<f64> {
        self.nodes
            .iter()
            .map(|q| density(&self.params, q.x))
            .try_fold(f64::INFINITY, |m, v| v.map(|v| m.min(v)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub order: usize,
    pub computed: f64,
    pub target: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub moments: Vec<MomentReport>,
    pub tol: f64,
    pub pass: bool,
    pub worst: MomentReport,
}

/// Compares `int x^n omega dx` against `h_n^2` for `n = 0..=n_check`.
/// Quadrature breakdown surfaces as `Err`; a failed identity as `pass = false`.
pub fn verify_identity(p: &FamilyParams, n_check: usize, tol: f64, nodes: usize) -> Result<IdentityReport> {
    if n_check < 8 {
        return Err(Error::InvalidParameter(format!("n_check = {n_check} below 8")));
    }
    let m = RadialMeasure::with_nodes(*p, nodes)?;
    verify_with(&m, n_check, tol)
}

pub fn verify_with(m: &RadialMeasure, n_check: usize, tol: f64) -> Result<IdentityReport> {
    let moments = (0..=n_check)
        .into_par_iter()
        .map(|n| {
            let h = coeff_h(&m.params, n)?;
            let target = h * h;
            let computed = m.moment(n as f64);
            if !computed.is_finite() {
                return Err(Error::Quadrature(format!("moment {n} is not finite")));
            }
            Ok(MomentReport { order: n, computed, target, rel_error: (computed - target).abs() / target })
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = *moments.iter().max_by(|a, b| a.rel_error.total_cmp(&b.rel_error)).unwrap();
    Ok(IdentityReport { pass: worst.rel_error <= tol, worst, moments, tol })
}

/// Which weight a figure curve draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightForm {
    /// `W = omega N`.
    Resolved,
    /// The index-`n` form used in the caption.
    Literal { n: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure1Curve {
    pub params: FamilyParams,
    pub form: WeightForm,
}

impl Figure1Curve {
    fn label(&self) -> String {
        let v = match self.params.variant {
            crate::PochhammerVariant::Standard => "standard",
            crate::PochhammerVariant::ShiftTwoNu => "shift-two-nu",
        };
        match self.form {
            WeightForm::Resolved => v.to_string(),
            WeightForm::Literal { n } => format!("{v}-literal-n{n}"),
        }
    }
}

/// The three caption regimes: `m=1,n=2` over `nu`; `m=2,nu=0.7` over `n`;
/// `n=2,nu=0.7` over `m`.
pub fn figure1_curves() -> Result<Vec<Figure1Curve>> {
    let mut out = Vec::new();
    let lit = |m, nu, n| -> Result<Figure1Curve> {
        Ok(Figure1Curve { params: FamilyParams::jacobi(m, nu)?, form: WeightForm::Literal { n } })
    };
    for nu in [0.3, 0.5, 0.7, 0.9] {
        out.push(lit(1, nu, 2)?);
    }
    for n in [0, 1, 2, 3] {
        out.push(lit(2, 0.7, n)?);
    }
    for m in [0, 1, 2, 3] {
        out.push(lit(m, 0.7, 2)?);
    }
    Ok(out)
}

/// CSV `x,W,m,nu,variant`, curves in the given order, grid in the given order.
/// Non-finite or out-of-support points are written as `inf`/`nan`.
pub fn figure1_scan(curves: &[Figure1Curve], grid: &[f64]) -> Result<CsvTable> {
    let mut t = CsvTable::new(&["x", "W", "m", "nu", "variant"]);
    for c in curves {
        let label = c.label();
        let vals: Vec<f64> = grid
            .par_iter()
            .map(|&x| {
                let v = match c.form {
                    WeightForm::Resolved => weight(&c.params, x),
                    WeightForm::Literal { n } => weight_literal(&c.params, n, x),
                };
                v.unwrap_or(f64::NAN)
            })
            .collect();
        for (&x, &w) in grid.iter().zip(&vals) {
            t.push_cells(&[
                crate::util::fmt_f64(x),
                crate::util::fmt_f64(w),
                c.params.m.to_string(),
                crate::util::fmt_f64(c.params.nu),
                label.clone(),
            ]);
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_weight_edge_limits() {
        let p = FamilyParams::jacobi(1, 0.5).unwrap();
        // Gamma(5/2)^2 / Gamma(3) * 2F1(-7/2,-7/2;3;1) / pi^2 (mpmath)
        let want = 0.883_572_933_822_129_3 * 8.756_975_133_544_654 / std::f64::consts::PI.powi(2);
        let got = weight_literal(&p, 2, 1.0).unwrap();
        assert!((got - want).abs() < 1e-13 * want, "{got} {want}");
        let near = weight_literal(&p, 2, 1.0 - 1e-9).unwrap();
        assert!((near - got).abs() < 1e-6 * got);
        assert!((weight_literal(&p, 2, 0.0).unwrap() - density(&p, 0.0).unwrap() / std::f64::consts::PI.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn bessel_density_at_zero_matches_limit() {
        let p = FamilyParams::bessel(1, 0.5).unwrap();
        let d0 = density(&p, 0.0).unwrap();
        let d = density(&p, 1e-10).unwrap();
        assert!((d - d0).abs() < 1e-4);
        let q = FamilyParams::bessel(0, 0.3).unwrap();
        assert!(density(&q, 0.0).unwrap().is_infinite());
    }

    #[test]
    fn n_check_floor() {
        let p = FamilyParams::bessel(1, 0.5).unwrap();
        assert!(verify_identity(&p, 5, 1e-8, 50).is_err());
    }
}
