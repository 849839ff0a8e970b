//! Time evolution under `H |n> = e_n |n>`, `e_n = n (n + b - 1)` (hbar = 1),
//! and the phase-space density `|<z|z0(t)>|^2`.
//!
//! Writing `e_n t = n^2 t + n (b-1) t`, the first phase is stripped by the
//! rotated basis `e^{-i n^2 t}|n>` and the second rotates the label:
//! `z -> z e^{-i (b-1) t}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::specfun::{bessel_i, bessel_i_complex};
use crate::states::{state, Family, FamilyParams, FockVector};
use crate::util::{fmt_f64, CsvTable};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub params: FamilyParams,
}

impl Spectrum {
    pub fn new(params: FamilyParams) -> Self {
        Self { params }
    }

    pub fn level(&self, n: usize) -> f64 {
        self.params.eigen_gap(n)
    }

    /// Angular velocity of the label rotation, `b - 1`.
    pub fn rotation_rate(&self) -> f64 {
        self.params.b() - 1.0
    }
}

fn phase(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, -angle.rem_euclid(std::f64::consts::TAU))
}

/// `a_n -> e^{-i e_n t} a_n`.
pub fn evolve(p: &FamilyParams, fock: &FockVector, t: f64) -> FockVector {
    let mut out = fock.clone();
    for (n, c) in out.coeffs.iter_mut().enumerate() {
        *c *= phase(p.eigen_gap(n) * t);
    }
    out
}

/// Rotated label `z e^{-i (b-1) t}`.
pub fn rotated_label(p: &FamilyParams, z: Complex64, t: f64) -> Complex64 {
    z * phase((p.b() - 1.0) * t)
}

/// `|| e^{+i n^2 t} (evolved a_n) - a_n(z(t)) ||_2`.
pub fn rotation_property(p: &FamilyParams, z: Complex64, t: f64) -> Result<f64> {
    let v = state(p, z, None)?;
    let w = state(p, rotated_label(p, z, t), Some(v.n_max))?;
    let e = evolve(p, &v, t);
    let r2: f64 = e
        .coeffs
        .iter()
        .zip(&w.coeffs)
        .enumerate()
        .map(|(n, (a, b))| {
            let nf = n as f64;
            (a * phase(-nf * nf * t) - b).norm_sqr()
        })
        .sum();
    Ok(r2.sqrt())
}

fn require_bessel(p: &FamilyParams) -> Result<()> {
    if p.family != Family::Bessel {
        return Err(Error::FamilyMismatch("closed-form density exists for the Bessel family only"));
    }
    Ok(())
}

/// `|I_{b-1}(2 sqrt(conj(z0) z))|^2 / (I_{b-1}(2|z|) I_{b-1}(2|z0|))`.
pub fn density_static(p: &FamilyParams, z0: Complex64, z: Complex64) -> Result<f64> {
    require_bessel(p)?;
    let nu = p.b() - 1.0;
    let w = z0.conj() * z;
    let den = bessel_i(nu, 2.0 * z.norm())? * bessel_i(nu, 2.0 * z0.norm())?;
    if w.norm() == 0.0 {
        // only the vacuum term survives: 1 / (N(|z|^2) N(|z0|^2))
        let n = |r: f64| crate::states::normalization_bessel_closed(p, r * r);
        return Ok(1.0 / (n(z.norm())? * n(z0.norm())?));
    }
    let num = bessel_i_complex(nu, w.sqrt() * 2.0)?.norm_sqr();
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolvedDensity {
    /// Closed form with the rotated label `z0(t)`.
    pub formula: f64,
    /// Series `|<z|z0(t)>|^2`.
    pub rotated_overlap: f64,
    /// `|<z| e^{-iHt} |z0>|^2` with the full phases.
    pub raw: f64,
}

pub fn density_evolved(p: &FamilyParams, z0: Complex64, z: Complex64, t: f64) -> Result<EvolvedDensity> {
    require_bessel(p)?;
    let z0t = rotated_label(p, z0, t);
    let formula = density_static(p, z0t, z)?;
    let a = state(p, z, None)?;
    let b0 = state(p, z0, None)?;
    let n = a.n_max.max(b0.n_max);
    let a = state(p, z, Some(n))?;
    let b0 = state(p, z0, Some(n))?;
    let bt = state(p, z0t, Some(n))?;
    let rotated_overlap = a.inner(&bt).norm_sqr();
    let raw = a.inner(&evolve(p, &b0, t)).norm_sqr();
    Ok(EvolvedDensity { formula, rotated_overlap, raw })
}

/// CSV `r,theta,t,rho_formula,rho_raw` over the polar grid, `t` outermost.
pub fn density_scan(p: &FamilyParams, z0: Complex64, rs: &[f64], thetas: &[f64], ts: &[f64]) -> Result<CsvTable> {
    require_bessel(p)?;
    let mut out = CsvTable::new(&["r", "theta", "t", "rho_formula", "rho_raw"]);
    for &t in ts {
        for &r in rs {
            for &th in thetas {
                let d = density_evolved(p, z0, Complex64::from_polar(r, th), t)?;
                out.push_cells(&[fmt_f64(r), fmt_f64(th), fmt_f64(t), fmt_f64(d.formula), fmt_f64(d.raw)]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_levels() {
        let s = Spectrum::new(FamilyParams::bessel(1, 0.5).unwrap());
        assert_eq!(s.level(0), 0.0);
        assert_eq!(s.level(3), 3.0 * 5.0);
        assert_eq!(s.rotation_rate(), 2.0);
    }

    #[test]
    fn zero_time_is_identity() {
        let p = FamilyParams::bessel(1, 0.5).unwrap();
        let v = state(&p, Complex64::new(0.4, 0.1), None).unwrap();
        assert_eq!(evolve(&p, &v, 0.0).coeffs, v.coeffs);
        assert!(rotation_property(&p, Complex64::new(0.4, 0.1), 0.0).unwrap() < 1e-15);
    }

    #[test]
    fn jacobi_density_rejected() {
        let p = FamilyParams::jacobi(1, 0.5).unwrap();
        let z = Complex64::new(0.1, 0.0);
        assert!(matches!(density_static(&p, z, z), Err(Error::FamilyMismatch(_))));
    }
}
