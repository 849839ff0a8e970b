//! Reproducing kernel `K(z, z') = <z'|z>` and the analytic representation
//! `f(z) = sum C_n s_n z^n / h_n`.
//!
//! Angular integrals are done exactly: `int z^n conj(z)^k omega d^2z / pi`
//! vanishes unless `n = k`, when it is the radial moment `M_n`. Every
//! integral check therefore reduces to `M_n / h_n^2` weights.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::measure::RadialMeasure;
use crate::states::{coeff_h, overlap, overlap_bessel_closed, state, Family, FamilyParams, FockVector};
use crate::{Error, Result};

/// Relative size below which a mode is dropped from moment sums.
const MODE_CUTOFF: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSample {
    pub z1: Complex64,
    pub z2: Complex64,
    pub value: Complex64,
}

/// `K(z1, z2) = <z2|z1>`.
pub fn kernel(p: &FamilyParams, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    overlap(p, z2, z1)
}

pub fn kernel_sample(p: &FamilyParams, z1: Complex64, z2: Complex64) -> Result<KernelSample> {
    Ok(KernelSample { z1, z2, value: kernel(p, z1, z2)? })
}

/// Bessel closed form of the kernel.
pub fn kernel_bessel_closed(p: &FamilyParams, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    overlap_bessel_closed(p, z2, z1)
}

/// `M_n / h_n^2` for `n = 0..len`.
fn moment_ratios(m: &RadialMeasure, len: usize) -> Result<Vec<f64>> {
    (0..len)
        .map(|n| {
            let h = coeff_h(&m.params, n)?;
            Ok(m.moment(n as f64) / (h * h))
        })
        .collect()
}

/// Number of leading modes whose weight exceeds the cutoff.
fn effective_len(weights: &[f64]) -> usize {
    let peak = weights.iter().cloned().fold(0.0, f64::max);
    weights.iter().rposition(|w| *w > MODE_CUTOFF * peak).map_or(0, |i| i + 1)
}

fn check_measure(p: &FamilyParams, m: &RadialMeasure) -> Result<()> {
    if m.params != *p {
        return Err(Error::InvalidParameter("measure built for different parameters".into()));
    }
    Ok(())
}

/// `|int K(z1,z) K(z,z2) W d^2z / pi - K(z1,z2)|`.
pub fn check_idempotence(p: &FamilyParams, z1: Complex64, z2: Complex64, m: &RadialMeasure) -> Result<f64> {
    check_measure(p, m)?;
    let a = state(p, z1, None)?;
    let b = state(p, z2, None)?;
    let n = a.n_max.min(b.n_max) + 1;
    let prods: Vec<Complex64> = (0..n).map(|k| a.coeffs[k] * b.coeffs[k].conj()).collect();
    let len = effective_len(&prods.iter().map(|c| c.norm()).collect::<Vec<_>>());
    let ratios = moment_ratios(m, len)?;
    let quad: Complex64 = prods.iter().zip(&ratios).map(|(c, r)| c * r).sum();
    let exact = kernel(p, z1, z2)?;
    let res = (quad - exact).norm();
    if !res.is_finite() {
        return Err(Error::Quadrature("idempotence integral is not finite".into()));
    }
    Ok(res)
}

/// `f(z) = sum C_n s_n z^n / h_n`; Jacobi labels must lie in the unit disc.
pub fn analytic_repr(p: &FamilyParams, fock: &FockVector, z: Complex64) -> Result<Complex64> {
    if p.family == Family::Jacobi && z.norm() >= 1.0 {
        return Err(Error::Divergence(z.norm()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    for (n, c) in fock.coeffs.iter().enumerate() {
        acc += c * zn * (p.sign(n) / coeff_h(p, n)?);
        zn *= z;
    }
    if !(acc.re.is_finite() && acc.im.is_finite()) {
        return Err(Error::Divergence(z.norm()));
    }
    Ok(acc)
}

/// `int f(z') Kbar(z, z') omega d^2z' / pi` with the unnormalized kernel
/// `Kbar(z, z') = sum (z conj z')^n / h_n^2`; equals `f(z)` when the
/// moment identity holds.
pub fn reproduce(p: &FamilyParams, fock: &FockVector, z: Complex64, m: &RadialMeasure) -> Result<Complex64> {
    check_measure(p, m)?;
    if p.family == Family::Jacobi && z.norm() >= 1.0 {
        return Err(Error::Divergence(z.norm()));
    }
    let ratios = moment_ratios(m, fock.coeffs.len())?;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    for (n, c) in fock.coeffs.iter().enumerate() {
        acc += c * zn * (p.sign(n) * ratios[n] / coeff_h(p, n)?);
        zn *= z;
    }
    Ok(acc)
}

/// `int conj(f1) f2 omega d^2z / pi`.
pub fn inner_product_integral(
    p: &FamilyParams,
    f1: &FockVector,
    f2: &FockVector,
    m: &RadialMeasure,
) -> Result<Complex64> {
    check_measure(p, m)?;
    if f1.coeffs.len() != f2.coeffs.len() {
        return Err(Error::Dimension(f1.coeffs.len(), f2.coeffs.len()));
    }
    let ratios = moment_ratios(m, f1.coeffs.len())?;
    let v: Complex64 = f1.coeffs.iter().zip(&f2.coeffs).zip(&ratios).map(|((a, b), r)| a.conj() * b * r).sum();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Quadrature("inner product integral is not finite".into()));
    }
    Ok(v)
}

/// Gram matrix `G_ij = K(z_j, z_i) = <z_i|z_j>`.
pub fn gram_matrix(p: &FamilyParams, labels: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let states = labels.iter().map(|&z| state(p, z, None)).collect::<Result<Vec<_>>>()?;
    let n = labels.len();
    let mut g = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let len = states[i].coeffs.len().min(states[j].coeffs.len());
            let v: Complex64 = (0..len).map(|k| states[i].coeffs[k].conj() * states[j].coeffs[k]).sum();
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    Ok(g)
}

/// Smallest eigenvalue of the Gram matrix.
pub fn gram_min_eigenvalue(p: &FamilyParams, labels: &[Complex64]) -> Result<f64> {
    if labels.is_empty() {
        return Err(Error::InvalidParameter("no labels".into()));
    }
    let g = gram_matrix(p, labels)?;
    let e = SymmetricEigen::new(g);
    Ok(e.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Fock vector with the given coefficients (not renormalized).
pub fn fock_from(coeffs: Vec<Complex64>) -> FockVector {
    let n_max = coeffs.len().saturating_sub(1);
    FockVector { coeffs, n_max, tail_bound: 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_kernel() {
        let p = FamilyParams::bessel(1, 0.5).unwrap();
        let z = c(0.7, -0.2);
        let k = kernel(&p, c(0.0, 0.0), z).unwrap();
        let n = crate::states::normalization(&p, z.norm_sqr(), &Default::default()).unwrap();
        assert!((k - c(n.powf(-0.5), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn single_mode_repr() {
        let p = FamilyParams::bessel(1, 0.5).unwrap();
        let f = fock_from(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let z = c(0.3, 0.9);
        assert!((analytic_repr(&p, &f, z).unwrap() - z / 3f64.sqrt()).norm() < 1e-15);
    }

    #[test]
    fn jacobi_repr_outside_disc_flagged() {
        let p = FamilyParams::jacobi(1, 0.5).unwrap();
        let f = fock_from(vec![c(1.0, 0.0)]);
        assert!(matches!(analytic_repr(&p, &f, c(1.2, 0.0)), Err(Error::Divergence(_))));
    }

    #[test]
    fn mismatched_measure_rejected() {
        let p = FamilyParams::bessel(1, 0.5).unwrap();
        let q = FamilyParams::bessel(2, 0.5).unwrap();
        let m = RadialMeasure::with_nodes(q, 40).unwrap();
        assert!(check_idempotence(&p, c(0.1, 0.0), c(0.2, 0.0), &m).is_err());
    }
}
