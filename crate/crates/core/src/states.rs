//! The two coherent-state families: parameters, Fock coefficients,
//! normalization, overlaps and the label metric.
//!
//! With `b = 2m + 2nu` the squared coefficients are
//!
//! * Bessel: `h_n^2 = n! (b)_n`, radius of convergence infinite;
//! * Jacobi: `h_n^2 = n! (b)_n / ((c+1)_n)^2` with `c = m + nu`, radius 1.
//!
//! Jacobi amplitudes carry the sign `(-1)^n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::specfun::{bessel_i, bessel_i_complex, hyp_0f1, hyp_2f1, ln_gamma, SeriesControl};
use crate::{Error, Result};

/// Default truncation order; doubled until the tail bound is met.
pub const DEFAULT_N_MAX: usize = 128;
/// Tail target for automatic truncation.
pub const AUTO_TAIL: f64 = 1e-12;
/// Largest tail accepted for an explicitly requested truncation.
pub const FIXED_TAIL: f64 = 1e-10;
const N_MAX_CAP: usize = 1 << 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Bessel,
    Jacobi,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bessel" => Ok(Family::Bessel),
            "jacobi" => Ok(Family::Jacobi),
            _ => Err(Error::InvalidParameter(format!("unknown family '{s}'"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Bessel => "bessel",
            Family::Jacobi => "jacobi",
        })
    }
}

/// Shift inside the Jacobi Pochhammer factor: `m + nu` (standard) or `m + 2 nu`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PochhammerVariant {
    #[default]
    Standard,
    ShiftTwoNu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    pub m: u32,
    pub nu: f64,
    #[serde(default)]
    pub variant: PochhammerVariant,
}

impl FamilyParams {
    pub fn new(family: Family, m: u32, nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu = {nu} must be positive")));
        }
        Ok(Self { family, m, nu, variant: PochhammerVariant::Standard })
    }

    pub fn bessel(m: u32, nu: f64) -> Result<Self> {
        Self::new(Family::Bessel, m, nu)
    }

    pub fn jacobi(m: u32, nu: f64) -> Result<Self> {
        Self::new(Family::Jacobi, m, nu)
    }

    pub fn with_variant(mut self, variant: PochhammerVariant) -> Self {
        self.variant = variant;
        self
    }

    /// `b = 2m + 2nu`.
    pub fn b(&self) -> f64 {
        2.0 * self.m as f64 + 2.0 * self.nu
    }

    /// `mu = 2 nu`.
    pub fn mu(&self) -> f64 {
        2.0 * self.nu
    }

    /// Jacobi Pochhammer shift `c`.
    pub fn shift(&self) -> f64 {
        match self.variant {
            PochhammerVariant::Standard => self.m as f64 + self.nu,
            PochhammerVariant::ShiftTwoNu => self.m as f64 + 2.0 * self.nu,
        }
    }

    /// Radius of the label disc.
    pub fn radius(&self) -> f64 {
        match self.family {
            Family::Bessel => f64::INFINITY,
            Family::Jacobi => 1.0,
        }
    }

    /// `(-1)^n` for Jacobi, `1` for Bessel.
    pub fn sign(&self, n: usize) -> f64 {
        match self.family {
            Family::Jacobi if n % 2 == 1 => -1.0,
            _ => 1.0,
        }
    }

    pub fn check_label(&self, z: Complex64) -> Result<()> {
        let r = z.norm();
        if !r.is_finite() || r >= self.radius() {
            return Err(Error::Domain { what: "label outside the family's disc", arg: r });
        }
        Ok(())
    }

    /// `h_n^2 / h_{n+1}^2`.
    pub fn ratio_sq(&self, n: usize) -> f64 {
        let nf = n as f64;
        let base = 1.0 / ((nf + 1.0) * (self.b() + nf));
        match self.family {
            Family::Bessel => base,
            Family::Jacobi => base * (self.shift() + 1.0 + nf).powi(2),
        }
    }

    /// Spectrum gap `e_n = n (n + b - 1)`.
    pub fn eigen_gap(&self, n: usize) -> f64 {
        let nf = n as f64;
        nf * (nf + self.b() - 1.0)
    }
}

/// `ln h_n`.
pub fn ln_coeff_h(p: &FamilyParams, n: usize) -> Result<f64> {
    let nf = n as f64;
    let b = p.b();
    let mut l2 = ln_gamma(nf + 1.0)? + ln_gamma(b + nf)? - ln_gamma(b)?;
    if p.family == Family::Jacobi {
        let c1 = p.shift() + 1.0;
        l2 -= 2.0 * (ln_gamma(c1 + nf)? - ln_gamma(c1)?);
    }
    if !l2.is_finite() {
        return Err(Error::Overflow("ln h_n"));
    }
    Ok(0.5 * l2)
}

/// Unsigned coefficient `h_n`, exact products for small `n`.
pub fn coeff_h(p: &FamilyParams, n: usize) -> Result<f64> {
    if n <= 40 {
        let mut h2 = 1.0;
        for k in 0..n {
            h2 /= p.ratio_sq(k);
        }
        return Ok(h2.sqrt());
    }
    let l = ln_coeff_h(p, n)?;
    if l > f64::MAX.ln() {
        return Err(Error::Overflow("h_n"));
    }
    Ok(l.exp())
}

/// Table `h_0^2, ..., h_n^2`.
pub fn h_squared_table(p: &FamilyParams, n: usize) -> Result<Vec<f64>> {
    (0..=n).map(|k| coeff_h(p, k).map(|h| h * h)).collect()
}

/// `N(x) = sum x^n / h_n^2`.
pub fn normalization(p: &FamilyParams, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(x >= 0.0) || x >= p.radius().powi(2) {
        return Err(Error::Domain { what: "normalization argument", arg: x });
    }
    match p.family {
        Family::Bessel => hyp_0f1(p.b(), x, ctl),
        Family::Jacobi => {
            let c1 = p.shift() + 1.0;
            hyp_2f1(c1, c1, p.b(), x, ctl)
        }
    }
}

/// Bessel normalization through `Gamma(b) x^{(1-b)/2} I_{b-1}(2 sqrt x)`.
pub fn normalization_bessel_closed(p: &FamilyParams, x: f64) -> Result<f64> {
    if p.family != Family::Bessel {
        return Err(Error::FamilyMismatch("closed form exists for the Bessel family only"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let b = p.b();
    let s = x.sqrt();
    Ok((ln_gamma(b)? + (1.0 - b) * s.ln()).exp() * bessel_i(b - 1.0, 2.0 * s)?)
}

/// Truncated Fock amplitudes `a_0..=a_{n_max}` and an upper bound on the
/// discarded squared mass.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub coeffs: Vec<Complex64>,
    pub n_max: usize,
    pub tail_bound: f64,
}

impl FockVector {
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `<self|other>` over the common support.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Coherent-state label with its domain check already done.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Label {
    pub z: Complex64,
}

impl Label {
    pub fn new(p: &FamilyParams, z: Complex64) -> Result<Self> {
        p.check_label(z)?;
        Ok(Self { z })
    }
}

/// Geometric bound on `sum_{n > n_max} |a_n|^2` given `|a_{n_max}|^2`.
fn tail_majorant(p: &FamilyParams, x: f64, n_max: usize, last_sq: f64) -> f64 {
    if last_sq == 0.0 {
        return 0.0;
    }
    // the ratio is a decreasing rational function for large n; take the
    // worst value over a long window and the limit
    let limit = match p.family {
        Family::Bessel => 0.0,
        Family::Jacobi => x,
    };
    let mut rho = limit;
    for n in n_max..=n_max.saturating_mul(8).max(n_max + 64) {
        rho = rho.max(x * p.ratio_sq(n));
    }
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    last_sq * rho / (1.0 - rho)
}

fn build_state(p: &FamilyParams, z: Complex64, n_max: usize, ln_norm: f64) -> Result<FockVector> {
    let r = z.norm();
    let mut coeffs = Vec::with_capacity(n_max + 1);
    if r == 0.0 {
        coeffs.push(Complex64::new(1.0, 0.0));
        coeffs.resize(n_max + 1, Complex64::new(0.0, 0.0));
        return Ok(FockVector { coeffs, n_max, tail_bound: 0.0 });
    }
    let (lr, th) = (r.ln(), z.arg());
    let mut ln_h = 0.0;
    for n in 0..=n_max {
        if n > 0 {
            ln_h -= 0.5 * p.ratio_sq(n - 1).ln();
        }
        let modulus = (n as f64 * lr - ln_h - 0.5 * ln_norm).exp();
        coeffs.push(Complex64::from_polar(p.sign(n) * modulus, n as f64 * th));
    }
    let last = coeffs[n_max].norm_sqr();
    let tail_bound = tail_majorant(p, r * r, n_max, last);
    Ok(FockVector { coeffs, n_max, tail_bound })
}

/// Normalized coherent state.
///
/// With `n_max = None` the order starts at [`DEFAULT_N_MAX`] and doubles until
/// the tail bound drops below [`AUTO_TAIL`]; an explicit order must achieve
/// [`FIXED_TAIL`].
pub fn state(p: &FamilyParams, z: Complex64, n_max: Option<usize>) -> Result<FockVector> {
    p.check_label(z)?;
    let x = z.norm_sqr();
    let ln_norm = normalization(p, x, &SeriesControl::default())?.ln();
    match n_max {
        Some(n) => {
            let v = build_state(p, z, n, ln_norm)?;
            if v.tail_bound > FIXED_TAIL {
                return Err(Error::Truncation { n_max: n, achieved: v.tail_bound, required: FIXED_TAIL });
            }
            Ok(v)
        }
        None => {
            let mut n = DEFAULT_N_MAX;
            loop {
                let v = build_state(p, z, n, ln_norm)?;
                if v.tail_bound < AUTO_TAIL {
                    return Ok(v);
                }
                if n >= N_MAX_CAP {
                    return Err(Error::Truncation { n_max: n, achieved: v.tail_bound, required: AUTO_TAIL });
                }
                n *= 2;
            }
        }
    }
}

/// `<z1|z2>` through the Fock series.
pub fn overlap(p: &FamilyParams, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    let a = state(p, z1, None)?;
    let b = state(p, z2, None)?;
    let n = a.n_max.max(b.n_max);
    let a = if a.n_max < n { state(p, z1, Some(n))? } else { a };
    let b = if b.n_max < n { state(p, z2, Some(n))? } else { b };
    Ok(a.inner(&b))
}

/// Bessel-family overlap in closed form,
/// `(|z1 z2| / w)^{(b-1)/2} I_{b-1}(2 sqrt w) / sqrt(I_{b-1}(2|z1|) I_{b-1}(2|z2|))`
/// with `w = conj(z1) z2`.
pub fn overlap_bessel_closed(p: &FamilyParams, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    if p.family != Family::Bessel {
        return Err(Error::FamilyMismatch("closed overlap exists for the Bessel family only"));
    }
    let w = z1.conj() * z2;
    let nu = p.b() - 1.0;
    let (r1, r2) = (z1.norm(), z2.norm());
    if w == Complex64::new(0.0, 0.0) {
        let n1 = normalization_bessel_closed(p, r1 * r1)?;
        let n2 = normalization_bessel_closed(p, r2 * r2)?;
        return Ok(Complex64::new(1.0 / (n1 * n2).sqrt(), 0.0));
    }
    let sw = w.sqrt();
    let num = bessel_i_complex(nu, sw * 2.0)? * (Complex64::new(r1 * r2, 0.0) / w).powf(nu / 2.0);
    let den = (bessel_i(nu, 2.0 * r1)? * bessel_i(nu, 2.0 * r2)?).sqrt();
    Ok(num / den)
}

/// `|| |z1> - |z2> || = sqrt(2 (1 - Re <z2|z1>))`.
pub fn label_distance(p: &FamilyParams, z1: Complex64, z2: Complex64) -> Result<f64> {
    let ov = overlap(p, z1, z2)?;
    Ok((2.0 * (1.0 - ov.re)).max(0.0).sqrt())
}
