//! Modified Bessel functions of real order.
//!
//! `I_nu` is summed from its ascending series (all terms positive for
//! `nu > -1`, so there is no cancellation). `K_nu` follows Temme's method:
//! a series for `K_mu`, `K_{mu+1}` with `|mu| <= 1/2` when `x < 2`, Steed's
//! continued fraction otherwise, then upward recurrence in the order.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::{gamma_sign, ln_gamma};
use crate::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;

/// Taylor coefficients of `1/Gamma(z) = sum_k RGAMMA[k] z^(k+1)`.
#[allow(clippy::excessive_precision)]
const RGAMMA: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_9,
    -0.042_002_635_034_095_24,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_34,
    -0.009_621_971_527_876_974,
    0.007_218_943_246_663_1,
    -0.001_165_167_591_859_065,
    -0.000_215_241_674_114_951,
    0.000_128_050_282_388_116_2,
    -0.000_020_134_854_780_788_24,
    -1.250_493_482_142_670_7e-6,
    1.133_027_231_981_695_9e-6,
    -2.056_338_416_977_607e-7,
    6.116_095_104_481_416e-9,
    5.002_007_644_469_223e-9,
    -1.181_274_570_487_020_1e-9,
    1.043_426_711_691_100_5e-10,
    7.782_263_439_905_071e-12,
    -3.696_805_618_642_206e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_507e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_260_8e-15,
    -1.181_259_301_697_458_8e-16,
];

/// Returns `(gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu))` for `|mu| <= 1/2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    let mut even = 0.0;
    let mut odd = 0.0;
    // gam2 collects RGAMMA[0], RGAMMA[2], ...; gam1 collects RGAMMA[1], RGAMMA[3], ...
    for k in (0..RGAMMA.len() / 2).rev() {
        even = even * mu2 + RGAMMA[2 * k];
        odd = odd * mu2 + RGAMMA[2 * k + 1];
    }
    let gam1 = -odd;
    let gam2 = even;
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

/// `I_nu(x)` for real order and `x >= 0`.
pub fn bessel_i(order: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() || !order.is_finite() {
        return Err(Error::Domain { what: "bessel_i", arg: x });
    }
    let nu = if order < 0.0 && order == order.round() { -order } else { order };
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Domain { what: "bessel_i of negative order at 0", arg: x })
        };
    }
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut quiet = 0;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (nu + kf + 1.0));
        sum += term;
        if term.abs() <= EPS * sum.abs() {
            quiet += 1;
            if quiet == 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        k += 1;
        if k > MAX_ITER {
            return Err(Error::NonConvergence { terms: MAX_ITER });
        }
    }
    let ln_pref = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0)?;
    let v = gamma_sign(nu + 1.0) * sum * ln_pref.exp();
    if !v.is_finite() {
        return Err(Error::Overflow("bessel_i"));
    }
    Ok(v)
}

/// `I_nu(zeta)` for real order and complex argument, principal branch of
/// `(zeta/2)^nu`.
pub fn bessel_i_complex(order: f64, zeta: Complex64) -> Result<Complex64> {
    if zeta.norm() == 0.0 {
        return bessel_i(order, 0.0).map(|v| Complex64::new(v, 0.0));
    }
    let nu = if order < 0.0 && order == order.round() { -order } else { order };
    let q = zeta * zeta * 0.25;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut quiet = 0;
    for k in 0..MAX_ITER {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (nu + kf + 1.0));
        sum += term;
        if term.norm() <= EPS * sum.norm() {
            quiet += 1;
            if quiet == 2 {
                let ln_pref = (zeta * 0.5).ln() * nu - ln_gamma(nu + 1.0)?;
                return Ok(sum * ln_pref.exp() * gamma_sign(nu + 1.0));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence { terms: MAX_ITER })
}

/// Returns `e^x K_mu(x)` and `e^x K_{mu+1}(x)` for `|mu| <= 1/2`.
fn k_pair_scaled(mu: f64, x: f64) -> Result<(f64, f64)> {
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mu2 = mu * mu;
        let mut converged = false;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { terms: MAX_ITER });
        }
        let scale = x.exp();
        Ok((sum * scale, sum1 * 2.0 / x * scale))
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu * mu;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..MAX_ITER {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { terms: MAX_ITER });
        }
        let h = a1 * h;
        let kmu = (PI / (2.0 * x)).sqrt() / s;
        let k1 = kmu * (mu + x + 0.5 - h) / x;
        Ok((kmu, k1))
    }
}

/// `e^x K_nu(x)` for real order and `x > 0`.
pub fn bessel_k_scaled(order: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() || !order.is_finite() {
        return Err(Error::Domain { what: "bessel_k", arg: x });
    }
    let nu = order.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut kmu, mut k1) = k_pair_scaled(mu, x)?;
    let xi2 = 2.0 / x;
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    if !kmu.is_finite() {
        return Err(Error::Overflow("bessel_k"));
    }
    Ok(kmu)
}

/// `K_nu(x)` for real order and `x > 0`.
pub fn bessel_k(order: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled(order, x)? * (-x).exp())
}
