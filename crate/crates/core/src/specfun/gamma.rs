use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k (2k-1))` for the Stirling tail.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const SHIFT_TO: f64 = 12.0;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

fn stirling_real(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut tail = 0.0;
    for c in STIRLING.iter().rev() {
        tail = tail * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + tail * inv
}

/// `ln |Gamma(x)|` for real `x`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain { what: "ln_gamma", arg: x });
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        let s = sin_pi(x).abs();
        return Ok(PI.ln() - s.ln() - ln_gamma(1.0 - x)?);
    }
    if x >= SHIFT_TO {
        return Ok(stirling_real(x));
    }
    let mut prod = 1.0;
    let mut y = x;
    while y < SHIFT_TO {
        prod *= y;
        y += 1.0;
    }
    Ok(stirling_real(y) - prod.ln())
}

/// Sign of `Gamma(x)`; `+1` for positive `x`.
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 || is_nonpositive_integer(x) || (x.floor() as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn gamma(x: f64) -> Result<f64> {
    Ok(gamma_sign(x) * ln_gamma(x)?.exp())
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    match ln_gamma(x) {
        Ok(l) => gamma_sign(x) * (-l).exp(),
        Err(_) => 0.0,
    }
}

/// Rising factorial `(a)_n` as a direct product.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

/// `ln (a)_n` for `a > 0`.
pub fn ln_pochhammer(a: f64, n: u32) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::Domain { what: "ln_pochhammer", arg: a });
    }
    if n < 16 {
        return Ok(pochhammer(a, n).ln());
    }
    Ok(ln_gamma(a + n as f64)? - ln_gamma(a)?)
}

fn ln_sin_pi_complex(z: Complex64) -> Complex64 {
    let w = z * PI;
    let i = Complex64::i();
    let ln2 = 2f64.ln();
    if w.im > 1.0 {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw})
        -i * w + ln_1p(-(i * w * 2.0).exp()) + Complex64::new(-ln2, PI / 2.0)
    } else if w.im < -1.0 {
        // sin w = (-i/2) e^{iw} (1 - e^{-2iw})
        i * w + ln_1p(-(-i * w * 2.0).exp()) + Complex64::new(-ln2, -PI / 2.0)
    } else {
        w.sin().ln()
    }
}

fn ln_1p(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        x - x * x / 2.0 + x * x * x / 3.0
    } else {
        (x + 1.0).ln()
    }
}

fn stirling_complex(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut tail = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        tail = tail * inv2 + c;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + tail * inv
}

/// Principal-branch `ln Gamma(z)` (up to multiples of `2 pi i` left of the
/// line `Re z = 1/2`, which do not affect `exp`).
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain { what: "ln_gamma_complex", arg: z.re });
    }
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(z.re));
    }
    if z.re < 0.5 {
        let refl = ln_gamma_complex(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi_complex(z) - refl);
    }
    if z.re >= SHIFT_TO || z.norm() >= 2.0 * SHIFT_TO {
        return Ok(stirling_complex(z));
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut y = z;
    while y.re < SHIFT_TO {
        shift += y.ln();
        y += 1.0;
    }
    Ok(stirling_complex(y) - shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-14);
        assert!((ln_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        assert!((ln_gamma(0.5).unwrap() - 0.572_364_942_924_700_1).abs() < 1e-14);
    }

    #[test]
    fn poles_are_errors() {
        assert_eq!(ln_gamma(0.0), Err(Error::Pole(0.0)));
        assert_eq!(ln_gamma(-3.0), Err(Error::Pole(-3.0)));
        assert!(ln_gamma_complex(Complex64::new(-2.0, 0.0)).is_err());
        assert_eq!(rgamma(-4.0), 0.0);
    }

    #[test]
    fn negative_arguments() {
        // Gamma(-0.5) = -2 sqrt(pi)
        let g = gamma(-0.5).unwrap();
        assert!((g + 2.0 * PI.sqrt()).abs() < 1e-14);
        // Gamma(-1.5) = 4 sqrt(pi) / 3
        let g = gamma(-1.5).unwrap();
        assert!((g - 4.0 * PI.sqrt() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn pochhammer_products() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert!((pochhammer(-3.5, 2) - 8.75).abs() < 1e-15);
        assert!((pochhammer(2.5, 2) - 8.75).abs() < 1e-15);
        assert_eq!(pochhammer(-3.0, 5), 0.0);
    }

    #[test]
    fn complex_matches_real_on_axis() {
        for &x in &[0.3, 0.5, 1.7, 4.2, 13.5, 40.0] {
            let c = ln_gamma_complex(Complex64::new(x, 0.0)).unwrap();
            assert!((c.re - ln_gamma(x).unwrap()).abs() < 1e-13, "x = {x}");
            assert!(c.im.abs() < 1e-13);
        }
    }

    #[test]
    fn complex_recurrence() {
        let z = Complex64::new(-3.3, 7.25);
        let lhs = ln_gamma_complex(z + 1.0).unwrap();
        let rhs = ln_gamma_complex(z).unwrap() + z.ln();
        let d = (lhs - rhs).exp();
        assert!((d - 1.0).norm() < 1e-12, "{d}");
    }

    #[test]
    fn large_imaginary_reflection_is_finite() {
        let z = Complex64::new(-800.0, 600.0);
        let a = ln_gamma_complex(z).unwrap();
        let b = ln_gamma_complex(z + 1.0).unwrap();
        let ratio = (b - a).exp();
        assert!((ratio - z).norm() / z.norm() < 1e-10);
    }
}
