use num_complex::Complex64;

use crate::{Error, Result};

/// Truncation policy for power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub rel_tol: f64,
    pub abs_floor: f64,
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64, abs_floor: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::InvalidParameter("max_terms must be at least 1".into()));
        }
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!("rel_tol {rel_tol} not in (0, 1)")));
        }
        if !(abs_floor > 0.0) {
            return Err(Error::InvalidParameter(format!("abs_floor {abs_floor} must be positive")));
        }
        Ok(Self { max_terms, rel_tol, abs_floor })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { max_terms: 200_000, rel_tol: 1e-17, abs_floor: 1e-300 }
    }
}

/// Sums `sum_k t_k` with `t_{k+1} = t_k * ratio(k)`, stopping once two
/// consecutive terms fall below `rel_tol` of the running sum.
pub(crate) fn sum_ratio_series<F>(ctl: &SeriesControl, mut ratio: F) -> Result<f64>
where
    F: FnMut(usize) -> f64,
{
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut quiet = 0;
    for k in 0..ctl.max_terms {
        term *= ratio(k);
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() <= ctl.rel_tol * sum.abs().max(ctl.abs_floor) {
            quiet += 1;
            if quiet == 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        if !sum.is_finite() {
            return Err(Error::Overflow("hypergeometric series"));
        }
    }
    Err(Error::NonConvergence { terms: ctl.max_terms })
}

fn check_lower_parameter(b: f64, what: &'static str) -> Result<()> {
    if b <= 0.0 && b == b.round() {
        return Err(Error::Domain { what, arg: b });
    }
    Ok(())
}

/// `0F1(; b; x)` for `x >= 0`.
pub fn hyp_0f1(b: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    check_lower_parameter(b, "hyp_0f1 lower parameter")?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain { what: "hyp_0f1", arg: x });
    }
    sum_ratio_series(ctl, |k| {
        let k = k as f64;
        x / ((k + 1.0) * (b + k))
    })
}

/// `0F1(; b; w)` for complex `w` (used for off-diagonal kernel values).
pub fn hyp_0f1_complex(b: f64, w: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    check_lower_parameter(b, "hyp_0f1 lower parameter")?;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut quiet = 0;
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        term *= w / ((kf + 1.0) * (b + kf));
        sum += term;
        if term.norm() <= ctl.rel_tol * sum.norm().max(ctl.abs_floor) {
            quiet += 1;
            if quiet == 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence { terms: ctl.max_terms })
}

/// Gauss series `2F1(a, b; c; x)` for `|x| < 1`.
pub fn hyp_2f1(a: f64, b: f64, c: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    check_lower_parameter(c, "hyp_2f1 lower parameter")?;
    if !(x.abs() < 1.0) {
        return Err(Error::Domain { what: "hyp_2f1 requires |x| < 1", arg: x });
    }
    sum_ratio_series(ctl, |k| {
        let k = k as f64;
        (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        let ctl = SeriesControl::default();
        assert_eq!(hyp_0f1(2.3, 0.0, &ctl).unwrap(), 1.0);
        assert_eq!(hyp_2f1(1.0, 2.0, 3.0, 0.0, &ctl).unwrap(), 1.0);
    }

    #[test]
    fn log_identity() {
        let ctl = SeriesControl::default();
        let v = hyp_2f1(1.0, 1.0, 2.0, 0.5, &ctl).unwrap();
        let oracle = -(1.0f64 - 0.5).ln() / 0.5;
        assert!((v - oracle).abs() < 1e-14, "{v} {oracle}");
    }

    #[test]
    fn terminating_series() {
        // 2F1(-2, b; c; x) = 1 - 2bx/c + b(b+1)x^2/(c(c+1))
        let ctl = SeriesControl::default();
        let (b, c, x) = (1.5, 2.5, 0.7);
        let v = hyp_2f1(-2.0, b, c, x, &ctl).unwrap();
        let e = 1.0 - 2.0 * b * x / c + b * (b + 1.0) * x * x / (c * (c + 1.0));
        assert!((v - e).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let ctl = SeriesControl::default();
        assert!(hyp_2f1(1.0, 1.0, 2.0, 1.0, &ctl).is_err());
        assert!(hyp_0f1(-2.0, 1.0, &ctl).is_err());
        assert!(hyp_0f1(1.0, -1.0, &ctl).is_err());
        assert!(SeriesControl::new(0, 1e-10, 1e-300).is_err());
        assert!(SeriesControl::new(10, 1.5, 1e-300).is_err());
    }

    #[test]
    fn non_convergence_reported() {
        let ctl = SeriesControl::new(5, 1e-16, 1e-300).unwrap();
        assert_eq!(
            hyp_2f1(2.5, 2.5, 5.0, 0.9, &ctl),
            Err(Error::NonConvergence { terms: 5 })
        );
    }

    #[test]
    fn complex_agrees_on_real_axis() {
        let ctl = SeriesControl::default();
        let r = hyp_0f1(3.4, 2.5, &ctl).unwrap();
        let c = hyp_0f1_complex(3.4, Complex64::new(2.5, 0.0), &ctl).unwrap();
        assert!((c.re - r).abs() < 1e-14 * r && c.im == 0.0);
    }
}
