//! Gauss rules for the two radial supports.
//!
//! Nodes are the eigenvalues of the Jacobi matrix (no eigenvectors are
//! formed). Laguerre nodes are then polished by Newton steps on a rescaled
//! three-term recurrence and weighted in log space, since their weights span
//! hundreds of decades. Jacobi weights come from the Christoffel sum of the
//! orthonormal recurrence.

use nalgebra::DMatrix;

use crate::specfun::ln_gamma;
use crate::{Error, Result};

/// Gauss rule with weights carried as logarithms (all weights positive).
#[derive(Debug, Clone, PartialEq)]
pub struct LogRule {
    pub nodes: Vec<f64>,
    pub ln_weights: Vec<f64>,
}

impl LogRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.ln_weights)
            .map(|(&x, &lw)| lw.exp() * f(x))
            .sum()
    }
}

fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = off[i];
            j[(i + 1, i)] = off[i];
        }
    }
    let mut v: Vec<f64> = j.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// `(L_n^a(x), L_{n-1}^a(x))` scaled by a common factor `e^{-scale}`; returns
/// the pair and `scale`.
fn laguerre_pair(n: usize, alpha: f64, x: f64) -> (f64, f64, f64) {
    let mut p_prev = 0.0;
    let mut p = 1.0;
    let mut scale = 0.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * p - (kf + alpha) * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
        let m = p.abs().max(p_prev.abs());
        if m > 1e150 {
            p /= m;
            p_prev /= m;
            scale += m.ln();
        }
    }
    (p, p_prev, scale)
}

/// Generalized Gauss–Laguerre rule for `int_0^inf t^alpha e^{-t} f(t) dt`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<LogRule> {
    if n == 0 {
        return Err(Error::Quadrature("empty Laguerre rule".into()));
    }
    if !(alpha > -1.0) {
        return Err(Error::Quadrature(format!("Laguerre exponent {alpha} must exceed -1")));
    }
    let diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|i| (i as f64 * (i as f64 + alpha)).sqrt()).collect();
    let mut nodes = tridiagonal_eigenvalues(&diag, &off);

    let nf = n as f64;
    let ln_const = ln_gamma(nf + alpha + 1.0)? - ln_gamma(nf + 1.0)? - 2.0 * (nf + alpha).ln();
    let mut ln_weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (ln, lnm1, _) = laguerre_pair(n, alpha, *x);
            // x L_n' = n L_n - (n + alpha) L_{n-1}
            let d = (nf * ln - (nf + alpha) * lnm1) / *x;
            if d == 0.0 {
                break;
            }
            let step = ln / d;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs() {
                break;
            }
        }
        let (_, lnm1, scale) = laguerre_pair(n, alpha, *x);
        ln_weights.push(ln_const + x.ln() - 2.0 * (lnm1.abs().ln() + scale));
    }
    if nodes.iter().any(|x| !(*x > 0.0)) || ln_weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::Quadrature("Laguerre rule degenerated".into()));
    }
    Ok(LogRule { nodes, ln_weights })
}

/// Gauss–Jacobi rule on `(0,1)` for `int_0^1 x^beta (1-x)^alpha f(x) dx`.
pub fn gauss_jacobi01(n: usize, alpha: f64, beta: f64) -> Result<LogRule> {
    if n == 0 {
        return Err(Error::Quadrature("empty Jacobi rule".into()));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::Quadrature(format!(
            "Jacobi exponents ({alpha}, {beta}) must exceed -1"
        )));
    }
    // recurrence on (-1,1) with weight (1-t)^alpha (1+t)^beta
    let ab = alpha + beta;
    let diag: Vec<f64> = (0..n)
        .map(|k| {
            let kf = k as f64;
            if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            let v = if k == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            v.sqrt()
        })
        .collect();
    let ln_mass = ln_gamma(alpha + 1.0)? + ln_gamma(beta + 1.0)? - ln_gamma(ab + 2.0)?;
    let pairs: Vec<(f64, f64)> = tridiagonal_eigenvalues(&diag, &off)
        .into_iter()
        .map(|t| {
            // w = mass / sum_k p_k(t)^2 over the orthonormal polynomials
            let (mut p_prev, mut p, mut sum) = (0.0, 1.0, 1.0);
            for k in 0..n - 1 {
                let b_prev = if k == 0 { 0.0 } else { off[k - 1] };
                let next = ((t - diag[k]) * p - b_prev * p_prev) / off[k];
                p_prev = p;
                p = next;
                sum += p * p;
            }
            ((1.0 + t) / 2.0, ln_mass - sum.ln())
        })
        .collect();
    if pairs.iter().any(|(x, w)| !(*x > 0.0 && *x < 1.0) || !w.is_finite()) {
        return Err(Error::Quadrature("Jacobi rule degenerated".into()));
    }
    Ok(LogRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        ln_weights: pairs.iter().map(|p| p.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;

    #[test]
    fn laguerre_moments() {
        for &alpha in &[-0.5, 0.0, 0.4, 2.3] {
            let r = gauss_laguerre(60, alpha).unwrap();
            for k in 0..20 {
                let got = r.integrate(|t| t.powi(k));
                let exact = gamma(alpha + 1.0 + k as f64).unwrap();
                assert!((got - exact).abs() < 1e-12 * exact, "a={alpha} k={k}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn large_laguerre_rule_is_finite() {
        let r = gauss_laguerre(200, 0.7).unwrap();
        let total = r.integrate(|_| 1.0);
        assert!((total - gamma(1.7).unwrap()).abs() < 2e-12);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn jacobi_moments() {
        for &(a, b) in &[(0.0, 0.0), (0.5, -0.5), (1.4, 0.0), (0.0, -0.6), (-0.5, -0.5)] {
            let r = gauss_jacobi01(40, a, b).unwrap();
            for k in 0..30 {
                let got = r.integrate(|x| x.powi(k));
                let kb = b + k as f64;
                let exact = gamma(kb + 1.0).unwrap() * gamma(a + 1.0).unwrap()
                    / gamma(kb + a + 2.0).unwrap();
                assert!((got - exact).abs() < 1e-12 * exact, "({a},{b}) k={k}");
            }
        }
    }

    #[test]
    fn invalid_exponents() {
        assert!(gauss_laguerre(10, -1.0).is_err());
        assert!(gauss_jacobi01(10, -1.2, 0.0).is_err());
        assert!(gauss_jacobi01(0, 0.0, 0.0).is_err());
    }
}
