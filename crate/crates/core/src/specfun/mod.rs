//! Scalar special-function kernels.

mod bessel;
mod gamma;
mod hyper;
mod meijer;

pub use bessel::{bessel_i, bessel_i_complex, bessel_k, bessel_k_scaled};
pub use gamma::{
    gamma, gamma_sign, ln_gamma, ln_gamma_complex, ln_pochhammer, pochhammer, rgamma, sin_pi,
};
pub use hyper::{hyp_0f1, hyp_0f1_complex, hyp_2f1, SeriesControl};
pub use meijer::{meijer_g_2022, ContourSpec, G2022};
