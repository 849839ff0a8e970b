//! Numerics for generalized hypergeometric coherent states (GHCS).
//!
//! The crate is organized bottom-up:
//!
//! - [`specfun`]: gamma, Pochhammer, hypergeometric series, modified Bessel
//!   functions and a Mellin–Barnes evaluator for the `G^{2,0}_{2,2}` density.
//! - [`quadrature`]: Gauss–Laguerre and Gauss–Jacobi rules.
//! - [`states`]: family parameters, Fock coefficients, normalization, overlaps.
//! - [`measure`]: the radial weight density and the moment certificate for the
//!   resolution of the identity.
//! - [`kernel`]: reproducing-kernel checks and the analytic representation.
//! - [`quantize`]: coherent-state (anti-Wick) quantization into banded matrices.
//! - [`dynamics`]: time evolution, phase-space densities, temporal stability.
//! - [`thermal`]: Boltzmann sums, closed-form comparison, P-function moments.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod kernel;
pub mod measure;
pub mod quadrature;
pub mod quantize;
pub mod specfun;
pub mod states;
pub mod thermal;
pub mod util;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use states::{Family, FamilyParams, FockVector, PochhammerVariant};

/// Library version echoed into every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
