//! Numerical laboratory for Green biharmonic spaces.
//!
//! The crate realizes the coupling kernel `V`, its adjoint `V*` and the
//! biharmonic Green kernel `H(x, y) = ∫ G₁(x, z) G₂(z, y) dμ(z)` on three model
//! spaces:
//!
//! * [`models::interval`]: `(x u)'' = -v` on `[0, 1)` with `v = a/x² + b`,
//!   where `H(·, 0)` is identically `+∞` and the adjoint coupling fails to be
//!   finite at `0`;
//! * [`models::bilaplace`]: `u'' = -v`, `v'' = 0` on `(0, 1)` with Navier data,
//!   the symmetric positive case;
//! * [`models::newtonian`]: the Newtonian kernel on ℝᴺ, `N ≥ 5`.
//!
//! Divergent integrals are returned as `+∞` together with a
//! [`DivergenceCertificate`](quadrature::DivergenceCertificate) rather than as
//! errors.

// Guards are written `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adjoint;
pub mod coupling;
pub mod error;
pub mod eval;
pub mod extended;
pub mod kernel;
pub mod models;
pub mod quadrature;
pub mod riquier;
pub mod verify;

pub use coupling::{
    classify_pair, compose_green, coupling_apply, pure_decompose, w_apply, BiharmonicPair,
    ClassifyReport, PairFlag,
};
pub use error::{Error, Result};
pub use eval::Evaluable;
pub use extended::ExtendedValue;
pub use kernel::{GreenKernel, LineModel, ModelId, ReferenceMeasure};

/// Verification tolerances, one decade apart per layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance per integral.
    pub quad: f64,
    /// Cross-operator identities.
    pub identity: f64,
    /// Finite-difference residuals.
    pub fd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad: 1e-8,
            identity: 1e-6,
            fd: 1e-3,
        }
    }
}
