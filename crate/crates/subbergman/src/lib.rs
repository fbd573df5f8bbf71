//! Numerical toolkit for weighted Bergman spaces and their sub-Bergman
//! subspaces on the unit disk.
//!
//! The crate realizes, at finite truncation, the objects that operator
//! theory attaches to a contractive analytic symbol `phi`:
//!
//! - [`analytic`]: exact coefficient arithmetic for polynomials and
//!   truncated series, Möbius maps, finite Blaschke products and rational
//!   quotients;
//! - [`bergman`]: the weighted space `A^2_alpha`, its monomial norms,
//!   a Gauss-Jacobi quadrature oracle for the inner product, and closed-form
//!   kernel evaluation (generalized Bergman and sub-Bergman kernels);
//! - [`operator`]: Toeplitz matrices in the orthonormalized monomial basis,
//!   the defect operator `I - T_phi T_phi^*` and its Hermitian square root,
//!   plus explicit antiderivative-based closed forms for the adjoint action
//!   that can be cross-checked against the matrix route;
//! - [`pick`]: Pick-matrix construction and the normalized `1 - 1/k` complete
//!   Nevanlinna-Pick positivity test, with a seeded randomized witness search;
//! - [`boundary`]: radial and Stolz-angle boundary probes, lacunary witness
//!   series, the rank-one kernel factorization check and a cyclicity residual
//!   probe in the sub-Bergman norm.
//!
//! Everything is pure and immutable after construction; values can be shared
//! freely across threads.

pub mod analytic;
pub mod bergman;
pub mod boundary;
pub mod operator;
pub mod pick;
pub mod serde_complex;

pub use num_complex::Complex64;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor or operation received a parameter that violates its contract.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Evaluation requested outside the domain where the formula is defined.
    #[error("outside domain: {0}")]
    OutsideDomain(String),

    #[error("index {index} out of range (maximum {max})")]
    IndexOutOfRange { index: usize, max: usize },

    /// A quadrature rule was asked to integrate past its exactness degree.
    #[error("integrand degree {required} exceeds quadrature exactness degree {supported}")]
    ExactnessExceeded { required: usize, supported: usize },

    /// A denominator could not be certified zero-free on the requested disk.
    #[error("denominator vanishes on |z| <= {radius}: {detail}")]
    DenominatorVanishes { radius: f64, detail: String },

    /// A matrix that must come from a contraction has an eigenvalue below the
    /// hard floor; this signals an upstream bug, not rounding noise.
    #[error("contraction violated: minimum eigenvalue {min_eigenvalue:e}")]
    ContractionViolation { min_eigenvalue: f64 },

    /// A user-supplied evaluator failed; the failure is reported, not swallowed.
    #[error("evaluation failed at z = {z}: {reason}")]
    EvalFailure { z: Complex64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of a numerical contract (as opposed to input
    /// validation); front ends map these to a distinct exit status.
    pub fn is_numerical_contract_violation(&self) -> bool {
        matches!(self, Error::ContractionViolation { .. })
    }
}
