//! The weighted Bergman space `A^2_alpha`, its quadrature oracle and its
//! reproducing kernels.
//!
//! Throughout, the weight is the normalized probability measure
//! `dA_alpha = ((alpha + 1) / pi) (1 - |z|^2)^alpha dA` on the unit disk,
//! so the constant function 1 has norm 1 and
//! `||z^n||^2 = n! Gamma(alpha + 2) / Gamma(n + alpha + 2)`.
//!
//! Two independent routes to the inner product are kept deliberately
//! separate: the closed-form monomial norm table ([`BergmanSpaceModel`],
//! via log-Gamma) and tensor-product Gauss-Jacobi quadrature
//! ([`QuadratureRule`], via Golub-Welsch with Gamma-free normalization).
//! Their agreement is a standing cross-check, so neither may call the other.

mod kernel;
mod quadrature;
mod space;

pub use kernel::{kernel_series_oracle, KernelSeriesValue, KernelSpec, PointKernel};
pub use quadrature::{inner_product_quadrature, QuadratureRule};
pub use space::{monomial_norm_sq, BergmanSpaceModel};
