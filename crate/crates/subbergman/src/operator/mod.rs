//! Toeplitz and defect operators on truncations of `A^2_alpha`, plus the
//! explicit antiderivative closed forms for the adjoint and defect action
//! that provide the second, matrix-free route to the same values.

mod explicit;
mod matrix;
mod range;

pub use explicit::{BlaschkeAdjointExplicit, DefectActionExplicit, SAFEGUARD_RADIUS};
pub use matrix::{
    adjoint, apply_defect, defect_matrix, defect_sqrt, toeplitz_matrix, toeplitz_matrix_for,
    DefectApplication, OperatorKind, OperatorMatrix, EIGENVALUE_CLAMP_FLOOR,
};
pub use range::{range_mapping_report, RangeMappingReport, RatioSample};
