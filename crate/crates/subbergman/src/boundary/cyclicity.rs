//! Cyclicity residual probe in the sub-Bergman norm.
//!
//! The norm of the defect range space can be computed through the
//! pseudoinverse of `M = I - T_phi T_phi^*`: on the span of eigenvectors
//! with eigenvalue `lambda`, dividing coordinates by `sqrt(lambda)` turns
//! the Euclidean length into the range-space norm. The probe measures
//!
//! ```text
//! res(d) = min over polynomials p of degree <= d of || 1 - psi p ||
//! ```
//!
//! in that norm. Residuals driven to zero mean no factor of the space
//! separates `1` from the multiples of `psi` (the cyclicity signature);
//! residuals pinned near `||1||` mean the constants stay orthogonal to
//! every multiple.
//!
//! The minimization is nested across degrees, so residuals are
//! nonincreasing; the implementation orthogonalizes columns incrementally
//! and subtracts squared projections, which preserves that monotonicity
//! exactly even in floating point.

use crate::analytic::{DiskSymbol, PowerSeries};
use crate::bergman::BergmanSpaceModel;
use crate::operator::defect_matrix;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

/// Eigencomponents of the defect below this are treated as numerically
/// outside the range space and excluded from the norm.
pub const EIGENCOMPONENT_EXCLUSION_FLOOR: f64 = 1e-8;

/// Kept-subspace mass below this makes the probe meaningless.
const CONSTANT_MASS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DegreeResidual {
    pub degree: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CyclicityReport {
    /// Empty when the probe is inconclusive.
    pub residuals: Vec<DegreeResidual>,
    pub n_work: usize,
    pub excluded_components: usize,
    pub kept_components: usize,
    pub min_kept_eigenvalue: f64,
    /// Range-space norm of the constant 1; residuals start here.
    pub constant_norm: f64,
    /// Set when the constant has essentially no mass in the kept subspace,
    /// so residuals would compare noise against noise.
    pub inconclusive: bool,
}

/// Weighted coordinates of `x` in the kept eigenbasis: `y_j / sqrt(lambda_j)`
/// with `y = U^H x`.
fn weighted_coords(
    eigenvectors: &DMatrix<Complex64>,
    eigenvalues: &DVector<f64>,
    kept: &[usize],
    x: &DVector<Complex64>,
) -> DVector<Complex64> {
    let y = eigenvectors.adjoint() * x;
    DVector::from_iterator(kept.len(), kept.iter().map(|&j| y[j] / eigenvalues[j].sqrt()))
}

/// Measures `min_p || 1 - psi p ||` in the defect range-space norm for each
/// requested degree cap. `degrees` must be strictly ascending; the largest,
/// plus the degree of `psi`, must fit in `n_work = truncation - buffer`.
pub fn cyclicity_residual_probe(
    psi: &PowerSeries,
    space: &BergmanSpaceModel,
    phi: &DiskSymbol,
    degrees: &[usize],
    buffer: usize,
) -> Result<CyclicityReport> {
    let psi_degree = match psi.degree() {
        None => {
            return Err(Error::InvalidParameter(
                "the candidate cyclic vector must be nonzero".into(),
            ))
        }
        Some(d) => d,
    };
    if degrees.is_empty() {
        return Err(Error::InvalidParameter("no degree caps requested".into()));
    }
    if degrees.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "degree caps must be strictly ascending".into(),
        ));
    }
    if space.truncation() <= buffer {
        return Err(Error::InvalidParameter(format!(
            "buffer {buffer} consumes the whole truncation {}",
            space.truncation()
        )));
    }
    let n_work = space.truncation() - buffer;
    let max_degree = *degrees.last().expect("nonempty");
    if max_degree + psi_degree > n_work {
        return Err(Error::IndexOutOfRange {
            index: max_degree + psi_degree,
            max: n_work,
        });
    }

    let defect = defect_matrix(space, phi, n_work, buffer)?;
    let eigen = SymmetricEigen::new(defect.entries().clone());
    let kept: Vec<usize> = (0..eigen.eigenvalues.len())
        .filter(|&j| eigen.eigenvalues[j] >= EIGENCOMPONENT_EXCLUSION_FLOOR)
        .collect();
    let excluded_components = eigen.eigenvalues.len() - kept.len();
    let min_kept_eigenvalue = kept
        .iter()
        .map(|&j| eigen.eigenvalues[j])
        .fold(f64::INFINITY, f64::min);

    let one_coords = space.to_orthonormal(&PowerSeries::one())?.rows(0, n_work + 1).into_owned();
    let kept_mass: f64 = kept.iter().map(|&j| {
        let y = eigen.eigenvectors.column(j).dotc(&one_coords);
        y.norm_sqr()
    }).sum();

    if kept.is_empty() || kept_mass < CONSTANT_MASS_FLOOR {
        return Ok(CyclicityReport {
            residuals: Vec::new(),
            n_work,
            excluded_components,
            kept_components: kept.len(),
            min_kept_eigenvalue,
            constant_norm: f64::NAN,
            inconclusive: true,
        });
    }

    let b = weighted_coords(&eigen.eigenvectors, &eigen.eigenvalues, &kept, &one_coords);
    let constant_norm = b.norm();

    // Incremental orthonormalization of the columns psi, psi z, psi z^2, ..
    // in the weighted coordinates. Subtracting nonnegative squared
    // projections from res^2 can only lower it, so nestedness survives
    // rounding.
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    let mut res_sq = constant_norm * constant_norm;
    let mut residuals = Vec::with_capacity(degrees.len());
    let mut next_column = 0usize;
    for &cap in degrees {
        while next_column <= cap {
            let col_poly = psi.shifted(next_column);
            let col_coords =
                space.to_orthonormal(&col_poly)?.rows(0, n_work + 1).into_owned();
            let mut q =
                weighted_coords(&eigen.eigenvectors, &eigen.eigenvalues, &kept, &col_coords);
            let scale = q.norm();
            // two passes of orthogonalization keep the basis orthonormal to
            // machine precision
            for _ in 0..2 {
                for prev in &basis {
                    let overlap = prev.dotc(&q);
                    q -= prev * overlap;
                }
            }
            let remaining = q.norm();
            if remaining > 1e-12 * scale.max(1e-300) {
                q /= Complex64::new(remaining, 0.0);
                let coeff = q.dotc(&b);
                res_sq = (res_sq - coeff.norm_sqr()).max(0.0);
                basis.push(q);
            }
            next_column += 1;
        }
        residuals.push(DegreeResidual { degree: cap, residual: res_sq.sqrt() });
    }

    Ok(CyclicityReport {
        residuals,
        n_work,
        excluded_components,
        kept_components: kept.len(),
        min_kept_eigenvalue,
        constant_norm,
        inconclusive: false,
    })
}
