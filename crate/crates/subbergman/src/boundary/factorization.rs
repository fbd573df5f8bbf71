//! Rank-one factorization check for the ratio of a sub-Bergman kernel one
//! weight down to the Bergman kernel two weights down.
//!
//! For a Möbius symbol `phi` with zero `a` and `alpha > 0`, define
//!
//! ```text
//! R(z, w) = phi(z) (z - a)^2 K_sub(alpha - 1, phi)(z, w) / K_ber(alpha - 2)(z, w)
//! ```
//!
//! where `K_sub` is the sub-Bergman kernel at weight `alpha - 1` and
//! `K_ber(alpha - 2) = (1 - z conj(w))^{-alpha}`. Algebraically `R` splits
//! as `u(z) v(w)`, so every 2 x 2 cross-ratio determinant
//! `R(z1,w1) R(z2,w2) - R(z1,w2) R(z2,w1)` must vanish; the check measures
//! how close to zero those determinants actually come when `R` is assembled
//! from kernel evaluations rather than from the factored form.

use crate::analytic::{DiskSymbol, MoebiusMap};
use crate::bergman::KernelSpec;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// Points in the `z` slot must keep this distance from the symbol's zero.
const Z_MARGIN: f64 = 0.05;

/// The ratio `R(z, w)` above, assembled from the two kernel closed forms.
pub fn rank_one_ratio(
    alpha: f64,
    phi: &MoebiusMap,
    z: Complex64,
    w: Complex64,
) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "the kernel ratio needs alpha > 0 (both kernels defined), got {alpha}"
        )));
    }
    if (z - phi.a()).norm() < Z_MARGIN {
        return Err(Error::OutsideDomain(format!(
            "z = {z} is within {Z_MARGIN} of the symbol zero {}",
            phi.a()
        )));
    }
    let sub = KernelSpec::sub_bergman(alpha - 1.0, DiskSymbol::from(phi.clone()))?;
    let bergman = KernelSpec::generalized(alpha)?;
    let d = z - phi.a();
    Ok(phi.eval(z)? * d * d * sub.eval(z, w)? / bergman.eval(z, w)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    pub alpha: f64,
    pub tuple_count: usize,
    /// `|R(z1,w1) R(z2,w2) - R(z1,w2) R(z2,w1)|` per tuple.
    pub defects: Vec<f64>,
    pub max_defect: f64,
}

/// Evaluates the cross-ratio determinant on each `(z1, w1, z2, w2)` tuple.
/// All points must lie in the open disk; the `z` entries must stay away
/// from the symbol zero by the fixed margin.
pub fn doublestar_factorization_check(
    alpha: f64,
    phi: &MoebiusMap,
    tuples: &[[Complex64; 4]],
) -> Result<FactorizationReport> {
    if tuples.is_empty() {
        return Err(Error::InvalidParameter("no test tuples supplied".into()));
    }
    let mut defects = Vec::with_capacity(tuples.len());
    for &[z1, w1, z2, w2] in tuples {
        let r11 = rank_one_ratio(alpha, phi, z1, w1)?;
        let r22 = rank_one_ratio(alpha, phi, z2, w2)?;
        let r12 = rank_one_ratio(alpha, phi, z1, w2)?;
        let r21 = rank_one_ratio(alpha, phi, z2, w1)?;
        defects.push((r11 * r22 - r12 * r21).norm());
    }
    let max_defect = defects.iter().copied().fold(0.0, f64::max);
    Ok(FactorizationReport { alpha, tuple_count: tuples.len(), defects, max_defect })
}
