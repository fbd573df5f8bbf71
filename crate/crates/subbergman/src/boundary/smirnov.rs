//! Quotients `gamma / psi` of polynomials as boundary-probe subjects.
//!
//! When `psi` is zero-free on the closed disk the quotient is analytic
//! across the boundary and every boundary probe must settle; when `psi`
//! has boundary zeros the quotient may still lie in the space while probes
//! at those angles blow up. The type records sampled boundary statistics at
//! construction so reports can show the scale of what was probed.

use crate::analytic::{count_zeros_in_disk, PowerSeries};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

const BOUNDARY_SAMPLES: usize = 512;

/// A ratio of polynomials probed near the unit circle.
#[derive(Debug, Clone, Serialize)]
pub struct SmirnovQuotient {
    gamma: PowerSeries,
    psi: PowerSeries,
    /// Sampled sup of `|gamma|` on the unit circle.
    pub gamma_boundary_sup: f64,
    /// Sampled sup and inf of `|psi|` on the unit circle.
    pub psi_boundary_sup: f64,
    pub psi_boundary_inf: f64,
}

impl SmirnovQuotient {
    /// Requires a nonzero denominator polynomial.
    pub fn new(gamma: PowerSeries, psi: PowerSeries) -> Result<Self> {
        if psi.is_zero() {
            return Err(Error::InvalidParameter(
                "denominator polynomial is identically zero".into(),
            ));
        }
        let mut gamma_boundary_sup = 0.0f64;
        let mut psi_boundary_sup = 0.0f64;
        let mut psi_boundary_inf = f64::INFINITY;
        for j in 0..BOUNDARY_SAMPLES {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / BOUNDARY_SAMPLES as f64);
            gamma_boundary_sup = gamma_boundary_sup.max(gamma.eval(z).norm());
            let p = psi.eval(z).norm();
            psi_boundary_sup = psi_boundary_sup.max(p);
            psi_boundary_inf = psi_boundary_inf.min(p);
        }
        Ok(SmirnovQuotient { gamma, psi, gamma_boundary_sup, psi_boundary_sup, psi_boundary_inf })
    }

    pub fn gamma(&self) -> &PowerSeries {
        &self.gamma
    }

    pub fn psi(&self) -> &PowerSeries {
        &self.psi
    }

    /// Winding-number certificate that `psi` has no zero on the closed disk
    /// (no interior zeros, and boundary modulus bounded away from zero).
    pub fn denominator_zero_free(&self) -> bool {
        matches!(count_zeros_in_disk(&self.psi, 1.0), Ok(0))
    }

    /// Evaluates the quotient in the open disk. Landing numerically on a
    /// pole is reported as an evaluation failure, not as infinity.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDomain(format!(
                "z = {z} must lie in the open unit disk"
            )));
        }
        let denom = self.psi.eval(z);
        let value = self.gamma.eval(z) / denom;
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::EvalFailure {
                z,
                reason: format!("denominator collapsed to {denom}"),
            });
        }
        Ok(value)
    }
}
