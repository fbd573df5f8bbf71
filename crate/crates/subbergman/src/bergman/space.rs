//! Monomial norm table for `A^2_alpha` and coefficient-side inner products.

use crate::analytic::PowerSeries;
use crate::{Error, Result};
use nalgebra::DVector;
use num_complex::Complex64;

/// `||z^n||^2 = n! Gamma(alpha + 2) / Gamma(n + alpha + 2)` evaluated in log
/// space, valid for any `n` without a precomputed table. Requires
/// `alpha > -1`.
pub fn monomial_norm_sq(alpha: f64, n: usize) -> f64 {
    assert!(alpha > -1.0, "weight exponent alpha = {alpha} must exceed -1");
    let n = n as f64;
    (libm::lgamma(n + 1.0) + libm::lgamma(alpha + 2.0) - libm::lgamma(n + alpha + 2.0)).exp()
}

/// A finite model of `A^2_alpha`: the weight exponent, a truncation order,
/// and the monomial norms `||z^n||` for `n` up to that order.
///
/// In the orthonormal basis `e_n = z^n / ||z^n||`, analytic Toeplitz
/// matrices and defect operators become concrete finite matrices; the
/// conversion methods here are the only place the basis change happens.
#[derive(Debug, Clone)]
pub struct BergmanSpaceModel {
    alpha: f64,
    truncation: usize,
    norms: Vec<f64>,
}

impl BergmanSpaceModel {
    /// Requires `alpha > -1` (integrability of the weight) and a positive
    /// truncation order.
    pub fn new(alpha: f64, truncation: usize) -> Result<Self> {
        if !(alpha > -1.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weight exponent alpha = {alpha} must be a finite number exceeding -1"
            )));
        }
        if truncation == 0 {
            return Err(Error::InvalidParameter(
                "truncation order must be at least 1".into(),
            ));
        }
        let norms = (0..=truncation).map(|n| monomial_norm_sq(alpha, n).sqrt()).collect();
        Ok(BergmanSpaceModel { alpha, truncation, norms })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn monomial_norm(&self, n: usize) -> Result<f64> {
        self.norms
            .get(n)
            .copied()
            .ok_or(Error::IndexOutOfRange { index: n, max: self.truncation })
    }

    pub fn monomial_norm_squared(&self, n: usize) -> Result<f64> {
        self.monomial_norm(n).map(|v| v * v)
    }

    fn check_degree(&self, p: &PowerSeries) -> Result<()> {
        if let Some(d) = p.degree() {
            if d > self.truncation {
                return Err(Error::IndexOutOfRange { index: d, max: self.truncation });
            }
        }
        Ok(())
    }

    /// `<f, g> = sum_n f_n conj(g_n) ||z^n||^2` from coefficients alone.
    pub fn inner_product(&self, f: &PowerSeries, g: &PowerSeries) -> Result<Complex64> {
        self.check_degree(f)?;
        self.check_degree(g)?;
        let n = f.coeffs().len().min(g.coeffs().len());
        let mut acc = Complex64::ZERO;
        for k in 0..n {
            acc += f.coeff(k) * g.coeff(k).conj() * (self.norms[k] * self.norms[k]);
        }
        Ok(acc)
    }

    pub fn norm_of(&self, f: &PowerSeries) -> Result<f64> {
        Ok(self.inner_product(f, f)?.re.max(0.0).sqrt())
    }

    /// Coordinates of `p` in the orthonormal basis, padded to length
    /// `truncation + 1`.
    pub fn to_orthonormal(&self, p: &PowerSeries) -> Result<DVector<Complex64>> {
        self.check_degree(p)?;
        Ok(DVector::from_fn(self.truncation + 1, |n, _| p.coeff(n) * self.norms[n]))
    }

    /// Inverse of [`Self::to_orthonormal`]; accepts any length up to
    /// `truncation + 1`.
    pub fn from_orthonormal(&self, v: &DVector<Complex64>) -> Result<PowerSeries> {
        if v.len() > self.truncation + 1 {
            return Err(Error::IndexOutOfRange { index: v.len() - 1, max: self.truncation });
        }
        PowerSeries::from_coeffs((0..v.len()).map(|n| v[n] / self.norms[n]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn unweighted_norms_match_closed_form() {
        // alpha = 0: ||z^n||^2 = 1/(n+1)
        for n in 0..40 {
            assert_relative_eq!(
                monomial_norm_sq(0.0, n),
                1.0 / (n as f64 + 1.0),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn weighted_norms_match_closed_form() {
        // alpha = 1: ||z^n||^2 = 2 / ((n+1)(n+2))
        for n in 0..40 {
            let n_f = n as f64;
            assert_relative_eq!(
                monomial_norm_sq(1.0, n),
                2.0 / ((n_f + 1.0) * (n_f + 2.0)),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn norm_table_satisfies_the_ratio_recurrence() {
        // ||z^{n+1}||^2 / ||z^n||^2 = (n+1)/(n+alpha+2)
        for alpha in [-0.5, 0.0, 0.7, 2.0] {
            let space = BergmanSpaceModel::new(alpha, 60).unwrap();
            for n in 0..60 {
                let ratio = space.monomial_norm_squared(n + 1).unwrap()
                    / space.monomial_norm_squared(n).unwrap();
                let expected = (n as f64 + 1.0) / (n as f64 + alpha + 2.0);
                assert_relative_eq!(ratio, expected, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn constant_function_has_unit_norm() {
        for alpha in [-0.9, 0.0, 3.5] {
            let space = BergmanSpaceModel::new(alpha, 4).unwrap();
            assert_abs_diff_eq!(space.monomial_norm(0).unwrap(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn rejects_non_integrable_weight() {
        assert!(BergmanSpaceModel::new(-1.0, 10).is_err());
        assert!(BergmanSpaceModel::new(-1.5, 10).is_err());
        assert!(BergmanSpaceModel::new(f64::NAN, 10).is_err());
        assert!(BergmanSpaceModel::new(0.0, 0).is_err());
    }

    #[test]
    fn inner_product_rejects_degrees_beyond_truncation() {
        let space = BergmanSpaceModel::new(0.0, 5).unwrap();
        let p = PowerSeries::monomial(6);
        assert!(matches!(
            space.inner_product(&p, &p),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn monomials_are_orthogonal() {
        let space = BergmanSpaceModel::new(0.5, 10).unwrap();
        let f = PowerSeries::monomial(3);
        let g = PowerSeries::monomial(7);
        assert_eq!(space.inner_product(&f, &g).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn orthonormal_coordinates_round_trip() {
        let space = BergmanSpaceModel::new(1.5, 8).unwrap();
        let p = PowerSeries::from_coeffs(vec![
            Complex64::new(1.0, -2.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(3.0, 0.0),
        ])
        .unwrap();
        let v = space.to_orthonormal(&p).unwrap();
        assert_eq!(v.len(), 9);
        let back = space.from_orthonormal(&v).unwrap();
        for n in 0..=8 {
            assert_abs_diff_eq!((back.coeff(n) - p.coeff(n)).norm(), 0.0, epsilon = 1e-14);
        }
        // Euclidean length of coordinates is the space norm
        assert_relative_eq!(v.norm(), space.norm_of(&p).unwrap(), max_relative = 1e-13);
    }
}
