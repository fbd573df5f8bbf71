//! Tensor-product quadrature for the `A^2_alpha` inner product.
//!
//! Radially, the substitution `t = r^2` turns the weighted area integral
//! into `(alpha + 1) * integral_0^1 (1 - t)^alpha g(t) dt`, handled by a
//! Gauss-Jacobi rule built with the Golub-Welsch eigenvalue method.
//! Angularly, a uniform trapezoid comb of `M` points integrates trigonometric
//! polynomials of angular degree below `M` exactly. Together the rule is
//! exact (to rounding) on `f conj(g)` whenever `deg f + deg g` stays within
//! the declared exactness degree.
//!
//! The zeroth moment `2^{alpha+1} / (alpha + 1)` is elementary, so this route
//! involves no Gamma function at all and is independent of the norm table in
//! [`super::BergmanSpaceModel`].

use super::BergmanSpaceModel;
use crate::analytic::PowerSeries;
use crate::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Gauss-Jacobi rule for `integral_{-1}^{1} (1 - x)^alpha f(x) dx`:
/// nodes are eigenvalues of the symmetrized Jacobi recurrence matrix,
/// weights come from the first components of its eigenvectors.
fn gauss_jacobi_symmetric_interval(n: usize, alpha: f64) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    // Monic three-term recurrence p_{k+1} = (x - a_k) p_k - b_k p_{k-1}
    // for Jacobi weight (1-x)^alpha (1+x)^0.
    let diag = |k: usize| -> f64 {
        if k == 0 {
            -alpha / (alpha + 2.0)
        } else {
            let k = k as f64;
            -(alpha * alpha) / ((2.0 * k + alpha) * (2.0 * k + alpha + 2.0))
        }
    };
    let offdiag_sq = |k: usize| -> f64 {
        if k == 1 {
            4.0 * (alpha + 1.0) / ((alpha + 2.0) * (alpha + 2.0) * (alpha + 3.0))
        } else {
            let k = k as f64;
            4.0 * k * k * (k + alpha) * (k + alpha)
                / ((2.0 * k + alpha) * (2.0 * k + alpha) * (2.0 * k + alpha + 1.0)
                    * (2.0 * k + alpha - 1.0))
        }
    };

    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        jacobi[(k, k)] = diag(k);
        if k + 1 < n {
            let b = offdiag_sq(k + 1).sqrt();
            jacobi[(k, k + 1)] = b;
            jacobi[(k + 1, k)] = b;
        }
    }

    let eigen = SymmetricEigen::new(jacobi);
    let mu0 = 2f64.powf(alpha + 1.0) / (alpha + 1.0);
    let mut rule: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let first = eigen.eigenvectors[(0, i)];
            (eigen.eigenvalues[i], mu0 * first * first)
        })
        .collect();
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// A quadrature rule for the `A^2_alpha` inner product, exact on integrands
/// `f conj(g)` with `deg f + deg g <= exactness`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    alpha: f64,
    exactness: usize,
    /// `(t_i, w_i)` for `integral_0^1 (1 - t)^alpha g(t) dt`.
    radial: Vec<(f64, f64)>,
    angular_count: usize,
}

impl QuadratureRule {
    /// Builds a rule of exactness `degree`: `ceil((degree + 2) / 2) + 2`
    /// radial nodes and `degree + 3` angles.
    pub fn for_exactness(alpha: f64, degree: usize) -> Result<Self> {
        if !(alpha > -1.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weight exponent alpha = {alpha} must be a finite number exceeding -1"
            )));
        }
        let radial_count = (degree + 2).div_ceil(2) + 2;
        let angular_count = degree + 3;
        let radial = gauss_jacobi_symmetric_interval(radial_count, alpha)
            .into_iter()
            .map(|(x, w)| ((x + 1.0) / 2.0, w * 2f64.powf(-alpha - 1.0)))
            .collect();
        Ok(QuadratureRule { alpha, exactness: degree, radial, angular_count })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn exactness(&self) -> usize {
        self.exactness
    }

    pub fn radial_nodes(&self) -> &[(f64, f64)] {
        &self.radial
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    /// `<f, g>_alpha` by quadrature. Refuses integrands past the exactness
    /// degree instead of returning a silently inaccurate value.
    pub fn inner_product(&self, f: &PowerSeries, g: &PowerSeries) -> Result<Complex64> {
        let (df, dg) = match (f.degree(), g.degree()) {
            (Some(df), Some(dg)) => (df, dg),
            _ => return Ok(Complex64::ZERO),
        };
        if df + dg > self.exactness {
            return Err(Error::ExactnessExceeded {
                required: df + dg,
                supported: self.exactness,
            });
        }
        let m = self.angular_count as f64;
        let mut acc = Complex64::ZERO;
        for &(t, w) in &self.radial {
            let r = t.sqrt();
            let mut angular = Complex64::ZERO;
            for j in 0..self.angular_count {
                let z = Complex64::from_polar(r, TAU * j as f64 / m);
                angular += f.eval(z) * g.eval(z).conj();
            }
            acc += angular * (w / m);
        }
        Ok(acc * (self.alpha + 1.0))
    }
}

/// Independent inner-product oracle: builds a rule sized to the operands and
/// integrates. Used to cross-check the coefficient route in
/// [`BergmanSpaceModel::inner_product`].
pub fn inner_product_quadrature(
    f: &PowerSeries,
    g: &PowerSeries,
    space: &BergmanSpaceModel,
) -> Result<Complex64> {
    let degree = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
    QuadratureRule::for_exactness(space.alpha(), degree)?.inner_product(f, g)
}
