//! Polynomials and truncated power series over `Complex64`, stored as dense
//! coefficient vectors in increasing degree order.

use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

/// A polynomial (equivalently, a truncated power series) with complex
/// coefficients, `p(z) = sum_n coeffs[n] z^n`.
///
/// The coefficient vector never has trailing exact zeros, so the zero
/// polynomial is the empty vector and `degree()` is the true degree for
/// everything else. Coefficients are always finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    #[serde(with = "crate::serde_complex::vec")]
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series from coefficients `[c_0, c_1, ..]`, trimming trailing
    /// exact zeros. Rejects non-finite coefficients.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite coefficient {bad} in power series"
            )));
        }
        let mut coeffs = coeffs;
        while coeffs.last() == Some(&Complex64::ZERO) {
            coeffs.pop();
        }
        Ok(PowerSeries { coeffs })
    }

    /// Convenience constructor from real coefficients.
    pub fn from_real_coeffs(coeffs: &[f64]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        PowerSeries { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PowerSeries { coeffs: vec![Complex64::ONE] }
    }

    pub fn constant(c: Complex64) -> Self {
        if c == Complex64::ZERO {
            Self::zero()
        } else {
            PowerSeries { coeffs: vec![c] }
        }
    }

    /// The monomial `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; n + 1];
        coeffs[n] = Complex64::ONE;
        PowerSeries { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `z^n`; zero beyond the stored degree.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Termwise derivative.
    pub fn derivative(&self) -> PowerSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c * n as f64)
            .collect();
        PowerSeries { coeffs }
    }

    /// The antiderivative `F` with `F' = self` and `F(0) = constant_term`.
    pub fn antiderivative(&self, constant_term: Complex64) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(constant_term);
        for (n, &c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / (n as f64 + 1.0));
        }
        // constant_term may be zero on a zero series; keep the invariant.
        PowerSeries::from_coeffs(coeffs).expect("finite coefficients")
    }

    /// Drops all coefficients beyond `z^degree`.
    pub fn truncated(&self, degree: usize) -> PowerSeries {
        let keep = self.coeffs.len().min(degree + 1);
        PowerSeries::from_coeffs(self.coeffs[..keep].to_vec()).expect("finite coefficients")
    }

    /// Multiplies by `z^shift`.
    pub fn shifted(&self, shift: usize) -> PowerSeries {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::ZERO; shift];
        coeffs.extend_from_slice(&self.coeffs);
        PowerSeries { coeffs }
    }

    pub fn scaled(&self, factor: Complex64) -> PowerSeries {
        let coeffs = self.coeffs.iter().map(|&c| c * factor).collect();
        PowerSeries::from_coeffs(coeffs).expect("finite coefficients")
    }

    /// Product truncated at `z^degree`; avoids materializing the full
    /// convolution when only a fixed order is needed.
    pub fn mul_truncated(&self, rhs: &PowerSeries, degree: usize) -> PowerSeries {
        let mut coeffs = vec![Complex64::ZERO; degree + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i > degree {
                break;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if i + j > degree {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries::from_coeffs(coeffs).expect("finite coefficients")
    }

    /// Largest coefficient modulus, zero for the zero polynomial.
    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        PowerSeries::from_coeffs(coeffs).expect("finite coefficients")
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        PowerSeries::from_coeffs(coeffs).expect("finite coefficients")
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        if self.is_zero() || rhs.is_zero() {
            return PowerSeries::zero();
        }
        let degree = self.coeffs.len() + rhs.coeffs.len() - 2;
        self.mul_truncated(rhs, degree)
    }
}

/// Remainder bound for a degree-`d` truncation used at radius `rho`, taking
/// the last kept coefficient as the scale of a geometric tail:
/// `|c_d| rho^d * rho / (1 - rho)`.
pub fn geometric_tail_estimate(series: &PowerSeries, rho: f64) -> f64 {
    assert!((0.0..1.0).contains(&rho), "tail estimate needs 0 <= rho < 1");
    match series.degree() {
        None => 0.0,
        Some(d) => series.coeff(d).norm() * rho.powi(d as i32) * rho / (1.0 - rho),
    }
}
