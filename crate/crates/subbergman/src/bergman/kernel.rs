//! Reproducing kernels: the generalized Bergman kernel
//! `K_s(z, w) = (1 - z conj(w))^{-s}` and the sub-Bergman kernel
//! `K^{alpha, phi}(z, w) = (1 - phi(z) conj(phi(w))) / (1 - z conj(w))^{alpha + 2}`.
//!
//! The closed forms here are checked elsewhere against
//! [`kernel_series_oracle`], a plain binomial-series summation that shares no
//! code with them.

use crate::analytic::DiskSymbol;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn check_in_open_bidisk(z: Complex64, w: Complex64) -> Result<()> {
    for (point, name) in [(z, "z"), (w, "w")] {
        if point.norm() >= 1.0 {
            return Err(Error::OutsideDomain(format!(
                "{name} = {point} must lie in the open unit disk"
            )));
        }
    }
    Ok(())
}

/// `(1 - z conj(w))^{-s}` by the principal branch; for `z, w` in the open
/// disk the base has positive real part, so the branch never jumps.
fn generalized_bergman(s: f64, z: Complex64, w: Complex64) -> Complex64 {
    (Complex64::ONE - z * w.conj()).powf(-s)
}

/// Which reproducing kernel to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum KernelSpec {
    /// `(1 - z conj(w))^{-s}`, `s > 0`. `s = 1` is Hardy, `s = alpha + 2`
    /// the weighted Bergman kernel.
    Generalized { s: f64 },
    /// The sub-Bergman kernel for a contractive symbol, `alpha > -1`.
    SubBergman { alpha: f64, symbol: DiskSymbol },
}

impl KernelSpec {
    pub fn generalized(s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kernel exponent s = {s} must be positive and finite"
            )));
        }
        Ok(KernelSpec::Generalized { s })
    }

    pub fn sub_bergman(alpha: f64, symbol: DiskSymbol) -> Result<Self> {
        if !(alpha > -1.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weight exponent alpha = {alpha} must be a finite number exceeding -1"
            )));
        }
        Ok(KernelSpec::SubBergman { alpha, symbol })
    }

    /// Pointwise evaluation on the open bidisk.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        check_in_open_bidisk(z, w)?;
        match self {
            KernelSpec::Generalized { s } => Ok(generalized_bergman(*s, z, w)),
            KernelSpec::SubBergman { alpha, symbol } => {
                let numerator = Complex64::ONE - symbol.eval(z)? * symbol.eval(w)?.conj();
                Ok(numerator * generalized_bergman(alpha + 2.0, z, w))
            }
        }
    }
}

/// Kernels viewed purely as functions of two disk points. Implemented by
/// [`KernelSpec`] and by wrappers (normalization, rescaling) that the Pick
/// tests compose on top.
pub trait PointKernel {
    fn kernel(&self, z: Complex64, w: Complex64) -> Result<Complex64>;
}

impl PointKernel for KernelSpec {
    fn kernel(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        self.eval(z, w)
    }
}

impl<K: PointKernel + ?Sized> PointKernel for &K {
    fn kernel(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        (**self).kernel(z, w)
    }
}

/// A partial sum of the kernel binomial series with a tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSeriesValue {
    #[serde(with = "crate::serde_complex")]
    pub value: Complex64,
    /// Geometric bound on the dropped tail; infinite if the ratio test gave
    /// nothing useful at this truncation.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Sums `(1 - x)^{-s} = sum_n c_n x^n` at `x = z conj(w)` with
/// `c_0 = 1`, `c_{n+1} = c_n (n + s)/(n + 1)`, keeping `terms` terms.
///
/// This is the independent oracle for the closed-form kernel: no complex
/// logarithm, no powers, just the recurrence.
pub fn kernel_series_oracle(
    s: f64,
    z: Complex64,
    w: Complex64,
    terms: usize,
) -> Result<KernelSeriesValue> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "kernel exponent s = {s} must be positive and finite"
        )));
    }
    if terms == 0 {
        return Err(Error::InvalidParameter("series needs at least one term".into()));
    }
    check_in_open_bidisk(z, w)?;
    let x = z * w.conj();
    let mut value = Complex64::ZERO;
    let mut coeff = 1.0f64;
    let mut power = Complex64::ONE;
    for n in 0..terms {
        value += coeff * power;
        coeff *= (n as f64 + s) / (n as f64 + 1.0);
        power *= x;
    }
    // First dropped term is coeff * x^terms; beyond it the term ratio is at
    // most q, so a geometric bound applies when q < 1.
    let head = coeff * power.norm();
    let q = x.norm() * ((terms as f64 + s) / (terms as f64 + 1.0)).max(1.0);
    let tail_bound = if q < 1.0 { head / (1.0 - q) } else { f64::INFINITY };
    Ok(KernelSeriesValue { value, tail_bound, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::MoebiusMap;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_invalid_exponents() {
        assert!(KernelSpec::generalized(0.0).is_err());
        assert!(KernelSpec::generalized(-1.0).is_err());
        assert!(kernel_series_oracle(0.0, Complex64::ZERO, Complex64::ZERO, 5).is_err());
        let phi = DiskSymbol::from(MoebiusMap::new(Complex64::ONE, c(0.5, 0.0)).unwrap());
        assert!(KernelSpec::sub_bergman(-1.0, phi).is_err());
    }

    #[test]
    fn rejects_boundary_points() {
        let k = KernelSpec::generalized(2.0).unwrap();
        assert!(matches!(k.eval(c(1.0, 0.0), c(0.0, 0.0)), Err(Error::OutsideDomain(_))));
        assert!(matches!(k.eval(c(0.0, 0.0), c(0.0, 1.0)), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn hardy_kernel_closed_form() {
        // s = 1: K(z, w) = 1 / (1 - z conj(w))
        let k = KernelSpec::generalized(1.0).unwrap();
        let z = c(0.3, 0.4);
        let w = c(-0.2, 0.5);
        let expected = Complex64::ONE / (Complex64::ONE - z * w.conj());
        assert_abs_diff_eq!((k.eval(z, w).unwrap() - expected).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn bergman_kernel_at_real_points() {
        // s = 2, z = w = 0.5: (1 - 0.25)^{-2} = 16/9
        let k = KernelSpec::generalized(2.0).unwrap();
        let v = k.eval(c(0.5, 0.0), c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, 16.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn series_oracle_agrees_with_closed_form() {
        for s in [0.5, 1.0, 2.0, 3.5] {
            let k = KernelSpec::generalized(s).unwrap();
            for (z, w) in [(c(0.5, 0.1), c(0.4, -0.3)), (c(-0.6, 0.0), c(0.2, 0.6))] {
                let closed = k.eval(z, w).unwrap();
                let series = kernel_series_oracle(s, z, w, 400).unwrap();
                let err = (closed - series.value).norm();
                assert!(err < 1e-12, "s = {s}: mismatch {err:e}");
                assert!(series.tail_bound < 1e-12);
            }
        }
    }

    #[test]
    fn series_tail_bound_is_honest() {
        let s = 2.0;
        let z = c(0.7, 0.0);
        let w = c(0.7, 0.0);
        let exact = KernelSpec::generalized(s).unwrap().eval(z, w).unwrap();
        for terms in [5, 20, 80] {
            let partial = kernel_series_oracle(s, z, w, terms).unwrap();
            let actual_tail = (exact - partial.value).norm();
            // rounding in the two evaluation routes sits on top of the
            // truncation error the bound describes
            let rounding = 1e-13 * exact.norm();
            assert!(
                actual_tail <= partial.tail_bound + rounding,
                "claimed {:.3e}, actual {actual_tail:.3e}",
                partial.tail_bound
            );
        }
    }

    #[test]
    fn sub_bergman_with_rotation_symbol_reduces_to_hardy_times_bergman() {
        // phi(z) = -z (Moebius with a = 0, xi = 1):
        // K(z, w) = (1 - z conj(w)) * (1 - z conj(w))^{-(alpha+2)}
        let phi = DiskSymbol::from(MoebiusMap::new(Complex64::ONE, Complex64::ZERO).unwrap());
        let k = KernelSpec::sub_bergman(1.0, phi).unwrap();
        let z = c(0.4, 0.2);
        let w = c(0.1, -0.5);
        let x = z * w.conj();
        let expected = (Complex64::ONE - x).powf(-2.0);
        assert_abs_diff_eq!((k.eval(z, w).unwrap() - expected).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn kernel_values_are_hermitian() {
        let phi = DiskSymbol::from(MoebiusMap::new(c(0.6, 0.8), c(0.3, -0.4)).unwrap());
        let k = KernelSpec::sub_bergman(0.5, phi).unwrap();
        let z = c(0.25, 0.55);
        let w = c(-0.7, 0.1);
        let forward = k.eval(z, w).unwrap();
        let backward = k.eval(w, z).unwrap();
        assert_abs_diff_eq!((forward - backward.conj()).norm(), 0.0, epsilon = 1e-14);
    }
}
