//! Rational functions `p/q` restricted to a disk on which the denominator is
//! certified zero-free, so series expansion by long division is legitimate.

use super::PowerSeries;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Counts zeros of `p` (with multiplicity) in the open disk `|z| < radius`
/// by the argument principle: the winding number of `p` along the circle.
///
/// Fails with [`Error::DenominatorVanishes`] when the boundary modulus dips
/// low enough that the count would be untrustworthy, which also covers zeros
/// sitting on the circle itself.
pub fn count_zeros_in_disk(p: &PowerSeries, radius: f64) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::DenominatorVanishes {
            radius,
            detail: "polynomial is identically zero".into(),
        });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radius {radius} must be positive and finite"
        )));
    }
    let degree = p.degree().unwrap_or(0);
    // Dense enough that the argument moves well under pi per step.
    let samples = (16 * degree).max(256);
    let values: Vec<Complex64> = (0..samples)
        .map(|j| {
            let t = TAU * j as f64 / samples as f64;
            p.eval(Complex64::from_polar(radius, t))
        })
        .collect();
    let max_mod = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let min_mod = values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if min_mod <= 1e-10 * max_mod.max(1e-300) {
        return Err(Error::DenominatorVanishes {
            radius,
            detail: format!(
                "modulus drops to {min_mod:e} on the circle; a zero lies on or \
                 numerically on |z| = {radius}"
            ),
        });
    }
    let mut winding = 0.0;
    for j in 0..samples {
        let next = values[(j + 1) % samples];
        // arg of the ratio is the principal branch increment
        winding += (next / values[j]).arg();
    }
    let turns = winding / TAU;
    let count = turns.round();
    if (turns - count).abs() > 0.1 || count < 0.0 {
        return Err(Error::DenominatorVanishes {
            radius,
            detail: format!("winding number {turns} is not close to a nonnegative integer"),
        });
    }
    Ok(count as usize)
}

/// A quotient `numerator / denominator` of polynomials together with a radius
/// `0 < rho < 1` on which the denominator is certified zero-free (boundary
/// modulus margin plus zero winding number), so that evaluation and long
/// division inside `|z| <= rho` are safe by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFn {
    numerator: PowerSeries,
    denominator: PowerSeries,
    domain_radius: f64,
}

impl RationalFn {
    pub fn new(
        numerator: PowerSeries,
        denominator: PowerSeries,
        domain_radius: f64,
    ) -> Result<Self> {
        if !(domain_radius > 0.0 && domain_radius < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "domain radius {domain_radius} must lie strictly between 0 and 1"
            )));
        }
        let zeros = count_zeros_in_disk(&denominator, domain_radius)?;
        if zeros > 0 {
            return Err(Error::DenominatorVanishes {
                radius: domain_radius,
                detail: format!("{zeros} zero(s) inside the certification disk"),
            });
        }
        Ok(RationalFn { numerator, denominator, domain_radius })
    }

    pub fn numerator(&self) -> &PowerSeries {
        &self.numerator
    }

    pub fn denominator(&self) -> &PowerSeries {
        &self.denominator
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    /// Evaluation inside the certified disk.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > self.domain_radius + 1e-12 {
            return Err(Error::OutsideDomain(format!(
                "z = {z} lies outside the certified disk of radius {}",
                self.domain_radius
            )));
        }
        Ok(self.numerator.eval(z) / self.denominator.eval(z))
    }

    /// Taylor coefficients through `z^degree` by synthetic long division;
    /// the certificate guarantees the constant denominator term is nonzero.
    pub fn series(&self, degree: usize) -> PowerSeries {
        let d0 = self.denominator.coeff(0);
        let mut coeffs = vec![Complex64::ZERO; degree + 1];
        for n in 0..=degree {
            let mut acc = self.numerator.coeff(n);
            for k in 1..=n {
                acc -= self.denominator.coeff(k) * coeffs[n - k];
            }
            coeffs[n] = acc / d0;
        }
        PowerSeries::from_coeffs(coeffs).expect("finite coefficients")
    }

    /// Crude remainder estimate for the degree-`d` truncation used on the
    /// certified disk: last kept coefficient times a geometric tail at
    /// `rho = domain_radius`.
    pub fn series_tail_estimate(&self, degree: usize) -> f64 {
        super::geometric_tail_estimate(&self.series(degree), self.domain_radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_count_sees_roots_with_multiplicity() {
        // z^2 (z - 0.5): three roots in |z| < 0.7 counting multiplicity
        let p = PowerSeries::from_real_coeffs(&[0.0, 0.0, -0.5, 1.0]).unwrap();
        assert_eq!(count_zeros_in_disk(&p, 0.7).unwrap(), 3);
        assert_eq!(count_zeros_in_disk(&p, 0.3).unwrap(), 2);
        // root on the sampling circle is refused, not miscounted
        assert!(count_zeros_in_disk(&p, 0.5).is_err());
    }

    #[test]
    fn zero_count_handles_zero_free_polynomials() {
        let p = PowerSeries::from_real_coeffs(&[1.0, 0.0, 0.25]).unwrap(); // roots at +-2i
        assert_eq!(count_zeros_in_disk(&p, 0.99).unwrap(), 0);
        assert!(count_zeros_in_disk(&PowerSeries::zero(), 0.5).is_err());
    }

    #[test]
    fn construction_rejects_denominator_roots_inside_domain() {
        let num = PowerSeries::one();
        let den = PowerSeries::from_real_coeffs(&[-0.25, 1.0]).unwrap(); // root at 0.25
        let err = RationalFn::new(num.clone(), den, 0.5);
        assert!(matches!(err, Err(Error::DenominatorVanishes { .. })));
        let den_ok = PowerSeries::from_real_coeffs(&[1.0, -0.5]).unwrap(); // root at 2
        assert!(RationalFn::new(num, den_ok, 0.9).is_ok());
    }

    #[test]
    fn construction_rejects_bad_radius() {
        let num = PowerSeries::one();
        let den = PowerSeries::one();
        assert!(RationalFn::new(num.clone(), den.clone(), 0.0).is_err());
        assert!(RationalFn::new(num, den, 1.0).is_err());
    }

    #[test]
    fn long_division_matches_geometric_series() {
        // 1 / (1 - 0.5 z) = sum (0.5 z)^n
        let r = RationalFn::new(
            PowerSeries::one(),
            PowerSeries::from_real_coeffs(&[1.0, -0.5]).unwrap(),
            0.9,
        )
        .unwrap();
        let s = r.series(10);
        for n in 0..=10 {
            assert_abs_diff_eq!(s.coeff(n).re, 0.5f64.powi(n as i32), epsilon = 1e-15);
        }
    }

    #[test]
    fn series_and_eval_agree_inside_the_domain() {
        let num = PowerSeries::from_coeffs(vec![c(1.0, 0.5), c(-0.3, 0.0), c(0.0, 0.2)]).unwrap();
        let den = PowerSeries::from_coeffs(vec![c(1.0, 0.0), c(0.4, -0.3), c(0.1, 0.0)]).unwrap();
        let r = RationalFn::new(num, den, 0.8).unwrap();
        let s = r.series(200);
        for z in [c(0.3, 0.3), c(-0.5, 0.1), c(0.0, -0.6)] {
            let err = (s.eval(z) - r.eval(z).unwrap()).norm();
            assert!(err < 1e-12, "series mismatch {err:e} at {z}");
        }
    }

    #[test]
    fn eval_outside_certified_disk_is_refused() {
        let r = RationalFn::new(PowerSeries::one(), PowerSeries::one(), 0.5).unwrap();
        assert!(matches!(r.eval(c(0.6, 0.0)), Err(Error::OutsideDomain(_))));
    }
}
