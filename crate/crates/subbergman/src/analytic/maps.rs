//! Disk automorphisms and finite Blaschke products.

use super::PowerSeries;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Slack when testing membership in the closed unit disk, so that boundary
/// points produced by `exp(i theta)` round-trips are not rejected.
const CLOSED_DISK_SLACK: f64 = 1e-12;

/// Zeros of a Blaschke product closer than this are treated as coincident.
pub(crate) const ZERO_SEPARATION_FLOOR: f64 = 1e-9;

fn check_in_closed_disk(z: Complex64, what: &str) -> Result<()> {
    if z.norm() > 1.0 + CLOSED_DISK_SLACK {
        return Err(Error::OutsideDomain(format!(
            "{what} = {z} lies outside the closed unit disk"
        )));
    }
    Ok(())
}

fn check_in_open_disk(z: Complex64, what: &str) -> Result<()> {
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDomain(format!(
            "{what} = {z} lies outside the open unit disk"
        )));
    }
    Ok(())
}

/// The disk automorphism `phi(z) = xi (a - z) / (1 - conj(a) z)` with
/// unimodular `xi` and `|a| < 1`. It swaps `a` and `0` up to the rotation
/// `xi` and maps the unit circle onto itself.
///
/// Deserialization goes through [`Self::new`], so decoded values satisfy the
/// same invariants as constructed ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MoebiusMapWire")]
pub struct MoebiusMap {
    #[serde(with = "crate::serde_complex")]
    xi: Complex64,
    #[serde(with = "crate::serde_complex")]
    a: Complex64,
}

#[derive(Deserialize)]
struct MoebiusMapWire {
    #[serde(with = "crate::serde_complex")]
    xi: Complex64,
    #[serde(with = "crate::serde_complex")]
    a: Complex64,
}

impl TryFrom<MoebiusMapWire> for MoebiusMap {
    type Error = Error;

    fn try_from(wire: MoebiusMapWire) -> Result<Self> {
        MoebiusMap::new(wire.xi, wire.a)
    }
}

impl MoebiusMap {
    /// `xi` is renormalized to exact unit modulus; a deviation larger than
    /// `1e-6` is logged as suspicious input. Requires `|a| < 1` and `xi != 0`.
    pub fn new(xi: Complex64, a: Complex64) -> Result<Self> {
        let r = xi.norm();
        if r == 0.0 || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rotation factor xi = {xi} must be a nonzero finite complex number"
            )));
        }
        if (r - 1.0).abs() > 1e-6 {
            log::warn!("rotation factor xi = {xi} has modulus {r}; renormalizing to the circle");
        }
        check_in_open_disk(a, "Moebius parameter a")?;
        Ok(MoebiusMap { xi: xi / r, a })
    }

    pub fn xi(&self) -> Complex64 {
        self.xi
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    /// Evaluates on the closed disk. The image stays in the closed disk and
    /// is unimodular when `|z| = 1`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_in_closed_disk(z, "argument")?;
        Ok(self.xi * (self.a - z) / (Complex64::ONE - self.a.conj() * z))
    }

    /// `phi'(z) = xi (|a|^2 - 1) / (1 - conj(a) z)^2` on the closed disk.
    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64> {
        check_in_closed_disk(z, "argument")?;
        let den = Complex64::ONE - self.a.conj() * z;
        Ok(self.xi * (self.a.norm_sqr() - 1.0) / (den * den))
    }

    /// Taylor coefficients about the origin through `z^degree`, from the
    /// geometric series of `1 / (1 - conj(a) z)`:
    /// `phi(z) = xi (a + (|a|^2 - 1) sum_{n >= 1} conj(a)^{n-1} z^n)`.
    pub fn series(&self, degree: usize) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(degree + 1);
        coeffs.push(self.xi * self.a);
        let scale = self.xi * (self.a.norm_sqr() - 1.0);
        let mut pow = Complex64::ONE;
        for _ in 1..=degree {
            coeffs.push(scale * pow);
            pow *= self.a.conj();
        }
        PowerSeries::from_coeffs(coeffs).expect("finite coefficients")
    }
}

/// A finite Blaschke product
/// `B(z) = xi prod_k (a_k - z) / (1 - conj(a_k) z)`
/// with unimodular `xi` and zeros `a_k` in the open disk.
///
/// The primary constructor requires pairwise distinct zeros, which the
/// partial-fraction identities downstream depend on; [`Self::with_repeated_zeros`]
/// waives that for callers that only evaluate the product.
///
/// Deserialization goes through [`Self::with_repeated_zeros`]: decoded
/// products are always evaluable, and the stricter distinctness requirement
/// is still enforced at the operations that need it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeProductWire")]
pub struct BlaschkeProduct {
    #[serde(with = "crate::serde_complex")]
    xi: Complex64,
    #[serde(with = "crate::serde_complex::vec")]
    zeros: Vec<Complex64>,
}

#[derive(Deserialize)]
struct BlaschkeProductWire {
    #[serde(with = "crate::serde_complex")]
    xi: Complex64,
    #[serde(with = "crate::serde_complex::vec")]
    zeros: Vec<Complex64>,
}

impl TryFrom<BlaschkeProductWire> for BlaschkeProduct {
    type Error = Error;

    fn try_from(wire: BlaschkeProductWire) -> Result<Self> {
        BlaschkeProduct::with_repeated_zeros(wire.xi, wire.zeros)
    }
}

impl BlaschkeProduct {
    /// Requires at least one zero, all zeros in the open disk, pairwise
    /// separated by more than `1e-9`.
    pub fn new(xi: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        let product = Self::with_repeated_zeros(xi, zeros)?;
        if let Some(gap) = product.min_zero_separation() {
            if gap <= ZERO_SEPARATION_FLOOR {
                return Err(Error::InvalidParameter(format!(
                    "Blaschke zeros are nearly coincident (min separation {gap:e}); \
                     use with_repeated_zeros if this is intentional"
                )));
            }
        }
        Ok(product)
    }

    /// Same product without the distinct-zero requirement. Partial-fraction
    /// based operations reject such products; evaluation and series expansion
    /// remain valid.
    pub fn with_repeated_zeros(xi: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::InvalidParameter(
                "a Blaschke product needs at least one zero".into(),
            ));
        }
        let r = xi.norm();
        if r == 0.0 || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rotation factor xi = {xi} must be a nonzero finite complex number"
            )));
        }
        if (r - 1.0).abs() > 1e-6 {
            log::warn!("rotation factor xi = {xi} has modulus {r}; renormalizing to the circle");
        }
        for a in &zeros {
            check_in_open_disk(*a, "Blaschke zero")?;
        }
        Ok(BlaschkeProduct { xi: xi / r, zeros })
    }

    pub fn xi(&self) -> Complex64 {
        self.xi
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn order(&self) -> usize {
        self.zeros.len()
    }

    /// Smallest pairwise distance between zeros; `None` for a single zero.
    pub fn min_zero_separation(&self) -> Option<f64> {
        let mut min: Option<f64> = None;
        for (i, a) in self.zeros.iter().enumerate() {
            for b in &self.zeros[i + 1..] {
                let d = (a - b).norm();
                min = Some(min.map_or(d, |m: f64| m.min(d)));
            }
        }
        min
    }

    pub fn has_distinct_zeros(&self) -> bool {
        self.min_zero_separation().is_none_or(|gap| gap > ZERO_SEPARATION_FLOOR)
    }

    /// The factor `(a_k - z) / (1 - conj(a_k) z)` as a Möbius map (with
    /// rotation 1); the product's own rotation sits outside the factors.
    pub fn factor(&self, k: usize) -> Result<MoebiusMap> {
        let a = *self.zeros.get(k).ok_or(Error::IndexOutOfRange {
            index: k,
            max: self.zeros.len() - 1,
        })?;
        MoebiusMap::new(Complex64::ONE, a)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_in_closed_disk(z, "argument")?;
        let mut acc = self.xi;
        for a in &self.zeros {
            acc *= (a - z) / (Complex64::ONE - a.conj() * z);
        }
        Ok(acc)
    }

    /// Product-rule derivative: `B' = B sum_k f_k' / f_k` rearranged so that
    /// zeros of individual factors never divide.
    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64> {
        check_in_closed_disk(z, "argument")?;
        let factors: Vec<(Complex64, Complex64)> = self
            .zeros
            .iter()
            .map(|a| {
                let den = Complex64::ONE - a.conj() * z;
                let value = (a - z) / den;
                let deriv = (a.norm_sqr() - 1.0) / (den * den);
                (value, deriv)
            })
            .collect();
        let mut total = Complex64::ZERO;
        for k in 0..factors.len() {
            let mut term = factors[k].1;
            for (j, &(value, _)) in factors.iter().enumerate() {
                if j != k {
                    term *= value;
                }
            }
            total += term;
        }
        Ok(self.xi * total)
    }

    /// Taylor coefficients about the origin through `z^degree`, by truncated
    /// multiplication of the factor expansions.
    pub fn series(&self, degree: usize) -> PowerSeries {
        let mut acc = PowerSeries::constant(self.xi);
        for a in &self.zeros {
            let factor = MoebiusMap { xi: Complex64::ONE, a: *a }.series(degree);
            acc = acc.mul_truncated(&factor, degree);
        }
        acc
    }
}

/// A contractive analytic symbol: either a single Möbius factor or a finite
/// Blaschke product. Kernel and operator constructions accept either.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum DiskSymbol {
    Moebius(MoebiusMap),
    Blaschke(BlaschkeProduct),
}

impl DiskSymbol {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            DiskSymbol::Moebius(m) => m.eval(z),
            DiskSymbol::Blaschke(b) => b.eval(z),
        }
    }

    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64> {
        match self {
            DiskSymbol::Moebius(m) => m.derivative_at(z),
            DiskSymbol::Blaschke(b) => b.derivative_at(z),
        }
    }

    pub fn series(&self, degree: usize) -> PowerSeries {
        match self {
            DiskSymbol::Moebius(m) => m.series(degree),
            DiskSymbol::Blaschke(b) => b.series(degree),
        }
    }

    /// Number of Blaschke factors (1 for a Möbius map).
    pub fn order(&self) -> usize {
        match self {
            DiskSymbol::Moebius(_) => 1,
            DiskSymbol::Blaschke(b) => b.order(),
        }
    }
}

impl From<MoebiusMap> for DiskSymbol {
    fn from(m: MoebiusMap) -> Self {
        DiskSymbol::Moebius(m)
    }
}

impl From<BlaschkeProduct> for DiskSymbol {
    fn from(b: BlaschkeProduct) -> Self {
        DiskSymbol::Blaschke(b)
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
    fn rejects_parameter_on_or_outside_the_circle() {
        assert!(MoebiusMap::new(Complex64::ONE, c(1.0, 0.0)).is_err());
        assert!(MoebiusMap::new(Complex64::ONE, c(0.8, 0.8)).is_err());
        assert!(MoebiusMap::new(Complex64::ZERO, c(0.5, 0.0)).is_err());
    }

    #[test]
    fn rejects_evaluation_outside_the_closed_disk() {
        let m = MoebiusMap::new(Complex64::ONE, c(0.5, 0.0)).unwrap();
        assert!(matches!(m.eval(c(1.1, 0.0)), Err(Error::OutsideDomain(_))));
        assert!(m.eval(c(1.0, 0.0)).is_ok());
    }

    #[test]
    fn xi_is_renormalized_to_the_circle() {
        let m = MoebiusMap::new(c(2.0, 0.0), c(0.3, 0.0)).unwrap();
        assert_abs_diff_eq!(m.xi().norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.xi().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn moebius_swaps_a_and_origin() {
        let a = c(0.4, -0.2);
        let m = MoebiusMap::new(Complex64::ONE, a).unwrap();
        let at_zero = m.eval(Complex64::ZERO).unwrap();
        assert_abs_diff_eq!((at_zero - a).norm(), 0.0, epsilon = 1e-15);
        let at_a = m.eval(a).unwrap();
        assert_abs_diff_eq!(at_a.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn moebius_series_matches_worked_expansion() {
        // (0.5 - z)/(1 - 0.5 z) = 0.5 - 0.75 z - 0.375 z^2 - 0.1875 z^3 - ..
        let m = MoebiusMap::new(Complex64::ONE, c(0.5, 0.0)).unwrap();
        let s = m.series(3);
        let expected = [0.5, -0.75, -0.375, -0.1875];
        for (n, want) in expected.iter().enumerate() {
            assert_abs_diff_eq!(s.coeff(n).re, *want, epsilon = 1e-15);
            assert_abs_diff_eq!(s.coeff(n).im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn derivative_at_a_is_reciprocal_defect() {
        // phi'(a) = -xi / (1 - |a|^2)
        let xi = c(0.0, 1.0);
        let a = c(0.3, 0.4);
        let m = MoebiusMap::new(xi, a).unwrap();
        let expected = -xi / (1.0 - a.norm_sqr());
        let got = m.derivative_at(a).unwrap();
        assert_abs_diff_eq!((got - expected).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn blaschke_requires_distinct_zeros_unless_waived() {
        let zeros = vec![c(0.2, 0.0), c(0.2, 5e-10)];
        assert!(BlaschkeProduct::new(Complex64::ONE, zeros.clone()).is_err());
        let waived = BlaschkeProduct::with_repeated_zeros(Complex64::ONE, zeros).unwrap();
        assert!(!waived.has_distinct_zeros());
        assert!(BlaschkeProduct::new(Complex64::ONE, Vec::new()).is_err());
    }

    #[test]
    fn blaschke_is_the_product_of_its_factors() {
        let b = BlaschkeProduct::new(c(0.6, 0.8), vec![c(0.0, 0.0), c(0.4, 0.0), c(0.0, -0.3)])
            .unwrap();
        let z = c(0.35, 0.15);
        let mut expected = b.xi();
        for k in 0..b.order() {
            expected *= b.factor(k).unwrap().eval(z).unwrap();
        }
        assert_abs_diff_eq!((b.eval(z).unwrap() - expected).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn blaschke_derivative_matches_difference_quotient() {
        let b = BlaschkeProduct::new(Complex64::ONE, vec![c(0.0, 0.0), c(0.4, 0.0)]).unwrap();
        let z = c(0.2, -0.3);
        let h = 1e-6;
        let numeric = (b.eval(z + c(h, 0.0)).unwrap() - b.eval(z - c(h, 0.0)).unwrap()) / (2.0 * h);
        let exact = b.derivative_at(z).unwrap();
        assert_abs_diff_eq!((numeric - exact).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn series_agrees_with_direct_evaluation_inside_radius() {
        let b = BlaschkeProduct::new(c(0.6, 0.8), vec![c(0.3, 0.1), c(-0.2, 0.4)]).unwrap();
        let s = b.series(120);
        for z in [c(0.5, 0.0), c(-0.1, 0.45), c(0.0, 0.6)] {
            let err = (s.eval(z) - b.eval(z).unwrap()).norm();
            assert!(err < 1e-12, "series mismatch {err:e} at {z}");
        }
    }

    #[test]
    fn deserialization_enforces_constructor_checks() {
        let outside = serde_json::from_str::<MoebiusMap>(
            r#"{"xi":{"re":1.0,"im":0.0},"a":{"re":1.2,"im":0.0}}"#,
        );
        assert!(outside.is_err());

        let skewed: MoebiusMap = serde_json::from_str(
            r#"{"xi":{"re":3.0,"im":4.0},"a":{"re":0.5,"im":0.0}}"#,
        )
        .unwrap();
        assert_abs_diff_eq!(skewed.xi().norm(), 1.0, epsilon = 1e-15);

        let bad_zero = serde_json::from_str::<BlaschkeProduct>(
            r#"{"xi":{"re":1.0,"im":0.0},"zeros":[{"re":0.2,"im":0.0},{"re":1.5,"im":0.0}]}"#,
        );
        assert!(bad_zero.is_err());

        let repeated: BlaschkeProduct = serde_json::from_str(
            r#"{"xi":{"re":1.0,"im":0.0},"zeros":[{"re":0.2,"im":0.0},{"re":0.2,"im":0.0}]}"#,
        )
        .unwrap();
        assert!(!repeated.has_distinct_zeros());
        assert_eq!(repeated.order(), 2);
    }
}
