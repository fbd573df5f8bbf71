//! Matrix-free closed forms for the adjoint and defect action of a Blaschke
//! symbol on the unweighted Bergman space.
//!
//! For a finite Blaschke product `B` with simple zeros `a_k` and any
//! polynomial `f` with antiderivative `F`,
//!
//! ```text
//! T_conj(B) f = f / B - F B' / B^2 + sum_k F(a_k) / (B'(a_k) (z - a_k)^2)
//! ```
//!
//! and for a single Möbius factor `phi` with zero `a`, the defect applied to
//! a quotient `gamma / psi` with antiderivative `F` of its expansion is
//!
//! ```text
//! (I - T_phi T_phi^*)(gamma / psi)
//!     = F phi' / phi - F(a) phi / (phi'(a) (z - a)^2).
//! ```
//!
//! Both right-hand sides are analytic across the zeros of `B` (the poles of
//! the individual terms cancel), but evaluating them there naively divides
//! small numbers by small numbers. The adjoint evaluator switches to
//! Lagrange interpolation from the circle of [`SAFEGUARD_RADIUS`] around the
//! nearest zero, where the raw form is well conditioned. The defect
//! evaluator cancels the pole exactly instead: substituting the Möbius
//! closed forms turns its right-hand side into
//!
//! ```text
//! (H(z) / (z - a) + conj(a) F(z)) / (1 - conj(a) z),
//! H(z) = F(z) (1 - conj(a) z) - F(a) (1 - |a|^2),
//! ```
//!
//! and since `H(a) = 0` the division is synthetic polynomial division,
//! stable at every point of the disk.
//!
//! These identities realize the adjoint of the unweighted (`alpha = 0`)
//! inner product; matrix-route cross checks must be built on that space.

use crate::analytic::{BlaschkeProduct, MoebiusMap, PowerSeries, RationalFn};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Distance to a denominator zero below which evaluation switches from the
/// raw closed form to interpolation off the safeguard circle.
pub const SAFEGUARD_RADIUS: f64 = 0.05;

/// Node count for the safeguard interpolation. The aliasing error of
/// interpolation from a circle of radius `R` decays like `(R / rho)^N`
/// with `rho` the analyticity radius around the center, so 12 nodes on the
/// safeguard circle leave no visible error at the tolerances used here.
const SAFEGUARD_NODES: usize = 12;

/// Lagrange interpolation at `z` from equiangular nodes on the circle of
/// [`SAFEGUARD_RADIUS`] around `center`. The first node sits half a spacing
/// off the direction of `z`, so nodes bracket the target symmetrically and
/// never coincide with it.
fn interpolate_from_circle(
    center: Complex64,
    z: Complex64,
    mut raw: impl FnMut(Complex64) -> Complex64,
) -> Complex64 {
    let spacing = TAU / SAFEGUARD_NODES as f64;
    let base = (z - center).arg() + spacing / 2.0;
    let nodes: Vec<Complex64> = (0..SAFEGUARD_NODES)
        .map(|j| center + Complex64::from_polar(SAFEGUARD_RADIUS, base + j as f64 * spacing))
        .collect();
    let values: Vec<Complex64> = nodes.iter().map(|&node| raw(node)).collect();
    let mut acc = Complex64::ZERO;
    for j in 0..SAFEGUARD_NODES {
        let mut weight = Complex64::ONE;
        for i in 0..SAFEGUARD_NODES {
            if i != j {
                weight *= (z - nodes[i]) / (nodes[j] - nodes[i]);
            }
        }
        acc += weight * values[j];
    }
    acc
}

fn nearest(points: &[Complex64], z: Complex64) -> (Complex64, f64) {
    points
        .iter()
        .map(|&p| (p, (z - p).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one point")
}

/// The adjoint action `T_conj(B) f` as an evaluator, carrying the
/// antiderivative and the partial-fraction data of the formula above.
#[derive(Debug, Clone)]
pub struct BlaschkeAdjointExplicit {
    f: PowerSeries,
    antiderivative: PowerSeries,
    b: BlaschkeProduct,
    /// `F(a_k) / B'(a_k)` for each zero, precomputed.
    residue_scales: Vec<Complex64>,
}

impl BlaschkeAdjointExplicit {
    /// Uses the antiderivative with `F(0) = 0`; the result is independent of
    /// that choice (see [`Self::with_antiderivative_offset`]).
    pub fn new(f: &PowerSeries, b: &BlaschkeProduct) -> Result<Self> {
        Self::with_antiderivative_offset(f, b, Complex64::ZERO)
    }

    /// Same operator with `F(0) = offset`. The partial-fraction identity
    /// `B'/B^2 = sum_k (1/B'(a_k)) (z - a_k)^{-2}` makes the constant drop
    /// out of the result exactly; exposing the offset lets tests verify
    /// that instead of assuming it.
    pub fn with_antiderivative_offset(
        f: &PowerSeries,
        b: &BlaschkeProduct,
        offset: Complex64,
    ) -> Result<Self> {
        if !b.has_distinct_zeros() {
            return Err(Error::InvalidParameter(
                "the partial-fraction form needs pairwise distinct Blaschke zeros".into(),
            ));
        }
        let antiderivative = f.antiderivative(offset);
        let residue_scales = b
            .zeros()
            .iter()
            .map(|&a| Ok(antiderivative.eval(a) / b.derivative_at(a)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(BlaschkeAdjointExplicit { f: f.clone(), antiderivative, b: b.clone(), residue_scales })
    }

    pub fn symbol(&self) -> &BlaschkeProduct {
        &self.b
    }

    fn eval_raw(&self, z: Complex64) -> Result<Complex64> {
        let b_val = self.b.eval(z)?;
        let b_deriv = self.b.derivative_at(z)?;
        let mut acc = (self.f.eval(z) - self.antiderivative.eval(z) * b_deriv / b_val) / b_val;
        for (&a, &scale) in self.b.zeros().iter().zip(&self.residue_scales) {
            let d = z - a;
            acc += scale / (d * d);
        }
        Ok(acc)
    }

    /// Evaluates on the closed disk, interpolating across the removable
    /// singularities at the zeros of `B`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (center, distance) = nearest(self.b.zeros(), z);
        if distance >= SAFEGUARD_RADIUS {
            return self.eval_raw(z);
        }
        let mut failure = None;
        let value = interpolate_from_circle(center, z, |node| match self.eval_raw(node) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                Complex64::ZERO
            }
        });
        match failure {
            None => Ok(value),
            Some(e) => Err(e),
        }
    }
}

/// The defect action `(I - T_phi T_phi^*)(gamma / psi)` as an evaluator.
///
/// The quotient is expanded to `degree` terms (certified by the
/// [`RationalFn`] construction), the expansion is antidifferentiated once,
/// and the closed form above is evaluated through its regularized
/// equivalent from the module docs, which has no singular terms left.
#[derive(Debug, Clone)]
pub struct DefectActionExplicit {
    quotient: RationalFn,
    antiderivative: PowerSeries,
    phi: MoebiusMap,
    /// `F(a) / phi'(a)`, kept for the raw display form.
    residue_scale: Complex64,
    /// `H / (z - a) + conj(a) F` from the regularized form in the module
    /// docs; dividing by `1 - conj(a) z` recovers the defect action.
    numerator: PowerSeries,
}

/// Denominators are certified zero-free on this radius before expansion.
const EXPANSION_RADIUS: f64 = 0.9;

/// Synthetic division `p(z) = (z - a) q(z) + r`.
fn divide_by_linear(p: &PowerSeries, a: Complex64) -> (PowerSeries, Complex64) {
    let n = p.coeffs().len();
    if n <= 1 {
        return (PowerSeries::zero(), p.coeff(0));
    }
    let mut q = vec![Complex64::ZERO; n - 1];
    let mut carry = p.coeff(n - 1);
    for k in (1..n).rev() {
        q[k - 1] = carry;
        carry = p.coeff(k - 1) + a * carry;
    }
    let quotient = PowerSeries::from_coeffs(q).expect("division keeps coefficients finite");
    (quotient, carry)
}

impl DefectActionExplicit {
    pub fn new(
        gamma: &PowerSeries,
        psi: &PowerSeries,
        phi: &MoebiusMap,
        degree: usize,
    ) -> Result<Self> {
        let quotient = RationalFn::new(gamma.clone(), psi.clone(), EXPANSION_RADIUS)?;
        let antiderivative = quotient.series(degree).antiderivative(Complex64::ZERO);
        let a = phi.a();
        let residue_scale = antiderivative.eval(a) / phi.derivative_at(a)?;
        let one_minus_az =
            PowerSeries::from_coeffs(vec![Complex64::ONE, -a.conj()]).expect("finite");
        let offset = antiderivative.eval(a) * (1.0 - a.norm_sqr());
        let h = &(&antiderivative * &one_minus_az) - &PowerSeries::constant(offset);
        let (regular, _remainder) = divide_by_linear(&h, a);
        let numerator = &regular + &antiderivative.scaled(a.conj());
        Ok(DefectActionExplicit {
            quotient,
            antiderivative,
            phi: phi.clone(),
            residue_scale,
            numerator,
        })
    }

    pub fn quotient(&self) -> &RationalFn {
        &self.quotient
    }

    pub fn symbol(&self) -> &MoebiusMap {
        &self.phi
    }

    /// The display form with its two singular terms, conditioned badly near
    /// `z = a`; [`Self::eval`] uses the regularized equivalent and should be
    /// preferred everywhere. Exposed so the two can be compared directly.
    pub fn eval_raw(&self, z: Complex64) -> Result<Complex64> {
        let phi_val = self.phi.eval(z)?;
        let phi_deriv = self.phi.derivative_at(z)?;
        let d = z - self.phi.a();
        Ok(self.antiderivative.eval(z) * phi_deriv / phi_val - self.residue_scale * phi_val / (d * d))
    }

    /// Evaluates inside the expansion domain. The removable singularity at
    /// `z = a` is cancelled exactly, so no point needs special treatment.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > self.quotient.domain_radius() + 1e-12 {
            return Err(Error::OutsideDomain(format!(
                "z = {z} lies outside the certified expansion disk of radius {}",
                self.quotient.domain_radius()
            )));
        }
        Ok(self.numerator.eval(z) / (Complex64::ONE - self.phi.a().conj() * z))
    }
}
