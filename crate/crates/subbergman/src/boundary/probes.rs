//! Dyadic approach curves to a boundary point, with an oscillation measure
//! that decides between "the values settle" and "no convergence detected".
//!
//! The radial schedule is `r_k = 1 - 2^{-k}`; a Stolz probe adds two rays
//! `z = (1 - t_k e^{+-i beta/2}) xi` tilted into the disk. Oscillation at
//! tail index `K` is the diameter of the pooled value set from step `K` on,
//! over every curve; it is nonincreasing in `K` by construction, and the
//! verdict reads it a fixed few steps before the end so a single noisy last
//! sample cannot flip the answer.

use crate::bergman::monomial_norm_sq;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// Pooled tail oscillation below this value counts as convergence.
pub const CONVERGENCE_OSC_TOLERANCE: f64 = 1e-3;

/// The verdict reads the oscillation this many steps before the last.
pub const VERDICT_TAIL_OFFSET: u32 = 5;

pub const MIN_DEPTH: u32 = 6;
pub const MAX_DEPTH: u32 = 40;

/// Largest supported number of lacunary terms (`z^(2^n)`, exponents stay
/// within machine range).
pub const MAX_GAP_TERMS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProbeVerdict {
    Converges,
    NoConvergenceDetected,
}

/// One approach curve: its sample points and the probed values.
#[derive(Debug, Clone, Serialize)]
pub struct CurveTrace {
    pub label: String,
    #[serde(with = "crate::serde_complex::vec")]
    pub points: Vec<Complex64>,
    #[serde(with = "crate::serde_complex::vec")]
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryProbeReport {
    /// Angle of the boundary target `xi = exp(i theta)`.
    pub theta: f64,
    pub depth: u32,
    /// Stolz aperture; absent for a purely radial probe.
    pub aperture: Option<f64>,
    pub curves: Vec<CurveTrace>,
    /// `oscillation[k - 1]` is the pooled tail diameter from step `k` on.
    pub oscillation: Vec<f64>,
    /// The oscillation value the verdict was read from.
    pub decisive_oscillation: f64,
    pub verdict: ProbeVerdict,
}

fn pooled_oscillation(curves: &[CurveTrace], depth: u32) -> Vec<f64> {
    let mut osc = Vec::with_capacity(depth as usize);
    for start in 0..depth as usize {
        let pool: Vec<Complex64> = curves
            .iter()
            .flat_map(|c| c.values[start..].iter().copied())
            .collect();
        let mut diameter = 0.0f64;
        for (i, a) in pool.iter().enumerate() {
            for b in &pool[i + 1..] {
                diameter = diameter.max((a - b).norm());
            }
        }
        osc.push(diameter);
    }
    osc
}

fn probe(
    mut f: impl FnMut(Complex64) -> Result<Complex64>,
    theta: f64,
    depth: u32,
    aperture: Option<f64>,
) -> Result<BoundaryProbeReport> {
    if !(MIN_DEPTH..=MAX_DEPTH).contains(&depth) {
        return Err(Error::InvalidParameter(format!(
            "depth {depth} outside the supported range {MIN_DEPTH}..={MAX_DEPTH}"
        )));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("angle theta = {theta} must be finite")));
    }
    let xi = Complex64::from_polar(1.0, theta);

    let mut paths: Vec<(String, Vec<Complex64>)> = Vec::new();
    let radial: Vec<Complex64> = (1..=depth)
        .map(|k| xi * (1.0 - 2f64.powi(-(k as i32))))
        .collect();
    paths.push(("radial".into(), radial));
    if let Some(beta) = aperture {
        if !(beta > 0.0 && beta <= 1.2) {
            return Err(Error::InvalidParameter(format!(
                "aperture {beta} must lie in (0, 1.2]"
            )));
        }
        for (label, sign) in [("upper-ray", 1.0), ("lower-ray", -1.0)] {
            let tilt = Complex64::from_polar(1.0, sign * beta / 2.0);
            let ray = (1..=depth)
                .map(|k| xi * (Complex64::ONE - tilt * 2f64.powi(-(k as i32))))
                .collect();
            paths.push((label.into(), ray));
        }
    }

    let mut curves = Vec::with_capacity(paths.len());
    for (label, points) in paths {
        let mut values = Vec::with_capacity(points.len());
        for &z in &points {
            values.push(f(z)?);
        }
        curves.push(CurveTrace { label, points, values });
    }

    let oscillation = pooled_oscillation(&curves, depth);
    let decisive_index = (depth - VERDICT_TAIL_OFFSET) as usize - 1;
    let decisive_oscillation = oscillation[decisive_index];
    let verdict = if decisive_oscillation < CONVERGENCE_OSC_TOLERANCE {
        ProbeVerdict::Converges
    } else {
        ProbeVerdict::NoConvergenceDetected
    };
    Ok(BoundaryProbeReport {
        theta,
        depth,
        aperture,
        curves,
        oscillation,
        decisive_oscillation,
        verdict,
    })
}

/// Samples `f` along `r_k exp(i theta)`, `r_k = 1 - 2^{-k}`, `k = 1..=depth`.
pub fn radial_probe(
    f: impl FnMut(Complex64) -> Result<Complex64>,
    theta: f64,
    depth: u32,
) -> Result<BoundaryProbeReport> {
    probe(f, theta, depth, None)
}

/// Same schedule along the radius plus two rays at angles `+-aperture/2`
/// into the disk, pooling all three curves into one oscillation measure, so
/// a function with different limits along different approach paths cannot
/// pass.
pub fn stolz_probe(
    f: impl FnMut(Complex64) -> Result<Complex64>,
    theta: f64,
    aperture: f64,
    depth: u32,
) -> Result<BoundaryProbeReport> {
    probe(f, theta, depth, Some(aperture))
}

/// The lacunary series `sum_{n < terms} z^(2^n)`, evaluated by repeated
/// squaring. A classical divergence witness: it belongs to every `A^2_alpha`
/// but has radial limits almost nowhere.
pub fn gap_series_eval(terms: usize, z: Complex64) -> Result<Complex64> {
    if terms == 0 || terms > MAX_GAP_TERMS {
        return Err(Error::InvalidParameter(format!(
            "term count {terms} outside 1..={MAX_GAP_TERMS}"
        )));
    }
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDomain(format!(
            "z = {z} must lie in the open unit disk"
        )));
    }
    let mut acc = Complex64::ZERO;
    let mut power = z;
    for _ in 0..terms {
        acc += power;
        power *= power;
    }
    Ok(acc)
}

/// Squared `A^2_alpha` norm of the lacunary series, term by term from the
/// monomial norms (the exponents are orthogonal, so the sum is exact).
pub fn gap_series_norm_sq(alpha: f64, terms: usize) -> Result<f64> {
    if terms == 0 || terms > MAX_GAP_TERMS {
        return Err(Error::InvalidParameter(format!(
            "term count {terms} outside 1..={MAX_GAP_TERMS}"
        )));
    }
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "weight exponent alpha = {alpha} must be a finite number exceeding -1"
        )));
    }
    Ok((0..terms).map(|n| monomial_norm_sq(alpha, 1usize << n)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn depth_bounds_are_enforced() {
        let f = |_z| Ok(Complex64::ZERO);
        assert!(radial_probe(f, 0.0, 5).is_err());
        let f = |_z| Ok(Complex64::ZERO);
        assert!(radial_probe(f, 0.0, 41).is_err());
        let f = |_z| Ok(Complex64::ZERO);
        assert!(radial_probe(f, f64::NAN, 10).is_err());
    }

    #[test]
    fn continuous_function_converges_radially() {
        // f(z) = z has radial limit xi
        let report = radial_probe(|z| Ok(z), 1.1, 30).unwrap();
        assert_eq!(report.verdict, ProbeVerdict::Converges);
        assert_eq!(report.curves.len(), 1);
        assert_eq!(report.curves[0].values.len(), 30);
        // the pooled oscillation must never increase with the tail index
        for w in report.oscillation.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "oscillation increased: {w:?}");
        }
    }

    #[test]
    fn stolz_probe_sees_disagreement_between_rays() {
        // f(z) = (1 - z)/|1 - z| is unimodular with different limits along
        // the radius and along tilted rays at xi = 1
        let f = |z: Complex64| {
            let d = Complex64::ONE - z;
            Ok(d / d.norm())
        };
        let stolz = stolz_probe(f, 0.0, 1.0, 30).unwrap();
        assert_eq!(stolz.verdict, ProbeVerdict::NoConvergenceDetected);
        assert_eq!(stolz.curves.len(), 3);
        // each single ray alone would have settled: radial-only passes
        let radial = radial_probe(f, 0.0, 30).unwrap();
        assert_eq!(radial.verdict, ProbeVerdict::Converges);
    }

    #[test]
    fn aperture_validation() {
        let f = |z| Ok(z);
        assert!(stolz_probe(f, 0.0, 0.0, 20).is_err());
        let f = |z| Ok(z);
        assert!(stolz_probe(f, 0.0, 1.3, 20).is_err());
        let f = |z| Ok(z);
        assert!(stolz_probe(f, 0.0, 1.2, 20).is_ok());
    }

    #[test]
    fn evaluator_errors_propagate() {
        let f = |z: Complex64| {
            if z.re > 0.9 {
                Err(Error::EvalFailure { z, reason: "synthetic".into() })
            } else {
                Ok(z)
            }
        };
        assert!(matches!(radial_probe(f, 0.0, 20), Err(Error::EvalFailure { .. })));
    }

    #[test]
    fn gap_series_squaring_matches_direct_powers() {
        let z = c(0.7, 0.2);
        let direct: Complex64 = (0..6).map(|n| z.powu(1u32 << n)).sum();
        let fast = gap_series_eval(6, z).unwrap();
        assert_abs_diff_eq!((direct - fast).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn gap_series_rejects_bad_input() {
        assert!(gap_series_eval(0, c(0.5, 0.0)).is_err());
        assert!(gap_series_eval(31, c(0.5, 0.0)).is_err());
        assert!(gap_series_eval(5, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn gap_series_norm_is_finite_and_small() {
        // sum_{n<26} 1/(2^n + 1) converges well below 2 in the unweighted
        // space, which is the membership certificate for the witness series
        let norm_sq = gap_series_norm_sq(0.0, 26).unwrap();
        assert!(norm_sq < 2.0, "norm^2 = {norm_sq}");
        assert!(norm_sq > 1.0);
        // first term alone: ||z||^2 = 1/2
        assert_abs_diff_eq!(gap_series_norm_sq(0.0, 1).unwrap(), 0.5, epsilon = 1e-13);
    }

    #[test]
    fn gap_series_does_not_settle_radially() {
        // at most angles the lacunary tail keeps swinging; a generic grid
        // angle shows oscillation far above the tolerance
        let theta = std::f64::consts::TAU * 5.0 / 64.0;
        let report = radial_probe(|z| gap_series_eval(26, z), theta, 30).unwrap();
        assert_eq!(report.verdict, ProbeVerdict::NoConvergenceDetected);
        assert!(report.decisive_oscillation > 0.5);
    }
}
