//! Numerical probe of where the defect square root sends `A^2_alpha`:
//! for `alpha > 0` the ratio `||D f||_{alpha - 1} / ||f||_alpha` should stay
//! bounded above and away from zero across degrees if the range behaves like
//! the lower-weight space.
//!
//! This is a norm-level diagnostic only; it needs `alpha - 1 > -1` and says
//! nothing for `alpha <= 0`, where kernel-level identities take over.

use super::{defect_matrix, defect_sqrt};
use crate::analytic::{DiskSymbol, PowerSeries};
use crate::bergman::BergmanSpaceModel;
use crate::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatioSample {
    pub degree: usize,
    /// `||D f||_{alpha - 1} / ||f||_alpha`.
    pub ratio: f64,
}

/// Samples grouped into degree buckets of fixed width; the spread compares
/// bucket maxima, so a systematic decay or blowup with degree shows up even
/// when individual ratios look tame.
#[derive(Debug, Clone, Serialize)]
pub struct RangeMappingReport {
    pub alpha: f64,
    pub n_work: usize,
    pub samples: Vec<RatioSample>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub bucket_width: usize,
    /// Max of per-bucket maxima divided by min of per-bucket maxima.
    pub bucket_spread: f64,
}

const BUCKET_WIDTH: usize = 10;

/// Applies the defect square root to each sample polynomial and measures the
/// norm ratio into `A^2_{alpha - 1}`. Requires `alpha > 0`, nonzero samples,
/// and a space truncation covering the largest degree plus `buffer`.
pub fn range_mapping_report(
    space: &BergmanSpaceModel,
    phi: &DiskSymbol,
    samples: &[PowerSeries],
    buffer: usize,
) -> Result<RangeMappingReport> {
    let alpha = space.alpha();
    if alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "range comparison against A^2_(alpha-1) needs alpha > 0, got {alpha}"
        )));
    }
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no sample polynomials supplied".into()));
    }
    let mut max_degree = 0usize;
    for p in samples {
        match p.degree() {
            None => {
                return Err(Error::InvalidParameter(
                    "sample polynomials must be nonzero".into(),
                ))
            }
            Some(d) => max_degree = max_degree.max(d),
        }
    }
    let n_work = max_degree + buffer;
    if space.truncation() < n_work {
        return Err(Error::InvalidParameter(format!(
            "space truncation {} is smaller than working size {n_work}",
            space.truncation()
        )));
    }

    let root = defect_sqrt(&defect_matrix(space, phi, n_work, 0)?)?;
    let target = BergmanSpaceModel::new(alpha - 1.0, n_work)?;

    let mut samples_out = Vec::with_capacity(samples.len());
    for p in samples {
        let image = root.apply(space, p)?;
        let ratio = target.norm_of(&image)? / space.norm_of(p)?;
        samples_out.push(RatioSample { degree: p.degree().unwrap_or(0), ratio });
    }

    let min_ratio = samples_out.iter().map(|s| s.ratio).fold(f64::INFINITY, f64::min);
    let max_ratio = samples_out.iter().map(|s| s.ratio).fold(0.0, f64::max);

    let bucket_count = max_degree / BUCKET_WIDTH + 1;
    let mut bucket_max = vec![f64::NAN; bucket_count];
    for s in &samples_out {
        let b = s.degree / BUCKET_WIDTH;
        if bucket_max[b].is_nan() || s.ratio > bucket_max[b] {
            bucket_max[b] = s.ratio;
        }
    }
    let occupied: Vec<f64> = bucket_max.into_iter().filter(|v| !v.is_nan()).collect();
    let hi = occupied.iter().copied().fold(0.0, f64::max);
    let lo = occupied.iter().copied().fold(f64::INFINITY, f64::min);
    let bucket_spread = if lo > 0.0 { hi / lo } else { f64::INFINITY };

    Ok(RangeMappingReport {
        alpha,
        n_work,
        samples: samples_out,
        min_ratio,
        max_ratio,
        bucket_width: BUCKET_WIDTH,
        bucket_spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::MoebiusMap;
    use num_complex::Complex64;

    fn phi(a: f64) -> DiskSymbol {
        DiskSymbol::from(MoebiusMap::new(Complex64::ONE, Complex64::new(a, 0.0)).unwrap())
    }

    #[test]
    fn rejects_nonpositive_alpha_and_degenerate_samples() {
        let space = BergmanSpaceModel::new(0.0, 40).unwrap();
        let polys = vec![PowerSeries::one()];
        assert!(range_mapping_report(&space, &phi(0.4), &polys, 10).is_err());

        let space = BergmanSpaceModel::new(1.0, 40).unwrap();
        assert!(range_mapping_report(&space, &phi(0.4), &[], 10).is_err());
        assert!(range_mapping_report(&space, &phi(0.4), &[PowerSeries::zero()], 10).is_err());
    }

    #[test]
    fn monomial_ratios_stay_in_a_narrow_band() {
        let space = BergmanSpaceModel::new(1.0, 70).unwrap();
        let polys: Vec<PowerSeries> = (0..=30).map(PowerSeries::monomial).collect();
        let report = range_mapping_report(&space, &phi(0.4), &polys, 40).unwrap();
        assert_eq!(report.samples.len(), 31);
        assert!(report.min_ratio > 0.1, "ratio collapsed: {}", report.min_ratio);
        assert!(report.max_ratio < 10.0, "ratio blew up: {}", report.max_ratio);
        assert!(report.bucket_spread < 10.0, "spread {}", report.bucket_spread);
    }
}
