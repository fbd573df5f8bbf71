//! The acceptance suite: eleven numbered checks, each exercising a different
//! identity or dichotomy end to end with pinned tolerances and seeds. Every
//! check reports a deterministic detail object; the final check re-runs the
//! seeded ones and compares payload bytes.

use crate::run::{seeded_disk_point, seeded_disk_point_avoiding, RunError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use subbergman::analytic::{BlaschkeProduct, DiskSymbol, MoebiusMap, PowerSeries, RationalFn};
use subbergman::bergman::{monomial_norm_sq, BergmanSpaceModel, KernelSpec, PointKernel};
use subbergman::boundary::{
    cyclicity_residual_probe, doublestar_factorization_check, gap_series_eval,
    gap_series_norm_sq, radial_probe, rank_one_ratio, ProbeVerdict, SmirnovQuotient,
};
use subbergman::operator::{
    adjoint, defect_matrix, toeplitz_matrix_for, BlaschkeAdjointExplicit, DefectActionExplicit,
};
use subbergman::pick::{
    cnp_oneminus_test, cnp_witness_search, NormalizedKernel, PickVerdict,
};
use subbergman::Result as LibResult;

pub const CRITERION_COUNT: usize = 11;

/// Criteria that consume a seed; these are the ones the determinism check
/// re-runs.
const SEEDED: [usize; 7] = [1, 3, 4, 5, 6, 7, 10];

// Pinned tolerances, one per criterion clause.
const KERNEL_SERIES_TOL: f64 = 1e-9;
const DEFECT_KERNEL_TOL: f64 = 1e-6;
const LEMMA_TOL: f64 = 1e-8;
const LEMMA_REGRESSION_TOL: f64 = 1e-10;
const OFFSET_TOL: f64 = 1e-10;
const STAR_TOL: f64 = 1e-7;
const STAR_REFERENCE_TOL: f64 = 1e-10;
const DET_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;
const FACTORIZATION_TOL: f64 = 1e-9;
const RATIO_CLOSED_FORM_TOL: f64 = 1e-10;
const OSC_TOL: f64 = 1e-3;
const GAP_OSC_FLOOR: f64 = 0.5;
const RESIDUAL_ZERO_TOL: f64 = 1e-8;
const SHIFT_RESIDUAL_FLOOR: f64 = 1.0 - 1e-6;
const CYCLIC_RESIDUAL_CEIL: f64 = 0.05;
const BUCKET_SPREAD_CEIL: f64 = 10.0;

// Pinned seeds.
const KERNEL_SEED: u64 = 101;
const LEMMA_SEED: u64 = 303;
const STAR_SEED: u64 = 505;
const PICK_SET_SEED: u64 = 606;
const WITNESS_SEED: u64 = 1;
const TUPLE_SEED: u64 = 707;
const RANGE_SEED: u64 = 1010;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionReport>,
    pub all_passed: bool,
}

pub fn criterion_name(id: usize) -> &'static str {
    match id {
        1 => "kernel-series-consistency",
        2 => "defect-kernel-identity",
        3 => "blaschke-adjoint-dual-path",
        4 => "antiderivative-offset-invariance",
        5 => "defect-action-dual-path",
        6 => "cnp-dichotomy",
        7 => "rank-one-factorization",
        8 => "boundary-dichotomy",
        9 => "cyclicity-sanity",
        10 => "range-mapping-stability",
        11 => "determinism",
        _ => "unknown",
    }
}

/// Runs one criterion. Library errors count as failures and land in the
/// detail object rather than aborting the suite.
pub fn run_criterion(id: usize) -> CriterionReport {
    let outcome = match id {
        1 => kernel_series_consistency(),
        2 => defect_kernel_identity(),
        3 => blaschke_adjoint_dual_path(),
        4 => antiderivative_offset_invariance(),
        5 => defect_action_dual_path(),
        6 => cnp_dichotomy(),
        7 => rank_one_factorization(),
        8 => boundary_dichotomy(),
        9 => cyclicity_sanity(),
        10 => range_mapping_stability(),
        11 => determinism(),
        other => Err(subbergman::Error::InvalidParameter(format!(
            "no criterion {other}; the suite has {CRITERION_COUNT}"
        ))),
    };
    let (passed, detail) = match outcome {
        Ok(pair) => pair,
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    CriterionReport { id, name: criterion_name(id), passed, detail }
}

/// Runs the requested criteria (all of them by default) in parallel and
/// collects the reports in id order. The thread count can be capped through
/// the `SUBBERGMAN_THREADS` environment variable.
pub fn run_suite(only: Option<&[usize]>) -> Result<SuiteReport, RunError> {
    let ids: Vec<usize> = match only {
        Some(ids) if !ids.is_empty() => {
            for &id in ids {
                if !(1..=CRITERION_COUNT).contains(&id) {
                    return Err(RunError::Validation(format!(
                        "criterion id {id} outside 1..={CRITERION_COUNT}"
                    )));
                }
            }
            let mut ids = ids.to_vec();
            ids.sort_unstable();
            ids.dedup();
            ids
        }
        _ => (1..=CRITERION_COUNT).collect(),
    };

    let threads = std::env::var("SUBBERGMAN_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| RunError::Validation(format!("thread pool: {e}")))?;

    let mut criteria: Vec<CriterionReport> =
        pool.install(|| ids.par_iter().map(|&id| run_criterion(id)).collect());
    criteria.sort_by_key(|c| c.id);
    let all_passed = criteria.iter().all(|c| c.passed);
    Ok(SuiteReport { criteria, all_passed })
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cx_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// Taylor coefficients of `z -> (1 - z conj(w))^(-s)` by the Pochhammer
/// recurrence; shares no code with the closed-form kernel evaluation.
fn kernel_section_series(s: f64, w: Complex64, degree: usize) -> PowerSeries {
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut c_n = Complex64::ONE;
    for n in 0..=degree {
        coeffs.push(c_n);
        c_n *= w.conj() * ((n as f64 + s) / (n as f64 + 1.0));
    }
    PowerSeries::from_coeffs(coeffs).expect("finite coefficients")
}

// 1. Closed-form generalized kernels against the reproducing expansion
//    through the monomial norm table.
fn kernel_series_consistency() -> LibResult<(bool, Value)> {
    const TERMS: usize = 200;
    const PAIRS: usize = 50;
    let mut per_alpha = Vec::new();
    let mut max_error = 0.0f64;
    for (i, &alpha) in [0.0, 0.5, 1.0, 2.0].iter().enumerate() {
        let kernel = KernelSpec::generalized(alpha + 2.0)?;
        let norms: Vec<f64> = (0..=TERMS).map(|n| monomial_norm_sq(alpha, n)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(KERNEL_SEED + i as u64);
        let mut local = 0.0f64;
        for _ in 0..PAIRS {
            let z = seeded_disk_point(&mut rng, 0.6);
            let w = seeded_disk_point(&mut rng, 0.6);
            let closed = kernel.eval(z, w)?;
            let x = z * w.conj();
            let mut sum = Complex64::ZERO;
            let mut pow = Complex64::ONE;
            for norm_sq in &norms {
                sum += pow / norm_sq;
                pow *= x;
            }
            local = local.max((closed - sum).norm());
        }
        per_alpha.push(json!({ "alpha": alpha, "max_error": local }));
        max_error = max_error.max(local);
    }
    Ok((
        max_error <= KERNEL_SERIES_TOL,
        json!({
            "tolerance": KERNEL_SERIES_TOL,
            "series_terms": TERMS,
            "pairs_per_alpha": PAIRS,
            "seed": KERNEL_SEED,
            "per_alpha": per_alpha,
            "max_error": max_error,
        }),
    ))
}

// 2. (I - T_phi T_phi^*) K_w = K^{phi}_w on a fixed point grid.
fn defect_kernel_identity() -> LibResult<(bool, Value)> {
    const N_TRUST: usize = 150;
    const BUFFER: usize = 50;
    let zs = [c(0.0, 0.0), c(0.3, 0.0), c(-0.45, 0.2), c(0.1, -0.5), c(0.54, 0.24)];
    let ws = [c(0.2, 0.0), c(-0.3, -0.3), c(0.5, 0.1), c(0.0, 0.45), c(-0.55, 0.0)];
    let mut combos = Vec::new();
    let mut max_error = 0.0f64;
    for &alpha in &[0.0, 1.0] {
        for &a in &[c(0.0, 0.0), c(0.4, 0.2)] {
            let s = alpha + 2.0;
            let space = BergmanSpaceModel::new(alpha, N_TRUST + BUFFER)?;
            let phi = MoebiusMap::new(Complex64::ONE, a)?;
            let symbol = DiskSymbol::from(phi);
            let sub = KernelSpec::sub_bergman(alpha, symbol.clone())?;
            let matrix = defect_matrix(&space, &symbol, N_TRUST + BUFFER, 0)?;
            let mut local = 0.0f64;
            for &w in &ws {
                let section = kernel_section_series(s, w, N_TRUST);
                let image = matrix.apply(&space, &section)?;
                for &z in &zs {
                    let err = (image.eval(z) - sub.eval(z, w)?).norm();
                    local = local.max(err);
                }
            }
            combos.push(json!({ "alpha": alpha, "a": cx_json(a), "max_error": local }));
            max_error = max_error.max(local);
        }
    }
    Ok((
        max_error <= DEFECT_KERNEL_TOL,
        json!({
            "tolerance": DEFECT_KERNEL_TOL,
            "n_trust": N_TRUST,
            "buffer": BUFFER,
            "grid_pairs": zs.len() * ws.len(),
            "combos": combos,
            "max_error": max_error,
        }),
    ))
}

struct LemmaCase {
    b: BlaschkeProduct,
    f: PowerSeries,
    points: Vec<Complex64>,
}

/// The seeded (f, B, sample points) triples shared by criteria 3 and 4.
fn lemma_cases(seed: u64) -> LibResult<Vec<LemmaCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(20);
    for k in 0..20usize {
        let n_zeros = 1 + k % 3;
        let mut zeros: Vec<Complex64> = Vec::with_capacity(n_zeros);
        while zeros.len() < n_zeros {
            let z = seeded_disk_point_avoiding(&mut rng, 0.6, &zeros, 0.1);
            zeros.push(z);
        }
        let xi = Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
        let b = BlaschkeProduct::new(xi, zeros)?;

        let deg = rng.random_range(0..=20usize);
        let mut coeffs: Vec<Complex64> = (0..=deg)
            .map(|_| c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
            .collect();
        if coeffs.iter().all(|c| c.norm() < 1e-12) {
            coeffs[0] = Complex64::ONE;
        }
        let f = PowerSeries::from_coeffs(coeffs)?;

        let points: Vec<Complex64> = (0..200)
            .map(|_| seeded_disk_point_avoiding(&mut rng, 0.7, b.zeros(), 0.05))
            .collect();
        cases.push(LemmaCase { b, f, points });
    }
    Ok(cases)
}

// 3. Explicit Blaschke adjoint vs the truncated Toeplitz adjoint, plus two
//    fixed regressions.
fn blaschke_adjoint_dual_path() -> LibResult<(bool, Value)> {
    const TRUNCATION: usize = 300;
    let space = BergmanSpaceModel::new(0.0, TRUNCATION)?;
    let mut max_error = 0.0f64;
    for case in lemma_cases(LEMMA_SEED)? {
        let explicit = BlaschkeAdjointExplicit::new(&case.f, &case.b)?;
        let matrix =
            adjoint(&toeplitz_matrix_for(&space, &DiskSymbol::from(case.b.clone()), TRUNCATION)?);
        let image = matrix.apply(&space, &case.f)?;
        for &z in &case.points {
            max_error = max_error.max((explicit.eval(z)? - image.eval(z)).norm());
        }
    }

    // T_conj(z) z^2 = (2/3) z in the unweighted space
    let shift = BlaschkeProduct::new(-Complex64::ONE, vec![Complex64::ZERO])?;
    let f_sq = PowerSeries::monomial(2);
    let explicit = BlaschkeAdjointExplicit::new(&f_sq, &shift)?;
    let mut shift_error = 0.0f64;
    for k in 0..50 {
        let z = Complex64::from_polar(0.65, 0.13 * k as f64 + 0.05);
        shift_error = shift_error.max((explicit.eval(z)? - z * (2.0 / 3.0)).norm());
    }

    // T_conj(B) 1 = conj(B(0)) = 0.5 for B = (0.5 - z)/(1 - 0.5 z)
    let moebius = BlaschkeProduct::new(Complex64::ONE, vec![c(0.5, 0.0)])?;
    let explicit = BlaschkeAdjointExplicit::new(&PowerSeries::one(), &moebius)?;
    let mut constant_error = 0.0f64;
    for k in 0..50 {
        let z = Complex64::from_polar(0.65, 0.13 * k as f64 + 0.05);
        if (z - c(0.5, 0.0)).norm() < 0.05 {
            continue;
        }
        constant_error = constant_error.max((explicit.eval(z)? - c(0.5, 0.0)).norm());
    }

    let passed = max_error <= LEMMA_TOL
        && shift_error <= LEMMA_REGRESSION_TOL
        && constant_error <= LEMMA_REGRESSION_TOL;
    Ok((
        passed,
        json!({
            "tolerance": LEMMA_TOL,
            "regression_tolerance": LEMMA_REGRESSION_TOL,
            "cases": 20,
            "points_per_case": 200,
            "truncation": TRUNCATION,
            "seed": LEMMA_SEED,
            "max_error": max_error,
            "shift_regression_error": shift_error,
            "constant_regression_error": constant_error,
        }),
    ))
}

// 4. The antiderivative offset drops out of the explicit formula.
fn antiderivative_offset_invariance() -> LibResult<(bool, Value)> {
    let offsets = [c(1.0, 0.0), c(1.0, 1.0), c(0.0, -3.0)];
    let mut max_deviation = 0.0f64;
    for case in lemma_cases(LEMMA_SEED)? {
        let base = BlaschkeAdjointExplicit::new(&case.f, &case.b)?;
        for &offset in &offsets {
            let shifted = BlaschkeAdjointExplicit::with_antiderivative_offset(
                &case.f, &case.b, offset,
            )?;
            for &z in &case.points {
                max_deviation = max_deviation.max((base.eval(z)? - shifted.eval(z)?).norm());
            }
        }
    }
    Ok((
        max_deviation <= OFFSET_TOL,
        json!({
            "tolerance": OFFSET_TOL,
            "offsets": offsets.iter().map(|&o| cx_json(o)).collect::<Vec<_>>(),
            "cases": 20,
            "seed": LEMMA_SEED,
            "max_deviation": max_deviation,
        }),
    ))
}

// 5. Explicit defect action on multiplier quotients vs the defect matrix.
fn defect_action_dual_path() -> LibResult<(bool, Value)> {
    const EXPANSION: usize = 200;
    const TRUNCATION: usize = 260;
    let pairs: [(Vec<f64>, Vec<f64>); 3] = [
        (vec![1.0], vec![1.0]),
        (vec![1.0], vec![1.0, -0.5]),
        (vec![1.0, -1.0], vec![1.0, -0.3]),
    ];
    let space = BergmanSpaceModel::new(0.0, TRUNCATION)?;
    let mut combos = Vec::new();
    let mut max_error = 0.0f64;
    let mut reference_error = 0.0f64;
    for (ai, &a_re) in [0.3, 0.5].iter().enumerate() {
        let a = c(a_re, 0.0);
        let phi = MoebiusMap::new(Complex64::ONE, a)?;
        let symbol = DiskSymbol::from(phi.clone());
        let matrix = defect_matrix(&space, &symbol, TRUNCATION, 0)?;
        for (pi, (g, p)) in pairs.iter().enumerate() {
            let gamma = PowerSeries::from_real_coeffs(g)?;
            let psi = PowerSeries::from_real_coeffs(p)?;
            let explicit = DefectActionExplicit::new(&gamma, &psi, &phi, EXPANSION)?;
            let quotient = RationalFn::new(gamma, psi, 0.9)?.series(EXPANSION);
            let image = matrix.apply(&space, &quotient)?;

            let mut rng = ChaCha8Rng::seed_from_u64(STAR_SEED + (ai * 3 + pi) as u64);
            let mut local = 0.0f64;
            for _ in 0..100 {
                let z = seeded_disk_point(&mut rng, 0.6);
                let lhs = explicit.eval(z)?;
                local = local.max((lhs - image.eval(z)).norm());
                if pi == 0 && a_re == 0.5 {
                    // closed form: 0.75 / (1 - 0.5 z)
                    let reference = 0.75 / (Complex64::ONE - z * 0.5);
                    reference_error = reference_error.max((lhs - reference).norm());
                }
            }
            combos.push(json!({
                "a": a_re,
                "gamma": g,
                "psi": p,
                "max_error": local,
            }));
            max_error = max_error.max(local);
        }
    }
    let passed = max_error <= STAR_TOL && reference_error <= STAR_REFERENCE_TOL;
    Ok((
        passed,
        json!({
            "tolerance": STAR_TOL,
            "reference_tolerance": STAR_REFERENCE_TOL,
            "expansion_degree": EXPANSION,
            "truncation": TRUNCATION,
            "points_per_combo": 100,
            "seed": STAR_SEED,
            "combos": combos,
            "max_error": max_error,
            "reference_error": reference_error,
        }),
    ))
}

// 6. CNP dichotomy: the Bergman kernel fails the one-minus test on a fixed
//    pair, Moebius sub-Bergman kernels pass on random sets for alpha <= 0,
//    and a degree-2 Blaschke symbol yields a seeded witness.
fn cnp_dichotomy() -> LibResult<(bool, Value)> {
    // (a) fixed 2x2 failure with determinant -8 (1/2)^6 = -0.125
    let bergman = KernelSpec::generalized(2.0)?;
    let points = [c(0.5, 0.0), c(-0.5, 0.0)];
    let normalized = NormalizedKernel::new(&bergman, Complex64::ZERO)?;
    let mut f = [[Complex64::ZERO; 2]; 2];
    for (i, &zi) in points.iter().enumerate() {
        for (j, &zj) in points.iter().enumerate() {
            f[i][j] = Complex64::ONE - Complex64::ONE / normalized.kernel(zi, zj)?;
        }
    }
    let det = f[0][0] * f[1][1] - f[0][1] * f[1][0];
    let det_error = (det - c(-0.125, 0.0)).norm();
    let report_a = cnp_oneminus_test(&bergman, &points, Complex64::ZERO, EIGEN_TOL)?;
    let part_a = det_error <= DET_TOL && report_a.verdict == PickVerdict::NotPsd;

    // (b) Moebius symbols stay PSD at alpha in {-0.5, 0}
    let mut min_eigenvalue = f64::INFINITY;
    let mut part_b = true;
    for (i, &alpha) in [-0.5, 0.0].iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(PICK_SET_SEED + i as u64);
        for _ in 0..100 {
            let a = seeded_disk_point(&mut rng, 0.6);
            let xi = Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
            let phi = MoebiusMap::new(xi, a)?;
            let kernel = KernelSpec::sub_bergman(alpha, DiskSymbol::from(phi))?;
            let mut set: Vec<Complex64> = Vec::with_capacity(6);
            while set.len() < 6 {
                set.push(seeded_disk_point_avoiding(&mut rng, 0.7, &set, 0.05));
            }
            let report = cnp_oneminus_test(&kernel, &set, Complex64::ZERO, EIGEN_TOL)?;
            min_eigenvalue = min_eigenvalue.min(report.min_eigenvalue);
            if report.verdict != PickVerdict::Psd {
                part_b = false;
            }
        }
    }

    // (c) degree-2 Blaschke symbol: a witness exists and the search finds it
    let blaschke = BlaschkeProduct::new(Complex64::ONE, vec![Complex64::ZERO, c(0.4, 0.0)])?;
    let kernel = KernelSpec::sub_bergman(0.0, DiskSymbol::from(blaschke))?;
    let search = cnp_witness_search(&kernel, 3, 1000, WITNESS_SEED, Complex64::ZERO, EIGEN_TOL)?;
    let part_c = search.witness.is_some();

    let passed = part_a && part_b && part_c;
    Ok((
        passed,
        json!({
            "det_tolerance": DET_TOL,
            "eigen_tolerance": EIGEN_TOL,
            "determinant": cx_json(det),
            "determinant_error": det_error,
            "fixed_pair_verdict": report_a.verdict,
            "sets_per_alpha": 100,
            "set_seed": PICK_SET_SEED,
            "min_eigenvalue_observed": min_eigenvalue,
            "all_sets_psd": part_b,
            "witness_seed": WITNESS_SEED,
            "witness": search.witness,
            "witness_trials_run": search.trials_run,
        }),
    ))
}

// 7. Rank-one structure of the kernel ratio: cross-ratio determinants vanish
//    and the a = 0, alpha = 1 ratio is exactly -z^3.
fn rank_one_factorization() -> LibResult<(bool, Value)> {
    let mut combos = Vec::new();
    let mut max_defect = 0.0f64;
    for (i, &alpha) in [0.5, 1.0, 2.0].iter().enumerate() {
        for (j, &a) in [c(0.0, 0.0), c(0.3, 0.0), c(0.0, 0.5)].iter().enumerate() {
            let phi = MoebiusMap::new(Complex64::ONE, a)?;
            let mut rng = ChaCha8Rng::seed_from_u64(TUPLE_SEED + (i * 3 + j) as u64);
            let tuples: Vec<[Complex64; 4]> = (0..200)
                .map(|_| {
                    let z1 = seeded_disk_point_avoiding(&mut rng, 0.6, &[a], 0.1);
                    let w1 = seeded_disk_point(&mut rng, 0.6);
                    let z2 = seeded_disk_point_avoiding(&mut rng, 0.6, &[a], 0.1);
                    let w2 = seeded_disk_point(&mut rng, 0.6);
                    [z1, w1, z2, w2]
                })
                .collect();
            let report = doublestar_factorization_check(alpha, &phi, &tuples)?;
            combos.push(json!({
                "alpha": alpha,
                "a": cx_json(a),
                "max_defect": report.max_defect,
            }));
            max_defect = max_defect.max(report.max_defect);
        }
    }

    // display form at a = 0, alpha = 1: R(z, w) = -z^3 for every w
    let phi0 = MoebiusMap::new(Complex64::ONE, Complex64::ZERO)?;
    let mut rng = ChaCha8Rng::seed_from_u64(TUPLE_SEED + 100);
    let mut ratio_error = 0.0f64;
    for _ in 0..20 {
        let z = seeded_disk_point_avoiding(&mut rng, 0.6, &[Complex64::ZERO], 0.1);
        let w = seeded_disk_point(&mut rng, 0.6);
        let r = rank_one_ratio(1.0, &phi0, z, w)?;
        ratio_error = ratio_error.max((r + z * z * z).norm());
    }

    let passed = max_defect <= FACTORIZATION_TOL && ratio_error <= RATIO_CLOSED_FORM_TOL;
    Ok((
        passed,
        json!({
            "tolerance": FACTORIZATION_TOL,
            "ratio_tolerance": RATIO_CLOSED_FORM_TOL,
            "tuples_per_combo": 200,
            "seed": TUPLE_SEED,
            "combos": combos,
            "max_defect": max_defect,
            "ratio_closed_form_error": ratio_error,
        }),
    ))
}

// 8. Boundary dichotomy: quotients with zero-free denominators settle along
//    every radius; the lacunary gap series settles along almost none while
//    staying norm-bounded.
fn boundary_dichotomy() -> LibResult<(bool, Value)> {
    const DEPTH: u32 = 30;
    const ANGLES: usize = 64;
    const GAP_TERMS: usize = 26;

    let quotients: [(&[f64], &[f64]); 5] = [
        (&[1.0], &[1.0, -0.5]),
        (&[1.0, 1.0], &[1.0, 0.0, 0.3]),
        (&[1.0, -1.0, 0.5], &[1.0, -0.2, 0.0, 0.1]),
        (&[0.5], &[1.0, 0.0, -0.16]),
        (&[0.0, 0.0, 1.0], &[1.0, 0.4]),
    ];

    let mut all_converge = true;
    let mut all_zero_free = true;
    let mut max_quotient_osc = 0.0f64;
    for (g, p) in quotients {
        let q = SmirnovQuotient::new(
            PowerSeries::from_real_coeffs(g)?,
            PowerSeries::from_real_coeffs(p)?,
        )?;
        all_zero_free &= q.denominator_zero_free();
        for j in 0..ANGLES {
            let theta = std::f64::consts::TAU * j as f64 / ANGLES as f64;
            let report = radial_probe(|z| q.eval(z), theta, DEPTH)?;
            max_quotient_osc = max_quotient_osc.max(report.decisive_oscillation);
            if report.verdict != ProbeVerdict::Converges {
                all_converge = false;
            }
        }
    }

    let mut noisy_angles = 0usize;
    for j in 0..ANGLES {
        let theta = std::f64::consts::TAU * j as f64 / ANGLES as f64;
        let report = radial_probe(|z| gap_series_eval(GAP_TERMS, z), theta, DEPTH)?;
        if report.decisive_oscillation > GAP_OSC_FLOOR {
            noisy_angles += 1;
        }
    }
    let gap_norm_sq = gap_series_norm_sq(0.0, GAP_TERMS)?;

    let passed = all_converge
        && all_zero_free
        && max_quotient_osc < OSC_TOL
        && noisy_angles >= ANGLES / 2
        && gap_norm_sq <= 2.0;
    Ok((
        passed,
        json!({
            "osc_tolerance": OSC_TOL,
            "gap_osc_floor": GAP_OSC_FLOOR,
            "depth": DEPTH,
            "angles": ANGLES,
            "quotients": quotients.len(),
            "all_denominators_zero_free": all_zero_free,
            "all_quotients_converge": all_converge,
            "max_quotient_oscillation": max_quotient_osc,
            "gap_terms": GAP_TERMS,
            "gap_noisy_angles": noisy_angles,
            "gap_norm_sq": gap_norm_sq,
        }),
    ))
}

// 9. Cyclicity residual sanity on three hand-picked multipliers.
fn cyclicity_sanity() -> LibResult<(bool, Value)> {
    const TRUNCATION: usize = 250;
    const BUFFER: usize = 50;
    let space = BergmanSpaceModel::new(0.0, TRUNCATION)?;

    // psi = 1: the constant is trivially reachable
    let phi_a = DiskSymbol::from(MoebiusMap::new(Complex64::ONE, c(0.3, 0.0))?);
    let ones = cyclicity_residual_probe(
        &PowerSeries::one(),
        &space,
        &phi_a,
        &[0, 10, 20, 30],
        BUFFER,
    )?;
    let ones_max = ones
        .residuals
        .iter()
        .map(|r| r.residual)
        .fold(0.0f64, f64::max);

    // psi = z with phi(z) = -z: multiples of z never touch the constants
    let phi_0 = DiskSymbol::from(MoebiusMap::new(Complex64::ONE, Complex64::ZERO)?);
    let degrees: Vec<usize> = (0..=40).collect();
    let shift = cyclicity_residual_probe(
        &PowerSeries::monomial(1),
        &space,
        &phi_0,
        &degrees,
        BUFFER,
    )?;
    let shift_min = shift
        .residuals
        .iter()
        .map(|r| r.residual)
        .fold(f64::INFINITY, f64::min);

    // psi = 1 - 0.5 z, zero-free on the closed disk: residuals drain away
    let cyc_degrees: Vec<usize> = (0..=30).step_by(3).collect();
    let cyclic = cyclicity_residual_probe(
        &PowerSeries::from_real_coeffs(&[1.0, -0.5])?,
        &space,
        &phi_a,
        &cyc_degrees,
        BUFFER,
    )?;
    // strict decrease is demanded while residuals are resolvable; once they
    // sink to the noise floor of the subtracted norm they only have to stay
    // there
    let strictly_decreasing = cyclic.residuals.windows(2).all(|w| {
        w[1].residual < w[0].residual
            || (w[0].residual <= RESIDUAL_ZERO_TOL && w[1].residual <= RESIDUAL_ZERO_TOL)
    });
    let final_residual = cyclic.residuals.last().map(|r| r.residual).unwrap_or(f64::NAN);

    let passed = !ones.inconclusive
        && !shift.inconclusive
        && !cyclic.inconclusive
        && ones_max <= RESIDUAL_ZERO_TOL
        && shift_min >= SHIFT_RESIDUAL_FLOOR
        && strictly_decreasing
        && final_residual < CYCLIC_RESIDUAL_CEIL;
    Ok((
        passed,
        json!({
            "n_work": TRUNCATION - BUFFER,
            "residual_zero_tolerance": RESIDUAL_ZERO_TOL,
            "shift_floor": SHIFT_RESIDUAL_FLOOR,
            "cyclic_ceiling": CYCLIC_RESIDUAL_CEIL,
            "constant_max_residual": ones_max,
            "shift_min_residual": shift_min,
            "shift_excluded_components": shift.excluded_components,
            "cyclic_strictly_decreasing": strictly_decreasing,
            "cyclic_final_residual": final_residual,
            "cyclic_residuals": cyclic.residuals,
        }),
    ))
}

// 10. Norm ratios under the defect square root stay in a narrow band across
//     degrees.
fn range_mapping_stability() -> LibResult<(bool, Value)> {
    const MAX_DEGREE: usize = 50;
    const BUFFER: usize = 40;
    let space = BergmanSpaceModel::new(1.0, MAX_DEGREE + BUFFER)?;
    let phi = DiskSymbol::from(MoebiusMap::new(Complex64::ONE, c(0.4, 0.0))?);
    let mut rng = ChaCha8Rng::seed_from_u64(RANGE_SEED);
    let samples: Vec<PowerSeries> = (0..100)
        .map(|_| {
            let deg = rng.random_range(0..=MAX_DEGREE);
            let mut coeffs: Vec<Complex64> = (0..=deg)
                .map(|_| c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
                .collect();
            let lead = coeffs.last_mut().expect("degree + 1 coefficients");
            if lead.norm() < 0.3 {
                *lead += c(0.5, 0.5);
            }
            PowerSeries::from_coeffs(coeffs).expect("finite coefficients")
        })
        .collect();
    let report = subbergman::operator::range_mapping_report(&space, &phi, &samples, BUFFER)?;
    let all_finite = report.samples.iter().all(|s| s.ratio.is_finite());
    let passed = all_finite && report.bucket_spread < BUCKET_SPREAD_CEIL;
    Ok((
        passed,
        json!({
            "spread_ceiling": BUCKET_SPREAD_CEIL,
            "samples": report.samples.len(),
            "max_degree": MAX_DEGREE,
            "seed": RANGE_SEED,
            "n_work": report.n_work,
            "min_ratio": report.min_ratio,
            "max_ratio": report.max_ratio,
            "bucket_spread": report.bucket_spread,
            "all_finite": all_finite,
        }),
    ))
}

// 11. Re-run every seeded criterion and insist the payload bytes match.
fn determinism() -> LibResult<(bool, Value)> {
    let mut entries = Vec::new();
    let mut all_identical = true;
    for &id in &SEEDED {
        let first = run_criterion(id);
        let second = run_criterion(id);
        let identical = first.passed == second.passed
            && serde_json::to_string(&first.detail).expect("detail serializes")
                == serde_json::to_string(&second.detail).expect("detail serializes");
        all_identical &= identical;
        entries.push(json!({ "id": id, "identical": identical }));
    }
    Ok((all_identical, json!({ "reruns": entries })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_rejects_out_of_range_ids() {
        assert!(run_suite(Some(&[0])).is_err());
        assert!(run_suite(Some(&[12])).is_err());
    }

    #[test]
    fn unknown_criterion_reports_an_error_detail() {
        let report = run_criterion(99);
        assert!(!report.passed);
        assert!(report.detail["error"].as_str().unwrap().contains("99"));
    }

    #[test]
    fn names_are_stable() {
        assert_eq!(criterion_name(1), "kernel-series-consistency");
        assert_eq!(criterion_name(11), "determinism");
    }
}
