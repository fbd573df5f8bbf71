//! Dispatch: turns a `JobSpec` into a payload object and an optional value
//! table. All numeric work happens in the library; this module only wires
//! parameters, samples seeded points, and shapes reports.

use crate::job::JobSpec;
use crate::report::{cell, ValueTable};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use subbergman::analytic::{BlaschkeProduct, DiskSymbol, MoebiusMap, PowerSeries, RationalFn};
use subbergman::bergman::{kernel_series_oracle, BergmanSpaceModel, KernelSpec};
use subbergman::boundary::{
    cyclicity_residual_probe, doublestar_factorization_check, gap_series_eval, radial_probe,
    stolz_probe, SmirnovQuotient,
};
use subbergman::operator::{
    adjoint, apply_defect, toeplitz_matrix_for, BlaschkeAdjointExplicit, DefectActionExplicit,
};
use subbergman::pick::{cnp_oneminus_test, cnp_witness_search};

#[derive(Debug)]
pub enum RunError {
    /// Bad parameters; exit status 1.
    Validation(String),
    /// The library detected an internal numerical-contract breach
    /// (for example a defect eigenvalue far below zero); exit status 2.
    Contract(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Validation(m) => write!(f, "{m}"),
            RunError::Contract(m) => write!(f, "{m}"),
        }
    }
}

impl From<subbergman::Error> for RunError {
    fn from(e: subbergman::Error) -> Self {
        if e.is_numerical_contract_violation() {
            RunError::Contract(e.to_string())
        } else {
            RunError::Validation(e.to_string())
        }
    }
}

#[derive(Debug)]
pub struct RunOutput {
    pub payload: serde_json::Value,
    pub table: Option<ValueTable>,
}

fn to_value<T: Serialize>(payload: &T) -> serde_json::Value {
    serde_json::to_value(payload).expect("payload serializes")
}

fn invalid(msg: impl Into<String>) -> RunError {
    RunError::Validation(msg.into())
}

/// Uniform draw from the closed disk of the given radius (area measure).
pub fn seeded_disk_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, theta)
}

/// Draw until the point keeps `margin` away from every excluded center.
pub fn seeded_disk_point_avoiding(
    rng: &mut impl Rng,
    radius: f64,
    excluded: &[Complex64],
    margin: f64,
) -> Complex64 {
    loop {
        let z = seeded_disk_point(rng, radius);
        if excluded.iter().all(|c| (z - c).norm() >= margin) {
            return z;
        }
    }
}

fn resolve_kernel(
    s: Option<f64>,
    alpha: Option<f64>,
    symbol: Option<&DiskSymbol>,
) -> Result<KernelSpec, RunError> {
    match (s, alpha, symbol) {
        (Some(s), None, None) => Ok(KernelSpec::generalized(s)?),
        (None, Some(alpha), Some(symbol)) => Ok(KernelSpec::sub_bergman(alpha, symbol.clone())?),
        (Some(_), _, _) => Err(invalid(
            "give either s (generalized kernel) or alpha with symbol (sub-Bergman), not both",
        )),
        _ => Err(invalid(
            "kernel underspecified: need s, or alpha together with symbol",
        )),
    }
}

fn series_from(coeffs: &[Complex64], what: &str) -> Result<PowerSeries, RunError> {
    if coeffs.is_empty() {
        return Err(invalid(format!("{what}: empty coefficient list")));
    }
    Ok(PowerSeries::from_coeffs(coeffs.to_vec())?)
}

#[derive(Serialize)]
struct SeriesCheck {
    #[serde(with = "subbergman::serde_complex")]
    value: Complex64,
    tail_bound: f64,
    terms: usize,
    difference: f64,
}

#[derive(Serialize)]
struct KernelEvalPayload {
    #[serde(with = "subbergman::serde_complex")]
    value: Complex64,
    kernel: KernelSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    series_check: Option<SeriesCheck>,
}

fn run_kernel_eval(
    s: Option<f64>,
    alpha: Option<f64>,
    symbol: Option<&DiskSymbol>,
    z: Complex64,
    w: Complex64,
    series_terms: usize,
) -> Result<RunOutput, RunError> {
    let kernel = resolve_kernel(s, alpha, symbol)?;
    let value = kernel.eval(z, w)?;
    let series_check = match (&kernel, s) {
        (KernelSpec::Generalized { .. }, Some(s)) => {
            let oracle = kernel_series_oracle(s, z, w, series_terms)?;
            Some(SeriesCheck {
                value: oracle.value,
                tail_bound: oracle.tail_bound,
                terms: oracle.terms,
                difference: (oracle.value - value).norm(),
            })
        }
        _ => None,
    };
    Ok(RunOutput {
        payload: to_value(&KernelEvalPayload { value, kernel, series_check }),
        table: None,
    })
}

fn run_defect_apply(
    alpha: f64,
    symbol: &DiskSymbol,
    input: &[Complex64],
    n_trust: Option<usize>,
    buffer: usize,
    use_sqrt: bool,
) -> Result<RunOutput, RunError> {
    let input = series_from(input, "input")?;
    let n_trust = n_trust.unwrap_or_else(|| input.degree().unwrap_or(0));
    let space = BergmanSpaceModel::new(alpha, n_trust + buffer)?;
    let result = apply_defect(&space, symbol, &input, n_trust, buffer, use_sqrt)?;
    let mut table = ValueTable::new(&["degree", "coeff_re", "coeff_im"]);
    for (k, c) in result.output.coeffs().iter().enumerate() {
        table.push_row(vec![k.to_string(), cell(c.re), cell(c.im)]);
    }
    Ok(RunOutput { payload: to_value(&result), table: Some(table) })
}

#[derive(Serialize)]
struct DualPathPayload {
    alpha: f64,
    truncation: usize,
    n_points: usize,
    seed: u64,
    tolerance: f64,
    max_error: f64,
    #[serde(with = "subbergman::serde_complex")]
    worst_point: Complex64,
    passed: bool,
    /// Deviation from a closed-form reference when one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_max_error: Option<f64>,
}

fn run_verify_lemma(
    f: &[Complex64],
    xi: Complex64,
    zeros: &[Complex64],
    truncation: usize,
    n_points: usize,
    seed: u64,
    tolerance: f64,
) -> Result<RunOutput, RunError> {
    let f = series_from(f, "f")?;
    if zeros.is_empty() {
        return Err(invalid("zeros: at least one Blaschke zero required"));
    }
    if n_points == 0 {
        return Err(invalid("n_points must be positive"));
    }
    let b = BlaschkeProduct::new(xi, zeros.to_vec())?;
    let deg_f = f.degree().unwrap_or(0);
    if deg_f > truncation {
        return Err(invalid(format!(
            "deg f = {deg_f} exceeds the truncation {truncation}"
        )));
    }
    let space = BergmanSpaceModel::new(0.0, truncation)?;
    let matrix = adjoint(&toeplitz_matrix_for(&space, &DiskSymbol::from(b.clone()), truncation)?);
    let image = matrix.apply(&space, &f)?;
    let explicit = BlaschkeAdjointExplicit::new(&f, &b)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = ValueTable::new(&["index", "z_re", "z_im", "error"]);
    let mut max_error = 0.0f64;
    let mut worst_point = Complex64::ZERO;
    for i in 0..n_points {
        let z = seeded_disk_point_avoiding(&mut rng, 0.7, b.zeros(), 0.05);
        let err = (explicit.eval(z)? - image.eval(z)).norm();
        if err > max_error {
            max_error = err;
            worst_point = z;
        }
        table.push_row(vec![i.to_string(), cell(z.re), cell(z.im), cell(err)]);
    }
    let payload = DualPathPayload {
        alpha: 0.0,
        truncation,
        n_points,
        seed,
        tolerance,
        max_error,
        worst_point,
        passed: max_error <= tolerance,
        reference_max_error: None,
    };
    Ok(RunOutput { payload: to_value(&payload), table: Some(table) })
}

#[allow(clippy::too_many_arguments)]
fn run_verify_star(
    gamma: &[Complex64],
    psi: &[Complex64],
    a: Complex64,
    xi: Complex64,
    expansion_degree: usize,
    truncation: usize,
    buffer: usize,
    n_points: usize,
    seed: u64,
    tolerance: f64,
) -> Result<RunOutput, RunError> {
    let gamma = series_from(gamma, "gamma")?;
    let psi = series_from(psi, "psi")?;
    if n_points == 0 {
        return Err(invalid("n_points must be positive"));
    }
    if truncation < expansion_degree + buffer {
        return Err(invalid(format!(
            "truncation {truncation} must cover expansion degree {expansion_degree} plus buffer {buffer}"
        )));
    }
    let phi = MoebiusMap::new(xi, a)?;
    let explicit = DefectActionExplicit::new(&gamma, &psi, &phi, expansion_degree)?;
    let quotient = RationalFn::new(gamma.clone(), psi.clone(), 0.9)?.series(expansion_degree);
    let space = BergmanSpaceModel::new(0.0, truncation)?;
    let matrix_route = apply_defect(
        &space,
        &DiskSymbol::from(phi.clone()),
        &quotient,
        expansion_degree,
        buffer,
        false,
    )?;

    let constant_case = gamma.degree() == Some(0)
        && psi.degree() == Some(0)
        && (gamma.coeff(0) - psi.coeff(0)).norm() < 1e-15;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = ValueTable::new(&["index", "z_re", "z_im", "error"]);
    let mut max_error = 0.0f64;
    let mut worst_point = Complex64::ZERO;
    let mut reference_max_error: Option<f64> = None;
    for i in 0..n_points {
        let z = seeded_disk_point(&mut rng, 0.6);
        let lhs = explicit.eval(z)?;
        let err = (lhs - matrix_route.output.eval(z)).norm();
        if err > max_error {
            max_error = err;
            worst_point = z;
        }
        if constant_case {
            // (I - T_phi T_phi^*) c = c (1 - |a|^2) / (1 - conj(a) z)
            let reference = gamma.coeff(0) * (1.0 - a.norm_sqr())
                / (Complex64::ONE - a.conj() * z);
            let dev = (lhs - reference).norm();
            reference_max_error = Some(reference_max_error.unwrap_or(0.0).max(dev));
        }
        table.push_row(vec![i.to_string(), cell(z.re), cell(z.im), cell(err)]);
    }
    let payload = DualPathPayload {
        alpha: 0.0,
        truncation,
        n_points,
        seed,
        tolerance,
        max_error,
        worst_point,
        passed: max_error <= tolerance,
        reference_max_error,
    };
    Ok(RunOutput { payload: to_value(&payload), table: Some(table) })
}

fn run_pick_test(
    s: Option<f64>,
    alpha: Option<f64>,
    symbol: Option<&DiskSymbol>,
    points: &[Complex64],
    z0: Complex64,
    tolerance: f64,
) -> Result<RunOutput, RunError> {
    let kernel = resolve_kernel(s, alpha, symbol)?;
    let report = cnp_oneminus_test(&kernel, points, z0, tolerance)?;
    Ok(RunOutput { payload: to_value(&report), table: None })
}

fn run_witness_search(
    alpha: f64,
    symbol: &DiskSymbol,
    n_points: usize,
    trials: usize,
    seed: u64,
    z0: Complex64,
    tolerance: f64,
) -> Result<RunOutput, RunError> {
    let kernel = KernelSpec::sub_bergman(alpha, symbol.clone())?;
    let report = cnp_witness_search(&kernel, n_points, trials as u64, seed, z0, tolerance)?;
    Ok(RunOutput { payload: to_value(&report), table: None })
}

#[derive(Serialize)]
struct BoundaryProbePayload {
    #[serde(flatten)]
    report: subbergman::boundary::BoundaryProbeReport,
    /// Set for quotient probes: whether the denominator is certified
    /// zero-free in the closed disk.
    #[serde(skip_serializing_if = "Option::is_none")]
    denominator_zero_free: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap_terms: Option<usize>,
}

fn run_boundary_probe(
    gamma: Option<&[Complex64]>,
    psi: Option<&[Complex64]>,
    gap_terms: Option<usize>,
    theta: f64,
    aperture: Option<f64>,
    depth: usize,
) -> Result<RunOutput, RunError> {
    let depth = u32::try_from(depth).map_err(|_| invalid("depth out of range"))?;
    let (report, zero_free) = match (gamma, psi, gap_terms) {
        (Some(gamma), Some(psi), None) => {
            let q = SmirnovQuotient::new(
                series_from(gamma, "gamma")?,
                series_from(psi, "psi")?,
            )?;
            let zero_free = q.denominator_zero_free();
            let eval = |z: Complex64| q.eval(z);
            let report = match aperture {
                Some(beta) => stolz_probe(eval, theta, beta, depth)?,
                None => radial_probe(eval, theta, depth)?,
            };
            (report, Some(zero_free))
        }
        (None, None, Some(terms)) => {
            let eval = |z: Complex64| gap_series_eval(terms, z);
            let report = match aperture {
                Some(beta) => stolz_probe(eval, theta, beta, depth)?,
                None => radial_probe(eval, theta, depth)?,
            };
            (report, None)
        }
        _ => {
            return Err(invalid(
                "give either gamma and psi (a quotient) or gap_terms (the lacunary series)",
            ))
        }
    };

    let mut table = ValueTable::new(&["curve", "step", "z_re", "z_im", "value_re", "value_im"]);
    for curve in &report.curves {
        for (k, (p, v)) in curve.points.iter().zip(&curve.values).enumerate() {
            table.push_row(vec![
                curve.label.clone(),
                (k + 1).to_string(),
                cell(p.re),
                cell(p.im),
                cell(v.re),
                cell(v.im),
            ]);
        }
    }
    let payload = BoundaryProbePayload {
        report,
        denominator_zero_free: zero_free,
        gap_terms,
    };
    Ok(RunOutput { payload: to_value(&payload), table: Some(table) })
}

fn run_cyclicity(
    psi: &[Complex64],
    alpha: f64,
    a: Complex64,
    xi: Complex64,
    degrees: &[usize],
    truncation: usize,
    buffer: usize,
) -> Result<RunOutput, RunError> {
    let psi = series_from(psi, "psi")?;
    let phi = DiskSymbol::from(MoebiusMap::new(xi, a)?);
    let space = BergmanSpaceModel::new(alpha, truncation)?;
    let report = cyclicity_residual_probe(&psi, &space, &phi, degrees, buffer)?;
    let mut table = ValueTable::new(&["degree", "residual"]);
    for r in &report.residuals {
        table.push_row(vec![r.degree.to_string(), cell(r.residual)]);
    }
    Ok(RunOutput { payload: to_value(&report), table: Some(table) })
}

#[derive(Serialize)]
struct DoublestarPayload {
    #[serde(flatten)]
    report: subbergman::boundary::FactorizationReport,
    #[serde(with = "subbergman::serde_complex")]
    a: Complex64,
    #[serde(with = "subbergman::serde_complex")]
    xi: Complex64,
    seed: u64,
}

fn run_doublestar(
    alpha: f64,
    a: Complex64,
    xi: Complex64,
    tuple_count: usize,
    seed: u64,
) -> Result<RunOutput, RunError> {
    if tuple_count == 0 {
        return Err(invalid("tuple_count must be positive"));
    }
    let phi = MoebiusMap::new(xi, a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tuples: Vec<[Complex64; 4]> = (0..tuple_count)
        .map(|_| {
            let z1 = seeded_disk_point_avoiding(&mut rng, 0.6, &[a], 0.1);
            let w1 = seeded_disk_point(&mut rng, 0.6);
            let z2 = seeded_disk_point_avoiding(&mut rng, 0.6, &[a], 0.1);
            let w2 = seeded_disk_point(&mut rng, 0.6);
            [z1, w1, z2, w2]
        })
        .collect();
    let report = doublestar_factorization_check(alpha, &phi, &tuples)?;
    let mut table = ValueTable::new(&["index", "defect"]);
    for (i, d) in report.defects.iter().enumerate() {
        table.push_row(vec![i.to_string(), cell(*d)]);
    }
    let payload = DoublestarPayload { report, a, xi, seed };
    Ok(RunOutput { payload: to_value(&payload), table: Some(table) })
}

fn run_acceptance(only: Option<&[usize]>) -> Result<RunOutput, RunError> {
    let suite = crate::acceptance::run_suite(only)?;
    let mut table = ValueTable::new(&["id", "name", "passed"]);
    for c in &suite.criteria {
        table.push_row(vec![c.id.to_string(), c.name.to_string(), c.passed.to_string()]);
    }
    Ok(RunOutput { payload: to_value(&suite), table: Some(table) })
}

pub fn run(job: &JobSpec) -> Result<RunOutput, RunError> {
    match job {
        JobSpec::KernelEval { s, alpha, symbol, z, w, series_terms } => {
            run_kernel_eval(*s, *alpha, symbol.as_ref(), *z, *w, *series_terms)
        }
        JobSpec::DefectApply { alpha, symbol, input, n_trust, buffer, use_sqrt } => {
            run_defect_apply(*alpha, symbol, input, *n_trust, *buffer, *use_sqrt)
        }
        JobSpec::VerifyLemma { f, xi, zeros, truncation, n_points, seed, tolerance } => {
            run_verify_lemma(f, *xi, zeros, *truncation, *n_points, *seed, *tolerance)
        }
        JobSpec::VerifyStar {
            gamma,
            psi,
            a,
            xi,
            expansion_degree,
            truncation,
            buffer,
            n_points,
            seed,
            tolerance,
        } => run_verify_star(
            gamma,
            psi,
            *a,
            *xi,
            *expansion_degree,
            *truncation,
            *buffer,
            *n_points,
            *seed,
            *tolerance,
        ),
        JobSpec::PickTest { s, alpha, symbol, points, z0, tolerance } => {
            run_pick_test(*s, *alpha, symbol.as_ref(), points, *z0, *tolerance)
        }
        JobSpec::WitnessSearch { alpha, symbol, n_points, trials, seed, z0, tolerance } => {
            run_witness_search(*alpha, symbol, *n_points, *trials, *seed, *z0, *tolerance)
        }
        JobSpec::BoundaryProbe { gamma, psi, gap_terms, theta, aperture, depth } => {
            run_boundary_probe(
                gamma.as_deref(),
                psi.as_deref(),
                *gap_terms,
                *theta,
                *aperture,
                *depth,
            )
        }
        JobSpec::Cyclicity { psi, alpha, a, xi, degrees, truncation, buffer } => {
            run_cyclicity(psi, *alpha, *a, *xi, degrees, *truncation, *buffer)
        }
        JobSpec::DoublestarCheck { alpha, a, xi, tuple_count, seed } => {
            run_doublestar(*alpha, *a, *xi, *tuple_count, *seed)
        }
        JobSpec::Acceptance { only } => run_acceptance(only.as_deref()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_eval_matches_the_worked_value() {
        let job: JobSpec =
            serde_json::from_str(r#"{"command":"kernel-eval","s":2,"z":0.5,"w":0.5}"#).unwrap();
        let out = run(&job).unwrap();
        let value = out.payload["value"]["re"].as_f64().unwrap();
        assert!((value - 16.0 / 9.0).abs() < 1e-12);
        let diff = out.payload["series_check"]["difference"].as_f64().unwrap();
        assert!(diff < 1e-9);
    }

    #[test]
    fn pick_test_flags_the_bergman_pair() {
        let job: JobSpec = serde_json::from_str(
            r#"{"command":"pick-test","s":2,"points":[0.5,-0.5]}"#,
        )
        .unwrap();
        let out = run(&job).unwrap();
        assert_eq!(out.payload["verdict"], "NOT_PSD");
    }

    #[test]
    fn verify_star_constant_case_hits_the_closed_form() {
        let job: JobSpec = serde_json::from_str(
            r#"{"command":"verify-star","a":0.5,"xi":1,"gamma":[1],"psi":[1],"seed":4}"#,
        )
        .unwrap();
        let out = run(&job).unwrap();
        assert_eq!(out.payload["passed"], true);
        let reference = out.payload["reference_max_error"].as_f64().unwrap();
        assert!(reference < 1e-10, "closed-form deviation {reference:e}");
    }

    #[test]
    fn underspecified_kernel_is_a_validation_error() {
        let job: JobSpec =
            serde_json::from_str(r#"{"command":"kernel-eval","z":0.5,"w":0.5}"#).unwrap();
        match run(&job) {
            Err(RunError::Validation(_)) => {}
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn boundary_probe_needs_exactly_one_source() {
        let job: JobSpec = serde_json::from_str(
            r#"{"command":"boundary-probe","theta":0.0,"gap_terms":10,"gamma":[1],"psi":[1,-0.5]}"#,
        )
        .unwrap();
        assert!(matches!(run(&job), Err(RunError::Validation(_))));

        let job: JobSpec = serde_json::from_str(
            r#"{"command":"boundary-probe","theta":0.0,"gap_terms":10,"depth":12}"#,
        )
        .unwrap();
        let out = run(&job).unwrap();
        assert_eq!(out.payload["depth"], 12);
        assert!(out.table.is_some());
    }

    #[test]
    fn defect_apply_reports_trust_and_tail() {
        let job: JobSpec = serde_json::from_str(
            r#"{"command":"defect-apply","alpha":0.0,
                "symbol":{"type":"moebius","xi":{"re":1.0,"im":0.0},"a":{"re":0.5,"im":0.0}},
                "input":[1],"n_trust":60,"buffer":20}"#,
        )
        .unwrap();
        let out = run(&job).unwrap();
        assert_eq!(out.payload["n_work"], 80);
        assert_eq!(out.payload["n_trust"], 60);
        // (I - T T^*) 1 = 0.75 / (1 - 0.5 z): coefficients 0.75 * 0.5^k
        let c0 = out.payload["output"]["coeffs"][0]["re"].as_f64().unwrap();
        assert!((c0 - 0.75).abs() < 1e-12);
    }
}
