//! Flag parsing and exit-code policy. Flags are translated into the same
//! `JobSpec` a job file would contain, so both entry points share one code
//! path from there on.
//!
//! Exit codes: 0 for completed runs (including INCONCLUSIVE verdicts),
//! 1 for validation or usage errors, 2 when the library reports an internal
//! numerical-contract violation.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::path::PathBuf;
use std::time::Instant;
use subbergman::analytic::{BlaschkeProduct, DiskSymbol, MoebiusMap};
use subbergman_cli::job::JobSpec;
use subbergman_cli::report::{write_text, ReportEnvelope};
use subbergman_cli::run::{self, RunError};

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || format!("expected RE or RE,IM, got {s:?}");
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.parse().map_err(|_| bad())?,
            im.parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

/// Semicolon-separated complex entries, each RE or RE,IM.
#[derive(Debug, Clone)]
struct CxList(Vec<Complex64>);

fn parse_complex_list(s: &str) -> Result<CxList, String> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_complex)
        .collect::<Result<Vec<_>, _>>()
        .map(CxList)
}

#[derive(Debug, Clone)]
struct UsizeList(Vec<usize>);

fn parse_usize_list(s: &str) -> Result<UsizeList, String> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|_| format!("bad integer {p:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(UsizeList)
}

#[derive(Args, Debug, Clone)]
struct IoArgs {
    /// Job file (JSON). The canonical input form; parameter flags cannot be
    /// combined with it.
    #[arg(long)]
    job: Option<PathBuf>,
    /// Write the report envelope here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the command's flat value table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Symbol sugar: `--a` (with optional `--xi`) describes a Moebius symbol,
/// `--zeros` (with optional `--xi`) a Blaschke product.
#[derive(Args, Debug, Clone)]
struct SymbolArgs {
    /// Moebius parameter a as RE,IM.
    #[arg(long, value_parser = parse_complex)]
    a: Option<Complex64>,
    /// Unimodular rotation xi as RE,IM; defaults to 1.
    #[arg(long, value_parser = parse_complex)]
    xi: Option<Complex64>,
    /// Blaschke zeros, semicolon-separated RE,IM entries.
    #[arg(long, value_parser = parse_complex_list)]
    zeros: Option<CxList>,
}

impl SymbolArgs {
    fn given(&self) -> bool {
        self.a.is_some() || self.xi.is_some() || self.zeros.is_some()
    }

    fn build(&self) -> Result<Option<DiskSymbol>, String> {
        let xi = self.xi.unwrap_or(Complex64::ONE);
        match (self.a, &self.zeros) {
            (Some(a), None) => Ok(Some(DiskSymbol::from(
                MoebiusMap::new(xi, a).map_err(|e| e.to_string())?,
            ))),
            (None, Some(CxList(zeros))) => Ok(Some(DiskSymbol::from(
                BlaschkeProduct::new(xi, zeros.clone()).map_err(|e| e.to_string())?,
            ))),
            (None, None) => Ok(None),
            (Some(_), Some(_)) => Err("give --a (Moebius) or --zeros (Blaschke), not both".into()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "subbergman",
    version,
    about = "Weighted Bergman space operator probes: kernels, defects, positivity tests, boundary diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a reproducing kernel at a point pair.
    KernelEval(KernelEvalArgs),
    /// Apply the defect operator to a polynomial.
    DefectApply(DefectApplyArgs),
    /// Explicit Blaschke adjoint vs the matrix route at seeded points.
    VerifyLemma(VerifyLemmaArgs),
    /// Explicit defect action on a quotient vs the matrix route.
    VerifyStar(VerifyStarArgs),
    /// Positivity test of the normalized one-minus-reciprocal matrix.
    PickTest(PickTestArgs),
    /// Seeded search for a point set breaking positivity.
    WitnessSearch(WitnessSearchArgs),
    /// Radial or Stolz approach trace toward a boundary point.
    BoundaryProbe(BoundaryProbeArgs),
    /// Residual distances from 1 to psi times polynomials.
    Cyclicity(CyclicityArgs),
    /// Cross-ratio determinants of the rank-one kernel ratio.
    DoublestarCheck(DoublestarArgs),
    /// Run the acceptance suite.
    Acceptance(AcceptanceArgs),
}

#[derive(Args, Debug)]
struct KernelEvalArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Generalized kernel exponent (1 - z conj(w))^(-s).
    #[arg(long)]
    s: Option<f64>,
    /// Sub-Bergman weight; requires a symbol.
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    symbol: SymbolArgs,
    #[arg(long, value_parser = parse_complex)]
    z: Option<Complex64>,
    #[arg(long, value_parser = parse_complex)]
    w: Option<Complex64>,
    /// Series-oracle term count for the cross check.
    #[arg(long)]
    terms: Option<usize>,
}

#[derive(Args, Debug)]
struct DefectApplyArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    symbol: SymbolArgs,
    /// Input polynomial coefficients c0;c1;...
    #[arg(long, value_parser = parse_complex_list)]
    input: Option<CxList>,
    #[arg(long)]
    n_trust: Option<usize>,
    #[arg(long)]
    buffer: Option<usize>,
    /// Apply the defect square root instead of the defect itself.
    #[arg(long)]
    use_sqrt: bool,
}

#[derive(Args, Debug)]
struct VerifyLemmaArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Polynomial coefficients of f.
    #[arg(long, value_parser = parse_complex_list)]
    f: Option<CxList>,
    #[arg(long, value_parser = parse_complex)]
    xi: Option<Complex64>,
    /// Blaschke zeros.
    #[arg(long, value_parser = parse_complex_list)]
    zeros: Option<CxList>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyStarArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, value_parser = parse_complex_list)]
    gamma: Option<CxList>,
    #[arg(long, value_parser = parse_complex_list)]
    psi: Option<CxList>,
    #[arg(long, value_parser = parse_complex)]
    a: Option<Complex64>,
    #[arg(long, value_parser = parse_complex)]
    xi: Option<Complex64>,
    #[arg(long)]
    expansion_degree: Option<usize>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    buffer: Option<usize>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct PickTestArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    symbol: SymbolArgs,
    /// Test points, semicolon-separated RE,IM entries.
    #[arg(long, value_parser = parse_complex_list)]
    points: Option<CxList>,
    #[arg(long, value_parser = parse_complex)]
    z0: Option<Complex64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct WitnessSearchArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    symbol: SymbolArgs,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = parse_complex)]
    z0: Option<Complex64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct BoundaryProbeArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, value_parser = parse_complex_list)]
    gamma: Option<CxList>,
    #[arg(long, value_parser = parse_complex_list)]
    psi: Option<CxList>,
    /// Probe the lacunary gap series with this many terms instead of a
    /// quotient.
    #[arg(long)]
    gap_terms: Option<usize>,
    /// Boundary angle theta.
    #[arg(long)]
    theta: Option<f64>,
    /// Stolz aperture; omit for a purely radial probe.
    #[arg(long)]
    aperture: Option<f64>,
    /// Dyadic approach depth.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args, Debug)]
struct CyclicityArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, value_parser = parse_complex_list)]
    psi: Option<CxList>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_parser = parse_complex)]
    a: Option<Complex64>,
    #[arg(long, value_parser = parse_complex)]
    xi: Option<Complex64>,
    /// Degrees to report, semicolon-separated.
    #[arg(long, value_parser = parse_usize_list)]
    degrees: Option<UsizeList>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    buffer: Option<usize>,
}

#[derive(Args, Debug)]
struct DoublestarArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_parser = parse_complex)]
    a: Option<Complex64>,
    #[arg(long, value_parser = parse_complex)]
    xi: Option<Complex64>,
    #[arg(long)]
    tuples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct AcceptanceArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Run only these criterion ids, semicolon-separated.
    #[arg(long, value_parser = parse_usize_list)]
    only: Option<UsizeList>,
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, String> {
    value.ok_or_else(|| format!("missing required flag {flag}"))
}

fn load_job(path: &PathBuf, expected: &str) -> Result<JobSpec, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read job file {}: {e}", path.display()))?;
    let job: JobSpec =
        serde_json::from_str(&text).map_err(|e| format!("bad job file: {e}"))?;
    if job.command_name() != expected {
        return Err(format!(
            "job file describes command {:?} but the {expected:?} subcommand was invoked",
            job.command_name()
        ));
    }
    Ok(job)
}

/// Either loads the job file or assembles a job from flags; mixing the two
/// is rejected so the echoed job is always the whole truth.
fn resolve<F>(
    io: &IoArgs,
    expected: &str,
    flags_given: bool,
    from_flags: F,
) -> Result<JobSpec, String>
where
    F: FnOnce() -> Result<JobSpec, String>,
{
    match &io.job {
        Some(path) => {
            if flags_given {
                return Err("--job cannot be combined with parameter flags".into());
            }
            load_job(path, expected)
        }
        None => from_flags(),
    }
}

impl Command {
    fn into_job(self) -> Result<(JobSpec, IoArgs), String> {
        match self {
            Command::KernelEval(a) => {
                let flags = a.s.is_some()
                    || a.alpha.is_some()
                    || a.symbol.given()
                    || a.z.is_some()
                    || a.w.is_some()
                    || a.terms.is_some();
                let job = resolve(&a.io, "kernel-eval", flags, || {
                    Ok(JobSpec::KernelEval {
                        s: a.s,
                        alpha: a.alpha,
                        symbol: a.symbol.build()?,
                        z: require(a.z, "--z")?,
                        w: require(a.w, "--w")?,
                        series_terms: a.terms.unwrap_or(120),
                    })
                })?;
                Ok((job, a.io))
            }
            Command::DefectApply(a) => {
                let flags = a.alpha.is_some()
                    || a.symbol.given()
                    || a.input.is_some()
                    || a.n_trust.is_some()
                    || a.buffer.is_some()
                    || a.use_sqrt;
                let job = resolve(&a.io, "defect-apply", flags, || {
                    let symbol = a
                        .symbol
                        .build()?
                        .ok_or("missing symbol: give --a or --zeros")?;
                    Ok(JobSpec::DefectApply {
                        alpha: require(a.alpha, "--alpha")?,
                        symbol,
                        input: require(a.input.clone(), "--input")?.0,
                        n_trust: a.n_trust,
                        buffer: a.buffer.unwrap_or(40),
                        use_sqrt: a.use_sqrt,
                    })
                })?;
                Ok((job, a.io))
            }
            Command::VerifyLemma(a) => {
                let flags = a.f.is_some()
                    || a.xi.is_some()
                    || a.zeros.is_some()
                    || a.truncation.is_some()
                    || a.n_points.is_some()
                    || a.seed.is_some()
                    || a.tol.is_some();
                let job = resolve(&a.io, "verify-lemma", flags, || {
                    Ok(JobSpec::VerifyLemma {
                        f: require(a.f.clone(), "--f")?.0,
                        xi: a.xi.unwrap_or(Complex64::ONE),
                        zeros: require(a.zeros.clone(), "--zeros")?.0,
                        truncation: a.truncation.unwrap_or(300),
                        n_points: a.n_points.unwrap_or(200),
                        seed: require(a.seed, "--seed")?,
                        tolerance: a.tol.unwrap_or(1e-8),
                    })
                })?;
                Ok((job, a.io))
            }
            Command::VerifyStar(a) => {
                let flags = a.gamma.is_some()
                    || a.psi.is_some()
                    || a.a.is_some()
                    || a.xi.is_some()
                    || a.expansion_degree.is_some()
                    || a.truncation.is_some()
                    || a.buffer.is_some()
                    || a.n_points.is_some()
                    || a.seed.is_some()
                    || a.tol.is_some();
                let job = resolve(&a.io, "verify-star", flags, || {
                    Ok(JobSpec::VerifyStar {
                        gamma: a.gamma.clone().map(|l| l.0).unwrap_or(vec![Complex64::ONE]),
                        psi: a.psi.clone().map(|l| l.0).unwrap_or(vec![Complex64::ONE]),
                        a: require(a.a, "--a")?,
                        xi: a.xi.unwrap_or(Complex64::ONE),
                        expansion_degree: a.expansion_degree.unwrap_or(300),
                        truncation: a.truncation.unwrap_or(360),
                        buffer: a.buffer.unwrap_or(60),
                        n_points: a.n_points.unwrap_or(100),
                        seed: require(a.seed, "--seed")?,
                        tolerance: a.tol.unwrap_or(1e-7),
                    })
                })?;
                Ok((job, a.io))
            }
            Command::PickTest(a) => {
                let flags = a.s.is_some()
                    || a.alpha.is_some()
                    || a.symbol.given()
                    || a.points.is_some()
                    || a.z0.is_some()
                    || a.tol.is_some();
                let job = resolve(&a.io, "pick-test", flags, || {
                    Ok(JobSpec::PickTest {
                        s: a.s,
                        alpha: a.alpha,
                        symbol: a.symbol.build()?,
                        points: require(a.points.clone(), "--points")?.0,
                        z0: a.z0.unwrap_or(Complex64::ZERO),
                        tolerance: a.tol.unwrap_or(subbergman::pick::DEFAULT_EIGEN_TOLERANCE),
                    })
                })?;
                Ok((job, a.io))
            }
            Command::WitnessSearch(a) => {
                let flags = a.alpha.is_some()
                    || a.symbol.given()
                    || a.n_points.is_some()
                    || a.trials.is_some()
                    || a.seed.is_some()
                    || a.z0.is_some()
                    || a.tol.is_some();
                let job = resolve(&a.io, "witness-search", flags, || {
                    let symbol = a
                        .symbol
                        .build()?
                        .ok_or("missing symbol: give --a or --zeros")?;
                    Ok(JobSpec::WitnessSearch {
                        alpha: require(a.alpha, "--alpha")?,
                        symbol,
                        n_points: a.n_points.unwrap_or(6),
                        trials: require(a.trials, "--trials")?,
                        seed: require(a.seed, "--seed")?,
                        z0: a.z0.unwrap_or(Complex64::ZERO),
                        tolerance: a.tol.unwrap_or(subbergman::pick::DEFAULT_EIGEN_TOLERANCE),
                    })
                })?;
                Ok((job, a.io))
            }
            Command::BoundaryProbe(a) => {
                let flags = a.gamma.is_some()
                    || a.psi.is_some()
                    || a.gap_terms.is_some()
                    || a.theta.is_some()
                    || a.aperture.is_some()
                    || a.depth.is_some();
                let job = resolve(&a.io, "boundary-probe", flags, || {
                    Ok(JobSpec::BoundaryProbe {
                        gamma: a.gamma.clone().map(|l| l.0),
                        psi: a.psi.clone().map(|l| l.0),
                        gap_terms: a.gap_terms,
                        theta: require(a.theta, "--theta")?,
                        aperture: a.aperture,
                        depth: a.depth.unwrap_or(30),
                    })
                })?;
                Ok((job, a.io))
            }
            Command::Cyclicity(a) => {
                let flags = a.psi.is_some()
                    || a.alpha.is_some()
                    || a.a.is_some()
                    || a.xi.is_some()
                    || a.degrees.is_some()
                    || a.truncation.is_some()
                    || a.buffer.is_some();
                let job = resolve(&a.io, "cyclicity", flags, || {
                    Ok(JobSpec::Cyclicity {
                        psi: require(a.psi.clone(), "--psi")?.0,
                        alpha: a.alpha.unwrap_or(0.0),
                        a: require(a.a, "--a")?,
                        xi: a.xi.unwrap_or(Complex64::ONE),
                        degrees: a
                            .degrees
                            .clone()
                            .map(|l| l.0)
                            .unwrap_or_else(|| (0..=40).step_by(5).collect()),
                        truncation: a.truncation.unwrap_or(250),
                        buffer: a.buffer.unwrap_or(50),
                    })
                })?;
                Ok((job, a.io))
            }
            Command::DoublestarCheck(a) => {
                let flags = a.alpha.is_some()
                    || a.a.is_some()
                    || a.xi.is_some()
                    || a.tuples.is_some()
                    || a.seed.is_some();
                let job = resolve(&a.io, "doublestar-check", flags, || {
                    Ok(JobSpec::DoublestarCheck {
                        alpha: require(a.alpha, "--alpha")?,
                        a: require(a.a, "--a")?,
                        xi: a.xi.unwrap_or(Complex64::ONE),
                        tuple_count: a.tuples.unwrap_or(200),
                        seed: require(a.seed, "--seed")?,
                    })
                })?;
                Ok((job, a.io))
            }
            Command::Acceptance(a) => {
                let flags = a.only.is_some();
                let job = resolve(&a.io, "acceptance", flags, || {
                    Ok(JobSpec::Acceptance { only: a.only.clone().map(|l| l.0) })
                })?;
                Ok((job, a.io))
            }
        }
    }
}

fn emit_error(kind: &str, message: &str) {
    eprintln!(
        "{}",
        serde_json::json!({ "error": { "kind": kind, "message": message } })
    );
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            emit_error("usage", &e.to_string());
            return 1;
        }
    };

    let (job, io) = match cli.command.into_job() {
        Ok(pair) => pair,
        Err(message) => {
            emit_error("validation", &message);
            return 1;
        }
    };

    let started = Instant::now();
    let output = match run::run(&job) {
        Ok(output) => output,
        Err(RunError::Validation(message)) => {
            emit_error("validation", &message);
            return 1;
        }
        Err(RunError::Contract(message)) => {
            emit_error("numerical-contract", &message);
            return 2;
        }
    };
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;

    if let Some(csv_path) = &io.csv {
        match &output.table {
            Some(table) => {
                if let Err(e) = write_text(Some(csv_path), &table.to_csv()) {
                    emit_error("io", &format!("writing {}: {e}", csv_path.display()));
                    return 1;
                }
            }
            None => {
                emit_error(
                    "validation",
                    &format!("command {:?} produces no value table", job.command_name()),
                );
                return 1;
            }
        }
    }

    let envelope = ReportEnvelope::new(job, output.payload, elapsed_ms);
    if let Err(e) = write_text(io.out.as_deref(), &envelope.to_json()) {
        emit_error("io", &format!("writing report: {e}"));
        return 1;
    }
    0
}

fn main() {
    std::process::exit(real_main());
}
