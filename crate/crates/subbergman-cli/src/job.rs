//! Job descriptions: the canonical, serializable form of a CLI invocation.
//! Command-line flags are sugar that gets translated into one of these
//! before anything runs, so a job file and a flag invocation that describe
//! the same parameters are literally the same job.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use subbergman::analytic::DiskSymbol;

/// Complex fields accept either a bare number (`0.5`) or an object
/// (`{"re": 0.5, "im": -0.25}`); they always serialize as the object form.
pub mod cx {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Flexible {
        Real(f64),
        Parts {
            re: f64,
            #[serde(default)]
            im: f64,
        },
    }

    impl From<Flexible> for Complex64 {
        fn from(f: Flexible) -> Self {
            match f {
                Flexible::Real(re) => Complex64::new(re, 0.0),
                Flexible::Parts { re, im } => Complex64::new(re, im),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Flexible::deserialize(d).map(Complex64::from)
    }

    pub fn serialize<S: Serializer>(value: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        subbergman::serde_complex::serialize(value, s)
    }

    pub mod vec {
        use super::*;

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
            let raw = Vec::<Flexible>::deserialize(d)?;
            Ok(raw.into_iter().map(Complex64::from).collect())
        }

        pub fn serialize<S: Serializer>(value: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
            subbergman::serde_complex::vec::serialize(value, s)
        }
    }
}

fn one() -> Complex64 {
    Complex64::ONE
}

fn zero() -> Complex64 {
    Complex64::ZERO
}

fn constant_one() -> Vec<Complex64> {
    vec![Complex64::ONE]
}

fn default_series_terms() -> usize {
    120
}

fn default_buffer() -> usize {
    40
}

fn default_lemma_truncation() -> usize {
    300
}

fn default_lemma_points() -> usize {
    200
}

fn default_lemma_tol() -> f64 {
    1e-8
}

fn default_star_expansion() -> usize {
    300
}

fn default_star_truncation() -> usize {
    360
}

fn default_star_buffer() -> usize {
    60
}

fn default_star_points() -> usize {
    100
}

fn default_star_tol() -> f64 {
    1e-7
}

fn default_eigen_tol() -> f64 {
    subbergman::pick::DEFAULT_EIGEN_TOLERANCE
}

fn default_witness_points() -> usize {
    6
}

fn default_depth() -> usize {
    30
}

fn default_cyclicity_degrees() -> Vec<usize> {
    (0..=40).step_by(5).collect()
}

fn default_cyclicity_truncation() -> usize {
    250
}

fn default_cyclicity_buffer() -> usize {
    50
}

fn default_tuple_count() -> usize {
    200
}

/// One fully specified unit of work. The `command` tag selects the variant;
/// every numeric knob a run actually uses lives here, so echoing the job
/// back in the report makes the run auditable.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum JobSpec {
    /// Evaluate a reproducing kernel at one point pair. Generalized kernels
    /// are cross-checked against the coefficient-recurrence series.
    KernelEval {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbol: Option<DiskSymbol>,
        #[serde(with = "cx")]
        z: Complex64,
        #[serde(with = "cx")]
        w: Complex64,
        #[serde(default = "default_series_terms")]
        series_terms: usize,
    },
    /// Apply `I - T_phi T_phi^*` to a polynomial through the truncated
    /// matrix model.
    DefectApply {
        alpha: f64,
        symbol: DiskSymbol,
        #[serde(with = "cx::vec")]
        input: Vec<Complex64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n_trust: Option<usize>,
        #[serde(default = "default_buffer")]
        buffer: usize,
        #[serde(default)]
        use_sqrt: bool,
    },
    /// Compare the explicit finite Blaschke adjoint formula against the
    /// truncated Toeplitz adjoint at seeded sample points.
    VerifyLemma {
        #[serde(with = "cx::vec")]
        f: Vec<Complex64>,
        #[serde(default = "one", with = "cx")]
        xi: Complex64,
        #[serde(with = "cx::vec")]
        zeros: Vec<Complex64>,
        #[serde(default = "default_lemma_truncation")]
        truncation: usize,
        #[serde(default = "default_lemma_points")]
        n_points: usize,
        seed: u64,
        #[serde(default = "default_lemma_tol")]
        tolerance: f64,
    },
    /// Compare the explicit defect action on a multiplier quotient against
    /// the defect-matrix route at seeded sample points.
    VerifyStar {
        #[serde(default = "constant_one", with = "cx::vec")]
        gamma: Vec<Complex64>,
        #[serde(default = "constant_one", with = "cx::vec")]
        psi: Vec<Complex64>,
        #[serde(with = "cx")]
        a: Complex64,
        #[serde(default = "one", with = "cx")]
        xi: Complex64,
        #[serde(default = "default_star_expansion")]
        expansion_degree: usize,
        #[serde(default = "default_star_truncation")]
        truncation: usize,
        #[serde(default = "default_star_buffer")]
        buffer: usize,
        #[serde(default = "default_star_points")]
        n_points: usize,
        seed: u64,
        #[serde(default = "default_star_tol")]
        tolerance: f64,
    },
    /// Run the normalized one-minus-reciprocal positivity test on a fixed
    /// point set.
    PickTest {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbol: Option<DiskSymbol>,
        #[serde(with = "cx::vec")]
        points: Vec<Complex64>,
        #[serde(default = "zero", with = "cx")]
        z0: Complex64,
        #[serde(default = "default_eigen_tol")]
        tolerance: f64,
    },
    /// Random search for a point set whose one-minus-reciprocal matrix has a
    /// negative eigenvalue.
    WitnessSearch {
        alpha: f64,
        symbol: DiskSymbol,
        #[serde(default = "default_witness_points")]
        n_points: usize,
        trials: usize,
        seed: u64,
        #[serde(default = "zero", with = "cx")]
        z0: Complex64,
        #[serde(default = "default_eigen_tol")]
        tolerance: f64,
    },
    /// Trace a function along a radius (or Stolz triangle) toward a boundary
    /// point and report the tail oscillation. The function is either a
    /// polynomial quotient `gamma / psi` or the lacunary gap series.
    BoundaryProbe {
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
        gamma: Option<Vec<Complex64>>,
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
        psi: Option<Vec<Complex64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gap_terms: Option<usize>,
        theta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        aperture: Option<f64>,
        #[serde(default = "default_depth")]
        depth: usize,
    },
    /// Residual distances from the constant 1 to `psi` times polynomials of
    /// growing degree, in the defect-range norm.
    Cyclicity {
        #[serde(with = "cx::vec")]
        psi: Vec<Complex64>,
        #[serde(default)]
        alpha: f64,
        #[serde(with = "cx")]
        a: Complex64,
        #[serde(default = "one", with = "cx")]
        xi: Complex64,
        #[serde(default = "default_cyclicity_degrees")]
        degrees: Vec<usize>,
        #[serde(default = "default_cyclicity_truncation")]
        truncation: usize,
        #[serde(default = "default_cyclicity_buffer")]
        buffer: usize,
    },
    /// Cross-ratio determinants of the rank-one kernel ratio on seeded
    /// point tuples.
    DoublestarCheck {
        alpha: f64,
        #[serde(with = "cx")]
        a: Complex64,
        #[serde(default = "one", with = "cx")]
        xi: Complex64,
        #[serde(default = "default_tuple_count")]
        tuple_count: usize,
        seed: u64,
    },
    /// The full acceptance suite; criteria run in parallel and report one
    /// pass/fail entry each.
    Acceptance {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        only: Option<Vec<usize>>,
    },
}

mod opt_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<Complex64>>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::cx::vec")] Vec<Complex64>);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }

    pub fn serialize<S: Serializer>(
        value: &Option<Vec<Complex64>>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => subbergman::serde_complex::vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}

impl JobSpec {
    pub fn command_name(&self) -> &'static str {
        match self {
            JobSpec::KernelEval { .. } => "kernel-eval",
            JobSpec::DefectApply { .. } => "defect-apply",
            JobSpec::VerifyLemma { .. } => "verify-lemma",
            JobSpec::VerifyStar { .. } => "verify-star",
            JobSpec::PickTest { .. } => "pick-test",
            JobSpec::WitnessSearch { .. } => "witness-search",
            JobSpec::BoundaryProbe { .. } => "boundary-probe",
            JobSpec::Cyclicity { .. } => "cyclicity",
            JobSpec::DoublestarCheck { .. } => "doublestar-check",
            JobSpec::Acceptance { .. } => "acceptance",
        }
    }
}
