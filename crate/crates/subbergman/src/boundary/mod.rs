//! Boundary behavior probes: radial and Stolz-angle limits, lacunary
//! witness series, the rank-one kernel-ratio factorization check and the
//! cyclicity residual probe in the sub-Bergman norm.

mod cyclicity;
mod factorization;
mod probes;
mod smirnov;

pub use cyclicity::{
    cyclicity_residual_probe, CyclicityReport, DegreeResidual, EIGENCOMPONENT_EXCLUSION_FLOOR,
};
pub use factorization::{doublestar_factorization_check, rank_one_ratio, FactorizationReport};
pub use probes::{
    gap_series_eval, gap_series_norm_sq, radial_probe, stolz_probe, BoundaryProbeReport,
    CurveTrace, ProbeVerdict, CONVERGENCE_OSC_TOLERANCE, MAX_DEPTH, MAX_GAP_TERMS, MIN_DEPTH,
    VERDICT_TAIL_OFFSET,
};
pub use smirnov::SmirnovQuotient;
