//! Mappings and their differential data: Jacobians, principal stretches,
//! inner and outer dilatations.

mod differential;
mod spec;

pub use differential::{
    differential_report, differential_report_with, finite_distortion_survey, inner_dilatation,
    outer_dilatation, radial_stretches, sample_domain_points, DerivativeSource,
    DifferentialOptions, DifferentialReport, ZERO_THRESHOLD,
};
pub use spec::{DerivativeMap, MapKind, MappingSpec, PointMap, RadialProfile, Singularity};
