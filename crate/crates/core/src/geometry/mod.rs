//! Domains, conformal metrics, polyline curves and quadrature.
//!
//! Everything lives in a single chart of ℝⁿ (n = 2 or 3) carrying a metric
//! `λ(x)² δ_ij`. Spheres are the Euclidean spheres of the chart.

mod curve;
mod domain;
mod metric;
mod quadrature;

pub use curve::{curve_length, sample_ring_curves, Curve, CurveFamily, FamilyKind};
pub(crate) use curve::base_directions;
pub use domain::{make_domain, Domain, DomainKind};
pub use metric::MetricField;
pub use quadrature::{
    log_substituted, sphere_quadrature, unit_sphere_rule, volume_integrate, NODES_PER_DECADE,
};
pub(crate) use quadrature::gauss_legendre;

/// Surface area ω_{n-1} of the unit sphere in ℝⁿ.
pub fn unit_sphere_area(dim: usize) -> f64 {
    match dim {
        2 => std::f64::consts::TAU,
        3 => 4.0 * std::f64::consts::PI,
        _ => f64::NAN,
    }
}
