//! Shared function handles for scalar profiles and point fields.

use std::sync::Arc;

use crate::point::Point;

/// A real function of one real variable (a radius, usually).
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function on the chart.
pub type FieldFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;

pub fn scalar(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(f)
}

pub fn field(f: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> FieldFn {
    Arc::new(f)
}

pub fn constant_field(c: f64) -> FieldFn {
    Arc::new(move |_| c)
}

/// Lifts a radial function to a field `x -> f(|x - center|)`.
pub fn radial_field(f: ScalarFn, center: Point) -> FieldFn {
    Arc::new(move |x| f(x.distance(&center)))
}
