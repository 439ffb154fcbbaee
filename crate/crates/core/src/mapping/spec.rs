use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::func::ScalarFn;
use crate::geometry::Domain;
use crate::point::Point;

pub type PointMap = Arc<dyn Fn(&Point) -> Point + Send + Sync>;
pub type DerivativeMap = Arc<dyn Fn(&Point) -> DMatrix<f64> + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Generic,
    Radial,
    Catalog,
}

/// A radial profile `ρ(r)` with its derivative, for maps `x ↦ (x/|x|)·ρ(|x|)`.
#[derive(Clone)]
pub struct RadialProfile {
    pub rho: ScalarFn,
    pub drho: ScalarFn,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RadialProfile")
    }
}

/// Where a mapping is undefined or not differentiable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Singularity {
    Point(Point),
    /// The line through the given point parallel to the x₃ axis.
    Axis(Point),
}

impl Singularity {
    pub fn distance(&self, x: &Point) -> f64 {
        match self {
            Singularity::Point(p) => x.distance(p),
            Singularity::Axis(p) => {
                let d = *x - *p;
                (d[0] * d[0] + d[1] * d[1]).sqrt()
            }
        }
    }
}

/// An evaluable mapping with optional exact derivative data.
#[derive(Clone)]
pub struct MappingSpec {
    name: String,
    kind: MapKind,
    evaluator: PointMap,
    exact_derivative: Option<DerivativeMap>,
    radial_profile: Option<RadialProfile>,
    domain: Domain,
    singularities: Vec<Singularity>,
    multiplicity: Option<u32>,
}

impl fmt::Debug for MappingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MappingSpec")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .field("exact_derivative", &self.exact_derivative.is_some())
            .field("singularities", &self.singularities)
            .field("multiplicity", &self.multiplicity)
            .finish()
    }
}

impl MappingSpec {
    pub fn generic(
        name: impl Into<String>,
        domain: Domain,
        f: impl Fn(&Point) -> Point + Send + Sync + 'static,
    ) -> Self {
        MappingSpec {
            name: name.into(),
            kind: MapKind::Generic,
            evaluator: Arc::new(f),
            exact_derivative: None,
            radial_profile: None,
            domain,
            singularities: Vec::new(),
            multiplicity: None,
        }
    }

    pub fn identity(domain: Domain) -> Self {
        let n = domain.dim();
        Self::generic("identity", domain, |x| *x)
            .with_derivative(move |_| DMatrix::identity(n, n))
            .with_multiplicity(1)
    }

    /// `x ↦ x₀ + (x - x₀)/|x - x₀| · ρ(|x - x₀|)`, punctured at the domain center.
    pub fn radial(name: impl Into<String>, domain: Domain, profile: RadialProfile) -> Self {
        let center = domain.center();
        let n = domain.dim();
        let rho = profile.rho.clone();
        let evaluator = move |x: &Point| {
            let v = *x - center;
            let r = v.norm();
            center + v * (rho(r) / r)
        };
        let (rho, drho) = (profile.rho.clone(), profile.drho.clone());
        let derivative = move |x: &Point| {
            let v = *x - center;
            let r = v.norm();
            let u = v * (1.0 / r);
            let (tangential, radial) = (rho(r) / r, drho(r));
            let mut m = DMatrix::identity(n, n) * tangential;
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += (radial - tangential) * u[i] * u[j];
                }
            }
            m
        };
        MappingSpec {
            name: name.into(),
            kind: MapKind::Radial,
            evaluator: Arc::new(evaluator),
            exact_derivative: Some(Arc::new(derivative)),
            radial_profile: Some(profile),
            domain,
            singularities: vec![Singularity::Point(center)],
            multiplicity: Some(1),
        }
    }

    pub fn with_derivative(
        mut self,
        df: impl Fn(&Point) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        self.exact_derivative = Some(Arc::new(df));
        self
    }

    pub fn without_derivative(mut self) -> Self {
        self.exact_derivative = None;
        self
    }

    pub fn with_singularity(mut self, s: Singularity) -> Self {
        self.singularities.push(s);
        self
    }

    pub fn with_multiplicity(mut self, n: u32) -> Self {
        self.multiplicity = Some(n);
        self
    }

    pub(crate) fn into_catalog(mut self, name: &str) -> Self {
        self.kind = MapKind::Catalog;
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.singularities
    }

    pub fn multiplicity(&self) -> Option<u32> {
        self.multiplicity
    }

    pub fn radial_profile(&self) -> Option<&RadialProfile> {
        self.radial_profile.as_ref()
    }

    pub fn has_exact_derivative(&self) -> bool {
        self.exact_derivative.is_some()
    }

    pub fn distance_to_singularity(&self, x: &Point) -> f64 {
        self.singularities
            .iter()
            .map(|s| s.distance(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// f(x); fails on singular points and non-finite images.
    pub fn eval(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "point {x} has dimension {}, mapping expects {}",
                x.dim(),
                self.dim()
            )));
        }
        if self
            .singularities
            .iter()
            .any(|s| matches!(s, Singularity::Point(p) if p == x))
        {
            return Err(Error::EvaluationDomain(x.to_string()));
        }
        let y = (self.evaluator)(x);
        if !y.is_finite() {
            return Err(Error::EvaluationDomain(x.to_string()));
        }
        Ok(y)
    }

    pub fn exact_derivative(&self, x: &Point) -> Option<DMatrix<f64>> {
        self.exact_derivative.as_ref().map(|df| df(x))
    }

    /// `x ↦ f(R x)` for an orthogonal matrix R (the domain is kept).
    pub fn precompose_linear(&self, rotation: DMatrix<f64>) -> MappingSpec {
        let f = self.evaluator.clone();
        let apply = move |x: &Point| {
            let mut y = *x;
            for i in 0..x.dim() {
                y.as_mut_slice()[i] = (0..x.dim()).map(|j| rotation[(i, j)] * x[j]).sum();
            }
            y
        };
        let mut out = MappingSpec::generic(format!("{}∘R", self.name), self.domain, move |x| {
            f(&apply(x))
        });
        out.multiplicity = self.multiplicity;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::scalar;

    #[test]
    fn radial_derivative_matches_profile() {
        let d = Domain::punctured_ball(Point::new2(0.0, 0.0), 1.0).unwrap();
        let f = MappingSpec::radial(
            "square",
            d,
            RadialProfile {
                rho: scalar(|r| r * r),
                drho: scalar(|r| 2.0 * r),
            },
        );
        let y = f.eval(&Point::new2(0.5, 0.0)).unwrap();
        assert!((y[0] - 0.25).abs() < 1e-15);
        let m = f.exact_derivative(&Point::new2(0.0, 0.5)).unwrap();
        // radial direction is e2
        assert!((m[(1, 1)] - 1.0).abs() < 1e-15);
        assert!((m[(0, 0)] - 0.5).abs() < 1e-15);
        assert!(matches!(
            f.eval(&Point::new2(0.0, 0.0)),
            Err(Error::EvaluationDomain(_))
        ));
    }

    #[test]
    fn axis_distance() {
        let s = Singularity::Axis(Point::new3(0.0, 0.0, 0.0));
        assert_eq!(s.distance(&Point::new3(3.0, 4.0, 10.0)), 5.0);
    }
}
