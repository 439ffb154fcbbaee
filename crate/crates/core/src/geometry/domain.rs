use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{check_dim, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Ball,
    Annulus,
    PuncturedBall,
}

/// A ball `B(x₀, r₂)`, a punctured ball, or a ring `A(x₀, r₁, r₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    kind: DomainKind,
    center: Point,
    r1: f64,
    r2: f64,
}

/// Validates and builds a domain. Balls ignore `r1` and store 0.
pub fn make_domain(kind: DomainKind, center: Point, r1: f64, r2: f64) -> Result<Domain> {
    check_dim(center.dim())?;
    if !(r1.is_finite() && r2.is_finite()) || r1 < 0.0 || r1 >= r2 {
        return Err(Error::InvalidRadii(format!(
            "need 0 <= r1 < r2, got r1 = {r1}, r2 = {r2}"
        )));
    }
    let r1 = match kind {
        DomainKind::Annulus => {
            if r1 <= 0.0 {
                return Err(Error::InvalidRadii("an annulus needs r1 > 0".into()));
            }
            r1
        }
        DomainKind::Ball | DomainKind::PuncturedBall => 0.0,
    };
    Ok(Domain {
        kind,
        center,
        r1,
        r2,
    })
}

impl Domain {
    pub fn ball(center: Point, r: f64) -> Result<Self> {
        make_domain(DomainKind::Ball, center, 0.0, r)
    }

    pub fn punctured_ball(center: Point, r: f64) -> Result<Self> {
        make_domain(DomainKind::PuncturedBall, center, 0.0, r)
    }

    pub fn annulus(center: Point, r1: f64, r2: f64) -> Result<Self> {
        make_domain(DomainKind::Annulus, center, r1, r2)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn inner_radius(&self) -> f64 {
        self.r1
    }

    pub fn outer_radius(&self) -> f64 {
        self.r2
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn contains(&self, x: &Point) -> bool {
        let d = x.distance(&self.center);
        match self.kind {
            DomainKind::Ball => d < self.r2,
            DomainKind::PuncturedBall => d > 0.0 && d < self.r2,
            DomainKind::Annulus => d > self.r1 && d < self.r2,
        }
    }

    /// Euclidean volume of the domain.
    pub fn euclidean_volume(&self) -> f64 {
        let (a, b) = (self.r1, self.r2);
        match self.dim() {
            2 => std::f64::consts::PI * (b * b - a * a),
            _ => 4.0 / 3.0 * std::f64::consts::PI * (b.powi(3) - a.powi(3)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_forces_zero_inner_radius() {
        let d = make_domain(DomainKind::Ball, Point::new2(0.0, 0.0), 0.0, 1.0).unwrap();
        assert_eq!(d.inner_radius(), 0.0);
        assert_eq!(d.outer_radius(), 1.0);
        let d = make_domain(DomainKind::Ball, Point::new2(0.0, 0.0), 0.5, 1.0).unwrap();
        assert_eq!(d.inner_radius(), 0.0);
    }

    #[test]
    fn annulus_ordering() {
        let o = Point::new2(0.0, 0.0);
        assert!(matches!(
            make_domain(DomainKind::Annulus, o, 2.0, 1.0),
            Err(Error::InvalidRadii(_))
        ));
        assert!(matches!(
            make_domain(DomainKind::Annulus, o, 0.0, 1.0),
            Err(Error::InvalidRadii(_))
        ));
        let e = std::f64::consts::E;
        let a = make_domain(DomainKind::Annulus, o, 1.0, e).unwrap();
        let expected = std::f64::consts::PI * (e * e - 1.0);
        assert!((a.euclidean_volume() - expected).abs() < 1e-12);
    }

    #[test]
    fn punctured_ball_excludes_center() {
        let o = Point::new3(1.0, 0.0, 0.0);
        let d = Domain::punctured_ball(o, 1.0).unwrap();
        assert!(!d.contains(&o));
        assert!(d.contains(&Point::new3(1.5, 0.0, 0.0)));
        assert!(Domain::ball(o, 1.0).unwrap().contains(&o));
    }
}
