use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::MetricField;
use crate::point::{check_dim, Point};

/// A polyline curve in the chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    vertices: Vec<Point>,
    family_id: u64,
}

impl Curve {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        Self::with_family(vertices, 0)
    }

    pub fn with_family(vertices: Vec<Point>, family_id: u64) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument(
                "a curve needs at least two vertices".into(),
            ));
        }
        let dim = vertices[0].dim();
        for w in vertices.windows(2) {
            if w[1].dim() != dim {
                return Err(Error::InvalidArgument("mixed dimensions in curve".into()));
            }
            if w[0] == w[1] {
                return Err(Error::InvalidArgument(format!(
                    "repeated consecutive vertex {}",
                    w[0]
                )));
            }
            if !w[1].is_finite() {
                return Err(Error::InvalidArgument("non-finite vertex".into()));
            }
        }
        Ok(Curve {
            vertices,
            family_id,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn family_id(&self) -> u64 {
        self.family_id
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn first(&self) -> Point {
        self.vertices[0]
    }

    pub fn last(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Inserts the midpoint of every segment, `levels` times.
    pub fn refined(&self, levels: usize) -> Curve {
        let mut vertices = self.vertices.clone();
        for _ in 0..levels {
            let mut next = Vec::with_capacity(2 * vertices.len() - 1);
            for w in vertices.windows(2) {
                next.push(w[0]);
                next.push(w[0].lerp(&w[1], 0.5));
            }
            next.push(vertices[vertices.len() - 1]);
            vertices = next;
        }
        Curve {
            vertices,
            family_id: self.family_id,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    RingRadial,
    RingPerturbed,
    Image,
    Custom,
}

/// A finite sample of curves standing in for a curve family.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveFamily {
    curves: Vec<Curve>,
    kind: FamilyKind,
}

impl CurveFamily {
    pub fn new(curves: Vec<Curve>, kind: FamilyKind) -> Self {
        CurveFamily { curves, kind }
    }

    pub fn empty() -> Self {
        CurveFamily {
            curves: Vec::new(),
            kind: FamilyKind::Custom,
        }
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// The sub-family at the given indices (in the given order).
    pub fn subset(&self, indices: &[usize]) -> CurveFamily {
        CurveFamily {
            curves: indices.iter().map(|&i| self.curves[i].clone()).collect(),
            kind: self.kind,
        }
    }

    pub fn union(&self, other: &CurveFamily) -> CurveFamily {
        let mut curves = self.curves.clone();
        curves.extend(other.curves.iter().cloned());
        let kind = if self.kind == other.kind {
            self.kind
        } else {
            FamilyKind::Custom
        };
        CurveFamily { curves, kind }
    }
}

const JITTER_SEGMENTS: usize = 32;

/// Samples `count` curves joining `S(x₀, r₁)` to `S(x₀, r₂)`.
///
/// Base directions are deterministic: equally spaced half-offset angles in
/// the plane, a Fibonacci lattice on the sphere. With `jitter > 0` every
/// curve gets a smooth transverse perturbation whose amplitude is
/// `jitter · (r₂ - r₁)`, vanishing at both ends; endpoints are re-projected
/// onto the two spheres.
pub fn sample_ring_curves(
    center: Point,
    r1: f64,
    r2: f64,
    count: usize,
    jitter: f64,
    seed: u64,
) -> Result<CurveFamily> {
    check_dim(center.dim())?;
    if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
        return Err(Error::InvalidRadii(format!(
            "need 0 < r1 < r2, got r1 = {r1}, r2 = {r2}"
        )));
    }
    if !(0.0..0.5).contains(&jitter) {
        return Err(Error::InvalidArgument(format!(
            "jitter must lie in [0, 0.5), got {jitter}"
        )));
    }
    let kind = if jitter == 0.0 {
        FamilyKind::RingRadial
    } else {
        FamilyKind::RingPerturbed
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs = base_directions(center.dim(), count);
    let mut curves = Vec::with_capacity(count);
    for dir in dirs {
        let vertices = if jitter == 0.0 {
            vec![center + dir * r1, center + dir * r2]
        } else {
            perturbed_path(center, dir, r1, r2, jitter, &mut rng)
        };
        curves.push(Curve::with_family(vertices, seed)?);
    }
    Ok(CurveFamily::new(curves, kind))
}

pub(crate) fn base_directions(dim: usize, count: usize) -> Vec<Point> {
    if dim == 2 {
        (0..count)
            .map(|k| {
                let th = std::f64::consts::TAU * (k as f64 + 0.5) / count as f64;
                Point::new2(th.cos(), th.sin())
            })
            .collect()
    } else {
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..count)
            .map(|k| {
                let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
                let s = (1.0 - z * z).max(0.0).sqrt();
                let phi = golden * k as f64;
                Point::new3(s * phi.cos(), s * phi.sin(), z)
            })
            .collect()
    }
}

fn perturbed_path(
    center: Point,
    dir: Point,
    r1: f64,
    r2: f64,
    jitter: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<Point> {
    let a1: f64 = rng.gen_range(-1.0..1.0);
    let a2: f64 = rng.gen_range(-1.0..1.0);
    // tangent direction of the perturbation
    let tangent = if dir.dim() == 2 {
        Point::new2(-dir[1], dir[0])
    } else {
        let helper = if dir[2].abs() < 0.9 {
            Point::new3(0.0, 0.0, 1.0)
        } else {
            Point::new3(1.0, 0.0, 0.0)
        };
        let u = cross(&dir, &helper);
        let u = u * (1.0 / u.norm());
        let v = cross(&dir, &u);
        let psi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        u * psi.cos() + v * psi.sin()
    };
    let width = r2 - r1;
    let mut out = Vec::with_capacity(JITTER_SEGMENTS + 1);
    for i in 0..=JITTER_SEGMENTS {
        let s = i as f64 / JITTER_SEGMENTS as f64;
        let r = r1 + s * width;
        let pi_s = std::f64::consts::PI * s;
        let offset = jitter * width * (a1 * pi_s.sin() + 0.5 * a2 * (2.0 * pi_s).sin());
        let angle = offset / r;
        let d = dir * angle.cos() + tangent * angle.sin();
        let d = d * (1.0 / d.norm());
        out.push(center + d * r);
    }
    // re-project the endpoints onto their spheres
    let first = out[0] - center;
    out[0] = center + first * (r1 / first.norm());
    let last = out[JITTER_SEGMENTS] - center;
    out[JITTER_SEGMENTS] = center + last * (r2 / last.norm());
    out
}

pub(crate) fn cross(a: &Point, b: &Point) -> Point {
    Point::new3(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
}

/// Metric length of a polyline by the midpoint rule: Σ λ(mid)·|Δx|.
pub fn curve_length(curve: &Curve, metric: &MetricField) -> f64 {
    curve
        .segments()
        .map(|(a, b)| metric.factor_at(&a.lerp(&b, 0.5)) * a.distance(&b))
        .sum()
}
