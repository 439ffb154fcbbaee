use std::f64::consts::TAU;

use serde::Serialize;

use crate::catalog::{probe_directions, CatalogEntry, CatalogName, LimitSet};
use crate::error::{Error, Result};
use crate::point::Point;

/// Relative band around `2ρ*` accepted for a sphere descriptor.
pub const SPHERE_TOLERANCE: f64 = 0.02;
/// Diameter below which images count as collapsing to a point.
pub const POINT_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct LimitProbe {
    /// `(r, max pairwise distance of the images of the sphere S(0, r))`.
    pub separations: Vec<(f64, f64)>,
    pub descriptor: LimitSet,
    /// The last separation matches the descriptor.
    pub confirmed: bool,
}

/// Images of `directions` rays at each radius of the ladder, reduced to
/// their diameter.
pub fn probe_limit_set(entry: &CatalogEntry, directions: usize, radii: &[f64]) -> Result<LimitProbe> {
    let descriptor = entry.limit_set();
    if matches!(descriptor, LimitSet::None) {
        return Err(Error::InvalidArgument(format!(
            "{} has no declared puncture",
            entry.name()
        )));
    }
    if directions < 2 || radii.is_empty() {
        return Err(Error::InvalidArgument(
            "need at least 2 directions and one radius".into(),
        ));
    }
    let center = entry.map().domain().center();
    let dirs = probe_directions(entry.dim(), directions);
    let mut separations = Vec::with_capacity(radii.len());
    for &r in radii {
        let images = dirs
            .iter()
            .map(|d| entry.map().eval(&(center + *d * r)))
            .collect::<Result<Vec<_>>>()?;
        let mut diam = 0.0f64;
        for (i, a) in images.iter().enumerate() {
            for b in &images[i + 1..] {
                diam = diam.max(a.distance(b));
            }
        }
        separations.push((r, diam));
    }
    let last = separations[separations.len() - 1].1;
    let confirmed = match descriptor {
        LimitSet::Sphere { radius, .. } => {
            (last - 2.0 * radius).abs() <= SPHERE_TOLERANCE * 2.0 * radius
        }
        LimitSet::Point { .. } => last < POINT_TOLERANCE,
        LimitSet::None => false,
    };
    Ok(LimitProbe {
        separations,
        descriptor,
        confirmed,
    })
}

fn rotate_angle(v: f64, k: u32) -> impl Iterator<Item = f64> {
    (0..k).map(move |j| (v + TAU * j as f64) / k as f64)
}

/// All preimages of `y` in the entry's domain, from the closed-form
/// inverse (angle division for twisting and powers, profile inversion by
/// bisection for radial maps).
pub fn preimages(entry: &CatalogEntry, y: &Point) -> Result<Vec<Point>> {
    let domain = entry.map().domain();
    let candidates: Vec<Point> = match entry.name() {
        CatalogName::Twisting => {
            let m = entry.params().m.unwrap_or(1);
            let r = y[0].hypot(y[1]);
            if r == 0.0 {
                return Err(Error::EvaluationDomain(y.to_string()));
            }
            rotate_angle(y[1].atan2(y[0]), m)
                .map(|a| Point::new3(r * a.cos(), r * a.sin(), y[2]))
                .collect()
        }
        CatalogName::PlanarPower => {
            let k = entry.params().degree.unwrap_or(1);
            let r = y.norm().powf(1.0 / k as f64);
            rotate_angle(y[1].atan2(y[0]), k)
                .map(|a| Point::new2(r * a.cos(), r * a.sin()))
                .collect()
        }
        _ => {
            let rho = &entry
                .radial_profile()
                .ok_or_else(|| Error::InvalidArgument("missing radial profile".into()))?
                .rho;
            let center = domain.center();
            let v = *y - center;
            let s = v.norm();
            let (mut lo, mut hi) = (1e-300f64, domain.outer_radius());
            if s == 0.0 || !(rho(lo) < s && s < rho(hi)) {
                return Ok(Vec::new());
            }
            // bisection in log r
            for _ in 0..200 {
                let mid = (lo * hi).sqrt();
                if rho(mid) < s {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi / lo - 1.0 < 1e-15 {
                    break;
                }
            }
            vec![center + v * (0.5 * (lo + hi) / s)]
        }
    };
    Ok(candidates.into_iter().filter(|x| domain.contains(x)).collect())
}
