//! Sphere rules, product polar volume quadrature and log-substituted 1-D rules.

use std::f64::consts::TAU;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Domain, MetricField};
use crate::point::{check_dim, Point};

/// Gauss–Legendre nodes and weights on [-1, 1].
pub(crate) fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(order.max(2))
        .expect("order >= 2")
        .as_node_weight_pairs()
        .to_vec()
}

/// Unit-sphere rule: directions and weights summing to ω_{n-1}.
///
/// n = 2: `resolution` equally spaced half-offset angles.
/// n = 3: `resolution` azimuths times `resolution / 2` Gauss–Legendre nodes in cos θ.
pub fn unit_sphere_rule(dim: usize, resolution: usize) -> Result<Vec<(Point, f64)>> {
    check_dim(dim)?;
    if resolution < 8 {
        return Err(Error::InvalidArgument(format!(
            "sphere resolution must be at least 8, got {resolution}"
        )));
    }
    let dphi = TAU / resolution as f64;
    let azimuths = (0..resolution).map(move |j| (j as f64 + 0.5) * dphi);
    if dim == 2 {
        return Ok(azimuths
            .map(|phi| (Point::new2(phi.cos(), phi.sin()), dphi))
            .collect());
    }
    let polar = gauss_legendre(resolution / 2);
    let mut out = Vec::with_capacity(polar.len() * resolution);
    for &(z, wz) in &polar {
        let s = (1.0 - z * z).max(0.0).sqrt();
        for phi in azimuths.clone() {
            out.push((Point::new3(s * phi.cos(), s * phi.sin(), z), wz * dphi));
        }
    }
    Ok(out)
}

/// Nodes and weights approximating the metric area element on `S(x₀, r)`.
pub fn sphere_quadrature(
    center: Point,
    r: f64,
    metric: &MetricField,
    resolution: usize,
) -> Result<Vec<(Point, f64)>> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRadii(format!("sphere radius must be > 0, got {r}")));
    }
    let dim = center.dim();
    if metric.dim() != dim {
        return Err(Error::InvalidArgument(
            "metric and center dimensions differ".into(),
        ));
    }
    let scale = r.powi(dim as i32 - 1);
    Ok(unit_sphere_rule(dim, resolution)?
        .into_iter()
        .map(|(w, weight)| {
            let x = center + w * r;
            (x, weight * scale * metric.area_density(&x))
        })
        .collect())
}

/// Radial nodes for a product polar rule: midpoint in r for balls, midpoint
/// in u = log r for rings.
pub(crate) fn radial_nodes(r1: f64, r2: f64, count: usize) -> Vec<(f64, f64)> {
    if r1 == 0.0 {
        let h = r2 / count as f64;
        (0..count).map(|i| ((i as f64 + 0.5) * h, h)).collect()
    } else {
        let (a, b) = (r1.ln(), r2.ln());
        let h = (b - a) / count as f64;
        (0..count)
            .map(|i| {
                let r = (a + (i as f64 + 0.5) * h).exp();
                (r, r * h)
            })
            .collect()
    }
}

fn angular_resolution(dim: usize, resolution: usize) -> usize {
    if dim == 2 {
        resolution
    } else {
        (resolution / 4).max(8)
    }
}

/// ∫_domain f dv under the metric, by a tensor-product polar rule centered at
/// the domain center. The r^{n-1} weight absorbs radial singularities at x₀.
pub(crate) fn polar_sum<F>(
    domain: &Domain,
    metric: &MetricField,
    resolution: usize,
    f: F,
) -> Result<f64>
where
    F: Fn(&Point) -> f64 + Sync,
{
    let dim = domain.dim();
    if metric.dim() != dim {
        return Err(Error::InvalidArgument(
            "metric and domain dimensions differ".into(),
        ));
    }
    if resolution < 8 {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least 8, got {resolution}"
        )));
    }
    let sphere = unit_sphere_rule(dim, angular_resolution(dim, resolution))?;
    let radial = radial_nodes(domain.inner_radius(), domain.outer_radius(), resolution);
    let center = domain.center();
    let shells: Vec<Result<f64>> = radial
        .par_iter()
        .map(|&(r, wr)| {
            let mut acc = 0.0;
            for (w, ww) in &sphere {
                let x = center + *w * r;
                let v = f(&x) * metric.volume_density(&x);
                if !v.is_finite() {
                    return Err(Error::non_finite(x, v));
                }
                acc += v * ww;
            }
            Ok(acc * r.powi(dim as i32 - 1) * wr)
        })
        .collect();
    let mut total = 0.0;
    for s in shells {
        total += s?;
    }
    Ok(total)
}

/// ∫_domain field dv by product polar quadrature with `resolution` radial nodes.
///
/// The angular rule uses `resolution` nodes in the plane and
/// `resolution/4` azimuths × `resolution/8` polar nodes in space.
pub fn volume_integrate<F>(
    domain: &Domain,
    metric: &MetricField,
    field: F,
    resolution: usize,
) -> Result<f64>
where
    F: Fn(&Point) -> f64 + Sync,
{
    polar_sum(domain, metric, resolution, field)
}

/// Default node density for log-substituted 1-D quadrature.
pub const NODES_PER_DECADE: usize = 512;

const PANEL_ORDER: usize = 4;

/// ∫_a^b f(t) dt with u = log t, composite 4-point Gauss–Legendre on a
/// uniform u-grid of `nodes_per_decade` nodes per decade.
pub fn log_substituted<F>(f: F, a: f64, b: f64, nodes_per_decade: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "log-substituted quadrature needs 0 < a < b, got [{a}, {b}]"
        )));
    }
    let (ua, ub) = (a.ln(), b.ln());
    let decades = (ub - ua) / std::f64::consts::LN_10;
    let panels = ((decades * nodes_per_decade as f64) / PANEL_ORDER as f64)
        .ceil()
        .max(1.0) as usize;
    let rule = gauss_legendre(PANEL_ORDER);
    let h = (ub - ua) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = ua + (k as f64 + 0.5) * h;
        let mut acc = 0.0;
        for &(x, w) in &rule {
            let t = (mid + 0.5 * h * x).exp();
            let v = f(t) * t;
            if !v.is_finite() {
                return Err(Error::non_finite(format!("t = {t:e}"), v));
            }
            acc += w * v;
        }
        total += 0.5 * h * acc;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn flat(n: usize) -> MetricField {
        MetricField::flat(n).unwrap()
    }

    fn weight_sum(q: &[(Point, f64)]) -> f64 {
        q.iter().map(|(_, w)| w).sum()
    }

    #[test]
    fn circle_and_sphere_areas() {
        let q = sphere_quadrature(Point::new2(0.0, 0.0), 1.0, &flat(2), 256).unwrap();
        assert!((weight_sum(&q) - 2.0 * PI).abs() < 1e-6);
        let q = sphere_quadrature(Point::new3(0.0, 0.0, 0.0), 0.5, &flat(3), 64).unwrap();
        assert!((weight_sum(&q) - PI).abs() < 1e-4);
        let two = MetricField::constant(2, 2.0).unwrap();
        let q = sphere_quadrature(Point::new2(0.0, 0.0), 1.0, &two, 256).unwrap();
        assert!((weight_sum(&q) - 4.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn sphere_nodes_lie_on_sphere() {
        let c = Point::new3(1.0, 2.0, 3.0);
        for (x, _) in sphere_quadrature(c, 0.7, &flat(3), 16).unwrap() {
            assert!((x.distance(&c) - 0.7).abs() < 1e-14);
        }
    }

    #[test]
    fn sphere_errors() {
        let o = Point::new2(0.0, 0.0);
        assert!(sphere_quadrature(o, 0.0, &flat(2), 64).is_err());
        assert!(sphere_quadrature(o, 1.0, &flat(2), 4).is_err());
        assert!(matches!(
            MetricField::flat(4),
            Err(Error::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn volume_examples() {
        let o = Point::new2(0.0, 0.0);
        let ann = Domain::annulus(o, 1.0, 2.0).unwrap();
        let v = volume_integrate(&ann, &flat(2), |_| 1.0, 512).unwrap();
        assert!((v - 3.0 * PI).abs() < 1e-4, "{v}");

        let ball = Domain::ball(o, 1.0).unwrap();
        let v = volume_integrate(&ball, &flat(2), |x| 1.0 / x.norm(), 512).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-3, "{v}");

        let ring = Domain::annulus(o, (-2f64).exp(), (-1f64).exp()).unwrap();
        let v = volume_integrate(
            &ring,
            &flat(2),
            |x| {
                let r = x.norm();
                (1.0 / (r * (1.0 / r).ln())).powi(2)
            },
            512,
        )
        .unwrap();
        assert!((v - PI).abs() < 1e-3, "{v}");

        let e_ring = Domain::annulus(o, 1.0, E).unwrap();
        let v = volume_integrate(&e_ring, &flat(2), |_| 1.0, 256).unwrap();
        assert!((v - PI * (E * E - 1.0)).abs() < 1e-4);
    }

    #[test]
    fn volume_3d_and_nonfinite() {
        let o = Point::new3(0.0, 0.0, 0.0);
        let ann = Domain::annulus(o, 1.0, 2.0).unwrap();
        let v = volume_integrate(&ann, &flat(3), |_| 1.0, 256).unwrap();
        assert!((v / (4.0 / 3.0 * PI * 7.0) - 1.0).abs() < 1e-4, "{v}");
        let err = volume_integrate(&ann, &flat(3), |x| if x[0] > 1.5 { f64::NAN } else { 1.0 }, 64);
        assert!(matches!(err, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn log_rule_handles_wide_ranges() {
        // ∫ dt/t over 100 decades
        let v = log_substituted(|t| 1.0 / t, 1e-100, 1.0, NODES_PER_DECADE).unwrap();
        assert!((v - 100.0 * std::f64::consts::LN_10).abs() < 1e-9);
        let v = log_substituted(|t| t.sqrt(), 1e-12, 4.0, 64).unwrap();
        assert!((v - 2.0 / 3.0 * 8.0).abs() < 1e-10);
    }
}
