use crate::error::{Error, Result};
use crate::geometry::{sphere_quadrature, unit_sphere_area, MetricField};
use crate::point::Point;

fn sphere_sum<F>(
    q: F,
    x0: Point,
    r: f64,
    metric: &MetricField,
    resolution: usize,
) -> Result<f64>
where
    F: Fn(&Point, f64) -> f64,
{
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRadii(format!("sphere radius must be positive, got {r}")));
    }
    let mut acc = 0.0;
    for (x, w) in sphere_quadrature(x0, r, metric, resolution)? {
        let v = q(&x, w);
        if !v.is_finite() {
            return Err(Error::non_finite(x, v));
        }
        acc += v;
    }
    Ok(acc)
}

/// `q_{x₀}(r) = r^{1-n} ∫_{S(x₀,r)} Q dA`; with `normalized` the result is
/// further divided by `ω_{n-1}`, so constants map to themselves.
pub fn spherical_mean_q<F>(
    q: F,
    x0: Point,
    r: f64,
    metric: &MetricField,
    resolution: usize,
    normalized: bool,
) -> Result<f64>
where
    F: Fn(&Point) -> f64,
{
    let n = x0.dim();
    let total = sphere_sum(|x, w| q(x) * w, x0, r, metric, resolution)?;
    let mean = total / r.powi(n as i32 - 1);
    Ok(if normalized {
        mean / unit_sphere_area(n)
    } else {
        mean
    })
}

/// `(∫_{S(x₀,r)} Q^s dA)^{1/s}` on the flat sphere.
pub fn sphere_lsnorm<F>(q: F, x0: Point, r: f64, s: f64, resolution: usize) -> Result<f64>
where
    F: Fn(&Point) -> f64,
{
    if !(s >= 1.0) {
        return Err(Error::InvalidArgument(format!("s ≥ 1 required, got {s}")));
    }
    let flat = MetricField::flat(x0.dim())?;
    let total = sphere_sum(|x, w| q(x).abs().powf(s) * w, x0, r, &flat, resolution)?;
    Ok(total.powf(1.0 / s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI, TAU};

    #[test]
    fn spherical_means() {
        let o = Point::new2(0.0, 0.0);
        let flat = MetricField::flat(2).unwrap();
        let m = spherical_mean_q(|_| 1.0, o, 0.7, &flat, 256, false).unwrap();
        assert!((m - TAU).abs() < 1e-6);
        let m = spherical_mean_q(|x| 1.0 / x.norm(), o, 0.5, &flat, 256, false).unwrap();
        assert!((m - 4.0 * PI).abs() < 1e-4);
        let m = spherical_mean_q(|x| (1.0 / x.norm()).ln(), o, E.powi(-2), &flat, 256, false).unwrap();
        assert!((m - 4.0 * PI).abs() < 1e-4);
        for n in [2, 3] {
            let o = Point::origin(n).unwrap();
            let flat = MetricField::flat(n).unwrap();
            for r in [1e-3, 0.4, 7.0] {
                let m = spherical_mean_q(|_| 3.5, o, r, &flat, 64, true).unwrap();
                assert!((m - 3.5).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn lsnorms() {
        let n = sphere_lsnorm(|_| 1.0, Point::new2(0.0, 0.0), 1.0, 2.0, 128).unwrap();
        assert!((n - TAU.sqrt()).abs() < 1e-9);
        let n = sphere_lsnorm(|_| 2.5, Point::new3(0.0, 0.0, 0.0), 2.0, 1.0, 64).unwrap();
        assert!((n - 2.5 * 16.0 * PI).abs() < 1e-6);
        let n = sphere_lsnorm(|x| x.norm(), Point::new2(0.0, 0.0), 0.5, 3.0, 128).unwrap();
        assert!((n - 0.5 * (PI).powf(1.0 / 3.0)).abs() < 1e-9);
    }

    #[test]
    fn non_finite_reported() {
        let flat = MetricField::flat(2).unwrap();
        let r = spherical_mean_q(|_| f64::NAN, Point::new2(0.0, 0.0), 1.0, &flat, 64, false);
        assert!(matches!(r, Err(Error::NonFiniteIntegrand { .. })));
    }
}
