use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::func::{scalar, FieldFn, ScalarFn};
use crate::geometry::{
    log_substituted, sample_ring_curves, unit_sphere_area, volume_integrate, Curve, CurveFamily,
    Domain, FamilyKind, MetricField, NODES_PER_DECADE,
};
use crate::mapping::MappingSpec;
use crate::modulus::grid::GridResolution;
use crate::modulus::optimizer::{estimate_modulus, ModulusEstimate, ModulusOptions};
use crate::point::{check_dim, Point};

fn check_radii(r1: f64, r2: f64) -> Result<()> {
    if r1 > 0.0 && r1 < r2 && r2.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidRadii(format!(
            "need 0 < r1 < r2, got r1 = {r1}, r2 = {r2}"
        )))
    }
}

/// ∫_{r₁}^{r₂} t^{-(n-1)/(p-1)} dt in closed form.
fn radial_integral(n: usize, p: f64, r1: f64, r2: f64) -> f64 {
    let e = 1.0 - (n as f64 - 1.0) / (p - 1.0);
    if e.abs() < 1e-12 {
        (r2 / r1).ln()
    } else {
        (r2.powf(e) - r1.powf(e)) / e
    }
}

/// Closed-form p-modulus of the family joining the boundary spheres of a
/// flat ring `A(x₀, r₁, r₂)` in ℝⁿ.
pub fn ring_modulus_reference(n: usize, p: f64, r1: f64, r2: f64) -> Result<f64> {
    check_dim(n)?;
    check_radii(r1, r2)?;
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!("p > 1 required, got {p}")));
    }
    Ok(unit_sphere_area(n) * radial_integral(n, p, r1, r2).powf(1.0 - p))
}

/// The extremal radial weight `t^{-(n-1)/(p-1)}`, scaled to unit integral
/// over `[r₁, r₂]`.
pub fn extremal_eta(n: usize, p: f64, r1: f64, r2: f64) -> Result<ScalarFn> {
    check_dim(n)?;
    check_radii(r1, r2)?;
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!("p > 1 required, got {p}")));
    }
    let total = radial_integral(n, p, r1, r2);
    let k = (n as f64 - 1.0) / (p - 1.0);
    Ok(scalar(move |t| t.powf(-k) / total))
}

/// Vertex-wise image `f(Γ)`; each curve is first refined `refine_levels`
/// times (2^levels segments per original segment).
pub fn image_family(
    family: &CurveFamily,
    map: &MappingSpec,
    refine_levels: usize,
) -> Result<CurveFamily> {
    let curves: Vec<Result<Curve>> = family
        .curves()
        .par_iter()
        .map(|c| {
            let src = if refine_levels > 0 {
                c.refined(refine_levels)
            } else {
                c.clone()
            };
            let vertices = src
                .vertices()
                .iter()
                .map(|x| map.eval(x))
                .collect::<Result<Vec<_>>>()?;
            Curve::with_family(vertices, c.family_id())
        })
        .collect();
    Ok(CurveFamily::new(
        curves.into_iter().collect::<Result<Vec<_>>>()?,
        FamilyKind::Image,
    ))
}

#[derive(Clone, Debug)]
pub struct RingCheckOptions {
    /// Number of radial curves sampled in the source ring.
    pub samples: usize,
    /// Density grid for the image family.
    pub grid: GridResolution,
    /// Radial nodes of the right-hand volume rule.
    pub quadrature: usize,
    /// Midpoint refinements applied before mapping.
    pub refine_levels: usize,
    /// Center of the image grid; the source center when `None`.
    pub image_center: Option<Point>,
    pub max_iter: usize,
    pub tol: f64,
    /// Relative slack on the right-hand side.
    pub slack: f64,
}

impl Default for RingCheckOptions {
    fn default() -> Self {
        RingCheckOptions {
            samples: 400,
            grid: GridResolution::default(),
            quadrature: 512,
            refine_levels: 4,
            image_center: None,
            max_iter: 2000,
            tol: 1e-3,
            slack: 0.05,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RingReport {
    /// Estimated modulus of the image family.
    pub lhs: f64,
    /// ∫_A Q·η^p(|x - x₀|) dv.
    pub rhs: f64,
    pub holds: bool,
    /// ∫_{r₁}^{r₂} η.
    pub eta_integral: f64,
    pub estimate: ModulusEstimate,
}

impl RingReport {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

/// Smallest image radius, relative to the largest, still handled by a
/// polar grid around the image center.
const POLAR_GRID_MIN_RATIO: f64 = 1e-3;

fn image_domain(family: &CurveFamily, center: Point) -> Result<Domain> {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for c in family.curves() {
        for v in c.vertices() {
            let d = v.distance(&center);
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    if !(hi > 0.0 && hi.is_finite()) {
        return Err(Error::InvalidArgument("degenerate image family".into()));
    }
    let (lo, hi) = (lo * (1.0 - 1e-9), hi * (1.0 + 1e-9));
    if lo > POLAR_GRID_MIN_RATIO * hi {
        Domain::annulus(center, lo, hi)
    } else {
        Domain::ball(center, hi)
    }
}

/// Numerical check of `M_p(f(Γ(S₁, S₂, A))) ≤ ∫_A Q η^p(|x - x₀|) dv`
/// on a flat ring `A = A(x₀, r₁, r₂)`.
#[allow(clippy::too_many_arguments)]
pub fn check_ring_inequality(
    map: &MappingSpec,
    x0: Point,
    r1: f64,
    r2: f64,
    p: f64,
    q: &FieldFn,
    eta: &ScalarFn,
    opts: &RingCheckOptions,
) -> Result<RingReport> {
    check_radii(r1, r2)?;
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!("p > 1 required, got {p}")));
    }
    let eta_integral = log_substituted(|t| eta(t), r1, r2, NODES_PER_DECADE)?;
    if !(eta_integral >= 1.0 - 1e-6) {
        return Err(Error::NotAdmissible(eta_integral));
    }
    let n = x0.dim();
    let flat = MetricField::flat(n)?;
    let ring = Domain::annulus(x0, r1, r2)?;
    let rhs = volume_integrate(
        &ring,
        &flat,
        |x| {
            let t = x.distance(&x0);
            let e = eta(t);
            if e == 0.0 {
                0.0
            } else {
                q(x) * e.powf(p)
            }
        },
        opts.quadrature,
    )?;

    let source = sample_ring_curves(x0, r1, r2, opts.samples, 0.0, 0)?;
    let image = image_family(&source, map, opts.refine_levels)?;
    let domain = image_domain(&image, opts.image_center.unwrap_or(x0))?;
    let modulus_opts = ModulusOptions {
        p,
        grid: opts.grid,
        max_iter: opts.max_iter,
        tol: opts.tol,
        ..Default::default()
    };
    let estimate = estimate_modulus(&image, &domain, &flat, &modulus_opts)?;
    let lhs = estimate.value;
    Ok(RingReport {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + opts.slack),
        eta_integral,
        estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::constant_field;
    use std::f64::consts::{E, PI, TAU};

    #[test]
    fn reference_values() {
        assert!((ring_modulus_reference(2, 2.0, 1.0, E).unwrap() - TAU).abs() < 1e-12);
        let m = ring_modulus_reference(3, 3.0, 1.0, 2.0).unwrap();
        assert!((m - 4.0 * PI / 2f64.ln().powi(2)).abs() < 1e-12);
        let m = ring_modulus_reference(2, 3.0, 1.0, 2.0).unwrap();
        assert!((m - TAU / (2.0 * (2f64.sqrt() - 1.0)).powi(2)).abs() < 1e-12);
        assert!(matches!(
            ring_modulus_reference(2, 2.0, 2.0, 1.0),
            Err(Error::InvalidRadii(_))
        ));
    }

    /// Minimizes ∫ |u'|^p t^{n-1} ω dt over piecewise-linear u with
    /// u(r₁) = 0, u(r₂) = 1 by brute force: the discrete optimum of a
    /// radial profile is reached when the per-cell gradient is proportional
    /// to w_k^{-1/(p-1)}.
    fn brute_force_reference(n: usize, p: f64, r1: f64, r2: f64, cells: usize) -> f64 {
        // cell widths and radial weights
        let h = (r2 - r1) / cells as f64;
        let w: Vec<f64> = (0..cells)
            .map(|k| {
                let t = r1 + (k as f64 + 0.5) * h;
                t.powi(n as i32 - 1)
            })
            .collect();
        // projected gradient descent on gradients g_k ≥ 0 with Σ g_k h = 1
        let mut g = vec![1.0 / (r2 - r1); cells];
        let energy = |g: &[f64]| -> f64 {
            g.iter().zip(&w).map(|(gk, wk)| gk.powf(p) * wk * h).sum::<f64>() * unit_sphere_area(n)
        };
        let mut step = 1e-3;
        let mut best = energy(&g);
        for _ in 0..20000 {
            let grad: Vec<f64> = g
                .iter()
                .zip(&w)
                .map(|(gk, wk)| p * gk.powf(p - 1.0) * wk)
                .collect();
            let mean = grad.iter().sum::<f64>() / cells as f64;
            let trial: Vec<f64> = g
                .iter()
                .zip(&grad)
                .map(|(gk, dk)| (gk - step * (dk - mean)).max(0.0))
                .collect();
            let s: f64 = trial.iter().sum::<f64>() * h;
            let trial: Vec<f64> = trial.iter().map(|v| v / s).collect();
            let e = energy(&trial);
            if e < best {
                best = e;
                g = trial;
                step *= 1.1;
            } else {
                step *= 0.5;
            }
        }
        best
    }

    #[test]
    fn reference_matches_brute_force() {
        for &(n, p, r1, r2) in &[(2, 2.0, 1.0, E), (3, 3.0, 1.0, 2.0), (2, 3.0, 1.0, 2.0)] {
            let exact = ring_modulus_reference(n, p, r1, r2).unwrap();
            let brute = brute_force_reference(n, p, r1, r2, 200);
            assert!((brute / exact - 1.0).abs() < 1e-3, "{n} {p}: {brute} vs {exact}");
        }
    }

    #[test]
    fn eta_normalized() {
        let eta = extremal_eta(3, 2.5, 0.2, 1.5).unwrap();
        let total = log_substituted(|t| eta(t), 0.2, 1.5, NODES_PER_DECADE).unwrap();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn image_of_z_squared() {
        let d = Domain::ball(Point::new2(0.0, 0.0), 3.0).unwrap();
        let sq = MappingSpec::generic("z^2", d, |z| {
            Point::new2(z[0] * z[0] - z[1] * z[1], 2.0 * z[0] * z[1])
        });
        let seg = Curve::new(vec![Point::new2(1.0, 0.0), Point::new2(2.0, 0.0)]).unwrap();
        let fam = CurveFamily::new(vec![seg], FamilyKind::Custom);
        let img = image_family(&fam, &sq, 3).unwrap();
        let v = img.curves()[0].vertices();
        assert_eq!(v.len(), 9);
        assert_eq!(v[0], Point::new2(1.0, 0.0));
        assert_eq!(v[8], Point::new2(4.0, 0.0));
        assert!(v.iter().all(|x| x[1] == 0.0 && (1.0..=4.0).contains(&x[0])));
        assert_eq!(img.kind(), FamilyKind::Image);

        let id = MappingSpec::identity(d);
        assert_eq!(image_family(&fam, &id, 0).unwrap().curves()[0].vertices(), fam.curves()[0].vertices());
    }

    #[test]
    fn zero_eta_not_admissible() {
        let d = Domain::ball(Point::new2(0.0, 0.0), 3.0).unwrap();
        let id = MappingSpec::identity(d);
        let err = check_ring_inequality(
            &id,
            Point::new2(0.0, 0.0),
            1.0,
            2.0,
            2.0,
            &constant_field(1.0),
            &scalar(|_| 0.0),
            &RingCheckOptions::default(),
        );
        assert!(matches!(err, Err(Error::NotAdmissible(_))));
    }
}
