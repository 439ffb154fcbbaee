use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::MetricField;
use crate::mapping::{MappingSpec, RadialProfile};
use crate::point::Point;

/// Threshold below which J or the full derivative counts as zero.
pub const ZERO_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DerivativeSource {
    /// Exact derivative when the mapping has one, central differences otherwise.
    #[default]
    Auto,
    Exact,
    Numeric,
}

#[derive(Clone, Debug)]
pub struct DifferentialOptions {
    pub h: f64,
    pub source: DerivativeSource,
    /// Richardson extrapolation of the central differences (h and h/2).
    pub richardson: bool,
    /// Source and target metrics; singular values are scaled by λ(f(x))/λ(x).
    pub metrics: Option<(MetricField, MetricField)>,
}

impl Default for DifferentialOptions {
    fn default() -> Self {
        DifferentialOptions {
            h: 1e-5,
            source: DerivativeSource::Auto,
            richardson: false,
            metrics: None,
        }
    }
}

impl DifferentialOptions {
    pub fn numeric(h: f64) -> Self {
        DifferentialOptions {
            h,
            source: DerivativeSource::Numeric,
            ..Default::default()
        }
    }
}

/// Jacobian, principal stretches and Jacobian determinant at one point.
#[derive(Clone, Debug)]
pub struct DifferentialReport {
    pub point: Point,
    pub jacobian: DMatrix<f64>,
    /// λ₁ ≤ … ≤ λₙ.
    pub singular_values: Vec<f64>,
    /// J(x, f), with sign.
    pub jacobian_det: f64,
    pub finite_distortion: bool,
    /// Stretches come from closed-form data, so zero tests are exact
    /// rather than thresholded.
    pub exact_stretches: bool,
}

impl DifferentialReport {
    /// Builds a report from singular values alone (used by exact paths).
    pub fn from_stretches(point: Point, mut stretches: Vec<f64>) -> Self {
        stretches.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = stretches.len();
        let jac = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(stretches.clone()));
        let det = stretches.iter().product();
        let mut r = DifferentialReport {
            point,
            jacobian: jac,
            singular_values: stretches,
            jacobian_det: det,
            finite_distortion: true,
            exact_stretches: true,
        };
        debug_assert_eq!(r.singular_values.len(), n);
        r.finite_distortion = r.implication_holds();
        r
    }

    /// L(x, f) = λₙ.
    pub fn max_stretch(&self) -> f64 {
        *self.singular_values.last().unwrap()
    }

    /// l(x, f) = λ₁.
    pub fn min_stretch(&self) -> f64 {
        self.singular_values[0]
    }

    fn derivative_vanishes(&self) -> bool {
        if self.exact_stretches {
            self.max_stretch() == 0.0
        } else {
            self.max_stretch() <= ZERO_THRESHOLD
        }
    }

    /// Numerically, J counts as zero relative to the scale `max(Lⁿ, 1)`.
    fn jacobian_vanishes(&self) -> bool {
        if self.exact_stretches {
            // the product may underflow although no stretch vanishes
            return self.singular_values.contains(&0.0);
        }
        let n = self.singular_values.len() as i32;
        self.jacobian_det.abs() <= ZERO_THRESHOLD * self.max_stretch().powi(n).max(1.0)
    }

    /// ln |J|, from the stretches when the product left the f64 range.
    fn log_jacobian(&self) -> f64 {
        if self.exact_stretches {
            self.singular_values.iter().map(|v| v.ln()).sum()
        } else {
            self.jacobian_det.abs().ln()
        }
    }

    fn implication_holds(&self) -> bool {
        !self.jacobian_vanishes() || self.derivative_vanishes()
    }
}

fn numeric_jacobian(map: &MappingSpec, x: &Point, h: f64) -> Result<DMatrix<f64>> {
    let n = x.dim();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let e = Point::unit(n, j) * h;
        let fp = map.eval(&(*x + e))?;
        let fm = map.eval(&(*x - e))?;
        for i in 0..n {
            m[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(m)
}

fn sorted_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s
}

/// Differential data at `x` with central differences of step `h` where no
/// exact derivative is available.
pub fn differential_report(map: &MappingSpec, x: &Point, h: f64) -> Result<DifferentialReport> {
    differential_report_with(
        map,
        x,
        &DifferentialOptions {
            h,
            ..Default::default()
        },
    )
}

pub fn differential_report_with(
    map: &MappingSpec,
    x: &Point,
    opts: &DifferentialOptions,
) -> Result<DifferentialReport> {
    let h = opts.h;
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("h must be positive, got {h}")));
    }
    if x.dim() != map.dim() {
        return Err(Error::InvalidArgument("point and mapping dimensions differ".into()));
    }
    let distance = map.distance_to_singularity(x);
    if distance <= 2.0 * h {
        return Err(Error::NearSingularity { distance });
    }
    let exact = match opts.source {
        DerivativeSource::Numeric => None,
        DerivativeSource::Auto => map.exact_derivative(x),
        DerivativeSource::Exact => Some(map.exact_derivative(x).ok_or_else(|| {
            Error::InvalidArgument(format!("{} has no exact derivative", map.name()))
        })?),
    };
    let jacobian = match exact {
        Some(m) => m,
        None if opts.richardson => {
            let coarse = numeric_jacobian(map, x, h)?;
            let fine = numeric_jacobian(map, x, 0.5 * h)?;
            (fine * 4.0 - coarse) / 3.0
        }
        None => numeric_jacobian(map, x, h)?,
    };
    if jacobian.iter().any(|v| !v.is_finite()) {
        return Err(Error::EvaluationDomain(x.to_string()));
    }
    let mut singular_values = sorted_singular_values(&jacobian);
    let mut det = jacobian.determinant();
    if let Some((source, target)) = &opts.metrics {
        let fx = map.eval(x)?;
        let ratio = target.factor_at(&fx) / source.factor_at(x);
        for s in singular_values.iter_mut() {
            *s *= ratio;
        }
        det *= ratio.powi(x.dim() as i32);
    }
    let mut report = DifferentialReport {
        point: *x,
        jacobian,
        singular_values,
        jacobian_det: det,
        finite_distortion: true,
        exact_stretches: false,
    };
    report.finite_distortion = report.implication_holds();
    Ok(report)
}

/// Tangential and radial stretches `(ρ(r)/r, ρ′(r))` of a radial map.
pub fn radial_stretches(profile: &RadialProfile, r: f64) -> (f64, f64) {
    ((profile.rho)(r) / r, (profile.drho)(r))
}

/// K_{I,p} = J / l^p, with 1 where the derivative vanishes and +∞ where only J does.
pub fn inner_dilatation(report: &DifferentialReport, p: f64) -> f64 {
    if report.derivative_vanishes() {
        1.0
    } else if report.jacobian_vanishes() {
        f64::INFINITY
    } else {
        let (j, lp) = (report.jacobian_det.abs(), report.min_stretch().powf(p));
        if j.is_normal() && lp.is_normal() && j.is_finite() && lp.is_finite() {
            j / lp
        } else {
            (report.log_jacobian() - p * report.min_stretch().ln()).exp()
        }
    }
}

/// K_{O,p} = L^p / J, same degenerate branches as the inner dilatation.
pub fn outer_dilatation(report: &DifferentialReport, p: f64) -> f64 {
    if report.derivative_vanishes() {
        1.0
    } else if report.jacobian_vanishes() {
        f64::INFINITY
    } else {
        let (lp, j) = (report.max_stretch().powf(p), report.jacobian_det.abs());
        if j.is_normal() && lp.is_normal() && j.is_finite() && lp.is_finite() {
            lp / j
        } else {
            (p * report.max_stretch().ln() - report.log_jacobian()).exp()
        }
    }
}

/// Uniform sample points of the mapping's domain, at least `margin` away
/// from its singular set.
pub fn sample_domain_points(
    map: &MappingSpec,
    count: usize,
    margin: f64,
    seed: u64,
) -> Vec<Point> {
    let domain = map.domain();
    let center = domain.center();
    let r = domain.outer_radius();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let mut x = center;
        for v in x.as_mut_slice() {
            *v += rng.gen_range(-r..r);
        }
        if domain.contains(&x) && map.distance_to_singularity(&x) > margin {
            out.push(x);
        }
    }
    out
}

/// Fraction of sample points where `J = 0 ⇒ L = 0` holds.
pub fn finite_distortion_survey(map: &MappingSpec, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let h = 1e-5 * 2.0 * map.domain().outer_radius();
    let points = sample_domain_points(map, samples, 4.0 * h, seed);
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "could not sample the mapping's domain".into(),
        ));
    }
    let flags: Vec<Result<bool>> = points
        .par_iter()
        .map(|x| differential_report(map, x, h).map(|r| r.finite_distortion))
        .collect();
    let mut ok = 0usize;
    for f in flags {
        if f? {
            ok += 1;
        }
    }
    Ok(ok as f64 / points.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::scalar;
    use crate::geometry::Domain;

    fn planar_square() -> MappingSpec {
        let d = Domain::ball(Point::new2(0.0, 0.0), 2.0).unwrap();
        MappingSpec::generic("z^2", d, |z| {
            Point::new2(z[0] * z[0] - z[1] * z[1], 2.0 * z[0] * z[1])
        })
    }

    fn radial_power(alpha: f64, n: usize) -> MappingSpec {
        let d = Domain::punctured_ball(Point::origin(n).unwrap(), 1.0).unwrap();
        MappingSpec::radial(
            "power",
            d,
            RadialProfile {
                rho: scalar(move |r| r.powf(alpha)),
                drho: scalar(move |r| alpha * r.powf(alpha - 1.0)),
            },
        )
    }

    #[test]
    fn identity_report() {
        let d = Domain::ball(Point::new3(0.0, 0.0, 0.0), 1.0).unwrap();
        let id = MappingSpec::identity(d).without_derivative();
        let r = differential_report(&id, &Point::new3(0.1, 0.2, -0.3), 1e-5).unwrap();
        for s in &r.singular_values {
            assert!((s - 1.0).abs() < 1e-9);
        }
        assert!((r.jacobian_det - 1.0).abs() < 1e-9);
        assert!((inner_dilatation(&r, 3.0) - 1.0).abs() < 1e-8);
        assert!((outer_dilatation(&r, 1.5) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn planar_square_is_conformal() {
        let r = differential_report(&planar_square(), &Point::new2(1.0, 0.0), 1e-5).unwrap();
        assert!((r.singular_values[0] - 2.0).abs() < 1e-8);
        assert!((r.singular_values[1] - 2.0).abs() < 1e-8);
        assert!((r.jacobian_det - 4.0).abs() < 1e-8);
        assert!((outer_dilatation(&r, 2.0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn stretch_formulas() {
        let id = RadialProfile {
            rho: scalar(|r| r),
            drho: scalar(|_| 1.0),
        };
        assert_eq!(radial_stretches(&id, 0.3), (1.0, 1.0));
        let blow = RadialProfile {
            rho: scalar(|r| 1.0 + r.sqrt()),
            drho: scalar(|r| 0.5 / r.sqrt()),
        };
        assert_eq!(radial_stretches(&blow, 0.25), (6.0, 1.0));
        let sq = RadialProfile {
            rho: scalar(|r| r * r),
            drho: scalar(|r| 2.0 * r),
        };
        assert_eq!(radial_stretches(&sq, 0.5), (0.5, 1.0));
    }

    #[test]
    fn radial_power_dilatations() {
        let f = radial_power(0.5, 2);
        for r in [0.05, 0.3, 0.8] {
            let x = Point::new2(r * 0.6, -r * 0.8);
            let rep = differential_report_with(&f, &x, &DifferentialOptions::numeric(1e-6)).unwrap();
            assert!((inner_dilatation(&rep, 2.0) - 2.0).abs() < 1e-5);
            assert!((outer_dilatation(&rep, 2.0) - 2.0).abs() < 1e-5);
        }
    }

    #[test]
    fn degenerate_branches() {
        let d = Domain::ball(Point::new2(0.0, 0.0), 1.0).unwrap();
        let constant = MappingSpec::generic("const", d, |_| Point::new2(3.0, 3.0));
        let r = differential_report(&constant, &Point::new2(0.1, 0.1), 1e-5).unwrap();
        assert_eq!(inner_dilatation(&r, 2.0), 1.0);
        assert_eq!(outer_dilatation(&r, 2.0), 1.0);
        assert!(r.finite_distortion);

        let fold = MappingSpec::generic("projection", d, |x| Point::new2(x[0], 0.0));
        let r = differential_report(&fold, &Point::new2(0.1, 0.1), 1e-5).unwrap();
        assert_eq!(inner_dilatation(&r, 2.0), f64::INFINITY);
        assert_eq!(outer_dilatation(&r, 2.0), f64::INFINITY);
        assert!(!r.finite_distortion);
        assert_eq!(finite_distortion_survey(&fold, 10, 0).unwrap(), 0.0);
        assert_eq!(finite_distortion_survey(&constant, 100, 0).unwrap(), 1.0);
    }

    #[test]
    fn near_singularity_is_rejected() {
        let f = radial_power(0.5, 3);
        let err = differential_report(&f, &Point::new3(1e-5, 0.0, 0.0), 1e-5);
        assert!(matches!(err, Err(Error::NearSingularity { .. })));
    }

    #[test]
    fn richardson_improves_accuracy() {
        let d = Domain::ball(Point::new2(0.0, 0.0), 2.0).unwrap();
        let cube = MappingSpec::generic("z^3", d, |z| {
            let (x, y) = (z[0], z[1]);
            Point::new2(x * x * x - 3.0 * x * y * y, 3.0 * x * x * y - y * y * y)
        });
        let x = Point::new2(0.7, 0.2);
        let exact = 3.0 * x.norm().powi(2);
        let mut opts = DifferentialOptions::numeric(1e-2);
        let plain = differential_report_with(&cube, &x, &opts).unwrap();
        opts.richardson = true;
        let rich = differential_report_with(&cube, &x, &opts).unwrap();
        assert!((rich.max_stretch() - exact).abs() < (plain.max_stretch() - exact).abs());
    }

    #[test]
    fn conformal_metric_scaling() {
        let d = Domain::ball(Point::new2(0.0, 0.0), 1.0).unwrap();
        let id = MappingSpec::identity(d);
        let src = MetricField::constant(2, 1.0).unwrap();
        let dst = MetricField::constant(2, 3.0).unwrap();
        let opts = DifferentialOptions {
            metrics: Some((src, dst)),
            ..Default::default()
        };
        let r = differential_report_with(&id, &Point::new2(0.1, 0.0), &opts).unwrap();
        assert!((r.max_stretch() - 3.0).abs() < 1e-12);
        assert!((r.jacobian_det - 9.0).abs() < 1e-12);
        // dilatations at p = n are unchanged by a constant rescaling
        assert!((inner_dilatation(&r, 2.0) - 1.0).abs() < 1e-12);
    }
}
