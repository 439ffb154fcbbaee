use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{volume_integrate, Domain, MetricField};

#[derive(Clone, Debug, PartialEq)]
pub struct LsOptions {
    /// Ladder ε_k = r_outer · 10^{-k}, k = 1..=decades.
    pub decades: usize,
    /// Radial nodes per shell.
    pub resolution: usize,
    /// Increments counted by the Cauchy check.
    pub window: usize,
    pub cauchy_tol: f64,
}

impl Default for LsOptions {
    fn default() -> Self {
        LsOptions {
            decades: 40,
            resolution: 256,
            window: 3,
            cauchy_tol: 1e-4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LsReport {
    /// `(ε_k, ∫_{A(x₀, ε_k, r_outer)} Q^s dv)`.
    pub values: Vec<(f64, f64)>,
    pub value: f64,
    pub converged: bool,
}

/// Tracks `∫ |Q|^s dv` over annuli shrinking toward the domain center.
///
/// For an annulus the ladder stops at its inner radius and the last entry
/// is the full integral.
pub fn ls_integrability_test<F>(q: F, domain: &Domain, s: f64, opts: &LsOptions) -> Result<LsReport>
where
    F: Fn(&crate::point::Point) -> f64 + Sync,
{
    if !(s >= 1.0) {
        return Err(Error::InvalidArgument(format!("s ≥ 1 required, got {s}")));
    }
    if opts.decades < opts.window + 1 {
        return Err(Error::InvalidArgument("ladder shorter than the decision window".into()));
    }
    let flat = MetricField::flat(domain.dim())?;
    let center = domain.center();
    let (r_in, r_out) = (domain.inner_radius(), domain.outer_radius());
    let mut values = Vec::with_capacity(opts.decades);
    let mut total = 0.0;
    let mut upper = r_out;
    for k in 1..=opts.decades {
        let lower = (r_out * 10f64.powi(-(k as i32))).max(r_in);
        if lower >= upper {
            break;
        }
        let shell = if lower > 0.0 {
            Domain::annulus(center, lower, upper)?
        } else {
            Domain::punctured_ball(center, upper)?
        };
        total += volume_integrate(&shell, &flat, |x| q(x).abs().powf(s), opts.resolution)?;
        values.push((lower, total));
        upper = lower;
    }
    let converged = if r_in > 0.0 && values.last().map(|v| v.0) == Some(r_in) {
        total.is_finite()
    } else if values.len() > opts.window {
        values[values.len() - opts.window - 1..]
            .windows(2)
            .all(|w| (w[1].1 - w[0].1) < opts.cauchy_tol * w[1].1)
    } else {
        false
    };
    Ok(LsReport {
        values,
        value: total,
        converged: converged && total.is_finite(),
    })
}
