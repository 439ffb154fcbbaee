use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::criteria::verdict::{CriterionVerdict, FmoRule, Rule};
use crate::error::{Error, Result};
use crate::geometry::{volume_integrate, Domain, MetricField};
use crate::point::Point;

/// Oscillations below this fraction of the mean of |Q| are reported as 0.
pub const OSCILLATION_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct FmoOptions {
    /// Exponents k of the radii ε_k = 2^{-k}.
    pub k_range: RangeInclusive<i32>,
    pub resolution: usize,
    pub rule: FmoRule,
}

impl Default for FmoOptions {
    fn default() -> Self {
        FmoOptions {
            k_range: 3..=12,
            resolution: 256,
            rule: FmoRule::default(),
        }
    }
}

/// Mean oscillation of Q over balls `B(x₀, 2^{-k})`.
///
/// Evidence holds `(ε_k, (1/v(B)) ∫_B |Q − Q̄_B| dv)` in order of
/// decreasing ε.
pub fn fmo_test<F>(q: F, x0: Point, metric: &MetricField, opts: &FmoOptions) -> Result<CriterionVerdict>
where
    F: Fn(&Point) -> f64 + Sync,
{
    if opts.k_range.is_empty() {
        return Err(Error::InvalidArgument("empty scale range".into()));
    }
    let scales: Vec<f64> = opts.k_range.clone().map(|k| 0.5f64.powi(k)).collect();
    let rows: Vec<Result<(f64, f64)>> = scales
        .par_iter()
        .map(|&eps| {
            let ball = Domain::punctured_ball(x0, eps)?;
            let volume = volume_integrate(&ball, metric, |_| 1.0, opts.resolution)?;
            let mean = volume_integrate(&ball, metric, &q, opts.resolution)? / volume;
            let size = volume_integrate(&ball, metric, |x| q(x).abs(), opts.resolution)? / volume;
            let osc =
                volume_integrate(&ball, metric, |x| (q(x) - mean).abs(), opts.resolution)? / volume;
            let osc = if osc <= OSCILLATION_FLOOR * size { 0.0 } else { osc };
            Ok((eps, osc))
        })
        .collect();
    let evidence = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CriterionVerdict::from_evidence(evidence, Rule::Fmo(opts.rule)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::VerdictKind;

    #[test]
    fn classic_cases() {
        let o = Point::new2(0.0, 0.0);
        let flat = MetricField::flat(2).unwrap();
        let opts = FmoOptions::default();
        let c = fmo_test(|_| 7.0, o, &flat, &opts).unwrap();
        assert_eq!(c.kind, VerdictKind::Fmo);
        assert!(c.evidence.iter().all(|e| e.1 == 0.0));
        let log = fmo_test(|x| (1.0 / x.norm()).ln(), o, &flat, &opts).unwrap();
        assert_eq!(log.kind, VerdictKind::Fmo);
        let inv = fmo_test(|x| 1.0 / x.norm(), o, &flat, &opts).unwrap();
        assert_eq!(inv.kind, VerdictKind::NotFmo);
    }

    #[test]
    fn log_oscillation_is_scale_free() {
        // for log(1/|x|) in the plane the oscillation equals 1/e on every ball
        let o = Point::new2(0.0, 0.0);
        let flat = MetricField::flat(2).unwrap();
        let v = fmo_test(|x| (1.0 / x.norm()).ln(), o, &flat, &FmoOptions::default()).unwrap();
        for &(_, osc) in &v.evidence {
            assert!((osc - 1.0 / std::f64::consts::E).abs() < 1e-3, "{osc}");
        }
    }
}
