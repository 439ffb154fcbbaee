use crate::criteria::verdict::{CriterionVerdict, DivergenceRule, Rule};
use crate::error::{Error, Result};
use crate::geometry::{log_substituted, NODES_PER_DECADE};
use crate::point::check_dim;

/// Smallest lower limit the ladder will reach.
const LADDER_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceOptions {
    pub decades: usize,
    pub nodes_per_decade: usize,
    pub rule: DivergenceRule,
}

impl Default for DivergenceOptions {
    fn default() -> Self {
        DivergenceOptions {
            decades: 200,
            nodes_per_decade: NODES_PER_DECADE,
            rule: DivergenceRule::default(),
        }
    }
}

/// Classifies `∫_0^{ε₀} dt / (t^{(n-1)/(p-1)} q(t)^{1/(p-1)})`.
///
/// Evidence holds `(k, I_k)` with `I_k` the integral over
/// `[ε₀·10^{-k}, ε₀]`; the ladder stops early at 10⁻³⁰⁰ and as soon as a
/// partial integral overflows (recorded as `+∞`).
pub fn divergence_test<F>(
    q: F,
    eps0: f64,
    n: usize,
    p: f64,
    opts: &DivergenceOptions,
) -> Result<CriterionVerdict>
where
    F: Fn(f64) -> f64,
{
    check_dim(n)?;
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!("p > 1 required, got {p}")));
    }
    if !(eps0 > 0.0 && eps0.is_finite()) {
        return Err(Error::InvalidArgument(format!("ε₀ must be positive, got {eps0}")));
    }
    if opts.decades < 3 {
        return Err(Error::InvalidArgument("at least 3 decades required".into()));
    }
    let a = (n as f64 - 1.0) / (p - 1.0);
    let b = 1.0 / (p - 1.0);
    // log form avoids 0·∞ when t^a and q^b over- and underflow together
    let integrand = |t: f64| (-a * t.ln() - b * q(t).ln()).exp();
    let max_k = ((eps0 / LADDER_FLOOR).log10().floor() as usize).min(opts.decades);
    let mut evidence = Vec::with_capacity(max_k);
    let mut total = 0.0;
    let mut upper = eps0;
    for k in 1..=max_k {
        let lower = eps0 * 10f64.powi(-(k as i32));
        match log_substituted(integrand, lower, upper, opts.nodes_per_decade) {
            Ok(piece) => total += piece,
            Err(Error::NonFiniteIntegrand { value, .. }) if value == f64::INFINITY => {
                total = f64::INFINITY
            }
            Err(e) => return Err(e),
        }
        if !total.is_finite() {
            total = f64::INFINITY;
        }
        evidence.push((k as f64, total));
        if total == f64::INFINITY {
            break;
        }
        upper = lower;
    }
    Ok(CriterionVerdict::from_evidence(
        evidence,
        Rule::Divergence(opts.rule),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::VerdictKind;
    use std::f64::consts::E;

    fn verdict(q: impl Fn(f64) -> f64, eps0: f64) -> VerdictKind {
        divergence_test(q, eps0, 2, 2.0, &DivergenceOptions::default())
            .unwrap()
            .kind
    }

    #[test]
    fn classic_cases() {
        assert_eq!(verdict(|_| 1.0, 0.5), VerdictKind::Diverges);
        assert_eq!(verdict(|t| (E / t).ln(), 0.5), VerdictKind::Diverges);
        assert_eq!(verdict(|t| (E / t).ln().powi(2), 0.5), VerdictKind::Converges);
    }

    #[test]
    fn partial_integrals_match_closed_form() {
        let v = divergence_test(|_| 1.0, 1.0, 3, 3.0, &DivergenceOptions::default()).unwrap();
        for &(k, ik) in &v.evidence[..5] {
            assert!((ik - k * 10f64.ln()).abs() < 1e-9 * ik);
        }
        assert_eq!(v.decide(), v.kind);
    }

    #[test]
    fn overflow_is_divergence() {
        let v = divergence_test(|_| 1.0, 0.5, 3, 1.05, &DivergenceOptions::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::Diverges);
        assert_eq!(v.evidence.last().unwrap().1, f64::INFINITY);
    }

    #[test]
    fn too_few_decades() {
        let opts = DivergenceOptions {
            decades: 2,
            ..Default::default()
        };
        assert!(divergence_test(|_| 1.0, 0.5, 2, 2.0, &opts).is_err());
    }
}
