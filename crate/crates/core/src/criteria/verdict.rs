use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    Fmo,
    NotFmo,
    Diverges,
    Converges,
    Inconclusive,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictKind::Fmo => "FMO",
            VerdictKind::NotFmo => "NOT_FMO",
            VerdictKind::Diverges => "DIVERGES",
            VerdictKind::Converges => "CONVERGES",
            VerdictKind::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

/// Decision rule for the decade ladder of partial integrals `I_k`.
///
/// DIVERGES when some `I_k` overflowed, or when every local exponent
/// `Δ ln I / Δ ln k` over the last `window` steps is at least
/// `growth_exponent`. Otherwise CONVERGES when each of the last `window`
/// increments is below `cauchy_tol · I_k`. Otherwise INCONCLUSIVE.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRule {
    pub window: usize,
    pub growth_exponent: f64,
    pub cauchy_tol: f64,
}

impl Default for DivergenceRule {
    fn default() -> Self {
        DivergenceRule {
            window: 3,
            growth_exponent: 0.05,
            cauchy_tol: 1e-4,
        }
    }
}

/// Decision rule for the dyadic mean-oscillation sequence.
///
/// NOT_FMO when every consecutive ratio over the last `window` scales is at
/// least `growth_factor`. FMO when all of them are zero, or their maximum is
/// at most `median_factor` times their median. Otherwise INCONCLUSIVE.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FmoRule {
    pub window: usize,
    pub median_factor: f64,
    pub growth_factor: f64,
}

impl Default for FmoRule {
    fn default() -> Self {
        FmoRule {
            window: 4,
            median_factor: 2.0,
            growth_factor: 1.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "snake_case")]
pub enum Rule {
    Divergence(DivergenceRule),
    Fmo(FmoRule),
}

/// Outcome of a criterion test with its evidence trail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub kind: VerdictKind,
    /// (scale, statistic) pairs; decade index and `I_k` for the divergence
    /// test, radius and mean oscillation for the FMO test.
    pub evidence: Vec<(f64, f64)>,
    /// Local asymptotic exponents over the decision window.
    pub exponents: Vec<f64>,
    pub rule: Rule,
}

impl CriterionVerdict {
    pub(crate) fn from_evidence(evidence: Vec<(f64, f64)>, rule: Rule) -> Self {
        let (kind, exponents) = decide(&evidence, &rule);
        CriterionVerdict {
            kind,
            evidence,
            exponents,
            rule,
        }
    }

    /// Re-derives the verdict from the stored evidence.
    pub fn decide(&self) -> VerdictKind {
        decide(&self.evidence, &self.rule).0
    }
}

pub fn decide(evidence: &[(f64, f64)], rule: &Rule) -> (VerdictKind, Vec<f64>) {
    match rule {
        Rule::Divergence(r) => decide_divergence(evidence, r),
        Rule::Fmo(r) => decide_fmo(evidence, r),
    }
}

fn decide_divergence(ev: &[(f64, f64)], rule: &DivergenceRule) -> (VerdictKind, Vec<f64>) {
    if ev.iter().any(|&(_, v)| v == f64::INFINITY) {
        return (VerdictKind::Diverges, Vec::new());
    }
    let w = rule.window.max(1);
    if ev.len() < w + 1 {
        return (VerdictKind::Inconclusive, Vec::new());
    }
    let tail = &ev[ev.len() - w - 1..];
    let exponents: Vec<f64> = tail
        .windows(2)
        .map(|s| {
            let (k0, i0) = s[0];
            let (k1, i1) = s[1];
            if i0 > 0.0 && i1 > 0.0 {
                (i1 / i0).ln() / (k1 / k0).ln()
            } else {
                0.0
            }
        })
        .collect();
    if exponents.iter().all(|&e| e >= rule.growth_exponent) {
        return (VerdictKind::Diverges, exponents);
    }
    let cauchy = tail
        .windows(2)
        .all(|s| (s[1].1 - s[0].1).abs() < rule.cauchy_tol * s[1].1.abs());
    if cauchy {
        (VerdictKind::Converges, exponents)
    } else {
        (VerdictKind::Inconclusive, exponents)
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

fn decide_fmo(ev: &[(f64, f64)], rule: &FmoRule) -> (VerdictKind, Vec<f64>) {
    let w = rule.window.max(2);
    if ev.len() < w {
        return (VerdictKind::Inconclusive, Vec::new());
    }
    let tail = &ev[ev.len() - w..];
    let osc: Vec<f64> = tail.iter().map(|e| e.1).collect();
    // exponent of growth in 1/ε between consecutive scales
    let exponents: Vec<f64> = tail
        .windows(2)
        .map(|s| {
            if s[0].1 > 0.0 && s[1].1 > 0.0 {
                (s[1].1 / s[0].1).ln() / (s[0].0 / s[1].0).ln()
            } else {
                0.0
            }
        })
        .collect();
    if osc.iter().all(|&o| o == 0.0) {
        return (VerdictKind::Fmo, exponents);
    }
    let growing = osc
        .windows(2)
        .all(|s| s[0] > 0.0 && s[1] >= rule.growth_factor * s[0]);
    if growing {
        return (VerdictKind::NotFmo, exponents);
    }
    let max = osc.iter().cloned().fold(0.0, f64::max);
    if max <= rule.median_factor * median(&osc) {
        (VerdictKind::Fmo, exponents)
    } else {
        (VerdictKind::Inconclusive, exponents)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divergence_rule_cases() {
        let rule = Rule::Divergence(DivergenceRule::default());
        let linear: Vec<(f64, f64)> = (1..=10).map(|k| (k as f64, k as f64)).collect();
        assert_eq!(decide(&linear, &rule).0, VerdictKind::Diverges);
        let flat: Vec<(f64, f64)> = (1..=10).map(|k| (k as f64, 1.0 - 1e-9 / k as f64)).collect();
        assert_eq!(decide(&flat, &rule).0, VerdictKind::Converges);
        let slow: Vec<(f64, f64)> = (1..=10).map(|k| (k as f64, 2.0 - (k as f64).powi(-2))).collect();
        assert_eq!(decide(&slow, &rule).0, VerdictKind::Inconclusive);
        let overflow = vec![(1.0, 1.0), (2.0, f64::INFINITY)];
        assert_eq!(decide(&overflow, &rule).0, VerdictKind::Diverges);
    }

    #[test]
    fn fmo_rule_cases() {
        let rule = Rule::Fmo(FmoRule::default());
        let scales: Vec<f64> = (3..=12).map(|k| 0.5f64.powi(k)).collect();
        let zero: Vec<(f64, f64)> = scales.iter().map(|&e| (e, 0.0)).collect();
        assert_eq!(decide(&zero, &rule).0, VerdictKind::Fmo);
        let doubling: Vec<(f64, f64)> = scales.iter().map(|&e| (e, 1.0 / e)).collect();
        let (kind, exps) = decide(&doubling, &rule);
        assert_eq!(kind, VerdictKind::NotFmo);
        assert!(exps.iter().all(|e| (e - 1.0).abs() < 1e-12));
        let bounded: Vec<(f64, f64)> = scales.iter().map(|&e| (e, 0.6)).collect();
        assert_eq!(decide(&bounded, &rule).0, VerdictKind::Fmo);
        let spike = vec![(0.4, 1.0), (0.2, 1.0), (0.1, 1.0), (0.05, 10.0)];
        assert_eq!(decide(&spike, &rule).0, VerdictKind::Inconclusive);
    }

    #[test]
    fn serde_names() {
        assert_eq!(serde_json::to_string(&VerdictKind::NotFmo).unwrap(), "\"NOT_FMO\"");
        assert_eq!(VerdictKind::Converges.to_string(), "CONVERGES");
    }
}
