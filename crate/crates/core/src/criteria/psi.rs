use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::{scalar, ScalarFn};
use crate::geometry::{log_substituted, volume_integrate, Domain, MetricField, NODES_PER_DECADE};
use crate::point::Point;

/// Weight ψ on `(0, ε₀)` together with `I(ε, ε₀) = ∫_ε^{ε₀} ψ` on a list of ε.
#[derive(Clone)]
pub struct PsiSchedule {
    psi: ScalarFn,
    eps0: f64,
    integrals: Vec<(f64, f64)>,
}

impl std::fmt::Debug for PsiSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PsiSchedule")
            .field("eps0", &self.eps0)
            .field("integrals", &self.integrals)
            .finish()
    }
}

impl PsiSchedule {
    /// Fails with `PsiNotIntegrable` unless `0 < I(ε, ε₀) < ∞` for every ε.
    pub fn new(psi: ScalarFn, eps0: f64, eps: &[f64]) -> Result<Self> {
        let mut integrals = Vec::with_capacity(eps.len());
        for &e in eps {
            if !(e > 0.0 && e < eps0) {
                return Err(Error::InvalidArgument(format!(
                    "ε = {e} must lie in (0, ε₀ = {eps0})"
                )));
            }
            let i = match log_substituted(|t| psi(t), e, eps0, NODES_PER_DECADE) {
                Ok(v) => v,
                Err(Error::NonFiniteIntegrand { value, .. }) => value,
                Err(err) => return Err(err),
            };
            if !(i > 0.0 && i.is_finite()) {
                return Err(Error::PsiNotIntegrable(i));
            }
            integrals.push((e, i));
        }
        Ok(PsiSchedule {
            psi,
            eps0,
            integrals,
        })
    }

    pub fn psi(&self) -> &ScalarFn {
        &self.psi
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    /// `(ε, I(ε, ε₀))` pairs in the order requested.
    pub fn integrals(&self) -> &[(f64, f64)] {
        &self.integrals
    }

    /// `η = ψ / I(ε, ε₀)` for the k-th ε; unit integral over `[ε, ε₀]`.
    pub fn eta(&self, k: usize) -> ScalarFn {
        let psi = self.psi.clone();
        let i = self.integrals[k].1;
        scalar(move |t| psi(t) / i)
    }
}

/// `ψ(t) = (t log(1/t))^{-n/p}`.
pub fn log_power_psi(n: usize, p: f64) -> ScalarFn {
    let e = n as f64 / p;
    scalar(move |t: f64| (t * (1.0 / t).ln()).powf(-e))
}

#[derive(Clone)]
pub enum PsiChoice {
    LogPower,
    Custom(ScalarFn),
}

#[derive(Clone, Debug, Serialize)]
pub struct OiReport {
    pub eps: Vec<f64>,
    /// `∫_{A(x₀,ε,ε₀)} Q ψ^p(|x − x₀|) dv`.
    pub numerators: Vec<f64>,
    /// `I(ε, ε₀)^p`.
    pub denominators: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Ratios strictly decrease and the last is below `factor` times the first.
    pub plausible: bool,
    pub factor: f64,
}

/// Default decay factor required between the first and last ratio.
pub const OI_DECAY_FACTOR: f64 = 0.3;

/// Evidence for `∫_{A(x₀,ε,ε₀)} Q ψ^p dv = o(I^p(ε, ε₀))` as ε → 0.
#[allow(clippy::too_many_arguments)]
pub fn oi_condition_check<F>(
    q: F,
    psi: &PsiChoice,
    x0: Point,
    p: f64,
    eps0: f64,
    eps: &[f64],
    resolution: usize,
) -> Result<OiReport>
where
    F: Fn(&Point) -> f64 + Sync,
{
    let n = x0.dim();
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!("p > 1 required, got {p}")));
    }
    if eps.is_empty() || eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(
            "ε sequence must be non-empty and strictly decreasing".into(),
        ));
    }
    let psi = match psi {
        PsiChoice::LogPower => {
            if !(eps0 < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "log-power ψ needs ε₀ < 1, got {eps0}"
                )));
            }
            log_power_psi(n, p)
        }
        PsiChoice::Custom(f) => f.clone(),
    };
    let schedule = PsiSchedule::new(psi.clone(), eps0, eps)?;
    let flat = MetricField::flat(n)?;
    let mut numerators = Vec::with_capacity(eps.len());
    let mut denominators = Vec::with_capacity(eps.len());
    for &(e, i) in schedule.integrals() {
        let ring = Domain::annulus(x0, e, eps0)?;
        let num = volume_integrate(
            &ring,
            &flat,
            |x| q(x) * psi(x.distance(&x0)).powf(p),
            resolution,
        )?;
        numerators.push(num);
        denominators.push(i.powf(p));
    }
    let ratios: Vec<f64> = numerators
        .iter()
        .zip(&denominators)
        .map(|(a, b)| a / b)
        .collect();
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    let plausible = decreasing && ratios[ratios.len() - 1] < OI_DECAY_FACTOR * ratios[0];
    Ok(OiReport {
        eps: eps.to_vec(),
        numerators,
        denominators,
        ratios,
        plausible,
        factor: OI_DECAY_FACTOR,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, TAU};

    fn ladder() -> Vec<f64> {
        (2..=6).map(|k| E.powi(-2 * k)).collect()
    }

    #[test]
    fn log_power_case() {
        let r = oi_condition_check(|_| 1.0, &PsiChoice::LogPower, Point::new2(0.0, 0.0), 2.0, E.powi(-2), &ladder(), 512)
            .unwrap();
        for (k, (&num, &den)) in (2..=6).zip(r.numerators.iter().zip(&r.denominators)) {
            let k = k as f64;
            assert!((num - TAU * (0.5 - 0.5 / k)).abs() < 1e-3 * num);
            assert!((den - k.ln().powi(2)).abs() < 1e-8 * den);
        }
        assert!(r.plausible);
    }

    #[test]
    fn constant_psi_is_rejected() {
        let eps: Vec<f64> = (1..=5).map(|k| 0.5f64.powi(k + 1)).collect();
        let r = oi_condition_check(
            |_| 1.0,
            &PsiChoice::Custom(scalar(|_| 1.0)),
            Point::new2(0.0, 0.0),
            2.0,
            0.5,
            &eps,
            256,
        )
        .unwrap();
        assert!(!r.plausible);
    }

    #[test]
    fn zero_psi() {
        let r = oi_condition_check(
            |_| 1.0,
            &PsiChoice::Custom(scalar(|_| 0.0)),
            Point::new2(0.0, 0.0),
            2.0,
            0.5,
            &[0.1],
            64,
        );
        assert!(matches!(r, Err(Error::PsiNotIntegrable(_))));
    }

    #[test]
    fn eta_has_unit_integral() {
        let s = PsiSchedule::new(log_power_psi(3, 2.0), 0.2, &[1e-3, 1e-6]).unwrap();
        let eta = s.eta(1);
        let total = log_substituted(|t| eta(t), 1e-6, 0.2, NODES_PER_DECADE).unwrap();
        assert!((total - 1.0).abs() < 1e-10);
    }
}
