//! Integral criteria at a point: spherical means, sphere norms, the
//! divergence ladder, mean oscillation, ψ-weights and local integrability.
//!
//! The asymptotic tests return evidence plus a verdict from an explicit
//! rule; `CriterionVerdict::decide` re-derives the verdict from the
//! evidence alone.

mod divergence;
mod fmo;
mod integrability;
mod psi;
mod spherical;
mod verdict;

pub use divergence::{divergence_test, DivergenceOptions};
pub use fmo::{fmo_test, FmoOptions, OSCILLATION_FLOOR};
pub use integrability::{ls_integrability_test, LsOptions, LsReport};
pub use psi::{log_power_psi, oi_condition_check, OiReport, PsiChoice, PsiSchedule, OI_DECAY_FACTOR};
pub use spherical::{sphere_lsnorm, spherical_mean_q};
pub use verdict::{decide, CriterionVerdict, DivergenceRule, FmoRule, Rule, VerdictKind};
