//! Closed-form example mappings with exact derivatives and dilatations.
//!
//! | name                  | n    | parameters                    | N      |
//! |-----------------------|------|-------------------------------|--------|
//! | `twisting`            | 3    | `m ≥ 1`                       | m      |
//! | `planar_power`        | 2    | `degree ≥ 1`                  | degree |
//! | `radial_power`        | 2, 3 | `alpha > 0`                   | 1      |
//! | `annulus_blowup`      | 2, 3 | `alpha ∈ (0, 1)`              | 1      |
//! | `counterexample_n`    | 2, 3 | `q0 ≥ 1`                      | 1      |
//! | `counterexample_alpha`| 2, 3 | `alpha ∈ (n-1, n)`, `q0 ≥ 1`  | 1      |
//!
//! Every map lives on a ball of radius 1 about the origin. Dilatations are
//! evaluated from the exact principal stretches.

mod probe;
mod profile;

use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::criteria::{divergence_test, DivergenceOptions, VerdictKind};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::func::{scalar, ScalarFn};
use crate::geometry::Domain;
use crate::mapping::{
    inner_dilatation, outer_dilatation, DifferentialReport, MappingSpec, RadialProfile,
    Singularity,
};
use crate::point::Point;

pub use probe::{preimages, probe_limit_set, LimitProbe};
pub use profile::{TailTable, TABLE_MIN, TABLE_NODES, TAIL_FLOOR};

pub const DEFAULT_Q0_N: &str = "pow(log(e/t),2)";
pub const DEFAULT_Q0_ALPHA: &str = "1/t";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogName {
    Twisting,
    PlanarPower,
    RadialPower,
    AnnulusBlowup,
    CounterexampleN,
    CounterexampleAlpha,
}

impl CatalogName {
    pub const ALL: [CatalogName; 6] = [
        CatalogName::Twisting,
        CatalogName::PlanarPower,
        CatalogName::RadialPower,
        CatalogName::AnnulusBlowup,
        CatalogName::CounterexampleN,
        CatalogName::CounterexampleAlpha,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogName::Twisting => "twisting",
            CatalogName::PlanarPower => "planar_power",
            CatalogName::RadialPower => "radial_power",
            CatalogName::AnnulusBlowup => "annulus_blowup",
            CatalogName::CounterexampleN => "counterexample_n",
            CatalogName::CounterexampleAlpha => "counterexample_alpha",
        }
    }

    /// One-line description of the parameters and their ranges.
    pub fn parameter_ranges(&self) -> &'static str {
        match self {
            CatalogName::Twisting => "m: integer >= 1 (default 2); n = 3",
            CatalogName::PlanarPower => "degree: integer >= 1 (default 2); n = 2",
            CatalogName::RadialPower => "n: 2|3 (default 2); alpha > 0 (default 0.5)",
            CatalogName::AnnulusBlowup => "n: 2|3 (default 3); alpha in (0,1) (default 0.5)",
            CatalogName::CounterexampleN => {
                "n: 2|3 (default 2); q0(t) >= 1 with convergent criterion integral (default pow(log(e/t),2))"
            }
            CatalogName::CounterexampleAlpha => {
                "n: 2|3 (default 2); alpha in (n-1,n) (default n-0.5); q0(t) >= 1 (default 1/t)"
            }
        }
    }
}

impl std::str::FromStr for CatalogName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogName::ALL
            .iter()
            .find(|c| c.as_str() == s)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("unknown catalog entry '{s}'")))
    }
}

impl std::fmt::Display for CatalogName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of a catalog entry; unset fields take the entry's defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<String>,
}

impl CatalogParams {
    pub fn n(n: usize) -> Self {
        CatalogParams {
            n: Some(n),
            ..Default::default()
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_q0(mut self, q0: &str) -> Self {
        self.q0 = Some(q0.to_string());
        self
    }
}

/// Expected cluster set of the map at its puncture.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitSet {
    None,
    Point { at: Point },
    Sphere { center: Point, radius: f64 },
}

type StretchFn = Arc<dyn Fn(&Point) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub struct CatalogEntry {
    name: CatalogName,
    params: CatalogParams,
    map: MappingSpec,
    stretches: StretchFn,
    limit_set: LimitSet,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("limit_set", &self.limit_set)
            .finish()
    }
}

impl CatalogEntry {
    pub fn name(&self) -> CatalogName {
        self.name
    }

    /// Parameters with defaults filled in.
    pub fn params(&self) -> &CatalogParams {
        &self.params
    }

    pub fn map(&self) -> &MappingSpec {
        &self.map
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }

    pub fn limit_set(&self) -> LimitSet {
        self.limit_set
    }

    /// Exact principal stretches at x, ascending.
    pub fn stretches(&self, x: &Point) -> Result<Vec<f64>> {
        let d = self.map.distance_to_singularity(x);
        if d <= 0.0 {
            return Err(Error::NearSingularity { distance: d });
        }
        let mut s = (self.stretches)(x);
        // closed forms stay usable until they leave the f64 range
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::NearSingularity { distance: d });
        }
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(s)
    }

    /// Radial profile ρ for maps of the form x ↦ x/|x|·ρ(|x|).
    pub fn radial_profile(&self) -> Option<&RadialProfile> {
        self.map.radial_profile()
    }
}

/// Inner dilatation `K_{I,p}` from the exact stretches.
pub fn exact_dilatation(entry: &CatalogEntry, x: &Point, p: f64) -> Result<f64> {
    let report = DifferentialReport::from_stretches(*x, entry.stretches(x)?);
    Ok(inner_dilatation(&report, p))
}

/// Outer dilatation `K_{O,p}` from the exact stretches.
pub fn exact_outer_dilatation(entry: &CatalogEntry, x: &Point, p: f64) -> Result<f64> {
    let report = DifferentialReport::from_stretches(*x, entry.stretches(x)?);
    Ok(outer_dilatation(&report, p))
}

fn dimension(params: &CatalogParams, default: usize) -> Result<usize> {
    let n = params.n.unwrap_or(default);
    if n == 2 || n == 3 {
        Ok(n)
    } else {
        Err(Error::ParameterRange(format!("n must be 2 or 3, got {n}")))
    }
}

fn fixed_dimension(params: &CatalogParams, n: usize, name: CatalogName) -> Result<()> {
    match params.n {
        Some(k) if k != n => Err(Error::ParameterRange(format!(
            "{name} is defined for n = {n} only, got n = {k}"
        ))),
        _ => Ok(()),
    }
}

fn unit_ball(n: usize) -> Result<Domain> {
    Domain::ball(Point::origin(n)?, 1.0)
}

fn unit_punctured_ball(n: usize) -> Result<Domain> {
    Domain::punctured_ball(Point::origin(n)?, 1.0)
}

fn radial_stretch_fn(profile: &RadialProfile, n: usize) -> StretchFn {
    let (rho, drho) = (profile.rho.clone(), profile.drho.clone());
    Arc::new(move |x: &Point| {
        let r = x.norm();
        let mut s = vec![rho(r) / r; n - 1];
        s.push(drho(r));
        s
    })
}

fn radial_entry(
    name: CatalogName,
    params: CatalogParams,
    n: usize,
    profile: RadialProfile,
    limit_set: LimitSet,
) -> Result<CatalogEntry> {
    let stretches = radial_stretch_fn(&profile, n);
    let map = MappingSpec::radial(name.as_str(), unit_punctured_ball(n)?, profile)
        .into_catalog(name.as_str());
    Ok(CatalogEntry {
        name,
        params,
        map,
        stretches,
        limit_set,
    })
}

fn twisting(params: &CatalogParams) -> Result<CatalogEntry> {
    let name = CatalogName::Twisting;
    fixed_dimension(params, 3, name)?;
    let m = params.m.unwrap_or(2);
    if m < 1 {
        return Err(Error::ParameterRange("m must be at least 1".into()));
    }
    let mf = m as f64;
    let domain = unit_ball(3)?;
    let map = MappingSpec::generic(name.as_str(), domain, move |x| {
        let r = x[0].hypot(x[1]);
        let phi = x[1].atan2(x[0]);
        Point::new3(r * (mf * phi).cos(), r * (mf * phi).sin(), x[2])
    })
    .with_derivative(move |x| {
        let phi = x[1].atan2(x[0]);
        let (s, c) = phi.sin_cos();
        let (sm, cm) = (mf * phi).sin_cos();
        DMatrix::from_row_slice(
            3,
            3,
            &[
                c * cm + mf * s * sm,
                s * cm - mf * c * sm,
                0.0,
                c * sm - mf * s * cm,
                s * sm + mf * c * cm,
                0.0,
                0.0,
                0.0,
                1.0,
            ],
        )
    })
    .with_singularity(Singularity::Axis(Point::new3(0.0, 0.0, 0.0)))
    .with_multiplicity(m)
    .into_catalog(name.as_str());
    Ok(CatalogEntry {
        name,
        params: CatalogParams {
            n: Some(3),
            m: Some(m),
            ..Default::default()
        },
        map,
        stretches: Arc::new(move |_| vec![1.0, 1.0, mf]),
        limit_set: LimitSet::None,
    })
}

/// z^k as (Re, Im) of a complex power.
fn complex_power(x: f64, y: f64, k: u32) -> (f64, f64) {
    let (mut a, mut b) = (1.0, 0.0);
    for _ in 0..k {
        (a, b) = (a * x - b * y, a * y + b * x);
    }
    (a, b)
}

fn planar_power(params: &CatalogParams) -> Result<CatalogEntry> {
    let name = CatalogName::PlanarPower;
    fixed_dimension(params, 2, name)?;
    let k = params.degree.unwrap_or(2);
    if k < 1 {
        return Err(Error::ParameterRange("degree must be at least 1".into()));
    }
    let kf = k as f64;
    let map = MappingSpec::generic(name.as_str(), unit_ball(2)?, move |z| {
        let (a, b) = complex_power(z[0], z[1], k);
        Point::new2(a, b)
    })
    .with_derivative(move |z| {
        let (a, b) = complex_power(z[0], z[1], k - 1);
        DMatrix::from_row_slice(2, 2, &[kf * a, -kf * b, kf * b, kf * a])
    })
    .with_multiplicity(k)
    .into_catalog(name.as_str());
    Ok(CatalogEntry {
        name,
        params: CatalogParams {
            n: Some(2),
            degree: Some(k),
            ..Default::default()
        },
        map,
        stretches: Arc::new(move |z| {
            let s = kf * z.norm().powi(k as i32 - 1);
            vec![s, s]
        }),
        limit_set: LimitSet::None,
    })
}

fn radial_power(params: &CatalogParams) -> Result<CatalogEntry> {
    let name = CatalogName::RadialPower;
    let n = dimension(params, 2)?;
    let alpha = params.alpha.unwrap_or(0.5);
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::ParameterRange(format!("alpha must be positive, got {alpha}")));
    }
    let profile = RadialProfile {
        rho: scalar(move |r| r.powf(alpha)),
        drho: scalar(move |r| alpha * r.powf(alpha - 1.0)),
    };
    let params = CatalogParams {
        n: Some(n),
        alpha: Some(alpha),
        ..Default::default()
    };
    let at = Point::origin(n)?;
    radial_entry(name, params, n, profile, LimitSet::Point { at })
}

fn annulus_blowup(params: &CatalogParams) -> Result<CatalogEntry> {
    let name = CatalogName::AnnulusBlowup;
    let n = dimension(params, 3)?;
    let alpha = params.alpha.unwrap_or(0.5);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ParameterRange(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let profile = RadialProfile {
        rho: scalar(move |r| 1.0 + r.powf(alpha)),
        drho: scalar(move |r| alpha * r.powf(alpha - 1.0)),
    };
    let params = CatalogParams {
        n: Some(n),
        alpha: Some(alpha),
        ..Default::default()
    };
    let center = Point::origin(n)?;
    radial_entry(
        name,
        params,
        n,
        profile,
        LimitSet::Sphere {
            center,
            radius: 1.0,
        },
    )
}

/// Parses q₀ and checks q₀ ≥ 1 on the table nodes and that the criterion
/// integral `∫_0 dt / (t^{(n-1)/(p-1)} q₀^{1/(p-1)})` converges.
fn weight(params: &CatalogParams, default: &str, n: usize, p: f64) -> Result<(String, ScalarFn)> {
    let source = params.q0.clone().unwrap_or_else(|| default.to_string());
    let q0 = Expr::parse(&source)
        .and_then(|e| e.to_scalar())
        .map_err(|e| Error::ParameterRange(format!("q0: {e}")))?;
    let du = TABLE_MIN.ln() / (TABLE_NODES - 1) as f64;
    for i in 0..TABLE_NODES {
        let t = (i as f64 * du).exp();
        let v = q0(t);
        if !(v >= 1.0) || !v.is_finite() {
            return Err(Error::ParameterRange(format!(
                "q0 must be finite and at least 1, got q0({t:e}) = {v}"
            )));
        }
    }
    let verdict = divergence_test(|t| q0(t), 1.0, n, p, &DivergenceOptions::default())
        .map_err(|e| Error::QuadratureFailure(e.to_string()))?;
    if verdict.kind != VerdictKind::Converges {
        return Err(Error::ParameterRange(format!(
            "the criterion integral for q0 = {source} is not convergent ({})",
            verdict.kind
        )));
    }
    Ok((source, q0))
}

fn counterexample_n(params: &CatalogParams) -> Result<CatalogEntry> {
    let name = CatalogName::CounterexampleN;
    let n = dimension(params, 2)?;
    let (source, q0) = weight(params, DEFAULT_Q0_N, n, n as f64)?;
    let e = 1.0 / (n as f64 - 1.0);
    let h = {
        let q0 = q0.clone();
        scalar(move |t: f64| 1.0 / (t * q0(t).powf(e)))
    };
    let table = Arc::new(TailTable::new(h.clone())?);
    let radius = (-table.at_zero()).exp();
    let rho = {
        let table = table.clone();
        scalar(move |r| (-table.eval(r)).exp())
    };
    let drho = {
        let table = table.clone();
        scalar(move |r| (-table.eval(r)).exp() * h(r))
    };
    let params = CatalogParams {
        n: Some(n),
        q0: Some(source),
        ..Default::default()
    };
    let center = Point::origin(n)?;
    radial_entry(
        name,
        params,
        n,
        RadialProfile { rho, drho },
        LimitSet::Sphere { center, radius },
    )
}

fn counterexample_alpha(params: &CatalogParams) -> Result<CatalogEntry> {
    let name = CatalogName::CounterexampleAlpha;
    let n = dimension(params, 2)?;
    let nf = n as f64;
    let alpha = params.alpha.unwrap_or(nf - 0.5);
    if !(alpha > nf - 1.0 && alpha < nf) {
        return Err(Error::ParameterRange(format!(
            "alpha must lie in ({}, {n}), got {alpha}",
            n - 1
        )));
    }
    let (source, q0) = weight(params, DEFAULT_Q0_ALPHA, n, alpha)?;
    let (a, b) = ((nf - 1.0) / (alpha - 1.0), 1.0 / (alpha - 1.0));
    let h = {
        let q0 = q0.clone();
        scalar(move |t: f64| (-a * t.ln() - b * q0(t).ln()).exp())
    };
    let c = (nf - alpha) / (alpha - 1.0);
    let beta = (alpha - 1.0) / (alpha - nf);
    let table = Arc::new(TailTable::new(h.clone())?);
    let radius = (1.0 + c * table.at_zero()).powf(beta);
    let rho = {
        let table = table.clone();
        scalar(move |r| (1.0 + c * table.eval(r)).powf(beta))
    };
    let drho = {
        let table = table.clone();
        scalar(move |r| (1.0 + c * table.eval(r)).powf(beta - 1.0) * h(r))
    };
    let params = CatalogParams {
        n: Some(n),
        alpha: Some(alpha),
        q0: Some(source),
        ..Default::default()
    };
    let center = Point::origin(n)?;
    radial_entry(
        name,
        params,
        n,
        RadialProfile { rho, drho },
        LimitSet::Sphere { center, radius },
    )
}

/// Builds a catalog entry; parameters out of range give `ParameterRange`.
pub fn make_catalog_map(name: CatalogName, params: &CatalogParams) -> Result<CatalogEntry> {
    let unused = |field: &str, set: bool| -> Result<()> {
        if set {
            Err(Error::ParameterRange(format!("{name} takes no parameter '{field}'")))
        } else {
            Ok(())
        }
    };
    match name {
        CatalogName::Twisting => {
            unused("alpha", params.alpha.is_some())?;
            unused("degree", params.degree.is_some())?;
            unused("q0", params.q0.is_some())?;
            twisting(params)
        }
        CatalogName::PlanarPower => {
            unused("alpha", params.alpha.is_some())?;
            unused("m", params.m.is_some())?;
            unused("q0", params.q0.is_some())?;
            planar_power(params)
        }
        CatalogName::RadialPower | CatalogName::AnnulusBlowup => {
            unused("m", params.m.is_some())?;
            unused("degree", params.degree.is_some())?;
            unused("q0", params.q0.is_some())?;
            if name == CatalogName::RadialPower {
                radial_power(params)
            } else {
                annulus_blowup(params)
            }
        }
        CatalogName::CounterexampleN => {
            unused("alpha", params.alpha.is_some())?;
            unused("m", params.m.is_some())?;
            unused("degree", params.degree.is_some())?;
            counterexample_n(params)
        }
        CatalogName::CounterexampleAlpha => {
            unused("m", params.m.is_some())?;
            unused("degree", params.degree.is_some())?;
            counterexample_alpha(params)
        }
    }
}

/// All entries at their default parameters.
pub fn default_entries() -> Result<Vec<CatalogEntry>> {
    CatalogName::ALL
        .iter()
        .map(|&n| make_catalog_map(n, &CatalogParams::default()))
        .collect()
}

/// Evenly spread directions on the unit sphere: angles in the plane,
/// D/2 Fibonacci points and their antipodes in space.
pub(crate) fn probe_directions(n: usize, count: usize) -> Vec<Point> {
    if n == 2 {
        (0..count)
            .map(|k| {
                let a = TAU * k as f64 / count as f64;
                Point::new2(a.cos(), a.sin())
            })
            .collect()
    } else {
        let half = crate::geometry::base_directions(3, count.div_ceil(2));
        let mut out = half.clone();
        out.extend(half.iter().map(|d| -*d));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::{differential_report, differential_report_with, DifferentialOptions};
    use std::f64::consts::E;

    #[test]
    fn blowup_example() {
        let e = make_catalog_map(CatalogName::AnnulusBlowup, &CatalogParams::n(3).with_alpha(0.5)).unwrap();
        let x = Point::new3(0.25, 0.0, 0.0);
        let s = e.stretches(&x).unwrap();
        assert_eq!(s, vec![1.0, 6.0, 6.0]);
        assert_eq!(exact_dilatation(&e, &x, 3.0).unwrap(), 36.0);
        let rep = differential_report(e.map(), &x, 1e-5).unwrap();
        assert!((rep.jacobian_det - 36.0).abs() < 1e-9);
    }

    #[test]
    fn radial_power_identity() {
        let e = make_catalog_map(CatalogName::RadialPower, &CatalogParams::n(3).with_alpha(1.0)).unwrap();
        let x = Point::new3(0.1, -0.3, 0.2);
        assert_eq!(e.map().eval(&x).unwrap(), x);
        for p in [1.0, 2.0, 3.0, 4.5] {
            assert_eq!(exact_dilatation(&e, &x, p).unwrap(), 1.0);
        }
    }

    #[test]
    fn counterexample_n_profile() {
        let e = make_catalog_map(CatalogName::CounterexampleN, &CatalogParams::default()).unwrap();
        let prof = e.radial_profile().unwrap();
        for r in [0.7, 1e-3, 1e-9] {
            let exact = (-1.0 + 1.0 / (E / r).ln()).exp();
            assert!(((prof.rho)(r) / exact - 1.0).abs() < 1e-6);
        }
        let x = Point::new2(E.recip(), 0.0);
        assert!((exact_dilatation(&e, &x, 2.0).unwrap() - 4.0).abs() < 1e-9);
        match e.limit_set() {
            LimitSet::Sphere { radius, .. } => assert!((radius / E.recip() - 1.0).abs() < 2e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn counterexample_alpha_profile() {
        let e = make_catalog_map(CatalogName::CounterexampleAlpha, &CatalogParams::default()).unwrap();
        let prof = e.radial_profile().unwrap();
        for r in [0.9, 0.3, 1e-4] {
            assert!(((prof.rho)(r) - 1.0 / (2.0 - r)).abs() < 1e-9);
            assert!(((prof.drho)(r) - 1.0 / (2.0 - r).powi(2)).abs() < 1e-9);
        }
        // K_{I,α} = q₀ at α = 1.5
        let x = Point::new2(0.0, 0.2);
        assert!((exact_dilatation(&e, &x, 1.5).unwrap() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn twisting_and_power_derivatives() {
        let t = make_catalog_map(CatalogName::Twisting, &CatalogParams::default()).unwrap();
        let x = Point::new3(0.3, -0.2, 0.5);
        let opts = DifferentialOptions::numeric(1e-6);
        let num = differential_report_with(t.map(), &x, &opts).unwrap();
        let ex = differential_report(t.map(), &x, 1e-6).unwrap();
        assert!((num.jacobian.clone() - ex.jacobian.clone()).abs().max() < 1e-7);
        assert!((ex.jacobian_det - 2.0).abs() < 1e-12);

        let z = make_catalog_map(CatalogName::PlanarPower, &CatalogParams::default()).unwrap();
        let rep = differential_report(z.map(), &Point::new2(1.0, 0.0), 1e-5).unwrap();
        assert_eq!(rep.singular_values, vec![2.0, 2.0]);
        assert_eq!(rep.jacobian_det, 4.0);
    }

    #[test]
    fn parameter_validation() {
        let bad = |name, p: CatalogParams| matches!(make_catalog_map(name, &p), Err(Error::ParameterRange(_)));
        assert!(bad(CatalogName::AnnulusBlowup, CatalogParams::n(3).with_alpha(1.0)));
        assert!(bad(CatalogName::Twisting, CatalogParams::n(2)));
        assert!(bad(CatalogName::PlanarPower, CatalogParams::n(3)));
        assert!(bad(CatalogName::CounterexampleAlpha, CatalogParams::n(2).with_alpha(2.0)));
        // q0 below 1
        assert!(bad(CatalogName::CounterexampleN, CatalogParams::n(2).with_q0("0.5")));
        // divergent criterion integral: the map extends continuously
        assert!(bad(CatalogName::CounterexampleN, CatalogParams::n(2).with_q0("log(e/t)")));
        assert!(bad(CatalogName::RadialPower, CatalogParams { m: Some(3), ..Default::default() }));
        assert_eq!(default_entries().unwrap().len(), 6);
    }

    #[test]
    fn near_puncture_rejected() {
        let e = make_catalog_map(CatalogName::RadialPower, &CatalogParams::default()).unwrap();
        assert!(matches!(
            exact_dilatation(&e, &Point::new2(0.0, 0.0), 2.0),
            Err(Error::NearSingularity { .. })
        ));
    }
}
