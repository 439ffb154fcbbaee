use std::f64::consts::E;

use rayon::prelude::*;

use crate::catalog::{
    default_entries, exact_dilatation, exact_outer_dilatation, make_catalog_map, probe_limit_set,
    CatalogEntry,
};
use crate::cli::config::{
    resolve_grid, CriterionKind, DomainConfig, GridConfig, MapConfig, MetricConfig, RunConfig,
    Subcommand,
};
use crate::cli::output::{Cell, Table};
use crate::cli::CliError;
use crate::criteria::{
    divergence_test, fmo_test, ls_integrability_test, oi_condition_check, sphere_lsnorm,
    spherical_mean_q, DivergenceOptions, FmoOptions, LsOptions, PsiChoice,
};
use crate::expr::Expr;
use crate::func::{field, scalar, FieldFn, ScalarFn};
use crate::geometry::{make_domain, sample_ring_curves, Domain, DomainKind, MetricField};
use crate::mapping::{
    differential_report_with, inner_dilatation, outer_dilatation, sample_domain_points,
    DifferentialOptions, MappingSpec, RadialProfile,
};
use crate::modulus::{
    check_ring_inequality, estimate_modulus, extremal_eta, ring_modulus_reference,
    ModulusOptions, RingCheckOptions,
};
use crate::point::Point;

/// Result of one run: the config with every default filled in, the table
/// and a one-line summary.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub resolved: RunConfig,
    pub table: Table,
    pub summary: String,
}

/// Runs the subcommand named in a validated config.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sub = cfg
        .subcommand
        .ok_or_else(|| CliError::config("/subcommand", "no subcommand given"))?;
    let mut resolved = cfg.clone();
    let (table, summary) = match sub {
        Subcommand::Modulus => modulus(&mut resolved)?,
        Subcommand::Dilatation => dilatation(&mut resolved)?,
        Subcommand::Criteria => criteria(&mut resolved)?,
        Subcommand::Catalog => catalog(&mut resolved)?,
        Subcommand::VerifyRing => verify_ring(&mut resolved)?,
        Subcommand::ProbeLimit => probe_limit(&mut resolved)?,
    };
    resolved.output = Some(resolved.output_path(sub));
    Ok(Outcome {
        resolved,
        table,
        summary: format!("{}: {summary}", sub.as_str()),
    })
}

type Run = Result<(Table, String), CliError>;

#[derive(Clone)]
enum BuiltMap {
    Catalog(CatalogEntry),
    Spec(MappingSpec),
}

impl BuiltMap {
    fn spec(&self) -> &MappingSpec {
        match self {
            BuiltMap::Catalog(e) => e.map(),
            BuiltMap::Spec(m) => m,
        }
    }

    fn entry(&self) -> Option<&CatalogEntry> {
        match self {
            BuiltMap::Catalog(e) => Some(e),
            BuiltMap::Spec(_) => None,
        }
    }
}

fn lib(path: &'static str) -> impl Fn(crate::Error) -> CliError {
    move |e| CliError::from_lib(e, path)
}

fn dimension(cfg: &RunConfig) -> Result<usize, CliError> {
    let from_center = cfg
        .domain
        .as_ref()
        .and_then(|d| d.center.as_ref())
        .map(|c| c.len());
    match (cfg.n, from_center) {
        (Some(n), Some(c)) if n != c => Err(CliError::config(
            "/domain/center",
            format!("center has {c} coordinates but n = {n}"),
        )),
        (Some(n), _) | (None, Some(n)) => Ok(n),
        (None, None) => Ok(2),
    }
}

/// Fills the domain defaults and builds it.
fn domain(cfg: &mut RunConfig, n: usize, default: DomainConfig) -> Result<Domain, CliError> {
    let mut d = cfg.domain.clone().unwrap_or(default);
    let center = d.center.clone().unwrap_or_else(|| vec![0.0; n]);
    if center.len() != n {
        return Err(CliError::config(
            "/domain/center",
            format!("center has {} coordinates but the run is {n}-dimensional", center.len()),
        ));
    }
    if d.kind != DomainKind::Annulus {
        d.r1 = 0.0;
    }
    let point = Point::from_slice(&center).map_err(lib("/domain/center"))?;
    let built = make_domain(d.kind, point, d.r1, d.r2).map_err(lib("/domain"))?;
    d.center = Some(center);
    cfg.domain = Some(d);
    Ok(built)
}

/// Domain of an identity or radial map: the ball (punctured for radial
/// maps) around the configured center, reaching past the configured
/// annulus when there is one. Leaves the config untouched.
fn map_domain(cfg: &RunConfig, n: usize, punctured: bool) -> Result<Domain, CliError> {
    let (center, radius) = match &cfg.domain {
        Some(d) => {
            let c = d.center.clone().unwrap_or_else(|| vec![0.0; n]);
            let r = if d.kind == DomainKind::Annulus { 2.0 * d.r2 } else { d.r2 };
            (c, r)
        }
        None => (vec![0.0; n], 1.0),
    };
    if center.len() != n {
        return Err(CliError::config("/domain/center", format!("center needs {n} coordinates")));
    }
    let c = Point::from_slice(&center).map_err(lib("/domain/center"))?;
    let d = if punctured {
        Domain::punctured_ball(c, radius)
    } else {
        Domain::ball(c, radius)
    };
    d.map_err(lib("/domain"))
}

fn annulus(r1: f64, r2: f64) -> DomainConfig {
    DomainConfig {
        kind: DomainKind::Annulus,
        center: None,
        r1,
        r2,
    }
}

fn punctured_unit_ball() -> DomainConfig {
    DomainConfig {
        kind: DomainKind::PuncturedBall,
        center: None,
        r1: 0.0,
        r2: 1.0,
    }
}

fn metric(cfg: &RunConfig, n: usize) -> Result<MetricField, CliError> {
    match &cfg.metric {
        MetricConfig::Flat => MetricField::flat(n).map_err(lib("/n")),
        MetricConfig::Conformal(src) => {
            let e = Expr::parse(src).map_err(lib("/metric/conformal"))?;
            MetricField::conformal(n, e.to_field()).map_err(lib("/metric/conformal"))
        }
    }
}

fn scalar_expr(src: &str, path: &'static str) -> Result<ScalarFn, CliError> {
    Expr::parse(src)
        .and_then(|e| e.to_scalar())
        .map_err(lib(path))
}

fn field_expr(src: &str, path: &'static str) -> Result<FieldFn, CliError> {
    Expr::parse(src).map(|e| e.to_field()).map_err(lib(path))
}

/// Builds the configured map, filling catalog defaults into the config.
fn build_map(cfg: &mut RunConfig) -> Result<Option<BuiltMap>, CliError> {
    let Some(map) = cfg.map.clone() else {
        if cfg.alpha.is_some() {
            return Err(CliError::config("/alpha", "alpha applies to catalog maps only"));
        }
        return Ok(None);
    };
    let built = match map {
        MapConfig::Catalog { name, mut params } => {
            if let Some(a) = cfg.alpha.take() {
                if params.alpha.is_some_and(|b| b != a) {
                    return Err(CliError::config(
                        "/alpha",
                        "alpha given both at top level and in the catalog parameters",
                    ));
                }
                params.alpha = Some(a);
            }
            if params.n.is_none() && cfg.n.is_some() && accepts_n(name) {
                params.n = cfg.n;
            }
            let entry = make_catalog_map(name, &params).map_err(lib("/map/catalog/params"))?;
            if cfg.n.is_some_and(|n| n != entry.dim()) {
                return Err(CliError::config(
                    "/n",
                    format!("{name} is {}-dimensional", entry.dim()),
                ));
            }
            cfg.map = Some(MapConfig::Catalog {
                name,
                params: entry.params().clone(),
            });
            BuiltMap::Catalog(entry)
        }
        MapConfig::Identity => {
            if cfg.alpha.is_some() {
                return Err(CliError::config("/alpha", "alpha applies to catalog maps only"));
            }
            let n = dimension(cfg)?;
            BuiltMap::Spec(MappingSpec::identity(map_domain(cfg, n, false)?))
        }
        MapConfig::Radial { profile, derivative } => {
            if cfg.alpha.is_some() {
                return Err(CliError::config("/alpha", "alpha applies to catalog maps only"));
            }
            let n = dimension(cfg)?;
            let d = map_domain(cfg, n, true)?;
            let rho = scalar_expr(&profile, "/map/radial/profile")?;
            let drho = match derivative {
                Some(src) => scalar_expr(&src, "/map/radial/derivative")?,
                None => {
                    let r = rho.clone();
                    scalar(move |t| {
                        let h = 1e-6 * t;
                        (r(t + h) - r(t - h)) / (2.0 * h)
                    })
                }
            };
            BuiltMap::Spec(MappingSpec::radial("radial", d, RadialProfile { rho, drho }))
        }
    };
    cfg.n = Some(built.spec().dim());
    Ok(Some(built))
}

fn accepts_n(name: crate::catalog::CatalogName) -> bool {
    use crate::catalog::CatalogName as C;
    !matches!(name, C::Twisting | C::PlanarPower)
}

fn require_map(cfg: &mut RunConfig) -> Result<BuiltMap, CliError> {
    build_map(cfg)?.ok_or_else(|| CliError::config("/map", "this subcommand needs a map"))
}

fn require_catalog(cfg: &mut RunConfig) -> Result<CatalogEntry, CliError> {
    match require_map(cfg)? {
        BuiltMap::Catalog(e) => Ok(e),
        BuiltMap::Spec(_) => Err(CliError::config("/map", "a catalog map is required")),
    }
}

/// K_{I,p} of the map: exact for catalog entries, from the derivative otherwise.
fn dilatation_field(map: BuiltMap, p: f64, h: f64) -> FieldFn {
    match map {
        BuiltMap::Catalog(e) => field(move |x| exact_dilatation(&e, x, p).unwrap_or(f64::NAN)),
        BuiltMap::Spec(m) => {
            let opts = DifferentialOptions {
                h,
                ..Default::default()
            };
            field(move |x| {
                differential_report_with(&m, x, &opts)
                    .map(|r| inner_dilatation(&r, p))
                    .unwrap_or(f64::NAN)
            })
        }
    }
}

/// Q from `q`, or the map's inner dilatation when only a map is given.
fn q_field(cfg: &mut RunConfig) -> Result<(FieldFn, &'static str), CliError> {
    let map = build_map(cfg)?;
    match (&cfg.q, map) {
        (Some(src), _) => Ok((field_expr(src, "/q")?, "/q")),
        (None, Some(m)) => Ok((dilatation_field(m, cfg.p, cfg.h), "/map")),
        (None, None) => Err(CliError::config("/q", "give q or a map")),
    }
}

fn modulus(cfg: &mut RunConfig) -> Run {
    let n = dimension(cfg)?;
    cfg.n = Some(n);
    let d = domain(cfg, n, annulus(1.0, E))?;
    if d.kind() != DomainKind::Annulus {
        return Err(CliError::config(
            "/domain/kind",
            "the radial curve family needs an annulus",
        ));
    }
    let (r1, r2) = (d.inner_radius(), d.outer_radius());
    let m = metric(cfg, n)?;
    let grid = resolve_grid(cfg.grid, n, cfg.curves);
    cfg.grid = GridConfig::Full(grid);
    let family = sample_ring_curves(d.center(), r1, r2, cfg.curves, cfg.jitter, cfg.seed)
        .map_err(lib("/curves"))?;
    let opts = ModulusOptions {
        p: cfg.p,
        grid,
        max_iter: cfg.max_iter,
        tol: cfg.tol,
        ..Default::default()
    };
    let est = estimate_modulus(&family, &d, &m, &opts).map_err(lib("/max_iter"))?;
    let reference = if m.is_flat() {
        Some(ring_modulus_reference(n, cfg.p, r1, r2).map_err(lib("/domain"))?)
    } else {
        None
    };
    let rel_err = reference.map(|r| est.value / r - 1.0);
    let mut t = Table::new(
        "modulus",
        &[
            "n", "p", "r1", "r2", "curves", "grid_radial", "grid_azimuthal", "grid_polar",
            "estimate", "reference", "rel_err", "dual_bound", "max_violation", "sweeps",
            "converged",
        ],
    );
    t.push(vec![
        n.into(),
        cfg.p.into(),
        r1.into(),
        r2.into(),
        family.len().into(),
        grid.radial.into(),
        grid.azimuthal.into(),
        grid.polar.into(),
        est.value.into(),
        reference.into(),
        rel_err.into(),
        est.dual_bound.into(),
        est.max_violation.into(),
        est.iterations.into(),
        est.converged.into(),
    ]);
    let summary = match (reference, rel_err) {
        (Some(r), Some(e)) => format!("estimate {:.6} reference {r:.6} rel_err {e:+.3e}", est.value),
        _ => format!("estimate {:.6}", est.value),
    };
    Ok((t, summary))
}

fn dilatation(cfg: &mut RunConfig) -> Run {
    let map = require_map(cfg)?;
    let spec = map.spec();
    let n = spec.dim();
    let points = match &cfg.point {
        Some(x) => {
            if x.len() != n {
                return Err(CliError::config("/point", format!("point needs {n} coordinates")));
            }
            vec![Point::from_slice(x).map_err(lib("/point"))?]
        }
        None => sample_domain_points(spec, cfg.points, 0.05, cfg.seed),
    };
    if points.is_empty() {
        return Err(CliError::numerical("/points", "could not sample the map's domain"));
    }
    let metrics = match cfg.metric {
        MetricConfig::Flat => None,
        MetricConfig::Conformal(_) => {
            let m = metric(cfg, n)?;
            Some((m.clone(), m))
        }
    };
    let opts = DifferentialOptions {
        h: cfg.h,
        metrics,
        ..Default::default()
    };
    let p = cfg.p;
    let exact_ok = opts.metrics.is_none();
    let rows: Vec<Result<Vec<Cell>, CliError>> = points
        .par_iter()
        .map(|x| {
            let path = if cfg.point.is_some() { "/point" } else { "/points" };
            let rep = differential_report_with(spec, x, &opts).map_err(|e| CliError::from_lib(e, path))?;
            let (exact_i, exact_o) = match (map.entry(), exact_ok) {
                (Some(e), true) => (
                    Some(exact_dilatation(e, x, p).map_err(|e| CliError::from_lib(e, path))?),
                    Some(exact_outer_dilatation(e, x, p).map_err(|e| CliError::from_lib(e, path))?),
                ),
                _ => (None, None),
            };
            let c = x.as_slice();
            Ok(vec![
                c[0].into(),
                c[1].into(),
                c.get(2).copied().into(),
                rep.jacobian_det.into(),
                rep.min_stretch().into(),
                rep.max_stretch().into(),
                inner_dilatation(&rep, p).into(),
                outer_dilatation(&rep, p).into(),
                exact_i.into(),
                exact_o.into(),
                rep.finite_distortion.into(),
            ])
        })
        .collect();
    let mut t = Table::new(
        "dilatation",
        &[
            "x1", "x2", "x3", "jacobian", "l", "L", "k_inner", "k_outer", "exact_k_inner",
            "exact_k_outer", "finite_distortion",
        ],
    );
    for r in rows {
        t.push(r?);
    }
    let k_max = t
        .rows
        .iter()
        .filter_map(|r| match r[6] {
            Cell::Num(v) => Some(v),
            _ => None,
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let fd = t.rows.iter().all(|r| r[10] == Cell::Bool(true));
    Ok((
        t.clone(),
        format!(
            "{} points, max K_I,p {k_max:.6}, finite distortion everywhere: {fd}",
            t.rows.len()
        ),
    ))
}

fn criteria(cfg: &mut RunConfig) -> Run {
    let kind = cfg
        .kind
        .ok_or_else(|| CliError::config("/kind", "criteria needs a kind"))?;
    match kind {
        CriterionKind::Divergence => divergence(cfg),
        CriterionKind::Fmo => fmo(cfg),
        CriterionKind::Oi => oi(cfg),
        CriterionKind::Ls => ls(cfg),
        CriterionKind::Qmean => qmean(cfg),
    }
}

fn divergence(cfg: &mut RunConfig) -> Run {
    let eps0 = *cfg.eps0.get_or_insert(0.5);
    let map = build_map(cfg)?;
    let n = dimension(cfg)?;
    cfg.n = Some(n);
    let (q, path, default_decades): (ScalarFn, &'static str, usize) = match (&cfg.q, map) {
        (Some(src), _) => (scalar_expr(src, "/q")?, "/q", 200),
        (None, Some(m)) => {
            let x0 = m.spec().domain().center();
            let radial = m.spec().radial_profile().is_some();
            let kq = dilatation_field(m, cfg.p, cfg.h);
            if radial {
                // K_{I,p} of a radial map depends on |x - x₀| only
                let e1 = Point::unit(n, 0);
                (scalar(move |t| kq(&(x0 + e1 * t))), "/map", 200)
            } else {
                let flat = MetricField::flat(n).map_err(lib("/n"))?;
                // one sphere per ladder node, so a coarser angular rule
                let res = (cfg.resolution / 8).max(8);
                let q = move |t| spherical_mean_q(|x| kq(x), x0, t, &flat, res, true).unwrap_or(f64::NAN);
                (scalar(q), "/map", 40)
            }
        }
        (None, None) => return Err(CliError::config("/q", "give q or a map")),
    };
    let decades = *cfg.decades.get_or_insert(default_decades);
    let opts = DivergenceOptions {
        decades,
        ..Default::default()
    };
    let v = divergence_test(|t| q(t), eps0, n, cfg.p, &opts).map_err(lib(path))?;
    let mut t = Table::new("criteria-divergence", &["k", "lower", "integral", "verdict"]);
    for &(k, ik) in &v.evidence {
        t.push(vec![
            (k as usize).into(),
            (eps0 * 10f64.powi(-(k as i32))).into(),
            ik.into(),
            v.kind.to_string().into(),
        ]);
    }
    let last = v.evidence.last().map_or(0.0, |e| e.1);
    Ok((t, format!("{} after {} decades (I = {last:.6e})", v.kind, v.evidence.len())))
}

fn center(cfg: &mut RunConfig, n: usize) -> Result<Point, CliError> {
    let d = domain(cfg, n, punctured_unit_ball())?;
    Ok(d.center())
}

fn fmo(cfg: &mut RunConfig) -> Run {
    let (q, path) = q_field(cfg)?;
    let n = dimension(cfg)?;
    cfg.n = Some(n);
    let x0 = center(cfg, n)?;
    let m = metric(cfg, n)?;
    let opts = FmoOptions {
        resolution: cfg.resolution,
        ..Default::default()
    };
    let k0 = *opts.k_range.start();
    let v = fmo_test(|x| q(x), x0, &m, &opts).map_err(lib(path))?;
    let mut t = Table::new("criteria-fmo", &["k", "eps", "oscillation", "verdict"]);
    for (i, &(eps, osc)) in v.evidence.iter().enumerate() {
        t.push(vec![
            (k0 + i as i32).into(),
            eps.into(),
            osc.into(),
            v.kind.to_string().into(),
        ]);
    }
    Ok((t, format!("{} over {} scales", v.kind, v.evidence.len())))
}

fn oi(cfg: &mut RunConfig) -> Run {
    let (q, path) = q_field(cfg)?;
    let n = dimension(cfg)?;
    cfg.n = Some(n);
    let x0 = center(cfg, n)?;
    let eps0 = *cfg.eps0.get_or_insert(0.5);
    let eps = cfg
        .radii
        .get_or_insert_with(|| (1..=6).map(|k| eps0 * 10f64.powi(-k)).collect())
        .clone();
    let r = oi_condition_check(|x| q(x), &PsiChoice::LogPower, x0, cfg.p, eps0, &eps, cfg.resolution)
        .map_err(|e| match e {
            crate::Error::InvalidArgument(_) | crate::Error::PsiNotIntegrable(_) => {
                CliError::from_lib(e, "/radii")
            }
            e => CliError::from_lib(e, path),
        })?;
    let mut t = Table::new(
        "criteria-oi",
        &["eps", "numerator", "denominator", "ratio", "plausible"],
    );
    for i in 0..r.eps.len() {
        t.push(vec![
            r.eps[i].into(),
            r.numerators[i].into(),
            r.denominators[i].into(),
            r.ratios[i].into(),
            r.plausible.into(),
        ]);
    }
    Ok((
        t,
        format!(
            "o(I^p) {} (last/first ratio {:.3e})",
            if r.plausible { "plausible" } else { "not supported" },
            r.ratios.last().unwrap() / r.ratios[0]
        ),
    ))
}

fn ls(cfg: &mut RunConfig) -> Run {
    let (q, path) = q_field(cfg)?;
    let n = dimension(cfg)?;
    cfg.n = Some(n);
    let d = domain(cfg, n, punctured_unit_ball())?;
    let s = *cfg.s.get_or_insert(cfg.p);
    let decades = *cfg.decades.get_or_insert(40);
    let opts = LsOptions {
        decades,
        resolution: cfg.resolution,
        ..Default::default()
    };
    let r = ls_integrability_test(|x| q(x), &d, s, &opts).map_err(lib(path))?;
    let mut t = Table::new("criteria-ls", &["k", "eps", "integral", "converged"]);
    for (i, &(eps, v)) in r.values.iter().enumerate() {
        t.push(vec![(i + 1).into(), eps.into(), v.into(), r.converged.into()]);
    }
    Ok((
        t,
        format!(
            "∫Q^s {} (value {:.6e} over {} shells)",
            if r.converged { "converges" } else { "does not settle" },
            r.value,
            r.values.len()
        ),
    ))
}

fn qmean(cfg: &mut RunConfig) -> Run {
    let (q, path) = q_field(cfg)?;
    let n = dimension(cfg)?;
    cfg.n = Some(n);
    let x0 = center(cfg, n)?;
    let m = metric(cfg, n)?;
    let eps0 = *cfg.eps0.get_or_insert(0.5);
    let s = *cfg.s.get_or_insert(cfg.p);
    let decades = *cfg.decades.get_or_insert(20);
    let radii = cfg
        .radii
        .get_or_insert_with(|| (0..=decades as i32).map(|k| eps0 * 2f64.powi(-k)).collect())
        .clone();
    let mut t = Table::new("criteria-qmean", &["r", "q_mean", "ls_norm"]);
    for r in radii {
        let mean = spherical_mean_q(|x| q(x), x0, r, &m, cfg.resolution, true).map_err(lib(path))?;
        let norm = sphere_lsnorm(|x| q(x), x0, r, s, cfg.resolution).map_err(lib(path))?;
        t.push(vec![r.into(), mean.into(), norm.into()]);
    }
    Ok((t.clone(), format!("{} radii", t.rows.len())))
}

fn catalog(cfg: &mut RunConfig) -> Run {
    let entries = if cfg.list || cfg.map.is_none() {
        if cfg.map.is_some() {
            return Err(CliError::config("/list", "list and map are exclusive"));
        }
        cfg.list = true;
        default_entries().map_err(lib("/list"))?
    } else {
        vec![require_catalog(cfg)?]
    };
    let mut t = Table::new(
        "catalog",
        &["name", "dim", "multiplicity", "limit_set", "params", "parameter_ranges"],
    );
    for e in &entries {
        t.push(vec![
            e.name().as_str().into(),
            e.dim().into(),
            e.map().multiplicity().map(|m| m as usize).into(),
            serde_json::to_string(&e.limit_set()).unwrap().into(),
            serde_json::to_string(e.params()).unwrap().into(),
            e.name().parameter_ranges().into(),
        ]);
    }
    Ok((t, format!("{} entries", entries.len())))
}

fn verify_ring(cfg: &mut RunConfig) -> Run {
    if cfg.metric != MetricConfig::Flat {
        return Err(CliError::config("/metric", "the ring check uses the flat metric"));
    }
    let map = require_map(cfg)?;
    let n = map.spec().dim();
    let d = domain(cfg, n, annulus(0.25, 0.75))?;
    if d.kind() != DomainKind::Annulus {
        return Err(CliError::config("/domain/kind", "the ring check needs an annulus"));
    }
    let (r1, r2) = (d.inner_radius(), d.outer_radius());
    let q = match &cfg.q {
        Some(src) => field_expr(src, "/q")?,
        None => dilatation_field(map.clone(), cfg.p, cfg.h),
    };
    let eta = extremal_eta(n, cfg.p, r1, r2).map_err(lib("/domain"))?;
    let grid = resolve_grid(cfg.grid, n, cfg.curves);
    cfg.grid = GridConfig::Full(grid);
    let opts = RingCheckOptions {
        samples: cfg.curves,
        grid,
        quadrature: 2 * cfg.resolution,
        max_iter: cfg.max_iter,
        tol: cfg.tol,
        ..Default::default()
    };
    let r = check_ring_inequality(map.spec(), d.center(), r1, r2, cfg.p, &q, &eta, &opts)
        .map_err(|e| match e {
            crate::Error::NoConvergence(_) => CliError::from_lib(e, "/max_iter"),
            e => CliError::from_lib(e, if cfg.q.is_some() { "/q" } else { "/map" }),
        })?;
    let mut t = Table::new(
        "verify-ring",
        &["r1", "r2", "p", "lhs", "rhs", "ratio", "holds", "eta_integral", "sweeps"],
    );
    t.push(vec![
        r1.into(),
        r2.into(),
        cfg.p.into(),
        r.lhs.into(),
        r.rhs.into(),
        r.ratio().into(),
        r.holds.into(),
        r.eta_integral.into(),
        r.estimate.iterations.into(),
    ]);
    Ok((
        t,
        format!(
            "lhs {:.6} rhs {:.6} ratio {:.4} {}",
            r.lhs,
            r.rhs,
            r.ratio(),
            if r.holds { "holds" } else { "VIOLATED" }
        ),
    ))
}

fn probe_limit(cfg: &mut RunConfig) -> Run {
    let entry = require_catalog(cfg)?;
    let radii = cfg
        .radii
        .get_or_insert_with(|| (2..=6).map(|k| 10f64.powi(-k)).collect())
        .clone();
    let pr = probe_limit_set(&entry, cfg.directions, &radii).map_err(lib("/map"))?;
    let descriptor = serde_json::to_string(&pr.descriptor).unwrap();
    let mut t = Table::new(
        "probe-limit",
        &["radius", "separation", "descriptor", "confirmed"],
    );
    for &(r, s) in &pr.separations {
        t.push(vec![r.into(), s.into(), descriptor.clone().into(), pr.confirmed.into()]);
    }
    let last = pr.separations.last().map_or(f64::NAN, |s| s.1);
    Ok((
        t,
        format!("last separation {last:.6e}, limit {descriptor}, confirmed {}", pr.confirmed),
    ))
}
