use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::catalog::{CatalogName, CatalogParams};
use crate::cli::CliError;
use crate::geometry::DomainKind;
use crate::modulus::GridResolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Modulus,
    Dilatation,
    Criteria,
    Catalog,
    VerifyRing,
    ProbeLimit,
}

impl Subcommand {
    pub fn as_str(&self) -> &'static str {
        match self {
            Subcommand::Modulus => "modulus",
            Subcommand::Dilatation => "dilatation",
            Subcommand::Criteria => "criteria",
            Subcommand::Catalog => "catalog",
            Subcommand::VerifyRing => "verify-ring",
            Subcommand::ProbeLimit => "probe-limit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CriterionKind {
    Divergence,
    Fmo,
    Oi,
    Ls,
    Qmean,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub kind: DomainKind,
    /// Origin of the resolved dimension when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    /// Inner radius; ignored by balls.
    #[serde(default)]
    pub r1: f64,
    pub r2: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricConfig {
    #[default]
    Flat,
    /// Conformal factor λ(x) as an expression.
    Conformal(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MapConfig {
    Identity,
    Catalog {
        name: CatalogName,
        #[serde(default)]
        params: CatalogParams,
    },
    /// `x ↦ x/|x| · ρ(|x|)` on the configured domain.
    Radial {
        profile: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        derivative: Option<String>,
    },
}

/// A single integer (square polar grid) or explicit per-axis counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridConfig {
    Square(usize),
    Full(GridResolution),
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig::Square(256)
    }
}

/// One run of the command-line tool, as read from JSON.
///
/// Options left unset are filled by [`RunConfig::resolve`]; the resolved
/// document is echoed into every output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<Subcommand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<CriterionKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Shorthand for the catalog parameter `alpha`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainConfig>,
    #[serde(default)]
    pub metric: MetricConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decades: Option<usize>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_curves")]
    pub curves: usize,
    #[serde(default)]
    pub jitter: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(default = "default_directions")]
    pub directions: usize,
    #[serde(default)]
    pub list: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub format: Format,
}

fn default_p() -> f64 {
    2.0
}
fn default_curves() -> usize {
    400
}
fn default_tol() -> f64 {
    1e-3
}
fn default_max_iter() -> usize {
    2000
}
fn default_resolution() -> usize {
    256
}
fn default_points() -> usize {
    50
}
fn default_h() -> f64 {
    1e-5
}
fn default_directions() -> usize {
    64
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config("", format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::config("", format!("invalid JSON in {}: {e}", path.display())))?;
    let cfg = from_value(value)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Deserializes a JSON document, reporting failures by JSON pointer.
pub fn from_value(value: Value) -> Result<RunConfig, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let mut pointer = String::new();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", escape(key))),
                Segment::Enum { variant } => pointer.push_str(&format!("/{}", escape(variant))),
                Segment::Unknown => {}
            }
        }
        let message = e.inner().to_string();
        if let Some(field) = unknown_field(&message) {
            if !pointer.ends_with(&format!("/{}", escape(field))) {
                pointer.push_str(&format!("/{}", escape(field)));
            }
        }
        CliError::config(&pointer, message)
    })
}

fn unknown_field(message: &str) -> Option<&str> {
    let rest = message.strip_prefix("unknown field `")?;
    rest.split('`').next()
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

impl RunConfig {
    /// Checks ranges that serde cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(CliError::config("/p", format!("p > 1 required, got {}", self.p)));
        }
        if let Some(n) = self.n {
            if n != 2 && n != 3 {
                return Err(CliError::config("/n", format!("n must be 2 or 3, got {n}")));
            }
        }
        if let Some(s) = self.s {
            if !(s >= 1.0 && s.is_finite()) {
                return Err(CliError::config("/s", format!("s ≥ 1 required, got {s}")));
            }
        }
        if let Some(e) = self.eps0 {
            if !(e > 0.0 && e.is_finite()) {
                return Err(CliError::config("/eps0", format!("eps0 > 0 required, got {e}")));
            }
        }
        if matches!(self.decades, Some(d) if d < 4) {
            return Err(CliError::config("/decades", "at least 4 decades required"));
        }
        let grid_ok = match self.grid {
            GridConfig::Square(g) => g >= 2,
            GridConfig::Full(g) => g.radial >= 1 && g.azimuthal >= 1 && g.polar >= 1,
        };
        if !grid_ok {
            return Err(CliError::config("/grid", "grid counts must be positive"));
        }
        let positive = [
            ("/curves", self.curves),
            ("/max_iter", self.max_iter),
            ("/resolution", self.resolution),
            ("/points", self.points),
            ("/directions", self.directions),
        ];
        for (path, v) in positive {
            if v == 0 {
                return Err(CliError::config(path, "must be at least 1"));
            }
        }
        if !(self.tol > 0.0) {
            return Err(CliError::config("/tol", format!("tol > 0 required, got {}", self.tol)));
        }
        if !(self.h > 0.0) {
            return Err(CliError::config("/h", format!("h > 0 required, got {}", self.h)));
        }
        if !(0.0..1.0).contains(&self.jitter) {
            return Err(CliError::config("/jitter", "jitter must lie in [0, 1)"));
        }
        if let Some(radii) = &self.radii {
            if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
                return Err(CliError::config("/radii", "radii must be a non-empty list of positive numbers"));
            }
        }
        if let Some(d) = &self.domain {
            if let Some(c) = &d.center {
                if c.len() != 2 && c.len() != 3 {
                    return Err(CliError::config("/domain/center", "center needs 2 or 3 coordinates"));
                }
            }
        }
        Ok(())
    }

    /// Output path, with `-` meaning standard output.
    pub fn output_path(&self, sub: Subcommand) -> String {
        self.output
            .clone()
            .unwrap_or_else(|| format!("./modlab-{}.{}", sub.as_str(), self.format.extension()))
    }
}

/// Resolves the grid for dimension `n`.
///
/// In space a square count sets the radial shells to a quarter of it and
/// sizes the angular cells so that each one is crossed by a radial curve.
pub fn resolve_grid(grid: GridConfig, n: usize, curves: usize) -> GridResolution {
    match grid {
        GridConfig::Full(g) => g,
        GridConfig::Square(g) if n == 2 => GridResolution::square(g),
        GridConfig::Square(g) => {
            let polar = ((curves as f64 / 2.8).sqrt().round() as usize).max(1);
            GridResolution {
                radial: (g / 4).max(1),
                azimuthal: 2 * polar,
                polar,
            }
        }
    }
}
