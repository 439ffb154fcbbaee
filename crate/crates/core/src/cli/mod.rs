//! Command-line front end: JSON configuration, subcommand dispatch and
//! CSV/JSON output.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for numerical
//! failures. Errors are written to standard error as one JSON object with
//! the offending field path as a JSON pointer.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use serde_json::{json, Map, Value};

pub use commands::{execute, Outcome};
pub use config::{
    from_value, load_config, resolve_grid, CriterionKind, DomainConfig, Format, GridConfig,
    MapConfig, MetricConfig, RunConfig, Subcommand,
};
pub use output::{Cell, Table, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Numerical,
}

/// A failed run, located by JSON pointer into the configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub path: String,
    pub message: String,
}

impl CliError {
    pub fn config(path: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Config,
            path: path.to_string(),
            message: message.into(),
        }
    }

    pub fn numerical(path: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Numerical,
            path: path.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(message: impl Into<String>) -> Self {
        CliError::config("/output", message)
    }

    /// Classifies a library error raised while handling the field at `path`.
    pub fn from_lib(err: crate::Error, path: &str) -> Self {
        use crate::Error as E;
        let kind = match err {
            E::InvalidRadii(_)
            | E::UnsupportedDimension(_)
            | E::ParameterRange(_)
            | E::InvalidArgument(_)
            | E::Expression(_) => ErrorKind::Config,
            _ => ErrorKind::Numerical,
        };
        CliError {
            kind,
            path: path.to_string(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => EXIT_CONFIG,
            ErrorKind::Numerical => EXIT_NUMERICAL,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "error": match self.kind {
                ErrorKind::Config => "config",
                ErrorKind::Numerical => "numerical",
            },
            "path": self.path,
            "message": self.message,
        })
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (at '{}')", self.message, self.path)
    }
}

impl std::error::Error for CliError {}

#[derive(Parser, Debug)]
#[command(
    name = "modlab",
    version,
    about = "p-moduli of curve families, dilatations and boundary criteria"
)]
struct Args {
    #[arg(value_enum)]
    subcommand: Subcommand,
    /// JSON run configuration; flags below override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<CriterionKind>,
    /// Expression for q(t) or Q(x).
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Catalog entry to use as the map.
    #[arg(long)]
    name: Option<String>,
    /// List every catalog entry.
    #[arg(long)]
    list: bool,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    curves: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    eps0: Option<f64>,
    #[arg(long)]
    decades: Option<usize>,
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    points: Option<usize>,
    /// Output file; `-` writes to standard output.
    #[arg(long)]
    output: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Args {
    fn overrides(&self) -> Vec<(&'static str, Value)> {
        let mut o = Vec::new();
        let mut put = |k: &'static str, v: Option<Value>| {
            if let Some(v) = v {
                o.push((k, v));
            }
        };
        put("kind", self.kind.map(|k| json!(k)));
        put("q", self.q.as_ref().map(|v| json!(v)));
        put("n", self.n.map(|v| json!(v)));
        put("p", self.p.map(|v| json!(v)));
        put("s", self.s.map(|v| json!(v)));
        put("alpha", self.alpha.map(|v| json!(v)));
        put("grid", self.grid.map(|v| json!(v)));
        put("curves", self.curves.map(|v| json!(v)));
        put("tol", self.tol.map(|v| json!(v)));
        put("max_iter", self.max_iter.map(|v| json!(v)));
        put("seed", self.seed.map(|v| json!(v)));
        put("eps0", self.eps0.map(|v| json!(v)));
        put("decades", self.decades.map(|v| json!(v)));
        put("resolution", self.resolution.map(|v| json!(v)));
        put("points", self.points.map(|v| json!(v)));
        put("output", self.output.as_ref().map(|v| json!(v)));
        put("format", self.format.map(|v| json!(v)));
        put("list", self.list.then_some(json!(true)));
        o
    }
}

/// Merges the config file and command-line flags into one validated config.
fn assemble(args: &Args) -> Result<RunConfig, CliError> {
    let mut doc = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config("", format!("cannot read {}: {e}", path.display()))
            })?;
            serde_json::from_str::<Value>(&text).map_err(|e| {
                CliError::config("", format!("invalid JSON in {}: {e}", path.display()))
            })?
        }
        None => Value::Object(Map::new()),
    };
    let obj = doc
        .as_object_mut()
        .ok_or_else(|| CliError::config("", "configuration must be a JSON object"))?;
    for (key, value) in args.overrides() {
        obj.insert(key.to_string(), value);
    }
    if let Some(name) = &args.name {
        let params = obj
            .get("map")
            .and_then(|m| m.get("catalog"))
            .and_then(|c| c.get("params"))
            .cloned()
            .unwrap_or_else(|| json!({}));
        obj.insert("map".into(), json!({"catalog": {"name": name, "params": params}}));
    }
    let sub = json!(args.subcommand);
    match obj.get("subcommand") {
        Some(existing) if *existing != sub => {
            return Err(CliError::config(
                "/subcommand",
                format!("config is for {existing}, but {sub} was requested"),
            ))
        }
        _ => {
            obj.insert("subcommand".into(), sub);
        }
    }
    let cfg = from_value(doc)?;
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("MODLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::config("$MODLAB_THREADS", format!("expected a positive integer, got '{raw}'")))?;
    // a pool built earlier in the same process stays in place
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn write_artifact(path: &str, bytes: &[u8]) -> Result<(), CliError> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes).map_err(|e| CliError::io(e.to_string()))?;
        return out.flush().map_err(|e| CliError::io(e.to_string()));
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(format!("cannot write {path}: {e}")))
}

fn run_parsed(args: &Args) -> Result<String, CliError> {
    configure_threads()?;
    let cfg = assemble(args)?;
    let outcome = execute(&cfg)?;
    let resolved = serde_json::to_value(&outcome.resolved)
        .map_err(|e| CliError::config("", format!("cannot serialize config: {e}")))?;
    let path = outcome.resolved.output_path(args.subcommand);
    let bytes = outcome.table.render(&resolved, outcome.resolved.format)?;
    write_artifact(&path, &bytes)?;
    Ok(format!("{} -> {path}", outcome.summary))
}

/// Runs the tool on an argument vector (program name first) and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            let err = CliError::config("", e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return EXIT_CONFIG;
        }
    };
    match run_parsed(&args) {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            err.exit_code()
        }
    }
}
