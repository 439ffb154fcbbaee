//! Drives the same pipeline as the `modlab` binary from JSON configs and
//! prints each result table as CSV.
//!
//! cargo run --release --example run_configs [config.json ...]

use modlab::cli::{execute, from_value, load_config, Format, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let configs: Vec<RunConfig> = if args.is_empty() {
        vec![
            from_value(serde_json::json!({
                "subcommand": "modulus",
                "domain": {"kind": "annulus", "r1": 1.0, "r2": 2.0},
                "p": 3, "n": 3, "grid": 24, "curves": 200
            }))?,
            from_value(serde_json::json!({
                "subcommand": "criteria",
                "kind": "divergence",
                "map": {"catalog": {"name": "counterexample_n"}},
                "decades": 20
            }))?,
            from_value(serde_json::json!({"subcommand": "probe-limit", "map": {"catalog": {"name": "radial_power"}}}))?,
        ]
    } else {
        args.iter().map(|p| load_config(p.as_ref())).collect::<Result<_, _>>()?
    };
    for cfg in configs {
        cfg.validate()?;
        let out = execute(&cfg)?;
        println!("== {}", out.summary);
        let bytes = out.table.render(&serde_json::to_value(&out.resolved)?, Format::Csv)?;
        print!("{}", String::from_utf8_lossy(&bytes));
    }
    Ok(())
}
