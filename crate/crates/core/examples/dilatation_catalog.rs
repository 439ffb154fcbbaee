//! Exact and numeric dilatations across the built-in mapping catalog.
//!
//! cargo run --release --example dilatation_catalog

use modlab::catalog::{default_entries, exact_dilatation, exact_outer_dilatation};
use modlab::mapping::{
    differential_report, finite_distortion_survey, inner_dilatation, outer_dilatation,
    sample_domain_points,
};

fn main() -> modlab::Result<()> {
    for entry in default_entries()? {
        let n = entry.dim() as f64;
        let map = entry.map();
        println!(
            "{} (n = {}, multiplicity {:?}, limit set {:?})",
            entry.name(),
            entry.dim(),
            map.multiplicity(),
            entry.limit_set()
        );
        let mut worst: f64 = 0.0;
        for x in sample_domain_points(map, 4, 0.05, 11) {
            let rep = differential_report(map, &x, 1e-5)?;
            let (ki, ko) = (inner_dilatation(&rep, n), outer_dilatation(&rep, n));
            let (ei, eo) = (exact_dilatation(&entry, &x, n)?, exact_outer_dilatation(&entry, &x, n)?);
            worst = worst.max((ki / ei - 1.0).abs()).max((ko / eo - 1.0).abs());
            println!("  x = {x}: K_I {ki:>12.6} (exact {ei:>12.6})  K_O {ko:>12.6} (exact {eo:>12.6})");
        }
        let share = finite_distortion_survey(map, 200, 3)?;
        println!("  max relative error {worst:.2e}, finite distortion on {:.1}% of samples", 100.0 * share);
    }
    Ok(())
}
