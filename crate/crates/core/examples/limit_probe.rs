//! Cluster sets at the puncture: how far the image of small spheres sits
//! from the declared limit set.
//!
//! cargo run --release --example limit_probe

use modlab::catalog::{make_catalog_map, probe_limit_set, CatalogName, CatalogParams};

fn main() -> modlab::Result<()> {
    let radii = [1e-2, 1e-4, 1e-6, 1e-10, 1e-20, 1e-40];
    for name in [CatalogName::CounterexampleN, CatalogName::RadialPower, CatalogName::AnnulusBlowup] {
        let entry = make_catalog_map(name, &CatalogParams::default())?;
        let probe = probe_limit_set(&entry, 64, &radii)?;
        println!("{name}: expected {:?}, confirmed {}", probe.descriptor, probe.confirmed);
        for (r, sep) in &probe.separations {
            println!("  r = {r:.0e}: separation {sep:.6e}");
        }
    }
    Ok(())
}
