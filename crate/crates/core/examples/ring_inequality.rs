//! The ring inequality M_p(f Γ) ≤ ∫ K_{I,p} η^p on catalog maps.
//!
//! cargo run --release --example ring_inequality

use modlab::catalog::{exact_dilatation, make_catalog_map, CatalogName, CatalogParams};
use modlab::func::field;
use modlab::modulus::{check_ring_inequality, extremal_eta, GridResolution, RingCheckOptions};
use modlab::Point;

fn main() -> modlab::Result<()> {
    let cases = [
        (CatalogName::RadialPower, CatalogParams::n(2).with_alpha(0.5), 2.0),
        (CatalogName::RadialPower, CatalogParams::n(2).with_alpha(2.0), 1.5),
        (CatalogName::PlanarPower, CatalogParams::default(), 2.0),
        (CatalogName::CounterexampleAlpha, CatalogParams::default(), 1.5),
    ];
    let (r1, r2) = (0.25, 0.75);
    let opts = RingCheckOptions {
        grid: GridResolution::square(128),
        ..Default::default()
    };
    for (name, params, p) in cases {
        let entry = make_catalog_map(name, &params)?;
        let e = entry.clone();
        let q = field(move |x| exact_dilatation(&e, x, p).unwrap_or(f64::INFINITY));
        let eta = extremal_eta(2, p, r1, r2)?;
        let r = check_ring_inequality(entry.map(), Point::new2(0.0, 0.0), r1, r2, p, &q, &eta, &opts)?;
        println!(
            "{name} (alpha {:?}) p = {p}: lhs {:.5} rhs {:.5} ratio {:.4} holds {} (∫η = {:.6})",
            params.alpha,
            r.lhs,
            r.rhs,
            r.ratio(),
            r.holds,
            r.eta_integral
        );
    }
    Ok(())
}
