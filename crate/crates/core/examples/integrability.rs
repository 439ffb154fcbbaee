//! Integrability of K^p near an isolated singularity: the blow-up map with
//! n = 3 and p = 2 has ∫ K_{I,3}^2 finite exactly for α < 3/4.
//!
//! cargo run --release --example integrability

use modlab::catalog::{exact_dilatation, make_catalog_map, CatalogName, CatalogParams};
use modlab::criteria::{ls_integrability_test, LsOptions};
use modlab::geometry::Domain;
use modlab::Point;

fn main() -> modlab::Result<()> {
    let ball = Domain::punctured_ball(Point::new3(0.0, 0.0, 0.0), 1.0)?;
    for alpha in [0.7, 0.8] {
        let entry = make_catalog_map(CatalogName::AnnulusBlowup, &CatalogParams::n(3).with_alpha(alpha))?;
        let rep = ls_integrability_test(
            |x| exact_dilatation(&entry, x, 3.0).unwrap_or(f64::INFINITY),
            &ball,
            2.0,
            &LsOptions::default(),
        )?;
        println!(
            "alpha = {alpha}: converged {} (∫ over |x| > {:.0e} is {:.6e})",
            rep.converged,
            rep.values.last().unwrap().0,
            rep.value
        );
    }
    Ok(())
}
