//! Discrete p-modulus of radial ring families against the closed form.
//!
//! cargo run --release --example ring_modulus

use std::f64::consts::E;
use std::time::Instant;

use modlab::geometry::{sample_ring_curves, Domain, MetricField};
use modlab::modulus::{estimate_modulus, ring_modulus_reference, GridResolution, ModulusOptions};
use modlab::Point;

fn run(n: usize, p: f64, r2: f64, curves: usize, grid: GridResolution) -> modlab::Result<()> {
    let center = Point::origin(n)?;
    let family = sample_ring_curves(center, 1.0, r2, curves, 0.0, 0)?;
    let domain = Domain::annulus(center, 1.0, r2)?;
    let metric = MetricField::flat(n)?;
    let opts = ModulusOptions {
        p,
        grid,
        ..Default::default()
    };
    let start = Instant::now();
    let est = estimate_modulus(&family, &domain, &metric, &opts)?;
    let reference = ring_modulus_reference(n, p, 1.0, r2)?;
    println!(
        "n={n} p={p} A(0,1,{r2:.4}) curves={curves} grid={}x{}x{}: estimate {:.5} reference {:.5} rel_err {:+.3e} sweeps {} gap {:.1e} ({:.2?})",
        grid.radial,
        grid.azimuthal,
        grid.polar,
        est.value,
        reference,
        est.value / reference - 1.0,
        est.iterations,
        est.relative_gap(),
        start.elapsed()
    );
    Ok(())
}

fn main() -> modlab::Result<()> {
    run(2, 2.0, E, 400, GridResolution::square(256))?;
    run(2, 3.0, 2.0, 400, GridResolution::square(128))?;
    run(
        3,
        3.0,
        2.0,
        400,
        GridResolution {
            radial: 64,
            azimuthal: 24,
            polar: 12,
        },
    )?;
    Ok(())
}
