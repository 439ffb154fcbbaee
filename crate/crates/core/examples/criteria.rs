//! Divergence, finite mean oscillation and o(I^p) checks on model weights.
//!
//! cargo run --release --example criteria

use std::f64::consts::E;

use modlab::criteria::{
    divergence_test, fmo_test, oi_condition_check, DivergenceOptions, FmoOptions, PsiChoice,
};
use modlab::geometry::MetricField;
use modlab::Point;

type Weight = fn(&Point) -> f64;

fn main() -> modlab::Result<()> {
    // log^k(e/t) at n = p = 2: the integral diverges for k ≤ 1
    println!("divergence, n = p = 2, q = log^k(e/t):");
    for k in [0.0, 0.5, 1.0, 1.5, 2.0] {
        let v = divergence_test(move |t| (E / t).ln().powf(k), 0.5, 2, 2.0, &DivergenceOptions::default())?;
        let last = v.evidence.last().unwrap();
        println!("  k = {k:.1}: {} (I = {:.4e} after {} decades)", v.kind, last.1, last.0);
    }

    let flat = MetricField::flat(2)?;
    let o = Point::new2(0.0, 0.0);
    let opts = FmoOptions::default();
    println!("finite mean oscillation at the origin:");
    let cases: [(&str, Weight); 3] = [
        ("log(1/|x|)", |x| (1.0 / x.norm()).ln()),
        ("|x|^-1", |x| 1.0 / x.norm()),
        ("2 + x1/|x|", |x| 2.0 + x[0] / x.norm()),
    ];
    for (label, q) in cases {
        let v = fmo_test(q, o, &flat, &opts)?;
        let last = v.evidence.last().unwrap();
        println!("  {label}: {} (oscillation {:.4} at ε = {:.2e})", v.kind, last.1, last.0);
    }

    let eps: Vec<f64> = (1..=6).map(|k| 0.5 * 10f64.powi(-k)).collect();
    for (label, q) in [("Q = 1", (|_: &Point| 1.0) as Weight), ("Q = |x|^-2", |x| x.norm().powi(-2))] {
        let r = oi_condition_check(q, &PsiChoice::LogPower, o, 2.0, 0.5, &eps, 128)?;
        println!(
            "o(I^p) with {label}: ratios {:?}, plausible {}",
            r.ratios.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>(),
            r.plausible
        );
    }
    Ok(())
}
