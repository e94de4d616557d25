//! Coherent states `|l, φ⟩`: overlaps and norms as theta functions, checked
//! against inner products of the truncated vectors.
//!
//! `cargo run --example coherent_overlaps`

use circle_cs::coherent::{self, PhasePoint};
use circle_cs::hilbert::{self, Sector, Truncation};

pub fn run() -> f64 {
    let trunc = Truncation::new(40).unwrap();
    let points = [(0.0, 0.0), (0.7, 1.0), (-1.2, 4.0), (1.5, 5.9)];
    let mut worst: f64 = 0.0;
    for sector in Sector::all() {
        println!("{sector}");
        for &(l1, p1) in &points {
            for &(l2, p2) in &points[..2] {
                let a = PhasePoint::new(l1, p1).unwrap();
                let b = PhasePoint::new(l2, p2).unwrap();
                let closed = coherent::overlap_closed(a, b, sector);
                let series = hilbert::inner(
                    &coherent::coherent_state(a, sector, trunc).unwrap(),
                    &coherent::coherent_state(b, sector, trunc).unwrap(),
                )
                .unwrap();
                worst = worst.max((closed - series).norm() / series.norm());
                println!("  ⟨{l1:+.1},{p1:.1}|{l2:+.1},{p2:.1}⟩ = {closed:.10}");
            }
        }
        let o = PhasePoint::origin();
        println!("  ⟨0,0|0,0⟩ = {:.7}", coherent::norm_sq(o, sector));
    }
    worst
}

#[allow(dead_code)]
fn main() {
    println!("worst relative gap between theta and series: {:.1e}", run());
}
