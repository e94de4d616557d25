//! Free-rotor level populations `|⟨j|ξ⟩|²/⟨ξ|ξ⟩` of a coherent state and the
//! discrete Gaussian they approach.
//!
//! `cargo run --example energy_distribution`

use circle_cs::coherent::{self, PhasePoint, SectorPolicy};
use circle_cs::hilbert::{Sector, Truncation};

pub struct Summary {
    pub prob_zero: f64,
    pub total: f64,
    pub worst_gaussian: f64,
}

pub fn run() -> Summary {
    let trunc = Truncation::new(40).unwrap();
    let levels = coherent::energy_distribution(PhasePoint::origin(), Sector::Boson, trunc, SectorPolicy::BosonOnly).unwrap();
    println!("{:>4} {:>8} {:>14} {:>14}", "j", "E", "prob", "π^(−½)e^(−j²)");
    for e in levels.iter().filter(|e| e.j.abs() <= 3.0) {
        println!("{:>4} {:>8.1} {:>14.10} {:>14.10}", e.j, e.energy, e.prob, e.gaussian);
    }
    let prob_zero = levels.iter().find(|e| e.j == 0.0).unwrap().prob;
    let total = levels.iter().map(|e| e.prob).sum();
    let worst_gaussian = (0..=10)
        .flat_map(|k| {
            let p = PhasePoint::new(k as f64 / 10.0, 0.0).unwrap();
            coherent::energy_distribution(p, Sector::Boson, trunc, SectorPolicy::BosonOnly).unwrap()
        })
        .map(|e| (e.prob - e.gaussian).abs())
        .fold(0.0, f64::max);
    println!("sum {total:.15}, worst Gaussian gap over l ∈ [0,1]: {worst_gaussian:.2e}");
    Summary {
        prob_zero,
        total,
        worst_gaussian,
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
