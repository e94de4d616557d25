//! Time evolution: stability under `Ĥ = ωĴ`, spreading under the free rotor
//! `Ĥ = Ĵ²/2`, and Heisenberg-picture averages against their Gaussian
//! approximations.
//!
//! `cargo run --example dynamics`

use circle_cs::coherent::{self, Hamiltonian, PhasePoint};
use circle_cs::hilbert::{Sector, Truncation};

pub struct Summary {
    pub linear_gap: f64,
    pub u_error_at_half: f64,
}

pub fn run() -> Summary {
    let trunc = Truncation::new(40).unwrap();
    let p = PhasePoint::new(0.5, 0.3).unwrap();
    let state = coherent::coherent_state(p, Sector::Boson, trunc).unwrap();

    let (omega, t) = (2.0, 1.2);
    let moved = coherent::evolve(&state, Hamiltonian::Linear { omega }, t);
    let target = coherent::coherent_state(PhasePoint::new(0.5, 0.3 + omega * t).unwrap(), Sector::Boson, trunc).unwrap();
    let linear_gap = moved.max_diff_on(&target, trunc.slots(Sector::Boson));
    println!("ωJ evolution stays coherent: max coefficient gap {linear_gap:.1e}");

    let free = coherent::evolve(&state, Hamiltonian::FreeRotor, 1.0);
    let best = coherent::coherent_state(PhasePoint::new(0.5, 0.3 + 0.5).unwrap(), Sector::Boson, trunc).unwrap();
    let overlap = circle_cs::hilbert::inner(&best, &free).unwrap().norm() / state.norm_sq();
    println!("free rotor after t = 1: |⟨l, φ + l/1⟩|/‖ξ‖² = {overlap:.4}");

    println!("\n{:>5} {:>24} {:>24}", "t", "⟨U(t)⟩", "e^(−t²/4−¼) e^(i(φ+tl))");
    let mut u_error_at_half = 0.0;
    for k in 0..=4 {
        let t = 0.5 * k as f64;
        let h = coherent::heisenberg_closed(PhasePoint::new(0.5, 0.0).unwrap(), t, Sector::Boson);
        if k == 2 {
            u_error_at_half = (h.u_t - h.u_t_approx).norm();
        }
        println!("{t:>5.2} {:>24.8} {:>24.8}", h.u_t, h.u_t_approx);
    }
    Summary {
        linear_gap,
        u_error_at_half,
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
