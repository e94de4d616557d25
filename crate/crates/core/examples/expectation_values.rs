//! `⟨Ĵ⟩`, `⟨U⟩` and `⟨e^{sĴ}⟩` in coherent states next to their
//! approximations.
//!
//! `cargo run --example expectation_values`

use circle_cs::coherent::{self, PhasePoint};
use circle_cs::hilbert::Sector;

pub struct Summary {
    pub j_quarter: f64,
    pub max_j_deviation: f64,
    pub u_origin: f64,
}

pub fn run() -> Summary {
    println!("{:>6} {:>14} {:>14} {:>12}", "l", "⟨J⟩", "approx", "⟨J⟩ − l");
    let mut max_j_deviation: f64 = 0.0;
    for k in 0..=8 {
        let l = k as f64 / 8.0;
        let p = PhasePoint::new(l, 0.0).unwrap();
        let exact = coherent::expect_j(p, Sector::Boson);
        max_j_deviation = max_j_deviation.max((exact - l).abs());
        println!(
            "{l:>6.3} {exact:>14.9} {:>14.9} {:>12.3e}",
            coherent::expect_j_approx(l, Sector::Boson),
            exact - l
        );
    }
    println!("correction amplitude 2π e^(−π²) = {:.6e}", coherent::j_correction_amplitude());

    let o = PhasePoint::origin();
    let u_origin = coherent::expect_u(o, Sector::Boson).re;
    println!("\n⟨U⟩ at the origin: boson {u_origin:.7}, fermion {:.7}, e^(−¼) = {:.7}",
        coherent::expect_u(o, Sector::Fermion).re,
        (-0.25f64).exp()
    );
    let p = PhasePoint::new(0.4, 2.0).unwrap();
    let rel = coherent::relative_expect_u(p, o, Sector::Boson).unwrap();
    println!("⟨U⟩_(0.4,2) / ⟨U⟩_(0,0) = {rel:.6}  (|·| = {:.6}, arg = {:.6})", rel.norm(), rel.arg());

    for s in [-2.0, 0.5, 1.5] {
        let v = coherent::expect_exp_j(s, PhasePoint::new(0.3, 0.0).unwrap(), Sector::Boson).unwrap();
        println!("⟨e^({s} J)⟩ at l = 0.3: {:.10} vs e^(s²/4 + sl) = {:.10}", v.exact, v.approx);
    }

    Summary {
        j_quarter: coherent::expect_j(PhasePoint::new(0.25, 0.0).unwrap(), Sector::Boson),
        max_j_deviation,
        u_origin,
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
