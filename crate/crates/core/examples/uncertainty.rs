//! Coherent states saturate the uncertainty relation for
//! `Q = (X + X†)/2`, `P = (X − X†)/2i`; basis states do not.
//!
//! `cargo run --example uncertainty`

use circle_cs::coherent::{self, PhasePoint};
use circle_cs::hilbert::{self, HalfInt, Sector, Truncation};

pub struct Summary {
    pub worst_equality: f64,
    pub basis_ratio: f64,
}

pub fn run() -> Summary {
    let trunc = Truncation::new(40).unwrap();
    let mut worst_equality: f64 = 0.0;
    println!("{:>6} {:>6} {:>14} {:>14}", "l", "φ", "ΔQ ΔP", "bound");
    for &(l, phi) in &[(0.0, 0.0), (1.0, 0.5), (-1.5, 3.1), (2.0, 6.0)] {
        let p = PhasePoint::new(l, phi).unwrap();
        let u = coherent::uncertainty_of_state(&coherent::coherent_state(p, Sector::Boson, trunc).unwrap()).unwrap();
        worst_equality = worst_equality.max((u.product() - u.bound).abs());
        println!("{l:>6.2} {phi:>6.2} {:>14.10} {:>14.10}", u.product(), u.bound);
    }
    let ket = hilbert::basis_state(Sector::Boson, HalfInt::integer(1), trunc).unwrap();
    let u = coherent::uncertainty_of_state(&ket).unwrap();
    let basis_ratio = u.bound / u.product();
    println!("|1⟩: ΔQ ΔP = {:.6}, bound = {:.6}, ratio {basis_ratio:.6} (tanh 1 = {:.6})", u.product(), u.bound, 1.0f64.tanh());
    Summary {
        worst_equality,
        basis_ratio,
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
