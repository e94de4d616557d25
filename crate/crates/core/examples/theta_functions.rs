//! Jacobi theta functions and the identities that connect the two moduli
//! `τ = i/π` and `τ = iπ` used throughout the library.
//!
//! `cargo run --example theta_functions`

use std::f64::consts::PI;

use circle_cs::theta::{self, SeriesControl, ThetaArg, ThetaKind};
use circle_cs::Complex64;

pub struct Summary {
    pub theta3_origin: f64,
    pub theta2_origin: f64,
    pub worst_inversion: f64,
    pub worst_shift: f64,
}

pub fn run() -> Summary {
    let ctl = SeriesControl::default();
    let at = |kind, v: Complex64, tau_im: f64| {
        theta::theta(kind, ThetaArg::imaginary(v, tau_im).unwrap(), ctl).unwrap()
    };

    let theta3_origin = at(ThetaKind::Three, Complex64::new(0.0, 0.0), 1.0 / PI).re;
    let theta2_origin = at(ThetaKind::Two, Complex64::new(0.0, 0.0), 1.0 / PI).re;
    println!("θ₃(0 | i/π) = {theta3_origin:.10}");
    println!("θ₂(0 | i/π) = {theta2_origin:.10}");

    // θ₃(il/π | i/π) = √π e^{l²} θ₃(l | iπ): slow series on the left, a
    // handful of terms on the right.
    let mut worst_inversion: f64 = 0.0;
    println!("\n{:>6} {:>22} {:>22}", "l", "θ₃(il/π | i/π)", "√π e^{l²} θ₃(l | iπ)");
    for k in -4..=4 {
        let l = 0.5 * k as f64;
        let lhs = at(ThetaKind::Three, Complex64::new(0.0, l / PI), 1.0 / PI);
        let rhs = PI.sqrt() * (l * l).exp() * at(ThetaKind::Three, Complex64::new(l, 0.0), PI);
        worst_inversion = worst_inversion.max(((lhs - rhs) / rhs).norm());
        println!("{l:>6.2} {:>22.15e} {:>22.15e}", lhs.re, rhs.re);
    }

    let mut worst_shift: f64 = 0.0;
    for &v in &[Complex64::new(0.1, 0.2), Complex64::new(-0.25, 0.4), Complex64::new(0.0, -0.3)] {
        let arg = ThetaArg::imaginary(v, PI).unwrap();
        let direct = theta::theta(ThetaKind::Two, arg, ctl).unwrap();
        let shifted = theta::theta2_via_shift(arg, ctl).unwrap();
        worst_shift = worst_shift.max(((direct - shifted) / direct).norm());
    }
    println!("\nworst relative error: inversion {worst_inversion:.1e}, half-period shift {worst_shift:.1e}");

    let d = theta::theta_log_derivative(ThetaKind::Three, ThetaArg::imaginary(Complex64::new(0.25, 0.0), PI).unwrap(), ctl)
        .unwrap();
    println!("θ₃'/θ₃ at (¼ | iπ) = {:.6e}", d.re);

    Summary {
        theta3_origin,
        theta2_origin,
        worst_inversion,
        worst_shift,
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
