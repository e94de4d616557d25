//! The algebra `[Ĵ, U] = U` on a truncated basis, the operator
//! `X = U e^{−Ĵ−½}` and its deformed commutation relations.
//!
//! `cargo run --example operator_algebra`

use circle_cs::hilbert::{self, HalfInt, Operator, OperatorMatrix, Sector, Truncation};
use circle_cs::Complex64;

pub fn run() -> f64 {
    let trunc = Truncation::new(12).unwrap();
    let mut worst: f64 = 0.0;
    for sector in Sector::all() {
        println!("{sector} sector, {} basis states", trunc.dim(sector));
        for tj in trunc.interior(sector, 2) {
            let j = HalfInt::from_twice(tj);
            let ket = hilbert::basis_state(sector, j, trunc).unwrap();
            let xxd = hilbert::apply_product(&[Operator::X, Operator::Xdag], &ket).unwrap();
            let xdx = hilbert::apply_product(&[Operator::Xdag, Operator::X], &ket).unwrap();
            let commutator = xxd.sub(&xdx).unwrap().coeff(tj).re;
            let want = 2.0 * 1.0f64.sinh() * (-2.0 * j.value()).exp();
            worst = worst.max((commutator / want - 1.0).abs());
            println!("  j = {j:>5}: [X, X†] = {commutator:>12.6e}   2 sinh 1 · e^(−2j) = {want:>12.6e}");
        }
    }

    // Time reversal swaps U and U†.
    let sector = Sector::Boson;
    let ket = hilbert::basis_state(sector, HalfInt::integer(2), trunc).unwrap();
    let tut = hilbert::apply_time_reversal(
        &hilbert::apply_operator(Operator::U, &hilbert::apply_time_reversal(&ket)).unwrap(),
    );
    let udag = hilbert::apply_operator(Operator::Udag, &ket).unwrap();
    println!("T U T |2⟩ == U† |2⟩: {}", tut == udag);

    let x = OperatorMatrix::of(Operator::X, sector, trunc).unwrap();
    println!("⟨1|X|0⟩ = {}", x.element(2, 0));
    assert_eq!(x.element(2, 0), Complex64::new((-0.5f64).exp(), 0.0));
    worst
}

#[allow(dead_code)]
fn main() {
    println!("worst relative error {:.1e}", run());
}
