//! Functional representation: states as Laurent series in `ξ*`, the
//! Gaussian-weighted inner product by quadrature, the reproducing kernel and
//! covariant symbols.
//!
//! `cargo run --release --example bargmann_kernel`

use circle_cs::bargmann::{self, BargmannFunction, BargmannOperator, Quadrature};
use circle_cs::coherent::PhasePoint;
use circle_cs::hilbert::{HalfInt, Operator, OperatorMatrix, Sector, Truncation};
use circle_cs::Complex64;

pub struct Summary {
    pub worst_orthonormality: f64,
    pub reproduce_gap: f64,
    pub cross_sector: f64,
    pub kernel_gap: f64,
}

pub fn run() -> Summary {
    let trunc = Truncation::new(40).unwrap();
    let q = Quadrature::new(40, 64).unwrap();
    let e = |sector, tj| BargmannFunction::basis(sector, HalfInt::from_twice(tj), trunc).unwrap();

    let mut worst_orthonormality: f64 = 0.0;
    for a in -3..=3 {
        for b in -3..=3 {
            let v = bargmann::inner_quadrature(&e(Sector::Boson, 2 * a), &e(Sector::Boson, 2 * b), &q).unwrap();
            worst_orthonormality = worst_orthonormality.max((v - if a == b { 1.0 } else { 0.0 }).norm());
        }
    }
    println!("⟨e_j|e_k⟩ by quadrature, |j|,|k| ≤ 3: worst gap {worst_orthonormality:.1e}");

    // f = e_1 + i e_{−2}, then U f in both pictures.
    let f = BargmannFunction::basis(Sector::Boson, HalfInt::integer(1), trunc).unwrap();
    let g = e(Sector::Boson, -4).scale(Complex64::new(0.0, 1.0));
    let f = bargmann::to_bargmann(&bargmann::from_bargmann(&f).add(&bargmann::from_bargmann(&g)).unwrap());
    let w = Complex64::new(0.2, 1.0);
    let uf = bargmann::apply_op_bargmann(BargmannOperator::U, &f).unwrap();
    println!("(Uf)(ξ*) = {:.10}; φ(eξ*)/(√e ξ*) = {:.10}", uf.eval_log(w), bargmann::functional_action(BargmannOperator::U, &f, w));

    let eta = PhasePoint::new(0.3, 1.1).unwrap();
    let reproduced = bargmann::reproducing_apply(&f, eta, Sector::Boson, &q);
    let reproduce_gap = (reproduced - bargmann::eval(&f, eta)).norm();
    let h = e(Sector::Fermion, 1);
    let cross_sector = bargmann::reproducing_apply(&h, eta, Sector::Boson, &q).norm();
    println!("K f at η: gap {reproduce_gap:.1e}; boson kernel on a fermion function: {cross_sector:.1e}");

    let o = PhasePoint::origin();
    let k = bargmann::kernel_identity_check(o, eta, Sector::Fermion, &q);
    let kernel_gap = k.abs_error();
    println!("∫ K K = K (fermions): {:.10} vs {:.10}", k.lhs, k.rhs);

    let x = OperatorMatrix::of(Operator::X, Sector::Boson, trunc).unwrap();
    let sym = bargmann::covariant_symbol(&x, eta, Sector::Boson).unwrap();
    println!("covariant symbol of X at η: {:.10} (ξ = {:.10})", sym.symbol, eta.xi());

    Summary {
        worst_orthonormality,
        reproduce_gap,
        cross_sector,
        kernel_gap,
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
