use std::f64::consts::PI;

use circle_cs::bargmann::{self, BargmannOperator};
use circle_cs::cli::fmt_sig;
use circle_cs::coherent::{self, PhasePoint};
use circle_cs::hilbert::{self, Operator, Sector, StateVector, Truncation};
use circle_cs::theta::{self, SeriesControl, ThetaArg, ThetaKind};
use circle_cs::Complex64;
use proptest::prelude::*;

fn sector() -> impl Strategy<Value = Sector> {
    prop_oneof![Just(Sector::Boson), Just(Sector::Fermion)]
}

fn point(l_abs: f64) -> impl Strategy<Value = PhasePoint> {
    (-l_abs..=l_abs, 0.0..2.0 * PI).prop_map(|(l, phi)| PhasePoint::new(l, phi).unwrap())
}

fn state(sector: Sector) -> impl Strategy<Value = StateVector> {
    let trunc = Truncation::new(16).unwrap();
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), trunc.dim(sector)).prop_map(move |v| {
        StateVector::from_coeffs(sector, trunc, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
    })
}

fn sector_and_state() -> impl Strategy<Value = StateVector> {
    sector().prop_flat_map(state)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn theta_even(re in -1.0..1.0f64, im in -1.0..1.0f64, tau_im in 0.2..4.0f64) {
        let ctl = SeriesControl::default();
        for kind in [ThetaKind::Two, ThetaKind::Three, ThetaKind::Four] {
            let a = theta::theta(kind, ThetaArg::imaginary(Complex64::new(re, im), tau_im).unwrap(), ctl).unwrap();
            let b = theta::theta(kind, ThetaArg::imaginary(Complex64::new(-re, -im), tau_im).unwrap(), ctl).unwrap();
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn overlap_hermitian_and_matches_series(a in point(2.0), b in point(2.0), s in sector()) {
        let ab = coherent::overlap_closed(a, b, s);
        let ba = coherent::overlap_closed(b, a, s);
        prop_assert!((ab - ba.conj()).norm() < 1e-12 * ab.norm().max(1.0));
        let trunc = Truncation::new(40).unwrap();
        let series = hilbert::inner(
            &coherent::coherent_state(a, s, trunc).unwrap(),
            &coherent::coherent_state(b, s, trunc).unwrap(),
        ).unwrap();
        prop_assert!((ab - series).norm() < 1e-12 * series.norm().max(1.0));
    }

    #[test]
    fn state_json_round_trip(s in sector_and_state()) {
        let text = serde_json::to_string(&s).unwrap();
        let back: StateVector = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn u_then_udag_is_identity_inside(s in sector_and_state()) {
        let trunc = s.truncation();
        let back = hilbert::apply_product(&[Operator::Udag, Operator::U], &s).unwrap();
        prop_assert!(back.max_diff_on(&s, trunc.interior(s.sector(), 1)) == 0.0);
    }

    #[test]
    fn time_reversal_involution_and_antiunitary(a in state(Sector::Fermion), b in state(Sector::Fermion)) {
        let ta = hilbert::apply_time_reversal(&a);
        prop_assert_eq!(hilbert::apply_time_reversal(&ta), a.clone());
        let tb = hilbert::apply_time_reversal(&b);
        let lhs = hilbert::inner(&ta, &tb).unwrap();
        let rhs = hilbert::inner(&a, &b).unwrap().conj();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn expect_j_odd_in_l(l in -2.0..2.0f64, s in sector()) {
        let plus = coherent::expect_j(PhasePoint::new(l, 0.0).unwrap(), s);
        let minus = coherent::expect_j(PhasePoint::new(-l, 0.0).unwrap(), s);
        prop_assert!((plus + minus).abs() < 1e-12);
        prop_assert!((plus - l).abs() <= coherent::j_correction_amplitude() * 1.001);
    }

    #[test]
    fn functional_actions_agree(s in sector_and_state(), re in -1.0..1.0f64, im in 0.0..2.0 * PI) {
        let f = bargmann::to_bargmann(&s);
        let w = Complex64::new(re, im);
        for kind in BargmannOperator::ALL {
            let g = bargmann::apply_op_bargmann(kind, &f).unwrap();
            let want = g.eval_log(w);
            let got = bargmann::functional_action(kind, &f, w);
            // Window edges leak whatever the shift pushes out; compare only
            // operators that keep the support inside.
            if matches!(kind, BargmannOperator::J | BargmannOperator::T) {
                prop_assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0), "{kind:?}");
            }
        }
    }

    #[test]
    fn sig_digits_round_trip(x in -1e12..1e12f64, digits in 1u8..=17) {
        let text = fmt_sig(x, digits);
        let back: f64 = text.parse().unwrap();
        let tol = 10f64.powi(1 - digits as i32) * x.abs();
        prop_assert!((back - x).abs() <= tol, "{x} -> {text}");
    }
}
