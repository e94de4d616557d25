//! The verification suite: every identity of the library evaluated on fixed
//! grids and seeded random points, collected into a JSON report.
//!
//! Each check records the worst error over its cases and the tolerance it is
//! held to; `passed` is exactly `max_abs_error <= tolerance`. Checks whose
//! name ends in `_rel` measure relative error. A NaN error (from a failed
//! evaluation) always fails and serializes as `null`.
//!
//! The report contains no timings and all random points come from a seeded
//! ChaCha stream, so identical configs give byte-identical JSON.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bargmann::{self, BargmannFunction, BargmannOperator, NodeProjector, Quadrature};
use crate::coherent::{self, Hamiltonian, PhasePoint, SectorPolicy};
use crate::hilbert::{self, HalfInt, Operator, Sector, StateVector, Truncation};
use crate::theta::{self, SeriesControl, ThetaArg, ThetaKind};

pub const REPORT_VERSION: &str = concat!("circle-cs ", env!("CARGO_PKG_VERSION"), "/report-1");

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("cannot parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Flat configuration; every field is optional in the JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub two_jmax: i32,
    pub n_l: usize,
    pub n_phi: usize,
    pub series_tol: f64,
    pub series_n_max: usize,
    pub seed: u64,
    /// Random cases per randomized check.
    pub n_random: usize,
    /// Random point pairs per sector for the kernel identity.
    pub n_kernel_pairs: usize,
    pub tol_theta_rel: f64,
    pub tol_theta_fd: f64,
    pub tol_algebra_rel: f64,
    pub tol_j_lattice: f64,
    pub tol_j_approx: f64,
    pub j_deviation_lo: f64,
    pub j_deviation_hi: f64,
    pub tol_u_phase: f64,
    pub tol_u_modulus: f64,
    pub tol_u_series: f64,
    pub tol_eigen_floor: f64,
    pub tol_coefficient_rel: f64,
    pub tol_uncertainty: f64,
    pub basis_ratio_max: f64,
    pub tol_exp_j_exact_rel: f64,
    pub tol_exp_j_approx_rel: f64,
    pub tol_quadrature: f64,
    pub tol_reproducing: f64,
    pub tol_kernel: f64,
    pub tol_projector: f64,
    pub tol_bargmann_rel: f64,
    pub tol_distribution: f64,
    pub tol_distribution_sum: f64,
    pub tol_dynamics_linear_rel: f64,
    pub tol_dynamics_free: f64,
    pub tol_heisenberg: f64,
    pub tol_heisenberg_series: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            two_jmax: 40,
            n_l: 40,
            n_phi: 64,
            series_tol: 1e-20,
            series_n_max: 10_000,
            seed: 20_240_601,
            n_random: 50,
            n_kernel_pairs: 10,
            tol_theta_rel: 1e-12,
            tol_theta_fd: 1e-8,
            tol_algebra_rel: 1e-12,
            tol_j_lattice: 1e-12,
            tol_j_approx: 1e-8,
            j_deviation_lo: 3.2e-4,
            j_deviation_hi: 3.3e-4,
            tol_u_phase: 1e-12,
            tol_u_modulus: 5e-4,
            tol_u_series: 1e-10,
            tol_eigen_floor: 1e-13,
            tol_coefficient_rel: 1e-14,
            tol_uncertainty: 1e-12,
            basis_ratio_max: 0.999,
            tol_exp_j_exact_rel: 1e-13,
            tol_exp_j_approx_rel: 1e-3,
            tol_quadrature: 1e-8,
            tol_reproducing: 1e-6,
            tol_kernel: 1e-5,
            tol_projector: 1e-6,
            tol_bargmann_rel: 1e-12,
            tol_distribution: 5e-4,
            tol_distribution_sum: 1e-12,
            tol_dynamics_linear_rel: 1e-14,
            tol_dynamics_free: 1e-10,
            tol_heisenberg: 1e-3,
            tol_heisenberg_series: 1e-10,
        }
    }
}

impl VerifyConfig {
    pub fn from_json(text: &str) -> Result<Self, VerifyError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        let bad = |m: String| Err(VerifyError::Invalid(m));
        if self.two_jmax < 24 {
            return bad(format!("two_jmax must be at least 24 (got {})", self.two_jmax));
        }
        if let Err(e) = Quadrature::new(self.n_l, self.n_phi) {
            return bad(e.to_string());
        }
        if let Err(e) = SeriesControl::new(self.series_tol, self.series_n_max) {
            return bad(e.to_string());
        }
        if self.n_random == 0 || self.n_kernel_pairs == 0 {
            return bad("n_random and n_kernel_pairs must be positive".into());
        }
        if self.j_deviation_lo.is_nan() || self.j_deviation_hi.is_nan() || self.j_deviation_lo > self.j_deviation_hi {
            return bad("j_deviation_lo must not exceed j_deviation_hi".into());
        }
        let tols = [
            self.tol_theta_rel,
            self.tol_theta_fd,
            self.tol_algebra_rel,
            self.tol_j_lattice,
            self.tol_j_approx,
            self.tol_u_phase,
            self.tol_u_modulus,
            self.tol_u_series,
            self.tol_eigen_floor,
            self.tol_coefficient_rel,
            self.tol_uncertainty,
            self.basis_ratio_max,
            self.tol_exp_j_exact_rel,
            self.tol_exp_j_approx_rel,
            self.tol_quadrature,
            self.tol_reproducing,
            self.tol_kernel,
            self.tol_projector,
            self.tol_bargmann_rel,
            self.tol_distribution,
            self.tol_distribution_sum,
            self.tol_dynamics_linear_rel,
            self.tol_dynamics_free,
            self.tol_heisenberg,
            self.tol_heisenberg_series,
        ];
        if tols.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("tolerances must be finite and non-negative".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub n_cases: usize,
}

/// A measured quantity reported without a pass/fail verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recorded {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub version: String,
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
    pub recorded: Vec<Recorded>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Running maximum that keeps a NaN once seen.
#[derive(Default)]
struct Worst {
    value: f64,
    n: usize,
}

impl Worst {
    fn push(&mut self, e: f64) {
        self.n += 1;
        if self.value.is_nan() {
            return;
        }
        if e.is_nan() || e > self.value {
            self.value = e;
        }
    }
}

fn rel(err: f64, scale: f64) -> f64 {
    err / scale.abs().max(f64::MIN_POSITIVE)
}

fn crel(got: Complex64, want: Complex64) -> f64 {
    rel((got - want).norm(), want.norm())
}

/// Relative coefficientwise distance on the given slots.
fn vec_rel(a: &StateVector, b: &StateVector, slots: impl IntoIterator<Item = i32> + Clone) -> f64 {
    let scale = slots.clone().into_iter().map(|tj| b.coeff(tj).norm()).fold(0.0, f64::max);
    rel(a.max_diff_on(b, slots), scale)
}

struct Suite<'a> {
    cfg: &'a VerifyConfig,
    ctl: SeriesControl,
    trunc: Truncation,
    quad: Quadrature,
    rng: ChaCha8Rng,
    checks: Vec<CheckResult>,
    recorded: Vec<Recorded>,
}

impl Suite<'_> {
    fn check(&mut self, name: &str, tolerance: f64, cases: impl IntoIterator<Item = f64>) {
        let mut w = Worst::default();
        cases.into_iter().for_each(|e| w.push(e));
        self.checks.push(CheckResult {
            name: name.to_string(),
            max_abs_error: w.value,
            tolerance,
            passed: w.value <= tolerance,
            n_cases: w.n,
        });
    }

    fn record(&mut self, name: &str, value: f64) {
        self.recorded.push(Recorded {
            name: name.to_string(),
            value,
        });
    }

    fn random_point(&mut self, l_abs: f64) -> PhasePoint {
        let l = self.rng.random_range(-l_abs..=l_abs);
        let phi = self.rng.random_range(0.0..2.0 * PI);
        PhasePoint::new(l, phi).expect("finite")
    }

    fn theta(&self, kind: ThetaKind, v: Complex64, tau_im: f64) -> Complex64 {
        ThetaArg::imaginary(v, tau_im)
            .and_then(|a| theta::theta(kind, a, self.ctl))
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

fn shift_case(s: &Suite, v: Complex64, tau_im: f64) -> f64 {
    let direct = s.theta(ThetaKind::Two, v, tau_im);
    let shifted = ThetaArg::imaginary(v, tau_im)
        .and_then(|a| theta::theta2_via_shift(a, s.ctl))
        .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    crel(shifted, direct)
}

fn l_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Runs every check; fails only on an invalid config.
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport, VerifyError> {
    cfg.validate()?;
    let mut suite = Suite {
        cfg,
        ctl: SeriesControl::new(cfg.series_tol, cfg.series_n_max).map_err(|e| VerifyError::Invalid(e.to_string()))?,
        trunc: Truncation::new(cfg.two_jmax).map_err(|e| VerifyError::Invalid(e.to_string()))?,
        quad: Quadrature::new(cfg.n_l, cfg.n_phi).map_err(|e| VerifyError::Invalid(e.to_string()))?,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        checks: Vec::new(),
        recorded: Vec::new(),
    };
    theta_checks(&mut suite);
    algebra_checks(&mut suite);
    coherent_checks(&mut suite);
    uncertainty_checks(&mut suite);
    exp_j_checks(&mut suite);
    dynamics_checks(&mut suite);
    distribution_checks(&mut suite);
    bargmann_checks(&mut suite);
    quadrature_checks(&mut suite);
    Ok(VerifyReport {
        version: REPORT_VERSION.to_string(),
        config: cfg.clone(),
        checks: suite.checks,
        recorded: suite.recorded,
    })
}

fn theta_checks(s: &mut Suite) {
    let tol = s.cfg.tol_theta_rel;
    let c = |re, im| Complex64::new(re, im);

    let mut even = Vec::new();
    for _ in 0..200 {
        let v = c(s.rng.random_range(-1.0..1.0), s.rng.random_range(-1.0..=1.0));
        let tau_im = if s.rng.random_bool(0.5) { 1.0 / PI } else { PI };
        for kind in [ThetaKind::Two, ThetaKind::Three] {
            even.push(crel(s.theta(kind, -v, tau_im), s.theta(kind, v, tau_im)));
        }
    }
    s.check("theta.evenness_rel", tol, even);

    let grid = l_grid(-2.0, 2.0, 81);
    let sqrt_pi = PI.sqrt();
    let inv3: Vec<f64> = grid
        .iter()
        .map(|&l| {
            let lhs = s.theta(ThetaKind::Three, c(0.0, l / PI), 1.0 / PI);
            crel(lhs, sqrt_pi * (l * l).exp() * s.theta(ThetaKind::Three, c(l, 0.0), PI))
        })
        .collect();
    s.check("theta.inversion_three_rel", tol, inv3);

    let inv2: Vec<f64> = grid
        .iter()
        .map(|&l| {
            let lhs = s.theta(ThetaKind::Two, c(0.0, l / PI), 1.0 / PI);
            crel(lhs, sqrt_pi * (l * l).exp() * s.theta(ThetaKind::Four, c(l, 0.0), PI))
        })
        .collect();
    s.check("theta.inversion_two_four_rel", tol, inv2);

    let mut shift = Vec::new();
    for tau_im in [PI, 1.0 / PI] {
        for &l in &grid {
            shift.push(shift_case(s, c(0.0, l / PI), tau_im));
        }
        for _ in 0..s.cfg.n_random {
            // θ₂ has real zeros at v = ½ + k; stay in a strip around the
            // imaginary axis where it is bounded away from them.
            let v = c(s.rng.random_range(-0.3..0.3), s.rng.random_range(-0.5..0.5));
            shift.push(shift_case(s, v, tau_im));
        }
    }
    s.check("theta.shift_relation_rel", tol, shift);

    let general: Vec<f64> = l_grid(-1.0, 1.0, 41)
        .into_iter()
        .flat_map(|x| [c(x, 0.0), c(x, 0.3 * x)])
        .map(|v| {
            let arg = ThetaArg::imaginary(v, PI).expect("positive modulus");
            let image = arg.modular_image();
            let lhs = theta::theta(ThetaKind::Three, image, s.ctl);
            let rhs = theta::theta(ThetaKind::Three, arg, s.ctl).map(|t| arg.modular_factor() * t);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => crel(a, b),
                _ => f64::NAN,
            }
        })
        .collect();
    s.check("theta.modular_general_rel", tol, general);

    let h = 1e-5;
    let mut fd = Vec::new();
    for kind in [ThetaKind::Three, ThetaKind::Four] {
        for tau_im in [PI, 1.0 / PI, 1.0] {
            for &l in &l_grid(-1.0, 1.0, 21) {
                let v = c(l, 0.1 * l);
                let arg = ThetaArg::imaginary(v, tau_im).expect("positive modulus");
                let analytic = theta::theta_log_derivative(kind, arg, s.ctl);
                let num = (s.theta(kind, v + h, tau_im) - s.theta(kind, v - h, tau_im)) / (2.0 * h);
                let value = s.theta(kind, v, tau_im);
                fd.push(match analytic {
                    Ok(a) => (a - num / value).norm(),
                    Err(_) => f64::NAN,
                });
            }
        }
    }
    s.check("theta.log_derivative_fd", s.cfg.tol_theta_fd, fd);
}

fn algebra_checks(s: &mut Suite) {
    let tol = s.cfg.tol_algebra_rel;
    let trunc = s.trunc;
    let margin = 3;
    let e2 = 2.0f64.exp();
    let two_sinh = 2.0 * 1.0f64.sinh();
    let q = (-2.0f64).exp();

    let mut per_check: Vec<(&str, Vec<f64>)> = vec![
        ("hilbert.ju_commutator_rel", vec![]),
        ("hilbert.x_factorization_rel", vec![]),
        ("hilbert.x_xdag_rel", vec![]),
        ("hilbert.deformed_commutator_rel", vec![]),
        ("hilbert.number_commutators_rel", vec![]),
        ("hilbert.q_boson_rel", vec![]),
        ("hilbert.time_reversal_u_rel", vec![]),
    ];
    for sector in Sector::all() {
        for tj in trunc.interior(sector, margin) {
            let ket = hilbert::basis_state(sector, HalfInt::from_twice(tj), trunc).expect("in window");
            let slots = trunc.interior(sector, 1);
            let p = |ops: &[Operator]| hilbert::apply_product(ops, &ket);
            let results: [Result<f64, hilbert::HilbertError>; 7] = [
                (|| {
                    let lhs = p(&[Operator::J, Operator::U])?.sub(&p(&[Operator::U, Operator::J])?)?;
                    Ok(vec_rel(&lhs, &p(&[Operator::U])?, slots.clone()))
                })(),
                (|| {
                    let damped = ket.map_diagonal(|j| Complex64::new((-j - 0.5).exp(), 0.0));
                    let rhs = hilbert::apply_operator(Operator::U, &damped)?;
                    Ok(vec_rel(&p(&[Operator::X])?, &rhs, slots.clone()))
                })(),
                (|| {
                    let rhs = p(&[Operator::Xdag, Operator::X])?.scale(Complex64::new(e2, 0.0));
                    Ok(vec_rel(&p(&[Operator::X, Operator::Xdag])?, &rhs, slots.clone()))
                })(),
                (|| {
                    let lhs = p(&[Operator::X, Operator::Xdag])?.sub(&p(&[Operator::Xdag, Operator::X])?)?;
                    let rhs = ket.map_diagonal(|j| Complex64::new(two_sinh * (-2.0 * j).exp(), 0.0));
                    Ok(vec_rel(&lhs, &rhs, slots.clone()))
                })(),
                (|| {
                    let nx = p(&[Operator::N, Operator::X])?.sub(&p(&[Operator::X, Operator::N])?)?;
                    let minus_x = p(&[Operator::X])?.scale(Complex64::new(-1.0, 0.0));
                    let nxd = p(&[Operator::N, Operator::Xdag])?.sub(&p(&[Operator::Xdag, Operator::N])?)?;
                    Ok(vec_rel(&nx, &minus_x, slots.clone()).max(vec_rel(&nxd, &p(&[Operator::Xdag])?, slots.clone())))
                })(),
                (|| {
                    // a = (1+q)^{−½} X, so a a† − q a† a = (XX† − q X†X)/(1+q).
                    let lhs = p(&[Operator::X, Operator::Xdag])?
                        .sub(&p(&[Operator::Xdag, Operator::X])?.scale(Complex64::new(q, 0.0)))?
                        .scale(Complex64::new(1.0 / (1.0 + q), 0.0));
                    let n = p(&[Operator::N])?;
                    let rhs = StateVector::from_fn(sector, trunc, |j| {
                        let nj = n.coeff((2.0 * j) as i32).re;
                        let kj = ket.coeff((2.0 * j) as i32);
                        kj * (-nj * q.ln()).exp()
                    })?;
                    Ok(vec_rel(&lhs, &rhs, slots.clone()))
                })(),
                (|| {
                    let t = hilbert::apply_time_reversal(&ket);
                    let tut = hilbert::apply_time_reversal(&hilbert::apply_operator(Operator::U, &t)?);
                    Ok(vec_rel(&tut, &p(&[Operator::Udag])?, slots.clone()))
                })(),
            ];
            for (slot, r) in per_check.iter_mut().zip(results) {
                slot.1.push(r.unwrap_or(f64::NAN));
            }
        }
    }
    for (name, cases) in per_check {
        s.check(name, tol, cases);
    }

    let mut unitary = Vec::new();
    for sector in Sector::all() {
        for _ in 0..s.cfg.n_random {
            let edge = trunc.edge(sector);
            let mut draw = || {
                let rng = &mut s.rng;
                StateVector::from_fn(sector, trunc, |j| {
                    if (2.0 * j) as i32 >= edge {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    }
                })
                .expect("finite")
            };
            let a = draw();
            let b = draw();
            let r = (|| {
                let ua = hilbert::apply_operator(Operator::U, &a)?;
                let ub = hilbert::apply_operator(Operator::U, &b)?;
                let want = hilbert::inner(&a, &b)?;
                Ok::<_, hilbert::HilbertError>(crel(hilbert::inner(&ua, &ub)?, want))
            })();
            unitary.push(r.unwrap_or(f64::NAN));
        }
    }
    s.check("hilbert.u_unitarity_rel", tol, unitary);
}

fn coherent_checks(s: &mut Suite) {
    let trunc = s.trunc;

    let mut residuals = Vec::new();
    let mut tail_max: f64 = 0.0;
    for sector in Sector::all() {
        for _ in 0..s.cfg.n_random {
            let p = s.random_point(2.0);
            let r = (|| {
                let state = coherent::coherent_state(p, sector, trunc)?;
                let x = hilbert::apply_operator(Operator::X, &state)?;
                let target = state.scale(p.xi());
                let slots = trunc.interior(sector, 1);
                let res: f64 = slots.map(|tj| (x.coeff(tj) - target.coeff(tj)).norm_sqr()).sum::<f64>().sqrt();
                Ok::<_, coherent::CoherentError>((res / state.norm_sq().sqrt(), state.tail_mass()))
            })();
            match r {
                Ok((res, tail)) => {
                    residuals.push(res);
                    tail_max = tail_max.max(tail);
                }
                Err(_) => residuals.push(f64::NAN),
            }
        }
    }
    let eigen_tol = (10.0 * tail_max).max(s.cfg.tol_eigen_floor);
    s.check("coherent.eigenstate_residual", eigen_tol, residuals);

    let mut lattice = Vec::new();
    for sector in Sector::all() {
        for tj in -4..=4 {
            if sector.admits(tj) {
                let l = 0.5 * tj as f64;
                lattice.push((coherent::expect_j(PhasePoint::new(l, 0.0).expect("finite"), sector) - l).abs());
            }
        }
    }
    s.check("coherent.j_lattice", s.cfg.tol_j_lattice, lattice);

    let grid = l_grid(0.0, 1.0, 101);
    let mut approx = Vec::new();
    let mut dev_max: f64 = 0.0;
    for sector in Sector::all() {
        for &l in &grid {
            let exact = coherent::expect_j(PhasePoint::new(l, 0.0).expect("finite"), sector);
            approx.push((exact - coherent::expect_j_approx(l, sector)).abs());
            dev_max = dev_max.max((exact - l).abs());
        }
    }
    s.check("coherent.j_approximation", s.cfg.tol_j_approx, approx);
    let (lo, hi) = (s.cfg.j_deviation_lo, s.cfg.j_deviation_hi);
    s.check("coherent.j_deviation_window", 0.5 * (hi - lo), [(dev_max - 0.5 * (lo + hi)).abs()]);
    let amp = coherent::j_correction_amplitude();
    s.check("coherent.j_deviation_bound", amp * (1.0 + 1e-3), [dev_max]);
    s.record("coherent.j_max_deviation", dev_max);
    s.record("coherent.j_correction_amplitude", amp);
    s.record("coherent.j_relative_small_l_limit", 4.0 * PI * PI * (-PI * PI).exp());

    let mut phase = Vec::new();
    let mut modulus = Vec::new();
    let mut series = Vec::new();
    for sector in Sector::all() {
        for &l in &l_grid(-1.0, 1.0, 41) {
            let phi = s.rng.random_range(0.0..2.0 * PI);
            let p = PhasePoint::new(l, phi).expect("finite");
            let u = coherent::expect_u(p, sector);
            let mut d = (u.arg() - p.phi()).rem_euclid(2.0 * PI);
            if d > PI {
                d -= 2.0 * PI;
            }
            phase.push(d.abs());
            modulus.push((u.norm() * 0.25f64.exp() - 1.0).abs());
            let r = (|| {
                let state = coherent::coherent_state(p, sector, trunc)?;
                let us = hilbert::apply_operator(Operator::U, &state)?;
                Ok::<_, coherent::CoherentError>(hilbert::inner(&state, &us)? / state.norm_sq())
            })();
            series.push(r.map(|v| (v - u).norm()).unwrap_or(f64::NAN));
        }
    }
    s.check("coherent.u_phase", s.cfg.tol_u_phase, phase);
    s.check("coherent.u_modulus", s.cfg.tol_u_modulus, modulus);
    s.check("coherent.u_closed_vs_series", s.cfg.tol_u_series, series);

    let mut tr = Vec::new();
    for sector in Sector::all() {
        for _ in 0..s.cfg.n_random {
            let p = s.random_point(2.0);
            let mirrored = PhasePoint::new(-p.l(), p.phi()).expect("finite");
            let r = (|| {
                let a = hilbert::apply_time_reversal(&coherent::coherent_state(p, sector, trunc)?);
                let b = coherent::coherent_state(mirrored, sector, trunc)?;
                Ok::<_, coherent::CoherentError>(vec_rel(&a, &b, trunc.slots(sector)))
            })();
            tr.push(r.unwrap_or(f64::NAN));
        }
    }
    s.check("coherent.time_reversal_map_rel", s.cfg.tol_coefficient_rel, tr);
}

fn uncertainty_checks(s: &mut Suite) {
    let trunc = s.trunc;
    let e2 = 2.0f64.exp();
    let mut eq = Vec::new();
    let mut closed = Vec::new();
    for k in 0..s.cfg.n_random {
        let sector = if k % 2 == 0 { Sector::Boson } else { Sector::Fermion };
        let p = s.random_point(2.0);
        let bound = 0.25 * (e2 - 1.0) * (-2.0 * p.l()).exp();
        let u = coherent::coherent_state(p, sector, trunc)
            .map_err(|e| e.to_string())
            .and_then(|st| coherent::uncertainty_of_state(&st).map_err(|e| e.to_string()));
        eq.push(u.map(|u| (u.product() - bound).abs().max((u.bound - bound).abs())).unwrap_or(f64::NAN));
        let c = coherent::uncertainty_qp(p, sector);
        closed.push((c.product() - bound).abs().max((c.bound - bound).abs()));
    }
    s.check("uncertainty.coherent_equality", s.cfg.tol_uncertainty, eq);
    s.check("uncertainty.closed_form_equality", s.cfg.tol_uncertainty, closed);

    let mut ratios = Vec::new();
    for sector in Sector::all() {
        for tj in (-10..=10).filter(|t| sector.admits(*t)) {
            let ket = hilbert::basis_state(sector, HalfInt::from_twice(tj), trunc).expect("in window");
            ratios.push(
                coherent::uncertainty_of_state(&ket)
                    .map(|u| u.bound / u.product())
                    .unwrap_or(f64::NAN),
            );
        }
    }
    s.check("uncertainty.basis_strict_ratio", s.cfg.basis_ratio_max, ratios);
}

fn exp_j_checks(s: &mut Suite) {
    let mut exact = Vec::new();
    for sector in Sector::all() {
        for &l in &l_grid(-2.0, 2.0, 41) {
            let p = PhasePoint::new(l, 0.0).expect("finite");
            exact.push(
                coherent::expect_exp_j(-2.0, p, sector)
                    .map(|v| rel((v.exact - (1.0 - 2.0 * l).exp()).abs(), (1.0 - 2.0 * l).exp()))
                    .unwrap_or(f64::NAN),
            );
        }
    }
    s.check("exp_j.s_minus_two_rel", s.cfg.tol_exp_j_exact_rel, exact);

    let mut general = Vec::new();
    for sector in Sector::all() {
        for &sv in &l_grid(-2.0, 2.0, 21) {
            for &l in &l_grid(-2.0, 2.0, 21) {
                let p = PhasePoint::new(l, 0.0).expect("finite");
                general.push(
                    coherent::expect_exp_j(sv, p, sector)
                        .map(|v| (v.exact / v.approx - 1.0).abs())
                        .unwrap_or(f64::NAN),
                );
            }
        }
    }
    s.check("exp_j.gaussian_approximation_rel", s.cfg.tol_exp_j_approx_rel, general);
}

fn dynamics_checks(s: &mut Suite) {
    let trunc = s.trunc;

    let mut linear = Vec::new();
    for sector in Sector::all() {
        for &(l, phi, omega, t) in &[(0.3, 0.2, 1.0, 0.7), (-1.2, 1.0, 2.5, 1.5), (1.7, 0.0, -0.4, 0.5), (0.0, 3.0, 0.5, 4.0)] {
            let r = (|| {
                let p0 = PhasePoint::new(l, phi)?;
                let evolved = coherent::evolve(&coherent::coherent_state(p0, sector, trunc)?, Hamiltonian::Linear { omega }, t);
                // Raw chart angle: no wrap, so no sign flip for half-integer j.
                let want = coherent::coherent_coefficients(l, phi + omega * t, sector, trunc)?;
                Ok::<_, coherent::CoherentError>(vec_rel(&evolved, &want, trunc.slots(sector)))
            })();
            linear.push(r.unwrap_or(f64::NAN));
        }
    }
    s.check("dynamics.linear_stability_rel", s.cfg.tol_dynamics_linear_rel, linear);

    let mut free = Vec::new();
    for sector in Sector::all() {
        for &t in &[0.5, 1.0, 2.0] {
            for &(l, phi) in &[(0.0, 0.0), (0.8, 2.0), (-1.0, 5.0)] {
                let r = (|| {
                    let p = PhasePoint::new(l, phi)?;
                    let state = coherent::coherent_state(p, sector, trunc)?;
                    let lhs = coherent::heisenberg_x(&state, t)?;
                    let rhs = coherent::coherent_coefficients(l, phi - t, sector, trunc)?
                        .scale(Complex64::new(-l, phi - 0.5 * t).exp());
                    let slots = trunc.interior(sector, 1);
                    let scale = state.max_abs();
                    Ok::<_, coherent::CoherentError>(lhs.max_diff_on(&rhs, slots) / scale)
                })();
                free.push(r.unwrap_or(f64::NAN));
            }
        }
    }
    s.check("dynamics.free_spreading_relation", s.cfg.tol_dynamics_free, free);

    let mut conserve = Vec::new();
    for sector in Sector::all() {
        for &t in &[0.3, 1.0, 5.0] {
            let r = (|| {
                let p = PhasePoint::new(0.6, 1.0)?;
                let state = coherent::coherent_state(p, sector, trunc)?;
                let moved = coherent::evolve(&state, Hamiltonian::FreeRotor, t);
                let mods = state
                    .iter()
                    .zip(moved.iter())
                    .map(|((_, a), (_, b))| (a.norm() - b.norm()).abs())
                    .fold(0.0, f64::max)
                    / state.max_abs();
                let jexp = |v: &StateVector| -> Result<f64, hilbert::HilbertError> {
                    Ok(hilbert::inner(v, &hilbert::apply_operator(Operator::J, v)?)?.re / v.norm_sq())
                };
                Ok::<_, coherent::CoherentError>(mods.max((jexp(&moved)? - jexp(&state)?).abs()))
            })();
            conserve.push(r.unwrap_or(f64::NAN));
        }
    }
    s.check("dynamics.free_conservation", s.cfg.tol_dynamics_linear_rel, conserve);

    let mut u = Vec::new();
    let mut x = Vec::new();
    let mut rel_u = Vec::new();
    let mut series = Vec::new();
    let origin = PhasePoint::origin();
    for sector in Sector::all() {
        let reference: Vec<_> = l_grid(-2.0, 2.0, 17)
            .iter()
            .map(|&t| coherent::heisenberg_closed(origin, t, sector).u_t)
            .collect();
        for &l in &l_grid(-1.0, 1.0, 17) {
            for (k, &t) in l_grid(-2.0, 2.0, 17).iter().enumerate() {
                let p = PhasePoint::new(l, 0.7).expect("finite");
                let h = coherent::heisenberg_closed(p, t, sector);
                u.push((h.u_t - h.u_t_approx).norm());
                x.push((h.x_t - h.x_t_approx).norm());
                let ratio = h.u_t / reference[k];
                rel_u.push((ratio - Complex64::from_polar(1.0, p.phi() + t * l)).norm());
                series.push(
                    coherent::heisenberg_expectations(p, t, sector)
                        .map(|e| (e.u_t - h.u_t).norm().max((e.x_t - h.x_t).norm()))
                        .unwrap_or(f64::NAN),
                );
            }
        }
    }
    s.check("dynamics.heisenberg_closed_vs_series", s.cfg.tol_heisenberg_series, series);
    s.check("dynamics.heisenberg_u_approximation", s.cfg.tol_heisenberg, u);
    s.check("dynamics.heisenberg_x_approximation", s.cfg.tol_heisenberg, x);
    let rel_max = rel_u.iter().copied().fold(0.0, f64::max);
    s.record("dynamics.heisenberg_relative_u_max_deviation", rel_max);
}

fn distribution_checks(s: &mut Suite) {
    let mut gauss = Vec::new();
    let mut sums = Vec::new();
    for &l in &l_grid(0.0, 1.0, 21) {
        let p = PhasePoint::new(l, 0.0).expect("finite");
        match coherent::energy_distribution(p, Sector::Boson, s.trunc, SectorPolicy::BosonOnly) {
            Ok(levels) => {
                gauss.push(levels.iter().map(|e| (e.prob - e.gaussian).abs()).fold(0.0, f64::max));
                sums.push((levels.iter().map(|e| e.prob).sum::<f64>() - 1.0).abs());
            }
            Err(_) => {
                gauss.push(f64::NAN);
                sums.push(f64::NAN);
            }
        }
    }
    s.check("distribution.gaussian_profile", s.cfg.tol_distribution, gauss);
    s.check("distribution.normalization", s.cfg.tol_distribution_sum, sums);
}

fn sample_function(sector: Sector, trunc: Truncation, rng: &mut ChaCha8Rng) -> BargmannFunction {
    let st = StateVector::from_fn(sector, trunc, |j| {
        if j.abs() <= 3.0 {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .expect("finite");
    bargmann::to_bargmann(&st)
}

fn bargmann_checks(s: &mut Suite) {
    let trunc = s.trunc;
    let tol = s.cfg.tol_bargmann_rel;

    let mut faithful = Vec::new();
    for sector in Sector::all() {
        let f = sample_function(sector, trunc, &mut s.rng);
        let st = bargmann::from_bargmann(&f);
        for (op, bop) in [
            (Operator::J, BargmannOperator::J),
            (Operator::U, BargmannOperator::U),
            (Operator::Udag, BargmannOperator::Udag),
            (Operator::X, BargmannOperator::X),
            (Operator::Xdag, BargmannOperator::Xdag),
        ] {
            let r = (|| {
                let a = hilbert::apply_operator(op, &st)?;
                let b = bargmann::from_bargmann(&bargmann::apply_op_bargmann(bop, &f)?);
                Ok::<_, hilbert::HilbertError>(vec_rel(&b, &a, trunc.interior(sector, 1)))
            })();
            faithful.push(r.unwrap_or(f64::NAN));
        }
    }
    s.check("bargmann.faithfulness_rel", tol, faithful);

    let mut pointwise = Vec::new();
    for sector in Sector::all() {
        let f = sample_function(sector, trunc, &mut s.rng);
        for _ in 0..s.cfg.n_random {
            let w = Complex64::new(s.rng.random_range(-1.0..1.0), s.rng.random_range(0.0..2.0 * PI));
            for kind in BargmannOperator::ALL {
                let r = bargmann::apply_op_bargmann(kind, &f)
                    .map(|g| rel((bargmann::functional_action(kind, &f, w) - g.eval_log(w)).norm(), g.eval_log(w).norm().max(1.0)));
                pointwise.push(r.unwrap_or(f64::NAN));
            }
        }
    }
    s.check("bargmann.functional_actions_rel", tol, pointwise);

    let mut sym = Vec::new();
    for sector in Sector::all() {
        for _ in 0..s.cfg.n_random {
            let a = s.random_point(2.0);
            let b = s.random_point(2.0);
            let ab = bargmann::kernel(a, b.l(), b.phi(), sector);
            let ba = bargmann::kernel(b, a.l(), a.phi(), sector);
            sym.push(crel(ab, ba.conj()));
        }
    }
    s.check("bargmann.kernel_hermiticity_rel", tol, sym);
}

fn quadrature_checks(s: &mut Suite) {
    let trunc = s.trunc;
    let q = s.quad.clone();

    let mut complete = Vec::new();
    for sector in Sector::all() {
        let basis: Vec<(i32, BargmannFunction)> = (-6..=6)
            .filter(|t| sector.admits(*t))
            .map(|t| (t, BargmannFunction::basis(sector, HalfInt::from_twice(t), trunc).expect("in window")))
            .collect();
        for (a, fa) in &basis {
            for (b, fb) in &basis {
                let want = if a == b { 1.0 } else { 0.0 };
                complete.push(
                    bargmann::inner_quadrature(fa, fb, &q)
                        .map(|v| (v - want).norm())
                        .unwrap_or(f64::NAN),
                );
            }
        }
    }
    s.check("quadrature.completeness", s.cfg.tol_quadrature, complete);

    let mut repro = Vec::new();
    for sector in Sector::all() {
        let f = sample_function(sector, trunc, &mut s.rng);
        for _ in 0..5 {
            let eta = s.random_point(1.0);
            repro.push((bargmann::reproducing_apply(&f, eta, sector, &q) - bargmann::eval(&f, eta)).norm());
        }
    }
    s.check("quadrature.reproducing_property", s.cfg.tol_reproducing, repro);

    let mut ident = Vec::new();
    for sector in Sector::all() {
        for _ in 0..s.cfg.n_kernel_pairs {
            let p1 = s.random_point(1.0);
            let p2 = s.random_point(1.0);
            ident.push(bargmann::kernel_identity_check(p1, p2, sector, &q).abs_error());
        }
    }
    s.check("quadrature.kernel_identity", s.cfg.tol_kernel, ident);

    let fb = sample_function(Sector::Boson, trunc, &mut s.rng);
    let ff = sample_function(Sector::Fermion, trunc, &mut s.rng);
    let etas: Vec<PhasePoint> = (0..5).map(|_| s.random_point(1.0)).collect();
    let mut idem = Vec::new();
    let mut cross = Vec::new();
    let mut direct = Vec::new();
    let mut projected = Vec::new();
    for sector in Sector::all() {
        let proj = NodeProjector::new(sector, &q);
        let mixed = proj.sample(|l, phi| fb.eval_chart(l, phi) + ff.eval_chart(l, phi));
        let once = proj.apply(&mixed);
        let (own, other) = match sector {
            Sector::Boson => (&fb, &ff),
            Sector::Fermion => (&ff, &fb),
        };
        let other_samples = proj.sample(|l, phi| other.eval_chart(l, phi));
        let own_at: Vec<Complex64> = etas.iter().map(|&e| proj.evaluate_at(e, &mixed)).collect();
        for (k, &eta) in etas.iter().enumerate() {
            idem.push((proj.evaluate_at(eta, &once) - own_at[k]).norm());
            cross.push(proj.evaluate_at(eta, &other_samples).norm());
            direct.push((own_at[k] - bargmann::eval(own, eta)).norm());
        }
        projected.push(own_at);
    }
    for (k, &eta) in etas.iter().enumerate() {
        let total = projected[0][k] + projected[1][k];
        direct.push((total - bargmann::eval(&fb, eta) - bargmann::eval(&ff, eta)).norm());
    }
    s.check("quadrature.projector_idempotency", s.cfg.tol_projector, idem);
    s.check("quadrature.cross_sector_annihilation", s.cfg.tol_projector, cross);
    s.check("quadrature.direct_integral_decomposition", s.cfg.tol_projector, direct);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip_and_defaults() {
        let cfg = VerifyConfig::from_json("{}").unwrap();
        assert_eq!(cfg, VerifyConfig::default());
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(VerifyConfig::from_json(&text).unwrap(), cfg);
        let partial = VerifyConfig::from_json(r#"{"n_l": 12, "seed": 3}"#).unwrap();
        assert_eq!((partial.n_l, partial.seed, partial.n_phi), (12, 3, 64));
    }

    #[test]
    fn config_rejects_bad_input() {
        assert!(VerifyConfig::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(VerifyConfig::from_json(r#"{"n_l": 1}"#).is_err());
        assert!(VerifyConfig::from_json(r#"{"n_phi": 7}"#).is_err());
        assert!(VerifyConfig::from_json(r#"{"two_jmax": 10}"#).is_err());
        assert!(VerifyConfig::from_json(r#"{"tol_kernel": -1}"#).is_err());
        assert!(VerifyConfig::from_json("[").is_err());
    }

    #[test]
    fn worst_keeps_nan() {
        let mut w = Worst::default();
        for e in [1.0, f64::NAN, 3.0] {
            w.push(e);
        }
        assert!(w.value.is_nan());
        assert_eq!(w.n, 3);
    }
}
