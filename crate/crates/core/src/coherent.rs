//! Coherent states `|l, φ⟩` on the circle and their expectation values.
//!
//! A coherent state is the eigenvector of `X = U e^{−Ĵ−½}` with eigenvalue
//! `ξ = e^{−l+iφ}`; with `c₀ ≡ 1` its coefficients are
//! `c_j = e^{lj − ijφ − j²/2}`. Every quantity here has a closed form in
//! theta functions at `τ = i/π` (or `iπ` after the modular inversion) and
//! can also be read off a truncated state vector. Approximate formulas are
//! exposed next to the exact ones so their deviation can be measured.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{self, HalfInt, HilbertError, Operator, Sector, StateVector, Truncation};
use crate::theta::{self, theta_imag, SeriesControl, ThetaArg, ThetaError, ThetaKind};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tail required of coherent-state windows.
pub const WINDOW_TAIL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoherentError {
    #[error("phase-space point must be finite (l = {l}, phi = {phi})")]
    NonFinite { l: f64, phi: f64 },
    #[error("window 2*j_max = {have} too small, need at least {need}")]
    Truncation { need: i32, have: i32 },
    #[error("e^(s j) overflows inside the window (s = {s})")]
    Range { s: f64 },
    #[error("reference expectation value is numerically zero")]
    NearZero,
    #[error("the energy distribution is defined for bosons; pass SectorPolicy::AllowFermion to extend it")]
    FermionDistribution,
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// Point `(l, φ)` of the cylinder, `φ` kept in `[0, 2π)`.
///
/// All powers `ξ^{−j}` are formed from this chart as `e^{lj − ijφ}`, which
/// fixes the sign of half-integer powers for fermions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    l: f64,
    phi: f64,
}

impl PhasePoint {
    pub fn new(l: f64, phi: f64) -> Result<Self, CoherentError> {
        if !l.is_finite() || !phi.is_finite() {
            return Err(CoherentError::NonFinite { l, phi });
        }
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Ok(Self { l, phi })
    }

    pub fn origin() -> Self {
        Self { l: 0.0, phi: 0.0 }
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `ξ = e^{−l + iφ}`.
    pub fn xi(&self) -> Complex64 {
        self.log_xi().exp()
    }

    /// `ln ξ = −l + iφ` in this chart.
    pub fn log_xi(&self) -> Complex64 {
        Complex64::new(-self.l, self.phi)
    }
}

/// Smallest window whose coherent states at `|l| <= l_abs` have relative tail
/// below `eps`: `j_max ≥ |l| + √(2 ln(1/ε)) + 2`.
pub fn window_for(l_abs: f64, eps: f64) -> Truncation {
    let jmax = l_abs.abs() + (2.0 * (1.0 / eps).ln()).sqrt() + 2.0;
    let two_jmax = (2.0 * jmax).ceil() as i32 + 1;
    Truncation::new(two_jmax.max(2)).expect("window at least 2")
}

fn theta_kind(sector: Sector) -> ThetaKind {
    match sector {
        Sector::Boson => ThetaKind::Three,
        Sector::Fermion => ThetaKind::Two,
    }
}

/// `|l, φ⟩ = Σ_j e^{lj − ijφ − j²/2} |j⟩` on the window.
pub fn coherent_state(p: PhasePoint, sector: Sector, trunc: Truncation) -> Result<StateVector, CoherentError> {
    let need = window_for(p.l, WINDOW_TAIL);
    let need_edge = need.two_jmax() - 1;
    if trunc.edge(sector) < need_edge {
        return Err(CoherentError::Truncation {
            need: need_edge,
            have: trunc.two_jmax(),
        });
    }
    Ok(coherent_coefficients(p.l, p.phi, sector, trunc)?)
}

/// Coefficients for an arbitrary chart value of `φ` (no normalization).
pub(crate) fn coherent_coefficients(
    l: f64,
    phi: f64,
    sector: Sector,
    trunc: Truncation,
) -> Result<StateVector, HilbertError> {
    StateVector::from_fn(sector, trunc, |j| {
        Complex64::new(l * j - 0.5 * j * j, -j * phi).exp()
    })
}

/// `θ((i/2π) w | i/π)` for `w = ln(ξ₁* ξ₂)`: the overlap of two coherent
/// states with the logarithm taken in the chart.
pub(crate) fn overlap_from_log(log_product: Complex64, sector: Sector) -> Complex64 {
    let v = I * log_product / (2.0 * PI);
    theta_imag(theta_kind(sector), v, 1.0 / PI)
}

/// `ln(ξ₁* ξ₂) = −(l₁ + l₂) + i(φ₂ − φ₁)`.
pub fn log_overlap_argument(p1: PhasePoint, p2: PhasePoint) -> Complex64 {
    Complex64::new(-(p1.l + p2.l), p2.phi - p1.phi)
}

/// `⟨ξ₁|ξ₂⟩` as θ₃ (bosons) or θ₂ (fermions) at `τ = i/π`.
pub fn overlap_closed(p1: PhasePoint, p2: PhasePoint, sector: Sector) -> Complex64 {
    overlap_from_log(log_overlap_argument(p1, p2), sector)
}

/// `⟨ξ|ξ⟩ = θ_{3|2}(il/π | i/π)`.
pub fn norm_sq(p: PhasePoint, sector: Sector) -> f64 {
    theta_imag(theta_kind(sector), Complex64::new(0.0, p.l / PI), 1.0 / PI).re
}

/// `⟨Ĵ⟩ = l + ½ (d/dl) ln θ_{3|4}(l | iπ)`.
pub fn expect_j(p: PhasePoint, sector: Sector) -> f64 {
    let kind = match sector {
        Sector::Boson => ThetaKind::Three,
        Sector::Fermion => ThetaKind::Four,
    };
    let arg = ThetaArg::imaginary(Complex64::new(p.l, 0.0), PI).expect("positive modulus");
    // θ₃ and θ₄ are strictly positive on the real axis at τ = iπ.
    let dlog = theta::theta_log_derivative(kind, arg, SeriesControl::default())
        .expect("theta positive for real argument");
    p.l + 0.5 * dlog.re
}

/// Amplitude `2π e^{−π²}` of the leading correction to `⟨Ĵ⟩ ≈ l`.
pub fn j_correction_amplitude() -> f64 {
    2.0 * PI * (-PI * PI).exp()
}

/// `l ∓ 2π e^{−π²} sin 2πl` (minus for bosons, plus for fermions).
pub fn expect_j_approx(l: f64, sector: Sector) -> f64 {
    let sign = match sector {
        Sector::Boson => -1.0,
        Sector::Fermion => 1.0,
    };
    l + sign * j_correction_amplitude() * (2.0 * PI * l).sin()
}

/// `⟨U⟩ = e^{−¼} e^{iφ} θ₂/θ₃` (bosons) or `θ₃/θ₂` (fermions), all at
/// `(il/π | i/π)`.
pub fn expect_u(p: PhasePoint, sector: Sector) -> Complex64 {
    let v = Complex64::new(0.0, p.l / PI);
    let t2 = theta_imag(ThetaKind::Two, v, 1.0 / PI).re;
    let t3 = theta_imag(ThetaKind::Three, v, 1.0 / PI).re;
    let ratio = match sector {
        Sector::Boson => t2 / t3,
        Sector::Fermion => t3 / t2,
    };
    Complex64::from_polar((-0.25f64).exp() * ratio, p.phi)
}

/// `e^{−¼} e^{iφ}`.
pub fn expect_u_approx(p: PhasePoint) -> Complex64 {
    Complex64::from_polar((-0.25f64).exp(), p.phi)
}

const NEAR_ZERO: f64 = 1e-300;

/// `⟨U⟩_p / ⟨U⟩_ref`.
pub fn relative_expect_u(p: PhasePoint, reference: PhasePoint, sector: Sector) -> Result<Complex64, CoherentError> {
    let den = expect_u(reference, sector);
    if den.norm() < NEAR_ZERO {
        return Err(CoherentError::NearZero);
    }
    Ok(expect_u(p, sector) / den)
}

/// Exact and approximate values of `⟨e^{sĴ}⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpJ {
    pub exact: f64,
    pub approx: f64,
}

/// `e^{s²/4 + sl}`.
pub fn approx_exp_j(s: f64, l: f64) -> f64 {
    (0.25 * s * s + s * l).exp()
}

/// `⟨e^{sĴ}⟩ = Σ e^{sj + 2lj − j²} / Σ e^{2lj − j²}`, evaluated as the ratio
/// `θ(i(l + s/2)/π | i/π) / θ(il/π | i/π)`.
pub fn expect_exp_j(s: f64, p: PhasePoint, sector: Sector) -> Result<ExpJ, CoherentError> {
    if !s.is_finite() {
        return Err(CoherentError::Range { s });
    }
    let kind = theta_kind(sector);
    let num = theta_imag(kind, Complex64::new(0.0, (p.l + 0.5 * s) / PI), 1.0 / PI).re;
    let den = theta_imag(kind, Complex64::new(0.0, p.l / PI), 1.0 / PI).re;
    let exact = num / den;
    if !exact.is_finite() || !num.is_finite() {
        return Err(CoherentError::Range { s });
    }
    Ok(ExpJ {
        exact,
        approx: approx_exp_j(s, p.l),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Hamiltonian {
    /// `Ĥ = Ĵ²/2`
    FreeRotor,
    /// `Ĥ = ωĴ`
    Linear { omega: f64 },
}

/// `e^{−iĤt}|s⟩`; both Hamiltonians are diagonal so only phases change.
pub fn evolve(state: &StateVector, hamiltonian: Hamiltonian, t: f64) -> StateVector {
    match hamiltonian {
        Hamiltonian::FreeRotor => state.map_diagonal(|j| Complex64::from_polar(1.0, -0.5 * t * j * j)),
        Hamiltonian::Linear { omega } => state.map_diagonal(|j| Complex64::from_polar(1.0, -t * omega * j)),
    }
}

/// `X(t) = e^{iĤt} X e^{−iĤt}` under the free rotor.
pub fn heisenberg_x(state: &StateVector, t: f64) -> Result<StateVector, HilbertError> {
    let forward = evolve(state, Hamiltonian::FreeRotor, t);
    let moved = hilbert::apply_operator(Operator::X, &forward)?;
    Ok(evolve(&moved, Hamiltonian::FreeRotor, -t))
}

/// Free-rotor Heisenberg-picture expectations in a normalized coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeisenbergExpectations {
    /// `⟨U(t)⟩` with `U(t) = U e^{it(Ĵ+½)}`.
    pub u_t: Complex64,
    /// `⟨X(t)⟩` with `X(t) = e^{it(Ĵ−½)} X`.
    pub x_t: Complex64,
    /// `e^{−t²/4} e^{−¼} e^{i(φ + tl)}`
    pub u_t_approx: Complex64,
    /// `e^{−t²/4} e^{−l + i(φ + t(l − ½))}`
    pub x_t_approx: Complex64,
}

fn heisenberg_approx(p: PhasePoint, t: f64) -> (Complex64, Complex64) {
    let damp = -0.25 * t * t;
    let u = Complex64::from_polar((damp - 0.25).exp(), p.phi + t * p.l);
    let x = Complex64::from_polar((damp - p.l).exp(), p.phi + t * (p.l - 0.5));
    (u, x)
}

/// Series values of `⟨U(t)⟩` and `⟨X(t)⟩` from a truncated coherent state.
pub fn heisenberg_expectations(p: PhasePoint, t: f64, sector: Sector) -> Result<HeisenbergExpectations, CoherentError> {
    let trunc = window_for(p.l, 1e-18);
    let state = coherent_state(p, sector, trunc)?;
    let norm = state.norm_sq();
    let half = Complex64::from_polar(1.0, 0.5 * t);
    let rotated = state.map_diagonal(|j| Complex64::from_polar(1.0, t * j));
    let u_state = hilbert::apply_operator(Operator::U, &rotated)?.scale(half);
    let x_state = hilbert::apply_operator(Operator::X, &state)?;
    let x_state = x_state.map_diagonal(|j| Complex64::from_polar(1.0, t * (j - 0.5)));
    let (u_t_approx, x_t_approx) = heisenberg_approx(p, t);
    Ok(HeisenbergExpectations {
        u_t: hilbert::inner(&state, &u_state)? / norm,
        x_t: hilbert::inner(&state, &x_state)? / norm,
        u_t_approx,
        x_t_approx,
    })
}

/// Theta closed forms of the same expectations:
/// `⟨U(t)⟩ = e^{iφ−¼} θ_{2|3}(iL/π) / θ_{3|2}(il/π)` and
/// `⟨X(t)⟩ = ξ e^{−it/2} θ_{3|2}(iL/π) / θ_{3|2}(il/π)`, with `L = l + it/2`.
pub fn heisenberg_closed(p: PhasePoint, t: f64, sector: Sector) -> HeisenbergExpectations {
    let own = theta_kind(sector);
    let shifted = match sector {
        Sector::Boson => ThetaKind::Two,
        Sector::Fermion => ThetaKind::Three,
    };
    let v_l = Complex64::new(0.0, p.l / PI);
    let v_big = I * Complex64::new(p.l, 0.5 * t) / PI;
    let den = theta_imag(own, v_l, 1.0 / PI);
    let u_t = Complex64::from_polar((-0.25f64).exp(), p.phi) * theta_imag(shifted, v_big, 1.0 / PI) / den;
    let x_t = p.xi() * Complex64::from_polar(1.0, -0.5 * t) * theta_imag(own, v_big, 1.0 / PI) / den;
    let (u_t_approx, x_t_approx) = heisenberg_approx(p, t);
    HeisenbergExpectations {
        u_t,
        x_t,
        u_t_approx,
        x_t_approx,
    }
}

/// `⟨U(t)⟩_p / ⟨U(t)⟩_ref`, expected to be close to `e^{i(φ + tl)}` for
/// `ref = (0, 0)`.
pub fn relative_heisenberg_u(
    p: PhasePoint,
    reference: PhasePoint,
    t: f64,
    sector: Sector,
) -> Result<Complex64, CoherentError> {
    let den = heisenberg_expectations(reference, t, sector)?.u_t;
    if den.norm() < NEAR_ZERO {
        return Err(CoherentError::NearZero);
    }
    Ok(heisenberg_expectations(p, t, sector)?.u_t / den)
}

/// Spreads of `Q = (X + X†)/2` and `P = (X − X†)/2i` and the Heisenberg bound
/// `½|⟨[Q, P]⟩|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Uncertainty {
    pub dq: f64,
    pub dp: f64,
    pub bound: f64,
}

impl Uncertainty {
    pub fn product(&self) -> f64 {
        self.dq * self.dp
    }
}

/// Closed forms for a normalized coherent state:
/// `⟨Q⟩ = e^{−l}cos φ`, `⟨P⟩ = e^{−l} sin φ`,
/// `⟨Q²⟩ = ¼e^{−2l}(2cos 2φ + e² + 1)`, `⟨P²⟩ = −¼e^{−2l}(2cos 2φ − e² − 1)`,
/// bound `¼(e² − 1)e^{−2l}`.
pub fn uncertainty_qp(p: PhasePoint, _sector: Sector) -> Uncertainty {
    let e2 = (2.0f64).exp();
    let w = (-2.0 * p.l).exp();
    let mean_q = (-p.l).exp() * p.phi.cos();
    let mean_p = (-p.l).exp() * p.phi.sin();
    let q2 = 0.25 * w * (2.0 * (2.0 * p.phi).cos() + e2 + 1.0);
    let p2 = -0.25 * w * (2.0 * (2.0 * p.phi).cos() - (e2 + 1.0));
    Uncertainty {
        dq: (q2 - mean_q * mean_q).max(0.0).sqrt(),
        dp: (p2 - mean_p * mean_p).max(0.0).sqrt(),
        bound: 0.25 * (e2 - 1.0) * w,
    }
}

/// The same spreads from matrix elements on an arbitrary truncated state.
pub fn uncertainty_of_state(s: &StateVector) -> Result<Uncertainty, HilbertError> {
    let norm = s.norm_sq();
    let x = hilbert::apply_operator(Operator::X, s)?;
    let xd = hilbert::apply_operator(Operator::Xdag, s)?;
    let q = x.add(&xd)?.scale(Complex64::new(0.5, 0.0));
    let pp = x.sub(&xd)?.scale(Complex64::new(0.0, -0.5));
    let mean = |v: &StateVector| -> Result<f64, HilbertError> { Ok(hilbert::inner(s, v)?.re / norm) };
    let mq = mean(&q)?;
    let mp = mean(&pp)?;
    let q2 = hilbert::inner(&q, &q)?.re / norm;
    let p2 = hilbert::inner(&pp, &pp)?.re / norm;

    let apply_q = |v: &StateVector| -> Result<StateVector, HilbertError> {
        let a = hilbert::apply_operator(Operator::X, v)?;
        let b = hilbert::apply_operator(Operator::Xdag, v)?;
        Ok(a.add(&b)?.scale(Complex64::new(0.5, 0.0)))
    };
    let apply_p = |v: &StateVector| -> Result<StateVector, HilbertError> {
        let a = hilbert::apply_operator(Operator::X, v)?;
        let b = hilbert::apply_operator(Operator::Xdag, v)?;
        Ok(a.sub(&b)?.scale(Complex64::new(0.0, -0.5)))
    };
    let commutator = apply_q(&pp)?.sub(&apply_p(&q)?)?;
    let bound = 0.5 * hilbert::inner(s, &commutator)?.norm() / norm;
    Ok(Uncertainty {
        dq: (q2 - mq * mq).max(0.0).sqrt(),
        dp: (p2 - mp * mp).max(0.0).sqrt(),
        bound,
    })
}

/// Which sectors [`energy_distribution`] accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SectorPolicy {
    #[default]
    BosonOnly,
    AllowFermion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub j: f64,
    /// `E = j²/2`
    pub energy: f64,
    /// `e^{2lj − j²} / ⟨ξ|ξ⟩`
    pub prob: f64,
    /// `π^{−½} e^{−(j−l)²}`
    pub gaussian: f64,
}

/// Probabilities of the free-rotor levels `|j⟩` in a normalized coherent
/// state, listed over the window.
pub fn energy_distribution(
    p: PhasePoint,
    sector: Sector,
    trunc: Truncation,
    policy: SectorPolicy,
) -> Result<Vec<EnergyLevel>, CoherentError> {
    if sector == Sector::Fermion && policy != SectorPolicy::AllowFermion {
        return Err(CoherentError::FermionDistribution);
    }
    let norm = norm_sq(p, sector);
    let inv_sqrt_pi = 1.0 / PI.sqrt();
    Ok(trunc
        .slots(sector)
        .map(|tj| {
            let j = HalfInt::from_twice(tj).value();
            EnergyLevel {
                j,
                energy: 0.5 * j * j,
                prob: (2.0 * p.l * j - j * j).exp() / norm,
                gaussian: inv_sqrt_pi * (-(j - p.l) * (j - p.l)).exp(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::basis_state;

    fn pt(l: f64, phi: f64) -> PhasePoint {
        PhasePoint::new(l, phi).unwrap()
    }

    fn lattice(sector: Sector) -> impl Iterator<Item = f64> {
        (-80..=80).filter(move |tj| sector.admits(*tj)).map(|tj| 0.5 * tj as f64)
    }

    // Direct lattice sums, independent of the theta module.
    fn series_mean(l: f64, sector: Sector, f: impl Fn(f64) -> f64) -> f64 {
        let (num, den) = lattice(sector).fold((0.0, 0.0), |(n, d), j| {
            let w = (2.0 * l * j - j * j).exp();
            (n + f(j) * w, d + w)
        });
        num / den
    }

    #[test]
    fn phase_point_normalizes() {
        let p = pt(0.5, -PI / 2.0);
        assert!((p.phi() - 1.5 * PI).abs() < 1e-15);
        assert!(pt(0.0, 2.0 * PI).phi() < 1e-15);
        assert!(PhasePoint::new(f64::NAN, 0.0).is_err());
        let xi = pt(1.0, 0.3).xi();
        assert!((xi.norm() - (-1f64).exp()).abs() < 1e-16 && (xi.arg() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn coefficients_at_origin() {
        let s = coherent_state(PhasePoint::origin(), Sector::Boson, Truncation::new(40).unwrap()).unwrap();
        assert_eq!(s.coeff(0), Complex64::new(1.0, 0.0));
        assert!((s.coeff(2).re - 0.6065307).abs() < 1e-7);
        assert!((s.coeff(-2).re - (-0.5f64).exp()).abs() < 1e-16);
        assert!((s.coeff(4).re - (-2f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn window_too_small() {
        let err = coherent_state(pt(3.0, 0.0), Sector::Boson, Truncation::new(10).unwrap());
        assert!(matches!(err, Err(CoherentError::Truncation { .. })));
    }

    #[test]
    fn x_eigenvector_on_interior() {
        let t = Truncation::new(40).unwrap();
        for sector in Sector::all() {
            let p = pt(0.7, 2.1);
            let s = coherent_state(p, sector, t).unwrap();
            let xs = hilbert::apply_operator(Operator::X, &s).unwrap();
            let want = s.scale(p.xi());
            let diff = xs.max_diff_on(&want, t.interior(sector, 1));
            assert!(diff < 1e-14 * s.max_abs(), "{sector}: {diff}");
        }
    }

    #[test]
    fn exp_j_moves_along_l() {
        let t = Truncation::new(40).unwrap();
        let eta = 2f64.ln();
        let p = pt(0.2, 1.0);
        let s = coherent_state(p, Sector::Boson, t).unwrap();
        let moved = s.map_diagonal(|j| Complex64::new((eta * j).exp(), 0.0));
        let target = coherent_state(pt(0.2 + eta, 1.0), Sector::Boson, t).unwrap();
        let diff = moved.max_diff_on(&target, t.slots(Sector::Boson));
        assert!(diff < 1e-13 * target.max_abs());
    }

    #[test]
    fn overlap_examples() {
        let b = Sector::Boson;
        assert!((overlap_closed(PhasePoint::origin(), PhasePoint::origin(), b).re - 1.7726372).abs() < 1e-6);
        let alt: f64 = (-10i32..=10).map(|j| (-1f64).powi(j) * (-(j * j) as f64).exp()).sum();
        assert!((alt - 0.3006258).abs() < 1e-7);
        let v = overlap_closed(PhasePoint::origin(), pt(0.0, PI), b);
        assert!((v.re - alt).abs() < 1e-14 && v.im.abs() < 1e-14);
    }

    #[test]
    fn overlap_matches_series_for_chart_points() {
        let t = Truncation::new(40).unwrap();
        for sector in Sector::all() {
            for &(a, b) in &[((0.3, 0.2), (-1.1, 5.9)), ((1.9, 3.0), (0.4, 0.1)), ((-2.0, 6.2), (-1.5, 0.05))] {
                let p1 = pt(a.0, a.1);
                let p2 = pt(b.0, b.1);
                let series = hilbert::inner(
                    &coherent_state(p1, sector, t).unwrap(),
                    &coherent_state(p2, sector, t).unwrap(),
                )
                .unwrap();
                assert!((series - overlap_closed(p1, p2, sector)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn norms() {
        assert!((norm_sq(PhasePoint::origin(), Sector::Boson) - 1.7726372).abs() < 1e-6);
        assert!((norm_sq(PhasePoint::origin(), Sector::Fermion) - 1.7722706).abs() < 1e-6);
        let a = norm_sq(pt(0.4, 0.0), Sector::Fermion);
        let b = norm_sq(pt(0.4, 4.0), Sector::Fermion);
        assert_eq!(a, b);
    }

    #[test]
    fn expect_j_examples() {
        assert!((expect_j(pt(1.0, 0.0), Sector::Boson) - 1.0).abs() < 1e-12);
        assert!(expect_j(PhasePoint::origin(), Sector::Fermion).abs() < 1e-15);
        let oracle = series_mean(0.25, Sector::Boson, |j| j);
        assert!((oracle - 0.2496750).abs() < 1e-6);
        assert!((expect_j(pt(0.25, 0.0), Sector::Boson) - oracle).abs() < 1e-12);
    }

    #[test]
    fn expect_j_matches_series() {
        for sector in Sector::all() {
            for k in 0..=40 {
                let l = -2.0 + 0.1 * k as f64;
                let oracle = series_mean(l, sector, |j| j);
                assert!((expect_j(pt(l, 0.0), sector) - oracle).abs() < 1e-12, "{sector} l={l}");
            }
        }
    }

    #[test]
    fn expect_u_examples() {
        let u = expect_u(PhasePoint::origin(), Sector::Boson);
        let t2: f64 = (1..=10).map(|n| 2.0 * (-((n as f64 - 0.5).powi(2))).exp()).sum();
        let t3: f64 = (-10i32..=10).map(|n| (-(n * n) as f64).exp()).sum();
        assert!((u.re - (-0.25f64).exp() * t2 / t3).abs() < 1e-14);
        assert!((u.re - 0.7786397).abs() < 1e-6);
        for sector in Sector::all() {
            for &(l, phi) in &[(-1.0, 0.5), (0.3, 2.5), (0.9, 6.0)] {
                let u = expect_u(pt(l, phi), sector);
                let d = (u.arg() - phi + PI).rem_euclid(2.0 * PI) - PI;
                assert!(d.abs() < 1e-14);
                let m = u.norm() * 0.25f64.exp();
                assert!((0.9995..=1.0005).contains(&m));
            }
        }
    }

    #[test]
    fn expect_u_matches_series() {
        let t = Truncation::new(40).unwrap();
        for sector in Sector::all() {
            let p = pt(-0.6, 4.4);
            let s = coherent_state(p, sector, t).unwrap();
            let us = hilbert::apply_operator(Operator::U, &s).unwrap();
            let series = hilbert::inner(&s, &us).unwrap() / s.norm_sq();
            assert!((series - expect_u(p, sector)).norm() < 1e-12);
        }
    }

    #[test]
    fn relative_u() {
        let o = PhasePoint::origin();
        let r = relative_expect_u(pt(0.0, 1.2), o, Sector::Boson).unwrap();
        assert!((r - Complex64::from_polar(1.0, 1.2)).norm() < 1e-15);
        let r = relative_expect_u(pt(0.5, 1.0), o, Sector::Boson).unwrap();
        assert!((r.norm() - 1.0).abs() < 5e-4);
        let p = pt(0.4, 0.7);
        assert!((relative_expect_u(p, p, Sector::Fermion).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn exp_j_cases() {
        for sector in Sector::all() {
            for &l in &[-1.3, 0.0, 0.45, 2.0] {
                let v = expect_exp_j(-2.0, pt(l, 0.0), sector).unwrap();
                assert!((v.exact * (-1f64).exp() / (-2.0 * l).exp() - 1.0).abs() < 1e-13);
                assert!((v.exact / v.approx - 1.0).abs() < 1e-13);
                assert_eq!(expect_exp_j(0.0, pt(l, 0.0), sector).unwrap().exact, 1.0);
            }
        }
        let v = expect_exp_j(1.0, pt(0.3, 0.0), Sector::Boson).unwrap();
        assert!((v.exact / v.approx - 1.0).abs() < 1e-3);
        let oracle = series_mean(0.3, Sector::Boson, |j| j.exp());
        assert!((v.exact - oracle).abs() < 1e-13 * oracle);
        assert!(expect_exp_j(f64::INFINITY, PhasePoint::origin(), Sector::Boson).is_err());
    }

    #[test]
    fn evolution_basics() {
        let t = Truncation::new(40).unwrap();
        let p = pt(0.4, 1.0);
        for sector in Sector::all() {
            let s = coherent_state(p, sector, t).unwrap();
            assert_eq!(evolve(&s, Hamiltonian::FreeRotor, 0.0), s);
            let moved = evolve(&s, Hamiltonian::Linear { omega: 0.7 }, 1.5);
            let target = coherent_state(pt(0.4, 1.0 + 0.7 * 1.5), sector, t).unwrap();
            assert!(moved.max_diff_on(&target, t.slots(sector)) < 1e-14 * s.max_abs());
            assert!((moved.norm_sq() - s.norm_sq()).abs() < 1e-13 * s.norm_sq());
        }
        let b = basis_state(Sector::Boson, HalfInt::integer(3), t).unwrap();
        let e = evolve(&b, Hamiltonian::FreeRotor, 0.8);
        assert!((e.coeff(6) - Complex64::from_polar(1.0, -0.8 * 4.5)).norm() < 1e-15);
    }

    #[test]
    fn time_reversal_flips_l() {
        let t = Truncation::new(40).unwrap();
        for sector in Sector::all() {
            let s = coherent_state(pt(0.8, 2.0), sector, t).unwrap();
            let r = hilbert::apply_time_reversal(&s);
            let target = coherent_state(pt(-0.8, 2.0), sector, t).unwrap();
            assert!(r.max_diff_on(&target, t.slots(sector)) < 1e-14 * s.max_abs());
        }
    }

    #[test]
    fn heisenberg_series_and_closed_agree() {
        for sector in Sector::all() {
            for &(l, phi, t) in &[(0.5, 0.0, 1.0), (-0.9, 3.0, -2.0), (0.2, 5.0, 0.3)] {
                let p = pt(l, phi);
                let s = heisenberg_expectations(p, t, sector).unwrap();
                let c = heisenberg_closed(p, t, sector);
                assert!((s.u_t - c.u_t).norm() < 1e-12);
                assert!((s.x_t - c.x_t).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn heisenberg_at_zero_time() {
        let p = pt(0.3, 1.1);
        for sector in Sector::all() {
            let h = heisenberg_expectations(p, 0.0, sector).unwrap();
            assert!((h.u_t - expect_u(p, sector)).norm() < 1e-12);
            assert!((h.x_t - p.xi()).norm() < 1e-12);
        }
    }

    #[test]
    fn heisenberg_example_point() {
        let h = heisenberg_expectations(pt(0.5, 0.0), 1.0, Sector::Boson).unwrap();
        assert!((h.u_t - h.u_t_approx).norm() < 1e-3);
    }

    #[test]
    fn uncertainty_examples() {
        let u = uncertainty_qp(PhasePoint::origin(), Sector::Boson);
        let want = 0.25 * (2f64.exp() - 1.0);
        assert!((want - 1.5972640).abs() < 1e-7);
        assert!((u.product() - want).abs() < 1e-14);
        assert!((u.bound - want).abs() < 1e-15);
    }

    #[test]
    fn uncertainty_matrix_route_agrees() {
        let t = Truncation::new(40).unwrap();
        for sector in Sector::all() {
            let p = pt(-0.4, 2.2);
            let s = coherent_state(p, sector, t).unwrap();
            let m = uncertainty_of_state(&s).unwrap();
            let c = uncertainty_qp(p, sector);
            assert!((m.dq - c.dq).abs() < 1e-12 && (m.dp - c.dp).abs() < 1e-12);
            assert!((m.bound - c.bound).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_states_do_not_saturate() {
        let t = Truncation::new(12).unwrap();
        for j in -3..=3 {
            let s = basis_state(Sector::Boson, HalfInt::integer(j), t).unwrap();
            let u = uncertainty_of_state(&s).unwrap();
            assert!(u.product() > u.bound);
            assert!((u.bound / u.product() - 1f64.tanh()).abs() < 1e-14);
        }
    }

    #[test]
    fn distribution() {
        let t = Truncation::new(40).unwrap();
        let levels = energy_distribution(PhasePoint::origin(), Sector::Boson, t, SectorPolicy::BosonOnly).unwrap();
        let p0 = levels.iter().find(|e| e.j == 0.0).unwrap().prob;
        assert!((p0 - 1.0 / 1.7726372).abs() < 1e-7);
        assert!((p0 - 0.5641312).abs() < 1e-7);
        let total: f64 = levels.iter().map(|e| e.prob).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(matches!(
            energy_distribution(PhasePoint::origin(), Sector::Fermion, t, SectorPolicy::BosonOnly),
            Err(CoherentError::FermionDistribution)
        ));
        let f = energy_distribution(pt(0.3, 0.0), Sector::Fermion, t, SectorPolicy::AllowFermion).unwrap();
        assert!((f.iter().map(|e| e.prob).sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
