//! Jacobi theta functions θ₂, θ₃, θ₄ with an explicit tail bound.
//!
//! All three are lattice sums of `exp(iπτ m² + 2iπ v m)`:
//!
//! | kind | lattice       | sign      |
//! |------|---------------|-----------|
//! | θ₃   | m ∈ ℤ         | +         |
//! | θ₄   | m ∈ ℤ         | (−1)^m    |
//! | θ₂   | m ∈ ℤ + ½     | +         |
//!
//! The sum is truncated at the first shell `N` for which the Gaussian tail
//! beyond it is provably below [`SeriesControl::tol`], and is accumulated
//! from the outermost shell inward so results are bitwise reproducible.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Denominators `1 ± q^{2n-1} e^{±2iπv}` closer to zero than this are treated
/// as a zero of the theta function.
const SINGULAR_FACTOR: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error("modulus must satisfy Im(tau) > 0, got tau = {0}")]
    Domain(Complex64),
    #[error("series did not reach tolerance {tol:e} within {n_max} shells")]
    Convergence { tol: f64, n_max: usize },
    #[error("theta function vanishes (|theta| = {magnitude:e}) at v = {v}")]
    Singular { v: Complex64, magnitude: f64 },
    #[error("log-derivative series not available for {0:?}")]
    UnsupportedKind(ThetaKind),
    #[error("invalid series control: tol = {tol:e}, n_max = {n_max}")]
    Control { tol: f64, n_max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaKind {
    Two,
    Three,
    Four,
}

impl ThetaKind {
    pub fn from_index(k: u8) -> Option<Self> {
        match k {
            2 => Some(Self::Two),
            3 => Some(Self::Three),
            4 => Some(Self::Four),
            _ => None,
        }
    }

    /// Partner under `τ → −1/τ`: θ₃ ↔ θ₃, θ₂ ↔ θ₄.
    pub fn modular_partner(self) -> Self {
        match self {
            Self::Two => Self::Four,
            Self::Three => Self::Three,
            Self::Four => Self::Two,
        }
    }

    fn lattice_offset(self) -> f64 {
        match self {
            Self::Two => 0.5,
            Self::Three | Self::Four => 0.0,
        }
    }
}

/// Argument pair `(v | τ)` with `Im τ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArg {
    v: Complex64,
    tau: Complex64,
}

impl ThetaArg {
    pub fn new(v: Complex64, tau: Complex64) -> Result<Self, ThetaError> {
        if tau.im.is_nan() || tau.im <= 0.0 || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(ThetaError::Domain(tau));
        }
        Ok(Self { v, tau })
    }

    /// Purely imaginary modulus `τ = i·tau_im`.
    pub fn imaginary(v: Complex64, tau_im: f64) -> Result<Self, ThetaError> {
        Self::new(v, Complex64::new(0.0, tau_im))
    }

    pub fn v(&self) -> Complex64 {
        self.v
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// Nome `q = e^{iπτ}`.
    pub fn nome(&self) -> Complex64 {
        (I * PI * self.tau).exp()
    }

    pub fn with_v(&self, v: Complex64) -> Self {
        Self { v, tau: self.tau }
    }

    /// The image `(v/τ | −1/τ)` under the modular inversion.
    pub fn modular_image(&self) -> Self {
        Self {
            v: self.v / self.tau,
            tau: -1.0 / self.tau,
        }
    }

    /// Factor `√(τ/i) · e^{iπv²/τ}` relating `θ_k(v/τ | −1/τ)` to the
    /// partner function at `(v | τ)`. Principal square root.
    pub fn modular_factor(&self) -> Complex64 {
        (self.tau / I).sqrt() * (I * PI * self.v * self.v / self.tau).exp()
    }
}

/// Truncation control for lattice and product series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    /// Absolute bound on the modulus of everything omitted.
    pub tol: f64,
    /// Hard cap on the number of shells summed.
    pub n_max: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            tol: 1e-20,
            n_max: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(tol: f64, n_max: usize) -> Result<Self, ThetaError> {
        let ctl = Self { tol, n_max };
        ctl.validate()?;
        Ok(ctl)
    }

    fn validate(&self) -> Result<(), ThetaError> {
        if self.tol > 0.0 && self.tol.is_finite() && self.n_max >= 1 {
            Ok(())
        } else {
            Err(ThetaError::Control {
                tol: self.tol,
                n_max: self.n_max,
            })
        }
    }
}

/// Number of shells `0..=N` needed so that the Gaussian tail of the lattice
/// sum is below `ctl.tol`.
///
/// Shell `k` holds the lattice points of radius `k + offset`. Beyond the
/// vertex of `−π t r² + 2π|y| r` successive terms shrink by at least
/// `ρ = e^{−π t (2μ+1) + 2π|y|}`, which bounds each one-sided tail by a
/// geometric series.
fn lattice_shells(offset: f64, t: f64, y_abs: f64, ctl: &SeriesControl) -> Result<usize, ThetaError> {
    let log_tol = ctl.tol.ln();
    for k in 0..=ctl.n_max {
        let mu = (k + 1) as f64 + offset;
        let log_rho = -PI * t * (2.0 * mu + 1.0) + 2.0 * PI * y_abs;
        if log_rho >= 0.0 {
            continue;
        }
        let log_term = -PI * t * mu * mu + 2.0 * PI * y_abs * mu;
        let log_bound = std::f64::consts::LN_2 + log_term - (-log_rho.exp()).ln_1p();
        if log_bound < log_tol {
            return Ok(k);
        }
    }
    Err(ThetaError::Convergence {
        tol: ctl.tol,
        n_max: ctl.n_max,
    })
}

/// Evaluates `θ_kind(v | τ)`.
pub fn theta(kind: ThetaKind, arg: ThetaArg, ctl: SeriesControl) -> Result<Complex64, ThetaError> {
    ctl.validate()?;
    let offset = kind.lattice_offset();
    let shells = lattice_shells(offset, arg.tau.im, arg.v.im.abs(), &ctl)?;
    let term = |m: f64| -> Complex64 {
        let z = I * PI * arg.tau * (m * m) + 2.0 * I * PI * arg.v * m;
        let value = z.exp();
        if kind == ThetaKind::Four && (m.rem_euclid(2.0) != 0.0) {
            -value
        } else {
            value
        }
    };

    let mut sum = Complex64::new(0.0, 0.0);
    for k in (0..=shells).rev() {
        let r = k as f64 + offset;
        if r == 0.0 {
            sum += term(0.0);
        } else {
            sum += term(r);
            sum += term(-r);
        }
    }
    Ok(sum)
}

/// `(d/dv) ln θ_kind(v | τ)` for θ₃ and θ₄ via the product-form series
///
/// θ₃'/θ₃ = π Σ_{n≥1} [2i aₙ/(1 + aₙ) − 2i bₙ/(1 + bₙ)]
/// θ₄'/θ₄ = π Σ_{n≥1} [2i bₙ/(1 − bₙ) − 2i aₙ/(1 − aₙ)]
///
/// with `aₙ = q^{2n−1} e^{2iπv}` and `bₙ = q^{2n−1} e^{−2iπv}`.
pub fn theta_log_derivative(
    kind: ThetaKind,
    arg: ThetaArg,
    ctl: SeriesControl,
) -> Result<Complex64, ThetaError> {
    ctl.validate()?;
    let sign = match kind {
        ThetaKind::Three => 1.0,
        ThetaKind::Four => -1.0,
        ThetaKind::Two => return Err(ThetaError::UnsupportedKind(kind)),
    };

    let value = theta(kind, arg, ctl)?;
    if value.norm() <= ctl.tol {
        return Err(ThetaError::Singular {
            v: arg.v,
            magnitude: value.norm(),
        });
    }

    let t = arg.tau.im;
    let y_abs = arg.v.im.abs();
    // |aₙ|, |bₙ| ≤ g(n) = e^{−πt(2n−1) + 2π|y|}, ratio e^{−2πt}.
    let log_g = |n: usize| -PI * t * (2 * n - 1) as f64 + 2.0 * PI * y_abs;
    let log_tol = ctl.tol.ln();
    let log_ratio_gap = (-(-2.0 * PI * t).exp()).ln_1p();
    let mut terms = None;
    for n in 0..=ctl.n_max {
        let lg = log_g(n + 1);
        if lg < -std::f64::consts::LN_2 {
            // each summand ≤ 2 g, two sums, prefactor 2π
            let log_bound = (8.0 * PI).ln() + lg - log_ratio_gap;
            if log_bound < log_tol {
                terms = Some(n);
                break;
            }
        }
    }
    let terms = terms.ok_or(ThetaError::Convergence {
        tol: ctl.tol,
        n_max: ctl.n_max,
    })?;

    let mut sum = Complex64::new(0.0, 0.0);
    for n in (1..=terms).rev() {
        let base = I * PI * arg.tau * (2 * n - 1) as f64;
        let a = (base + 2.0 * I * PI * arg.v).exp();
        let b = (base - 2.0 * I * PI * arg.v).exp();
        let da = 1.0 + sign * a;
        let db = 1.0 + sign * b;
        if da.norm() < SINGULAR_FACTOR || db.norm() < SINGULAR_FACTOR {
            return Err(ThetaError::Singular {
                v: arg.v,
                magnitude: value.norm(),
            });
        }
        sum += sign * (2.0 * I * a / da - 2.0 * I * b / db);
    }
    Ok(PI * sum)
}

/// θ₂ through the half-period shift `θ₂(v) = e^{iπ(τ/4 + v)} θ₃(v + τ/2)`.
pub fn theta2_via_shift(arg: ThetaArg, ctl: SeriesControl) -> Result<Complex64, ThetaError> {
    let shifted = arg.with_v(arg.v + arg.tau / 2.0);
    let prefactor = (I * PI * (arg.tau / 4.0 + arg.v)).exp();
    Ok(prefactor * theta(ThetaKind::Three, shifted, ctl)?)
}

/// `θ_kind(v/τ | −1/τ)` computed from the partner function at `(v | τ)`.
pub fn theta_modular(kind: ThetaKind, arg: ThetaArg, ctl: SeriesControl) -> Result<Complex64, ThetaError> {
    Ok(arg.modular_factor() * theta(kind.modular_partner(), arg, ctl)?)
}

/// θ₃ with default control at purely imaginary modulus; convenience for
/// callers that only ever use `τ = i/π` or `τ = iπ`.
pub(crate) fn theta_imag(kind: ThetaKind, v: Complex64, tau_im: f64) -> Complex64 {
    let arg = ThetaArg::imaginary(v, tau_im).expect("positive modulus");
    theta(kind, arg, SeriesControl::default()).expect("default control converges")
}
