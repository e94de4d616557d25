//! Functional (Bargmann) representation `φ(ξ*) = ⟨ξ|φ⟩`.
//!
//! A state with coefficients `a_j` is the Laurent-type function
//! `φ(ξ*) = Σ_j a_j e^{−j²/2} ξ*^{−j}`. Functions are evaluated in the chart
//! `ξ* = e^{−l−iφ}`, so `ξ*^{−j} = e^{(l+iφ)j}` is single valued for
//! half-integer `j` as well.
//!
//! The inner product is the Gaussian-weighted integral
//! `(1/2π^{3/2}) ∫₀^{2π} dφ ∫ dl e^{−l²} conj(f) g`, realized with
//! Gauss–Hermite nodes in `l` and the periodic trapezoid rule in `φ`.
//! Kernel integrals run the angular rule over both sheets `φ ∈ [0, 4π)` of the
//! chart, which leaves integrands of a single sector unchanged and averages
//! away products that mix integer and half-integer powers.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussHermite;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coherent::{self, CoherentError, PhasePoint};
use crate::hilbert::{self, HilbertError, Operator, OperatorMatrix, Sector, StateVector, Truncation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BargmannError {
    #[error("functions belong to different sectors ({0} vs {1})")]
    SectorMismatch(Sector, Sector),
    #[error("quadrature needs n_l >= 2 and even n_phi >= 4 (got n_l = {n_l}, n_phi = {n_phi})")]
    Quadrature { n_l: usize, n_phi: usize },
    #[error("operator window does not match: {0}")]
    Window(String),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Coherent(#[from] CoherentError),
}

/// `φ(ξ*) = Σ_j a_j e^{−j²/2} ξ*^{−j}` with `a_j` stored as a state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BargmannFunction(StateVector);

pub fn to_bargmann(s: &StateVector) -> BargmannFunction {
    BargmannFunction(s.clone())
}

pub fn from_bargmann(f: &BargmannFunction) -> StateVector {
    f.0.clone()
}

impl BargmannFunction {
    /// Basis function `e_j(ξ*) = e^{−j²/2} ξ*^{−j}`.
    pub fn basis(sector: Sector, j: hilbert::HalfInt, trunc: Truncation) -> Result<Self, HilbertError> {
        hilbert::basis_state(sector, j, trunc).map(Self)
    }

    pub fn sector(&self) -> Sector {
        self.0.sector()
    }

    pub fn truncation(&self) -> Truncation {
        self.0.truncation()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        self.0.coeffs()
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self(self.0.scale(alpha))
    }

    /// Largest outer-slot coefficient; large values mean the window cuts
    /// into the function.
    pub fn tail_mass(&self) -> f64 {
        self.0.tail_mass()
    }

    /// Value at the chart point `ξ* = e^{−l−iφ}`. `phi` is used as given so
    /// callers can address either sheet.
    pub fn eval_chart(&self, l: f64, phi: f64) -> Complex64 {
        self.eval_log(Complex64::new(-l, -phi))
    }

    /// Value at `ln ξ* = w`: `Σ a_j e^{−j²/2 − jw}`.
    pub fn eval_log(&self, w: Complex64) -> Complex64 {
        self.0
            .iter()
            .filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
            .fold(Complex64::new(0.0, 0.0), |acc, (tj, a)| {
                let j = 0.5 * tj as f64;
                acc + a * (-0.5 * j * j - j * w).exp()
            })
    }
}

/// `φ(ξ*)` at `ξ = e^{−l+iφ}`; equals `⟨l,φ|φ⟩`.
pub fn eval(f: &BargmannFunction, p: PhasePoint) -> Complex64 {
    f.eval_chart(p.l(), p.phi())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BargmannOperator {
    J,
    U,
    Udag,
    X,
    Xdag,
    T,
}

impl BargmannOperator {
    pub const ALL: [BargmannOperator; 6] = [
        BargmannOperator::J,
        BargmannOperator::U,
        BargmannOperator::Udag,
        BargmannOperator::X,
        BargmannOperator::Xdag,
        BargmannOperator::T,
    ];

    fn linear(self) -> Option<Operator> {
        match self {
            BargmannOperator::J => Some(Operator::J),
            BargmannOperator::U => Some(Operator::U),
            BargmannOperator::Udag => Some(Operator::Udag),
            BargmannOperator::X => Some(Operator::X),
            BargmannOperator::Xdag => Some(Operator::Xdag),
            BargmannOperator::T => None,
        }
    }
}

/// Operator action on the Laurent coefficients.
pub fn apply_op_bargmann(kind: BargmannOperator, f: &BargmannFunction) -> Result<BargmannFunction, HilbertError> {
    match kind.linear() {
        Some(op) => hilbert::apply_operator(op, &f.0).map(BargmannFunction),
        None => Ok(BargmannFunction(hilbert::apply_time_reversal(&f.0))),
    }
}

/// Right-hand sides of the functional actions evaluated at `ln ξ* = w`:
///
/// | op  | action                          |
/// |-----|---------------------------------|
/// | Ĵ   | `−ξ* dφ/dξ*`                    |
/// | U   | `φ(eξ*) / (√e ξ*)`              |
/// | U†  | `ξ* φ(ξ*/e) / √e`               |
/// | X   | `φ(e²ξ*) / (e ξ*)`              |
/// | X†  | `ξ* φ(ξ*)`                      |
/// | T   | `conj(φ(ξ^{−1}))`               |
///
/// The derivative for Ĵ is a trapezoid-rule Cauchy integral on a small
/// circle around `w`.
pub fn functional_action(kind: BargmannOperator, f: &BargmannFunction, w: Complex64) -> Complex64 {
    match kind {
        BargmannOperator::J => {
            const N: usize = 64;
            const R: f64 = 0.25;
            let d = (0..N).fold(Complex64::new(0.0, 0.0), |acc, k| {
                let z = Complex64::from_polar(R, 2.0 * PI * k as f64 / N as f64);
                acc + f.eval_log(w + z) / z
            }) / N as f64;
            -d
        }
        BargmannOperator::U => f.eval_log(w + 1.0) * (-w - 0.5).exp(),
        BargmannOperator::Udag => f.eval_log(w - 1.0) * (w - 0.5).exp(),
        BargmannOperator::X => f.eval_log(w + 2.0) * (-w - 1.0).exp(),
        BargmannOperator::Xdag => f.eval_log(w) * w.exp(),
        BargmannOperator::T => f.eval_log(-w.conj()).conj(),
    }
}

/// Gauss–Hermite order in `l` and number of uniform angular points.
#[derive(Debug, Clone)]
pub struct Quadrature {
    n_l: usize,
    n_phi: usize,
    hermite: Vec<(f64, f64)>,
}

impl PartialEq for Quadrature {
    fn eq(&self, other: &Self) -> bool {
        self.n_l == other.n_l && self.n_phi == other.n_phi
    }
}

impl Quadrature {
    pub fn new(n_l: usize, n_phi: usize) -> Result<Self, BargmannError> {
        if n_l < 2 || n_phi < 4 || !n_phi.is_multiple_of(2) {
            return Err(BargmannError::Quadrature { n_l, n_phi });
        }
        let rule = GaussHermite::new(NonZeroUsize::new(n_l).expect("n_l >= 2"));
        Ok(Self {
            n_l,
            n_phi,
            hermite: rule.as_node_weight_pairs().to_vec(),
        })
    }

    pub fn n_l(&self) -> usize {
        self.n_l
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    /// `(l_k, w_k)` for the weight `e^{−l²}`.
    pub fn hermite_nodes(&self) -> &[(f64, f64)] {
        &self.hermite
    }

    /// Deterministic-order sum of `(1/2π^{3/2}) ∫ dφ ∫ dl e^{−l²} g(l, φ)`
    /// over one sheet (`sheets = 1`, `φ ∈ [0, 2π)`) or both
    /// (`sheets = 2`, `φ ∈ [0, 4π)`, averaged).
    fn integrate(&self, sheets: usize, g: impl Fn(f64, f64) -> Complex64) -> Complex64 {
        let n_ang = sheets * self.n_phi;
        let dphi = 2.0 * PI / self.n_phi as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for &(l, w) in &self.hermite {
            let mut ring = Complex64::new(0.0, 0.0);
            for m in 0..n_ang {
                ring += g(l, m as f64 * dphi);
            }
            total += w * ring;
        }
        // (1/2π^{3/2}) · (2π / n_ang) · Σ
        total / (PI.sqrt() * n_ang as f64)
    }

    /// All nodes `(l, φ)` of the two-sheet grid with their weights, in the
    /// order used by [`NodeProjector`].
    fn two_sheet_nodes(&self) -> Vec<(f64, f64, f64)> {
        let n_ang = 2 * self.n_phi;
        let dphi = 2.0 * PI / self.n_phi as f64;
        let scale = 1.0 / (PI.sqrt() * n_ang as f64);
        self.hermite
            .iter()
            .flat_map(|&(l, w)| (0..n_ang).map(move |m| (l, m as f64 * dphi, w * scale)))
            .collect()
    }
}

/// `⟨f|g⟩` by quadrature of the Gaussian measure.
pub fn inner_quadrature(f: &BargmannFunction, g: &BargmannFunction, q: &Quadrature) -> Result<Complex64, BargmannError> {
    if f.sector() != g.sector() {
        return Err(BargmannError::SectorMismatch(f.sector(), g.sector()));
    }
    Ok(q.integrate(1, |l, phi| f.eval_chart(l, phi).conj() * g.eval_chart(l, phi)))
}

/// Reproducing kernel `𝒦(η*, ξ) = ⟨η|ξ⟩` with the chart angle of `ξ` used
/// as given.
pub fn kernel(eta: PhasePoint, l: f64, phi: f64, sector: Sector) -> Complex64 {
    coherent::overlap_from_log(Complex64::new(-(eta.l() + l), phi - eta.phi()), sector)
}

/// `(K g)(η*)` for an arbitrary function `g(l, φ)` of the chart.
pub fn reproduce_with(
    kernel_sector: Sector,
    eta: PhasePoint,
    q: &Quadrature,
    g: impl Fn(f64, f64) -> Complex64,
) -> Complex64 {
    q.integrate(2, |l, phi| kernel(eta, l, phi, kernel_sector) * g(l, phi))
}

/// `(K_{sector} f)(η*)`: reproduces `f(η*)` when `f` lies in `sector` and
/// annihilates functions of the other sector.
pub fn reproducing_apply(f: &BargmannFunction, p: PhasePoint, sector: Sector, q: &Quadrature) -> Complex64 {
    reproduce_with(sector, p, q, |l, phi| f.eval_chart(l, phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelIdentity {
    /// `θ_{3|2}((i/2π) ln(ξ₁*ξ₂) | i/π)`
    pub lhs: Complex64,
    /// `(1/2π^{3/2}) ∫ dα ∫ dp e^{−p²} 𝒦(ξ₁*, ζ) 𝒦(ζ*, ξ₂)`
    pub rhs: Complex64,
}

impl KernelIdentity {
    pub fn abs_error(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// Both sides of the integral identity for products of two kernels.
pub fn kernel_identity_check(p1: PhasePoint, p2: PhasePoint, sector: Sector, q: &Quadrature) -> KernelIdentity {
    let lhs = coherent::overlap_closed(p1, p2, sector);
    let rhs = q.integrate(2, |l, alpha| {
        let left = kernel(p1, l, alpha, sector);
        let right = coherent::overlap_from_log(Complex64::new(-(l + p2.l()), p2.phi() - alpha), sector);
        left * right
    });
    KernelIdentity { lhs, rhs }
}

/// Kernel operator restricted to the two-sheet quadrature grid, for
/// applying `K` repeatedly to sampled functions.
#[derive(Debug, Clone)]
pub struct NodeProjector {
    sector: Sector,
    n_l: usize,
    n_ang: usize,
    nodes: Vec<(f64, f64, f64)>,
    /// `𝒦` indexed by `(k_a, k_b, m_b − m_a + n_ang − 1)`.
    table: Vec<Complex64>,
}

impl NodeProjector {
    pub fn new(sector: Sector, q: &Quadrature) -> Self {
        let n_l = q.n_l;
        let n_ang = 2 * q.n_phi;
        let dphi = 2.0 * PI / q.n_phi as f64;
        let span = 2 * n_ang - 1;
        let mut table = Vec::with_capacity(n_l * n_l * span);
        for &(la, _) in &q.hermite {
            for &(lb, _) in &q.hermite {
                for d in 0..span {
                    let dm = d as f64 - (n_ang as f64 - 1.0);
                    table.push(coherent::overlap_from_log(Complex64::new(-(la + lb), dm * dphi), sector));
                }
            }
        }
        Self {
            sector,
            n_l,
            n_ang,
            nodes: q.two_sheet_nodes(),
            table,
        }
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// `(l, φ, weight)` per node.
    pub fn nodes(&self) -> &[(f64, f64, f64)] {
        &self.nodes
    }

    pub fn sample(&self, g: impl Fn(f64, f64) -> Complex64) -> Vec<Complex64> {
        self.nodes.iter().map(|&(l, phi, _)| g(l, phi)).collect()
    }

    /// `Σ_b W_b 𝒦(η*, ζ_b) values_b`, the kernel integral at an arbitrary point.
    pub fn evaluate_at(&self, eta: PhasePoint, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.nodes.len(), "one value per node");
        values
            .iter()
            .zip(&self.nodes)
            .fold(Complex64::new(0.0, 0.0), |acc, (v, &(l, phi, w))| {
                acc + w * kernel(eta, l, phi, self.sector) * v
            })
    }

    pub fn apply(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.nodes.len(), "one value per node");
        let span = 2 * self.n_ang - 1;
        let weighted: Vec<Complex64> = values
            .iter()
            .zip(&self.nodes)
            .map(|(v, &(_, _, w))| v * w)
            .collect();
        (0..self.nodes.len())
            .map(|a| {
                let (ka, ma) = (a / self.n_ang, a % self.n_ang);
                let mut acc = Complex64::new(0.0, 0.0);
                for kb in 0..self.n_l {
                    let row = &self.table[(ka * self.n_l + kb) * span..][..span];
                    let base = kb * self.n_ang;
                    for mb in 0..self.n_ang {
                        acc += row[mb + self.n_ang - 1 - ma] * weighted[base + mb];
                    }
                }
                acc
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovariantSymbol {
    /// `𝒜(ξ*, ξ) = ⟨ξ|A|ξ⟩`
    pub kernel: Complex64,
    /// `𝒜(ξ*, ξ) / ⟨ξ|ξ⟩`
    pub symbol: Complex64,
}

/// Diagonal kernel and covariant symbol of a windowed operator matrix.
pub fn covariant_symbol(op: &OperatorMatrix, p: PhasePoint, sector: Sector) -> Result<CovariantSymbol, BargmannError> {
    if op.sector() != sector {
        return Err(BargmannError::Window(format!(
            "matrix is {} but symbol requested for {}",
            op.sector(),
            sector
        )));
    }
    let state = coherent::coherent_state(p, sector, op.truncation())?;
    let image = op.apply(&state)?;
    let kernel = hilbert::inner(&state, &image)?;
    Ok(CovariantSymbol {
        kernel,
        symbol: kernel / coherent::norm_sq(p, sector),
    })
}
