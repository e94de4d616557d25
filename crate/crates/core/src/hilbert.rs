//! Finite window of the angular-momentum basis `{|j⟩}` and the operators of
//! the algebra `[Ĵ, U] = U`.
//!
//! Indices are stored as `2j` so boson (integer `j`) and fermion
//! (half-integer `j`) states share one code path. Shifts that leave the
//! window drop the amplitude and add its modulus to [`StateVector::leakage`].

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `½ ln(2 sinh 1)`, the constant in `N = −Ĵ + ½ ln(2 sinh 1)`.
pub fn number_offset() -> f64 {
    0.5 * (2.0 * 1f64.sinh()).ln()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error("2j = {two_j} lies outside the window |2j| <= {two_jmax}")]
    OutOfWindow { two_j: i32, two_jmax: i32 },
    #[error("2j = {two_j} has the wrong parity for the {sector} sector")]
    Parity { two_j: i32, sector: Sector },
    #[error("truncation 2*j_max = {0} is below the minimum of 2")]
    Truncation(i32),
    #[error("states live in different spaces ({0})")]
    Mismatch(String),
    #[error("operator factor e^{exponent} exceeds the floating-point range")]
    Range { exponent: f64 },
    #[error("coefficients must be finite")]
    NonFinite,
    #[error("expected {expected} coefficients, got {got}")]
    Length { expected: usize, got: usize },
}

/// Boson (`j₀ = 0`) or fermion (`j₀ = ½`) representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Boson,
    Fermion,
}

impl Sector {
    /// Parity of `2j`: 0 for bosons, 1 for fermions.
    pub fn parity(self) -> i32 {
        match self {
            Sector::Boson => 0,
            Sector::Fermion => 1,
        }
    }

    /// Vacuum label `j₀`.
    pub fn j0(self) -> f64 {
        0.5 * self.parity() as f64
    }

    pub fn other(self) -> Self {
        match self {
            Sector::Boson => Sector::Fermion,
            Sector::Fermion => Sector::Boson,
        }
    }

    pub fn all() -> [Sector; 2] {
        [Sector::Boson, Sector::Fermion]
    }

    pub fn admits(self, two_j: i32) -> bool {
        two_j.rem_euclid(2) == self.parity()
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::Boson => f.write_str("boson"),
            Sector::Fermion => f.write_str("fermion"),
        }
    }
}

impl std::str::FromStr for Sector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "boson" | "b" => Ok(Sector::Boson),
            "fermion" | "f" => Ok(Sector::Fermion),
            other => Err(format!("unknown sector '{other}' (expected boson or fermion)")),
        }
    }
}

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(two_j: i32) -> Self {
        Self(two_j)
    }

    pub const fn integer(j: i32) -> Self {
        Self(2 * j)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        0.5 * self.0 as f64
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Window bound `|2j| <= two_jmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    two_jmax: i32,
}

impl Truncation {
    pub fn new(two_jmax: i32) -> Result<Self, HilbertError> {
        if two_jmax < 2 {
            return Err(HilbertError::Truncation(two_jmax));
        }
        Ok(Self { two_jmax })
    }

    pub fn two_jmax(self) -> i32 {
        self.two_jmax
    }

    /// Largest `2j` in the window with the sector's parity.
    pub fn edge(self, sector: Sector) -> i32 {
        if sector.admits(self.two_jmax) {
            self.two_jmax
        } else {
            self.two_jmax - 1
        }
    }

    pub fn dim(self, sector: Sector) -> usize {
        (self.edge(sector) + 1) as usize
    }

    /// All `2j` of the sector inside the window, ascending.
    pub fn slots(self, sector: Sector) -> impl Iterator<Item = i32> + Clone {
        let edge = self.edge(sector);
        (-edge..=edge).step_by(2)
    }

    /// Slots at least `margin` steps away from either edge.
    pub fn interior(self, sector: Sector, margin: usize) -> impl Iterator<Item = i32> + Clone {
        let edge = self.edge(sector) - 2 * margin as i32;
        (-edge..=edge).step_by(2)
    }

    fn index(self, sector: Sector, two_j: i32) -> Option<usize> {
        let edge = self.edge(sector);
        if !sector.admits(two_j) || two_j.abs() > edge {
            None
        } else {
            Some(((two_j + edge) / 2) as usize)
        }
    }
}

/// Ladder and diagonal operators acting on the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operator {
    /// `Ĵ|j⟩ = j|j⟩`
    J,
    /// `U|j⟩ = |j+1⟩`
    U,
    /// `U†|j⟩ = |j−1⟩`
    Udag,
    /// `X|j⟩ = e^{−j−½}|j+1⟩`
    X,
    /// `X†|j⟩ = e^{−j+½}|j−1⟩`
    Xdag,
    /// `N|j⟩ = (−j + ½ ln 2 sinh 1)|j⟩`
    N,
}

impl Operator {
    pub const ALL: [Operator; 6] = [
        Operator::J,
        Operator::U,
        Operator::Udag,
        Operator::X,
        Operator::Xdag,
        Operator::N,
    ];

    /// `(shift in 2j, log of the factor as a function of j)`.
    fn action(self) -> (i32, fn(f64) -> Option<f64>) {
        match self {
            Operator::J | Operator::N => (0, |_| None),
            Operator::U => (2, |_| Some(0.0)),
            Operator::Udag => (-2, |_| Some(0.0)),
            Operator::X => (2, |j| Some(-j - 0.5)),
            Operator::Xdag => (-2, |j| Some(-j + 0.5)),
        }
    }
}

/// Coefficients `c_j` over the window of one sector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    sector: Sector,
    trunc: Truncation,
    coeffs: Vec<Complex64>,
    leakage: f64,
}

impl StateVector {
    pub fn zeros(sector: Sector, trunc: Truncation) -> Self {
        Self {
            sector,
            trunc,
            coeffs: vec![Complex64::new(0.0, 0.0); trunc.dim(sector)],
            leakage: 0.0,
        }
    }

    /// Builds a state from coefficients listed in ascending `2j` order.
    pub fn from_coeffs(sector: Sector, trunc: Truncation, coeffs: Vec<Complex64>) -> Result<Self, HilbertError> {
        let expected = trunc.dim(sector);
        if coeffs.len() != expected {
            return Err(HilbertError::Length {
                expected,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(HilbertError::NonFinite);
        }
        Ok(Self {
            sector,
            trunc,
            coeffs,
            leakage: 0.0,
        })
    }

    /// Fills every slot from `f(j)`.
    pub fn from_fn(
        sector: Sector,
        trunc: Truncation,
        mut f: impl FnMut(f64) -> Complex64,
    ) -> Result<Self, HilbertError> {
        let coeffs = trunc.slots(sector).map(|tj| f(0.5 * tj as f64)).collect();
        Self::from_coeffs(sector, trunc, coeffs)
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `(2j, c_j)` pairs in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.trunc.slots(self.sector).zip(self.coeffs.iter().copied())
    }

    /// `c_j` for `j = two_j / 2`; zero outside the window or sector.
    pub fn coeff(&self, two_j: i32) -> Complex64 {
        self.trunc
            .index(self.sector, two_j)
            .map_or(Complex64::new(0.0, 0.0), |k| self.coeffs[k])
    }

    /// Total modulus dropped off the window by the operations that produced
    /// this vector.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    /// Largest `|c_j|` among the two outermost slots on each side.
    pub fn tail_mass(&self) -> f64 {
        let n = self.coeffs.len();
        let take = n.min(2);
        self.coeffs[..take]
            .iter()
            .chain(&self.coeffs[n - take..])
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|c_j|` over the window.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= alpha);
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, HilbertError> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (c, d) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += d;
        }
        out.leakage += other.leakage;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HilbertError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Multiplies each `c_j` by `f(j)`.
    pub fn map_diagonal(&self, f: impl Fn(f64) -> Complex64) -> Self {
        let mut out = self.clone();
        for (tj, c) in self.trunc.slots(self.sector).zip(out.coeffs.iter_mut()) {
            *c *= f(0.5 * tj as f64);
        }
        out
    }

    /// Largest `|c_j − d_j|` over the given `2j` slots.
    pub fn max_diff_on(&self, other: &Self, slots: impl IntoIterator<Item = i32>) -> f64 {
        slots
            .into_iter()
            .map(|tj| (self.coeff(tj) - other.coeff(tj)).norm())
            .fold(0.0, f64::max)
    }

    fn check_same_space(&self, other: &Self) -> Result<(), HilbertError> {
        if self.sector != other.sector || self.trunc != other.trunc {
            return Err(HilbertError::Mismatch(format!(
                "{} window {} vs {} window {}",
                self.sector,
                self.trunc.two_jmax(),
                other.sector,
                other.trunc.two_jmax()
            )));
        }
        Ok(())
    }
}

fn check_slot(sector: Sector, two_j: i32, trunc: Truncation) -> Result<usize, HilbertError> {
    if !sector.admits(two_j) {
        return Err(HilbertError::Parity { two_j, sector });
    }
    trunc.index(sector, two_j).ok_or(HilbertError::OutOfWindow {
        two_j,
        two_jmax: trunc.two_jmax(),
    })
}

/// The unit vector `|j⟩`.
pub fn basis_state(sector: Sector, j: HalfInt, trunc: Truncation) -> Result<StateVector, HilbertError> {
    let k = check_slot(sector, j.twice(), trunc)?;
    let mut s = StateVector::zeros(sector, trunc);
    s.coeffs[k] = Complex64::new(1.0, 0.0);
    Ok(s)
}

const MAX_LOG_FACTOR: f64 = 709.0;

/// Applies one of the algebra's operators to `s`.
///
/// Shift factors are formed in log space; any factor whose magnitude would
/// exceed the `f64` range is rejected with [`HilbertError::Range`].
pub fn apply_operator(kind: Operator, s: &StateVector) -> Result<StateVector, HilbertError> {
    match kind {
        Operator::J => return Ok(s.map_diagonal(|j| Complex64::new(j, 0.0))),
        Operator::N => {
            let offset = number_offset();
            return Ok(s.map_diagonal(|j| Complex64::new(-j + offset, 0.0)));
        }
        _ => {}
    }
    let (shift, log_factor) = kind.action();
    let mut out = StateVector::zeros(s.sector, s.trunc);
    out.leakage = s.leakage;
    for (k, tj) in s.trunc.slots(s.sector).enumerate() {
        let c = s.coeffs[k];
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let exponent = log_factor(0.5 * tj as f64).unwrap_or(0.0);
        if exponent > MAX_LOG_FACTOR {
            return Err(HilbertError::Range { exponent });
        }
        let value = c * exponent.exp();
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(HilbertError::Range { exponent });
        }
        match s.trunc.index(s.sector, tj + shift) {
            Some(dest) => out.coeffs[dest] = value,
            None => out.leakage += value.norm(),
        }
    }
    Ok(out)
}

/// Applies a sequence of operators right to left, as written: `[A, B]`
/// yields `A B |s⟩`.
pub fn apply_product(ops: &[Operator], s: &StateVector) -> Result<StateVector, HilbertError> {
    ops.iter().rev().try_fold(s.clone(), |acc, &op| apply_operator(op, &acc))
}

/// Antiunitary time reversal: `c_j → conj(c_{−j})`.
pub fn apply_time_reversal(s: &StateVector) -> StateVector {
    let mut out = s.clone();
    for (k, tj) in s.trunc.slots(s.sector).enumerate() {
        out.coeffs[k] = s.coeff(-tj).conj();
    }
    out
}

/// `⟨a|b⟩ = Σ_j conj(a_j) b_j`, summed in ascending `2j`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64, HilbertError> {
    a.check_same_space(b)?;
    Ok(a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y))
}

/// Dense matrix `A_jk = ⟨j|A|k⟩` over a window, rows and columns in
/// ascending `2j`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    sector: Sector,
    trunc: Truncation,
    dim: usize,
    data: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn identity(sector: Sector, trunc: Truncation) -> Self {
        let dim = trunc.dim(sector);
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        Self {
            sector,
            trunc,
            dim,
            data,
        }
    }

    /// Matrix of `ops` (product, right to left) restricted to the window.
    pub fn of_product(ops: &[Operator], sector: Sector, trunc: Truncation) -> Result<Self, HilbertError> {
        let dim = trunc.dim(sector);
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (col, tk) in trunc.slots(sector).enumerate() {
            let image = apply_product(ops, &basis_state(sector, HalfInt::from_twice(tk), trunc)?)?;
            for (row, c) in image.coeffs.iter().enumerate() {
                data[row * dim + col] = *c;
            }
        }
        Ok(Self {
            sector,
            trunc,
            dim,
            data,
        })
    }

    pub fn of(kind: Operator, sector: Sector, trunc: Truncation) -> Result<Self, HilbertError> {
        Self::of_product(&[kind], sector, trunc)
    }

    pub fn from_fn(sector: Sector, trunc: Truncation, f: impl Fn(HalfInt, HalfInt) -> Complex64) -> Self {
        let dim = trunc.dim(sector);
        let mut data = Vec::with_capacity(dim * dim);
        for tj in trunc.slots(sector) {
            for tk in trunc.slots(sector) {
                data.push(f(HalfInt::from_twice(tj), HalfInt::from_twice(tk)));
            }
        }
        Self {
            sector,
            trunc,
            dim,
            data,
        }
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `⟨j|A|k⟩`.
    pub fn element(&self, two_j: i32, two_k: i32) -> Complex64 {
        match (self.trunc.index(self.sector, two_j), self.trunc.index(self.sector, two_k)) {
            (Some(r), Some(c)) => self.data[r * self.dim + c],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector, HilbertError> {
        if s.sector != self.sector || s.trunc != self.trunc {
            return Err(HilbertError::Mismatch("matrix and state windows differ".into()));
        }
        let coeffs = self
            .rows()
            .map(|row| {
                row.iter()
                    .zip(&s.coeffs)
                    .fold(Complex64::new(0.0, 0.0), |acc, (a, c)| acc + a * c)
            })
            .collect();
        StateVector::from_coeffs(self.sector, self.trunc, coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct WireCoeff {
    two_j: i32,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct WireState {
    sector: Sector,
    two_jmax: i32,
    coeffs: Vec<WireCoeff>,
}

impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WireState {
            sector: self.sector,
            two_jmax: self.trunc.two_jmax(),
            coeffs: self
                .iter()
                .map(|(two_j, c)| WireCoeff {
                    two_j,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    /// Missing slots are zero; entries outside the window or with the wrong
    /// parity are rejected.
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = WireState::deserialize(deserializer)?;
        let trunc = Truncation::new(wire.two_jmax).map_err(D::Error::custom)?;
        let mut s = StateVector::zeros(wire.sector, trunc);
        for c in wire.coeffs {
            let k = check_slot(wire.sector, c.two_j, trunc).map_err(D::Error::custom)?;
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(D::Error::custom(HilbertError::NonFinite));
            }
            s.coeffs[k] = Complex64::new(c.re, c.im);
        }
        Ok(s)
    }
}
