//! Coherent states for a quantum particle on a circle.
//!
//! The states `|l,φ⟩` are labelled by a point of the cylinder and come in two
//! sectors: integer angular momentum (bosons) and half-integer angular
//! momentum (fermions). Their overlaps, norms and expectation values reduce to
//! Jacobi theta functions at `τ = i/π`, which this crate evaluates directly
//! and compares against brute-force sums over a truncated basis.
//!
//! * [`theta`]: Jacobi θ₂, θ₃, θ₄ with controlled truncation.
//! * [`hilbert`]: truncated `|j⟩` bases, the operators `J, U, X` and their
//!   adjoints, time reversal.
//! * [`coherent`]: coherent states, closed-form expectations, dynamics,
//!   uncertainty relations, energy distribution.
//! * [`bargmann`]: functional representation, Gaussian-measure quadrature,
//!   reproducing kernels and covariant symbols.
//! * [`verify`]: a reproducible report covering every identity.

pub mod bargmann;
pub mod cli;
pub mod coherent;
pub mod hilbert;
pub mod theta;
pub mod verify;

pub use num_complex::Complex64;
