//! Stable Hermite-function transforms at large sizes.
//!
//! The Hermite functions ψₙ(x) = (2ⁿn!√π)^{−1/2}·e^{−x²/2}·Hₙ(x) are an
//! orthonormal basis of L²(ℝ) and the eigenfunctions of the quantum
//! harmonic oscillator.  Spectral methods built on them need the N×N
//! transform matrix T_{ij} = ψⱼ(xᵢ) at the Gauss-Hermite nodes, and its
//! inverse.  The textbook way of assembling T collapses near N ≈ 766
//! because the Gaussian seed e^{−x²/2} underflows at the outer nodes;
//! this crate provides that naive assembly (for demonstration), a
//! rescaled recurrence that fixes the underflow, and a factored form
//! T = diag(d)·Qᵀ read directly off the Jacobi-matrix eigendecomposition
//! that is both stable and cheap, with T⁻¹ = Q·diag(d)⁻¹ available for
//! free.  Gauss-Hermite quadrature weights fall out of the same
//! factorization without a single exponential being evaluated.
//!
//! Modules:
//!
//! * [`transform`]: the three assembly backends, application of T and
//!   T⁻¹ to real and complex vectors, quadrature rules, and a small
//!   binary container for factored transforms.
//! * [`tridiag`]: the symmetric-tridiagonal eigensolver behind the
//!   factored backend.
//! * [`special`]: scaled Airy functions, log-gamma, and pointwise
//!   Hermite-function evaluation (recurrence at small degree, uniform
//!   asymptotics at large degree).
//! * [`oracle`]: extended-precision reference implementations used to
//!   validate everything else.
//! * [`gpe`]: a split-step spectral solver for the 1-D Gross-Pitaevskii
//!   equation, the end-to-end stress test of the transform pair.
//! * [`linalg`]: the few dense kernels the crate needs, including a
//!   seeded power-iteration spectral norm.
//!
//! The `hermite` binary exposes node/weight tables, assembly benchmarks,
//! error curves against the oracle, and the GPE solver as subcommands.

mod dd;
pub mod error;
pub mod gpe;
pub mod linalg;
pub mod oracle;
pub mod special;
pub mod transform;
pub mod tridiag;

pub use error::{Error, Result};
