//! Periodic pseudo-spectral laboratory for the generalized 2D Boussinesq
//! system with logarithmically supercritical velocities.
//!
//! The evolved system is
//!
//! ```text
//! ∂t ω + u·∇ω + ν Λ^α ω = ∂₁θ
//! ∂t θ + u·∇θ + κ Λ^β θ = 0
//! u = ∇⊥ψ,   Δψ = Λ^σ (log(I − Δ))^γ ω
//! ```
//!
//! on the torus `[0, 2π)²`. Besides the integrator the crate evaluates the
//! operators the regularity theory leans on: the Riesz transform, the
//! combined quantity `G = ω − Rθ`, the quasi-velocity formulation,
//! Littlewood–Paley blocks and Besov-type norms.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cli;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod littlewood_paley;
pub mod random;
pub mod spectral;

pub use error::{Error, Result};
