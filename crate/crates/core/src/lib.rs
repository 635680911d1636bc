//! Generalized derivative operators and the iterative methods built on them.
//!
//! A *derivator* is the degree-k polynomial fitted through a function at a
//! point, either by exact interpolation on forward nodes `x, x+Δ, ..., x+kΔ`
//! or as the `Δ → 0` limit (the osculating polynomial). Its power-basis
//! coefficients are the generalized derivatives.
//!
//! On top of that sit five solvers:
//!
//! - [`solvers::l_nr`]: classical Newton-Raphson (linear derivator root).
//! - [`solvers::c_nr`]: cubic Newton-Raphson (closest real root of the cubic derivator).
//! - [`solvers::q_nr`]: quadratic Newton-Raphson, which fails when the parabola has no real root.
//! - [`solvers::l_g`]: fixed-step gradient descent/ascent.
//! - [`solvers::q_g`]: quadratic gradient, jumping to the derivator's vertex.
//!
//! [`bench`] sweeps initial guesses and aggregates iteration statistics.

pub mod bench;
pub mod cubic;
pub mod derivator;
mod error;
pub mod expr;
pub mod solvers;
pub mod target;

pub use error::{Error, Result};
