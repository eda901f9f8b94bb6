//! Rough singular-integral kernels on the unit circle.
//!
//! The crate builds the even, mean-zero kernel `Ω_n` made of `2n` quarter-turn
//! symmetric atoms for a given Young function, and evaluates the quantities
//! that control the multiplier `K̂_Ω`:
//!
//! * [`orlicz`]: Young functions, Orlicz modulars, Luxemburg norms and the
//!   `N ↦ n` schedule.
//! * [`circle`]: angles, arcs, piecewise-constant functions on the circle and
//!   the assembled [`circle::Construction`].
//! * [`logkernel`]: closed-form and quadrature evaluation of
//!   `∫ Ω(θ) log(1/|cos(θ-ξ)|) dθ` and the derived estimates.
//! * [`trignorms`]: Rudin–Shapiro signs, `L^p` norms of trigonometric
//!   polynomials and the unconditionality ratio.

pub mod circle;
pub mod error;
pub mod logkernel;
pub mod orlicz;
pub mod trignorms;

pub use error::{Error, Result};
