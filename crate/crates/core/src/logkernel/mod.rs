//! Fourier multiplier `K̂_Ω(ξ) = ∫ Ω(θ) log(1/|⟨ξ,θ⟩|) dθ` of rough kernels
//! with piecewise-constant `Ω`, its majorant `m(Ω)`, and the estimates built
//! on them.

mod clausen;
mod estimates;
mod integral;
mod kernel;
pub mod quadrature;

pub use clausen::clausen2;
pub use estimates::{
    atom_decay_constant, circle_grid, d_delta, grid_oscillation, pair_difference_constant,
    profile, profile_serial, window_grid, DDelta, KernelProfile,
};
pub use integral::{arc_log_integral, Method, TINY_ARC};
pub use kernel::{khat, m_eval, solve_c};
