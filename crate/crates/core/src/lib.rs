//! Quantitative controllability analysis for linear time-invariant systems.
//!
//! The crate answers the question "how controllable is this system?" rather
//! than the binary "is it controllable?". It computes:
//!
//! * controllability Gramians over finite and infinite horizons, in
//!   continuous and discrete time ([`gramian`]),
//! * minimum-energy controls steering the state to a target, together with
//!   the exact transfer cost ([`system`]),
//! * the frame that a system induces on its state space through the
//!   end-point map, with frame bounds and the normalized frame potential
//!   ([`frames`]),
//! * four scalar quality measures derived from the Gramian spectrum,
//!   including a tightness measure that stays defined for uncontrollable
//!   systems, plus greedy actuator selection ([`moq`]).
//!
//! Dense numerical kernels (matrix exponential, symmetric eigensolver,
//! Lyapunov/Stein solvers, Gauss-Legendre rules) live in [`linalg`].
//!
//! Batch entry points (horizon sweeps, candidate scoring, quadrature-node
//! evaluation) run on rayon when the default `parallel` feature is enabled
//! and fall back to sequential iteration without it. Results are reduced in
//! index order either way, so outputs are identical across both modes and
//! across thread counts.

pub mod defaults;
mod error;
pub mod frames;
pub mod gramian;
pub mod linalg;
pub mod moq;
mod parallel;
pub mod system;

pub use error::{Error, Result};
pub use gramian::{Gramian, Horizon};
pub use system::{ControlSignal, LtiSystem, TimeMode, Trajectory};
