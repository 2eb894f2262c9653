//! Default tolerances and sizes used across the crate.
//!
//! Every threshold that influences a verdict (rank, stability, truncation)
//! is a named constant here; functions that expose a tolerance parameter
//! document which constant they default to.

/// Relative cutoff for numerical rank decisions (singular values or
/// eigenvalues below `RANK_REL_TOL * largest` count as zero).
pub const RANK_REL_TOL: f64 = 1e-9;

/// Margin for stability checks: continuous systems need every eigenvalue
/// real part below `-STABILITY_TOL`, discrete systems a spectral radius
/// below `1 - STABILITY_TOL`.
pub const STABILITY_TOL: f64 = 1e-9;

/// Accepted relative asymmetry of inputs to the symmetric eigensolver.
pub const SYMMETRY_REL_TOL: f64 = 1e-8;

/// Residual target for Lyapunov/Stein solutions, relative to `max(1, ||Q||_F)`.
pub const RESIDUAL_REL_TOL: f64 = 1e-10;

/// Largest Gramian condition number accepted when inverting for control
/// synthesis.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Share of the optimal-control energy the basis projection must capture:
/// `sum b_i^2 >= (1 - ENERGY_CAPTURE_REL) * cost`.
pub const ENERGY_CAPTURE_REL: f64 = 1e-10;

/// Hard cap on the basis size when growing it to meet the capture target.
pub const MAX_BASIS_SIZE: usize = 512;

/// Default polynomial degrees per input channel for generated frames.
pub const BASIS_DEGREES: usize = 32;

/// Frames whose tail estimate exceeds `TAIL_REL_LIMIT * trace(G)` are
/// considered too coarse for downstream use.
pub const TAIL_REL_LIMIT: f64 = 1e-4;

/// Relative strictness margin used when turning the tightness measure into
/// a reachable-dimension bound.
pub const ETA_RANK_REL_TOL: f64 = 1e-9;

/// Number of random mass transfers the feasible-spectrum sampler applies.
pub const SAMPLER_TRANSFERS: usize = 50;

/// Default panel count for the quadrature evaluation of the finite-horizon
/// Gramian (the cross-check route; panels grow with `||A|| * T`).
pub const QUADRATURE_PANELS: usize = 64;

/// Default Gauss-Legendre order per quadrature panel.
pub const QUADRATURE_ORDER: usize = 12;
