//! Shared helpers for the integration suites: seeded random systems and a
//! pass/fail wrapper for the acceptance criteria.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ctrlqual::gramian::finite_horizon_gramian;
use ctrlqual::system::controllability_rank;
use ctrlqual::{defaults, LtiSystem, TimeMode};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_vector(rng: &mut impl Rng, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_system(rng: &mut impl Rng, n: usize, m: usize) -> LtiSystem {
    LtiSystem::new(
        random_matrix(rng, n, n),
        random_matrix(rng, n, m),
        TimeMode::Continuous,
    )
    .unwrap()
}

/// Entries in [-1, 1], resampled until the Kalman rank is full.
pub fn random_controllable_system(rng: &mut impl Rng, n: usize, m: usize) -> LtiSystem {
    loop {
        let sys = random_system(rng, n, m);
        if controllability_rank(&sys, defaults::RANK_REL_TOL) == n {
            return sys;
        }
    }
}

/// Controllable and with a unit-horizon Gramian condition number below
/// `cond_limit`, so inversion-based checks are numerically meaningful.
pub fn random_well_conditioned_system(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
    cond_limit: f64,
) -> LtiSystem {
    for _ in 0..100_000 {
        let sys = random_controllable_system(rng, n, m);
        let spectrum = finite_horizon_gramian(&sys, 1.0)
            .unwrap()
            .spectrum()
            .unwrap();
        if spectrum.condition_number() <= cond_limit {
            return sys;
        }
    }
    panic!("no system with Gramian condition number <= {cond_limit} in 100000 draws (n = {n}, m = {m})");
}

/// Random matrix shifted to put the rightmost eigenvalue at `-margin`.
pub fn random_hurwitz(rng: &mut impl Rng, n: usize, margin: f64) -> DMatrix<f64> {
    let m = random_matrix(rng, n, n);
    let max_re = m
        .complex_eigenvalues()
        .iter()
        .map(|e| e.re)
        .fold(f64::NEG_INFINITY, f64::max);
    m - DMatrix::<f64>::identity(n, n) * (max_re + margin)
}

/// Random matrix rescaled to the given spectral radius.
pub fn random_schur_stable(rng: &mut impl Rng, n: usize, radius: f64) -> DMatrix<f64> {
    let m = random_matrix(rng, n, n);
    let rho = m
        .complex_eigenvalues()
        .iter()
        .map(|e| e.norm())
        .fold(0.0f64, f64::max);
    m * (radius / rho.max(1e-12))
}

pub fn double_integrator() -> LtiSystem {
    LtiSystem::new(
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
        DMatrix::from_row_slice(2, 1, &[0.0, 1.0]),
        TimeMode::Continuous,
    )
    .unwrap()
}

/// Run one acceptance criterion, printing a single pass/fail line.
pub fn criterion(number: u32, description: &str, check: impl FnOnce() + std::panic::UnwindSafe) {
    match std::panic::catch_unwind(check) {
        Ok(()) => println!("criterion {number:2} PASS  {description}"),
        Err(cause) => {
            println!("criterion {number:2} FAIL  {description}");
            std::panic::resume_unwind(cause);
        }
    }
}
