//! Dense numerical kernels: matrix exponential, symmetric eigendecomposition,
//! Lyapunov/Stein solvers and Gauss-Legendre quadrature.
//!
//! Everything here works on `nalgebra` dynamic matrices and is a pure
//! function of its inputs.

mod eig;
mod expm;
mod lyapunov;
mod quadrature;

pub use eig::{sym_eig, SymmetricSpectrum};
pub use expm::mat_exp;
pub use lyapunov::{solve_continuous_lyapunov, solve_discrete_stein};
pub use quadrature::{gauss_legendre, panel_rule};

use nalgebra::DMatrix;

use crate::{Error, Result};

/// `(M + M^T) / 2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub(crate) fn ensure_square(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Err(Error::Dimension(format!("{what} must be at least 1x1")));
    }
    Ok(())
}

pub(crate) fn ensure_finite(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::Value(format!("{what} contains non-finite entries")));
    }
    Ok(())
}

/// Maximum absolute column sum; the operator 1-norm.
pub(crate) fn norm_1(m: &DMatrix<f64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
