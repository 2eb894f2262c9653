//! Symmetric eigendecomposition with a fixed ordering convention.

use nalgebra::{DMatrix, DVector};

use super::{ensure_finite, ensure_square, symmetrize};
use crate::{defaults, Error, Result};

/// Spectrum of a symmetric matrix: eigenvalues sorted non-increasing and the
/// matching orthogonal eigenvector matrix (one eigenvector per column).
#[derive(Debug, Clone)]
pub struct SymmetricSpectrum {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SymmetricSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(lambda) V^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let v = &self.eigenvectors;
        v * DMatrix::from_diagonal(&self.eigenvalues) * v.transpose()
    }

    /// Eigenvalues with small negatives clamped to zero: anything at or above
    /// `-1e-10 * lambda_max_abs` becomes `max(lambda, 0)`, more negative
    /// values are kept as evidence of a genuinely indefinite input.
    pub fn clamped_eigenvalues(&self) -> DVector<f64> {
        let scale = self.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let floor = -1e-10 * scale;
        self.eigenvalues.map(|x| if x >= floor { x.max(0.0) } else { x })
    }

    /// Count of eigenvalues above `rel_tol * lambda_max` (after clamping).
    pub fn rank(&self, rel_tol: f64) -> usize {
        let clamped = self.clamped_eigenvalues();
        let max = clamped.iter().fold(0.0f64, |m, x| m.max(*x));
        if max <= 0.0 {
            return 0;
        }
        clamped.iter().filter(|&&x| x > rel_tol * max).count()
    }

    /// `lambda_max / lambda_min`; infinite when the smallest eigenvalue is
    /// not positive.
    pub fn condition_number(&self) -> f64 {
        let max = self.eigenvalues[0];
        let min = self.eigenvalues[self.dim() - 1];
        if min <= 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Solve `M y = x` through the decomposition. Fails when the condition
    /// number exceeds `cond_limit`, reporting the numerical rank.
    pub fn solve_pd(&self, x: &DVector<f64>, cond_limit: f64) -> Result<DVector<f64>> {
        if self.condition_number() > cond_limit {
            return Err(Error::UncontrollableTarget {
                rank: self.rank(defaults::RANK_REL_TOL),
                dim: self.dim(),
            });
        }
        let vt_x = self.eigenvectors.transpose() * x;
        let scaled = DVector::from_iterator(
            self.dim(),
            vt_x.iter().zip(self.eigenvalues.iter()).map(|(y, l)| y / l),
        );
        Ok(&self.eigenvectors * scaled)
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// The input may be asymmetric up to a relative Frobenius gap of `1e-8`
/// (it is symmetrized internally); anything worse is rejected.
pub fn sym_eig(s: &DMatrix<f64>) -> Result<SymmetricSpectrum> {
    ensure_square(s, "eigendecomposition input")?;
    ensure_finite(s, "eigendecomposition input")?;

    let norm = s.norm();
    if norm > 0.0 {
        let asym = (s - s.transpose()).norm() / norm;
        if asym > defaults::SYMMETRY_REL_TOL {
            return Err(Error::Asymmetric { relative: asym });
        }
    }

    let sym = symmetrize(s);
    let decomp = sym.symmetric_eigen();

    let n = decomp.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| decomp.eigenvalues[j].total_cmp(&decomp.eigenvalues[i]));

    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| decomp.eigenvalues[i]));
    let mut eigenvectors = DMatrix::<f64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &decomp.eigenvectors.column(src));
    }

    Ok(SymmetricSpectrum {
        eigenvalues,
        eigenvectors,
    })
}
