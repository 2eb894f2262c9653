//! Controllability Gramians over finite and infinite horizons.
//!
//! The continuous finite-horizon Gramian is evaluated through the
//! augmented block exponential: `exp([[-A, B B^T], [0, A^T]] h)` yields
//! `G_h` from its off-diagonal block. The base horizon `h` is `T` halved
//! until `||A|| h <= 1`, and the semigroup identity
//! `G_{2h} = G_h + e^{A h} G_h e^{A^T h}` doubles back up; that keeps every
//! intermediate exponential well-scaled even for stiff or strongly stable
//! `A` at long horizons. A composite Gauss-Legendre evaluation of the
//! defining integral is provided as an independent cross-check route.

use nalgebra::DMatrix;

use crate::linalg::{
    self, mat_exp, solve_continuous_lyapunov, solve_discrete_stein, sym_eig, symmetrize,
    SymmetricSpectrum,
};
use crate::parallel;
use crate::system::{LtiSystem, TimeMode};
use crate::{defaults, Error, Result};

/// Horizon of a Gramian: a positive time (continuous) or step count
/// (discrete), or the infinite-horizon limit.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Horizon {
    Finite(f64),
    Infinite,
}

/// A symmetric non-negative-definite Gramian together with the horizon and
/// time mode it was computed for.
#[derive(Debug, Clone)]
pub struct Gramian {
    matrix: DMatrix<f64>,
    horizon: Horizon,
    time_mode: TimeMode,
}

impl Gramian {
    /// Wrap an externally produced Gramian matrix. The matrix is
    /// symmetrized; a strongly asymmetric input is rejected.
    pub fn from_matrix(
        matrix: DMatrix<f64>,
        horizon: Horizon,
        time_mode: TimeMode,
    ) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "Gramian must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::Value("Gramian contains non-finite entries".into()));
        }
        let norm = matrix.norm();
        if norm > 0.0 {
            let asym = (&matrix - matrix.transpose()).norm() / norm;
            if asym > defaults::SYMMETRY_REL_TOL {
                return Err(Error::Asymmetric { relative: asym });
            }
        }
        Ok(Self {
            matrix: symmetrize(&matrix),
            horizon,
            time_mode,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn time_mode(&self) -> TimeMode {
        self.time_mode
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// `trace(G^2)`, which for a symmetric matrix is the squared Frobenius
    /// norm, i.e. the plain sum of squared entries.
    pub fn trace_of_square(&self) -> f64 {
        self.matrix.iter().map(|x| x * x).sum()
    }

    pub fn spectrum(&self) -> Result<SymmetricSpectrum> {
        sym_eig(&self.matrix)
    }

    /// Numerical rank: eigenvalues above `rel_tol` times the largest, after
    /// clamping roundoff negatives.
    pub fn rank(&self, rel_tol: f64) -> Result<usize> {
        Ok(self.spectrum()?.rank(rel_tol))
    }
}

/// `G = int_0^T e^{tA} B B^T e^{t A^T} dt` for a continuous-time system.
pub fn finite_horizon_gramian(sys: &LtiSystem, t: f64) -> Result<Gramian> {
    if sys.time_mode() != TimeMode::Continuous {
        return Err(Error::UnsupportedMode("finite-horizon integral Gramian"));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Value(format!("horizon must be positive, got {t}")));
    }

    let a = sys.a();
    let b = sys.b();
    let n = sys.state_dim();
    let bbt = b * b.transpose();

    // Halve the horizon until the augmented exponential is well-scaled.
    let scale = a.norm() * t;
    let doublings = if scale > 1.0 {
        (scale.log2().ceil() as u32).min(60)
    } else {
        0
    };
    let h = t / 2f64.powi(doublings as i32);

    let mut aug = DMatrix::<f64>::zeros(2 * n, 2 * n);
    aug.view_mut((0, 0), (n, n)).copy_from(&(-a * h));
    aug.view_mut((0, n), (n, n)).copy_from(&(&bbt * h));
    aug.view_mut((n, n), (n, n)).copy_from(&(a.transpose() * h));
    let f = mat_exp(&aug)?;

    let f12 = f.view((0, n), (n, n)).clone_owned();
    let f22 = f.view((n, n), (n, n)).clone_owned();
    let mut propagator = f22.transpose(); // e^{A h}
    let mut g = &propagator * f12;

    for _ in 0..doublings {
        g = &g + &propagator * &g * propagator.transpose();
        propagator = &propagator * &propagator;
    }

    Gramian::from_matrix(symmetrize(&g), Horizon::Finite(t), TimeMode::Continuous)
}

/// Quadrature route for the same integral: `panels` Gauss-Legendre panels
/// of order `order`, with the panel count grown as `||A|| T` grows. Kept
/// separate from [`finite_horizon_gramian`] so the two can cross-check each
/// other.
pub fn finite_horizon_gramian_quadrature(
    sys: &LtiSystem,
    t: f64,
    order: usize,
    panels: usize,
) -> Result<Gramian> {
    if sys.time_mode() != TimeMode::Continuous {
        return Err(Error::UnsupportedMode("finite-horizon integral Gramian"));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Value(format!("horizon must be positive, got {t}")));
    }

    let a = sys.a();
    let b = sys.b();
    let panels = panels.max((a.norm() * t / 2.0).ceil() as usize).max(1);
    let (nodes, weights) = linalg::panel_rule(order, 0.0, t, panels)?;

    let terms = parallel::try_par_map(&nodes, |s| {
        let eb = mat_exp(&(a * *s))? * b;
        Ok(&eb * eb.transpose())
    })?;
    let n = sys.state_dim();
    let mut g = DMatrix::<f64>::zeros(n, n);
    for (term, w) in terms.iter().zip(&weights) {
        g += term * *w;
    }
    Gramian::from_matrix(symmetrize(&g), Horizon::Finite(t), TimeMode::Continuous)
}

/// Infinite-horizon Gramian: the Lyapunov solution `A G + G A^T + B B^T = 0`
/// in continuous time (Hurwitz `A`), the Stein solution
/// `G - A G A^T = B B^T` in discrete time (spectral radius below one).
pub fn infinite_horizon_gramian(sys: &LtiSystem) -> Result<Gramian> {
    let bbt = sys.b() * sys.b().transpose();
    let matrix = match sys.time_mode() {
        TimeMode::Continuous => solve_continuous_lyapunov(sys.a(), &bbt)?,
        TimeMode::Discrete => solve_discrete_stein(sys.a(), &bbt)?,
    };
    Gramian::from_matrix(matrix, Horizon::Infinite, sys.time_mode())
}

/// `G = sum_{t=0}^{T-1} A^t B B^T (A^T)^t` for a discrete-time system,
/// evaluated through the recurrence `G_{k+1} = A G_k A^T + B B^T` with each
/// step symmetrized, so consecutive horizons satisfy the recurrence
/// bit-exactly.
pub fn discrete_finite_gramian(sys: &LtiSystem, steps: usize) -> Result<Gramian> {
    if sys.time_mode() != TimeMode::Discrete {
        return Err(Error::UnsupportedMode("discrete-sum Gramian"));
    }
    if steps == 0 {
        return Err(Error::Value("horizon must be at least one step".into()));
    }

    let a = sys.a();
    let b = sys.b();
    let bbt = b * b.transpose();
    let n = sys.state_dim();
    let mut g = DMatrix::<f64>::zeros(n, n);
    for _ in 0..steps {
        g = symmetrize(&(a * &g * a.transpose() + &bbt));
    }
    Gramian::from_matrix(g, Horizon::Finite(steps as f64), TimeMode::Discrete)
}
