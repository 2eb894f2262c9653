//! Scalar measures of how controllable a system is.
//!
//! Three classical measures come from the minimum-energy transfer problem:
//! the trace of the inverse Gramian (average effort over random unit
//! targets), the inverse smallest eigenvalue (worst-case effort), and the
//! determinant (reachable-ellipsoid volume). All three are undefined or
//! degenerate on uncontrollable systems. The fourth measure,
//! `eta = trace(G) / sqrt(trace(G^2))`, is the cosine-type alignment of
//! the Gramian with the identity; it is maximal (`sqrt(n)`) exactly when
//! the generated frame is tight, stays defined for singular Gramians, and
//! lower-bounds the reachable dimension through `eta^2`.

use nalgebra::{DMatrix, DVector};

use crate::gramian::{
    discrete_finite_gramian, finite_horizon_gramian, infinite_horizon_gramian, Gramian, Horizon,
};
use crate::parallel;
use crate::system::{controllability_rank, LtiSystem, TimeMode};
use crate::{defaults, Error, Result};

/// Everything the analysis produces for one system and horizon.
///
/// The classical measures are `None` exactly when the Gramian has
/// numerical rank below the dimension; `eta` is defined whenever the
/// Gramian is nonzero. The spectrum (non-increasing, roundoff negatives
/// clamped) is carried as diagnostics.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MoqReport {
    pub trace_inverse: Option<f64>,
    pub min_eig_inverse: Option<f64>,
    pub determinant: f64,
    pub eta: f64,
    pub tightness_ratio: f64,
    pub rank_lower_bound: usize,
    pub gramian_rank: usize,
    pub controllable: bool,
    pub spectrum: Vec<f64>,
}

fn full_rank_eigenvalues(g: &Gramian) -> Result<DVector<f64>> {
    let spectrum = g.spectrum()?;
    let rank = spectrum.rank(defaults::RANK_REL_TOL);
    if rank < g.dim() {
        return Err(Error::UndefinedMoq {
            rank,
            dim: g.dim(),
        });
    }
    Ok(spectrum.eigenvalues)
}

/// `trace(G^{-1})`: proportional to the average minimum transfer energy
/// over uniformly random unit targets. Undefined on singular Gramians.
pub fn trace_inverse_moq(g: &Gramian) -> Result<f64> {
    Ok(full_rank_eigenvalues(g)?.iter().map(|l| 1.0 / l).sum())
}

/// `1 / lambda_min(G)`: the worst-case minimum transfer energy over unit
/// targets. Undefined on singular Gramians.
pub fn min_eig_inverse_moq(g: &Gramian) -> Result<f64> {
    let eigenvalues = full_rank_eigenvalues(g)?;
    Ok(1.0 / eigenvalues[eigenvalues.len() - 1])
}

/// `det(G)`: proportional to the squared volume of the unit-energy
/// reachable ellipsoid; zero signals uncontrollability.
pub fn det_moq(g: &Gramian) -> Result<f64> {
    Ok(g.spectrum()?.clamped_eigenvalues().iter().product())
}

/// The tightness measure `eta = trace(G) / sqrt(trace(G^2))`.
///
/// Equals `1 / sqrt(NFP)` of any frame whose frame operator is `G`, is at
/// most `sqrt(n)` with equality exactly for multiples of the identity, and
/// stays defined for singular (but nonzero) Gramians.
pub fn frame_theoretic_moq(g: &Gramian) -> Result<f64> {
    let trace_sq = g.trace_of_square();
    if trace_sq <= 0.0 {
        return Err(Error::Value(
            "tightness measure is undefined for the zero Gramian".into(),
        ));
    }
    Ok(g.trace() / trace_sq.sqrt())
}

/// Guaranteed lower bound on the reachable-subspace dimension implied by
/// `eta`: the largest `d` with `d < eta^2 - tol`, plus one; zero when
/// `eta^2 <= tol`.
///
/// `tol` guards the strict inequality; callers default it to
/// [`defaults::ETA_RANK_REL_TOL`] relative to `eta^2`. Any `eta` above
/// `sqrt(n - 1)` certifies controllability.
pub fn rank_lower_bound_from_eta(eta: f64, tol: f64) -> usize {
    let eta_sq = eta * eta;
    if eta_sq <= tol {
        return 0;
    }
    (eta_sq - tol).ceil() as usize
}

/// Build the Gramian the report needs for the given horizon.
pub fn gramian_for(sys: &LtiSystem, horizon: Horizon) -> Result<Gramian> {
    match (sys.time_mode(), horizon) {
        (TimeMode::Continuous, Horizon::Finite(t)) => finite_horizon_gramian(sys, t),
        (TimeMode::Discrete, Horizon::Finite(t)) => {
            let steps = t.round();
            if !(t.is_finite() && t >= 1.0 && (t - steps).abs() <= 1e-9) {
                return Err(Error::Value(format!(
                    "discrete horizon must be a positive integer step count, got {t}"
                )));
            }
            discrete_finite_gramian(sys, steps as usize)
        }
        (_, Horizon::Infinite) => infinite_horizon_gramian(sys),
    }
}

/// Compute the Gramian once and derive every report field from it.
pub fn full_report(sys: &LtiSystem, horizon: Horizon) -> Result<MoqReport> {
    full_report_with(sys, horizon, defaults::RANK_REL_TOL)
}

/// [`full_report`] with an explicit relative rank tolerance governing the
/// numerical-rank and controllability decisions.
pub fn full_report_with(sys: &LtiSystem, horizon: Horizon, rank_rel_tol: f64) -> Result<MoqReport> {
    let gramian = gramian_for(sys, horizon)?;
    report_from_gramian_with(sys, &gramian, rank_rel_tol)
}

/// Report fields for an already-computed Gramian of `sys`.
pub fn report_from_gramian(sys: &LtiSystem, gramian: &Gramian) -> Result<MoqReport> {
    report_from_gramian_with(sys, gramian, defaults::RANK_REL_TOL)
}

fn report_from_gramian_with(
    sys: &LtiSystem,
    gramian: &Gramian,
    rank_rel_tol: f64,
) -> Result<MoqReport> {
    let n = gramian.dim();
    let spectrum = gramian.spectrum()?;
    let clamped = spectrum.clamped_eigenvalues();
    let gramian_rank = spectrum.rank(rank_rel_tol);

    let (trace_inverse, min_eig_inverse) = if gramian_rank == n {
        (
            Some(spectrum.eigenvalues.iter().map(|l| 1.0 / l).sum()),
            Some(1.0 / spectrum.eigenvalues[n - 1]),
        )
    } else {
        (None, None)
    };
    let determinant = clamped.iter().product();
    let eta = frame_theoretic_moq(gramian)?;

    Ok(MoqReport {
        trace_inverse,
        min_eig_inverse,
        determinant,
        eta,
        tightness_ratio: eta / (n as f64).sqrt(),
        rank_lower_bound: rank_lower_bound_from_eta(eta, defaults::ETA_RANK_REL_TOL * eta * eta)
            .min(n),
        gramian_rank,
        controllable: controllability_rank(sys, rank_rel_tol) == n,
        spectrum: clamped.iter().copied().collect(),
    })
}

/// One row of a horizon sweep; the column order is fixed.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SweepRow {
    pub horizon: f64,
    pub eta: f64,
    pub trace_inverse: Option<f64>,
    pub min_eig_inverse: Option<f64>,
    pub determinant: f64,
    pub gramian_rank: usize,
}

/// Evaluate the report at every horizon; items are independent and run in
/// parallel under the `parallel` feature, with per-horizon results
/// identical to the sequential ones.
pub fn horizon_sweep(sys: &LtiSystem, horizons: &[f64]) -> Result<Vec<SweepRow>> {
    horizon_sweep_with(sys, horizons, defaults::RANK_REL_TOL)
}

/// [`horizon_sweep`] with an explicit relative rank tolerance.
pub fn horizon_sweep_with(
    sys: &LtiSystem,
    horizons: &[f64],
    rank_rel_tol: f64,
) -> Result<Vec<SweepRow>> {
    parallel::try_par_map(horizons, |&t| {
        let report = full_report_with(sys, Horizon::Finite(t), rank_rel_tol)?;
        Ok(SweepRow {
            horizon: t,
            eta: report.eta,
            trace_inverse: report.trace_inverse,
            min_eig_inverse: report.min_eig_inverse,
            determinant: report.determinant,
            gramian_rank: report.gramian_rank,
        })
    })
}

/// One greedy pick: which candidate was added and the tightness measure of
/// the Gramian accumulated so far.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SelectionStep {
    pub index: usize,
    pub eta: f64,
}

fn eta_of_matrix(g: &DMatrix<f64>) -> f64 {
    let trace_sq: f64 = g.iter().map(|x| x * x).sum();
    if trace_sq <= 0.0 {
        0.0
    } else {
        g.trace() / trace_sq.sqrt()
    }
}

/// Greedy actuator selection: starting from an empty input matrix, add `k`
/// candidate columns, each step taking the candidate that maximizes the
/// tightness measure of the accumulated Gramian (ties to the lowest
/// index).
///
/// Column Gramians add, so each candidate's Gramian is computed once and
/// greedy steps only sum matrices. Candidate scoring within a step runs in
/// parallel; the winner is picked by a sequential scan in index order, so
/// the outcome does not depend on evaluation order. No optimality
/// guarantee is claimed for the greedy sequence.
pub fn select_actuators(
    a: &DMatrix<f64>,
    candidates: &[DVector<f64>],
    k: usize,
    horizon: Horizon,
) -> Result<Vec<SelectionStep>> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::Dimension("state matrix must be square".into()));
    }
    let n = a.nrows();
    if candidates.is_empty() {
        return Err(Error::Value("candidate list is empty".into()));
    }
    for (i, c) in candidates.iter().enumerate() {
        if c.len() != n {
            return Err(Error::Dimension(format!(
                "candidate {i} has length {} but the state dimension is {n}",
                c.len()
            )));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::Value(format!("candidate {i} has non-finite entries")));
        }
    }
    if candidates.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::Value("all candidate columns are zero".into()));
    }
    if k > candidates.len() {
        return Err(Error::Value(format!(
            "cannot select {k} of {} candidates",
            candidates.len()
        )));
    }
    if let Horizon::Finite(t) = horizon {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Value(format!("horizon must be positive, got {t}")));
        }
    }

    // Per-candidate Gramians; the Gramian of any column subset is their sum.
    let column_gramians = parallel::try_par_map(candidates, |c| {
        let b = DMatrix::from_column_slice(n, 1, c.as_slice());
        let sys = LtiSystem::new(a.clone(), b, TimeMode::Continuous)?;
        let g = match horizon {
            Horizon::Finite(t) => finite_horizon_gramian(&sys, t)?,
            Horizon::Infinite => infinite_horizon_gramian(&sys)?,
        };
        Ok(g.matrix().clone())
    })?;

    let mut picked = vec![false; candidates.len()];
    let mut accumulated = DMatrix::<f64>::zeros(n, n);
    let mut steps = Vec::with_capacity(k);
    for _ in 0..k {
        let open: Vec<usize> = (0..candidates.len()).filter(|&i| !picked[i]).collect();
        let scores = parallel::par_map(&open, |&i| {
            eta_of_matrix(&(&accumulated + &column_gramians[i]))
        });
        let mut best = 0;
        for (pos, score) in scores.iter().enumerate() {
            if *score > scores[best] {
                best = pos;
            }
        }
        let index = open[best];
        accumulated += &column_gramians[index];
        steps.push(SelectionStep {
            index,
            eta: scores[best],
        });
        picked[index] = true;
    }
    Ok(steps)
}
