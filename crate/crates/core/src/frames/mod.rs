//! Frames on the state space.
//!
//! Feeding each element of an orthonormal basis of the control space
//! through the end-point map yields a square-summable family of state
//! vectors; that family spans the reachable subspace and is a frame of the
//! whole state space exactly when the system is controllable. This module
//! materializes a truncation of the family, its analysis/synthesis/frame
//! operators, frame bounds, the normalized frame potential, and the
//! majorization machinery used to sample realizable frame-operator
//! spectra.

mod basis;
mod majorization;

pub use basis::{build_basis, OrthonormalBasis};
pub use majorization::{check_alpha_conditions, majorizes, sample_feasible_spectrum};

use nalgebra::{DMatrix, DVector};

use crate::gramian::finite_horizon_gramian;
use crate::linalg::{mat_exp, panel_rule, sym_eig, symmetrize};
use crate::parallel;
use crate::system::{LtiSystem, TimeMode};
use crate::{Error, Result};

/// A truncated generated frame: vectors `v_i`, their squared norms, and a
/// certificate for the discarded tail.
///
/// The full generated family is countably infinite but square-summable
/// with total squared norm `trace(G)`; the tail bound is that trace minus
/// the captured part, so it is computable without ever touching the
/// discarded vectors. Finite synthetic families carry a zero tail.
#[derive(Debug, Clone)]
pub struct GeneratedFrame {
    vectors: Vec<DVector<f64>>,
    alphas: Vec<f64>,
    horizon: f64,
    tail_bound: f64,
}

impl GeneratedFrame {
    /// Wrap an explicit finite family of vectors (tail bound zero, horizon
    /// zero because no generation horizon exists).
    pub fn from_vectors(vectors: Vec<DVector<f64>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Value("a frame needs at least one vector".into()));
        }
        let dim = vectors[0].len();
        if dim == 0 {
            return Err(Error::Dimension("frame vectors must be non-empty".into()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Dimension(format!(
                    "vector {i} has length {} but the first has {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Value(format!("vector {i} has non-finite entries")));
            }
        }
        let alphas = vectors.iter().map(|v| v.norm_squared()).collect();
        Ok(Self {
            vectors,
            alphas,
            horizon: 0.0,
            tail_bound: 0.0,
        })
    }

    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    /// Squared norms `<v_i, v_i>`, in enumeration order.
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Upper estimate of the squared norm mass beyond the truncation.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// State-space dimension the vectors live in.
    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    /// Fails when the tail exceeds `rel_limit` times the captured-plus-tail
    /// total, i.e. when the truncation is too coarse to stand in for the
    /// full family.
    pub fn ensure_tail_certified(&self, rel_limit: f64) -> Result<()> {
        let total = self.alphas.iter().sum::<f64>() + self.tail_bound;
        if self.tail_bound > rel_limit * total {
            return Err(Error::Value(format!(
                "frame tail bound {:.3e} exceeds {rel_limit:.1e} of the total {total:.3e}",
                self.tail_bound
            )));
        }
        Ok(())
    }
}

/// Push every basis element through the end-point map:
/// `v_i = int_0^T e^{(T-s)A} B phi_i(s) ds`, evaluated on a shared
/// quadrature grid with one matrix exponential per node.
pub fn generate_frame(
    sys: &LtiSystem,
    t: f64,
    basis: &OrthonormalBasis,
) -> Result<GeneratedFrame> {
    if sys.time_mode() != TimeMode::Continuous {
        return Err(Error::UnsupportedMode("frame generation"));
    }
    if (basis.horizon() - t).abs() > 1e-12 * t.abs().max(1.0) {
        return Err(Error::Value(format!(
            "basis horizon {} does not match the requested horizon {t}",
            basis.horizon()
        )));
    }
    if basis.channels() != sys.input_dim() {
        return Err(Error::Dimension(format!(
            "basis has {} channels but the system has {} inputs",
            basis.channels(),
            sys.input_dim()
        )));
    }

    let a = sys.a();
    let b = sys.b();
    let n = sys.state_dim();
    let m = sys.input_dim();
    let d = basis.degrees();

    let panels = ((a.norm() * t / 2.0).ceil() as usize).max(1);
    let order = (d + 12).max(32);
    let (nodes, weights) = panel_rule(order, 0.0, t, panels)?;

    // Per node s (after substituting s = T - tau): e^{sA} B and the
    // polynomial factors at tau = T - s.
    let per_node = parallel::try_par_map(&nodes, |s| {
        let eb = mat_exp(&(a * *s))? * b;
        let phis = basis.eval_degrees(t - s);
        Ok((eb, phis))
    })?;

    let mut vectors = vec![DVector::<f64>::zeros(n); basis.len()];
    for ((eb, phis), w) in per_node.iter().zip(&weights) {
        for (k, phi) in phis.iter().enumerate() {
            let scale = w * phi;
            for c in 0..m {
                vectors[k * m + c].axpy(scale, &eb.column(c), 1.0);
            }
        }
    }

    let alphas: Vec<f64> = vectors.iter().map(|v| v.norm_squared()).collect();
    let captured: f64 = alphas.iter().sum();
    // The trace comes from the exponential-formula Gramian, an evaluation
    // route independent of the quadrature above.
    let trace = finite_horizon_gramian(sys, t)?.trace();
    let tail_bound = (trace - captured).max(0.0);

    Ok(GeneratedFrame {
        vectors,
        alphas,
        horizon: t,
        tail_bound,
    })
}

/// The frame operator `sum_i v_i v_i^T`.
pub fn frame_operator(frame: &GeneratedFrame) -> DMatrix<f64> {
    let n = frame.dim();
    let mut g = DMatrix::<f64>::zeros(n, n);
    for v in frame.vectors() {
        g.ger(1.0, v, v, 1.0);
    }
    symmetrize(&g)
}

/// The analysis coefficients `(<v_i, v>)_i`.
pub fn analysis(frame: &GeneratedFrame, v: &DVector<f64>) -> Result<DVector<f64>> {
    if v.len() != frame.dim() {
        return Err(Error::Dimension(format!(
            "vector has length {} but the frame lives in dimension {}",
            v.len(),
            frame.dim()
        )));
    }
    Ok(DVector::from_iterator(
        frame.len(),
        frame.vectors().iter().map(|vi| vi.dot(v)),
    ))
}

/// The synthesis combination `sum_i beta_i v_i`.
pub fn synthesis(frame: &GeneratedFrame, beta: &DVector<f64>) -> Result<DVector<f64>> {
    if beta.len() != frame.len() {
        return Err(Error::Dimension(format!(
            "{} coefficients for a frame of {} vectors",
            beta.len(),
            frame.len()
        )));
    }
    let mut out = DVector::zeros(frame.dim());
    for (vi, b) in frame.vectors().iter().zip(beta.iter()) {
        out.axpy(*b, vi, 1.0);
    }
    Ok(out)
}

/// Extreme eigenvalues `(c, C)` of the frame operator. The family is a
/// frame of the full state space exactly when `c` clears the rank
/// tolerance.
pub fn frame_bounds(frame: &GeneratedFrame) -> Result<(f64, f64)> {
    let spectrum = sym_eig(&frame_operator(frame))?;
    let c = spectrum.eigenvalues[spectrum.dim() - 1];
    let upper = spectrum.eigenvalues[0];
    Ok((c, upper))
}

/// Normalized frame potential: the double sum of squared pairwise inner
/// products over the squared total norm, evaluated as
/// `trace(G^2) / trace(G)^2` through the frame operator.
pub fn nfp(frame: &GeneratedFrame) -> Result<f64> {
    let total: f64 = frame.alphas().iter().sum();
    if total <= 0.0 {
        return Err(Error::Value(
            "normalized frame potential is undefined for an all-zero frame".into(),
        ));
    }
    let g = frame_operator(frame);
    let trace = g.trace();
    let trace_sq: f64 = g.iter().map(|x| x * x).sum();
    Ok(trace_sq / (trace * trace))
}
