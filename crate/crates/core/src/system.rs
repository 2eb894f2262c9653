//! The LTI system model: reachability, the end-point map, forward
//! simulation, and minimum-energy control synthesis.
//!
//! Controls are represented by their coefficients over an explicit
//! orthonormal basis of the control space, so control energies are plain
//! sums of squared coefficients and the end-point map of a represented
//! control coincides with the synthesis of the generated frame.

use nalgebra::{DMatrix, DVector};

use crate::frames::{generate_frame, OrthonormalBasis};
use crate::gramian::finite_horizon_gramian;
use crate::linalg::mat_exp;
use crate::parallel;
use crate::{defaults, Error, Result};

/// Continuous flow or discrete recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum TimeMode {
    Continuous,
    Discrete,
}

/// The system `x' = A x + B u` (or `x(t+1) = A x(t) + B u(t)`).
#[derive(Debug, Clone)]
pub struct LtiSystem {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    time_mode: TimeMode,
}

impl LtiSystem {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, time_mode: TimeMode) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "state matrix must be square and non-empty, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.nrows() != a.nrows() || b.ncols() == 0 {
            return Err(Error::Dimension(format!(
                "input matrix must be {}xm with m >= 1, got {}x{}",
                a.nrows(),
                b.nrows(),
                b.ncols()
            )));
        }
        if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Value("system matrices must be finite".into()));
        }
        Ok(Self { a, b, time_mode })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn time_mode(&self) -> TimeMode {
        self.time_mode
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.b.ncols()
    }
}

/// A control represented by coefficients over an orthonormal basis;
/// coefficient `i` is the inner product of the control with basis
/// element `i`.
#[derive(Debug, Clone)]
pub struct ControlSignal {
    basis: OrthonormalBasis,
    coefficients: DVector<f64>,
}

impl ControlSignal {
    pub fn new(basis: OrthonormalBasis, coefficients: DVector<f64>) -> Result<Self> {
        if coefficients.len() != basis.len() {
            return Err(Error::Dimension(format!(
                "basis has {} elements but {} coefficients were given",
                basis.len(),
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|x| !x.is_finite()) {
            return Err(Error::Value("control coefficients must be finite".into()));
        }
        Ok(Self {
            basis,
            coefficients,
        })
    }

    /// The zero control on the given basis.
    pub fn zero(basis: OrthonormalBasis) -> Self {
        let n = basis.len();
        Self {
            basis,
            coefficients: DVector::zeros(n),
        }
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn coefficients(&self) -> &DVector<f64> {
        &self.coefficients
    }

    pub fn horizon(&self) -> f64 {
        self.basis.horizon()
    }

    /// Squared control-space norm; by orthonormality this is exactly the
    /// sum of squared coefficients.
    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|b| b * b).sum()
    }

    /// Render the control value `u(t)`.
    pub fn eval(&self, t: f64) -> DVector<f64> {
        let m = self.basis.channels();
        let phis = self.basis.eval_degrees(t);
        let mut u = DVector::zeros(m);
        for (k, phi) in phis.iter().enumerate() {
            for c in 0..m {
                u[c] += self.coefficients[k * m + c] * phi;
            }
        }
        u
    }
}

/// States along a simulated trajectory; `times` starts at 0 and ends at
/// the horizon.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DVector<f64>>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DVector<f64>] {
        &self.states
    }

    pub fn final_state(&self) -> &DVector<f64> {
        self.states.last().expect("trajectory is never empty")
    }
}

/// The reachability matrix `[B, AB, ..., A^{n-1} B]`.
pub fn reachability_matrix(sys: &LtiSystem) -> DMatrix<f64> {
    let n = sys.state_dim();
    let m = sys.input_dim();
    let mut k = DMatrix::<f64>::zeros(n, n * m);
    let mut power_b = sys.b().clone();
    for block in 0..n {
        k.view_mut((0, block * m), (n, m)).copy_from(&power_b);
        if block + 1 < n {
            power_b = sys.a() * power_b;
        }
    }
    k
}

/// Numerical rank of the reachability matrix: singular values above
/// `rel_tol` times the largest. The system is controllable exactly when
/// this equals the state dimension.
pub fn controllability_rank(sys: &LtiSystem, rel_tol: f64) -> usize {
    let k = reachability_matrix(sys);
    let svals = k.svd(false, false).singular_values;
    let max = svals.iter().fold(0.0f64, |m, s| m.max(*s));
    if max <= 0.0 {
        return 0;
    }
    svals.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Quadrature grid used for end-point and frame integrals: enough panels
/// to keep `||A|| * width` small and an order comfortably above the
/// polynomial degree of the basis.
fn endpoint_grid(sys: &LtiSystem, t: f64, degrees: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let panels = ((sys.a().norm() * t / 2.0).ceil() as usize).max(1);
    let order = (degrees + 12).max(32);
    crate::linalg::panel_rule(order, 0.0, t, panels)
}

/// The state reached from the origin at the control's horizon:
/// `L_T(u) = int_0^T e^{(T - t) A} B u(t) dt`.
pub fn endpoint_map(sys: &LtiSystem, u: &ControlSignal) -> Result<DVector<f64>> {
    if sys.time_mode() != TimeMode::Continuous {
        return Err(Error::UnsupportedMode("end-point map"));
    }
    if sys.input_dim() != u.basis().channels() {
        return Err(Error::Dimension(format!(
            "system has {} inputs but the control basis has {} channels",
            sys.input_dim(),
            u.basis().channels()
        )));
    }
    let t = u.horizon();

    // Substituting s = T - t turns the integrand into e^{sA} B u(T - s).
    let (nodes, weights) = endpoint_grid(sys, t, u.basis().degrees())?;
    let terms = parallel::try_par_map(&nodes, |s| {
        let e = mat_exp(&(sys.a() * *s))?;
        Ok(e * (sys.b() * u.eval(t - s)))
    })?;

    let mut x = DVector::zeros(sys.state_dim());
    for (term, w) in terms.iter().zip(&weights) {
        x += term * *w;
    }
    Ok(x)
}

/// Classical fixed-step fourth-order integration of `x' = A x + B u(t)`
/// from `x0` over the control's horizon.
///
/// The final state converges to `endpoint_map(sys, u) + e^{TA} x0` at
/// fourth order in the step size.
pub fn simulate(
    sys: &LtiSystem,
    u: &ControlSignal,
    x0: &DVector<f64>,
    steps: usize,
) -> Result<Trajectory> {
    if sys.time_mode() != TimeMode::Continuous {
        return Err(Error::UnsupportedMode("fixed-step continuous simulation"));
    }
    if steps == 0 {
        return Err(Error::Value("simulation needs at least one step".into()));
    }
    if x0.len() != sys.state_dim() {
        return Err(Error::Dimension(format!(
            "initial state has length {} but the system has dimension {}",
            x0.len(),
            sys.state_dim()
        )));
    }
    if sys.input_dim() != u.basis().channels() {
        return Err(Error::Dimension(
            "control channels do not match the system inputs".into(),
        ));
    }

    let t_final = u.horizon();
    let h = t_final / steps as f64;
    let deriv = |t: f64, x: &DVector<f64>| sys.a() * x + sys.b() * u.eval(t);

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x0.clone());

    let mut x = x0.clone();
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = deriv(t, &x);
        let k2 = deriv(t + 0.5 * h, &(&x + &k1 * (0.5 * h)));
        let k3 = deriv(t + 0.5 * h, &(&x + &k2 * (0.5 * h)));
        let k4 = deriv(t + h, &(&x + &k3 * h));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        times.push((i + 1) as f64 * h);
        states.push(x.clone());
    }
    Ok(Trajectory { times, states })
}

/// Minimum-energy control steering the origin to `x` at time `t`, with its
/// optimal cost `<x, G^{-1} x>`.
///
/// The optimal control `B^T e^{(T - t) A^T} G^{-1} x` is projected onto the
/// given basis; if the projection captures less than `1 - 1e-10` of the
/// optimal energy the basis degree count is doubled, up to
/// [`defaults::MAX_BASIS_SIZE`] total elements.
pub fn min_energy_control(
    sys: &LtiSystem,
    t: f64,
    x: &DVector<f64>,
    basis: &OrthonormalBasis,
) -> Result<(ControlSignal, f64)> {
    if sys.time_mode() != TimeMode::Continuous {
        return Err(Error::UnsupportedMode("minimum-energy synthesis"));
    }
    if x.len() != sys.state_dim() {
        return Err(Error::Dimension(format!(
            "target has length {} but the system has dimension {}",
            x.len(),
            sys.state_dim()
        )));
    }
    if basis.channels() != sys.input_dim() {
        return Err(Error::Dimension(
            "basis channels do not match the system inputs".into(),
        ));
    }
    if (basis.horizon() - t).abs() > 1e-12 * t.abs().max(1.0) {
        return Err(Error::Value(format!(
            "basis horizon {} does not match the requested horizon {t}",
            basis.horizon()
        )));
    }

    let gramian = finite_horizon_gramian(sys, t)?;
    let spectrum = gramian.spectrum()?;
    let weight = spectrum.solve_pd(x, defaults::CONDITION_LIMIT)?;
    let cost = x.dot(&weight);

    if cost <= 0.0 {
        // Zero target: the zero control is optimal.
        return Ok((ControlSignal::zero(basis.clone()), 0.0));
    }

    // The coefficient of the optimal control on basis element i is exactly
    // <v_i, G^{-1} x> with v_i the generated frame vector.
    let mut degrees = basis.degrees();
    loop {
        let trial = basis.with_degrees(degrees)?;
        let frame = generate_frame(sys, t, &trial)?;
        let coefficients =
            DVector::from_iterator(frame.len(), frame.vectors().iter().map(|v| v.dot(&weight)));
        let captured: f64 = coefficients.iter().map(|b| b * b).sum();
        if captured >= (1.0 - defaults::ENERGY_CAPTURE_REL) * cost {
            return Ok((ControlSignal::new(trial, coefficients)?, cost));
        }
        let next = degrees * 2;
        if next * basis.channels() > defaults::MAX_BASIS_SIZE {
            return Err(Error::TruncationFailed {
                captured,
                required: (1.0 - defaults::ENERGY_CAPTURE_REL) * cost,
                basis_len: degrees * basis.channels(),
            });
        }
        degrees = next;
    }
}
