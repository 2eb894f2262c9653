//! Cross-module properties: linearity and optimality of the synthesized
//! controls, integrator convergence order, square-summability bounds, and
//! the tightness characterization of the quality measure.

mod common;

use common::*;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

use ctrlqual::frames::{
    analysis, build_basis, frame_operator, generate_frame, majorizes, sample_feasible_spectrum,
    synthesis,
};
use ctrlqual::gramian::finite_horizon_gramian;
use ctrlqual::linalg::{gauss_legendre, mat_exp, sym_eig};
use ctrlqual::moq::frame_theoretic_moq;
use ctrlqual::system::{endpoint_map, min_energy_control, simulate, ControlSignal};
use ctrlqual::{defaults, TimeMode};

#[test]
fn endpoint_map_is_linear() {
    let mut rng = rng(101);
    for _ in 0..10 {
        let n = rng.random_range(1..4usize);
        let m = rng.random_range(1..3usize);
        let sys = random_system(&mut rng, n, m);
        let basis = build_basis(1.0, m, 6).unwrap();
        let b1 = random_vector(&mut rng, basis.len());
        let b2 = random_vector(&mut rng, basis.len());
        let (ca, cb) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));

        let u1 = ControlSignal::new(basis.clone(), b1.clone()).unwrap();
        let u2 = ControlSignal::new(basis.clone(), b2.clone()).unwrap();
        let combo = ControlSignal::new(basis.clone(), &b1 * ca + &b2 * cb).unwrap();

        let lhs = endpoint_map(&sys, &combo).unwrap();
        let rhs = endpoint_map(&sys, &u1).unwrap() * ca + endpoint_map(&sys, &u2).unwrap() * cb;
        let scale = lhs.norm().max(rhs.norm()).max(1.0);
        assert!((lhs - rhs).norm() <= 1e-10 * scale);
    }
}

#[test]
fn endpoint_map_agrees_with_frame_synthesis() {
    let mut rng = rng(102);
    for _ in 0..10 {
        let n = rng.random_range(1..4usize);
        let m = rng.random_range(1..3usize);
        let sys = random_system(&mut rng, n, m);
        let basis = build_basis(1.0, m, 8).unwrap();
        let beta = random_vector(&mut rng, basis.len());
        let u = ControlSignal::new(basis.clone(), beta.clone()).unwrap();

        let via_quadrature = endpoint_map(&sys, &u).unwrap();
        let frame = generate_frame(&sys, 1.0, &basis).unwrap();
        let via_synthesis = synthesis(&frame, &beta).unwrap();
        let scale = via_quadrature.norm().max(1.0);
        assert!((via_quadrature - via_synthesis).norm() <= 1e-10 * scale);
    }
}

/// Any control with the same endpoint costs at least the optimum: perturb
/// the optimal coefficients inside the null space of the synthesis map and
/// watch the energy only grow.
#[test]
fn minimum_energy_is_optimal_under_null_space_perturbations() {
    let mut rng = rng(103);
    for _ in 0..20 {
        let n = rng.random_range(2..7usize);
        let m = if n >= 4 { 2 } else { rng.random_range(1..3usize) };
        let sys = random_well_conditioned_system(&mut rng, n, m, 1e4);
        let target = random_vector(&mut rng, n);
        let basis = build_basis(1.0, m, defaults::BASIS_DEGREES).unwrap();

        let (control, cost) = min_energy_control(&sys, 1.0, &target, &basis).unwrap();
        let frame = generate_frame(&sys, 1.0, control.basis()).unwrap();

        // Project a random coefficient vector onto the kernel of the
        // synthesis map: delta = z - V^T (V V^T)^{-1} V z, applied twice to
        // wash out the solve roundoff.
        let op_spectrum = sym_eig(&frame_operator(&frame)).unwrap();
        let mut delta = random_vector(&mut rng, frame.len());
        for _ in 0..2 {
            let image = synthesis(&frame, &delta).unwrap();
            let correction = op_spectrum.solve_pd(&image, 1e12).unwrap();
            delta -= analysis(&frame, &correction).unwrap();
        }

        let residual = synthesis(&frame, &delta).unwrap();
        assert!(
            residual.norm() <= 1e-10 * delta.norm().max(1.0),
            "kernel projection failed: {}",
            residual.norm()
        );

        let perturbed = control.coefficients() + &delta;
        let perturbed_energy: f64 = perturbed.iter().map(|b| b * b).sum();
        assert!(
            perturbed_energy >= cost - 1e-8,
            "perturbed energy {perturbed_energy} fell below the optimum {cost}"
        );

        let endpoint = endpoint_map(
            &sys,
            &ControlSignal::new(control.basis().clone(), perturbed).unwrap(),
        )
        .unwrap();
        assert!((endpoint - &target).norm() <= 1e-6 * (1.0 + target.norm()));
    }
}

#[test]
fn simulation_converges_at_fourth_order() {
    let sys = ctrlqual::LtiSystem::new(
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -2.0, -1.0]),
        DMatrix::from_row_slice(2, 1, &[0.0, 1.0]),
        TimeMode::Continuous,
    )
    .unwrap();
    let basis = build_basis(2.0, 1, 6).unwrap();
    let mut rng = rng(104);
    let u = ControlSignal::new(basis, random_vector(&mut rng, 6) * 3.0).unwrap();
    let x0 = DVector::from_column_slice(&[1.0, -1.0]);

    let reference = endpoint_map(&sys, &u).unwrap() + mat_exp(&(sys.a() * 2.0)).unwrap() * &x0;

    let steps = [100usize, 200, 400, 800];
    let errors: Vec<f64> = steps
        .iter()
        .map(|&s| {
            let traj = simulate(&sys, &u, &x0, s).unwrap();
            (traj.final_state() - &reference).norm()
        })
        .collect();
    assert!(
        errors[3] > 1e-14,
        "error at the finest grid is at the floating-point floor; the fit is meaningless"
    );

    // Least-squares slope of ln(err) against ln(h).
    let xs: Vec<f64> = steps.iter().map(|&s| (2.0 / s as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let xm = xs.iter().sum::<f64>() / 4.0;
    let ym = ys.iter().sum::<f64>() / 4.0;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xm) * (y - ym))
        .sum::<f64>()
        / xs.iter().map(|x| (x - xm) * (x - xm)).sum::<f64>();
    assert!(slope >= 3.5, "observed order {slope}, errors {errors:?}");
}

#[test]
fn generated_family_is_square_summable_with_cauchy_schwarz_bound() {
    let mut rng = rng(105);
    for _ in 0..20 {
        let n = rng.random_range(1..5usize);
        let m = rng.random_range(1..3usize);
        let sys = random_system(&mut rng, n, m);
        let basis = build_basis(1.0, m, rng.random_range(4..16)).unwrap();
        let frame = generate_frame(&sys, 1.0, &basis).unwrap();

        let captured: f64 = frame.alphas().iter().sum();
        let trace = finite_horizon_gramian(&sys, 1.0).unwrap().trace();
        assert!(captured <= trace + 1e-10);
        // The raw tail (before clamping) stays above small negative noise.
        assert!(trace - captured >= -1e-10);

        for _ in 0..5 {
            let v = random_vector(&mut rng, n);
            let coeffs = analysis(&frame, &v).unwrap();
            let lhs: f64 = coeffs.iter().map(|c| c * c).sum();
            assert!(lhs <= captured * v.norm_squared() + 1e-10);
        }
    }
}

/// The quality measure touches its ceiling sqrt(n) exactly on Gramians
/// proportional to the identity.
#[test]
fn tightness_equality_characterization() {
    let mut rng = rng(106);
    let mut checked_tight = 0;
    for trial in 0..500 {
        let n = rng.random_range(1..7usize);
        let sys = if trial % 5 == 0 {
            // Skew-symmetric drift with orthogonal-scaled input: the flow is
            // an isometry, so the Gramian is an exact multiple of I.
            let raw = random_matrix(&mut rng, n, n);
            let skew = (&raw - raw.transpose()) * 0.5;
            let scale = rng.random_range(0.2..2.0);
            ctrlqual::LtiSystem::new(
                skew,
                DMatrix::identity(n, n) * scale,
                TimeMode::Continuous,
            )
            .unwrap()
        } else {
            let m = rng.random_range(1..3usize);
            random_system(&mut rng, n, m)
        };
        let g = finite_horizon_gramian(&sys, rng.random_range(0.5..2.0)).unwrap();
        let eta = frame_theoretic_moq(&g).unwrap();
        let root_n = (n as f64).sqrt();
        assert!(eta <= root_n + 1e-12, "eta {eta} above sqrt({n})");

        let trace = g.trace();
        let deviation =
            (g.matrix() - DMatrix::<f64>::identity(n, n) * (trace / n as f64)).norm();
        let is_tight_matrix = deviation <= 1e-8 * g.matrix().norm();
        let is_tight_eta = (eta - root_n).abs() <= 1e-10;
        assert_eq!(
            is_tight_eta, is_tight_matrix,
            "eta gap {} vs matrix deviation {}",
            (eta - root_n).abs(),
            deviation
        );
        if is_tight_eta {
            checked_tight += 1;
        }
    }
    assert!(checked_tight >= 50, "tight cases were not exercised");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exponential_inverse_pairs(entries in proptest::collection::vec(-1.0f64..1.0, 9)) {
        let m = DMatrix::from_row_slice(3, 3, &entries);
        let m = if m.norm() > 0.0 { &m * (5.0 / m.norm()) } else { m };
        let forward = mat_exp(&m).unwrap();
        let backward = mat_exp(&(-&m)).unwrap();
        let prod = &forward * &backward;
        let err = (&prod - DMatrix::<f64>::identity(3, 3)).norm() / prod.norm();
        prop_assert!(err <= 1e-9);
    }

    #[test]
    fn quadrature_is_exact_for_polynomials(
        order in 1usize..12,
        coeffs in proptest::collection::vec(-2.0f64..2.0, 1..8),
    ) {
        prop_assume!(coeffs.len() <= 2 * order);
        let (nodes, weights) = gauss_legendre(order, 0.0, 1.5).unwrap();
        let eval = |t: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
        let numeric: f64 = nodes.iter().zip(&weights).map(|(t, w)| w * eval(*t)).sum();
        let exact: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * 1.5f64.powi(k as i32 + 1) / (k as f64 + 1.0))
            .sum();
        prop_assert!((numeric - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
    }

    #[test]
    fn sampled_spectra_always_majorize(seed in 0u64..10_000, n in 2usize..6) {
        let alpha: Vec<f64> = (0..2 * n + 3).map(|i| 1.0 / (1.0 + 0.2 * i as f64)).collect();
        let lambda = sample_feasible_spectrum(&alpha, n, seed).unwrap();
        prop_assert!(majorizes(&lambda, &alpha).unwrap());
    }
}
