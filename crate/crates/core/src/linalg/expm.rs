//! Matrix exponential by scaling and squaring with diagonal Pade cores.
//!
//! The order (3, 5, 7, 9 or 13) is picked from the 1-norm of the input
//! against the usual backward-error thresholds; norms above the order-13
//! threshold are halved until they fit and the result is squared back.

use nalgebra::DMatrix;

use super::{ensure_finite, ensure_square, norm_1};
use crate::{Error, Result};

const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068;
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// `e^M` for a square matrix with finite entries.
pub fn mat_exp(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    ensure_square(m, "matrix exponential input")?;
    ensure_finite(m, "matrix exponential input")?;

    let norm = norm_1(m);
    if norm <= THETA_3 {
        return pade_low(m, &B3);
    }
    if norm <= THETA_5 {
        return pade_low(m, &B5);
    }
    if norm <= THETA_7 {
        return pade_low(m, &B7);
    }
    if norm <= THETA_9 {
        return pade_low(m, &B9);
    }

    let squarings = if norm <= THETA_13 {
        0
    } else {
        (norm / THETA_13).log2().ceil() as u32
    };
    let scaled = m / 2f64.powi(squarings as i32);
    let mut result = pade_13(&scaled)?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Diagonal Pade approximant with even/odd split: `U = A * sum(b_odd A^2k)`,
/// `V = sum(b_even A^2k)`, solve `(V - U) X = V + U`.
fn pade_low(m: &DMatrix<f64>, b: &[f64]) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let m2 = m * m;

    let mut even = &id * b[0];
    let mut odd = &id * b[1];
    let mut power = id.clone(); // A^(2k)
    for k in 1..=(b.len() - 1) / 2 {
        power = &power * &m2;
        even += &power * b[2 * k];
        if 2 * k + 1 < b.len() {
            odd += &power * b[2 * k + 1];
        }
    }
    let u = m * odd;
    solve_pade(&even, &u)
}

fn pade_13(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let m2 = m * m;
    let m4 = &m2 * &m2;
    let m6 = &m4 * &m2;
    let b = &B13;

    let u_inner = &m6 * b[13] + &m4 * b[11] + &m2 * b[9];
    let u_poly = &m6 * &u_inner + &m6 * b[7] + &m4 * b[5] + &m2 * b[3] + &id * b[1];
    let u = m * u_poly;

    let v_inner = &m6 * b[12] + &m4 * b[10] + &m2 * b[8];
    let v = &m6 * &v_inner + &m6 * b[6] + &m4 * b[4] + &m2 * b[2] + &id * b[0];

    solve_pade(&v, &u)
}

fn solve_pade(v: &DMatrix<f64>, u: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    (v - u)
        .lu()
        .solve(&(v + u))
        .ok_or_else(|| Error::Value("Pade denominator is singular".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dmatrix;

    #[test]
    fn zero_matrix_gives_identity() {
        let z = DMatrix::<f64>::zeros(2, 2);
        let e = mat_exp(&z).unwrap();
        assert_eq!(e, DMatrix::identity(2, 2));
    }

    #[test]
    fn diagonal_case() {
        let m = dmatrix![1.0, 0.0; 0.0, -1.0];
        let e = mat_exp(&m).unwrap();
        assert_relative_eq!(e[(0, 0)], 1f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(e[(1, 1)], (-1f64).exp(), max_relative = 1e-14);
        assert!(e[(0, 1)].abs() < 1e-16 && e[(1, 0)].abs() < 1e-16);
    }

    #[test]
    fn nilpotent_series_terminates() {
        let m = dmatrix![0.0, 1.0; 0.0, 0.0];
        let e = mat_exp(&m).unwrap();
        let expected = dmatrix![1.0, 1.0; 0.0, 1.0];
        for (a, b) in e.iter().zip(expected.iter()) {
            assert!((a - b).abs() <= 1e-15, "entry {a} vs {b}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let rect = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(mat_exp(&rect), Err(Error::Dimension(_))));
        let nan = dmatrix![f64::NAN, 0.0; 0.0, 0.0];
        assert!(matches!(mat_exp(&nan), Err(Error::Value(_))));
    }

    #[test]
    fn rotation_block_matches_closed_form() {
        // exp([[0, -w], [w, 0]] t) is the rotation by w*t.
        let w = 3.7;
        let m = dmatrix![0.0, -w; w, 0.0];
        let e = mat_exp(&m).unwrap();
        assert_relative_eq!(e[(0, 0)], w.cos(), max_relative = 1e-13);
        assert_relative_eq!(e[(1, 0)], w.sin(), max_relative = 1e-13);
    }

    #[test]
    fn inverse_pairs_multiply_to_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for n in [2usize, 5, 9, 20] {
            let mut m = DMatrix::<f64>::zeros(n, n);
            m.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
            // Rescale to a Frobenius norm of 5.
            let m = &m * (5.0 / m.norm());
            let e = mat_exp(&m).unwrap();
            let e_inv = mat_exp(&(-&m)).unwrap();
            let prod = &e * &e_inv;
            let err = (&prod - DMatrix::<f64>::identity(n, n)).norm() / prod.norm();
            assert!(err <= 1e-9, "n = {n}: relative error {err}");
        }
    }

    #[test]
    fn large_norm_uses_squaring_accurately() {
        // Diagonalizable matrix with norm ~40; compare against the eigenbasis form.
        let m = dmatrix![-8.0, 30.0; 0.0, -2.0];
        // Eigenvalues -8 and -2; eigenvector for -2 is [5, 1].
        let e = mat_exp(&m).unwrap();
        let e8 = (-8f64).exp();
        let e2 = (-2f64).exp();
        let expected01 = 5.0 * (e2 - e8);
        assert_relative_eq!(e[(0, 0)], e8, max_relative = 1e-12);
        assert_relative_eq!(e[(1, 1)], e2, max_relative = 1e-12);
        assert_relative_eq!(e[(0, 1)], expected01, max_relative = 1e-11);
        assert_eq!(e[(1, 0)], 0.0);
    }
}
