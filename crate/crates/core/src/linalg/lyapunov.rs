//! Direct Lyapunov and Stein solvers.
//!
//! Both reduce `A` to real Schur form and back-substitute over the
//! quasi-triangular blocks (Bartels-Stewart); the small diagonal systems
//! (at most 4x4 after vectorization) are solved by LU. A residual-driven
//! correction pass reuses the factorization, so the documented residual
//! bound holds on return or the call fails.

use nalgebra::{DMatrix, DVector};

use super::{ensure_finite, ensure_square, symmetrize};
use crate::{defaults, Error, Result};

/// Solve `A X + X A^T + Q = 0` for Hurwitz `A` and symmetric `Q`.
///
/// The result is symmetric with `||A X + X A^T + Q||_F <= 1e-10 * max(1, ||Q||_F)`.
pub fn solve_continuous_lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let q = validate_pair(a, q)?;
    ensure_hurwitz(a)?;

    let (u, t) = real_schur(a)?;
    let blocks = diag_blocks(&t);

    // X solves A X + X A^T = -Q.
    let mut x = transformed_solve(&u, &t, &blocks, &(-&q), SylvesterKind::Continuous)?;
    let tol = defaults::RESIDUAL_REL_TOL * 1f64.max(q.norm());
    for _ in 0..2 {
        let residual = a * &x + &x * a.transpose() + &q;
        if residual.norm() <= 0.5 * tol {
            break;
        }
        x += transformed_solve(&u, &t, &blocks, &(-residual), SylvesterKind::Continuous)?;
    }
    let x = symmetrize(&x);

    let res = (a * &x + &x * a.transpose() + &q).norm();
    if res > tol {
        return Err(Error::Value(format!(
            "Lyapunov residual {res:.3e} exceeds tolerance {tol:.3e}"
        )));
    }
    Ok(x)
}

/// Solve `X - A X A^T = Q` for Schur-stable `A` and symmetric `Q`.
///
/// The result is symmetric with `||X - A X A^T - Q||_F <= 1e-10 * max(1, ||Q||_F)`.
pub fn solve_discrete_stein(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let q = validate_pair(a, q)?;
    ensure_schur_stable(a)?;

    let (u, t) = real_schur(a)?;
    let blocks = diag_blocks(&t);

    let mut x = transformed_solve(&u, &t, &blocks, &q, SylvesterKind::Discrete)?;
    let tol = defaults::RESIDUAL_REL_TOL * 1f64.max(q.norm());
    for _ in 0..2 {
        let residual = &x - a * &x * a.transpose() - &q;
        if residual.norm() <= 0.5 * tol {
            break;
        }
        x += transformed_solve(&u, &t, &blocks, &(-residual), SylvesterKind::Discrete)?;
    }
    let x = symmetrize(&x);

    let res = (&x - a * &x * a.transpose() - &q).norm();
    if res > tol {
        return Err(Error::Value(format!(
            "Stein residual {res:.3e} exceeds tolerance {tol:.3e}"
        )));
    }
    Ok(x)
}

#[derive(Clone, Copy)]
enum SylvesterKind {
    /// `T Y + Y T^T = C`
    Continuous,
    /// `Y - T Y T^T = C`
    Discrete,
}

fn validate_pair(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    ensure_square(a, "coefficient matrix")?;
    ensure_finite(a, "coefficient matrix")?;
    ensure_square(q, "right-hand side")?;
    ensure_finite(q, "right-hand side")?;
    if a.nrows() != q.nrows() {
        return Err(Error::Dimension(format!(
            "coefficient is {0}x{0} but right-hand side is {1}x{1}",
            a.nrows(),
            q.nrows()
        )));
    }
    let norm = q.norm();
    if norm > 0.0 {
        let asym = (q - q.transpose()).norm() / norm;
        if asym > defaults::SYMMETRY_REL_TOL {
            return Err(Error::Asymmetric { relative: asym });
        }
    }
    Ok(symmetrize(q))
}

fn ensure_hurwitz(a: &DMatrix<f64>) -> Result<()> {
    let eigs = a.complex_eigenvalues();
    for e in eigs.iter() {
        if e.re >= -defaults::STABILITY_TOL {
            return Err(Error::Unstable(format!(
                "eigenvalue {:.6e}{:+.6e}i is not in the open left half-plane",
                e.re, e.im
            )));
        }
    }
    Ok(())
}

fn ensure_schur_stable(a: &DMatrix<f64>) -> Result<()> {
    let eigs = a.complex_eigenvalues();
    for e in eigs.iter() {
        if e.norm() >= 1.0 - defaults::STABILITY_TOL {
            return Err(Error::Unstable(format!(
                "eigenvalue {:.6e}{:+.6e}i has modulus {:.6e} >= 1",
                e.re,
                e.im,
                e.norm()
            )));
        }
    }
    Ok(())
}

fn real_schur(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    nalgebra::linalg::Schur::try_new(a.clone(), f64::EPSILON, 0)
        .map(|s| s.unpack())
        .ok_or(Error::SchurFailed)
}

/// Diagonal block layout of a real quasi-triangular matrix: `(start, size)`
/// with sizes 1 or 2.
fn diag_blocks(t: &DMatrix<f64>) -> Vec<(usize, usize)> {
    let n = t.nrows();
    let mut blocks = Vec::new();
    let mut k = 0;
    while k < n {
        if k + 1 < n && t[(k + 1, k)] != 0.0 {
            blocks.push((k, 2));
            k += 2;
        } else {
            blocks.push((k, 1));
            k += 1;
        }
    }
    blocks
}

/// Back-transformed solve: maps the right-hand side into the Schur basis,
/// back-substitutes, and returns `U Y U^T`.
fn transformed_solve(
    u: &DMatrix<f64>,
    t: &DMatrix<f64>,
    blocks: &[(usize, usize)],
    c: &DMatrix<f64>,
    kind: SylvesterKind,
) -> Result<DMatrix<f64>> {
    let c_hat = u.transpose() * c * u;
    let y = quasi_triangular_solve(t, blocks, &c_hat, kind)?;
    Ok(u * y * u.transpose())
}

fn quasi_triangular_solve(
    t: &DMatrix<f64>,
    blocks: &[(usize, usize)],
    c: &DMatrix<f64>,
    kind: SylvesterKind,
) -> Result<DMatrix<f64>> {
    let n = t.nrows();
    let p = blocks.len();
    let mut y = DMatrix::<f64>::zeros(n, n);

    for jb in (0..p).rev() {
        let (j0, nj) = blocks[jb];
        for ib in (0..p).rev() {
            let (i0, ni) = blocks[ib];
            let mut rhs = c.view((i0, j0), (ni, nj)).clone_owned();

            match kind {
                SylvesterKind::Continuous => {
                    // rhs -= sum_{k > i} T_ik Y_kj + sum_{l > j} Y_il T_jl^T
                    for &(k0, nk) in &blocks[ib + 1..] {
                        rhs -= t.view((i0, k0), (ni, nk)) * y.view((k0, j0), (nk, nj));
                    }
                    for &(l0, nl) in &blocks[jb + 1..] {
                        rhs -= y.view((i0, l0), (ni, nl))
                            * t.view((j0, l0), (nj, nl)).transpose();
                    }
                }
                SylvesterKind::Discrete => {
                    // rhs += sum over later blocks of T_ik Y_kl T_jl^T
                    for (kk, &(k0, nk)) in blocks.iter().enumerate().skip(ib) {
                        for (ll, &(l0, nl)) in blocks.iter().enumerate().skip(jb) {
                            if kk == ib && ll == jb {
                                continue;
                            }
                            rhs += t.view((i0, k0), (ni, nk))
                                * y.view((k0, l0), (nk, nl))
                                * t.view((j0, l0), (nj, nl)).transpose();
                        }
                    }
                }
            }

            let tii = t.view((i0, i0), (ni, ni)).clone_owned();
            let tjj = t.view((j0, j0), (nj, nj)).clone_owned();
            let system = match kind {
                SylvesterKind::Continuous => {
                    DMatrix::identity(nj, nj).kronecker(&tii)
                        + tjj.kronecker(&DMatrix::identity(ni, ni))
                }
                SylvesterKind::Discrete => {
                    DMatrix::identity(ni * nj, ni * nj) - tjj.kronecker(&tii)
                }
            };
            let rhs_vec = DVector::from_column_slice(rhs.as_slice());
            let z = system
                .lu()
                .solve(&rhs_vec)
                .ok_or_else(|| Error::Value("singular diagonal block system".into()))?;
            y.view_mut((i0, j0), (ni, nj))
                .copy_from(&DMatrix::from_column_slice(ni, nj, z.as_slice()));
        }
    }
    Ok(y)
}
