// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Jacobi-type decompositions.
//!
//! Hermitian eigenvalues use cyclic two-sided Jacobi sweeps. Singular
//! values use one-sided Jacobi (column orthogonalization), which keeps
//! small singular values accurate to roundoff relative to the column
//! scale instead of the `√ε·σ_max` floor that an eigendecomposition of
//! `m†m` would impose; `kernel_dimension` at a 1e-9 relative cut needs
//! that accuracy.

use num_complex::Complex64;

use super::{ComplexMatrix, C64, ZERO};
use crate::error::Error;
use crate::Result;

const MAX_SWEEPS: usize = 100;

/// Parameters of the real Jacobi rotation zeroing the off-diagonal of
/// `[[a, b],[b, g]]`, `b = |β| > 0`, for the rotation layout
/// `[[c, −s·e^{iφ}],[s·e^{−iφ}, c]]`: returns `(c, s)` with
/// `t = s/c` the smaller-magnitude root of `t² − 2τt − 1 = 0`,
/// `τ = (g − a)/(2b)`.
fn jacobi_cs(a: f64, g: f64, b: f64) -> (f64, f64) {
    let tau = (g - a) / (2.0 * b);
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += a.get(p, q).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues in ascending order and a unitary matrix of
/// eigenvectors (as columns) with `m·V ≈ V·diag(λ)`. Errors if the
/// input is not square or departs from Hermitian by more than
/// `1e-8·‖m‖_F`.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "hermitian_eig requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let fro = m.fro_norm();
    let herm_defect = m.sub(&m.adjoint()).fro_norm();
    if herm_defect > 1e-8 * fro {
        return Err(Error::Numeric(format!(
            "matrix is not Hermitian: defect {herm_defect:.3e} vs norm {fro:.3e}"
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }

    // Work on the Hermitian part; roundoff asymmetry would otherwise
    // leak into the rotations.
    let mut a = m.add(&m.adjoint()).scale(C64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);
    let stop = 1e-14 * fro.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= stop {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let abs = apq.norm();
                if abs <= stop / (n as f64) {
                    continue;
                }
                let phase = apq / abs;
                let (c, s) = jacobi_cs(a.get(p, p).re, a.get(q, q).re, abs);
                let cs = C64::new(c, 0.0);
                let sp = phase * s; // s·e^{iφ}
                let spc = sp.conj(); // s·e^{−iφ}

                // Similarity transform on rows/columns p and q.
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    let new_p = cs * aip + spc * aiq;
                    let new_q = cs * aiq - sp * aip;
                    a.set(i, p, new_p);
                    a.set(p, i, new_p.conj());
                    a.set(i, q, new_q);
                    a.set(q, i, new_q.conj());
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let new_pp = app * c * c + 2.0 * abs * c * s + aqq * s * s;
                let new_qq = app * s * s - 2.0 * abs * c * s + aqq * c * c;
                a.set(p, p, C64::new(new_pp, 0.0));
                a.set(q, q, C64::new(new_qq, 0.0));
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);

                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, cs * vip + spc * viq);
                    v.set(i, q, cs * viq - sp * vip);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.total_cmp(&a.get(j, j).re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok((eigenvalues, vectors))
}

/// Singular values of `m` (square roots of the eigenvalues of `m†m`),
/// descending, computed by one-sided Jacobi column orthogonalization.
/// Returns `m.cols()` values; zero columns contribute exact zeros.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let rows = m.rows();
    let cols = m.cols();
    if cols == 0 {
        return Vec::new();
    }
    if rows == 0 {
        return vec![0.0; cols];
    }
    let mut a = m.clone();
    let eps = 1e-14;

    for _ in 0..MAX_SWEEPS {
        // Column norms are kept incrementally during the sweep and
        // refreshed here to stop roundoff drift.
        let mut norms2: Vec<f64> = (0..cols).map(|j| a.column(j).norm_sqr()).collect();
        let mut rotated = false;
        for p in 0..cols - 1 {
            for q in (p + 1)..cols {
                let mut apq = ZERO;
                for i in 0..rows {
                    apq += a.get(i, p).conj() * a.get(i, q);
                }
                let abs = apq.norm();
                let (app, aqq) = (norms2[p], norms2[q]);
                if abs <= eps * (app * aqq).sqrt() || abs == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = apq / abs;
                let (c, s) = jacobi_cs(app, aqq, abs);
                let cs = C64::new(c, 0.0);
                let sp = phase * s;
                let spc = sp.conj();
                for i in 0..rows {
                    let xp = a.get(i, p);
                    let xq = a.get(i, q);
                    a.set(i, p, cs * xp + spc * xq);
                    a.set(i, q, cs * xq - sp * xp);
                }
                norms2[p] = app * c * c + 2.0 * abs * c * s + aqq * s * s;
                norms2[q] = app * s * s - 2.0 * abs * c * s + aqq * c * c;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Largest singular value; 0 for empty shapes.
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Number of singular values at or below `tol` relative to the largest
/// one (absolute `tol` when the whole spectrum sits below `tol`).
pub fn kernel_dimension(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    if tol <= 0.0 {
        return Err(Error::Numeric("kernel_dimension requires tol > 0".into()));
    }
    let sv = singular_values(m);
    let Some(&smax) = sv.first() else {
        return Ok(0);
    };
    let threshold = if smax < tol { tol } else { tol * smax };
    Ok(sv.iter().filter(|&&s| s <= threshold).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unitarity_defect, ComplexVector};
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn reconstruction_residual(m: &ComplexMatrix, vals: &[f64], vecs: &ComplexMatrix) -> f64 {
        // max over columns of ‖m v_j − λ_j v_j‖
        let mut worst = 0.0f64;
        for j in 0..vecs.cols() {
            let v = vecs.column(j);
            let mv = m.matvec(&v);
            let lv = v.scale(r(vals[j]));
            worst = worst.max(mv.sub(&lv).norm());
        }
        worst
    }

    #[test]
    fn eig_diagonal() {
        let m = ComplexMatrix::new(2, 2, vec![r(3.0), r(0.0), r(0.0), r(1.0)]).unwrap();
        let (vals, _) = hermitian_eig(&m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eig_pauli_x() {
        let m = ComplexMatrix::new(2, 2, vec![r(0.0), r(1.0), r(1.0), r(0.0)]).unwrap();
        let (vals, vecs) = hermitian_eig(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        assert!(reconstruction_residual(&m, &vals, &vecs) < 1e-14);
    }

    #[test]
    fn eig_zero_matrix() {
        let (vals, vecs) = hermitian_eig(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(vals, vec![0.0; 3]);
        assert!(unitarity_defect(&vecs).unwrap() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, 2, vec![r(0.0), r(1.0), r(0.0), r(0.0)]).unwrap();
        assert!(hermitian_eig(&m).is_err());
    }

    #[test]
    fn eig_random_reconstruction_up_to_64() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in [2usize, 5, 16, 64] {
            let m = sampling::hermitian_matrix(&mut rng, n);
            let (vals, vecs) = hermitian_eig(&m).unwrap();
            let res = reconstruction_residual(&m, &vals, &vecs);
            assert!(
                res <= 1e-10 * m.fro_norm(),
                "n={n}: residual {res:.3e} vs {:.3e}",
                m.fro_norm()
            );
            assert!(unitarity_defect(&vecs).unwrap() < 1e-12);
            let mut sorted = vals.clone();
            sorted.sort_by(f64::total_cmp);
            assert_eq!(vals, sorted);
        }
    }

    #[test]
    fn singular_values_examples() {
        let sv = singular_values(&ComplexMatrix::identity(4));
        assert!(sv.iter().all(|s| (s - 1.0).abs() < 1e-14));

        let d = ComplexMatrix::new(2, 2, vec![r(2.0), r(0.0), r(0.0), r(0.0)]).unwrap();
        let sv = singular_values(&d);
        assert!((sv[0] - 2.0).abs() < 1e-14);
        assert!(sv[1].abs() < 1e-14);

        let m = ComplexMatrix::new(2, 2, vec![r(1.0), r(1.0), r(0.0), r(0.0)]).unwrap();
        let sv = singular_values(&m);
        assert!((sv[0] - 2f64.sqrt()).abs() < 1e-14);
        assert!(sv[1].abs() < 1e-14);
    }

    #[test]
    fn singular_values_of_unitary_are_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 3, 6] {
            let u = sampling::haar_unitary(&mut rng, n);
            for s in singular_values(&u) {
                assert!((s - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn small_singular_values_resolved_below_rank_cut() {
        // A matrix with an exact kernel must report singular values far
        // beneath the 1e-9 relative threshold.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = sampling::haar_unitary(&mut rng, 5);
        let mut d = ComplexMatrix::zeros(5, 5);
        for (i, s) in [1.0, 0.5, 0.1, 1e-3, 0.0].iter().enumerate() {
            d.set(i, i, r(*s));
        }
        let m = q.mul(&d).mul(&q.adjoint());
        let sv = singular_values(&m);
        assert!((sv[0] - 1.0).abs() < 1e-12);
        assert!((sv[3] - 1e-3).abs() < 1e-12);
        assert!(sv[4] < 1e-12, "null direction read {:.3e}", sv[4]);
    }

    #[test]
    fn kernel_dimension_examples() {
        assert_eq!(kernel_dimension(&ComplexMatrix::zeros(3, 3), 1e-9).unwrap(), 3);
        let near = ComplexMatrix::identity(3).scale(r(1e-6));
        assert_eq!(kernel_dimension(&near, 1e-9).unwrap(), 0);
        let d = ComplexMatrix::new(2, 2, vec![r(1.0), r(0.0), r(0.0), r(0.0)]).unwrap();
        assert_eq!(kernel_dimension(&d, 1e-9).unwrap(), 1);
        assert!(kernel_dimension(&d, 0.0).is_err());
    }

    #[test]
    fn op_norm_matches_largest_singular_value() {
        let v = ComplexVector::new(vec![r(3.0), r(4.0)]).unwrap();
        let m = ComplexMatrix::from_fn(2, 1, |i, _| v[i]);
        assert!((op_norm(&m) - 5.0).abs() < 1e-12);
        assert_eq!(op_norm(&ComplexMatrix::zeros(0, 0)), 0.0);
    }
}
