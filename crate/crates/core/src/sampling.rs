// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random constructions: Gaussian matrices, Haar unitaries, unit
//! vectors. All randomness in the crate flows through a caller-supplied
//! RNG so runs are reproducible per seed.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, ComplexVector, C64};

fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("gaussian entries are finite")
}

/// Random unit vector (Gaussian direction).
pub fn unit_vector(rng: &mut impl Rng, dim: usize) -> ComplexVector {
    assert!(dim > 0, "unit vector needs dim > 0");
    loop {
        let v = ComplexVector::from_fn(dim, |_| gaussian(rng));
        if v.norm() > 1e-6 {
            return v.scale(C64::new(1.0 / v.norm(), 0.0));
        }
    }
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn hermitian_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    g.add(&g.adjoint()).scale(C64::new(0.5, 0.0))
}

/// Haar-distributed unitary via Gram-Schmidt on a Gaussian matrix with
/// positive-real diagonal normalization. A second orthogonalization
/// pass keeps the unitarity defect at roundoff.
pub fn haar_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let g = gaussian_matrix(rng, n, n);
    let mut cols: Vec<ComplexVector> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for i in 0..j {
                let proj = cols[i].inner(&cols[j]);
                cols[j] = cols[j].sub(&cols[i].scale(proj));
            }
        }
        let norm = cols[j].norm();
        cols[j] = cols[j].scale(C64::new(1.0 / norm, 0.0));
    }
    ComplexMatrix::from_columns(&cols)
}
