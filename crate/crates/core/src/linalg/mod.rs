// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra used by every other module.
//!
//! Matrices are row-major `Vec<Complex64>` with explicit shapes; all
//! operations are pure functions over immutable values. Decompositions
//! (Hermitian eigenvalues, singular values) live in [`decomp`] and are
//! re-exported here.

mod decomp;

pub use decomp::{hermitian_eig, kernel_dimension, op_norm, singular_values};

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Complex scalar used throughout.
pub type C64 = Complex64;

pub(crate) const ZERO: C64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: C64 = Complex64::new(1.0, 0.0);

/// Dense complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<C64>,
}

impl ComplexVector {
    /// Build from entries, rejecting non-finite coefficients.
    pub fn new(data: Vec<C64>) -> Result<Self> {
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("vector has non-finite entries".into()));
        }
        Ok(ComplexVector { data })
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector {
            data: vec![ZERO; dim],
        }
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = ONE;
        v
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> C64) -> Self {
        ComplexVector {
            data: (0..dim).map(f).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Inner product, conjugate-linear in `self`: `⟨self, other⟩`.
    pub fn inner(&self, other: &ComplexVector) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Tensor product, left factor major: index `= i·other.dim() + j`.
    pub fn tensor(&self, other: &ComplexVector) -> ComplexVector {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        ComplexVector { data }
    }

    pub fn scale(&self, c: C64) -> ComplexVector {
        ComplexVector {
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), other.dim(), "vector addition dimension mismatch");
        ComplexVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), other.dim(), "vector subtraction dimension mismatch");
        ComplexVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn normalized(&self) -> Result<ComplexVector> {
        let n = self.norm();
        if n < 1e-14 {
            return Err(Error::Numeric("cannot normalize a near-zero vector".into()));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

impl std::ops::IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.data[i]
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Build from row-major entries, checking length and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Stack column vectors into a matrix.
    pub fn from_columns(cols: &[ComplexVector]) -> Self {
        if cols.is_empty() {
            return Self::zeros(0, 0);
        }
        let rows = cols[0].dim();
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_fn(self.rows, |i| self.get(i, j))
    }

    pub fn set_column(&mut self, j: usize, v: &ComplexVector) {
        assert_eq!(v.dim(), self.rows, "column length mismatch");
        for i in 0..self.rows {
            self.set(i, j, v[i]);
        }
    }

    pub fn transpose(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: C64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product shape mismatch: {}x{} · {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                let row = k * rhs.cols;
                let out_row = i * rhs.cols;
                for j in 0..rhs.cols {
                    out.data[out_row + j] += a * rhs.data[row + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector shape mismatch");
        ComplexVector::from_fn(self.rows, |i| {
            let mut acc = ZERO;
            for j in 0..self.cols {
                acc += self.get(i, j) * v[j];
            }
            acc
        })
    }

    pub fn fro_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        self.fro_norm_sqr().sqrt()
    }

    /// Largest-magnitude entry difference to `other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl serde::Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ComplexMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let entries: Vec<[f64; 2]> = self.data.iter().map(|z| [z.re, z.im]).collect();
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Kronecker product with left-factor-major indexing:
/// `result[(i_a·rows_b + i_b), (j_a·cols_b + j_b)] = a[i_a,j_a]·b[i_b,j_b]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a.get(ia, ja);
            if f == ZERO {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out.set(ia * b.rows() + ib, ja * b.cols() + jb, f * b.get(ib, jb));
                }
            }
        }
    }
    out
}

/// `max(‖m†m − I‖_F, ‖mm† − I‖_F)`; errors on non-square input.
pub fn unitarity_defect(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "unitarity defect requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let id = ComplexMatrix::identity(n);
    let adj = m.adjoint();
    let left = adj.mul(m).sub(&id).fro_norm();
    let right = m.mul(&adj).sub(&id).fro_norm();
    Ok(left.max(right))
}

/// Deterministic unitary completion of a near-unit vector `v`: the first
/// column equals `v/‖v‖` exactly, the rest comes from the Householder
/// reflector mapping `e_1` to the phase-aligned `v` (pivot with
/// nonnegative real part).
pub fn orthonormal_completion(v: &ComplexVector) -> Result<ComplexMatrix> {
    let n = v.dim();
    if n == 0 {
        return Err(Error::Dimension("cannot complete an empty vector".into()));
    }
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::Numeric(format!(
            "orthonormal completion expects a unit vector, got norm {norm:.3e}"
        )));
    }
    let v = v.scale(C64::new(1.0 / norm, 0.0));

    // Phase that makes the pivot real nonnegative: v = e^{iψ}·v'.
    let pivot = v[0];
    let phase = if pivot.norm() < 1e-300 {
        ONE
    } else {
        pivot / pivot.norm()
    };
    let vp = v.scale(phase.conj());

    // Reflector I − 2ww† with w ∝ e_1 − v' sends e_1 to v'.
    let mut w = vp.clone();
    w[0] -= ONE;
    let wn2 = w.norm_sqr();
    let mut q = if wn2 < 1e-28 {
        ComplexMatrix::identity(n)
    } else {
        ComplexMatrix::from_fn(n, n, |i, j| {
            let kron = if i == j { ONE } else { ZERO };
            kron - w[i] * w[j].conj() * C64::new(2.0 / wn2, 0.0)
        })
    };
    // Undo the phase on the first column and pin it to v exactly.
    for i in 0..n {
        let val = q.get(i, 0) * phase;
        q.set(i, 0, val);
    }
    q.set_column(0, &v);
    Ok(q)
}
