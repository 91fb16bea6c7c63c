// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Transfer function of the free-semigroup linear system
//!
//! ```text
//! x(wj) = A_j x(w) + B_j u(w),      y(w) = C x(w) + D u(w)
//! ```
//!
//! (words stored in time order, appending = one more step). The
//! word-indexed coefficients are `Θ(∅) = D` and, for stored letters
//! `(a_1,…,a_n)`, `Θ(w) = C·A_{a_n}···A_{a_2}·B_{a_1}`. With zero
//! initial state the output is the word convolution `y(c) = Σ Θ(a)·u(b)`
//! over splits `c = b ++ a`, which is the block structure of the
//! word-Toeplitz operator assembled by [`toeplitz`].
//!
//! [`series`] walks the word tree depth-first, caching the running
//! product `C·A_{a_n}···A_{a_2}` along the path so that every word
//! costs one matrix product; large trees fan out subtrees to rayon.

use crate::error::Error;
use crate::linalg::{op_norm, ComplexMatrix, ComplexVector};
use crate::model::Colligation;
use crate::par;
use crate::words::{Word, WordIndex};
use crate::Result;

/// Storage guard for the series and Toeplitz assemblies.
const MAX_STORED_ENTRIES: u128 = 200_000_000;

/// Word-indexed transfer coefficients up to a cutoff length.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferSeries {
    pub d: usize,
    pub max_len: usize,
    pub dim_u: usize,
    pub dim_y: usize,
    index: WordIndex,
    coeffs: Vec<ComplexMatrix>,
}

impl TransferSeries {
    pub fn index(&self) -> &WordIndex {
        &self.index
    }

    pub fn coeff(&self, w: &Word) -> Result<&ComplexMatrix> {
        Ok(&self.coeffs[self.index.word_to_index(w)?])
    }

    pub fn coeff_at(&self, index: usize) -> &ComplexMatrix {
        &self.coeffs[index]
    }

    /// `Σ_{|w| ≤ n} Θ(w)†·Θ(w)` on the input space.
    pub fn partial_sum(&self, n: usize) -> Result<ComplexMatrix> {
        if n > self.max_len {
            return Err(Error::Dimension(format!(
                "partial sum at length {n} exceeds computed max_len {}",
                self.max_len
            )));
        }
        let upto = WordIndex::new(self.d, n)?.total();
        let mut acc = ComplexMatrix::zeros(self.dim_u, self.dim_u);
        for i in 0..upto {
            let t = &self.coeffs[i];
            acc = acc.add(&t.adjoint().mul(t));
        }
        Ok(acc)
    }
}

/// Single transfer coefficient `Θ(w)` straight from the definition.
pub fn coefficient(col: &Colligation, w: &Word) -> ComplexMatrix {
    if w.is_empty() {
        return col.d_mat.clone();
    }
    let letters = w.letters();
    let mut m = col.c.clone();
    for &a in letters[1..].iter().rev() {
        m = m.mul(&col.a[a as usize - 1]);
    }
    m.mul(&col.b[letters[0] as usize - 1])
}

struct TreeWalk<'a> {
    col: &'a Colligation,
    index: &'a WordIndex,
    max_len: usize,
}

impl TreeWalk<'_> {
    /// Words generated at this node: `(j) ++ reverse(r)` for each first
    /// letter `j`, where `prod = C·A_{r_1}···A_{r_m}`.
    fn emit(&self, r: &[u8], prod: &ComplexMatrix, out: &mut Vec<(usize, ComplexMatrix)>) {
        for j in 1..=self.col.d as u8 {
            let mut letters = Vec::with_capacity(r.len() + 1);
            letters.push(j);
            letters.extend(r.iter().rev());
            let w = Word::from_letters_unchecked(letters);
            let idx = self.index.word_to_index(&w).expect("word within max_len");
            out.push((idx, prod.mul(&self.col.b[j as usize - 1])));
        }
    }

    fn walk(
        &self,
        r: &mut Vec<u8>,
        prod: &ComplexMatrix,
        stop_depth: usize,
        out: &mut Vec<(usize, ComplexMatrix)>,
        roots: &mut Vec<(Vec<u8>, ComplexMatrix)>,
    ) {
        if r.len() == stop_depth {
            roots.push((r.clone(), prod.clone()));
            return;
        }
        self.emit(r, prod, out);
        if r.len() + 2 > self.max_len {
            return;
        }
        for x in 1..=self.col.d as u8 {
            let child = prod.mul(&self.col.a[x as usize - 1]);
            r.push(x);
            self.walk(r, &child, stop_depth, out, roots);
            r.pop();
        }
    }
}

fn series_impl(col: &Colligation, max_len: usize, parallel: bool) -> Result<TransferSeries> {
    let index = WordIndex::new(col.d, max_len)?;
    let entries_needed =
        index.total() as u128 * (col.dim_y.max(1) * col.dim_u.max(1)) as u128;
    if entries_needed > MAX_STORED_ENTRIES {
        return Err(Error::Guard(format!(
            "transfer series would store {entries_needed} matrix entries"
        )));
    }

    let mut entries: Vec<(usize, ComplexMatrix)> = vec![(0, col.d_mat.clone())];
    if max_len >= 1 {
        let walk = TreeWalk {
            col,
            index: &index,
            max_len,
        };
        let fan_out = parallel
            && cfg!(feature = "parallel")
            && index.total() >= par::PAR_MIN_LEN
            && max_len >= 4;
        let stop_depth = if fan_out { 3.min(max_len - 1) } else { usize::MAX };

        let mut roots = Vec::new();
        walk.walk(&mut Vec::new(), &col.c, stop_depth, &mut entries, &mut roots);
        if !roots.is_empty() {
            let chunks = par::map_vec(roots, true, |(mut r, prod)| {
                let mut local = Vec::new();
                walk.walk(&mut r, &prod, usize::MAX, &mut local, &mut Vec::new());
                local
            });
            for chunk in chunks {
                entries.extend(chunk);
            }
        }
    }

    let mut coeffs = vec![ComplexMatrix::zeros(col.dim_y, col.dim_u); index.total()];
    for (idx, m) in entries {
        coeffs[idx] = m;
    }
    Ok(TransferSeries {
        d: col.d,
        max_len,
        dim_u: col.dim_u,
        dim_y: col.dim_y,
        index,
        coeffs,
    })
}

/// All coefficients `Θ(w)` for `|w| ≤ max_len` (parallel over subtrees
/// when the `parallel` feature is enabled).
pub fn series(col: &Colligation, max_len: usize) -> Result<TransferSeries> {
    series_impl(col, max_len, true)
}

/// Single-threaded variant of [`series`].
pub fn series_seq(col: &Colligation, max_len: usize) -> Result<TransferSeries> {
    series_impl(col, max_len, false)
}

/// Word-indexed family of vectors of a uniform dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSequence {
    pub d: usize,
    pub max_len: usize,
    pub dim: usize,
    index: WordIndex,
    values: Vec<ComplexVector>,
}

impl SignalSequence {
    pub fn zeros(d: usize, max_len: usize, dim: usize) -> Result<Self> {
        let index = WordIndex::new(d, max_len)?;
        let values = vec![ComplexVector::zeros(dim); index.total()];
        Ok(SignalSequence {
            d,
            max_len,
            dim,
            index,
            values,
        })
    }

    /// Sequence supported at the empty word only.
    pub fn impulse(d: usize, max_len: usize, value: ComplexVector) -> Result<Self> {
        let mut s = Self::zeros(d, max_len, value.dim())?;
        s.values[0] = value;
        Ok(s)
    }

    pub fn index(&self) -> &WordIndex {
        &self.index
    }

    pub fn at(&self, index: usize) -> &ComplexVector {
        &self.values[index]
    }

    pub fn get(&self, w: &Word) -> Result<&ComplexVector> {
        Ok(&self.values[self.index.word_to_index(w)?])
    }

    pub fn set(&mut self, w: &Word, value: ComplexVector) -> Result<()> {
        if value.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "signal value dimension {} != {}",
                value.dim(),
                self.dim
            )));
        }
        let i = self.index.word_to_index(w)?;
        self.values[i] = value;
        Ok(())
    }

    /// Σ over all words of `‖value‖²`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Run the state/output recursion over all words of length ≤ `u.max_len`
/// in prefix-closed order. `x0` is the state at the empty word.
pub fn io_map(
    col: &Colligation,
    u: &SignalSequence,
    x0: &ComplexVector,
) -> Result<(SignalSequence, SignalSequence)> {
    if u.dim != col.dim_u {
        return Err(Error::Dimension(format!(
            "input dimension {} != colligation dim_u {}",
            u.dim, col.dim_u
        )));
    }
    if u.d != col.d {
        return Err(Error::Dimension("input alphabet differs from colligation".into()));
    }
    if x0.dim() != col.dim_h {
        return Err(Error::Dimension(format!(
            "initial state dimension {} != dim_h {}",
            x0.dim(),
            col.dim_h
        )));
    }
    let index = &u.index;
    let mut xs: Vec<ComplexVector> = Vec::with_capacity(index.total());
    xs.push(x0.clone());
    for i in 1..index.total() {
        let (parent, letter) = index.parent(i).expect("nonempty word has a parent");
        let a = &col.a[letter as usize - 1];
        let b = &col.b[letter as usize - 1];
        xs.push(a.matvec(&xs[parent]).add(&b.matvec(u.at(parent))));
    }
    let ys: Vec<ComplexVector> = (0..index.total())
        .map(|i| col.c.matvec(&xs[i]).add(&col.d_mat.matvec(u.at(i))))
        .collect();
    let x_seq = SignalSequence {
        d: u.d,
        max_len: u.max_len,
        dim: col.dim_h,
        index: index.clone(),
        values: xs,
    };
    let y_seq = SignalSequence {
        d: u.d,
        max_len: u.max_len,
        dim: col.dim_y,
        index: index.clone(),
        values: ys,
    };
    Ok((x_seq, y_seq))
}

/// Block word-Toeplitz matrix of the series over words of length ≤ `n`:
/// block `(c, b) = Θ(a)` when `c = b ++ a`, zero otherwise.
pub fn toeplitz(series: &TransferSeries, n: usize) -> Result<ComplexMatrix> {
    if n > series.max_len {
        return Err(Error::Dimension(format!(
            "toeplitz level {n} exceeds series max_len {}",
            series.max_len
        )));
    }
    let index = WordIndex::new(series.d, n)?;
    let total = index.total();
    let rows = total * series.dim_y;
    let cols = total * series.dim_u;
    if rows as u128 * cols as u128 > MAX_STORED_ENTRIES {
        return Err(Error::Guard(format!(
            "toeplitz matrix would hold {rows}x{cols} entries"
        )));
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ci in 0..total {
        let c = index.index_to_word(ci);
        // Every prefix b of c contributes the block Θ(suffix).
        for cut in 0..=c.len() {
            let b = Word::from_letters_unchecked(c.letters()[..cut].to_vec());
            let a = Word::from_letters_unchecked(c.letters()[cut..].to_vec());
            let bi = index.word_to_index(&b).expect("prefix within index");
            let block = series.coeff(&a)?;
            for i in 0..series.dim_y {
                for j in 0..series.dim_u {
                    out.set(ci * series.dim_y + i, bi * series.dim_u + j, block.get(i, j));
                }
            }
        }
    }
    Ok(out)
}

/// Operator norm of `I_U − Σ_{|w| ≤ n} Θ(w)†Θ(w)`; zero iff the
/// truncated symbol is isometric (inner) at level `n`.
pub fn inner_defect(series: &TransferSeries, n: usize) -> Result<f64> {
    let sum = series.partial_sum(n)?;
    let id = ComplexMatrix::identity(series.dim_u);
    Ok(op_norm(&id.sub(&sum)))
}

/// Probability `π_w = ‖Θ(w)·η‖²` of the record `w` for input state `η`.
pub fn record_probability(series: &TransferSeries, eta: &ComplexVector, w: &Word) -> Result<f64> {
    if eta.norm() > 1.0 + 1e-8 {
        return Err(Error::Numeric(format!(
            "input state norm {:.6} exceeds 1",
            eta.norm()
        )));
    }
    if eta.dim() != series.dim_u {
        return Err(Error::Dimension(format!(
            "input dimension {} != dim_u {}",
            eta.dim(),
            series.dim_u
        )));
    }
    Ok(series.coeff(w)?.matvec(eta).norm_sqr())
}
