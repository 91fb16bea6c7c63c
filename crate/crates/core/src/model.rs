// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Interaction models and their colligations.
//!
//! An [`InteractionModel`] is a unitary `U: H ⊗ K → H ⊗ P` together
//! with unit vacuum vectors fixed by `U`. Relative to an orthonormal
//! frame `(ε_j)` of `P` with `ε_1 = Ω_P` (and an analogous frame of `K`
//! starting at `Ω_K`) the unitary splits into the colligation blocks
//!
//! ```text
//! U(ξ ⊕ η) = Σ_j (A_j ξ + B_j η) ⊗ ε_j,
//! P_Y U(ξ ⊕ η) = C ξ + D η,
//! ```
//!
//! where the input space `U = H ⊗ (Ω_K)^⊥` and the output space
//! `Y = Ω_H ⊗ (Ω_P)^⊥`. Compressing to `H° = H ⊖ ℂΩ_H` yields the
//! reduced colligation, which is unitary as a whole.
//!
//! Tensor index convention everywhere: product index `= i_H·dim_K + i_K`
//! (H-major), and on the output side `i_H·dim_P + i_P`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{
    orthonormal_completion, unitarity_defect, ComplexMatrix, ComplexVector, C64,
};
use crate::sampling;
use crate::Result;

/// A unitary interaction with vacuum vectors.
#[derive(Debug, Clone)]
pub struct InteractionModel {
    pub dim_h: usize,
    pub dim_k: usize,
    pub dim_p: usize,
    /// `(dim_h·dim_p) × (dim_h·dim_k)` matrix of `U`.
    pub u: ComplexMatrix,
    pub omega_h: ComplexVector,
    pub omega_k: ComplexVector,
    pub omega_p: ComplexVector,
}

/// One violated model invariant with its defect magnitude.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub name: String,
    pub defect: f64,
}

impl InteractionModel {
    /// Assemble a model, enforcing structural consistency (hard errors;
    /// numerical defects are reported by [`InteractionModel::validate`]).
    pub fn new(
        dim_h: usize,
        dim_k: usize,
        dim_p: usize,
        u: ComplexMatrix,
        omega_h: ComplexVector,
        omega_k: ComplexVector,
        omega_p: ComplexVector,
    ) -> Result<Self> {
        if dim_h == 0 || dim_k == 0 || dim_p == 0 {
            return Err(Error::Shape("all dimensions must be positive".into()));
        }
        if dim_k != dim_p {
            return Err(Error::Shape(format!(
                "dim_k = {dim_k} must equal dim_p = {dim_p} (unitarity forces equal dimensions)"
            )));
        }
        if u.rows() != dim_h * dim_p || u.cols() != dim_h * dim_k {
            return Err(Error::Shape(format!(
                "u must be {}x{}, got {}x{}",
                dim_h * dim_p,
                dim_h * dim_k,
                u.rows(),
                u.cols()
            )));
        }
        for (name, v, dim) in [
            ("omega_h", &omega_h, dim_h),
            ("omega_k", &omega_k, dim_k),
            ("omega_p", &omega_p, dim_p),
        ] {
            if v.dim() != dim {
                return Err(Error::Shape(format!(
                    "{name} must have dimension {dim}, got {}",
                    v.dim()
                )));
            }
        }
        Ok(InteractionModel {
            dim_h,
            dim_k,
            dim_p,
            u,
            omega_h,
            omega_k,
            omega_p,
        })
    }

    /// Number of generators `d = dim_p`.
    pub fn d(&self) -> usize {
        self.dim_p
    }

    /// Check the model axioms at tolerance `tol`; the report is empty
    /// iff they all hold.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut report = Vec::new();
        for (name, v) in [
            ("omega_h_norm", &self.omega_h),
            ("omega_k_norm", &self.omega_k),
            ("omega_p_norm", &self.omega_p),
        ] {
            let defect = (v.norm() - 1.0).abs();
            if defect > tol {
                report.push(Violation {
                    name: name.into(),
                    defect,
                });
            }
        }
        let udef = unitarity_defect(&self.u).expect("u is square by construction");
        if udef > tol {
            report.push(Violation {
                name: "unitarity".into(),
                defect: udef,
            });
        }
        let vac_in = self.omega_h.tensor(&self.omega_k);
        let vac_out = self.omega_h.tensor(&self.omega_p);
        let vdef = self.u.matvec(&vac_in).sub(&vac_out).norm();
        if vdef > tol {
            report.push(Violation {
                name: "vacuum_condition".into(),
                defect: vdef,
            });
        }
        report
    }

    fn ensure_valid(&self, tol: f64) -> Result<()> {
        let report = self.validate(tol);
        if let Some(v) = report.first() {
            return Err(Error::InvalidModel(format!(
                "{} defect {:.3e} exceeds tolerance {:.1e}",
                v.name, v.defect, tol
            )));
        }
        Ok(())
    }
}

/// Orthonormal frames of `K` and `P` whose first columns are the vacua.
#[derive(Debug, Clone)]
pub struct BasisFrame {
    /// Unitary `dim_k × dim_k`, first column `Ω_K`.
    pub k_basis: ComplexMatrix,
    /// Unitary `dim_p × dim_p`, first column `Ω_P`; column `j-1` is `ε_j`.
    pub p_basis: ComplexMatrix,
}

impl BasisFrame {
    /// Basis vector `ε_j` (1-based, `ε_1 = Ω_P`).
    pub fn epsilon(&self, j: usize) -> ComplexVector {
        self.p_basis.column(j - 1)
    }

    /// Isometric embedding of the input space `U = H ⊗ (Ω_K)^⊥` into
    /// `H ⊗ K`, shape `(dim_h·dim_k) × (dim_h·(dim_k−1))`.
    /// Input coordinate `i_H·(dim_k−1) + (m−2)` maps to
    /// `e_{i_H} ⊗ (k_basis column m−1)` for `m = 2..=dim_k`.
    pub fn input_embedding(&self, dim_h: usize) -> ComplexMatrix {
        let k = self.k_basis.rows();
        ComplexMatrix::from_fn(dim_h * k, dim_h * (k - 1), |row, col| {
            let (ih_r, ik) = (row / k, row % k);
            let (ih_c, m) = (col / (k - 1), col % (k - 1) + 1);
            if ih_r == ih_c {
                self.k_basis.get(ik, m)
            } else {
                crate::linalg::ZERO
            }
        })
    }
}

/// Deterministic frame with `ε_1 = Ω_P` and first `K`-basis vector
/// `Ω_K`, from Householder completions.
pub fn canonical_frame(model: &InteractionModel) -> Result<BasisFrame> {
    Ok(BasisFrame {
        k_basis: orthonormal_completion(&model.omega_k)?,
        p_basis: orthonormal_completion(&model.omega_p)?,
    })
}

/// The colligation blocks of an interaction relative to a frame.
#[derive(Debug, Clone)]
pub struct Colligation {
    /// Number of generators `d = dim_p`.
    pub d: usize,
    pub dim_h: usize,
    /// `dim_h·(dim_k − 1)`.
    pub dim_u: usize,
    /// `dim_p − 1`.
    pub dim_y: usize,
    /// `A_j: H → H`, one per generator.
    pub a: Vec<ComplexMatrix>,
    /// `B_j: U → H`.
    pub b: Vec<ComplexMatrix>,
    /// `C: H → Y`.
    pub c: ComplexMatrix,
    /// `D: U → Y`.
    pub d_mat: ComplexMatrix,
    /// Carried for the reduction to `H°`.
    pub omega_h: ComplexVector,
}

impl Colligation {
    /// The stacked rows `[(A_j B_j)]_j : H ⊕ U → ⊕_j H`; unitary for a
    /// valid model (it is `U` itself in the chosen coordinates).
    pub fn stacked(&self) -> ComplexMatrix {
        let h = self.dim_h;
        let cols = h + self.dim_u;
        ComplexMatrix::from_fn(self.d * h, cols, |row, col| {
            let (j, i) = (row / h, row % h);
            if col < h {
                self.a[j].get(i, col)
            } else {
                self.b[j].get(i, col - h)
            }
        })
    }
}

/// Reduced colligation on `H° = H ⊖ ℂΩ_H`.
#[derive(Debug, Clone)]
pub struct ReducedColligation {
    pub d: usize,
    /// `dim_h − 1`.
    pub dim_ho: usize,
    pub dim_u: usize,
    pub dim_y: usize,
    pub a: Vec<ComplexMatrix>,
    pub b: Vec<ComplexMatrix>,
    pub c: ComplexMatrix,
    pub d_mat: ComplexMatrix,
    /// Isometric embedding `H° → H`, shape `dim_h × (dim_h − 1)`.
    pub embedding: ComplexMatrix,
}

impl ReducedColligation {
    /// The full matrix of `C_U°: H° ⊕ U → (⊕_j H°) ⊕ Y`; unitary for a
    /// valid model.
    pub fn full_matrix(&self) -> ComplexMatrix {
        let ho = self.dim_ho;
        let rows = self.d * ho + self.dim_y;
        let cols = ho + self.dim_u;
        ComplexMatrix::from_fn(rows, cols, |row, col| {
            if row < self.d * ho {
                let (j, i) = (row / ho.max(1), row % ho.max(1));
                if col < ho {
                    self.a[j].get(i, col)
                } else {
                    self.b[j].get(i, col - ho)
                }
            } else {
                let i = row - self.d * ho;
                if col < ho {
                    self.c.get(i, col)
                } else {
                    self.d_mat.get(i, col - ho)
                }
            }
        })
    }
}

/// Isometry `H → H ⊗ K`, `ξ ↦ ξ ⊗ v`.
fn slot_embedding(dim_h: usize, v: &ComplexVector) -> ComplexMatrix {
    let k = v.dim();
    ComplexMatrix::from_fn(dim_h * k, dim_h, |row, col| {
        let (ih, ik) = (row / k, row % k);
        if ih == col {
            v[ik]
        } else {
            crate::linalg::ZERO
        }
    })
}

/// Extract the colligation of a valid model relative to `frame`.
pub fn extract_colligation(model: &InteractionModel, frame: &BasisFrame) -> Result<Colligation> {
    model.ensure_valid(1e-8)?;
    for (mat, vac, name) in [
        (&frame.k_basis, &model.omega_k, "k_basis"),
        (&frame.p_basis, &model.omega_p, "p_basis"),
    ] {
        if unitarity_defect(mat)? > 1e-6 || mat.column(0).sub(vac).norm() > 1e-6 {
            return Err(Error::InvalidModel(format!(
                "{name} is not a unitary frame anchored at the vacuum"
            )));
        }
    }

    let (h, k, p) = (model.dim_h, model.dim_k, model.dim_p);
    let d = p;
    let embed_vac = slot_embedding(h, &model.omega_k);
    let embed_in = frame.input_embedding(h);
    let u_vac = model.u.mul(&embed_vac); // (h·p) × h
    let u_in = model.u.mul(&embed_in); // (h·p) × dim_u

    // ⟨ε_j| on the P slot: h × (h·p).
    let extract_j = |j: usize| {
        ComplexMatrix::from_fn(h, h * p, |row, col| {
            let (ih, ip) = (col / p, col % p);
            if ih == row {
                frame.p_basis.get(ip, j - 1).conj()
            } else {
                crate::linalg::ZERO
            }
        })
    };
    // ⟨Ω_H ⊗ ε_j| rows for j = 2..=p: (p−1) × (h·p).
    let y_extract = ComplexMatrix::from_fn(p - 1, h * p, |row, col| {
        let (ih, ip) = (col / p, col % p);
        (model.omega_h[ih] * frame.p_basis.get(ip, row + 1)).conj()
    });

    let mut a = Vec::with_capacity(d);
    let mut b = Vec::with_capacity(d);
    for j in 1..=d {
        let ext = extract_j(j);
        a.push(ext.mul(&u_vac));
        b.push(ext.mul(&u_in));
    }
    Ok(Colligation {
        d,
        dim_h: h,
        dim_u: h * (k - 1),
        dim_y: p - 1,
        a,
        b,
        c: y_extract.mul(&u_vac),
        d_mat: y_extract.mul(&u_in),
        omega_h: model.omega_h.clone(),
    })
}

/// Compress a colligation to `H°` (basis: Householder completion of
/// `Ω_H`, columns 2..). `dim_h = 1` yields empty `H°` blocks.
pub fn reduce_colligation(col: &Colligation) -> Result<ReducedColligation> {
    let h = col.dim_h;
    let completion = orthonormal_completion(&col.omega_h)?;
    let embedding = ComplexMatrix::from_fn(h, h - 1, |i, j| completion.get(i, j + 1));
    let e_adj = embedding.adjoint();
    let a = col.a.iter().map(|aj| e_adj.mul(aj).mul(&embedding)).collect();
    let b = col.b.iter().map(|bj| e_adj.mul(bj)).collect();
    Ok(ReducedColligation {
        d: col.d,
        dim_ho: h - 1,
        dim_u: col.dim_u,
        dim_y: col.dim_y,
        a,
        b,
        c: col.c.mul(&embedding),
        d_mat: col.d_mat.clone(),
        embedding,
    })
}

/// Built-in model generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    Identity,
    Swap,
    PartialSwap(f64),
    Random(u64),
}

/// Generate a model with all vacua `e_1`. `Swap` and `PartialSwap`
/// require `dim_h = dim_k`; every kind requires `dim_k = dim_p`.
pub fn generate(
    kind: GeneratorKind,
    dim_h: usize,
    dim_k: usize,
    dim_p: usize,
) -> Result<InteractionModel> {
    if dim_k != dim_p {
        return Err(Error::Shape(format!(
            "generator requires dim_k = dim_p, got {dim_k} and {dim_p}"
        )));
    }
    if dim_h == 0 || dim_k == 0 {
        return Err(Error::Shape("dimensions must be positive".into()));
    }
    let omega_h = ComplexVector::basis(dim_h, 0);
    let omega_k = ComplexVector::basis(dim_k, 0);
    let omega_p = ComplexVector::basis(dim_p, 0);
    let n = dim_h * dim_k;

    let u = match kind {
        GeneratorKind::Identity => ComplexMatrix::identity(n),
        GeneratorKind::Swap => swap_matrix(dim_h, dim_k)?,
        GeneratorKind::PartialSwap(theta) => {
            let swap = swap_matrix(dim_h, dim_k)?;
            // e^{−iθ}(cos θ·I + i sin θ·SWAP): the phase restores the
            // vacuum condition exactly.
            let phase = C64::new(theta.cos(), -theta.sin());
            let id = ComplexMatrix::identity(n).scale(C64::new(theta.cos(), 0.0));
            let sw = swap.scale(C64::new(0.0, theta.sin()));
            id.add(&sw).scale(phase)
        }
        GeneratorKind::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w_in = orthonormal_completion(&omega_h.tensor(&omega_k))?;
            let w_out = orthonormal_completion(&omega_h.tensor(&omega_p))?;
            let v = sampling::haar_unitary(&mut rng, n - 1);
            let one_plus_v = ComplexMatrix::from_fn(n, n, |i, j| {
                if i == 0 || j == 0 {
                    if i == 0 && j == 0 {
                        crate::linalg::ONE
                    } else {
                        crate::linalg::ZERO
                    }
                } else {
                    v.get(i - 1, j - 1)
                }
            });
            w_out.mul(&one_plus_v).mul(&w_in.adjoint())
        }
    };
    InteractionModel::new(dim_h, dim_k, dim_p, u, omega_h, omega_k, omega_p)
}

fn swap_matrix(dim_h: usize, dim_k: usize) -> Result<ComplexMatrix> {
    if dim_h != dim_k {
        return Err(Error::Shape(format!(
            "swap requires dim_h = dim_k, got {dim_h} and {dim_k}"
        )));
    }
    let n = dim_h * dim_k;
    let mut m = ComplexMatrix::zeros(n, n);
    for a in 0..dim_h {
        for b in 0..dim_k {
            // e_a ⊗ e_b ↦ e_b ⊗ e_a
            m.set(b * dim_h + a, a * dim_k + b, crate::linalg::ONE);
        }
    }
    Ok(m)
}

/// Convenience: SWAP on two qubits with vacua `e_1` — the standard
/// closed-form fixture.
pub fn swap_qubits() -> InteractionModel {
    generate(GeneratorKind::Swap, 2, 2, 2).expect("static dims are valid")
}

/// Model file format: JSON with `[re, im]` pairs, row-major `u`,
/// product index `i_H·dim_K + i_K`.
pub mod format {
    use super::*;
    use serde_json::ser::Formatter;
    use std::io;

    #[derive(Serialize, Deserialize)]
    struct ModelFile {
        dim_h: usize,
        dim_k: usize,
        dim_p: usize,
        omega_h: Vec<[f64; 2]>,
        omega_k: Vec<[f64; 2]>,
        omega_p: Vec<[f64; 2]>,
        u: Vec<[f64; 2]>,
    }

    fn to_pairs_vec(v: &ComplexVector) -> Vec<[f64; 2]> {
        v.as_slice().iter().map(|z| [z.re, z.im]).collect()
    }

    fn to_pairs_mat(m: &ComplexMatrix) -> Vec<[f64; 2]> {
        m.as_slice().iter().map(|z| [z.re, z.im]).collect()
    }

    fn from_pairs(pairs: &[[f64; 2]]) -> Vec<C64> {
        pairs.iter().map(|p| C64::new(p[0], p[1])).collect()
    }

    /// Writes every real in scientific notation with 17 significant
    /// digits, enough for a bit-exact f64 round trip.
    struct SciFormatter;

    impl Formatter for SciFormatter {
        fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
        where
            W: ?Sized + io::Write,
        {
            write!(writer, "{value:.16e}")
        }
    }

    /// Serialize a model to its JSON text form.
    pub fn to_json(model: &InteractionModel) -> String {
        let file = ModelFile {
            dim_h: model.dim_h,
            dim_k: model.dim_k,
            dim_p: model.dim_p,
            omega_h: to_pairs_vec(&model.omega_h),
            omega_k: to_pairs_vec(&model.omega_k),
            omega_p: to_pairs_vec(&model.omega_p),
            u: to_pairs_mat(&model.u),
        };
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
        file.serialize(&mut ser).expect("in-memory serialization");
        String::from_utf8(out).expect("serde_json emits UTF-8")
    }

    /// Parse a model from JSON text. Malformed JSON or inconsistent
    /// shapes are hard errors; numerical defects are left to
    /// [`InteractionModel::validate`].
    pub fn from_json(text: &str) -> Result<InteractionModel> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let u = ComplexMatrix::new(
            file.dim_h * file.dim_p,
            file.dim_h * file.dim_k,
            from_pairs(&file.u),
        )?;
        InteractionModel::new(
            file.dim_h,
            file.dim_k,
            file.dim_p,
            u,
            ComplexVector::new(from_pairs(&file.omega_h))?,
            ComplexVector::new(from_pairs(&file.omega_k))?,
            ComplexVector::new(from_pairs(&file.omega_p))?,
        )
    }
}
