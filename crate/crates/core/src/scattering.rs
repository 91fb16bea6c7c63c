// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense simulation of the repeated interaction on `H ⊗ K^{⊗n}`.
//!
//! The chain applies `U` at slots `1..n` in order (`U_ℓ` acts on the
//! `(H, slot ℓ)` pair and identically elsewhere). On top of the raw
//! evolution this module realizes the coisometry `Ŵ` (evolve, then
//! contract `H` against `Ω_H` and the untouched tail against `Ω_K`),
//! the row isometries `V_j(ξ⊗η) = U†(ξ⊗ε_j)⊗η`, and the measurement
//! record projections, giving a brute-force cross-check for the
//! transfer-function algebra.
//!
//! Slot convention: amplitude index `= i_H·kⁿ + Σ_ℓ i_ℓ·k^{n−ℓ}`
//! (H major, slot 1 next, slot n least significant). The infinite
//! chain is truncated to `n_slots` slots with implicit vacuum padding;
//! identities that move amplitude toward the boundary hold only on
//! states supported away from it (one free slot per `V_j`).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::linalg::{ComplexMatrix, ComplexVector, C64, ZERO};
use crate::model::{BasisFrame, InteractionModel};
use crate::par;
use crate::words::{Word, WordIndex};
use crate::Result;

/// Hard cap on simulated amplitudes.
pub const MAX_AMPLITUDES: u128 = 10_000_000;

/// State of the truncated chain `H ⊗ K^{⊗ n_slots}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub n_slots: usize,
    pub dim_h: usize,
    pub dim_k: usize,
    amplitudes: ComplexVector,
}

fn check_size(dim_h: usize, dim_k: usize, n_slots: usize) -> Result<usize> {
    let mut total: u128 = dim_h as u128;
    for _ in 0..n_slots {
        total = total.saturating_mul(dim_k as u128);
        if total > MAX_AMPLITUDES {
            return Err(Error::Guard(format!(
                "chain of {n_slots} slots needs more than {MAX_AMPLITUDES} amplitudes"
            )));
        }
    }
    Ok(total as usize)
}

fn vacuum_tail(omega_k: &ComplexVector, slots: usize) -> ComplexVector {
    let mut tail = ComplexVector::new(vec![C64::new(1.0, 0.0)]).expect("finite");
    for _ in 0..slots {
        tail = tail.tensor(omega_k);
    }
    tail
}

impl ChainState {
    /// The all-vacuum state `Ω_H ⊗ Ω_K ⊗ … ⊗ Ω_K`.
    pub fn vacuum(model: &InteractionModel, n_slots: usize) -> Result<Self> {
        Self::embed(model, &model.omega_h, &[], n_slots)
    }

    /// Product state `ξ ⊗ η_1 ⊗ … ⊗ η_m ⊗ Ω_K ⊗ …` with vacuum padding.
    pub fn embed(
        model: &InteractionModel,
        xi: &ComplexVector,
        slots: &[ComplexVector],
        n_slots: usize,
    ) -> Result<Self> {
        check_size(model.dim_h, model.dim_k, n_slots)?;
        if xi.dim() != model.dim_h {
            return Err(Error::Dimension(format!(
                "H factor must have dimension {}, got {}",
                model.dim_h,
                xi.dim()
            )));
        }
        if slots.len() > n_slots {
            return Err(Error::Dimension(format!(
                "{} slot vectors exceed {n_slots} slots",
                slots.len()
            )));
        }
        let mut amps = xi.clone();
        for s in slots {
            if s.dim() != model.dim_k {
                return Err(Error::Dimension(format!(
                    "slot vectors must have dimension {}, got {}",
                    model.dim_k,
                    s.dim()
                )));
            }
            amps = amps.tensor(s);
        }
        amps = amps.tensor(&vacuum_tail(&model.omega_k, n_slots - slots.len()));
        Ok(ChainState {
            n_slots,
            dim_h: model.dim_h,
            dim_k: model.dim_k,
            amplitudes: amps,
        })
    }

    /// State of the input space `U = H ⊗ (Ω_K)^⊥` placed in slot 1:
    /// `eta` is given in input coordinates (see
    /// [`BasisFrame::input_embedding`]).
    pub fn from_input(
        model: &InteractionModel,
        frame: &BasisFrame,
        eta: &ComplexVector,
        n_slots: usize,
    ) -> Result<Self> {
        check_size(model.dim_h, model.dim_k, n_slots)?;
        let dim_u = model.dim_h * (model.dim_k - 1);
        if eta.dim() != dim_u {
            return Err(Error::Dimension(format!(
                "input state must have dimension {dim_u}, got {}",
                eta.dim()
            )));
        }
        if n_slots == 0 {
            return Err(Error::Dimension("input embedding needs at least one slot".into()));
        }
        let joint = frame.input_embedding(model.dim_h).matvec(eta); // H ⊗ K_1
        let amps = joint.tensor(&vacuum_tail(&model.omega_k, n_slots - 1));
        Ok(ChainState {
            n_slots,
            dim_h: model.dim_h,
            dim_k: model.dim_k,
            amplitudes: amps,
        })
    }

    /// Raw amplitude constructor (dimension-checked).
    pub fn from_amplitudes(
        dim_h: usize,
        dim_k: usize,
        n_slots: usize,
        amplitudes: ComplexVector,
    ) -> Result<Self> {
        let expect = check_size(dim_h, dim_k, n_slots)?;
        if amplitudes.dim() != expect {
            return Err(Error::Dimension(format!(
                "chain needs {expect} amplitudes, got {}",
                amplitudes.dim()
            )));
        }
        Ok(ChainState {
            n_slots,
            dim_h,
            dim_k,
            amplitudes,
        })
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn inner(&self, other: &ChainState) -> C64 {
        self.amplitudes.inner(&other.amplitudes)
    }

    pub fn add(&self, other: &ChainState) -> ChainState {
        ChainState {
            n_slots: self.n_slots,
            dim_h: self.dim_h,
            dim_k: self.dim_k,
            amplitudes: self.amplitudes.add(&other.amplitudes),
        }
    }

    pub fn scale(&self, c: C64) -> ChainState {
        ChainState {
            n_slots: self.n_slots,
            dim_h: self.dim_h,
            dim_k: self.dim_k,
            amplitudes: self.amplitudes.scale(c),
        }
    }

    fn slot_dim_total(&self) -> usize {
        self.amplitudes.dim() / self.dim_h
    }
}

/// Apply a `(h·k)×(h·k)` matrix on the `(H, slot)` pair of indices,
/// identically elsewhere. `slot` is 1-based.
fn apply_on_slot(
    state: &ChainState,
    mat: &ComplexMatrix,
    slot: usize,
    parallel: bool,
) -> ComplexVector {
    let h = state.dim_h;
    let k = state.dim_k;
    let n = state.n_slots;
    debug_assert!(slot >= 1 && slot <= n);
    debug_assert_eq!(mat.rows(), h * k);
    debug_assert_eq!(mat.cols(), h * k);
    let hk = h * k;
    let kn = state.slot_dim_total();
    let stride = k.pow((n - slot) as u32);
    let blocks = kn / k; // k^{n−1} combinations of the untouched slots
    let amps = state.amplitudes.as_slice();

    // For each untouched-slot combination, contract the (H, slot) pair.
    let applied: Vec<C64> = par::map_range(blocks * hk, parallel, |t| {
        let b = t / hk;
        let row = t % hk;
        let hi = b / stride;
        let lo = b % stride;
        let base = hi * (k * stride) + lo;
        let mut acc = ZERO;
        for ihp in 0..h {
            for ilp in 0..k {
                let a = amps[ihp * kn + base + ilp * stride];
                if a != ZERO {
                    acc += mat.get(row, ihp * k + ilp) * a;
                }
            }
        }
        acc
    });

    let out: Vec<C64> = par::map_range(h * kn, parallel, |s| {
        let ih = s / kn;
        let rem = s % kn;
        let hi = rem / (k * stride);
        let rem2 = rem % (k * stride);
        let il = rem2 / stride;
        let lo = rem2 % stride;
        applied[(hi * stride + lo) * hk + ih * k + il]
    });
    ComplexVector::new(out).expect("contraction of finite amplitudes")
}

fn evolve_impl(
    model: &InteractionModel,
    state: &ChainState,
    n: usize,
    parallel: bool,
) -> Result<ChainState> {
    if n > state.n_slots {
        return Err(Error::Dimension(format!(
            "cannot evolve {n} steps on a chain with {} slots",
            state.n_slots
        )));
    }
    if state.dim_h != model.dim_h || state.dim_k != model.dim_k {
        return Err(Error::Dimension("state dimensions do not match the model".into()));
    }
    let mut cur = state.clone();
    for slot in 1..=n {
        cur.amplitudes = apply_on_slot(&cur, &model.u, slot, parallel);
    }
    Ok(cur)
}

/// Repeated interaction `U(n) = U_n … U_1` applied to the state.
pub fn evolve(model: &InteractionModel, state: &ChainState, n: usize) -> Result<ChainState> {
    evolve_impl(model, state, n, true)
}

/// Single-threaded variant of [`evolve`].
pub fn evolve_seq(model: &InteractionModel, state: &ChainState, n: usize) -> Result<ChainState> {
    evolve_impl(model, state, n, false)
}

/// `Q_n U(n)`: evolve `n` steps, contract `H` against `Ω_H` and the
/// slots beyond `n` against `Ω_K`. Returns a vector in `P^{⊗n}`.
pub fn w_apply(model: &InteractionModel, state: &ChainState, n: usize) -> Result<ComplexVector> {
    let evolved = evolve(model, state, n)?;
    let k = state.dim_k;
    let mut cur: Vec<C64> = evolved.amplitudes.as_slice().to_vec();

    // Contract the untouched tail, last slot first (least significant).
    for _ in (n + 1)..=state.n_slots {
        let next_len = cur.len() / k;
        let mut next = vec![ZERO; next_len];
        for (q, slot_val) in next.iter_mut().enumerate() {
            let mut acc = ZERO;
            for m in 0..k {
                acc += model.omega_k[m].conj() * cur[q * k + m];
            }
            *slot_val = acc;
        }
        cur = next;
    }

    // Contract H (most significant index).
    let pn = cur.len() / model.dim_h;
    let out = ComplexVector::from_fn(pn, |rest| {
        let mut acc = ZERO;
        for ih in 0..model.dim_h {
            acc += model.omega_h[ih].conj() * cur[ih * pn + rest];
        }
        acc
    });
    Ok(out)
}

/// `V_j`: prepend a fresh slot carrying `ε_j` and apply `U†` on the
/// `(H, slot 1)` pair. Requires the last slot to be vacuum (one free
/// slot of headroom).
pub fn v_apply(
    model: &InteractionModel,
    frame: &BasisFrame,
    j: u8,
    state: &ChainState,
) -> Result<ChainState> {
    let k = state.dim_k;
    let n = state.n_slots;
    if j == 0 || j as usize > model.dim_p {
        return Err(Error::Dimension(format!(
            "letter {j} outside 1..={}",
            model.dim_p
        )));
    }
    // Contract the last slot against the vacuum and verify nothing is
    // lost: the state must not reach the truncation boundary.
    let amps = state.amplitudes.as_slice();
    let sub_len = amps.len() / k;
    let mut contracted = vec![ZERO; sub_len];
    for (q, v) in contracted.iter_mut().enumerate() {
        let mut acc = ZERO;
        for m in 0..k {
            acc += model.omega_k[m].conj() * amps[q * k + m];
        }
        *v = acc;
    }
    let mut defect2 = 0.0;
    for q in 0..sub_len {
        for m in 0..k {
            let resid = amps[q * k + m] - contracted[q] * model.omega_k[m];
            defect2 += resid.norm_sqr();
        }
    }
    if defect2.sqrt() > 1e-10 * state.norm().max(1e-30) {
        return Err(Error::Guard(
            "no free slot: the state occupies the last chain slot".into(),
        ));
    }

    // Insert ε_j at slot 1, shifting the existing slots right.
    let eps = frame.epsilon(j as usize);
    let kn = state.slot_dim_total();
    let sub_kn = kn / k; // k^{n−1}
    let h = state.dim_h;
    let inserted = ComplexVector::from_fn(h * kn, |t| {
        let ih = t / kn;
        let rem = t % kn;
        let s = rem / sub_kn;
        let rest = rem % sub_kn;
        eps[s] * contracted[ih * sub_kn + rest]
    });
    let mut out = ChainState {
        n_slots: n,
        dim_h: h,
        dim_k: k,
        amplitudes: inserted,
    };
    out.amplitudes = apply_on_slot(&out, &model.u.adjoint(), 1, true);
    Ok(out)
}

/// Record amplitudes: the `Y`-valued component vectors
/// `(⟨Ω_H ⊗ ε_{w_1} ⊗ … ⊗ ε_{w_m} ⊗ ε_{t+1} ⊗ Ω_P…| U(n) η)_t` for
/// every word `|w| ≤ n_slots − 1`. These equal `Θ(w)·η`.
pub fn record_amplitudes(
    model: &InteractionModel,
    frame: &BasisFrame,
    eta: &ComplexVector,
    n_slots: usize,
) -> Result<Vec<(Word, ComplexVector)>> {
    let state = ChainState::from_input(model, frame, eta, n_slots)?;
    let p = model.dim_p;
    let n = n_slots;
    let w = w_apply(model, &state, n)?; // P^{⊗n}

    // Rotate every slot into the (ε_j) basis.
    let pb_adj = frame.p_basis.adjoint();
    let mut r: Vec<C64> = w.as_slice().to_vec();
    for slot in 1..=n {
        let stride = p.pow((n - slot) as u32);
        let blocks = r.len() / p;
        let mut next = vec![ZERO; r.len()];
        for b in 0..blocks {
            let hi = b / stride;
            let lo = b % stride;
            let base = hi * (p * stride) + lo;
            for row in 0..p {
                let mut acc = ZERO;
                for s in 0..p {
                    acc += pb_adj.get(row, s) * r[base + s * stride];
                }
                next[base + row * stride] = acc;
            }
        }
        r = next;
    }

    let index = WordIndex::new(p, n - 1)?;
    let mut out = Vec::with_capacity(index.total());
    for i in 0..index.total() {
        let word = index.index_to_word(i);
        let m = word.len();
        let mut base = 0usize;
        for (l, &a) in word.letters().iter().enumerate() {
            base += (a as usize - 1) * p.pow((n - 1 - l) as u32);
        }
        let tail_stride = p.pow((n - m - 1) as u32);
        let vec = ComplexVector::from_fn(p - 1, |t| r[base + (t + 1) * tail_stride]);
        out.push((word, vec));
    }
    Ok(out)
}

/// Probabilities `π_w = ‖record amplitude‖²` for all `|w| ≤ n_slots−1`,
/// plus the unresolved remainder (vacuum tail and truncation mass).
#[derive(Debug, Clone, Serialize)]
pub struct RecordDistribution {
    pub entries: Vec<(String, f64)>,
    pub residual: f64,
}

pub fn record_distribution(
    model: &InteractionModel,
    frame: &BasisFrame,
    eta: &ComplexVector,
    n_slots: usize,
) -> Result<RecordDistribution> {
    if eta.norm() > 1.0 + 1e-8 {
        return Err(Error::Numeric(format!(
            "input state norm {:.6} exceeds 1",
            eta.norm()
        )));
    }
    let amps = record_amplitudes(model, frame, eta, n_slots)?;
    let mut total = 0.0;
    let mut entries = Vec::with_capacity(amps.len());
    for (w, v) in &amps {
        let pi = v.norm_sqr();
        total += pi;
        entries.push((w.to_string(), pi));
    }
    Ok(RecordDistribution {
        entries,
        residual: eta.norm_sqr() - total,
    })
}

/// Numerical verification of the scattering-system axioms at the
/// truncation level `n`, on seeded random samples.
#[derive(Debug, Clone, Serialize)]
pub struct ScatteringDefects {
    /// `max |⟨V_iψ, V_jφ⟩ − δ_ij⟨ψ,φ⟩|` over samples, together with the
    /// invariance defect `|⟨vacuum, V_jψ⟩|`: the tuple must be a row
    /// isometry *on* the vacuum-orthogonal complement, which is exactly
    /// where the vacuum condition enters.
    pub row_isometry: f64,
    /// Deviation of `{V_α E}` vectors from orthonormality across words.
    pub wandering_orthogonality: f64,
    /// Residual of random `(H ⊗ K_{[1,n−1]})°` vectors after projecting
    /// onto `H° ⊕ (⊕_{|α|≤n−2} V_α E)`.
    pub span_residual: f64,
    /// `max |⟨U†(Ω_H⊗ζ)⊗Ω, V_j ψ⟩|` over `ζ ⊥ Ω_P` and samples ψ.
    pub estar_orthogonality: f64,
}

impl ScatteringDefects {
    pub fn max(&self) -> f64 {
        self.row_isometry
            .max(self.wandering_orthogonality)
            .max(self.span_residual)
            .max(self.estar_orthogonality)
    }
}

/// Random chain state supported on the first `support` slots,
/// orthogonal to the vacuum vector, unit norm.
fn random_chain_state(
    model: &InteractionModel,
    rng: &mut impl Rng,
    support: usize,
    n_slots: usize,
) -> Result<ChainState> {
    let dim = model.dim_h * model.dim_k.pow(support as u32);
    let raw = ComplexVector::from_fn(dim, |_| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let mut sub = raw;
    // Remove the vacuum component of the supported block.
    let mut vac = model.omega_h.clone();
    for _ in 0..support {
        vac = vac.tensor(&model.omega_k);
    }
    let overlap = vac.inner(&sub);
    sub = sub.sub(&vac.scale(overlap));
    let sub = sub.normalized()?;
    let amps = sub.tensor(&vacuum_tail(&model.omega_k, n_slots - support));
    ChainState::from_amplitudes(model.dim_h, model.dim_k, n_slots, amps)
}

pub fn scattering_axioms_check(
    model: &InteractionModel,
    frame: &BasisFrame,
    n: usize,
    sample_count: usize,
    seed: u64,
) -> Result<ScatteringDefects> {
    if n < 3 {
        return Err(Error::Numeric("axioms check needs n >= 3".into()));
    }
    check_size(model.dim_h, model.dim_k, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = model.dim_p;
    let dim_u = model.dim_h * (model.dim_k - 1);

    // (i) Row isometry on samples with one slot of headroom, including
    // invariance of the vacuum-orthogonal complement.
    let vacuum = ChainState::vacuum(model, n)?;
    let mut row_isometry = 0.0f64;
    for _ in 0..sample_count {
        let psi = random_chain_state(model, &mut rng, n - 2, n)?;
        let phi = random_chain_state(model, &mut rng, n - 2, n)?;
        let base = psi.inner(&phi);
        let v_psi: Vec<ChainState> = (1..=d)
            .map(|j| v_apply(model, frame, j as u8, &psi))
            .collect::<Result<_>>()?;
        let v_phi: Vec<ChainState> = (1..=d)
            .map(|j| v_apply(model, frame, j as u8, &phi))
            .collect::<Result<_>>()?;
        for i in 0..d {
            for j in 0..d {
                let got = v_psi[i].inner(&v_phi[j]);
                let want = if i == j { base } else { ZERO };
                row_isometry = row_isometry.max((got - want).norm());
            }
            row_isometry = row_isometry.max(vacuum.inner(&v_psi[i]).norm());
        }
    }

    // Basis of ⊕_{|α| ≤ n−2} V_α E.
    let index = WordIndex::new(d, n - 2)?;
    let mut shifted_basis: Vec<ChainState> = Vec::new();
    if dim_u > 0 {
        for wi in 0..index.total() {
            let word = index.index_to_word(wi);
            for l in 0..dim_u {
                let e = ChainState::from_input(model, frame, &ComplexVector::basis(dim_u, l), n)?;
                let mut v = e;
                for &a in word.letters() {
                    v = v_apply(model, frame, a, &v)?;
                }
                shifted_basis.push(v);
            }
        }
    }

    // (ii) Mutual orthonormality of the shifted copies of E.
    let mut wandering = 0.0f64;
    for (i, a) in shifted_basis.iter().enumerate() {
        for (j, b) in shifted_basis.iter().enumerate().skip(i) {
            let got = a.inner(b);
            let want = if i == j {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            };
            wandering = wandering.max((got - want).norm());
        }
    }

    // (iii) Together with H°, the shifted copies span (H⊗K_{[1,n−1]})°.
    let h_completion = crate::linalg::orthonormal_completion(&model.omega_h)?;
    let mut full_basis = shifted_basis;
    for c in 1..model.dim_h {
        full_basis.push(ChainState::embed(model, &h_completion.column(c), &[], n)?);
    }
    let mut span_residual = 0.0f64;
    for _ in 0..sample_count {
        let psi = random_chain_state(model, &mut rng, n - 1, n)?;
        let mut resid = psi.clone();
        for b in &full_basis {
            let coeff = b.inner(&resid);
            resid = resid.add(&b.scale(-coeff));
        }
        span_residual = span_residual.max(resid.norm());
    }

    // (iv) Vectors U†(Ω_H ⊗ ζ)⊗Ω with ζ ⊥ Ω_P are orthogonal to every
    // V_j-range sample: the wandering subspace of the ambient row
    // isometry is carried by the output side.
    let mut estar = 0.0f64;
    for t in 2..=d {
        let witness = v_apply(model, frame, t as u8, &vacuum)?;
        for _ in 0..sample_count {
            let psi = random_chain_state(model, &mut rng, n - 2, n)?;
            for j in 1..=d {
                let vj = v_apply(model, frame, j as u8, &psi)?;
                estar = estar.max(witness.inner(&vj).norm());
            }
        }
    }

    Ok(ScatteringDefects {
        row_isometry,
        wandering_orthogonality: wandering,
        span_residual,
        estar_orthogonality: estar,
    })
}
