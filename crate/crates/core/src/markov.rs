// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Transition operator `Z(X) = Σ_j A_j† X A_j` and the diagnostics that
//! hang off it: ergodicity (fixed-point space of `Z`), the
//! observability Gramian `G = Σ_α A°_α† C°† C° A°_α` via its Stein
//! recursion, stability of the reduced tuple, and the cross-equivalence
//! report tying them to the inner defect of the transfer function.
//!
//! Superoperators are realized as `dim_h² × dim_h²` matrices in the
//! column-stacking convention `ẑ·vec(X) = vec(Z(X))`.

use serde::Serialize;

use crate::error::Error;
use crate::linalg::{
    kernel_dimension, op_norm, singular_values, tensor_product, ComplexMatrix, ComplexVector,
};
use crate::model::{
    canonical_frame, extract_colligation, reduce_colligation, Colligation, InteractionModel,
    ReducedColligation,
};
use crate::transfer;
use crate::words::WordIndex;
use crate::{Result, Tolerances};

/// `Z(X) = Σ_j A_j† X A_j`.
pub fn transition_apply(col: &Colligation, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let h = col.dim_h;
    if x.rows() != h || x.cols() != h {
        return Err(Error::Dimension(format!(
            "transition operator expects a {h}x{h} argument, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let mut acc = ComplexMatrix::zeros(h, h);
    for aj in &col.a {
        acc = acc.add(&aj.adjoint().mul(x).mul(aj));
    }
    Ok(acc)
}

/// Column-major stacking of a square matrix.
fn vec_col(m: &ComplexMatrix) -> ComplexVector {
    let n = m.rows();
    ComplexVector::from_fn(n * n, |t| m.get(t % n, t / n))
}

fn unvec_col(v: &ComplexVector, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| v[j * n + i])
}

/// Matrix of `X ↦ Σ_j ops_j† X ops_j` in the `vec_col` convention.
fn superoperator_matrix(ops: &[ComplexMatrix], n: usize) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(n * n, n * n);
    for op in ops {
        acc = acc.add(&tensor_product(&op.transpose(), &op.adjoint()));
    }
    acc
}

/// The transition operator as an explicit superoperator matrix.
#[derive(Debug, Clone)]
pub struct TransitionSuperoperator {
    pub dim_h: usize,
    /// `dim_h² × dim_h²`, `zhat·vec(X) = vec(Z(X))`.
    pub zhat: ComplexMatrix,
}

impl TransitionSuperoperator {
    pub fn new(col: &Colligation) -> Self {
        TransitionSuperoperator {
            dim_h: col.dim_h,
            zhat: superoperator_matrix(&col.a, col.dim_h),
        }
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        unvec_col(&self.zhat.matvec(&vec_col(x)), self.dim_h)
    }
}

/// Dimension of the fixed-point space of `Z`, as the kernel dimension
/// of `ẑ − I` at relative tolerance `tol`. Ergodic means the result
/// is 1.
pub fn fixed_space_dim(sup: &TransitionSuperoperator, tol: f64) -> Result<usize> {
    let n = sup.dim_h * sup.dim_h;
    let shifted = sup.zhat.sub(&ComplexMatrix::identity(n));
    kernel_dimension(&shifted, tol)
}

/// Result of a monotone fixed-point iteration.
#[derive(Debug, Clone)]
pub struct IterationOutcome {
    pub value: ComplexMatrix,
    pub converged: bool,
    pub iterations: usize,
}

/// Minimal solution of the Stein recursion
/// `G ← C°†C° + Σ_j A°_j† G A°_j`, starting from 0. The iterates are
/// nondecreasing and bounded by `I`, so the limit is the observability
/// Gramian.
pub fn observability_gramian(
    red: &ReducedColligation,
    tol: f64,
    max_iter: usize,
) -> IterationOutcome {
    let ho = red.dim_ho;
    let base = red.c.adjoint().mul(&red.c);
    let mut g = ComplexMatrix::zeros(ho, ho);
    for it in 0..max_iter {
        let mut next = base.clone();
        for aj in &red.a {
            next = next.add(&aj.adjoint().mul(&g).mul(aj));
        }
        let delta = next.sub(&g).fro_norm();
        g = next;
        if delta < tol {
            return IterationOutcome {
                value: g,
                converged: true,
                iterations: it + 1,
            };
        }
    }
    IterationOutcome {
        value: g,
        converged: false,
        iterations: max_iter,
    }
}

/// Limit of `Zⁿ(p)` with `p` the rank-one projection onto `ℂΩ_H`:
/// nondecreasing, bounded by `I`, converging to the fixed point whose
/// compression to `H°` is the observability Gramian.
pub fn x_fixed_point(col: &Colligation, tol: f64, max_iter: usize) -> IterationOutcome {
    let h = col.dim_h;
    let p = ComplexMatrix::from_fn(h, h, |i, j| col.omega_h[i] * col.omega_h[j].conj());
    let mut x = p;
    for it in 0..max_iter {
        let next = transition_apply(col, &x).expect("dimensions fixed by construction");
        let delta = next.sub(&x).fro_norm();
        x = next;
        if delta < tol {
            return IterationOutcome {
                value: x,
                converged: true,
                iterations: it + 1,
            };
        }
    }
    IterationOutcome {
        value: x,
        converged: false,
        iterations: max_iter,
    }
}

/// `‖(Φ°)ⁿ(I)‖_op` where `Φ°(X) = Σ_j A°_j† X A°_j`; this equals
/// `sup_ξ Σ_{|α|=n} ‖A°_α ξ‖²` over unit `ξ`.
pub fn phi_power_norm(red: &ReducedColligation, n: usize) -> f64 {
    let mut x = ComplexMatrix::identity(red.dim_ho);
    for _ in 0..n {
        let mut next = ComplexMatrix::zeros(red.dim_ho, red.dim_ho);
        for aj in &red.a {
            next = next.add(&aj.adjoint().mul(&x).mul(aj));
        }
        x = next;
    }
    op_norm(&x)
}

/// Gelfand-style stability estimate
/// `r = ‖(Φ°)^{2^m}(I)‖_op^{1/2^m}` with `2^m ≤ n_max`, computed by
/// repeated squaring of the superoperator matrix. The tuple is stable
/// (all `Σ_{|α|=n}‖A°_α ξ‖² → 0`) iff `r < 1`.
pub fn stability_radius(red: &ReducedColligation, n_max: usize) -> Result<f64> {
    if n_max < 4 {
        return Err(Error::Numeric("stability estimate needs n_max >= 4".into()));
    }
    let ho = red.dim_ho;
    if ho == 0 {
        return Ok(0.0);
    }
    let mut s = superoperator_matrix(&red.a, ho);
    let mut power = 1usize;
    while power * 2 <= n_max {
        s = s.mul(&s);
        power *= 2;
    }
    let image = unvec_col(&s.matvec(&vec_col(&ComplexMatrix::identity(ho))), ho);
    Ok(op_norm(&image).powf(1.0 / power as f64))
}

/// Knobs for [`diagnose`].
#[derive(Debug, Clone)]
pub struct DiagnoseConfig {
    pub tolerances: Tolerances,
    pub max_iter: usize,
    pub stability_n_max: usize,
    /// Truncation lengths at which the inner defect is sampled.
    pub inner_lengths: Vec<usize>,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        DiagnoseConfig {
            tolerances: Tolerances::default(),
            max_iter: 50_000,
            stability_n_max: 64,
            inner_lengths: vec![2, 4, 8],
        }
    }
}

/// Joint diagnostics: ergodicity, observability, stability and inner
/// defect, with their mutual consistency.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub fixed_space_dim: usize,
    pub ergodic: bool,
    pub gramian: ComplexMatrix,
    pub gramian_defect: f64,
    pub observable: bool,
    pub stability_radius_estimate: f64,
    pub stable: bool,
    pub inner_defects: Vec<(usize, f64)>,
    pub consistent: bool,
    pub xfixed: ComplexMatrix,
    pub gramian_converged: bool,
    pub xfixed_converged: bool,
    /// Set when verdicts disagree with at least one quantity inside the
    /// gray zone around its threshold, or an iteration failed to
    /// converge; such runs are excluded from consistency claims.
    pub indeterminate: bool,
}

/// Run every diagnostic on a valid model.
pub fn diagnose(model: &InteractionModel, cfg: &DiagnoseConfig) -> Result<DiagnosticsReport> {
    let tol = cfg.tolerances;
    let frame = canonical_frame(model)?;
    let col = extract_colligation(model, &frame)?;
    let red = reduce_colligation(&col)?;
    let sup = TransitionSuperoperator::new(&col);

    let fixed_dim = fixed_space_dim(&sup, tol.rank)?;
    let ergodic = fixed_dim == 1;

    let gram = observability_gramian(&red, tol.iteration, cfg.max_iter);
    let ho_id = ComplexMatrix::identity(red.dim_ho);
    let gramian_defect = op_norm(&ho_id.sub(&gram.value));
    let observable = if gram.converged {
        gramian_defect <= tol.verdict
    } else {
        // Boundary of observability: fall back on the ergodicity
        // cross-check; the run is flagged indeterminate below.
        ergodic
    };

    let radius = stability_radius(&red, cfg.stability_n_max)?;
    let stable = radius < 1.0 - tol.verdict;

    let xfix = x_fixed_point(&col, tol.iteration, cfg.max_iter);

    // Inner defect at the requested lengths, capped by the enumeration
    // budget for large alphabets.
    let mut lengths: Vec<usize> = cfg
        .inner_lengths
        .iter()
        .copied()
        .filter(|&n| {
            WordIndex::new(col.d, n)
                .map(|ix| ix.total() <= 200_000)
                .unwrap_or(false)
        })
        .collect();
    lengths.sort_unstable();
    lengths.dedup();
    let series = match lengths.last() {
        Some(&max_n) => Some(transfer::series(&col, max_n)?),
        None => None,
    };
    let mut inner_defects = Vec::with_capacity(lengths.len());
    if let Some(series) = &series {
        for &n in &lengths {
            inner_defects.push((n, transfer::inner_defect(series, n)?));
        }
    }

    let agree = ergodic == observable && observable == stable;
    let inner_ok = if agree && ergodic {
        let monotone = inner_defects
            .windows(2)
            .all(|w| w[1].1 <= w[0].1 + 1e-12);
        let tail_ok = inner_defects
            .iter()
            .all(|&(n, defect)| defect <= phi_power_norm(&red, n) + 1e-9);
        monotone && tail_ok
    } else {
        true
    };
    let consistent = agree && inner_ok;

    // Gray-zone detection: a verdict quantity within two decades of its
    // threshold cannot robustly separate the boundary.
    let near_rank = {
        let n = sup.dim_h * sup.dim_h;
        let shifted = sup.zhat.sub(&ComplexMatrix::identity(n));
        let sv = singular_values(&shifted);
        let smax = sv.first().copied().unwrap_or(0.0);
        let cut = if smax < tol.rank { tol.rank } else { tol.rank * smax };
        sv.iter().any(|&s| s > cut / 10.0 && s < cut * 10.0)
    };
    let near_obs = gramian_defect >= tol.verdict / 100.0 && gramian_defect <= tol.verdict * 100.0;
    let near_stab = (radius - (1.0 - tol.verdict)).abs() <= tol.verdict * 100.0;
    let indeterminate = !gram.converged
        || !xfix.converged
        || (!agree && (near_rank || near_obs || near_stab));

    Ok(DiagnosticsReport {
        fixed_space_dim: fixed_dim,
        ergodic,
        gramian: gram.value.clone(),
        gramian_defect,
        observable,
        stability_radius_estimate: radius,
        stable,
        inner_defects,
        consistent,
        xfixed: xfix.value,
        gramian_converged: gram.converged,
        xfixed_converged: xfix.converged,
        indeterminate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, C64};
    use crate::model::{generate, swap_qubits, GeneratorKind};
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn setup(kind: GeneratorKind, h: usize, k: usize) -> (Colligation, ReducedColligation) {
        let m = generate(kind, h, k, k).unwrap();
        let f = canonical_frame(&m).unwrap();
        let col = extract_colligation(&m, &f).unwrap();
        let red = reduce_colligation(&col).unwrap();
        (col, red)
    }

    #[test]
    fn superoperator_matches_direct_application() {
        let (col, _) = setup(GeneratorKind::Random(3), 3, 2);
        let sup = TransitionSuperoperator::new(&col);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let x = sampling::gaussian_matrix(&mut rng, 3, 3);
            let via_matrix = sup.apply(&x);
            let direct = transition_apply(&col, &x).unwrap();
            assert!(via_matrix.sub(&direct).fro_norm() < 1e-12);
        }
    }

    #[test]
    fn transition_is_unital() {
        for seed in 0..5u64 {
            let (col, _) = setup(GeneratorKind::Random(seed), 3, 3);
            let id = ComplexMatrix::identity(3);
            let z = transition_apply(&col, &id).unwrap();
            assert!(z.sub(&id).fro_norm() <= 1e-10);
        }
    }

    #[test]
    fn vacuum_state_is_invariant() {
        let (col, _) = setup(GeneratorKind::Random(9), 2, 2);
        let omega = &col.omega_h;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let x = sampling::hermitian_matrix(&mut rng, 2);
            let zx = transition_apply(&col, &x).unwrap();
            let lhs = omega.inner(&zx.matvec(omega));
            let rhs = omega.inner(&x.matvec(omega));
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn swap_transition_collapses_to_vacuum_expectation() {
        let (col, _) = setup(GeneratorKind::Swap, 2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = sampling::gaussian_matrix(&mut rng, 2, 2);
        let z = transition_apply(&col, &x).unwrap();
        let expected = ComplexMatrix::identity(2).scale(x.get(0, 0));
        assert!(z.sub(&expected).fro_norm() < 1e-12);
    }

    #[test]
    fn fixed_space_dimensions() {
        let (col, _) = setup(GeneratorKind::Swap, 2, 2);
        assert_eq!(fixed_space_dim(&TransitionSuperoperator::new(&col), 1e-9).unwrap(), 1);

        let (col, _) = setup(GeneratorKind::Identity, 2, 2);
        assert_eq!(fixed_space_dim(&TransitionSuperoperator::new(&col), 1e-9).unwrap(), 4);

        let (col, _) = setup(GeneratorKind::Random(2), 1, 2);
        assert_eq!(fixed_space_dim(&TransitionSuperoperator::new(&col), 1e-9).unwrap(), 1);
    }

    #[test]
    fn gramian_closed_forms() {
        let (_, red) = setup(GeneratorKind::Swap, 2, 2);
        let out = observability_gramian(&red, 1e-12, 1000);
        assert!(out.converged);
        assert!((out.value.get(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-12);

        let (_, red) = setup(GeneratorKind::Identity, 2, 2);
        let out = observability_gramian(&red, 1e-12, 1000);
        assert!(out.converged);
        assert!(out.value.fro_norm() < 1e-14);
    }

    #[test]
    fn gramian_iterates_monotone_bounded() {
        let (_, red) = setup(GeneratorKind::PartialSwap(PI / 4.0), 2, 2);
        let base = red.c.adjoint().mul(&red.c);
        let mut g = ComplexMatrix::zeros(red.dim_ho, red.dim_ho);
        for _ in 0..50 {
            let mut next = base.clone();
            for aj in &red.a {
                next = next.add(&aj.adjoint().mul(&g).mul(aj));
            }
            let (diff_evals, _) = hermitian_eig(&next.sub(&g)).unwrap();
            assert!(diff_evals.first().copied().unwrap_or(0.0) >= -1e-10);
            let (evals, _) = hermitian_eig(&next).unwrap();
            assert!(evals.last().copied().unwrap_or(0.0) <= 1.0 + 1e-8);
            g = next;
        }
    }

    #[test]
    fn x_fixed_point_closed_forms() {
        let (col, _) = setup(GeneratorKind::Swap, 2, 2);
        let out = x_fixed_point(&col, 1e-12, 1000);
        assert!(out.converged);
        assert!(out.value.sub(&ComplexMatrix::identity(2)).fro_norm() < 1e-10);

        let (col, _) = setup(GeneratorKind::Identity, 2, 2);
        let out = x_fixed_point(&col, 1e-12, 1000);
        assert!(out.converged);
        let p = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == 0 && j == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert!(out.value.sub(&p).fro_norm() < 1e-14);
    }

    #[test]
    fn xfixed_compression_equals_gramian() {
        for seed in [1u64, 5, 23] {
            let (col, red) = setup(GeneratorKind::Random(seed), 3, 2);
            let x = x_fixed_point(&col, 1e-13, 200_000).value;
            let g = observability_gramian(&red, 1e-13, 200_000).value;
            let e = &red.embedding;
            let compressed = e.adjoint().mul(&x).mul(e);
            assert!(compressed.sub(&g).fro_norm() <= 1e-6, "seed {seed}");
            // The full fixed point is p ⊕ G in the Ω ⊕ H° splitting.
            let h = col.dim_h;
            let p = ComplexMatrix::from_fn(h, h, |i, j| col.omega_h[i] * col.omega_h[j].conj());
            let assembled = p.add(&e.mul(&g).mul(&e.adjoint()));
            assert!(assembled.sub(&x).fro_norm() <= 1e-6, "seed {seed}");
        }
    }

    #[test]
    fn stability_radius_closed_forms() {
        let (_, red) = setup(GeneratorKind::Swap, 2, 2);
        assert!(stability_radius(&red, 64).unwrap() < 1e-12);

        let (_, red) = setup(GeneratorKind::Identity, 2, 2);
        assert!((stability_radius(&red, 64).unwrap() - 1.0).abs() <= 1e-6);

        // partial swap at θ has A° = e^{−iθ}cosθ on the 1-dim H°, so
        // the radius is cos²θ.
        let theta = PI / 4.0;
        let (_, red) = setup(GeneratorKind::PartialSwap(theta), 2, 2);
        let r = stability_radius(&red, 64).unwrap();
        assert!((r - theta.cos().powi(2)).abs() < 1e-10);

        assert!(stability_radius(&red, 3).is_err());
    }

    #[test]
    fn tail_bound_controls_inner_defect() {
        for kind in [GeneratorKind::Swap, GeneratorKind::PartialSwap(PI / 4.0)] {
            let (col, red) = setup(kind, 2, 2);
            let series = transfer::series(&col, 8).unwrap();
            for n in [2usize, 4, 8] {
                let defect = transfer::inner_defect(&series, n).unwrap();
                let bound = phi_power_norm(&red, n);
                assert!(defect <= bound + 1e-9, "{kind:?} n={n}: {defect} vs {bound}");
            }
        }
    }

    #[test]
    fn diagnose_swap_fixture() {
        let report = diagnose(&swap_qubits(), &DiagnoseConfig::default()).unwrap();
        assert_eq!(report.fixed_space_dim, 1);
        assert!(report.ergodic && report.observable && report.stable);
        assert!(report.consistent && !report.indeterminate);
        assert!(report.gramian_defect <= 1e-10);
        assert!(report.stability_radius_estimate < 1e-10);
        for &(_, d) in &report.inner_defects {
            assert!(d <= 1e-10);
        }
    }

    #[test]
    fn diagnose_identity_fixture() {
        let m = generate(GeneratorKind::Identity, 2, 2, 2).unwrap();
        let report = diagnose(&m, &DiagnoseConfig::default()).unwrap();
        assert_eq!(report.fixed_space_dim, 4);
        assert!(!report.ergodic && !report.observable && !report.stable);
        assert!(report.consistent && !report.indeterminate);
        assert!((report.gramian_defect - 1.0).abs() <= 1e-10);
        assert!((report.stability_radius_estimate - 1.0).abs() <= 1e-6);
        for &(_, d) in &report.inner_defects {
            assert!((d - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn diagnose_random_corpus_consistent() {
        for seed in 0..10u64 {
            let m = generate(GeneratorKind::Random(seed), 2, 2, 2).unwrap();
            let report = diagnose(&m, &DiagnoseConfig::default()).unwrap();
            assert!(!report.indeterminate, "seed {seed}");
            assert!(report.consistent, "seed {seed}");
        }
    }

    #[test]
    fn diagnose_dim_h_one() {
        let m = generate(GeneratorKind::Random(4), 1, 2, 2).unwrap();
        let report = diagnose(&m, &DiagnoseConfig::default()).unwrap();
        assert!(report.ergodic && report.observable && report.stable);
        assert_eq!(report.gramian_defect, 0.0);
        assert!(report.consistent);
    }
}
