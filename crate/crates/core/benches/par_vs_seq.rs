// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Parallel vs sequential paths for the two hot loops: the transfer
//! series word-tree walk and the chain evolution contraction.
//!
//! With the default `parallel` feature, each group benches the rayon
//! path against the `*_seq` fallback; built with
//! `--no-default-features` both names run the sequential code, which
//! gives the baseline for cross-build comparison.

use criterion::{criterion_group, criterion_main, Criterion};

use rimc_core::model::{canonical_frame, extract_colligation, generate, GeneratorKind};
use rimc_core::scattering::{evolve, evolve_seq, ChainState};
use rimc_core::transfer::{series, series_seq};

fn bench_transfer_series(c: &mut Criterion) {
    let model = generate(GeneratorKind::Random(11), 4, 4, 4).unwrap();
    let frame = canonical_frame(&model).unwrap();
    let col = extract_colligation(&model, &frame).unwrap();
    let max_len = 7; // 4^8/3 ≈ 21k words

    let mut group = c.benchmark_group("transfer_series");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| series(&col, max_len).unwrap());
    });
    group.bench_function("sequential", |b| {
        b.iter(|| series_seq(&col, max_len).unwrap());
    });
    group.finish();
}

fn bench_chain_evolve(c: &mut Criterion) {
    let model = generate(GeneratorKind::Random(3), 2, 2, 2).unwrap();
    let n_slots = 18; // 2^19 amplitudes
    let xi = rimc_core::ComplexVector::basis(2, 1);
    let state = ChainState::embed(&model, &xi, &[], n_slots).unwrap();

    let mut group = c.benchmark_group("chain_evolve");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| evolve(&model, &state, n_slots).unwrap());
    });
    group.bench_function("sequential", |b| {
        b.iter(|| evolve_seq(&model, &state, n_slots).unwrap());
    });
    group.finish();
}

criterion_group!(benches, bench_transfer_series, bench_chain_evolve);
criterion_main!(benches);
