// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Shared fixtures for the integration and acceptance suites.

use rimc_core::model::{
    canonical_frame, extract_colligation, reduce_colligation, BasisFrame, Colligation,
    GeneratorKind, InteractionModel, ReducedColligation,
};

pub struct Fixture {
    pub name: String,
    pub model: InteractionModel,
    pub frame: BasisFrame,
    pub col: Colligation,
    pub red: ReducedColligation,
}

pub fn fixture(name: &str, kind: GeneratorKind, h: usize, k: usize) -> Fixture {
    let model = rimc_core::model::generate(kind, h, k, k).expect("valid generator dims");
    let frame = canonical_frame(&model).expect("canonical frame");
    let col = extract_colligation(&model, &frame).expect("colligation");
    let red = reduce_colligation(&col).expect("reduction");
    Fixture {
        name: name.to_string(),
        model,
        frame,
        col,
        red,
    }
}

/// The closed-form corpus: identity, swap, three partial swaps.
pub fn closed_form_corpus() -> Vec<Fixture> {
    use std::f64::consts::PI;
    vec![
        fixture("identity", GeneratorKind::Identity, 2, 2),
        fixture("swap", GeneratorKind::Swap, 2, 2),
        fixture("partial_swap(pi/8)", GeneratorKind::PartialSwap(PI / 8.0), 2, 2),
        fixture("partial_swap(pi/4)", GeneratorKind::PartialSwap(PI / 4.0), 2, 2),
        fixture(
            "partial_swap(3pi/8)",
            GeneratorKind::PartialSwap(3.0 * PI / 8.0),
            2,
            2,
        ),
    ]
}

pub fn random_fixture(seed: u64, h: usize, k: usize) -> Fixture {
    fixture(
        &format!("random(seed={seed},dims=({h},{k},{k}))"),
        GeneratorKind::Random(seed),
        h,
        k,
    )
}
