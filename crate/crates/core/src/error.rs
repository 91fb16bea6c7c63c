// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by all modules.

/// Errors raised by the library.
///
/// `Shape` and `Dimension` indicate malformed or inconsistent input,
/// `Guard` a refused resource budget, `Numeric` a violated numerical
/// precondition, and `InvalidModel` an interaction model whose axioms
/// fail beyond tolerance.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("resource guard: {0}")]
    Guard(String),
    #[error("numerical precondition violated: {0}")]
    Numeric(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("malformed model file: {0}")]
    Parse(String),
}
