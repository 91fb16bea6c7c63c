// Copyright 2026 rimc Contributors
// SPDX-License-Identifier: Apache-2.0

//! Internal dispatch between rayon and plain iteration.
//!
//! Every caller passes an explicit `parallel` flag so that the `*_seq`
//! entry points stay single-threaded even when the `parallel` feature
//! is compiled in. Outputs are position-indexed, so results are
//! identical regardless of scheduling.

/// Problems smaller than this run sequentially even with `parallel`.
pub(crate) const PAR_MIN_LEN: usize = 1 << 12;

/// `(0..len).map(f)` collected in order.
pub(crate) fn map_range<T, F>(len: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if parallel && len >= PAR_MIN_LEN {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    let _ = parallel;
    (0..len).map(f).collect()
}

/// Map over owned items, preserving order.
pub(crate) fn map_vec<I, T, F>(items: Vec<I>, parallel: bool, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if parallel && items.len() > 1 {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
    }
    let _ = parallel;
    items.into_iter().map(f).collect()
}
