//! Shared fixtures for the benchmarks.

use heisvoc_core::series::{ExponentWindow, Var};
use heisvoc_core::{basis_up_to, FockVector, Rank, VocContext};

pub fn context(d: u32) -> VocContext {
    VocContext::new(Rank::new(d).expect("positive rank"))
}

pub fn basis_vectors(ctx: &VocContext, max_weight: usize) -> Vec<FockVector> {
    basis_up_to(ctx.rank(), max_weight)
        .into_iter()
        .map(FockVector::monomial)
        .collect()
}

/// The cube `[lo, hi]^3` in `x0, x1, x2`.
pub fn jacobi_window(lo: i64, hi: i64) -> ExponentWindow {
    ExponentWindow::cube(&[Var::X0, Var::X1, Var::X2], lo, hi).expect("nonempty window")
}
