//! Product vectors `x ⊗ y ∈ D` with `x̄ ⊗ y ∈ E` for pairs of subspaces of
//! `C^m ⊗ C^n`, with exact elimination and certified counts for `m = 2`.

pub mod classify;
pub mod cli;
pub mod fixtures;
pub mod linalg;
pub mod numeric;
pub mod poly;
pub mod solve;
pub mod subspace;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/resultants.md")]
    mod resultants {}
    #[doc = include_str!("../../../book/src/subspaces.md")]
    mod subspaces {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
