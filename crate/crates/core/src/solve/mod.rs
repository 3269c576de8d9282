//! Counting product vectors in `C^2 ⊗ C^n`: eliminate `w`, find candidate
//! roots, keep the conjugate-consistent ones, and recover `y` from the
//! kernel of `L`.

mod oracle;
mod pipeline;
mod roots;

pub use oracle::brute_force_count_2xn;
pub use pipeline::{
    count_product_vectors_2xn, dedup_solutions, null_space_y, projective_distance, CountCertificate, ProductVectorSolution, RankCertificate,
    Tolerances,
};
pub use roots::{roots, RootCluster};

use crate::numeric::NumericError;
use crate::poly::PolyError;
use crate::subspace::SubspaceError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("cannot take the roots of the zero polynomial")]
    ZeroPolynomial,
    #[error("matrix has full rank: no kernel vector")]
    FullRank,
    #[error("matrix has rank {rank}, below n-1 = {expected}: the kernel is not a line")]
    RankDeficient { rank: usize, expected: usize },
    #[error("numerically indeterminate: {0}")]
    Indeterminate(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
