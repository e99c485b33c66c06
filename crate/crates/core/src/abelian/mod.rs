//! Finite abelian groups: orders, factoring, primary splitting, Smith forms,
//! decompositions into cyclic factors, coordinates and roots.

pub mod arith;
mod decompose;
mod local;
mod order;
mod snf;

use thiserror::Error;

pub use arith::{factorize, Factorization};
pub use decompose::{decompose_abelian, p_primary_split, AbelianDecomposition};
pub use order::{element_order, OrderFinder, BSGS_LIMIT};
pub use snf::{determinant, mat_mul, smith_normal_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("element order exceeds the bound {bound}")]
    BoundExceeded { bound: u64 },
    #[error("generators {i} and {j} do not commute")]
    NotAbelian { i: usize, j: usize },
    #[error("element is not in the decomposed group")]
    NotInGroup,
    #[error("discrete log over rank-{rank} elementary {p}-group is beyond the table limit")]
    DlogTooLarge { p: u64, rank: usize },
}
