//! Finite groups as tables and as black boxes, and extension instances.

mod action;
pub(crate) mod codec;
mod encoded;
mod extension;
pub mod oracle;
mod product;
mod table;
mod units;

use thiserror::Error;

pub use action::ActionSpec;
pub use codec::Codec;
pub use encoded::{wrap_as_oracle, EncodedOracle};
pub use extension::{shared_instances, ExtensionInstance, ExtensionMaps, OracleAction, Quotient, TableExtension, TableOracleAction};
pub use oracle::{random_generating_set, GroupOracle, Handle};
pub use product::ProductOracle;
pub use table::{validate_table, GroupTable, EXHAUSTIVE_ASSOCIATIVITY_MAX, UNITS_TABLE_MAX};
pub use units::UnitsOracle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty table")]
    Empty,
    #[error("row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: u32 },
    #[error("element 0 is not an identity (fails at {element})")]
    NoIdentity { element: usize },
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("not associative: ({x}·{y})·{z} ≠ {x}·({y}·{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("modulus {n} is out of range")]
    NOutOfRange { n: u64 },
    #[error("group exceeds the enumeration cap of {cap} elements")]
    TooLarge { cap: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
}
