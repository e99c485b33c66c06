//! Deciding equivalence of group extensions and counting them.
//!
//! An extension of `G` by an abelian group `A` is described by a factor set
//! (a normalized 2-cocycle) and two extensions are equivalent exactly when
//! the difference of their factor sets is a 2-coboundary. The crate provides
//! three deciders for that question, depending on how the groups are given:
//!
//! * [`equivalence::test_equiv_table`]: every group is a multiplication
//!   table; membership is tested in a permutation image of `C²(G, A)`.
//! * [`equivalence::test_equiv_bbox_small_g`]: `A` and the extensions are
//!   black-box groups, `G` is a table; subgroup orders are compared.
//! * [`equivalence::test_equiv_bbox_abelian_g`]: everything is a black box,
//!   `G` is abelian and the extensions are central; the `α`/`β` invariants
//!   decide.
//!
//! [`counting`] computes `|H²(G, A)|`, [`hardness`] builds black-box
//! extensions from factor sets (including quadratic-residuosity instances),
//! and [`oracle`] holds exhaustive reference implementations.

pub mod abelian;
pub mod cohomology;
pub mod counting;
pub mod equivalence;
pub mod group;
pub mod hardness;
pub mod io;
pub mod oracle;
pub mod par;
pub mod permgroup;
pub mod seed;

pub use abelian::{AbelianDecomposition, Factorization};
pub use cohomology::{Cochain1, Cochain2, Cochain3, GModule, OracleModule, TableModule};
pub use counting::CohomologyCount;
pub use equivalence::{Certificate, EquivConfig, EquivalenceVerdict, StructuralInvariants};
pub use group::{
    ActionSpec, EncodedOracle, ExtensionInstance, GroupOracle, GroupTable, Handle, ProductOracle,
    TableExtension, UnitsOracle,
};
pub use permgroup::{Permutation, StrongGeneratingSet};
