//! Deciding whether two extensions of `G` by `A` are equivalent.
//!
//! Extensions `E₁`, `E₂` with factor sets `f₁`, `f₂` are equivalent iff
//! `f₁ − f₂ = ∂v` for some 1-cochain `v`. Three deciders:
//!
//! * [`test_equiv_table`]: tables throughout, membership of `f₁ − f₂` in
//!   `B²(G, A)` through a permutation representation of `C²(G, A)`;
//! * [`test_equiv_bbox_small_g`]: black-box `A` and `Eᵢ`, table `G`;
//!   compares `|⟨B² gens⟩|` with `|⟨B² gens, f₁ − f₂⟩|`;
//! * [`test_equiv_bbox_abelian_g`]: everything black-box, `G` abelian and
//!   the extensions central; compares the invariants `αᵢ = sᵢ^{dᵢ}` (up to
//!   `dᵢ`-th powers) and `βᵢⱼ = [sᵢ, sⱼ⁻¹]`.

mod bbox;
mod invariants;
mod table;

use num_bigint::BigUint;
use thiserror::Error;

use crate::abelian::AbelianError;
use crate::cohomology::{coboundary, Cochain1, Cochain2, CohomologyError, GModule};
use crate::group::{GroupError, GroupTable};
use crate::permgroup::{PermError, Permutation};

pub use bbox::test_equiv_bbox_small_g;
pub use invariants::{structural_invariants, MIN_SAMPLES, test_equiv_bbox_abelian_g, StructuralInvariants};
pub use table::{test_equiv_table, TableTester};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("instances do not match: {0}")]
    InstanceMismatch(String),
    #[error("extension is not central")]
    NotCentral,
    #[error("quotient group is not abelian")]
    NotAbelian,
    #[error("sampled elements failed to generate G after {attempts} attempts")]
    BudgetExhausted { attempts: usize },
    #[error("sampled elements of E project outside the decomposed quotient")]
    IncompleteQuotient,
    #[error("element expected in A projects to a non-identity element of G")]
    ValueOutsideA,
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug)]
pub struct EquivConfig {
    pub seed: u64,
    /// Samples per bit of group-order bound when drawing random generators.
    pub sample_multiplier: usize,
    /// Section sampling budget; `None` picks the default for `|G|`.
    pub budget: Option<usize>,
    /// Fresh attempts at generating `G` from samples before giving up.
    pub retries: usize,
    /// Table path: push forward random elements of `A` instead of a fixed
    /// generating set.
    pub random_a_generators: bool,
}

impl Default for EquivConfig {
    fn default() -> Self {
        EquivConfig { seed: 0, sample_multiplier: 4, budget: None, retries: 4, random_a_generators: false }
    }
}

impl EquivConfig {
    pub fn with_seed(seed: u64) -> Self {
        EquivConfig { seed, ..Self::default() }
    }
}

/// Evidence for a verdict. `T` is the element type of `A`.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate<T> {
    /// `∂ witness = f₁ − f₂`.
    Coboundary { witness: Cochain1<T> },
    /// `rootsᵢ^{dᵢ} = quotientsᵢ` with `quotientsᵢ = αᵢ⁻¹α′ᵢ`.
    Roots { d: Vec<u64>, quotients: Vec<T>, roots: Vec<T> },
    /// `f₁ − f₂` sifted to a non-identity residue at `level`.
    NonMember { level: usize, residue: Permutation },
    /// `|⟨B²⟩|` against `|⟨B², f₁ − f₂⟩|`.
    SizeGap { b2: BigUint, extended: BigUint },
    /// `βᵢⱼ ≠ β′ᵢⱼ`.
    CommutatorMismatch { i: usize, j: usize },
    /// `αᵢ⁻¹α′ᵢ` has no `d`-th root.
    NoRoot { i: usize, d: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceVerdict<T> {
    pub equivalent: bool,
    pub certificate: Certificate<T>,
}

impl<T> EquivalenceVerdict<T> {
    pub fn has_witness(&self) -> bool {
        matches!(self.certificate, Certificate::Coboundary { .. } | Certificate::Roots { .. })
    }
}

/// Replays the witness of an equivalent verdict: recomputes `∂v` and
/// compares with `f_diff`, or raises each root to its power.
pub fn verify_witness<M: GModule>(
    v: &EquivalenceVerdict<M::Elem>,
    f_diff: &Cochain2<M::Elem>,
    g: &GroupTable,
    m: &M,
) -> bool {
    match &v.certificate {
        Certificate::Coboundary { witness } => {
            witness.order() == g.order() && m.is_zero(witness.get(0)) && coboundary(witness, g, m).equal(f_diff, m)
        }
        Certificate::Roots { d, quotients, roots } => {
            d.len() == roots.len()
                && d.len() == quotients.len()
                && d.iter().zip(roots).zip(quotients).all(|((&d, r), q)| m.equal(&m.times(r, d), q))
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{delta1, TableModule};
    use crate::group::ActionSpec;

    #[test]
    fn witness_replay() {
        let g = GroupTable::cyclic(2);
        let a = GroupTable::cyclic(4);
        let triv = ActionSpec::Trivial;
        let m = TableModule::new(&a, &triv);
        let zero = Cochain2::zero(2, &m);
        let v = EquivalenceVerdict { equivalent: true, certificate: Certificate::Coboundary { witness: Cochain1::zero(2, &m) } };
        assert!(verify_witness(&v, &zero, &g, &m));
        let w = delta1(2, 1, &1, &m);
        let diff = coboundary(&w, &g, &m);
        let v = EquivalenceVerdict { equivalent: true, certificate: Certificate::Coboundary { witness: w } };
        assert!(verify_witness(&v, &diff, &g, &m));
        let bad = EquivalenceVerdict {
            equivalent: true,
            certificate: Certificate::Coboundary { witness: delta1(2, 1, &2, &m) },
        };
        assert!(!verify_witness(&bad, &diff, &g, &m));
    }
}
