//! Cochains, coboundary maps, cocycle checks, sections and factor sets.

mod cochain;
mod section;

use std::fmt::Debug;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{ActionSpec, GroupOracle, GroupTable, Handle, OracleAction};

pub use cochain::{
    b2_generators, c2_generators, coboundary, coboundary2, cocycle_violation, delta1, delta2, is_cocycle,
    regular_image, Cochain1, Cochain2, Cochain3,
};
pub use section::{
    choose_representatives_sampled, choose_representatives_table, default_budget, extract_factor_set,
    extract_factor_set_table,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("cochain is not normalized at {0:?}")]
    NotNormalized(Vec<usize>),
    #[error("cochain has {got} values, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("element {g} of G has no preimage")]
    ProjectionIncomplete { g: usize },
    #[error("sampling budget exhausted; cosets never hit: {missing:?}")]
    BudgetExhausted { missing: Vec<usize> },
    #[error("factor-set value at ({x}, {y}) lies outside A")]
    ValueOutsideA { x: usize, y: usize },
    #[error("the quotient must be given by a table")]
    QuotientNotTable,
}

/// An abelian group `A`, written additively, with a left action of a table
/// group `G` through automorphisms.
pub trait GModule: Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `φ(x)(a)`.
    fn act(&self, x: usize, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn times(&self, a: &Self::Elem, mut k: u64) -> Self::Elem {
        let mut acc = self.zero();
        let mut b = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &b);
            }
            b = self.add(&b, &b);
            k >>= 1;
        }
        acc
    }
}

/// `A` as a table, elements are indices.
#[derive(Clone, Copy)]
pub struct TableModule<'a> {
    pub a: &'a GroupTable,
    pub action: &'a ActionSpec,
}

impl<'a> TableModule<'a> {
    pub fn new(a: &'a GroupTable, action: &'a ActionSpec) -> Self {
        TableModule { a, action }
    }
}

impl GModule for TableModule<'_> {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.a.mul(*a as usize, *b as usize) as u32
    }

    fn neg(&self, a: &u32) -> u32 {
        self.a.inv(*a as usize) as u32
    }

    fn act(&self, x: usize, a: &u32) -> u32 {
        self.action.apply(x, *a as usize) as u32
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn equal(&self, a: &u32, b: &u32) -> bool {
        a == b
    }
}

/// `A` as a black box; the action is absent for central extensions.
#[derive(Clone)]
pub struct OracleModule {
    pub oracle: Arc<dyn GroupOracle>,
    pub action: Option<Arc<dyn OracleAction>>,
}

impl OracleModule {
    pub fn new(oracle: Arc<dyn GroupOracle>, action: Option<Arc<dyn OracleAction>>) -> Self {
        OracleModule { oracle, action }
    }
}

impl GModule for OracleModule {
    type Elem = Handle;

    fn zero(&self) -> Handle {
        self.oracle.identity()
    }

    fn add(&self, a: &Handle, b: &Handle) -> Handle {
        self.oracle.compose(a, b)
    }

    fn neg(&self, a: &Handle) -> Handle {
        self.oracle.invert(a)
    }

    fn act(&self, x: usize, a: &Handle) -> Handle {
        match &self.action {
            Some(act) if x != 0 => act.act(x, a),
            _ => a.clone(),
        }
    }

    fn is_zero(&self, a: &Handle) -> bool {
        self.oracle.is_identity(a)
    }

    fn equal(&self, a: &Handle, b: &Handle) -> bool {
        self.oracle.equal(a, b)
    }
}
