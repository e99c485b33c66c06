//! `|H²(G, A)| = |Z²| / |B²|` with `|Z²| = |C²| / |B³|`.
//!
//! Cochains are normalized throughout, so `|C²| = |A|^{(|G|−1)²}`; `B³` is
//! the image of the normalized `C²` under `∂²` and `Z²` its kernel.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::abelian::{decompose_abelian, AbelianError};
use crate::cohomology::{b2_generators, coboundary2, delta2, regular_image, Cochain2, GModule, OracleModule, TableModule};
use crate::group::oracle::{generator_count, random_generating_set};
use crate::group::{ActionSpec, GroupOracle, GroupTable, Handle, OracleAction, ProductOracle};
use crate::par;
use crate::permgroup::{schreier_sims, PermError};

/// Largest permutation degree `|A|·|G|³` built for `B³` in table mode.
pub const B3_POINT_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("{numerator} is not divisible by {denominator}")]
    NonDivisible { numerator: BigUint, denominator: BigUint },
    #[error("B³ needs {points} points, above the cap of {cap}")]
    CapExceeded { points: usize, cap: usize },
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyCount {
    pub size_c2: BigUint,
    pub size_b2: BigUint,
    pub size_b3: BigUint,
    pub size_z2: BigUint,
    pub size_h2: BigUint,
}

impl CohomologyCount {
    fn from_sizes(size_c2: BigUint, size_b2: BigUint, size_b3: BigUint) -> Result<Self, CountError> {
        let size_z2 = exact_div(&size_c2, &size_b3)?;
        let size_h2 = exact_div(&size_z2, &size_b2)?;
        Ok(CohomologyCount { size_c2, size_b2, size_b3, size_z2, size_h2 })
    }
}

impl fmt::Display for CohomologyCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "H2 |C2|={} |B3|={} |Z2|={} |B2|={} |H2|={}",
            self.size_c2, self.size_b3, self.size_z2, self.size_b2, self.size_h2
        )
    }
}

fn exact_div(n: &BigUint, d: &BigUint) -> Result<BigUint, CountError> {
    let (q, r) = n.div_rem(d);
    if d.is_zero() || !r.is_zero() {
        return Err(CountError::NonDivisible { numerator: n.clone(), denominator: d.clone() });
    }
    Ok(q)
}

fn c2_size(a_order: &BigUint, g_order: usize) -> BigUint {
    let e = (g_order - 1) * (g_order - 1);
    num_traits::pow(a_order.clone(), e)
}

/// Counts with every group given by its table; `B²` and `B³` orders come
/// from permutation groups.
pub fn count_h2_table(g: &GroupTable, a: &GroupTable, action: &ActionSpec) -> Result<CohomologyCount, CountError> {
    count_h2_table_with_cap(g, a, action, B3_POINT_CAP)
}

pub fn count_h2_table_with_cap(
    g: &GroupTable,
    a: &GroupTable,
    action: &ActionSpec,
    cap: usize,
) -> Result<CohomologyCount, CountError> {
    let n = g.order();
    let points = a.order().saturating_mul(n.pow(3));
    if points > cap {
        return Err(CountError::CapExceeded { points, cap });
    }
    let m = TableModule::new(a, action);
    let a_gens: Vec<u32> = a.generating_set().into_iter().map(|x| x as u32).collect();
    let (b2, b3) = par::join(
        || -> Result<BigUint, CountError> {
            let perms = par::map_slice(&b2_generators(g, &a_gens, &m), |f| regular_image(f.values(), a));
            Ok(schreier_sims(&perms, a.order() * n * n)?.order())
        },
        || -> Result<BigUint, CountError> {
            let perms = par::map_slice(&c2_basis(n, a_gens.len()), |&(x, y, k)| {
                let f = delta2(n, x, y, &a_gens[k], &m);
                regular_image(coboundary2(&f, g, &m).values(), a)
            });
            Ok(schreier_sims(&perms, points)?.order())
        },
    );
    CohomologyCount::from_sizes(c2_size(&BigUint::from(a.order()), n), b2?, b3?)
}

fn c2_basis(n: usize, gens: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for x in 1..n {
        for y in 1..n {
            for k in 0..gens {
                out.push((x, y, k));
            }
        }
    }
    out
}

/// Counts with `A` given as a black box and `G` as a table. `B²`, `B³`
/// and `A` are measured by decomposing the subgroups their generators span.
/// Random elements drawn from `seed` are added to the generators of `A`.
pub fn count_h2_bbox(
    g: &GroupTable,
    a: Arc<dyn GroupOracle>,
    action: Option<Arc<dyn OracleAction>>,
    seed: u64,
    sample_multiplier: usize,
) -> Result<CohomologyCount, CountError> {
    let n = g.order();
    let mut a_gens = a.generators();
    a_gens.extend(random_generating_set(a.as_ref(), seed, generator_count(sample_multiplier, a.order_bound())));
    let a_order = decompose_abelian(&a_gens, a.clone())?.order();
    if n == 1 {
        return CohomologyCount::from_sizes(BigUint::one(), BigUint::one(), BigUint::one());
    }
    let m = OracleModule::new(a.clone(), action);
    let (b2, b3) = par::join(
        || -> Result<BigUint, CountError> {
            let prod = ProductOracle::new(a.clone(), (n - 1) * (n - 1));
            let gens = par::map_slice(&b2_generators(g, &a_gens, &m), |f| pair_entries(&prod, f));
            Ok(decompose_abelian(&gens, Arc::new(prod))?.order())
        },
        || -> Result<BigUint, CountError> {
            let prod = ProductOracle::new(a.clone(), (n - 1).pow(3));
            let gens = par::map_slice(&c2_basis(n, a_gens.len()), |&(x, y, k)| {
                let f = delta2(n, x, y, &a_gens[k], &m);
                let d = coboundary2(&f, g, &m);
                let parts: Vec<Handle> = triples(n).map(|(x, y, z)| d.get(x, y, z).clone()).collect();
                prod.join(&parts)
            });
            Ok(decompose_abelian(&gens, Arc::new(prod))?.order())
        },
    );
    CohomologyCount::from_sizes(c2_size(&a_order, n), b2?, b3?)
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..n).flat_map(move |x| (1..n).flat_map(move |y| (1..n).map(move |z| (x, y, z))))
}

fn pair_entries(p: &ProductOracle, f: &Cochain2<Handle>) -> Handle {
    let n = f.order();
    let parts: Vec<Handle> = (1..n).flat_map(|x| (1..n).map(move |y| (x, y))).map(|(x, y)| f.get(x, y).clone()).collect();
    p.join(&parts)
}

/// `∏ᵢ |A / dᵢA| · ∏_{i<j} |A[gcd(dᵢ, dⱼ)]|` for an abelian `G` with
/// invariants `d` and trivial action: the number of classes of central
/// extensions distinguished by the `α`/`β` invariants.
pub fn central_abelian_count(d: &[u64], a: &GroupTable) -> BigUint {
    let m = TableModule::new(a, &ActionSpec::Trivial);
    let multiples = |k: u64| (0..a.order() as u32).filter(|x| (0..a.order() as u32).any(|y| m.times(&y, k) == *x)).count();
    let torsion = |k: u64| (0..a.order() as u32).filter(|x| m.times(x, k) == 0).count();
    let mut out = BigUint::one();
    for (i, &di) in d.iter().enumerate() {
        out *= a.order() / multiples(di);
        for &dj in &d[i + 1..] {
            out *= torsion(num_integer::gcd(di, dj));
        }
    }
    out
}
