use std::sync::Arc;

use super::{Certificate, EquivConfig, EquivError, EquivalenceVerdict};
use crate::abelian::decompose_abelian;
use crate::cohomology::{
    b2_generators, choose_representatives_sampled, default_budget, extract_factor_set, Cochain1, Cochain2,
    CohomologyError, GModule, OracleModule,
};
use crate::group::{ExtensionInstance, GroupOracle, GroupTable, Handle, ProductOracle};
use crate::par;
use crate::seed::derive;

pub(super) fn check_shared(e1: &ExtensionInstance, e2: &ExtensionInstance) -> Result<(), EquivError> {
    if !Arc::ptr_eq(e1.kernel(), e2.kernel()) {
        return Err(EquivError::InstanceMismatch("extensions must share the oracle for A".into()));
    }
    if !Arc::ptr_eq(&e1.quotient_oracle(), &e2.quotient_oracle()) {
        return Err(EquivError::InstanceMismatch("extensions must share the oracle for G".into()));
    }
    if e1.is_central() != e2.is_central() {
        return Err(EquivError::InstanceMismatch("one extension is central and the other is not".into()));
    }
    Ok(())
}

fn factor_set(inst: &ExtensionInstance, seed: u64, budget: usize) -> Result<Cochain2<Handle>, EquivError> {
    let s = choose_representatives_sampled(inst, seed, budget)?;
    Ok(extract_factor_set(inst, &s)?)
}

// The entries of a normalized 2-cochain away from the identity, as one
// element of the product of (|G| − 1)² copies of A.
fn to_product(p: &ProductOracle, f: &Cochain2<Handle>) -> Handle {
    let n = f.order();
    let parts: Vec<Handle> = (1..n).flat_map(|x| (1..n).map(move |y| (x, y))).map(|(x, y)| f.get(x, y).clone()).collect();
    p.join(&parts)
}

/// Tests two black-box extensions of a table group `G` by a black-box `A`.
/// The extensions must share their `A` and `G` oracles.
pub fn test_equiv_bbox_small_g(
    e1: &ExtensionInstance,
    e2: &ExtensionInstance,
    cfg: &EquivConfig,
) -> Result<EquivalenceVerdict<Handle>, EquivError> {
    check_shared(e1, e2)?;
    let g: GroupTable = e1.quotient_table().ok_or(CohomologyError::QuotientNotTable)?.clone();
    let n = g.order();
    let kernel = e1.kernel().clone();
    let m = OracleModule::new(kernel.clone(), e1.action().cloned());
    if n == 1 {
        let witness = Cochain1::zero(1, &m);
        return Ok(EquivalenceVerdict { equivalent: true, certificate: Certificate::Coboundary { witness } });
    }
    let budget = cfg.budget.unwrap_or_else(|| default_budget(n, cfg.sample_multiplier));
    let (f1, f2) = par::join(|| factor_set(e1, derive(cfg.seed, 1), budget), || factor_set(e2, derive(cfg.seed, 2), budget));
    let diff = f1?.sub(&f2?, &m);

    let a_gens = kernel.generators();
    let product = ProductOracle::new(kernel.clone(), (n - 1) * (n - 1));
    let b2 = b2_generators(&g, &a_gens, &m);
    let gens: Vec<Handle> = par::map_slice(&b2, |f| to_product(&product, f));
    let d = to_product(&product, &diff);
    let mut extended = gens.clone();
    extended.push(d.clone());
    let oracle: Arc<dyn GroupOracle> = Arc::new(product);
    let (base, ext) = par::join(|| decompose_abelian(&gens, oracle.clone()), || decompose_abelian(&extended, oracle.clone()));
    let (base, ext) = (base?, ext?);
    if base.order() != ext.order() {
        return Ok(EquivalenceVerdict {
            equivalent: false,
            certificate: Certificate::SizeGap { b2: base.order(), extended: ext.order() },
        });
    }
    // express the difference over the pushed-forward generators ∂δ_{x,a}
    let coords = base.coordinates(&d)?;
    let modulus = base.exponent().max(1);
    let k = gens.len();
    let mut values = vec![m.zero(); n];
    for j in 0..k {
        let e = coords.iter().zip(base.from_generators()).fold(0u128, |acc, (&c, row)| {
            (acc + (c as u128 % modulus) * (row[j] as u128 % modulus) % modulus) % modulus
        });
        if e == 0 {
            continue;
        }
        let x = 1 + j / a_gens.len();
        let a = &a_gens[j % a_gens.len()];
        values[x] = m.add(&values[x], &m.times(a, e as u64));
    }
    let witness = Cochain1::new(values, &m)?;
    Ok(EquivalenceVerdict { equivalent: true, certificate: Certificate::Coboundary { witness } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::verify_witness;
    use crate::group::{shared_instances, TableExtension};
    use crate::hardness::make_qr_instance;

    #[test]
    fn qr_fifteen() {
        let cfg = EquivConfig::with_seed(3);
        for (y, expect) in [(1, true), (4, true), (2, false), (7, false)] {
            let inst = make_qr_instance(15, y, 11).unwrap();
            let v = test_equiv_bbox_small_g(&inst.e1, &inst.e2, &cfg).unwrap();
            assert_eq!(v.equivalent, expect, "y = {y}");
            if expect {
                let m = OracleModule::new(inst.kernel.clone(), None);
                let s1 = choose_representatives_sampled(&inst.e1, derive(3, 1), 64).unwrap();
                let s2 = choose_representatives_sampled(&inst.e2, derive(3, 2), 64).unwrap();
                let diff = extract_factor_set(&inst.e1, &s1).unwrap().sub(&extract_factor_set(&inst.e2, &s2).unwrap(), &m);
                assert!(verify_witness(&v, &diff, &inst.quotient, &m));
            }
        }
    }

    #[test]
    fn non_central_dihedral() {
        let d4 = TableExtension::new(
            GroupTable::dihedral(4),
            GroupTable::cyclic(4),
            GroupTable::cyclic(2),
            vec![0, 0, 0, 0, 1, 1, 1, 1],
            vec![0, 1, 2, 3],
        )
        .unwrap();
        let q8 = TableExtension::new(
            GroupTable::quaternion(),
            GroupTable::cyclic(4),
            GroupTable::cyclic(2),
            quaternion_projection(),
            quaternion_embedding(),
        );
        let insts = shared_instances(&[&d4, &d4], 7);
        let v = test_equiv_bbox_small_g(&insts[0], &insts[1], &EquivConfig::default()).unwrap();
        assert!(v.equivalent);
        if let Ok(q8) = q8 {
            let insts = shared_instances(&[&d4, &q8], 7);
            let v = test_equiv_bbox_small_g(&insts[0], &insts[1], &EquivConfig::default()).unwrap();
            assert!(!v.equivalent);
        }
    }

    fn quaternion_projection() -> Vec<u32> {
        let q = GroupTable::quaternion();
        let i = (1..8).find(|&x| q.element_order(x) == 4).unwrap();
        let sub = q.closure(&[i]);
        (0..8).map(|x| if sub[x] { 0 } else { 1 }).collect()
    }

    fn quaternion_embedding() -> Vec<u32> {
        let q = GroupTable::quaternion();
        let i = (1..8).find(|&x| q.element_order(x) == 4).unwrap();
        (0..4).map(|k| q.pow(i, k) as u32).collect()
    }
}
