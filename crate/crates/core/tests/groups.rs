use std::sync::Arc;

use proptest::prelude::*;

use cohomolib::group::oracle::{commutator, enumerate_subgroup};
use cohomolib::group::{shared_instances, EncodedOracle, GroupOracle};
use cohomolib::hardness::{build_extensions_table, realize_extension_table};
use cohomolib::oracle::enumerate_cohomology;
use cohomolib::{ActionSpec, GroupTable};

fn tables() -> Vec<GroupTable> {
    vec![
        GroupTable::trivial(),
        GroupTable::cyclic(7),
        GroupTable::abelian(&[2, 4, 4]),
        GroupTable::dihedral(5),
        GroupTable::quaternion(),
        GroupTable::units_mod_n(1001).unwrap(),
        GroupTable::cyclic(512),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn encoded_oracle_matches_table(seed in any::<u64>(), which in 0usize..7) {
        let t = tables().swap_remove(which);
        let o = EncodedOracle::new(t.clone(), seed);
        let n = t.order();
        for x in 0..n {
            prop_assert_eq!(o.decode(&o.encode(x)), Some(x));
        }
        let step = if n > 64 { 7 } else { 1 };
        for x in (0..n).step_by(step) {
            let hx = o.encode(x);
            prop_assert_eq!(o.decode(&o.invert(&hx)), Some(t.inv(x)));
            for y in (0..n).step_by(step) {
                prop_assert_eq!(o.decode(&o.compose(&hx, &o.encode(y))), Some(t.mul(x, y)));
            }
        }
        prop_assert!(o.is_identity(&o.identity()));
        prop_assert_eq!(enumerate_subgroup(&o, &o.generators(), 1 << 12).unwrap().len(), n);
    }
}

#[test]
fn extension_instances_project_homomorphically_and_central_flag_is_sound() {
    for (g, a) in [
        (GroupTable::cyclic(2), GroupTable::cyclic(4)),
        (GroupTable::abelian(&[2, 2]), GroupTable::cyclic(2)),
        (GroupTable::cyclic(3), GroupTable::cyclic(3)),
    ] {
        let en = enumerate_cohomology(&g, &a, &ActionSpec::Trivial).unwrap();
        let insts = build_extensions_table(&a, &g, &en.z2, &ActionSpec::Trivial, 3).unwrap();
        for inst in &insts {
            inst.check_consistency(1 << 10).unwrap();
            let e = inst.ext();
            let elems = enumerate_subgroup(e.as_ref(), &e.generators(), 1 << 10).unwrap();
            let k = inst.kernel();
            let a_elems = enumerate_subgroup(k.as_ref(), &k.generators(), 1 << 10).unwrap();
            for x in &elems {
                for y in &elems {
                    let q = inst.quotient_oracle();
                    let lhs = inst.project(&e.compose(x, y));
                    assert!(q.equal(&lhs, &q.compose(&inst.project(x), &inst.project(y))));
                }
                for a in &a_elems {
                    assert!(e.is_identity(&commutator(e.as_ref(), &inst.embed(a), x)));
                }
            }
        }
    }
}

#[test]
fn table_extensions_as_instances() {
    let d4 = GroupTable::dihedral(4);
    let g = GroupTable::abelian(&[2, 2]);
    let a = GroupTable::cyclic(2);
    let en = enumerate_cohomology(&g, &a, &ActionSpec::Trivial).unwrap();
    let exts: Vec<_> = en.z2.iter().map(|f| realize_extension_table(&a, &g, f, &ActionSpec::Trivial).unwrap()).collect();
    let refs: Vec<_> = exts.iter().collect();
    let insts = shared_instances(&refs, 9);
    for inst in &insts {
        inst.check_consistency(64).unwrap();
        assert!(inst.is_central());
        assert!(Arc::ptr_eq(inst.kernel(), insts[0].kernel()));
    }
    assert!(exts.iter().any(|e| cohomolib::oracle::brute_isomorphic(e.ext(), &d4).unwrap()));
    assert!(exts.iter().any(|e| cohomolib::oracle::brute_isomorphic(e.ext(), &GroupTable::quaternion()).unwrap()));
}
