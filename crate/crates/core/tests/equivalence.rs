mod common;

use std::collections::HashSet;

use proptest::prelude::*;

use cohomolib::cohomology::TableModule;
use cohomolib::equivalence::{
    test_equiv_bbox_abelian_g, test_equiv_bbox_small_g, test_equiv_table, verify_witness, EquivConfig, TableTester,
};
use cohomolib::hardness::{build_extensions_table, realize_extension_table};
use cohomolib::oracle::{brute_isomorphic, enumerate_cohomology};
use cohomolib::{ActionSpec, GroupTable};

#[test]
fn cocycle_tester_agrees_with_enumerated_coboundaries() {
    for (_, g) in common::small_groups() {
        for (_, a) in common::small_modules(6) {
            for act in common::actions(&g, &a) {
                let en = enumerate_cohomology(&g, &a, &act).unwrap();
                let b2: HashSet<Vec<u32>> = en.b2.iter().map(|f| f.values().to_vec()).collect();
                let m = TableModule::new(&a, &act);
                let tester = TableTester::new(&g, &a, &act, &EquivConfig::with_seed(5)).unwrap();
                assert_eq!(tester.b2_order(), (b2.len() as u64).into());
                let rows = cohomolib::par::map_range(en.z2.len(), |i| {
                    (0..en.z2.len())
                        .filter(|&j| {
                            let diff = en.z2[i].sub(&en.z2[j], &m);
                            let v = tester.test_cocycles(&en.z2[i], &en.z2[j]).unwrap();
                            v.equivalent != b2.contains(diff.values())
                                || (v.equivalent && !verify_witness(&v, &diff, &g, &m))
                        })
                        .count()
                });
                assert_eq!(rows.iter().sum::<usize>(), 0, "|G|={} |A|={}", g.order(), a.order());
            }
        }
    }
}

#[test]
fn equivalence_relation_and_isomorphism() {
    for (g, a) in [(GroupTable::cyclic(4), GroupTable::cyclic(2)), (GroupTable::abelian(&[2, 2]), GroupTable::cyclic(2))] {
        let en = enumerate_cohomology(&g, &a, &ActionSpec::Trivial).unwrap();
        let exts: Vec<_> =
            en.z2.iter().map(|f| realize_extension_table(&a, &g, f, &ActionSpec::Trivial).unwrap()).collect();
        let k = exts.len().min(12);
        let cfg = EquivConfig::with_seed(11);
        let rel: Vec<Vec<bool>> =
            (0..k).map(|i| (0..k).map(|j| test_equiv_table(&exts[i], &exts[j], &cfg).unwrap().equivalent).collect()).collect();
        for i in 0..k {
            assert!(rel[i][i]);
            for j in 0..k {
                assert_eq!(rel[i][j], rel[j][i]);
                for l in 0..k {
                    assert!(!(rel[i][j] && rel[j][l]) || rel[i][l]);
                }
                if rel[i][j] {
                    assert!(brute_isomorphic(exts[i].ext(), exts[j].ext()).unwrap());
                }
            }
        }
    }
}

#[test]
fn verdicts_ignore_section_seed() {
    let g = GroupTable::abelian(&[2, 2]);
    let a = GroupTable::cyclic(4);
    let en = enumerate_cohomology(&g, &a, &ActionSpec::Trivial).unwrap();
    let exts: Vec<_> = en.z2.iter().step_by(7).map(|f| realize_extension_table(&a, &g, f, &ActionSpec::Trivial).unwrap()).collect();
    for e1 in &exts {
        for e2 in &exts {
            let verdicts: HashSet<bool> =
                (0..4).map(|s| test_equiv_table(e1, e2, &EquivConfig::with_seed(s)).unwrap().equivalent).collect();
            assert_eq!(verdicts.len(), 1);
        }
    }
}

#[test]
fn non_central_bbox_agrees_with_table() {
    let g = GroupTable::cyclic(2);
    for q in [4, 6] {
        let a = GroupTable::cyclic(q);
        let inv = ActionSpec::inversion(&g, &a).unwrap();
        let en = enumerate_cohomology(&g, &a, &inv).unwrap();
        let insts = build_extensions_table(&a, &g, &en.z2, &inv, 13).unwrap();
        let class = en.class_of();
        for i in 0..insts.len() {
            for j in 0..insts.len() {
                let v = test_equiv_bbox_small_g(&insts[i], &insts[j], &EquivConfig::with_seed(i as u64)).unwrap();
                assert_eq!(v.equivalent, class[i] == class[j]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn three_paths_agree(seed in any::<u64>(), shape in 0usize..4, q in 2usize..7, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let ds: &[usize] = [&[2usize][..], &[3], &[4], &[2, 2]][shape];
        let g = GroupTable::abelian(ds);
        let a = GroupTable::cyclic(q);
        let en = enumerate_cohomology(&g, &a, &ActionSpec::Trivial).unwrap();
        let (i, j) = (i.index(en.z2.len()), j.index(en.z2.len()));
        let fs = [en.z2[i].clone(), en.z2[j].clone()];
        let cfg = EquivConfig::with_seed(seed);
        let t1 = realize_extension_table(&a, &g, &fs[0], &ActionSpec::Trivial).unwrap();
        let t2 = realize_extension_table(&a, &g, &fs[1], &ActionSpec::Trivial).unwrap();
        let insts = build_extensions_table(&a, &g, &fs, &ActionSpec::Trivial, seed).unwrap();
        let table = test_equiv_table(&t1, &t2, &cfg).unwrap().equivalent;
        let small = test_equiv_bbox_small_g(&insts[0], &insts[1], &cfg).unwrap().equivalent;
        let abel = test_equiv_bbox_abelian_g(&insts[0], &insts[1], &cfg).unwrap().equivalent;
        let class = en.class_of();
        prop_assert_eq!(table, class[i] == class[j]);
        prop_assert_eq!(small, table);
        prop_assert_eq!(abel, table);
    }
}
