mod common;

use std::sync::Arc;

use num_bigint::BigUint;

use cohomolib::counting::{central_abelian_count, count_h2_bbox, count_h2_table};
use cohomolib::hardness::table_module_oracle;
use cohomolib::oracle::enumerate_cohomology;
use cohomolib::{ActionSpec, GroupTable, UnitsOracle};

#[test]
fn counts_match_enumeration() {
    for (_, g) in common::small_groups() {
        for (_, a) in common::small_modules(4) {
            for act in common::actions(&g, &a) {
                let en = enumerate_cohomology(&g, &a, &act).unwrap();
                let c = count_h2_table(&g, &a, &act).unwrap();
                assert_eq!(c.size_z2, BigUint::from(en.z2.len()));
                assert_eq!(c.size_b2, BigUint::from(en.b2.len()));
                assert_eq!(c.size_h2, BigUint::from(en.h2_size()));
                assert_eq!(c.size_c2, BigUint::from(en.c2_size));
                let (oracle, oact) = table_module_oracle(&a, &act, 17);
                let b = count_h2_bbox(&g, oracle, oact, 17, 4).unwrap();
                assert_eq!(b.size_h2, c.size_h2);
                assert_eq!(b.size_b2, c.size_b2);
            }
        }
    }
}

#[test]
fn central_abelian_formula_matches_brute_force() {
    for (ds, g) in [(vec![2u64], GroupTable::cyclic(2)), (vec![3], GroupTable::cyclic(3)), (vec![4], GroupTable::cyclic(4)), (vec![2, 2], GroupTable::abelian(&[2, 2]))] {
        for (_, a) in common::small_modules(6) {
            let en = enumerate_cohomology(&g, &a, &ActionSpec::Trivial).unwrap();
            assert_eq!(central_abelian_count(&ds, &a), BigUint::from(en.h2_size()), "G={ds:?} |A|={}", a.order());
        }
    }
}

#[test]
fn bbox_count_with_units_kernel() {
    let g = GroupTable::cyclic(2);
    for n in [15u64, 21, 35, 1001] {
        let a = GroupTable::units_mod_n(n).unwrap();
        let table = count_h2_table(&g, &a, &ActionSpec::Trivial).unwrap();
        let bbox = count_h2_bbox(&g, Arc::new(UnitsOracle::new(n, n, 4).unwrap()), None, n, 4).unwrap();
        assert_eq!(table.size_h2, bbox.size_h2);
        assert_eq!(table.size_h2, central_abelian_count(&[2], &a));
    }
}
