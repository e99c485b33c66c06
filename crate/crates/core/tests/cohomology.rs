mod common;

use std::collections::HashSet;

use proptest::prelude::*;

use cohomolib::cohomology::{
    b2_generators, choose_representatives_table, coboundary, coboundary2, extract_factor_set_table, Cochain1,
    GModule, TableModule,
};
use cohomolib::hardness::realize_extension_table;
use cohomolib::oracle::enumerate_cohomology;
use cohomolib::{ActionSpec, GroupTable};

fn module_cases() -> Vec<(GroupTable, GroupTable, ActionSpec)> {
    let mut out = Vec::new();
    for (_, g) in common::small_groups().into_iter().chain([("D3", GroupTable::dihedral(3))]) {
        for (_, a) in common::small_modules(6) {
            for act in common::actions(&g, &a) {
                out.push((g.clone(), a.clone(), act));
            }
        }
    }
    out
}

fn cochain1(values: &[u32], n: usize, m: &TableModule) -> Cochain1<u32> {
    let q = m.a.order() as u32;
    let mut v: Vec<u32> = values[..n].iter().map(|x| x % q).collect();
    v[0] = 0;
    Cochain1::new(v, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coboundary_laws(case in 0usize..64, s1 in prop::collection::vec(any::<u32>(), 6), s2 in prop::collection::vec(any::<u32>(), 6)) {
        let cases = module_cases();
        let (g, a, act) = &cases[case % cases.len()];
        let m = TableModule::new(a, act);
        let n = g.order();
        let (u, v) = (cochain1(&s1, n, &m), cochain1(&s2, n, &m));
        let du = coboundary(&u, g, &m);
        let dv = coboundary(&v, g, &m);
        prop_assert!(coboundary(&u.add(&v, &m), g, &m).equal(&du.add(&dv, &m), &m));
        prop_assert!(du.is_normalized(&m));
        prop_assert!(du.add(&dv, &m).is_normalized(&m) && du.sub(&dv, &m).is_normalized(&m) && du.neg(&m).is_normalized(&m));
        prop_assert!(coboundary2(&du, g, &m).is_zero(&m));
    }
}

#[test]
fn b2_generators_span_the_coboundaries() {
    for (g, a, act) in module_cases().into_iter().filter(|(g, _, _)| g.order() <= 4) {
        let m = TableModule::new(&a, &act);
        let en = enumerate_cohomology(&g, &a, &act).unwrap();
        let target: HashSet<Vec<u32>> = en.b2.iter().map(|f| f.values().to_vec()).collect();
        let a_gens: Vec<u32> = a.generating_set().into_iter().map(|x| x as u32).collect();
        let gens = b2_generators(&g, &a_gens, &m);
        let mut seen = HashSet::from([vec![0u32; g.order() * g.order()]]);
        let mut frontier = vec![cohomolib::Cochain2::zero(g.order(), &m)];
        while let Some(f) = frontier.pop() {
            for h in &gens {
                let next = f.add(h, &m);
                if seen.insert(next.values().to_vec()) {
                    frontier.push(next);
                }
            }
        }
        assert_eq!(seen, target, "G of order {}, A of order {}", g.order(), a.order());
    }
}

#[test]
fn sections_change_factor_sets_by_coboundaries() {
    for (g, a, act) in module_cases().into_iter().filter(|(g, a, _)| g.order() <= 4 && a.order() <= 4) {
        let m = TableModule::new(&a, &act);
        let en = enumerate_cohomology(&g, &a, &act).unwrap();
        let b2: HashSet<Vec<u32>> = en.b2.iter().map(|f| f.values().to_vec()).collect();
        for (i, f) in en.z2.iter().enumerate() {
            let ext = realize_extension_table(&a, &g, f, &act).unwrap();
            assert_eq!(ext.ext().order(), a.order() * g.order());
            let s1 = choose_representatives_table(&ext, i as u64).unwrap();
            let s2 = choose_representatives_table(&ext, i as u64 + 1000).unwrap();
            let f1 = extract_factor_set_table(&ext, &s1).unwrap();
            let f2 = extract_factor_set_table(&ext, &s2).unwrap();
            assert!(b2.contains(f1.sub(&f2, &m).values()));
            assert!(b2.contains(f1.sub(f, &m).values()));
            assert!(m.is_zero(f1.get(0, 0)));
        }
    }
}
