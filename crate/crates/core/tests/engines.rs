use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use cohomolib::abelian::{decompose_abelian, determinant, mat_mul, p_primary_split, smith_normal_form};
use cohomolib::group::oracle::{enumerate_subgroup, pow};
use cohomolib::group::{EncodedOracle, GroupOracle};
use cohomolib::permgroup::schreier_sims;
use cohomolib::{GroupTable, Permutation};

fn closure(gens: &[Permutation], degree: usize) -> HashSet<Vec<u32>> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.images().to_vec()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.then(g);
            if seen.insert(q.images().to_vec()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

fn all_perms(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, (n - 1) as u32);
            out.push(q);
        }
    }
    out
}

fn perm_strategy(max_degree: usize) -> impl Strategy<Value = (usize, Vec<Vec<u32>>)> {
    (1..=max_degree).prop_flat_map(|d| {
        let one = Just((0..d as u32).collect::<Vec<_>>()).prop_shuffle();
        (Just(d), prop::collection::vec(one, 1..4))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sgs_agrees_with_closure((degree, imgs) in perm_strategy(7)) {
        let gens: Vec<Permutation> = imgs.into_iter().map(|v| Permutation::new(v).unwrap()).collect();
        let sgs = schreier_sims(&gens, degree).unwrap();
        let elems = closure(&gens, degree);
        prop_assert_eq!(sgs.order(), elems.len().into());
        for g in &gens {
            prop_assert!(sgs.contains(g).unwrap());
        }
        for p in all_perms(degree) {
            let inside = elems.contains(&p);
            prop_assert_eq!(sgs.contains(&Permutation::new(p).unwrap()).unwrap(), inside);
        }
    }

    #[test]
    fn smith_form_postconditions(rows in 1usize..=8, cols in 1usize..=8, entries in prop::collection::vec(-50i64..=50, 64)) {
        let m: Vec<Vec<BigInt>> = (0..rows).map(|i| (0..cols).map(|j| BigInt::from(entries[i * 8 + j])).collect()).collect();
        let sf = smith_normal_form(&m);
        prop_assert_eq!(mat_mul(&mat_mul(&sf.u, &m), &sf.v), sf.s.clone());
        prop_assert!(determinant(&sf.u).abs().is_one());
        prop_assert!(determinant(&sf.v).abs().is_one());
        for i in 0..rows {
            for j in 0..cols {
                prop_assert!(i == j || sf.s[i][j].is_zero());
            }
        }
        let d = sf.diagonal();
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        for w in d.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }
}

fn groups() -> Vec<GroupTable> {
    vec![
        GroupTable::abelian(&[64, 64]),
        GroupTable::abelian(&[2, 4, 8, 16]),
        GroupTable::abelian(&[6, 10, 15]),
        GroupTable::units_mod_n(4095).unwrap(),
        GroupTable::cyclic(4096),
        GroupTable::abelian(&[3, 3, 3, 3, 3, 3, 3]),
    ]
}

#[test]
fn coordinates_are_a_bijection() {
    for (i, t) in groups().into_iter().enumerate() {
        let n = t.order();
        assert!(n <= 4096);
        let o = Arc::new(EncodedOracle::new(t, i as u64));
        let dec = decompose_abelian(&o.generators(), o.clone()).unwrap();
        let d = dec.invariants().to_vec();
        assert_eq!(d.iter().product::<u64>(), n as u64);
        let mut seen = HashSet::new();
        for x in 0..n {
            let c = dec.coordinates(&o.encode(x)).unwrap();
            assert!(c.iter().zip(&d).all(|(a, b)| a < b));
            let back: Vec<i128> = c.iter().map(|&v| v as i128).collect();
            assert_eq!(o.decode(&dec.element(&back)), Some(x));
            assert!(seen.insert(c));
        }
    }
}

#[test]
fn roots_agree_with_exhaustive_search() {
    for (i, t) in [GroupTable::abelian(&[2, 4, 8]), GroupTable::abelian(&[6, 36]), GroupTable::units_mod_n(1155).unwrap()]
        .into_iter()
        .enumerate()
    {
        let n = t.order();
        let o = Arc::new(EncodedOracle::new(t.clone(), 40 + i as u64));
        let dec = decompose_abelian(&o.generators(), o.clone()).unwrap();
        for d in 1..=12u64 {
            let powers: HashSet<usize> = (0..n).map(|x| t.pow(x, d as i64)).collect();
            for a in 0..n {
                let root = dec.has_dth_root(&o.encode(a), d).unwrap();
                assert_eq!(root.is_some(), powers.contains(&a), "a={a} d={d}");
                if let Some(r) = root {
                    assert_eq!(o.decode(&pow(o.as_ref(), &r, d as i128)), Some(a));
                }
            }
        }
    }
}

#[test]
fn primary_split_regenerates() {
    for (i, t) in groups().into_iter().enumerate() {
        let o = EncodedOracle::new(t.clone(), 70 + i as u64);
        let gens = o.generators();
        let parts = p_primary_split(&gens, &o).unwrap();
        let union: Vec<_> = parts.values().flatten().cloned().collect();
        let full = enumerate_subgroup(&o, &gens, 1 << 13).unwrap().len();
        assert_eq!(enumerate_subgroup(&o, &union, 1 << 13).unwrap().len(), full);
        assert_eq!(full, t.order());
    }
}
