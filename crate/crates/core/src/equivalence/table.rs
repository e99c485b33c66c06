use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use super::{Certificate, EquivConfig, EquivError, EquivalenceVerdict};
use crate::cohomology::{
    b2_generators, choose_representatives_table, extract_factor_set_table, regular_image, Cochain1, Cochain2,
    GModule, TableModule,
};
use crate::group::{ActionSpec, GroupTable, TableExtension};
use crate::par;
use crate::permgroup::{schreier_sims_labelled, ExponentLabel, Label, StrongGeneratingSet};
use crate::seed::{derive, sub_rng};

/// `B²(G, A)` as a permutation group on `A × G × G`, ready for membership
/// queries. Building it once serves any number of factor-set pairs.
pub struct TableTester {
    g: GroupTable,
    a: GroupTable,
    action: ActionSpec,
    // (x, a) behind each pushed-forward generator ∂δ_{x,a}
    sources: Vec<(usize, u32)>,
    sgs: StrongGeneratingSet<ExponentLabel>,
}

fn exponent(a: &GroupTable) -> u64 {
    (0..a.order()).fold(1u64, |acc, x| num_integer::lcm(acc, a.element_order(x) as u64))
}

impl TableTester {
    pub fn new(g: &GroupTable, a: &GroupTable, action: &ActionSpec, cfg: &EquivConfig) -> Result<Self, EquivError> {
        let a_gens: Vec<u32> = if cfg.random_a_generators {
            let count = crate::group::oracle::generator_count(cfg.sample_multiplier, a.order() as u64);
            let mut r = sub_rng(cfg.seed, 0xa6);
            (0..count).map(|_| r.gen_range(0..a.order() as u32)).collect()
        } else {
            a.generating_set().into_iter().map(|x| x as u32).collect()
        };
        let m = TableModule::new(a, action);
        let gens = b2_generators(g, &a_gens, &m);
        let sources: Vec<(usize, u32)> =
            (1..g.order()).flat_map(|x| a_gens.iter().map(move |&v| (x, v))).collect();
        let moduli: Arc<[u64]> = vec![exponent(a); gens.len()].into();
        let labelled: Vec<_> = par::map_range(gens.len(), |j| {
            (regular_image(gens[j].values(), a), ExponentLabel::unit(moduli.clone(), j))
        });
        let one = ExponentLabel { coeffs: vec![0; gens.len()], moduli };
        let degree = a.order() * g.order() * g.order();
        let sgs = schreier_sims_labelled(&labelled, degree, one)?;
        Ok(TableTester { g: g.clone(), a: a.clone(), action: action.clone(), sources, sgs })
    }

    pub fn module(&self) -> TableModule<'_> {
        TableModule::new(&self.a, &self.action)
    }

    /// `|B²(G, A)|`.
    pub fn b2_order(&self) -> BigUint {
        self.sgs.order()
    }

    /// Decides whether `f₁ − f₂` is a coboundary.
    pub fn test_cocycles(&self, f1: &Cochain2<u32>, f2: &Cochain2<u32>) -> Result<EquivalenceVerdict<u32>, EquivError> {
        let m = self.module();
        if f1.order() != self.g.order() || f2.order() != self.g.order() {
            return Err(EquivError::InstanceMismatch("factor sets over a different G".into()));
        }
        let diff = f1.sub(f2, &m);
        let p = regular_image(diff.values(), &self.a);
        let sift = self.sgs.sift(&p)?;
        if !sift.is_member() {
            return Ok(EquivalenceVerdict {
                equivalent: false,
                certificate: Certificate::NonMember { level: sift.level, residue: sift.residue },
            });
        }
        let word = sift.word.inverse();
        let mut values = vec![0u32; self.g.order()];
        for (&(x, a), &c) in self.sources.iter().zip(&word.coeffs) {
            values[x] = m.add(&values[x], &m.times(&a, c));
        }
        let witness = Cochain1::new(values, &m)?;
        Ok(EquivalenceVerdict { equivalent: true, certificate: Certificate::Coboundary { witness } })
    }

    /// Extracts factor sets from both extensions and tests them.
    pub fn test(&self, e1: &TableExtension, e2: &TableExtension, seed: u64) -> Result<EquivalenceVerdict<u32>, EquivError> {
        for (i, e) in [e1, e2].into_iter().enumerate() {
            if e.quotient() != &self.g || e.kernel() != &self.a {
                return Err(EquivError::InstanceMismatch(format!("extension {} has a different G or A", i + 1)));
            }
            if e.conjugation_action() != self.action {
                return Err(EquivError::InstanceMismatch(format!("extension {} induces a different action", i + 1)));
            }
        }
        let (f1, f2) = par::join(
            || -> Result<Cochain2<u32>, EquivError> {
                let s = choose_representatives_table(e1, derive(seed, 1))?;
                Ok(extract_factor_set_table(e1, &s)?)
            },
            || -> Result<Cochain2<u32>, EquivError> {
                let s = choose_representatives_table(e2, derive(seed, 2))?;
                Ok(extract_factor_set_table(e2, &s)?)
            },
        );
        self.test_cocycles(&f1?, &f2?)
    }
}

/// Tests two table extensions of `G` by `A` for equivalence.
pub fn test_equiv_table(e1: &TableExtension, e2: &TableExtension, cfg: &EquivConfig) -> Result<EquivalenceVerdict<u32>, EquivError> {
    let action = e1.conjugation_action();
    let tester = TableTester::new(e1.quotient(), e1.kernel(), &action, cfg)?;
    tester.test(e1, e2, cfg.seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::verify_witness;

    fn ext(e: GroupTable, proj: Vec<u32>, embed: Vec<u32>) -> TableExtension {
        TableExtension::new(e, GroupTable::cyclic(2), GroupTable::cyclic(2), proj, embed).unwrap()
    }

    #[test]
    fn z4_against_klein() {
        let z4 = ext(GroupTable::cyclic(4), vec![0, 1, 0, 1], vec![0, 2]);
        let v4 = ext(GroupTable::abelian(&[2, 2]), vec![0, 1, 0, 1], vec![0, 2]);
        let cfg = EquivConfig::default();
        assert!(!test_equiv_table(&z4, &v4, &cfg).unwrap().equivalent);
        assert!(!test_equiv_table(&v4, &z4, &cfg).unwrap().equivalent);
        let same = test_equiv_table(&z4, &z4, &cfg).unwrap();
        assert!(same.equivalent);
        for seed in 0..6 {
            assert!(test_equiv_table(&z4, &z4, &EquivConfig::with_seed(seed)).unwrap().equivalent);
        }
    }

    #[test]
    fn witness_for_z8() {
        let g = GroupTable::cyclic(2);
        let a = GroupTable::cyclic(4);
        let triv = ActionSpec::Trivial;
        let t = TableTester::new(&g, &a, &triv, &EquivConfig::default()).unwrap();
        assert_eq!(t.b2_order(), BigUint::from(2u32));
        let m = t.module();
        let f1 = Cochain2::from_fn(2, &m, |_, _| 3);
        let f2 = Cochain2::from_fn(2, &m, |_, _| 1);
        let v = t.test_cocycles(&f1, &f2).unwrap();
        assert!(v.equivalent);
        assert!(verify_witness(&v, &f1.sub(&f2, &m), &g, &m));
        let f3 = Cochain2::zero(2, &m);
        assert!(!t.test_cocycles(&f1, &f3).unwrap().equivalent);
    }

    #[test]
    fn mismatch() {
        let z4 = ext(GroupTable::cyclic(4), vec![0, 1, 0, 1], vec![0, 2]);
        let d3 = TableExtension::new(
            GroupTable::dihedral(3),
            GroupTable::cyclic(3),
            GroupTable::cyclic(2),
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 1, 2],
        )
        .unwrap();
        assert!(matches!(test_equiv_table(&z4, &d3, &EquivConfig::default()), Err(EquivError::InstanceMismatch(_))));
    }
}
