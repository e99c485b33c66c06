use std::sync::Arc;

use super::bbox::check_shared;
use super::{Certificate, EquivConfig, EquivError, EquivalenceVerdict};
use crate::abelian::{decompose_abelian, AbelianDecomposition};
use crate::group::oracle::{commutator, generator_count, multi_pow, pow_u, random_generating_set};
use crate::group::{ExtensionInstance, Handle};
use crate::par;
use crate::seed::derive;

/// The data classifying a central extension of an abelian
/// `G = Z_{d₁} × … × Z_{d_m}`: lifts `sᵢ` of the basis, `αᵢ = sᵢ^{dᵢ}` and
/// `βᵢⱼ = [sᵢ, sⱼ⁻¹]` for `i < j`, the last two as elements of `A`.
#[derive(Clone, Debug)]
pub struct StructuralInvariants {
    pub invariants: Vec<u64>,
    pub lifts: Vec<Handle>,
    pub alpha: Vec<Handle>,
    // beta[i][j - i - 1] = βᵢⱼ
    beta: Vec<Vec<Handle>>,
}

impl StructuralInvariants {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// `βᵢⱼ` for `i < j`.
    pub fn beta(&self, i: usize, j: usize) -> &Handle {
        assert!(i < j && j < self.rank());
        &self.beta[i][j - i - 1]
    }
}

/// Lifts the basis of `dec_g` to `E` through sampled elements and evaluates
/// `α` and `β`. `dec_g` must decompose the quotient oracle of `e`.
pub fn structural_invariants(
    e: &ExtensionInstance,
    dec_g: &AbelianDecomposition,
    cfg: &EquivConfig,
) -> Result<StructuralInvariants, EquivError> {
    if !e.is_central() {
        return Err(EquivError::NotCentral);
    }
    let q = e.quotient_oracle();
    if !Arc::ptr_eq(&q, dec_g.oracle()) {
        return Err(EquivError::InstanceMismatch("decomposition is not over the quotient of E".into()));
    }
    let ext = e.ext().as_ref();
    let count = sample_count(cfg, q.order_bound()) + dec_g.rank();
    let target = dec_g.order();
    for attempt in 0..=cfg.retries {
        let hs = random_generating_set(ext, derive(cfg.seed, attempt as u64), count);
        let gs: Vec<Handle> = par::map_slice(&hs, |h| e.project(h));
        let dec_l = decompose_abelian(&gs, q.clone())?;
        let got = dec_l.order();
        if got < target {
            continue;
        }
        if got > target {
            return Err(EquivError::IncompleteQuotient);
        }
        let modulus = dec_l.exponent().max(1);
        let mut lifts = Vec::with_capacity(dec_g.rank());
        for b in dec_g.basis() {
            let c = dec_l.coordinates(b)?;
            let exps: Vec<u128> = (0..hs.len())
                .map(|j| {
                    c.iter().zip(dec_l.from_generators()).fold(0u128, |acc, (&ck, row)| {
                        (acc + (ck as u128 % modulus) * (row[j] as u128 % modulus) % modulus) % modulus
                    })
                })
                .collect();
            lifts.push(multi_pow(ext, &hs, &exps));
        }
        let restrict = |x: &Handle| -> Result<Handle, EquivError> {
            if !q.is_identity(&e.project(x)) {
                return Err(EquivError::ValueOutsideA);
            }
            e.restrict(x).ok_or(EquivError::ValueOutsideA)
        };
        let invariants = dec_g.invariants().to_vec();
        let alpha = lifts
            .iter()
            .zip(&invariants)
            .map(|(s, &d)| restrict(&pow_u(ext, s, d as u128)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut beta = Vec::with_capacity(lifts.len());
        for i in 0..lifts.len() {
            let row = (i + 1..lifts.len())
                .map(|j| restrict(&commutator(ext, &lifts[i], &ext.invert(&lifts[j]))))
                .collect::<Result<Vec<_>, _>>()?;
            beta.push(row);
        }
        return Ok(StructuralInvariants { invariants, lifts, alpha, beta });
    }
    Err(EquivError::BudgetExhausted { attempts: cfg.retries + 1 })
}

/// Random samples drawn per attempt: `multiplier·⌈log₂ bound⌉`, at least
/// [`MIN_SAMPLES`].
fn sample_count(cfg: &EquivConfig, bound: u64) -> usize {
    generator_count(cfg.sample_multiplier, bound).max(MIN_SAMPLES)
}

pub const MIN_SAMPLES: usize = 32;

/// Tests two central extensions of a black-box abelian `G` by a black-box
/// `A`, sharing their `A` and `G` oracles.
pub fn test_equiv_bbox_abelian_g(
    e1: &ExtensionInstance,
    e2: &ExtensionInstance,
    cfg: &EquivConfig,
) -> Result<EquivalenceVerdict<Handle>, EquivError> {
    check_shared(e1, e2)?;
    if !e1.is_central() || !e2.is_central() {
        return Err(EquivError::NotCentral);
    }
    if !e1.quotient_is_abelian() {
        return Err(EquivError::NotAbelian);
    }
    let q = e1.quotient_oracle();
    let a = e1.kernel().clone();
    let count = sample_count(cfg, q.order_bound());
    let dec_a = decompose_abelian(&a.generators(), a.clone());
    let mut found = None;
    // a quotient decomposition that misses part of G shows up as E projecting
    // outside it; redraw G in that case
    for attempt in 0..=cfg.retries {
        let g_gens = random_generating_set(q.as_ref(), derive(cfg.seed, 0x4700 + attempt as u64), count);
        let dec_g = decompose_abelian(&g_gens, q.clone())?;
        let invs = par::join(
            || structural_invariants(e1, &dec_g, &EquivConfig { seed: derive(cfg.seed, 0x51), ..cfg.clone() }),
            || structural_invariants(e2, &dec_g, &EquivConfig { seed: derive(cfg.seed, 0x52), ..cfg.clone() }),
        );
        match invs {
            (Err(EquivError::IncompleteQuotient), _) | (_, Err(EquivError::IncompleteQuotient)) => continue,
            (r1, r2) => {
                found = Some((r1?, r2?));
                break;
            }
        }
    }
    let Some((s1, s2)) = found else { return Err(EquivError::BudgetExhausted { attempts: cfg.retries + 1 }) };
    let dec_a = dec_a?;
    let m = s1.rank();
    for i in 0..m {
        for j in i + 1..m {
            if !a.equal(s1.beta(i, j), s2.beta(i, j)) {
                return Ok(EquivalenceVerdict { equivalent: false, certificate: Certificate::CommutatorMismatch { i, j } });
            }
        }
    }
    let mut quotients = Vec::with_capacity(m);
    let mut roots = Vec::with_capacity(m);
    for (i, &d) in s1.invariants.iter().enumerate() {
        let quot = a.compose(&a.invert(&s1.alpha[i]), &s2.alpha[i]);
        match dec_a.has_dth_root(&quot, d)? {
            Some(r) => roots.push(r),
            None => return Ok(EquivalenceVerdict { equivalent: false, certificate: Certificate::NoRoot { i, d } }),
        }
        quotients.push(quot);
    }
    Ok(EquivalenceVerdict {
        equivalent: true,
        certificate: Certificate::Roots { d: s1.invariants.clone(), quotients, roots },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::OracleModule;
    use crate::cohomology::Cochain2;
    use crate::equivalence::verify_witness;
    use crate::group::{shared_instances, GroupTable, TableExtension};
    use crate::hardness::make_qr_instance;

    #[test]
    fn qr_fifteen() {
        for (y, expect) in [(1, true), (4, true), (2, false), (14, false)] {
            let inst = make_qr_instance(15, y, 5).unwrap();
            let (e1, e2) = (inst.e1.with_opaque_quotient(), inst.e2.with_opaque_quotient());
            let v = test_equiv_bbox_abelian_g(&e1, &e2, &EquivConfig::with_seed(y)).unwrap();
            assert_eq!(v.equivalent, expect, "y = {y}");
            if expect {
                let m = OracleModule::new(inst.kernel.clone(), None);
                assert!(verify_witness(&v, &Cochain2::zero(2, &m), &inst.quotient, &m));
            }
        }
    }

    #[test]
    fn z8_alpha() {
        // Z8 over Z2 with A = 2Z8
        let e = TableExtension::new(
            GroupTable::cyclic(8),
            GroupTable::cyclic(4),
            GroupTable::cyclic(2),
            (0..8).map(|x| x % 2).collect(),
            vec![0, 2, 4, 6],
        )
        .unwrap();
        let inst = &shared_instances(&[&e], 1)[0];
        let inst = inst.with_opaque_quotient();
        let q = inst.quotient_oracle();
        let dec_g = decompose_abelian(&q.generators(), q.clone()).unwrap();
        let s = structural_invariants(&inst, &dec_g, &EquivConfig::default()).unwrap();
        assert_eq!(s.rank(), 1);
        let kernel = inst.kernel();
        // α = s² with s odd is 2 or 6 in Z8, i.e. an odd element of A = Z4
        assert_eq!(crate::abelian::element_order(&s.alpha[0], kernel.as_ref(), 4).unwrap(), 4);
    }

    #[test]
    fn dihedral_beta() {
        // D4 over Z2×Z2 with A the centre
        let d4 = GroupTable::dihedral(4);
        let center = [0usize, 2];
        let quotient = GroupTable::abelian(&[2, 2]);
        // r^i ↦ (0, i mod 2), r^i s ↦ (1, i mod 2)
        let proj: Vec<u32> = (0..8).map(|x| if x < 4 { (x % 2) as u32 } else { 2 + (x % 2) as u32 }).collect();
        let e = TableExtension::new(d4, GroupTable::cyclic(2), quotient, proj, center.iter().map(|&x| x as u32).collect())
            .unwrap();
        let inst = shared_instances(&[&e], 2)[0].with_opaque_quotient();
        let q = inst.quotient_oracle();
        let dec_g = decompose_abelian(&q.generators(), q.clone()).unwrap();
        let s = structural_invariants(&inst, &dec_g, &EquivConfig::default()).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(!inst.kernel().is_identity(s.beta(0, 1)));
    }
}
