use rand::Rng;

use super::{Cochain2, CohomologyError, OracleModule, TableModule};
use crate::group::{ExtensionInstance, Handle, TableExtension};
use crate::par;
use crate::seed::{rng, sub_rng};

/// The default number of samples for covering `n` cosets:
/// `multiplier · n · (1 + ln n)`, at least 64.
pub fn default_budget(n: usize, multiplier: usize) -> usize {
    let n_f = n.max(1) as f64;
    let b = (multiplier.max(1) as f64 * n_f * (1.0 + n_f.ln())).ceil() as usize;
    b.max(64)
}

/// One preimage of every element of `G`, chosen at random from the seed,
/// with `s(e) = e`.
pub fn choose_representatives_table(ext: &TableExtension, seed: u64) -> Result<Vec<usize>, CohomologyError> {
    let n = ext.quotient().order();
    let mut fibres = vec![Vec::new(); n];
    for e in 0..ext.ext().order() {
        fibres[ext.project(e)].push(e);
    }
    let mut r = rng(seed);
    let mut s = Vec::with_capacity(n);
    for (g, fibre) in fibres.iter().enumerate() {
        if fibre.is_empty() {
            return Err(CohomologyError::ProjectionIncomplete { g });
        }
        s.push(if g == 0 { 0 } else { fibre[r.gen_range(0..fibre.len())] });
    }
    Ok(s)
}

/// Samples `E` until every coset of `A` has been hit, keeping the first
/// element seen over each `g`.
pub fn choose_representatives_sampled(
    inst: &ExtensionInstance,
    seed: u64,
    budget: usize,
) -> Result<Vec<Handle>, CohomologyError> {
    let g = inst.quotient_table().ok_or(CohomologyError::QuotientNotTable)?;
    let n = g.order();
    let e = inst.ext();
    let mut s: Vec<Option<Handle>> = vec![None; n];
    s[0] = Some(e.identity());
    let mut missing = n - 1;
    let mut r = sub_rng(seed, 0x5ec7);
    let mut used = 0;
    while missing > 0 && used < budget {
        let x = e.sample(&mut r);
        used += 1;
        let gx = inst.project_index(&x).ok_or(CohomologyError::ProjectionIncomplete { g: usize::MAX })?;
        if s[gx].is_none() {
            s[gx] = Some(x);
            missing -= 1;
        }
    }
    if missing > 0 {
        let missing = s.iter().enumerate().filter(|(_, h)| h.is_none()).map(|(i, _)| i).collect();
        return Err(CohomologyError::BudgetExhausted { missing });
    }
    Ok(s.into_iter().map(|h| h.expect("all cosets hit")).collect())
}

/// `f(x, y) = s(x) s(y) s(xy)⁻¹` as indices of `A`.
pub fn extract_factor_set_table(ext: &TableExtension, s: &[usize]) -> Result<Cochain2<u32>, CohomologyError> {
    let g = ext.quotient();
    let n = g.order();
    if s.len() != n {
        return Err(CohomologyError::WrongLength { expected: n, got: s.len() });
    }
    if s[0] != 0 {
        return Err(CohomologyError::NotNormalized(vec![0]));
    }
    let e = ext.ext();
    let values = par::map_range(n * n, |i| {
        let (x, y) = (i / n, i % n);
        let v = e.mul(e.mul(s[x], s[y]), e.inv(s[g.mul(x, y)]));
        ext.restrict(v).map(|a| a as u32).ok_or(CohomologyError::ValueOutsideA { x, y })
    });
    let values = values.into_iter().collect::<Result<Vec<_>, _>>()?;
    let action = ext.conjugation_action();
    Cochain2::new(n, values, &TableModule::new(ext.kernel(), &action))
}

/// `f(x, y) = s(x) s(y) s(xy)⁻¹` as handles of `A`, for an instance with a
/// table quotient.
pub fn extract_factor_set(inst: &ExtensionInstance, s: &[Handle]) -> Result<Cochain2<Handle>, CohomologyError> {
    let g = inst.quotient_table().ok_or(CohomologyError::QuotientNotTable)?;
    let n = g.order();
    if s.len() != n {
        return Err(CohomologyError::WrongLength { expected: n, got: s.len() });
    }
    let e = inst.ext();
    if !e.is_identity(&s[0]) {
        return Err(CohomologyError::NotNormalized(vec![0]));
    }
    let inverses = par::map_slice(s, |h| e.invert(h));
    let values = par::map_range(n * n, |i| {
        let (x, y) = (i / n, i % n);
        let v = e.compose(&e.compose(&s[x], &s[y]), &inverses[g.mul(x, y)]);
        inst.restrict(&v).ok_or(CohomologyError::ValueOutsideA { x, y })
    });
    let values = values.into_iter().collect::<Result<Vec<_>, _>>()?;
    let module = OracleModule::new(inst.kernel().clone(), inst.action().cloned());
    Cochain2::new(n, values, &module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::is_cocycle;
    use crate::group::GroupTable;

    fn z4() -> TableExtension {
        TableExtension::new(GroupTable::cyclic(4), GroupTable::cyclic(2), GroupTable::cyclic(2), vec![0, 1, 0, 1], vec![0, 2])
            .unwrap()
    }

    #[test]
    fn table_sections() {
        let e = z4();
        for seed in 0..8 {
            let s = choose_representatives_table(&e, seed).unwrap();
            assert_eq!(s[0], 0);
            assert!(s[1] == 1 || s[1] == 3);
            let f = extract_factor_set_table(&e, &s).unwrap();
            // 1 + 1 = 2 and 3 + 3 = 6 ≡ 2, both the generator of A
            assert_eq!(*f.get(1, 1), 1);
        }
        let v4 = TableExtension::new(
            GroupTable::abelian(&[2, 2]),
            GroupTable::cyclic(2),
            GroupTable::cyclic(2),
            vec![0, 1, 0, 1],
            vec![0, 2],
        )
        .unwrap();
        let s = choose_representatives_table(&v4, 3).unwrap();
        assert!(s[1] == 1 || s[1] == 3);
        let f = extract_factor_set_table(&v4, &s).unwrap();
        let triv = crate::group::ActionSpec::Trivial;
        assert!(f.is_zero(&TableModule::new(v4.kernel(), &triv)));
        let t = TableExtension::new(GroupTable::cyclic(3), GroupTable::cyclic(3), GroupTable::trivial(), vec![0; 3], vec![0, 1, 2])
            .unwrap();
        assert_eq!(choose_representatives_table(&t, 0).unwrap(), vec![0]);
    }

    #[test]
    fn sampled_sections() {
        let d3 = TableExtension::new(
            GroupTable::dihedral(3),
            GroupTable::cyclic(3),
            GroupTable::cyclic(2),
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 1, 2],
        )
        .unwrap();
        let inst = d3.to_instance(9);
        let s = choose_representatives_sampled(&inst, 4, 64).unwrap();
        assert_eq!(inst.project_index(&s[1]), Some(1));
        let f = extract_factor_set(&inst, &s).unwrap();
        let g = GroupTable::cyclic(2);
        let m = OracleModule::new(inst.kernel().clone(), inst.action().cloned());
        assert!(is_cocycle(&f, &g, &m));
        assert!(f.values().iter().all(|h| inst.kernel().is_identity(h)));
        let err = choose_representatives_sampled(&inst, 4, 0).unwrap_err();
        assert_eq!(err, CohomologyError::BudgetExhausted { missing: vec![1] });
    }

    #[test]
    fn budget() {
        assert_eq!(default_budget(1, 4), 64);
        assert!(default_budget(100, 4) > 400);
    }
}
