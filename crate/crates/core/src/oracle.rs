//! Exhaustive reference implementations: every normalized cochain, every
//! 1-cochain, every candidate isomorphism. Exponential by design, with
//! explicit caps instead of sampling.

use std::collections::HashMap;

use thiserror::Error;

use crate::cohomology::{coboundary, is_cocycle, Cochain1, Cochain2, TableModule};
use crate::group::{ActionSpec, GroupTable};
use crate::par;

/// Largest number of cochains any enumeration here will walk.
pub const ENUMERATION_CAP: u64 = 1 << 24;
/// Largest group order accepted by [`brute_isomorphic`].
pub const ISOMORPHISM_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration of {count} candidates exceeds the cap of {cap}")]
    TooLarge { count: u128, cap: u128 },
}

/// `Z²(G, A)`, `B²(G, A)` and the cosets of `B²` in `Z²`, all listed.
#[derive(Clone, Debug)]
pub struct EnumeratedCohomology {
    /// Number of normalized 2-cochains walked.
    pub c2_size: u64,
    /// Cocycles in lexicographic order of their value tables.
    pub z2: Vec<Cochain2<u32>>,
    /// Coboundaries, sorted and distinct.
    pub b2: Vec<Cochain2<u32>>,
    /// Each class lists indices into `z2`; classes are ordered by their
    /// first member.
    pub classes: Vec<Vec<usize>>,
}

impl EnumeratedCohomology {
    pub fn h2_size(&self) -> usize {
        self.classes.len()
    }

    /// The class of each cocycle.
    pub fn class_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.z2.len()];
        for (c, members) in self.classes.iter().enumerate() {
            for &i in members {
                out[i] = c;
            }
        }
        out
    }
}

fn checked_count(base: usize, exp: usize) -> Result<u64, OracleError> {
    let count = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if count > ENUMERATION_CAP as u128 {
        return Err(OracleError::TooLarge { count, cap: ENUMERATION_CAP as u128 });
    }
    Ok(count as u64)
}

// The `idx`-th normalized 2-cochain, first free entry most significant.
fn cochain2_at(idx: u64, n: usize, q: usize, m: &TableModule<'_>) -> Cochain2<u32> {
    let free = (n - 1) * (n - 1);
    let mut digits = vec![0u32; free];
    let mut r = idx;
    for d in digits.iter_mut().rev() {
        *d = (r % q as u64) as u32;
        r /= q as u64;
    }
    Cochain2::from_fn(n, m, |x, y| digits[(x - 1) * (n - 1) + (y - 1)])
}

fn cochain1_at(idx: u64, n: usize, q: usize, m: &TableModule<'_>) -> Cochain1<u32> {
    let mut values = vec![0u32; n];
    let mut r = idx;
    for v in values[1..].iter_mut().rev() {
        *v = (r % q as u64) as u32;
        r /= q as u64;
    }
    Cochain1::new(values, m).expect("normalized")
}

/// Lists every normalized 2-cochain, keeps the cocycles, lists every
/// coboundary and partitions the cocycles into cosets.
pub fn enumerate_cohomology(g: &GroupTable, a: &GroupTable, action: &ActionSpec) -> Result<EnumeratedCohomology, OracleError> {
    let (n, q) = (g.order(), a.order());
    let c2_size = checked_count(q, (n - 1) * (n - 1))?;
    let c1_size = checked_count(q, n - 1)?;
    let m = TableModule::new(a, action);
    let z2: Vec<Cochain2<u32>> = par::map_range(c2_size as usize, |i| {
        let f = cochain2_at(i as u64, n, q, &m);
        is_cocycle(&f, g, &m).then_some(f)
    })
    .into_iter()
    .flatten()
    .collect();
    let mut b2: Vec<Cochain2<u32>> = par::map_range(c1_size as usize, |i| coboundary(&cochain1_at(i as u64, n, q, &m), g, &m));
    b2.sort_by(|x, y| x.values().cmp(y.values()));
    b2.dedup();
    let index: HashMap<&[u32], usize> = z2.iter().enumerate().map(|(i, f)| (f.values(), i)).collect();
    let mut assigned = vec![false; z2.len()];
    let mut classes = Vec::new();
    for i in 0..z2.len() {
        if assigned[i] {
            continue;
        }
        let mut members: Vec<usize> = b2
            .iter()
            .map(|b| *index.get(z2[i].add(b, &m).values()).expect("cocycle plus coboundary is a cocycle"))
            .collect();
        members.sort_unstable();
        for &j in &members {
            assigned[j] = true;
        }
        classes.push(members);
    }
    Ok(EnumeratedCohomology { c2_size, z2, b2, classes })
}

/// The first 1-cochain `s` (lexicographically) with `∂s = f`, if any.
pub fn brute_b2_membership(
    f: &Cochain2<u32>,
    g: &GroupTable,
    a: &GroupTable,
    action: &ActionSpec,
) -> Result<Option<Cochain1<u32>>, OracleError> {
    let (n, q) = (g.order(), a.order());
    let count = checked_count(q, n - 1)?;
    let m = TableModule::new(a, action);
    Ok(par::find_first(count as usize, |i| {
        let s = cochain1_at(i as u64, n, q, &m);
        coboundary(&s, g, &m).equal(f, &m).then_some(s)
    }))
}

/// Whether two tables describe isomorphic groups, by backtracking over
/// images of a generating set of the first.
pub fn brute_isomorphic(t1: &GroupTable, t2: &GroupTable) -> Result<bool, OracleError> {
    let n = t1.order();
    for t in [t1, t2] {
        if t.order() > ISOMORPHISM_CAP {
            return Err(OracleError::TooLarge { count: t.order() as u128, cap: ISOMORPHISM_CAP as u128 });
        }
    }
    if n != t2.order() || order_census(t1) != order_census(t2) {
        return Ok(false);
    }
    let gens = t1.generating_set();
    let mut map = vec![u32::MAX; n];
    map[0] = 0;
    Ok(extend(t1, t2, &gens, 0, &mut map))
}

fn order_census(t: &GroupTable) -> Vec<usize> {
    let mut v: Vec<usize> = (0..t.order()).map(|x| t.element_order(x)).collect();
    v.sort_unstable();
    v
}

// Assigns an image to gens[k] and closes the partial map over the subgroup
// generated so far; backtracks on any clash.
fn extend(t1: &GroupTable, t2: &GroupTable, gens: &[usize], k: usize, map: &mut Vec<u32>) -> bool {
    if k == gens.len() {
        let n = t1.order();
        let mut hit = vec![false; n];
        for &v in map.iter() {
            if v == u32::MAX || std::mem::replace(&mut hit[v as usize], true) {
                return false;
            }
        }
        return (0..n).all(|x| (0..n).all(|y| map[t1.mul(x, y)] as usize == t2.mul(map[x] as usize, map[y] as usize)));
    }
    let g = gens[k];
    let order = t1.element_order(g);
    for img in 0..t2.order() {
        if t2.element_order(img) != order {
            continue;
        }
        let saved = map.clone();
        if close(t1, t2, gens, k, img, map) && extend(t1, t2, gens, k + 1, map) {
            return true;
        }
        *map = saved;
    }
    false
}

fn close(t1: &GroupTable, t2: &GroupTable, gens: &[usize], k: usize, img: usize, map: &mut [u32]) -> bool {
    let g = gens[k];
    if map[g] != u32::MAX && map[g] as usize != img {
        return false;
    }
    map[g] = img as u32;
    let mut frontier: Vec<usize> = (0..t1.order()).filter(|&x| map[x] != u32::MAX).collect();
    let mut used = vec![false; t2.order()];
    for &x in &frontier {
        if std::mem::replace(&mut used[map[x] as usize], true) && x != g {
            return false;
        }
    }
    while let Some(x) = frontier.pop() {
        for &h in &gens[..=k] {
            let y = t1.mul(x, h);
            let fy = t2.mul(map[x] as usize, map[h] as usize) as u32;
            if map[y] == u32::MAX {
                if used[fy as usize] {
                    return false;
                }
                used[fy as usize] = true;
                map[y] = fy;
                frontier.push(y);
            } else if map[y] != fy {
                return false;
            }
        }
    }
    true
}
