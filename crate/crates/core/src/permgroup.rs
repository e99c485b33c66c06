//! Permutation groups: strong generating sets by deterministic
//! Schreier–Sims, membership by sifting, and exact group orders.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("image array is not a bijection")]
    NotABijection,
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// A bijection of `[0, n)`. Products compose left to right: `p.then(q)`
/// applies `p` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    pub fn new(image: Vec<u32>) -> Result<Self, PermError> {
        let mut seen = vec![false; image.len()];
        for &v in &image {
            if v as usize >= image.len() || std::mem::replace(&mut seen[v as usize], true) {
                return Err(PermError::NotABijection);
            }
        }
        Ok(Permutation { image })
    }

    pub(crate) fn from_vec_unchecked(image: Vec<u32>) -> Self {
        Permutation { image }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n as u32).collect() }
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self, PermError> {
        let mut image: Vec<u32> = (0..n as u32).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a as usize >= n {
                    return Err(PermError::NotABijection);
                }
                image[a as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::new(image)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.image[i as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.image
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { image: self.image.iter().map(|&i| other.image[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    pub fn first_moved(&self) -> Option<u32> {
        self.image.iter().enumerate().find(|&(i, &v)| i as u32 != v).map(|(i, _)| i as u32)
    }

    pub fn order(&self) -> BigUint {
        let mut seen = vec![false; self.image.len()];
        let mut acc = BigUint::from(1u32);
        for s in 0..self.image.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x] as usize;
                len += 1;
            }
            acc = num_integer::Integer::lcm(&acc, &BigUint::from(len));
        }
        acc
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm {}:", self.image.len())?;
        for v in &self.image {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PermError::Parse(s.to_string());
        let rest = s.trim().strip_prefix("perm").ok_or_else(bad)?;
        let (n, body) = rest.split_once(':').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let image = body.split_whitespace().map(|t| t.parse::<u32>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
        if image.len() != n {
            return Err(PermError::DegreeMismatch { expected: n, got: image.len() });
        }
        Permutation::new(image)
    }
}

/// Data carried alongside group elements through the chain, composing the
/// same way the elements do.
pub trait Label: Clone + Send + Sync {
    /// The identity label of the same shape.
    fn one(&self) -> Self;
    fn then(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
}

impl Label for () {
    fn one(&self) -> Self {}
    fn then(&self, _: &Self) -> Self {}
    fn inverse(&self) -> Self {}
}

/// A vector in `Z_{n₁} × … × Z_{n_k}`, for tracking elements of an abelian
/// group as words in its generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentLabel {
    pub coeffs: Vec<u64>,
    pub moduli: std::sync::Arc<[u64]>,
}

impl ExponentLabel {
    pub fn unit(moduli: std::sync::Arc<[u64]>, i: usize) -> Self {
        let mut coeffs = vec![0; moduli.len()];
        coeffs[i] = 1 % moduli[i];
        ExponentLabel { coeffs, moduli }
    }
}

impl Label for ExponentLabel {
    fn one(&self) -> Self {
        ExponentLabel { coeffs: vec![0; self.coeffs.len()], moduli: self.moduli.clone() }
    }

    fn then(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(self.moduli.iter())
            .map(|((&a, &b), &m)| ((a as u128 + b as u128) % m as u128) as u64)
            .collect();
        ExponentLabel { coeffs, moduli: self.moduli.clone() }
    }

    fn inverse(&self) -> Self {
        let coeffs = self.coeffs.iter().zip(self.moduli.iter()).map(|(&a, &m)| (m - a % m) % m).collect();
        ExponentLabel { coeffs, moduli: self.moduli.clone() }
    }
}

#[derive(Clone)]
struct Rep<L> {
    perm: Permutation,
    inv: Permutation,
    label: L,
    inv_label: L,
}

#[derive(Clone)]
struct Level<L> {
    point: u32,
    gens: Vec<(Permutation, L)>,
    orbit: Vec<u32>,
    // point → index into reps
    slot: Vec<u32>,
    reps: Vec<Rep<L>>,
    checked: (usize, usize),
}

const NONE: u32 = u32::MAX;

impl<L: Label> Level<L> {
    fn new(point: u32, degree: usize, one: L) -> Self {
        let id = Permutation::identity(degree);
        let mut slot = vec![NONE; degree];
        slot[point as usize] = 0;
        Level {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            slot,
            reps: vec![Rep { perm: id.clone(), inv: id, label: one.clone(), inv_label: one }],
            checked: (0, 0),
        }
    }

    // Extends the orbit and transversal; existing representatives never change.
    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            let ri = self.slot[b as usize] as usize;
            for g in 0..self.gens.len() {
                let c = self.gens[g].0.apply(b);
                if self.slot[c as usize] == NONE {
                    let rep = &self.reps[ri];
                    let perm = rep.perm.then(&self.gens[g].0);
                    let label = rep.label.then(&self.gens[g].1);
                    let inv = perm.inverse();
                    let inv_label = label.inverse();
                    self.slot[c as usize] = self.reps.len() as u32;
                    self.reps.push(Rep { perm, inv, label, inv_label });
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }

    fn rep(&self, b: u32) -> Option<&Rep<L>> {
        let s = self.slot[b as usize];
        (s != NONE).then(|| &self.reps[s as usize])
    }
}

/// A base with a chain of point stabilizers, each level holding explicit
/// coset representatives for the orbit of its base point.
#[derive(Clone)]
pub struct StrongGeneratingSet<L: Label = ()> {
    degree: usize,
    levels: Vec<Level<L>>,
    one: L,
}

/// The outcome of sifting a permutation through the chain.
#[derive(Clone, Debug)]
pub struct Sift<L> {
    /// What is left after dividing out coset representatives.
    pub residue: Permutation,
    /// The level at which sifting stopped (the chain length if it ran through).
    pub level: usize,
    /// The label of the product of representatives divided out.
    pub word: L,
}

impl<L> Sift<L> {
    pub fn is_member(&self) -> bool {
        self.residue.is_identity()
    }
}

/// Builds a strong generating set for the group generated by `gens`.
pub fn schreier_sims(gens: &[Permutation], degree: usize) -> Result<StrongGeneratingSet, PermError> {
    let labelled: Vec<(Permutation, ())> = gens.iter().map(|g| (g.clone(), ())).collect();
    schreier_sims_labelled(&labelled, degree, ())
}

/// [`schreier_sims`] with a label carried by every generator.
pub fn schreier_sims_labelled<L: Label>(
    gens: &[(Permutation, L)],
    degree: usize,
    one: L,
) -> Result<StrongGeneratingSet<L>, PermError> {
    for (g, _) in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch { expected: degree, got: g.degree() });
        }
    }
    let mut sgs = StrongGeneratingSet { degree, levels: Vec::new(), one };
    for (g, l) in gens {
        sgs.add_generator(g.clone(), l.clone());
    }
    Ok(sgs)
}

impl<L: Label> StrongGeneratingSet<L> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Orbit lengths down the chain.
    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * l.orbit.len())
    }

    fn sift_from(&self, mut h: Permutation, mut word: L, start: usize) -> Sift<L> {
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let b = h.apply(level.point);
            match level.rep(b) {
                Some(rep) => {
                    h = h.then(&rep.inv);
                    word = word.then(&rep.inv_label);
                }
                None => return Sift { residue: h, level: i, word },
            }
        }
        Sift { residue: h, level: self.levels.len(), word }
    }

    /// Sifts `p`. On membership, `word.inverse()` is the label of `p`
    /// expressed over the generators.
    pub fn sift(&self, p: &Permutation) -> Result<Sift<L>, PermError> {
        if p.degree() != self.degree {
            return Err(PermError::DegreeMismatch { expected: self.degree, got: p.degree() });
        }
        Ok(self.sift_from(p.clone(), self.one.clone(), 0))
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool, PermError> {
        Ok(self.sift(p)?.is_member())
    }

    /// The label of `p` over the generators when `p` is in the group.
    pub fn express(&self, p: &Permutation) -> Result<Option<L>, PermError> {
        let s = self.sift(p)?;
        Ok(s.is_member().then(|| s.word.inverse()))
    }

    fn add_generator(&mut self, g: Permutation, label: L) {
        let r = self.sift_from(g, label, 0);
        if r.residue.is_identity() {
            return;
        }
        self.insert(0, r.level, r.residue, r.word);
        self.close();
    }

    // Adds `h`, which fixes the base points above level `hi`, as a
    // generator of levels `lo..=hi`.
    fn insert(&mut self, lo: usize, hi: usize, h: Permutation, label: L) {
        if hi == self.levels.len() {
            let point = h.first_moved().expect("non-identity");
            self.levels.push(Level::new(point, self.degree, self.one.clone()));
        }
        for level in &mut self.levels[lo..=hi] {
            level.gens.push((h.clone(), label.clone()));
            level.extend_orbit();
        }
    }

    // Walks up from the bottom level checking Schreier generators; any that
    // fails to sift becomes a new strong generator and the walk restarts.
    fn close(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let l = i - 1;
            match self.find_failing_schreier(l) {
                Some((h, label, j)) => {
                    self.insert(l + 1, j, h, label);
                    i = self.levels.len();
                }
                None => i -= 1,
            }
        }
    }

    fn find_failing_schreier(&mut self, l: usize) -> Option<(Permutation, L, usize)> {
        let (done_orbit, done_gens) = self.levels[l].checked;
        let n_orbit = self.levels[l].orbit.len();
        let n_gens = self.levels[l].gens.len();
        for oi in 0..n_orbit {
            for gi in 0..n_gens {
                if oi < done_orbit && gi < done_gens {
                    continue;
                }
                let level = &self.levels[l];
                let b = level.orbit[oi];
                let (s, sl) = &level.gens[gi];
                let ub = level.rep(b).unwrap();
                let c = s.apply(b);
                let uc = level.rep(c).unwrap();
                let h = ub.perm.then(s).then(&uc.inv);
                if h.is_identity() {
                    continue;
                }
                let word = ub.label.then(sl).then(&uc.inv_label);
                let r = self.sift_from(h, word, l + 1);
                if !r.residue.is_identity() {
                    return Some((r.residue, r.word, r.level));
                }
            }
        }
        self.levels[l].checked = (n_orbit, n_gens);
        None
    }
}
