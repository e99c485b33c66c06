use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::RngCore;
use smallvec::SmallVec;

use super::product::ProductOracle;
use super::GroupError;
use crate::seed;

/// An opaque element string issued by a [`GroupOracle`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Handle(SmallVec<[u8; 24]>);

impl Handle {
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Handle(SmallVec::from_slice(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        hex::decode(s).ok().map(|b| Handle::from_bytes(&b))
    }
}

impl fmt::Debug for Handle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Handle({})", self.to_hex())
    }
}

impl fmt::Display for Handle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A black-box group: elements are opaque strings and only the group
/// operations are available.
pub trait GroupOracle: Send + Sync {
    fn compose(&self, a: &Handle, b: &Handle) -> Handle;
    fn invert(&self, a: &Handle) -> Handle;
    fn is_identity(&self, a: &Handle) -> bool;
    fn identity(&self) -> Handle;
    fn generators(&self) -> Vec<Handle>;
    /// A (near-)uniform random element.
    fn sample(&self, rng: &mut dyn RngCore) -> Handle;
    /// An upper bound on the group order.
    fn order_bound(&self) -> u64;

    /// Element equality. Goes through the identity test so that non-unique
    /// encodings are handled.
    fn equal(&self, a: &Handle, b: &Handle) -> bool {
        self.is_identity(&self.compose(a, &self.invert(b)))
    }

    /// Whether each element has exactly one handle, so handles may be hashed.
    fn unique_encoding(&self) -> bool {
        false
    }

    fn as_product(&self) -> Option<&ProductOracle> {
        None
    }
}

pub fn pow<O: GroupOracle + ?Sized>(o: &O, g: &Handle, k: i128) -> Handle {
    let base = if k < 0 { o.invert(g) } else { g.clone() };
    pow_u(o, &base, k.unsigned_abs())
}

pub fn pow_u<O: GroupOracle + ?Sized>(o: &O, g: &Handle, mut e: u128) -> Handle {
    let mut acc = o.identity();
    let mut b = g.clone();
    let mut first = true;
    while e > 0 {
        if e & 1 == 1 {
            acc = if first { b.clone() } else { o.compose(&acc, &b) };
            first = false;
        }
        e >>= 1;
        if e > 0 {
            b = o.compose(&b, &b);
        }
    }
    acc
}

/// `∏ gens[j]^{exps[j]}`.
pub fn multi_pow<O: GroupOracle + ?Sized>(o: &O, gens: &[Handle], exps: &[u128]) -> Handle {
    gens.iter().zip(exps).fold(o.identity(), |acc, (g, &e)| {
        if e == 0 {
            acc
        } else {
            o.compose(&acc, &pow_u(o, g, e))
        }
    })
}

/// `[a, b] = a b a⁻¹ b⁻¹`.
pub fn commutator<O: GroupOracle + ?Sized>(o: &O, a: &Handle, b: &Handle) -> Handle {
    let ab = o.compose(a, b);
    let ba = o.compose(b, a);
    o.compose(&ab, &o.invert(&ba))
}

/// `count` independent samples from the oracle under `seed`.
pub fn random_generating_set<O: GroupOracle + ?Sized>(o: &O, seed: u64, count: usize) -> Vec<Handle> {
    let mut rng = seed::sub_rng(seed, 0x6765_6e73);
    (0..count).map(|_| o.sample(&mut rng)).collect()
}

/// `c·⌈log₂ bound⌉`, at least 1.
pub fn generator_count(multiplier: usize, bound: u64) -> usize {
    let bits = 64 - bound.saturating_sub(1).leading_zeros() as usize;
    (multiplier * bits).max(1)
}

/// A lookup table from elements to values. Hashes handles when the oracle
/// encodes uniquely and falls back to a linear scan with [`GroupOracle::equal`]
/// otherwise.
pub struct HandleMap<'o, O: GroupOracle + ?Sized, V> {
    oracle: &'o O,
    hashed: Option<HashMap<Handle, V>>,
    list: Vec<(Handle, V)>,
}

impl<'o, O: GroupOracle + ?Sized, V: Clone> HandleMap<'o, O, V> {
    pub fn new(oracle: &'o O) -> Self {
        let hashed = oracle.unique_encoding().then(HashMap::new);
        HandleMap { oracle, hashed, list: Vec::new() }
    }

    /// Inserts unless the element is already present.
    pub fn insert(&mut self, h: Handle, v: V) -> bool {
        match &mut self.hashed {
            Some(m) => {
                if m.contains_key(&h) {
                    return false;
                }
                m.insert(h, v);
                true
            }
            None => {
                if self.get(&h).is_some() {
                    return false;
                }
                self.list.push((h, v));
                true
            }
        }
    }

    pub fn get(&self, h: &Handle) -> Option<V> {
        match &self.hashed {
            Some(m) => m.get(h).cloned(),
            None => self.list.iter().find(|(k, _)| self.oracle.equal(k, h)).map(|(_, v)| v.clone()),
        }
    }

    pub fn len(&self) -> usize {
        match &self.hashed {
            Some(m) => m.len(),
            None => self.list.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Enumerates the subgroup generated by `gens`, failing beyond `cap` elements.
pub fn enumerate_subgroup<O: GroupOracle + ?Sized>(
    o: &O,
    gens: &[Handle],
    cap: usize,
) -> Result<Vec<Handle>, GroupError> {
    let mut seen: HandleMap<'_, O, ()> = HandleMap::new(o);
    let id = o.identity();
    seen.insert(id.clone(), ());
    let mut elems = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = o.compose(&x, g);
            if seen.insert(y.clone(), ()) {
                if elems.len() == cap {
                    return Err(GroupError::TooLarge { cap });
                }
                elems.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(elems)
}

/// Distinct handles in `hs`, compared through the oracle.
pub fn distinct_count<O: GroupOracle + ?Sized>(o: &O, hs: &[Handle]) -> usize {
    if o.unique_encoding() {
        hs.iter().collect::<HashSet<_>>().len()
    } else {
        let mut m: HandleMap<'_, O, ()> = HandleMap::new(o);
        hs.iter().filter(|h| m.insert((*h).clone(), ())).count()
    }
}
