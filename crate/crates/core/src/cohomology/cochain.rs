use super::{CohomologyError, GModule};
use crate::group::GroupTable;
use crate::par;
use crate::permgroup::Permutation;

/// A normalized map `G → A` (`s(e) = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1<T> {
    values: Vec<T>,
}

/// A normalized map `G × G → A` (`f(x, e) = f(e, y) = 0`), stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain2<T> {
    order: usize,
    values: Vec<T>,
}

/// A map `G × G × G → A`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain3<T> {
    order: usize,
    values: Vec<T>,
}

impl<T: Clone> Cochain1<T> {
    pub fn new<M: GModule<Elem = T>>(values: Vec<T>, m: &M) -> Result<Self, CohomologyError> {
        if values.first().is_some_and(|v| !m.is_zero(v)) {
            return Err(CohomologyError::NotNormalized(vec![0]));
        }
        Ok(Cochain1 { values })
    }

    pub fn zero<M: GModule<Elem = T>>(order: usize, m: &M) -> Self {
        Cochain1 { values: vec![m.zero(); order] }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, x: usize) -> &T {
        &self.values[x]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn add<M: GModule<Elem = T>>(&self, other: &Self, m: &M) -> Self {
        Cochain1 { values: self.values.iter().zip(&other.values).map(|(a, b)| m.add(a, b)).collect() }
    }

    pub fn equal<M: GModule<Elem = T>>(&self, other: &Self, m: &M) -> bool {
        self.values.len() == other.values.len() && self.values.iter().zip(&other.values).all(|(a, b)| m.equal(a, b))
    }
}

impl<T: Clone + Send + Sync> Cochain2<T> {
    pub fn new<M: GModule<Elem = T>>(order: usize, values: Vec<T>, m: &M) -> Result<Self, CohomologyError> {
        if values.len() != order * order {
            return Err(CohomologyError::WrongLength { expected: order * order, got: values.len() });
        }
        for x in 0..order {
            if !m.is_zero(&values[x]) {
                return Err(CohomologyError::NotNormalized(vec![0, x]));
            }
            if !m.is_zero(&values[x * order]) {
                return Err(CohomologyError::NotNormalized(vec![x, 0]));
            }
        }
        Ok(Cochain2 { order, values })
    }

    pub fn zero<M: GModule<Elem = T>>(order: usize, m: &M) -> Self {
        Cochain2 { order, values: vec![m.zero(); order * order] }
    }

    /// Builds a cochain from its values away from the identity rows and
    /// columns; those are set to zero.
    pub fn from_fn<M: GModule<Elem = T>>(order: usize, m: &M, f: impl Fn(usize, usize) -> T + Sync + Send) -> Self {
        let values = par::map_range(order * order, |i| {
            let (x, y) = (i / order, i % order);
            if x == 0 || y == 0 {
                m.zero()
            } else {
                f(x, y)
            }
        });
        Cochain2 { order, values }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &T {
        &self.values[x * self.order + y]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn add<M: GModule<Elem = T>>(&self, other: &Self, m: &M) -> Self {
        Cochain2 { order: self.order, values: par::map_range(self.values.len(), |i| m.add(&self.values[i], &other.values[i])) }
    }

    /// `self − other`, pointwise.
    pub fn sub<M: GModule<Elem = T>>(&self, other: &Self, m: &M) -> Self {
        Cochain2 { order: self.order, values: par::map_range(self.values.len(), |i| m.sub(&self.values[i], &other.values[i])) }
    }

    pub fn neg<M: GModule<Elem = T>>(&self, m: &M) -> Self {
        Cochain2 { order: self.order, values: self.values.iter().map(|a| m.neg(a)).collect() }
    }

    pub fn is_zero<M: GModule<Elem = T>>(&self, m: &M) -> bool {
        self.values.iter().all(|a| m.is_zero(a))
    }

    pub fn equal<M: GModule<Elem = T>>(&self, other: &Self, m: &M) -> bool {
        self.order == other.order && self.values.iter().zip(&other.values).all(|(a, b)| m.equal(a, b))
    }

    pub fn is_normalized<M: GModule<Elem = T>>(&self, m: &M) -> bool {
        (0..self.order).all(|x| m.is_zero(self.get(0, x)) && m.is_zero(self.get(x, 0)))
    }
}

impl<T: Clone> Cochain3<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> &T {
        &self.values[(x * self.order + y) * self.order + z]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_zero<M: GModule<Elem = T>>(&self, m: &M) -> bool {
        self.values.iter().all(|a| m.is_zero(a))
    }

    /// The first triple where the value is nonzero.
    pub fn first_nonzero<M: GModule<Elem = T>>(&self, m: &M) -> Option<(usize, usize, usize)> {
        let n = self.order;
        self.values.iter().position(|a| !m.is_zero(a)).map(|i| (i / (n * n), (i / n) % n, i % n))
    }
}

/// The first triple `(x, y, z)` violating
/// `φ(x)f(y,z) − f(xy,z) + f(x,yz) − f(x,y) = 0`.
pub fn cocycle_violation<M: GModule>(f: &Cochain2<M::Elem>, g: &GroupTable, m: &M) -> Option<(usize, usize, usize)> {
    let n = g.order();
    // triples involving the identity hold for normalized cochains
    par::find_first(n, |x| {
        if x == 0 {
            return None;
        }
        for y in 1..n {
            let xy = g.mul(x, y);
            for z in 1..n {
                let lhs = m.add(&m.act(x, f.get(y, z)), f.get(x, g.mul(y, z)));
                let rhs = m.add(f.get(xy, z), f.get(x, y));
                if !m.equal(&lhs, &rhs) {
                    return Some((x, y, z));
                }
            }
        }
        None
    })
}

pub fn is_cocycle<M: GModule>(f: &Cochain2<M::Elem>, g: &GroupTable, m: &M) -> bool {
    f.is_normalized(m) && cocycle_violation(f, g, m).is_none()
}

/// `∂s(x, y) = s(x) + φ(x)s(y) − s(xy)`.
pub fn coboundary<M: GModule>(s: &Cochain1<M::Elem>, g: &GroupTable, m: &M) -> Cochain2<M::Elem> {
    let f = Cochain2::from_fn(g.order(), m, |x, y| m.sub(&m.add(s.get(x), &m.act(x, s.get(y))), s.get(g.mul(x, y))));
    debug_assert!(g.order() > 64 || is_cocycle(&f, g, m));
    f
}

/// `∂²f(x, y, z) = φ(x)f(y,z) − f(xy,z) + f(x,yz) − f(x,y)`.
pub fn coboundary2<M: GModule>(f: &Cochain2<M::Elem>, g: &GroupTable, m: &M) -> Cochain3<M::Elem> {
    let n = g.order();
    let values = par::map_range(n * n * n, |i| {
        let (x, y, z) = (i / (n * n), (i / n) % n, i % n);
        let a = m.add(&m.act(x, f.get(y, z)), f.get(x, g.mul(y, z)));
        let b = m.add(f.get(g.mul(x, y), z), f.get(x, y));
        m.sub(&a, &b)
    });
    Cochain3 { order: n, values }
}

/// The 1-cochain sending `x ↦ a` and everything else to zero.
pub fn delta1<M: GModule>(order: usize, x: usize, a: &M::Elem, m: &M) -> Cochain1<M::Elem> {
    assert!(x != 0);
    let mut values = vec![m.zero(); order];
    values[x] = a.clone();
    Cochain1 { values }
}

/// The normalized 2-cochain sending `(x, y) ↦ a` and everything else to zero.
pub fn delta2<M: GModule>(order: usize, x: usize, y: usize, a: &M::Elem, m: &M) -> Cochain2<M::Elem> {
    assert!(x != 0 && y != 0);
    let mut values = vec![m.zero(); order * order];
    values[x * order + y] = a.clone();
    Cochain2 { order, values }
}

/// `∂δ_{x,a}` for every non-identity `x` and every `a` in `a_gens`, in that
/// order (outer loop over `x`).
pub fn b2_generators<M: GModule>(g: &GroupTable, a_gens: &[M::Elem], m: &M) -> Vec<Cochain2<M::Elem>> {
    let n = g.order();
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|x| (0..a_gens.len()).map(move |k| (x, k))).collect();
    par::map_slice(&pairs, |&(x, k)| coboundary(&delta1(n, x, &a_gens[k], m), g, m))
}

/// `δ_{(x,y),a}` for every non-identity pair and every `a` in `a_gens`.
pub fn c2_generators<M: GModule>(g: &GroupTable, a_gens: &[M::Elem], m: &M) -> Vec<Cochain2<M::Elem>> {
    let n = g.order();
    let mut out = Vec::with_capacity((n.saturating_sub(1)).pow(2) * a_gens.len());
    for x in 1..n {
        for y in 1..n {
            for a in a_gens {
                out.push(delta2(n, x, y, a, m));
            }
        }
    }
    out
}

/// The permutation of `A × [0, k)` (point `b·|A| + a`) translating block `b`
/// by `values[b]`: the regular representation of `A^k`.
pub fn regular_image(values: &[u32], a: &GroupTable) -> Permutation {
    let m = a.order();
    let mut image = Vec::with_capacity(values.len() * m);
    for (b, &v) in values.iter().enumerate() {
        let row = a.row(v as usize);
        let base = (b * m) as u32;
        // a + v; A is abelian so the row of v lists v·a
        image.extend(row.iter().map(|&x| base + x));
    }
    Permutation::from_vec_unchecked(image)
}
