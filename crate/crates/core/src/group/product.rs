use std::sync::Arc;

use rand::RngCore;

use super::oracle::{GroupOracle, Handle};

/// The `arity`-fold direct power of a black-box group with componentwise
/// operations. Handles are length-prefixed concatenations of component
/// handles.
#[derive(Clone)]
pub struct ProductOracle {
    factor: Arc<dyn GroupOracle>,
    arity: usize,
}

impl ProductOracle {
    pub fn new(factor: Arc<dyn GroupOracle>, arity: usize) -> Self {
        ProductOracle { factor, arity }
    }

    pub fn factor(&self) -> &Arc<dyn GroupOracle> {
        &self.factor
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn join(&self, parts: &[Handle]) -> Handle {
        assert_eq!(parts.len(), self.arity);
        let mut bytes = Vec::with_capacity(parts.iter().map(|p| p.as_bytes().len() + 2).sum());
        for p in parts {
            let b = p.as_bytes();
            bytes.extend_from_slice(&(b.len() as u16).to_le_bytes());
            bytes.extend_from_slice(b);
        }
        Handle::from_bytes(&bytes)
    }

    pub fn split(&self, h: &Handle) -> Vec<Handle> {
        let mut bytes = h.as_bytes();
        let mut parts = Vec::with_capacity(self.arity);
        while !bytes.is_empty() {
            let len = u16::from_le_bytes([bytes[0], bytes[1]]) as usize;
            parts.push(Handle::from_bytes(&bytes[2..2 + len]));
            bytes = &bytes[2 + len..];
        }
        assert_eq!(parts.len(), self.arity, "handle was not issued by this oracle");
        parts
    }

    /// The element with `x` at position `pos` and the identity elsewhere.
    pub fn unit_vector(&self, pos: usize, x: Handle) -> Handle {
        let id = self.factor.identity();
        let parts: Vec<Handle> = (0..self.arity).map(|i| if i == pos { x.clone() } else { id.clone() }).collect();
        self.join(&parts)
    }
}

impl GroupOracle for ProductOracle {
    fn compose(&self, a: &Handle, b: &Handle) -> Handle {
        let parts: Vec<Handle> =
            self.split(a).iter().zip(self.split(b)).map(|(x, y)| self.factor.compose(x, &y)).collect();
        self.join(&parts)
    }

    fn invert(&self, a: &Handle) -> Handle {
        let parts: Vec<Handle> = self.split(a).iter().map(|x| self.factor.invert(x)).collect();
        self.join(&parts)
    }

    fn is_identity(&self, a: &Handle) -> bool {
        self.split(a).iter().all(|x| self.factor.is_identity(x))
    }

    fn identity(&self) -> Handle {
        self.join(&vec![self.factor.identity(); self.arity])
    }

    /// `arity` labelled copies of the factor's generating set.
    fn generators(&self) -> Vec<Handle> {
        let gens = self.factor.generators();
        (0..self.arity).flat_map(|pos| gens.iter().map(move |g| (pos, g))).map(|(pos, g)| self.unit_vector(pos, g.clone())).collect()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Handle {
        let parts: Vec<Handle> = (0..self.arity).map(|_| self.factor.sample(rng)).collect();
        self.join(&parts)
    }

    fn order_bound(&self) -> u64 {
        self.factor.order_bound().saturating_pow(self.arity as u32)
    }

    fn equal(&self, a: &Handle, b: &Handle) -> bool {
        if self.unique_encoding() {
            return a == b;
        }
        self.split(a).iter().zip(self.split(b)).all(|(x, y)| self.factor.equal(x, &y))
    }

    fn unique_encoding(&self) -> bool {
        self.factor.unique_encoding()
    }

    fn as_product(&self) -> Option<&ProductOracle> {
        Some(self)
    }
}
