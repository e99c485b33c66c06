use rand::{Rng, RngCore};

use super::codec::Codec;
use super::oracle::{GroupOracle, Handle};
use super::table::GroupTable;

/// A [`GroupTable`] behind opaque 16-byte handles.
#[derive(Clone, Debug)]
pub struct EncodedOracle {
    table: GroupTable,
    codec: Codec,
    gens: Vec<usize>,
}

/// Wraps a table as a black-box group whose encoding depends only on `seed`.
pub fn wrap_as_oracle(table: GroupTable, seed: u64) -> EncodedOracle {
    EncodedOracle::new(table, seed)
}

impl EncodedOracle {
    pub fn new(table: GroupTable, seed: u64) -> Self {
        let gens = table.generating_set();
        EncodedOracle { table, codec: Codec::new(seed), gens }
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn encode(&self, x: usize) -> Handle {
        assert!(x < self.table.order());
        self.codec.seal_one(x as u64)
    }

    pub fn decode(&self, h: &Handle) -> Option<usize> {
        let v = self.codec.open_one(h)?;
        (v < self.table.order() as u64).then_some(v as usize)
    }

    fn index(&self, h: &Handle) -> usize {
        self.decode(h).expect("handle was not issued by this oracle")
    }
}

impl GroupOracle for EncodedOracle {
    fn compose(&self, a: &Handle, b: &Handle) -> Handle {
        self.encode(self.table.mul(self.index(a), self.index(b)))
    }

    fn invert(&self, a: &Handle) -> Handle {
        self.encode(self.table.inv(self.index(a)))
    }

    fn is_identity(&self, a: &Handle) -> bool {
        self.index(a) == 0
    }

    fn identity(&self) -> Handle {
        self.encode(0)
    }

    fn generators(&self) -> Vec<Handle> {
        self.gens.iter().map(|&g| self.encode(g)).collect()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Handle {
        self.encode(rng.gen_range(0..self.table.order()))
    }

    fn order_bound(&self) -> u64 {
        self.table.order() as u64
    }

    fn equal(&self, a: &Handle, b: &Handle) -> bool {
        a == b
    }

    fn unique_encoding(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::oracle::{enumerate_subgroup, random_generating_set};

    #[test]
    fn answers_match_table() {
        let t = GroupTable::dihedral(5);
        let o = wrap_as_oracle(t.clone(), 11);
        for x in 0..10 {
            assert_eq!(o.decode(&o.encode(x)), Some(x));
            assert_eq!(o.decode(&o.invert(&o.encode(x))), Some(t.inv(x)));
            for y in 0..10 {
                assert_eq!(o.decode(&o.compose(&o.encode(x), &o.encode(y))), Some(t.mul(x, y)));
            }
        }
    }

    #[test]
    fn units_example() {
        let t = GroupTable::units_mod_n(15).unwrap();
        let two = t.index_of_residue(2).unwrap();
        let eight = t.index_of_residue(8).unwrap();
        let o = wrap_as_oracle(t.clone(), 0);
        let p = o.decode(&o.compose(&o.encode(two), &o.encode(eight))).unwrap();
        assert_eq!(t.residue(p), Some(1));
        assert!(o.is_identity(&o.encode(0)));
        assert_ne!(wrap_as_oracle(GroupTable::cyclic(2), 0).encode(1), wrap_as_oracle(GroupTable::cyclic(2), 1).encode(1));
    }

    #[test]
    fn random_sets_generate() {
        let o = wrap_as_oracle(GroupTable::units_mod_n(15).unwrap(), 3);
        let gens = random_generating_set(&o, 5, 16);
        assert_eq!(enumerate_subgroup(&o, &gens, 100).unwrap().len(), 8);
        let triv = wrap_as_oracle(GroupTable::trivial(), 3);
        assert!(random_generating_set(&triv, 1, 4).iter().all(|h| triv.is_identity(h)));
    }
}
