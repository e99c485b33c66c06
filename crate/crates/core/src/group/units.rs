use rand::{Rng, RngCore};

use super::codec::Codec;
use super::oracle::{generator_count, GroupOracle, Handle};
use super::GroupError;
use crate::abelian::arith::{mod_inv, mul_mod};
use crate::seed;

/// The units group `Z_N^*` as a black box. Handles encode residues.
#[derive(Clone, Debug)]
pub struct UnitsOracle {
    modulus: u64,
    codec: Codec,
    gens: Vec<u64>,
}

impl UnitsOracle {
    /// Generators are `multiplier·⌈log₂ N⌉` random residues that pass a gcd
    /// check against `N`.
    pub fn new(modulus: u64, seed: u64, multiplier: usize) -> Result<Self, GroupError> {
        if modulus < 2 || modulus >= 1 << 63 {
            return Err(GroupError::NOutOfRange { n: modulus });
        }
        let mut rng = seed::sub_rng(seed, 0x756e_6974);
        let count = generator_count(multiplier, modulus);
        let mut gens = Vec::with_capacity(count);
        if modulus > 2 {
            while gens.len() < count {
                let r = rng.gen_range(1..modulus);
                if num_integer::gcd(r, modulus) == 1 {
                    gens.push(r);
                }
            }
        }
        Ok(UnitsOracle { modulus, codec: Codec::new(seed::derive(seed, 0x636f_6465)), gens })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The handle of a residue, if it is a unit.
    pub fn encode_residue(&self, r: u64) -> Option<Handle> {
        let r = r % self.modulus;
        (num_integer::gcd(r, self.modulus) == 1 || self.modulus == 2 && r == 1).then(|| self.codec.seal_one(r))
    }

    pub fn decode_residue(&self, h: &Handle) -> Option<u64> {
        self.codec.open_one(h).filter(|&r| r < self.modulus)
    }

    fn residue(&self, h: &Handle) -> u64 {
        self.decode_residue(h).expect("handle was not issued by this oracle")
    }

    fn seal(&self, r: u64) -> Handle {
        self.codec.seal_one(r)
    }
}

impl GroupOracle for UnitsOracle {
    fn compose(&self, a: &Handle, b: &Handle) -> Handle {
        self.seal(mul_mod(self.residue(a), self.residue(b), self.modulus))
    }

    fn invert(&self, a: &Handle) -> Handle {
        let r = self.residue(a);
        self.seal(if self.modulus == 2 { 1 } else { mod_inv(r, self.modulus).expect("unit") })
    }

    fn is_identity(&self, a: &Handle) -> bool {
        self.residue(a) == 1 % self.modulus || self.modulus == 2
    }

    fn identity(&self) -> Handle {
        self.seal(1)
    }

    fn generators(&self) -> Vec<Handle> {
        self.gens.iter().map(|&g| self.seal(g)).collect()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Handle {
        if self.modulus == 2 {
            return self.seal(1);
        }
        loop {
            let r = rng.gen_range(1..self.modulus);
            if num_integer::gcd(r, self.modulus) == 1 {
                return self.seal(r);
            }
        }
    }

    fn order_bound(&self) -> u64 {
        (self.modulus - 1).max(1)
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
    use crate::group::oracle::enumerate_subgroup;

    #[test]
    fn arithmetic_and_generation() {
        let u = UnitsOracle::new(15, 9, 4).unwrap();
        let two = u.encode_residue(2).unwrap();
        let eight = u.encode_residue(8).unwrap();
        assert!(u.is_identity(&u.compose(&two, &eight)));
        assert_eq!(u.decode_residue(&u.invert(&two)), Some(8));
        assert!(u.encode_residue(5).is_none());
        assert_eq!(enumerate_subgroup(&u, &u.generators(), 64).unwrap().len(), 8);
        let trivial = UnitsOracle::new(2, 1, 4).unwrap();
        assert!(trivial.generators().is_empty());
        assert!(trivial.is_identity(&trivial.sample(&mut crate::seed::rng(0))));
    }
}
