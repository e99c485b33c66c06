//! Element orders in black-box groups.

use rand::Rng;

use super::arith::{factorize, Factorization};
use super::AbelianError;
use crate::group::oracle::{pow_u, HandleMap};
use crate::group::{GroupOracle, Handle};
use crate::seed;

/// Bounds up to `BSGS_LIMIT²` use baby-step giant-step.
pub const BSGS_LIMIT: u64 = 1 << 20;

fn isqrt_ceil(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

/// The order of `g`, assuming it is at most `bound`.
pub fn element_order<O: GroupOracle + ?Sized>(g: &Handle, oracle: &O, bound: u64) -> Result<u64, AbelianError> {
    if oracle.is_identity(g) {
        return Ok(1);
    }
    let bound = bound.max(1);
    if isqrt_ceil(bound) <= BSGS_LIMIT || !oracle.unique_encoding() {
        return bsgs_order(oracle, g, bound);
    }
    let multiple = rho_multiple(oracle, g, bound)?;
    let fact = factorize(multiple);
    Ok(strip_multiple(oracle, g, multiple as u128, &fact) as u64)
}

fn bsgs_order<O: GroupOracle + ?Sized>(o: &O, g: &Handle, bound: u64) -> Result<u64, AbelianError> {
    let m = isqrt_ceil(bound).max(1);
    let mut baby: HandleMap<'_, O, u64> = HandleMap::new(o);
    let mut x = o.identity();
    for j in 0..m {
        if j > 0 && o.is_identity(&x) {
            return Ok(j);
        }
        baby.insert(x.clone(), j);
        x = o.compose(&x, g);
    }
    if o.is_identity(&x) {
        return Ok(m);
    }
    let giant = x;
    let mut y = giant.clone();
    for i in 1..=bound.div_ceil(m) + 1 {
        if let Some(j) = baby.get(&y) {
            return Ok(i * m - j);
        }
        y = o.compose(&y, &giant);
    }
    Err(AbelianError::BoundExceeded { bound })
}

/// A multiple of the order of `g` from a cycle of the walk
/// `x ↦ x·g^{c(x)}` (Brent's cycle finding). Requires unique encodings.
fn rho_multiple<O: GroupOracle + ?Sized>(o: &O, g: &Handle, bound: u64) -> Result<u64, AbelianError> {
    const JUMPS: usize = 32;
    let root = isqrt_ceil(bound);
    let mut rng = seed::rng(seed::derive(bound, 0x72686f));
    let exps: Vec<u64> = (0..JUMPS).map(|_| rng.gen_range(1..=root)).collect();
    let jumps: Vec<Handle> = exps.iter().map(|&c| pow_u(o, g, c as u128)).collect();
    let pick = |h: &Handle| {
        let b = h.as_bytes();
        let mut w = [0u8; 8];
        let n = b.len().min(8);
        w[..n].copy_from_slice(&b[..n]);
        (seed::splitmix64(u64::from_le_bytes(w)) % JUMPS as u64) as usize
    };
    let start: u128 = rng.gen_range(1..=root) as u128;
    let mut x = pow_u(o, g, start);
    let mut dist = start;
    let mut tortoise = x.clone();
    let mut tdist = dist;
    let (mut power, mut lam) = (1u64, 0u64);
    let limit = 64 * root + 1_000_000;
    for _ in 0..limit {
        if lam == power {
            tortoise = x.clone();
            tdist = dist;
            power *= 2;
            lam = 0;
        }
        let t = pick(&x);
        x = o.compose(&x, &jumps[t]);
        dist += exps[t] as u128;
        lam += 1;
        if x == tortoise {
            let m = dist - tdist;
            return u64::try_from(m).map_err(|_| AbelianError::BoundExceeded { bound });
        }
    }
    Err(AbelianError::BoundExceeded { bound })
}

/// Reduces a known multiple of the order of `g` to the order itself.
pub fn strip_multiple<O: GroupOracle + ?Sized>(o: &O, g: &Handle, multiple: u128, fact: &Factorization) -> u128 {
    let mut m = multiple;
    for &(p, e) in &fact.factors {
        for _ in 0..e {
            if m % p as u128 == 0 && o.is_identity(&pow_u(o, g, m / p as u128)) {
                m /= p as u128;
            } else {
                break;
            }
        }
    }
    m
}

/// Computes orders of many elements of one abelian group, reusing the
/// exponent found so far: once `g^M = 1` for the accumulated `M`, the order
/// of `g` is found by stripping prime factors from `M`.
pub struct OrderFinder<'o, O: GroupOracle + ?Sized> {
    oracle: &'o O,
    bound: u64,
    exponent: u128,
    fact: Factorization,
}

impl<'o, O: GroupOracle + ?Sized> OrderFinder<'o, O> {
    pub fn new(oracle: &'o O, bound: u64) -> Self {
        OrderFinder { oracle, bound, exponent: 1, fact: Factorization::default() }
    }

    pub fn order(&mut self, g: &Handle) -> Result<u64, AbelianError> {
        let o = self.oracle;
        if o.is_identity(g) {
            return Ok(1);
        }
        let h = pow_u(o, g, self.exponent);
        let (multiple, fact) = if o.is_identity(&h) {
            (self.exponent, self.fact.clone())
        } else {
            let r = element_order(&h, o, self.bound)?;
            (self.exponent * r as u128, self.fact.merge(&factorize(r)))
        };
        let ord = strip_multiple(o, g, multiple, &fact);
        let ord = u64::try_from(ord).map_err(|_| AbelianError::BoundExceeded { bound: self.bound })?;
        self.absorb(ord);
        Ok(ord)
    }

    fn absorb(&mut self, ord: u64) {
        let f = factorize(ord);
        for &(p, e) in &f.factors {
            let have = self.fact.exponent_of(p);
            if e > have {
                self.exponent *= (p as u128).pow(e - have);
                match self.fact.factors.iter_mut().find(|(q, _)| *q == p) {
                    Some(slot) => slot.1 = e,
                    None => {
                        self.fact.factors.push((p, e));
                        self.fact.factors.sort_unstable();
                    }
                }
            }
        }
    }

    /// The lcm of all orders found so far.
    pub fn exponent(&self) -> u128 {
        self.exponent
    }

    pub fn exponent_factorization(&self) -> &Factorization {
        &self.fact
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{wrap_as_oracle, GroupTable, UnitsOracle};

    #[test]
    fn small_orders() {
        let t = GroupTable::units_mod_n(15).unwrap();
        let o = wrap_as_oracle(t.clone(), 1);
        let two = o.encode(t.index_of_residue(2).unwrap());
        assert_eq!(element_order(&two, &o, 8).unwrap(), 4);
        assert_eq!(element_order(&o.identity(), &o, 8).unwrap(), 1);
        let z6 = wrap_as_oracle(GroupTable::cyclic(6), 2);
        assert_eq!(element_order(&z6.encode(1), &z6, 6).unwrap(), 6);
        assert!(matches!(element_order(&z6.encode(1), &z6, 2), Err(AbelianError::BoundExceeded { .. })));
    }

    #[test]
    fn rho_path_on_large_units() {
        // a large modulus forces the cycle-finding path; 7^(p-1) has order
        // dividing q - 1, which keeps the walk short
        let p = (1u64 << 31) - 1;
        let q = 1_000_003u64;
        let n = p * q;
        let u = UnitsOracle::new(n, 5, 1).unwrap();
        let g = pow_u(&u, &u.encode_residue(7).unwrap(), (p - 1) as u128);
        let bound = n - 1;
        let r = element_order(&g, &u, bound).unwrap();
        assert!(u.is_identity(&pow_u(&u, &g, r as u128)));
        for (pr, _) in factorize(r).factors {
            assert!(!u.is_identity(&pow_u(&u, &g, (r / pr) as u128)));
        }
        let mut finder = OrderFinder::new(&u, bound);
        assert_eq!(finder.order(&g).unwrap(), r);
        let g2 = u.compose(&g, &g);
        assert_eq!(finder.order(&g2).unwrap(), if r % 2 == 0 { r / 2 } else { r });
    }
}
