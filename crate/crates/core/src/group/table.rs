use std::collections::VecDeque;
use std::fmt;

use super::GroupError;
use crate::par;

/// Largest order for which associativity is checked on every triple. Larger
/// tables are checked with Light's test over a generating set.
pub const EXHAUSTIVE_ASSOCIATIVITY_MAX: usize = 512;
/// Largest units group materialized as a table.
pub const UNITS_TABLE_MAX: usize = 4096;

/// A finite group given by its multiplication table. The identity is always
/// element 0.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    product: Vec<u32>,
    inverse: Vec<u32>,
    residues: Option<Units>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Units {
    modulus: u64,
    residues: Vec<u64>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.residues {
            Some(u) => write!(f, "GroupTable(units {})", u.modulus),
            None => write!(f, "GroupTable(order {})", self.order),
        }
    }
}

/// Checks the group axioms on a candidate table and fills in inverses.
pub fn validate_table(rows: Vec<Vec<u32>>) -> Result<GroupTable, GroupError> {
    let n = rows.len();
    if n == 0 {
        return Err(GroupError::Empty);
    }
    let mut product = Vec::with_capacity(n * n);
    for (r, row) in rows.into_iter().enumerate() {
        if row.len() != n {
            return Err(GroupError::NotSquare { row: r, len: row.len(), order: n });
        }
        for (c, &v) in row.iter().enumerate() {
            if v as usize >= n {
                return Err(GroupError::EntryOutOfRange { row: r, col: c, value: v });
            }
        }
        product.extend(row);
    }
    GroupTable::from_flat(n, product)
}

impl GroupTable {
    /// Builds a table from a row-major product array, checking every axiom.
    pub fn from_flat(n: usize, product: Vec<u32>) -> Result<Self, GroupError> {
        assert_eq!(product.len(), n * n);
        for x in 0..n {
            if product[x] as usize != x || product[x * n] as usize != x {
                return Err(GroupError::NoIdentity { element: x });
            }
        }
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            let row = &product[x * n..(x + 1) * n];
            match row.iter().position(|&v| v == 0) {
                Some(y) if product[y * n + x] == 0 => inverse[x] = y as u32,
                _ => return Err(GroupError::NoInverse { element: x }),
            }
        }
        let table = GroupTable { order: n, product, inverse, residues: None };
        table.check_associative()?;
        Ok(table)
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order;
        let middles: Vec<usize> = if n <= EXHAUSTIVE_ASSOCIATIVITY_MAX {
            (0..n).collect()
        } else {
            self.light_generators()
        };
        let bad = par::find_first(n, |x| {
            for &y in &middles {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
            None
        });
        match bad {
            Some((x, y, z)) => Err(GroupError::NotAssociative { x, y, z }),
            None => Ok(()),
        }
    }

    // Generators of the magma under right multiplication, for Light's test.
    // Closure is taken via products x*g only, which never assumes associativity.
    fn light_generators(&self) -> Vec<usize> {
        let n = self.order;
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut found = vec![0usize];
        let mut gens = Vec::new();
        for g in 1..n {
            if seen[g] {
                continue;
            }
            gens.push(g);
            let mut queue: VecDeque<usize> = found.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &h in &gens {
                    for y in [self.mul(x, h), self.mul(h, x)] {
                        if !seen[y] {
                            seen[y] = true;
                            found.push(y);
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
        gens
    }

    pub fn trivial() -> Self {
        GroupTable { order: 1, product: vec![0], inverse: vec![0], residues: None }
    }

    /// The cyclic group `Z_n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mut product = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                product.push(((x + y) % n) as u32);
            }
        }
        let inverse = (0..n).map(|x| ((n - x) % n) as u32).collect();
        GroupTable { order: n, product, inverse, residues: None }
    }

    /// `Z_{d1} × … × Z_{dk}` with mixed-radix indexing (first factor most
    /// significant).
    pub fn abelian(factors: &[usize]) -> Self {
        factors.iter().fold(GroupTable::trivial(), |acc, &d| acc.direct_product(&GroupTable::cyclic(d)))
    }

    /// `self × other`, with `(a, b)` at index `a·|other| + b`.
    pub fn direct_product(&self, other: &GroupTable) -> Self {
        let (n, m) = (self.order, other.order);
        let size = n * m;
        let mut product = Vec::with_capacity(size * size);
        for x in 0..size {
            let (xa, xb) = (x / m, x % m);
            for y in 0..size {
                let (ya, yb) = (y / m, y % m);
                product.push((self.mul(xa, ya) * m + other.mul(xb, yb)) as u32);
            }
        }
        let inverse = (0..size).map(|x| (self.inv(x / m) * m + other.inv(x % m)) as u32).collect();
        GroupTable { order: size, product, inverse, residues: None }
    }

    /// The dihedral group of order `2n`: `r^i` at index `i`, `r^i s` at
    /// index `n + i`, with `s r s = r⁻¹`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let elem = |i: usize, refl: bool| if refl { n + i } else { i };
        let mut product = Vec::with_capacity(4 * n * n);
        for x in 0..2 * n {
            let (i, a) = (x % n, x >= n);
            for y in 0..2 * n {
                let (j, b) = (y % n, y >= n);
                // r^i s^a r^j s^b = r^(i ± j) s^(a+b)
                let k = if a { (i + n - j) % n } else { (i + j) % n };
                product.push(elem(k, a ^ b) as u32);
            }
        }
        let inverse = (0..2 * n)
            .map(|x| if x >= n { x as u32 } else { ((n - x) % n) as u32 })
            .collect();
        GroupTable { order: 2 * n, product, inverse, residues: None }
    }

    /// The quaternion group `Q8`: index `2k + s` stands for `(-1)^s u_k` with
    /// `u = (1, i, j, k)`.
    pub fn quaternion() -> Self {
        // unit products u_a u_b = sign · u_c
        const MUL: [[(u32, u32); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        let mut product = Vec::with_capacity(64);
        for x in 0..8u32 {
            for y in 0..8u32 {
                let (c, s) = MUL[(x / 2) as usize][(y / 2) as usize];
                product.push(2 * c + ((s + x % 2 + y % 2) % 2));
            }
        }
        let inverse = (0..8u32).map(|x| if x < 2 { x } else { x ^ 1 }).collect();
        GroupTable { order: 8, product, inverse, residues: None }
    }

    /// The multiplicative group `Z_N^*`; element 0 is the residue 1 and the
    /// remaining residues follow in increasing order.
    pub fn units_mod_n(modulus: u64) -> Result<Self, GroupError> {
        if modulus < 2 || modulus > (1 << 24) {
            return Err(GroupError::NOutOfRange { n: modulus });
        }
        let residues: Vec<u64> = (1..modulus).filter(|&r| num_integer::gcd(r, modulus) == 1).collect();
        let n = residues.len();
        if n > UNITS_TABLE_MAX {
            return Err(GroupError::NOutOfRange { n: modulus });
        }
        let mut index = vec![u32::MAX; modulus as usize];
        for (i, &r) in residues.iter().enumerate() {
            index[r as usize] = i as u32;
        }
        let mut product = Vec::with_capacity(n * n);
        for &a in &residues {
            for &b in &residues {
                product.push(index[(a * b % modulus) as usize]);
            }
        }
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            inverse[x] = product[x * n..(x + 1) * n].iter().position(|&v| v == 0).unwrap() as u32;
        }
        Ok(GroupTable { order: n, product, inverse, residues: Some(Units { modulus, residues }) })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.product[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    pub fn inverses(&self) -> &[u32] {
        &self.inverse
    }

    pub fn pow(&self, x: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(x) } else { x };
        let mut e = k.unsigned_abs() % self.element_order(x) as u64;
        let (mut acc, mut b) = (0usize, base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let (mut y, mut k) = (x, 1);
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.product[x * self.order..(x + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.order).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.noncommuting_pair().is_none()
    }

    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        let n = self.order;
        (0..n).find_map(|x| (x + 1..n).find(|&y| self.mul(x, y) != self.mul(y, x)).map(|y| (x, y)))
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// A generating set built greedily: scan elements in index order and
    /// keep each one not already generated by the earlier picks.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut gens = Vec::new();
        for g in 1..self.order {
            if seen[g] {
                continue;
            }
            gens.push(g);
            // every new element is a product of an old one with a power of g
            let mut queue: VecDeque<usize> = members.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &h in &gens {
                    let y = self.mul(x, h);
                    if !seen[y] {
                        seen[y] = true;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    /// Modulus and residues when this table is a units group.
    pub fn units_modulus(&self) -> Option<u64> {
        self.residues.as_ref().map(|u| u.modulus)
    }

    pub fn residue(&self, x: usize) -> Option<u64> {
        self.residues.as_ref().map(|u| u.residues[x])
    }

    pub fn index_of_residue(&self, r: u64) -> Option<usize> {
        let u = self.residues.as_ref()?;
        u.residues.binary_search(&(r % u.modulus)).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_validates_with_involution_inverse() {
        let t = validate_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(t.inverses(), &[0, 1]);
    }

    #[test]
    fn idempotent_non_identity_has_no_inverse() {
        let err = validate_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(err, GroupError::NoInverse { element: 1 });
    }

    #[test]
    fn non_associative_loop_is_rejected() {
        // a Latin square with identity 0 that is not a group (order-5 loop)
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(validate_table(rows), Err(GroupError::NotAssociative { .. })));
    }

    #[test]
    fn units_mod_15() {
        let t = GroupTable::units_mod_n(15).unwrap();
        assert_eq!(t.order(), 8);
        let residues: Vec<u64> = (0..8).map(|i| t.residue(i).unwrap()).collect();
        assert_eq!(residues, vec![1, 2, 4, 7, 8, 11, 13, 14]);
        assert!(validate_table(t.rows()).is_ok());
        assert_eq!(GroupTable::units_mod_n(2).unwrap().order(), 1);
        let u7 = GroupTable::units_mod_n(7).unwrap();
        let three = u7.index_of_residue(3).unwrap();
        assert_eq!(u7.element_order(three), 6);
        assert!(GroupTable::units_mod_n(1).is_err());
    }

    #[test]
    fn constructors_satisfy_axioms() {
        for t in [
            GroupTable::cyclic(6),
            GroupTable::abelian(&[2, 2, 3]),
            GroupTable::dihedral(4),
            GroupTable::dihedral(5),
            GroupTable::quaternion(),
        ] {
            let v = validate_table(t.rows()).unwrap();
            assert_eq!(v.inverses(), t.inverses());
        }
        assert!(!GroupTable::dihedral(4).is_abelian());
        let q = GroupTable::quaternion();
        assert_eq!((0..8).filter(|&x| q.element_order(x) == 2).count(), 1);
        let d = GroupTable::dihedral(4);
        assert_eq!((0..8).filter(|&x| d.element_order(x) == 2).count(), 5);
    }

    #[test]
    fn light_test_catches_large_non_group() {
        let mut rows = GroupTable::cyclic(600).rows();
        // swap two entries of one row away from the identity column
        rows[5].swap(7, 8);
        rows[6].swap(7, 8);
        assert!(validate_table(rows).is_err());
        assert!(validate_table(GroupTable::cyclic(600).rows()).is_ok());
    }

    #[test]
    fn generating_set_generates() {
        for t in [GroupTable::abelian(&[2, 4, 3]), GroupTable::dihedral(6), GroupTable::units_mod_n(63).unwrap()] {
            let gens = t.generating_set();
            assert!(t.closure(&gens).into_iter().all(|b| b));
        }
        assert!(GroupTable::trivial().generating_set().is_empty());
    }
}
