//! Smith form over the local ring `Z/p^e`, where every nonzero element is a
//! unit times a power of `p`.

use super::arith::ext_gcd;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Ring {
    pub p: u128,
    pub e: u32,
    pub q: u128,
}

impl Ring {
    pub fn new(p: u64, e: u32) -> Self {
        Ring { p: p as u128, e, q: (p as u128).pow(e) }
    }

    #[inline]
    pub fn red(&self, x: u128) -> u128 {
        x % self.q
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        // q < 2⁶⁴ keeps the product in range
        (a % self.q) * (b % self.q) % self.q
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        (a % self.q + self.q - b % self.q) % self.q
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        (a % self.q + b % self.q) % self.q
    }

    pub fn val(&self, x: u128) -> u32 {
        let mut x = x % self.q;
        if x == 0 {
            return self.e;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn inv_unit(&self, x: u128) -> u128 {
        let (g, s, _) = ext_gcd((x % self.q) as i128, self.q as i128);
        debug_assert_eq!(g, 1);
        s.rem_euclid(self.q as i128) as u128
    }

    /// `x / p^v` for `x` divisible by `p^v`, as a residue mod `q`.
    pub fn div_pow(&self, x: u128, v: u32) -> u128 {
        (x % self.q) / self.p.pow(v)
    }
}

/// `U · M · V = D` over `Z/p^e` with `D` diagonal, `D[i][i] = p^{vals[i]}`
/// (`vals[i] = e` for zero diagonal entries and for rows past the last
/// column).
pub(crate) struct LocalSmith {
    pub vals: Vec<u32>,
    pub u: Vec<Vec<u128>>,
    pub u_inv: Vec<Vec<u128>>,
    pub v: Vec<Vec<u128>>,
}

fn ident(n: usize) -> Vec<Vec<u128>> {
    (0..n).map(|i| (0..n).map(|j| u128::from(i == j)).collect()).collect()
}

pub(crate) fn local_smith(m: &[Vec<u128>], rows: usize, cols: usize, ring: Ring) -> LocalSmith {
    let mut a: Vec<Vec<u128>> = m.iter().map(|r| r.iter().map(|&x| ring.red(x)).collect()).collect();
    let mut u = ident(rows);
    let mut u_inv = ident(rows);
    let mut v = ident(cols);
    let mut vals = vec![ring.e; rows];
    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                let vx = ring.val(x);
                if vx < ring.e && best.is_none_or(|(_, _, b)| vx < b) {
                    best = Some((i, j, vx));
                    if vx == 0 {
                        break;
                    }
                }
            }
            if best.is_some_and(|b| b.2 == 0) {
                break;
            }
        }
        let Some((pi, pj, pv)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in u_inv.iter_mut() {
            row.swap(t, pi);
        }
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(t, pj);
        }
        let unit_inv = ring.inv_unit(ring.div_pow(a[t][t], pv));
        for i in t + 1..rows {
            if a[i][t] == 0 {
                continue;
            }
            let f = ring.mul(ring.div_pow(a[i][t], pv), unit_inv);
            let (top, rest) = a.split_at_mut(i);
            for (x, &y) in rest[0].iter_mut().zip(&top[t]).skip(t) {
                *x = ring.sub(*x, ring.mul(f, y));
            }
            let (top, rest) = u.split_at_mut(i);
            for (x, &y) in rest[0].iter_mut().zip(&top[t]) {
                *x = ring.sub(*x, ring.mul(f, y));
            }
            for row in u_inv.iter_mut() {
                row[t] = ring.add(row[t], ring.mul(f, row[i]));
            }
        }
        for j in t + 1..cols {
            if a[t][j] == 0 {
                continue;
            }
            let f = ring.mul(ring.div_pow(a[t][j], pv), unit_inv);
            for row in a.iter_mut().chain(v.iter_mut()) {
                row[j] = ring.sub(row[j], ring.mul(f, row[t]));
            }
        }
        for row in a.iter_mut().chain(v.iter_mut()) {
            row[t] = ring.mul(row[t], unit_inv);
        }
        vals[t] = pv;
    }
    LocalSmith { vals, u, u_inv, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(r: Ring, a: &[Vec<u128>], b: &[Vec<u128>]) -> Vec<Vec<u128>> {
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| (0..cols).map(|j| row.iter().zip(b).fold(0, |acc, (&x, br)| r.add(acc, r.mul(x, br[j])))).collect())
            .collect()
    }

    #[test]
    fn diagonalizes() {
        let r = Ring::new(2, 4);
        let m = vec![vec![4, 6, 0], vec![8, 2, 12], vec![0, 0, 0], vec![2, 2, 2]];
        let s = local_smith(&m, 4, 3, r);
        let d = mul(r, &mul(r, &s.u, &m), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = if i == j { r.red(r.p.pow(s.vals[i])) } else { 0 };
                assert_eq!(x, want, "entry ({i},{j})");
            }
        }
        let id = mul(r, &s.u, &s.u_inv);
        assert_eq!(id, ident(4));
        assert_eq!(s.vals[..3], [1, 1, 3]);
    }
}
