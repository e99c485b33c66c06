//! Word-size modular arithmetic, primality and factoring.

use std::fmt;

use rand::Rng;

use crate::seed;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Extended gcd on signed 128-bit values: `(g, x, y)` with `a x + b y = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    (g == 1).then(|| x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A prime factorization, primes in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u128 {
        self.factors.iter().map(|&(p, e)| (p as u128).pow(e)).product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    fn push(&mut self, p: u64) {
        match self.factors.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += 1,
            None => self.factors.push((p, 1)),
        }
    }

    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut out = self.clone();
        for &(p, e) in &other.factors {
            for _ in 0..e {
                out.push(p);
            }
        }
        out.factors.sort_unstable();
        out
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(p, e)| format!("({p},{e})")).collect();
        f.write_str(&parts.join(","))
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Trial division up to 10⁶, then Pollard rho (Brent) on the cofactor.
pub fn factorize(mut n: u64) -> Factorization {
    assert!(n >= 1);
    let mut out = Factorization::default();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime(m) {
                out.push(m);
                continue;
            }
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    out.factors.sort_unstable();
    out
}

/// A nontrivial factor of a composite `n`.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut rng = seed::rng(n);
    loop {
        let c = rng.gen_range(1..n);
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, m) = (rng.gen_range(0..n), 128u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = num_integer::gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = num_integer::gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
}

/// Jacobi symbol `(a / n)` for odd `n`.
pub fn jacobi(a: u64, n: u64) -> i32 {
    assert!(n % 2 == 1);
    let (mut a, mut n) = (a % n, n);
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// `x` with `x ≡ 1 (mod q)` and `x ≡ 0 (mod n/q)`, for `q | n` coprime to
/// `n/q`.
pub fn crt_idempotent(q: u128, n: u128) -> u128 {
    let r = n / q;
    if r == 1 {
        return 1 % n;
    }
    // r · (r⁻¹ mod q)
    let (_, x, _) = ext_gcd((r % q) as i128, q as i128);
    let inv = x.rem_euclid(q as i128) as u128;
    (r % n) * inv % n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_examples() {
        assert!(factorize(1).factors.is_empty());
        assert_eq!(factorize(12).factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(561).factors, vec![(3, 1), (11, 1), (17, 1)]);
        let big = 1_000_003u64 * 998_244_353;
        assert_eq!(factorize(big).factors, vec![(1_000_003, 1), (998_244_353, 1)]);
        let p = 4_294_967_291u64;
        assert_eq!(factorize(p * 3 * 3).factors, vec![(3, 2), (p, 1)]);
        let q = (1u64 << 61) - 1;
        assert_eq!(factorize(q).factors, vec![(q, 1)]);
    }

    #[test]
    fn inverses_and_jacobi() {
        assert_eq!(mod_inv(2, 15), Some(8));
        assert_eq!(mod_inv(3, 15), None);
        assert_eq!(jacobi(2, 15), 1);
        assert_eq!(jacobi(7, 15), -1);
        assert_eq!(jacobi(5, 15), 0);
        let e = crt_idempotent(4, 12);
        assert_eq!((e % 4, e % 3), (1, 0));
    }
}
