//! A keyed permutation of fixed-length word strings, used to turn element
//! indices into opaque handles.

use super::oracle::Handle;
use crate::seed::{derive, splitmix64};

const ROUNDS: usize = 4;
const MAX_WORDS: usize = 8;

#[derive(Clone, Debug)]
pub struct Codec {
    keys: [u64; ROUNDS],
}

fn round_fn(key: u64, input: &[u64], out: &mut [u64]) {
    let mut h = key;
    for &w in input {
        h = splitmix64(h ^ w);
    }
    for (i, o) in out.iter_mut().enumerate() {
        *o ^= splitmix64(h.wrapping_add((i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)));
    }
}

impl Codec {
    pub fn new(seed: u64) -> Self {
        let mut keys = [0u64; ROUNDS];
        for (i, k) in keys.iter_mut().enumerate() {
            *k = derive(seed, 0x636f_6465_6300 + i as u64);
        }
        Codec { keys }
    }

    /// Encrypts `words` (2 to 8 of them) into a handle of `8·len` bytes.
    pub fn seal(&self, words: &[u64]) -> Handle {
        let n = words.len();
        assert!((2..=MAX_WORDS).contains(&n));
        let mut buf = [0u64; MAX_WORDS];
        buf[..n].copy_from_slice(words);
        let mid = n / 2;
        for (r, &k) in self.keys.iter().enumerate() {
            let (left, right) = buf[..n].split_at_mut(mid);
            if r % 2 == 0 {
                round_fn(k, right, left);
            } else {
                round_fn(k, left, right);
            }
        }
        let mut bytes = [0u8; 8 * MAX_WORDS];
        for (i, w) in buf[..n].iter().enumerate() {
            bytes[8 * i..8 * i + 8].copy_from_slice(&w.to_le_bytes());
        }
        Handle::from_bytes(&bytes[..8 * n])
    }

    /// Inverse of [`Codec::seal`]; `None` if the handle has the wrong length.
    pub fn open(&self, h: &Handle, n: usize) -> Option<[u64; MAX_WORDS]> {
        let bytes = h.as_bytes();
        if bytes.len() != 8 * n || !(2..=MAX_WORDS).contains(&n) {
            return None;
        }
        let mut buf = [0u64; MAX_WORDS];
        for (i, w) in buf[..n].iter_mut().enumerate() {
            *w = u64::from_le_bytes(bytes[8 * i..8 * i + 8].try_into().unwrap());
        }
        let mid = n / 2;
        for (r, &k) in self.keys.iter().enumerate().rev() {
            let (left, right) = buf[..n].split_at_mut(mid);
            if r % 2 == 0 {
                round_fn(k, right, left);
            } else {
                round_fn(k, left, right);
            }
        }
        Some(buf)
    }

    /// Seals a single value as the pair `(value, 0)`.
    pub fn seal_one(&self, value: u64) -> Handle {
        self.seal(&[value, 0])
    }

    /// Opens a handle produced by [`Codec::seal_one`].
    pub fn open_one(&self, h: &Handle) -> Option<u64> {
        let w = self.open(h, 2)?;
        (w[1] == 0).then_some(w[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let c = Codec::new(7);
        for v in [0u64, 1, 2, u64::MAX, 12345] {
            assert_eq!(c.open_one(&c.seal_one(v)), Some(v));
        }
        let words = [3u64, 1, 4, 1, 5];
        let h = c.seal(&words);
        assert_eq!(h.as_bytes().len(), 40);
        assert_eq!(&c.open(&h, 5).unwrap()[..5], &words);
    }

    #[test]
    fn seeds_give_different_strings() {
        assert_ne!(Codec::new(0).seal_one(1), Codec::new(1).seal_one(1));
        assert_ne!(Codec::new(0).seal_one(1), Codec::new(0).seal_one(2));
    }

    #[test]
    fn foreign_handles_do_not_open() {
        let a = Codec::new(1);
        let b = Codec::new(2);
        assert_eq!(b.open_one(&a.seal_one(5)), None);
    }
}
