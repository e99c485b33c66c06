//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) these fan out over rayon.
//! Without it, or inside [`sequential`], every helper runs on the calling
//! thread in index order, so results are identical either way.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

struct Restore(bool);

impl Drop for Restore {
    fn drop(&mut self) {
        FORCE_SEQUENTIAL.with(|c| c.set(self.0));
    }
}

/// Runs `f` with every helper in this module pinned to the current thread.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let _restore = Restore(FORCE_SEQUENTIAL.with(|c| c.replace(true)));
    f()
}

/// Whether helpers called from this thread will use the thread pool.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(|c| c.get())
}

/// Index ranges shorter than this stay on the calling thread; longer ones
/// are split into chunks of at least this many indices.
pub const GRAIN: usize = 256;

/// `(0..n).map(f).collect()`.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= GRAIN && is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().with_min_len(GRAIN).map(f).collect();
    }
    (0..n).map(f).collect()
}

/// `items.iter().map(f).collect()`.
pub fn map_slice<A, T, F>(items: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// The first (lowest index) `Some` produced by `f` over `0..n`.
pub fn find_first<T, F>(n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= GRAIN && is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().with_min_len(GRAIN).find_map_first(f);
    }
    (0..n).find_map(f)
}

/// Whether `f` holds on all of `0..n`.
pub fn all<F>(n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    find_first(n, |i| if f(i) { None } else { Some(()) }).is_none()
}

/// Runs two closures, potentially concurrently.
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        return rayon::join(a, b);
    }
    (a(), b())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helpers_agree_across_modes() {
        let par = map_range(1000, |i| i * i);
        let seq = sequential(|| map_range(1000, |i| i * i));
        assert_eq!(par, seq);
        assert_eq!(find_first(100, |i| (i % 7 == 3 && i > 10).then_some(i)), Some(17));
        assert_eq!(sequential(|| find_first(100, |i| (i > 50).then_some(i))), Some(51));
        assert!(all(10, |i| i < 10));
        assert!(!sequential(|| all(10, |i| i < 9)));
    }

    #[test]
    fn sequential_scope_restores() {
        sequential(|| assert!(!is_parallel()));
        assert_eq!(is_parallel(), cfg!(feature = "parallel"));
    }
}
