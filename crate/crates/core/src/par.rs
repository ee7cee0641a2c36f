//! Data-parallel helpers. With the `parallel` feature these use rayon,
//! otherwise they run sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// True if `f` holds for every item. `init` builds per-worker scratch state.
pub fn all_with<T, S, I, F>(items: &[T], init: I, f: F) -> bool
where
    T: Sync,
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if items.len() > 32 {
            return items
                .par_chunks(16)
                .map_init(&init, |s, chunk| chunk.iter().all(|t| f(s, t)))
                .all(|b| b);
        }
    }
    let mut s = init();
    items.iter().all(|t| f(&mut s, t))
}

/// First index (in order) where `f` fails, if any.
pub fn first_failure<T, S, I, F>(items: &[T], init: I, f: F) -> Option<usize>
where
    T: Sync,
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if items.len() > 32 {
            return items
                .par_iter()
                .enumerate()
                .map_init(&init, |s, (i, t)| (i, f(s, t)))
                .filter(|r| !r.1)
                .map(|r| r.0)
                .min();
        }
    }
    let mut s = init();
    items.iter().position(|t| !f(&mut s, t))
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Whether the parallel backend is compiled in.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
