//! Execution helpers that run data-parallel when the `parallel` feature is
//! enabled and degrade to plain loops otherwise.
//!
//! Every reduction used here is associative with a deterministic tie rule, so
//! results are bit-identical across worker counts and across the two builds.

use std::ops::Range;

/// Runs `f` inside a pool of `jobs` workers when given, otherwise in the
/// default pool. Without the `parallel` feature `jobs` is ignored.
#[cfg(feature = "parallel")]
pub fn install<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool construction")
            .install(f),
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn install<R: Send>(_jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn chunk_ranges(total: u64, chunk: u64) -> impl Iterator<Item = Range<u64>> {
    let chunk = chunk.max(1);
    let n = total.div_ceil(chunk);
    (0..n).map(move |i| i * chunk..((i + 1) * chunk).min(total))
}

/// Maps disjoint rank ranges covering `0..total` and reduces the results.
/// `reduce` must be associative; chunks are combined in range order.
#[cfg(feature = "parallel")]
pub fn map_reduce<T, M, R, I>(total: u64, chunk: u64, map: M, reduce: R, identity: I) -> T
where
    T: Send,
    M: Fn(Range<u64>) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
    I: Fn() -> T + Sync + Send,
{
    use rayon::prelude::*;
    let ranges: Vec<Range<u64>> = chunk_ranges(total, chunk).collect();
    ranges.into_par_iter().map(map).reduce(identity, reduce)
}

#[cfg(not(feature = "parallel"))]
pub fn map_reduce<T, M, R, I>(total: u64, chunk: u64, map: M, reduce: R, identity: I) -> T
where
    T: Send,
    M: Fn(Range<u64>) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
    I: Fn() -> T + Sync + Send,
{
    let mut acc = identity();
    for r in chunk_ranges(total, chunk) {
        acc = reduce(acc, map(r));
    }
    acc
}

/// Fills a vector of exactly `total` elements. `fill` receives the element
/// offset of its chunk and a slice to write completely.
#[cfg(feature = "parallel")]
pub fn fill_exact<E, F>(total: usize, chunk: usize, fill: F) -> Vec<E>
where
    E: Send + Default + Clone,
    F: Fn(usize, &mut [E]) + Sync,
{
    use rayon::prelude::*;
    let chunk = chunk.max(1);
    let mut v = vec![E::default(); total];
    v.par_chunks_mut(chunk)
        .enumerate()
        .for_each(|(i, slice)| fill(i * chunk, slice));
    v
}

#[cfg(not(feature = "parallel"))]
pub fn fill_exact<E, F>(total: usize, chunk: usize, fill: F) -> Vec<E>
where
    E: Send + Default + Clone,
    F: Fn(usize, &mut [E]) + Sync,
{
    let chunk = chunk.max(1);
    let mut v = vec![E::default(); total];
    for (i, slice) in v.chunks_mut(chunk).enumerate() {
        fill(i * chunk, slice);
    }
    v
}

/// Unstable sort by key.
#[cfg(feature = "parallel")]
pub fn sort_by_key<E, K, F>(v: &mut [E], key: F)
where
    E: Send,
    K: Ord + Send,
    F: Fn(&E) -> K + Sync,
{
    use rayon::prelude::*;
    v.par_sort_unstable_by_key(key);
}

#[cfg(not(feature = "parallel"))]
pub fn sort_by_key<E, K, F>(v: &mut [E], key: F)
where
    E: Send,
    K: Ord + Send,
    F: Fn(&E) -> K + Sync,
{
    v.sort_unstable_by_key(key);
}

/// Walks maximal runs of `same`-related elements in sorted `data`. Each run is
/// handled by the chunk containing its first element, accumulators merge in
/// chunk order.
pub fn chunked_groups<E, A, S, I, G, M>(
    data: &[E],
    chunk: usize,
    same: S,
    init: I,
    group_fn: G,
    merge: M,
) -> A
where
    E: Sync,
    A: Send,
    S: Fn(&E, &E) -> bool + Sync,
    I: Fn() -> A + Sync,
    G: Fn(&mut A, &[E]) + Sync,
    M: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    let total = data.len() as u64;
    map_reduce(
        total,
        chunk as u64,
        |range| {
            let mut acc = init();
            let lo = range.start as usize;
            let hi = range.end as usize;
            // Skip forward if this chunk begins mid-run.
            let mut pos = lo;
            if pos > 0 {
                while pos < hi && same(&data[pos - 1], &data[pos]) {
                    pos += 1;
                }
            }
            // Handle every run starting in [pos, hi).
            while pos < hi {
                let mut end = pos + 1;
                while end < data.len() && same(&data[pos], &data[end]) {
                    end += 1;
                }
                group_fn(&mut acc, &data[pos..end]);
                pos = end;
            }
            acc
        },
        merge,
        &init,
    )
}
