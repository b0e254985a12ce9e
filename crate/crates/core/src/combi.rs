//! Exact subset counting and lexicographic unranking.
//!
//! Fault enumeration and distance verification both walk "all subsets of size
//! at most k" universes. Work is partitioned by global rank, so workers need
//! random access into the lexicographic subset sequence.

/// Exact binomial coefficient. Intermediate products stay exact because the
/// running value after multiplying by (n-i) is divisible by (i+1).
pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow")
            / (i + 1) as u128;
    }
    acc
}

/// Number of subsets of an n-element set with size at most kmax.
pub(crate) fn subsets_up_to(n: u64, kmax: u64) -> u128 {
    (0..=kmax).map(|k| binomial(n, k)).sum()
}

/// The `rank`-th size-k subset of {0..n-1} in lexicographic order of the
/// sorted element tuples, appended to `out`.
pub(crate) fn unrank_lex(n: usize, k: usize, mut rank: u128, out: &mut Vec<usize>) {
    debug_assert!(rank < binomial(n as u64, k as u64), "rank out of range");
    let mut c = 0usize;
    for slot in 0..k {
        loop {
            let with_c = binomial((n - c - 1) as u64, (k - slot - 1) as u64);
            if rank < with_c {
                out.push(c);
                c += 1;
                break;
            }
            rank -= with_c;
            c += 1;
        }
    }
}

/// Global rank over all subsets of size 0..=kmax, sizes in increasing order
/// and lexicographic within a size. Rank 0 is the empty set.
pub(crate) fn unrank_bounded(n: usize, kmax: usize, mut rank: u128, out: &mut Vec<usize>) {
    out.clear();
    for k in 0..=kmax {
        let count = binomial(n as u64, k as u64);
        if rank < count {
            unrank_lex(n, k, rank, out);
            return;
        }
        rank -= count;
    }
    panic!("rank out of range for bounded subset enumeration");
}
