//! Classical parity-check matrices and the operations the gadget layer
//! builds on: Hamming and shortened BCH construction, exhaustive distance
//! verification, column ordering, and table-lookup syndrome decoding.

use std::collections::HashMap;

use crate::f2::{BitMatrix, BitVector};
use crate::galois::{self, FieldParams};
use crate::{combi, exec, Error, Result};

/// A parity-check matrix with its declared distance.
///
/// Rows are parity checks, columns are codeword bits. `t` is the correctable
/// weight `(d - 1) / 2`. The declared distance is a promise made by the
/// constructor; `verify_distance` checks it exhaustively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheck {
    pub h: BitMatrix,
    pub w: usize,
    pub d: usize,
    pub t: usize,
}

impl ParityCheck {
    /// Wraps an existing matrix, rejecting zero columns.
    pub fn from_matrix(h: BitMatrix, d: usize) -> Result<Self> {
        for j in 0..h.cols() {
            if h.col(j).is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "column {j} of the parity-check matrix is zero"
                )));
            }
        }
        Ok(ParityCheck {
            w: h.cols(),
            d,
            t: (d.saturating_sub(1)) / 2,
            h,
        })
    }

    pub fn rows(&self) -> usize {
        self.h.rows()
    }
}

pub(crate) fn ceil_log2(w: usize) -> u32 {
    debug_assert!(w >= 1);
    usize::BITS - (w - 1).leading_zeros()
}

/// Parity-check matrix whose columns are the binary expansions of 1..=w,
/// least significant bit in row 0. For w >= 3 this is a (shortened) Hamming
/// code of distance 3.
pub fn hamming_check(w: usize) -> ParityCheck {
    assert!(w >= 1, "code length must be positive");
    let rows = ceil_log2(w + 1) as usize;
    let mut h = BitMatrix::zeros(rows, w);
    for j in 0..w {
        let value = j + 1;
        for i in 0..rows {
            if (value >> i) & 1 == 1 {
                h.set(i, j, true);
            }
        }
    }
    ParityCheck { h, w, d: 3, t: 1 }
}

/// Shortened binary BCH parity-check matrix over GF(2^m), m = ceil(log2 w).
///
/// Block row b (of t blocks, m rows each) holds the bit expansions of
/// alpha^((2b+1) j) for columns j = 0..w-1, coefficient of x^i at relative
/// row i. Even-power rows are omitted because squaring is linear over F2.
pub fn bch_check(w: usize, t: usize) -> Result<ParityCheck> {
    let m = ceil_log2(w.max(2));
    let field = galois::make_field(m)?;
    bch_check_with_field(w, t, &field)
}

/// Same construction with a caller-supplied field, for modulus overrides.
pub fn bch_check_with_field(w: usize, t: usize, field: &FieldParams) -> Result<ParityCheck> {
    if t < 1 || 2 * t > w {
        return Err(Error::InvalidArgument(format!(
            "correctable weight t={t} must satisfy 1 <= t <= w/2 for w={w}"
        )));
    }
    let m = ceil_log2(w.max(2));
    if field.m() != m {
        return Err(Error::InvalidArgument(format!(
            "field degree {} does not match required degree {m} for w={w}",
            field.m()
        )));
    }
    let rows = t * m as usize;
    let mut h = BitMatrix::zeros(rows, w);
    for b in 0..t {
        let power = (2 * b + 1) as u64;
        for j in 0..w {
            let elem = galois::gf_pow(field.alpha(), power * j as u64, field)
                .expect("alpha is nonzero");
            let bits = galois::element_bits(elem, m);
            for i in 0..m as usize {
                if bits.get(i) {
                    h.set(b * m as usize + i, j, true);
                }
            }
        }
    }
    Ok(ParityCheck {
        h,
        w,
        d: 2 * t + 1,
        t,
    })
}

/// Exhaustively checks that every nonempty set of at most d-1 columns XORs
/// to a nonzero vector. The subset count must fit in `budget`.
pub fn verify_distance(pc: &ParityCheck, d: usize, budget: u64) -> Result<bool> {
    let w = pc.w;
    let kmax = d.saturating_sub(1);
    let total = combi::subsets_up_to(w as u64, kmax as u64) - 1;
    if total > budget as u128 {
        return Err(Error::ResourceLimit {
            what: "column subsets to test".into(),
            required: total,
            budget,
        });
    }
    let rows = pc.rows();
    if rows <= 128 {
        let cols: Vec<u128> = (0..w).map(|j| pc.h.col(j).to_u128()).collect();
        Ok(scan_subsets(w, kmax, &|subset| {
            subset.iter().fold(0u128, |acc, &j| acc ^ cols[j]) != 0
        }))
    } else {
        let cols: Vec<BitVector> = (0..w).map(|j| pc.h.col(j)).collect();
        Ok(scan_subsets(w, kmax, &|subset| {
            let mut acc = BitVector::zeros(rows);
            for &j in subset {
                acc.xor_in_place(&cols[j]);
            }
            !acc.is_zero()
        }))
    }
}

/// Runs `ok` over every subset of size 1..=kmax and ANDs the results.
fn scan_subsets(w: usize, kmax: usize, ok: &(dyn Fn(&[usize]) -> bool + Sync)) -> bool {
    for k in 1..=kmax.min(w) {
        let count = combi::binomial(w as u64, k as u64);
        let all_good = exec::map_reduce(
            count as u64,
            4096,
            |range| {
                let mut subset = Vec::with_capacity(k);
                for rank in range {
                    subset.clear();
                    combi::unrank_lex(w, k, rank as u128, &mut subset);
                    if !ok(&subset) {
                        return false;
                    }
                }
                true
            },
            |a, b| a && b,
            || true,
        );
        if !all_good {
            return false;
        }
    }
    true
}

/// Reorders columns in descending numeric order, reading each column as an
/// integer with the bottom row most significant.
pub fn sort_desc(pc: &ParityCheck) -> Result<ParityCheck> {
    let mut cols = Vec::with_capacity(pc.w);
    for j in 0..pc.w {
        let c = pc.h.col(j);
        if c.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "column {j} is zero; descending order is undefined for zero columns"
            )));
        }
        cols.push(c);
    }
    cols.sort_by(|a, b| b.le_value_cmp(a));
    Ok(ParityCheck {
        h: BitMatrix::from_columns(pc.rows(), &cols),
        w: pc.w,
        d: pc.d,
        t: pc.t,
    })
}

/// Looks up the unique error of weight at most `pc.t` whose syndrome matches.
///
/// The table enumerates error patterns by increasing weight, lexicographic
/// within a weight, and keeps the first pattern per syndrome, so the result
/// is the minimal-weight match with a deterministic tie rule.
pub fn decode_classical(pc: &ParityCheck, syndrome: &BitVector) -> Option<BitVector> {
    assert_eq!(syndrome.len(), pc.rows(), "syndrome length must match row count");
    let table = syndrome_table(pc);
    table.get(syndrome).cloned()
}

/// Syndrome -> minimal-weight-error table over all patterns of weight <= t.
pub fn syndrome_table(pc: &ParityCheck) -> HashMap<BitVector, BitVector> {
    let mut table = HashMap::new();
    let mut subset = Vec::new();
    let total = combi::subsets_up_to(pc.w as u64, pc.t as u64);
    for rank in 0..total {
        combi::unrank_bounded(pc.w, pc.t, rank, &mut subset);
        let mut syn = BitVector::zeros(pc.rows());
        for &j in &subset {
            syn.xor_in_place(&pc.h.col(j));
        }
        table
            .entry(syn)
            .or_insert_with(|| BitVector::from_indices(pc.w, &subset));
    }
    table
}

/// Renders `rows cols` then one line of space-separated bits per row.
pub fn matrix_to_text(m: &BitMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<&str> = (0..m.cols())
            .map(|c| if m.get(r, c) { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn matrix_from_text(s: &str) -> Result<BitMatrix> {
    let mut lines = s.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix text".into()))?;
    let mut parts = header.split_whitespace();
    let rows: usize = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse("matrix header must start with the row count".into()))?;
    let cols: usize = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse("matrix header must give the column count".into()))?;
    if parts.next().is_some() {
        return Err(Error::Parse("matrix header has trailing tokens".into()));
    }
    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {rows} matrix rows, found {r}")))?;
        let bits: Vec<&str> = line.split_whitespace().collect();
        if bits.len() != cols {
            return Err(Error::Parse(format!(
                "row {r} has {} entries, expected {cols}",
                bits.len()
            )));
        }
        for (c, b) in bits.iter().enumerate() {
            match *b {
                "0" => {}
                "1" => m.set(r, c, true),
                other => {
                    return Err(Error::Parse(format!(
                        "row {r} column {c} has invalid bit {other:?}"
                    )))
                }
            }
        }
    }
    if lines.next().is_some() {
        return Err(Error::Parse("matrix text has trailing rows".into()));
    }
    Ok(m)
}
