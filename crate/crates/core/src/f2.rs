//! Bit-packed vectors and matrices over F2.
//!
//! Values are immutable in spirit: operations either build new values or
//! mutate through explicit `*_in_place` methods. Bits beyond the declared
//! length are kept zero so equality, hashing and weight can work on whole
//! words. Ordering is lexicographic with index 0 most significant, which is
//! the tie-break order used by the decoders.

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = BitVector::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    /// Lowest `len` bits of `bits`, index 0 = least significant bit.
    pub fn from_u128(len: usize, bits: u128) -> Self {
        assert!(len <= 128, "from_u128 supports at most 128 bits");
        assert!(len == 128 || bits >> len == 0, "bits beyond length must be zero");
        let mut v = BitVector::zeros(len);
        if !v.words.is_empty() {
            v.words[0] = bits as u64;
        }
        if v.words.len() > 1 {
            v.words[1] = (bits >> 64) as u64;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_in_place(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor requires equal lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Flips every bit in place.
    pub fn complement_in_place(&mut self) {
        for w in self.words.iter_mut() {
            *w = !*w;
        }
        self.mask_tail();
    }

    pub fn complemented(&self) -> BitVector {
        let mut v = self.clone();
        v.complement_in_place();
        v
    }

    /// Copies `len` bits starting at `start` into a fresh vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    fn mask_tail(&mut self) {
        let extra = self.len % WORD;
        if extra != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << extra) - 1;
            }
        }
        if self.len == 0 {
            self.words.clear();
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    pub fn ones(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Compares as integers where bit i carries weight 2^i, so the highest
    /// index is the most significant position.
    pub fn le_value_cmp(&self, other: &BitVector) -> std::cmp::Ordering {
        assert_eq!(self.len, other.len, "comparison requires equal lengths");
        for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
            let ord = a.cmp(b);
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Packs vectors of at most 64 bits, index 0 = least significant bit.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64, "to_u64 requires length <= 64");
        self.words.first().copied().unwrap_or(0)
    }

    /// Packs vectors of at most 128 bits, index 0 = least significant bit.
    pub fn to_u128(&self) -> u128 {
        assert!(self.len <= 128, "to_u128 requires length <= 128");
        let lo = self.words.first().copied().unwrap_or(0) as u128;
        let hi = self.words.get(1).copied().unwrap_or(0) as u128;
        lo | (hi << 64)
    }

    /// 0/1 characters, index 0 first.
    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }

    pub fn from_bit_string(s: &str) -> Option<Self> {
        let mut v = BitVector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return None,
            }
        }
        Some(v)
    }
}

impl std::ops::BitXor for &BitVector {
    type Output = BitVector;
    fn bitxor(self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_in_place(other);
        out
    }
}

impl std::fmt::Debug for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_bit_string())
    }
}

impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        assert_eq!(self.len, other.len, "ordering requires equal lengths");
        for (a, b) in self.words.iter().zip(&other.words) {
            // Reversing makes bit 0 the most significant, so numeric order on
            // the reversed word is lexicographic order on the bit string.
            let ord = a.reverse_bits().cmp(&b.reverse_bits());
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Element-wise XOR of two equal-length vectors.
pub fn xor(a: &BitVector, b: &BitVector) -> BitVector {
    a ^ b
}

/// `output[j]` is the XOR of `row[j..]`. The final element equals the last
/// input bit; appending a zero and taking consecutive differences inverts it.
pub fn suffix_xor(row: &BitVector) -> BitVector {
    let mut out = BitVector::zeros(row.len());
    let mut acc = false;
    for j in (0..row.len()).rev() {
        acc ^= row.get(j);
        out.set(j, acc);
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    row_words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let row_words = words_for(cols);
        BitMatrix {
            rows,
            cols,
            row_words,
            data: vec![0; rows * row_words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.data[r * self.row_words + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let mask = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.row_words + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> BitVector {
        assert!(r < self.rows, "row {r} out of range");
        BitVector {
            len: self.cols,
            words: self.data[r * self.row_words..(r + 1) * self.row_words].to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &BitVector) {
        assert!(r < self.rows, "row {r} out of range");
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.data[r * self.row_words..(r + 1) * self.row_words].copy_from_slice(&v.words);
    }

    pub fn col(&self, c: usize) -> BitVector {
        assert!(c < self.cols, "column {c} out of range");
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn set_col(&mut self, c: usize, v: &BitVector) {
        assert_eq!(v.len(), self.rows, "column length mismatch");
        for r in 0..self.rows {
            self.set(r, c, v.get(r));
        }
    }

    pub fn from_rows(rows: &[BitVector]) -> Self {
        assert!(!rows.is_empty(), "from_rows requires at least one row");
        let cols = rows[0].len();
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.set_row(i, r);
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[BitVector]) -> Self {
        let mut m = BitMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            m.set_col(j, c);
        }
        m
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    /// Stacks copies of `self` vertically, `r` copies total.
    pub fn vstack_copies(&self, r: usize) -> BitMatrix {
        assert!(r >= 1, "stack count must be positive");
        let mut m = BitMatrix::zeros(self.rows * r, self.cols);
        for k in 0..r {
            for i in 0..self.rows {
                m.data[(k * self.rows + i) * self.row_words..(k * self.rows + i + 1) * self.row_words]
                    .copy_from_slice(&self.data[i * self.row_words..(i + 1) * self.row_words]);
            }
        }
        m
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{}", self.row(r).to_bit_string())?;
        }
        Ok(())
    }
}

/// Per-column set-bit counts.
pub fn column_weight_profile(m: &BitMatrix) -> Vec<usize> {
    (0..m.cols()).map(|c| m.col(c).weight()).collect()
}
