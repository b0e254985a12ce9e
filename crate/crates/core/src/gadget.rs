//! Flag-gadget circuit construction.
//!
//! The pipeline: stack a parity-check matrix, then unfold the stacked matrix
//! into a serial circuit where consecutive fault-location signatures differ
//! by one flag bit. A circuit is stored two ways at once: the CNOT matrix C
//! (one column per CNOT, one row per flag qubit plus a data row) and the
//! per-gap signature matrix recovered from C by suffix XOR.

use std::collections::HashSet;

use crate::codes::ParityCheck;
use crate::f2::{BitMatrix, BitVector};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(ch: char) -> Option<Pauli> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// True when the two single-qubit Paulis anticommute: distinct
    /// non-identity letters do, everything else commutes.
    pub fn anticommutes(self, other: Pauli) -> bool {
        self != Pauli::I && other != Pauli::I && self != other
    }
}

/// A multiqubit Pauli to be measured, one letter per data qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilizer {
    paulis: Vec<Pauli>,
    w: usize,
}

impl Stabilizer {
    pub fn new(paulis: Vec<Pauli>) -> Result<Self> {
        let w = paulis.iter().filter(|&&p| p != Pauli::I).count();
        if w == 0 {
            return Err(Error::InvalidArgument(
                "a stabilizer needs at least one non-identity letter".into(),
            ));
        }
        Ok(Stabilizer { paulis, w })
    }

    pub fn from_letters(s: &str) -> Result<Self> {
        let paulis = s
            .chars()
            .map(Pauli::from_char)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::Parse(format!("stabilizer letters must be over IXYZ, got {s:?}"))
            })?;
        Stabilizer::new(paulis)
    }

    /// Weight-w all-X stabilizer on w qubits.
    pub fn all_x(w: usize) -> Stabilizer {
        Stabilizer::new(vec![Pauli::X; w]).expect("w >= 1")
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn len(&self) -> usize {
        self.paulis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paulis.is_empty()
    }

    pub fn paulis(&self) -> &[Pauli] {
        &self.paulis
    }

    /// Indices of the non-identity letters, in order.
    pub fn support(&self) -> Vec<usize> {
        self.paulis
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn letters(&self) -> String {
        self.paulis.iter().map(|p| p.to_char()).collect()
    }
}

/// The idealized gadget: a stacked check matrix whose columns are the flag
/// signatures an error between consecutive data CNOTs would raise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGadget {
    pub f: BitMatrix,
    pub block_rows: usize,
    pub reps: usize,
}

impl IdealGadget {
    /// Wraps an arbitrary matrix as a single unstacked block.
    pub fn from_matrix(f: BitMatrix) -> IdealGadget {
        IdealGadget {
            block_rows: f.rows(),
            reps: 1,
            f,
        }
    }

    /// Number of repetition blocks in a column that are neither zero nor a
    /// column of the base block of this gadget.
    pub fn partial_blocks(&self, col: &BitVector) -> usize {
        assert_eq!(col.len(), self.f.rows(), "column length mismatch");
        let base: HashSet<BitVector> = (0..self.f.cols())
            .map(|j| self.f.col(j).slice(0, self.block_rows))
            .collect();
        (0..self.reps)
            .map(|r| col.slice(r * self.block_rows, self.block_rows))
            .filter(|block| !block.is_zero() && !base.contains(block))
            .count()
    }
}

/// Stacks r copies of the parity-check matrix vertically.
pub fn stack(h: &ParityCheck, r: usize) -> IdealGadget {
    assert!(r >= 1, "repetition count must be positive");
    IdealGadget {
        f: h.h.vstack_copies(r),
        block_rows: h.rows(),
        reps: r,
    }
}

/// Order in which transition columns flip the differing bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FlipOrder {
    /// Increasing row index. Keeps at most one partial repetition block per
    /// column on stacked matrices, so it is the default.
    #[default]
    TopDown,
    /// Decreasing row index, for reproducing layouts that flip from the
    /// bottom. Safe for single-block matrices.
    BottomUp,
}

/// One data CNOT: the gap index immediately before it, the data qubit it
/// targets and the Pauli it applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DataGap {
    pub gap: usize,
    pub qubit: usize,
    pub pauli: Pauli,
}

/// A serial flag circuit.
///
/// `c` has one column per CNOT: flag rows first, the data row last. `fc` has
/// one column per fault location (gap); column j is the XOR of the flag rows
/// over CNOT columns j.., so it is the flag pattern a single syndrome fault
/// in gap j raises. Gap j precedes CNOT column j; gap n follows everything
/// and is always the zero signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagCircuit {
    pub c: BitMatrix,
    pub fc: BitMatrix,
    pub data_gaps: Vec<DataGap>,
    pub stabilizer: Stabilizer,
    /// Flag-qubit count (rows of `fc`).
    pub f: usize,
    /// Fault-location count (columns of `fc`), one more than the CNOT count.
    pub l: usize,
}

impl FlagCircuit {
    /// Validates the CNOT matrix and tags, and derives the signature matrix.
    pub fn new(c: BitMatrix, data_gaps: Vec<DataGap>, stabilizer: Stabilizer) -> Result<Self> {
        if c.rows() < 1 {
            return Err(Error::InvalidCircuit("circuit needs a data row".into()));
        }
        let f = c.rows() - 1;
        let n = c.cols();
        let fc = fc_from_circuit(&c, f)?;

        if data_gaps.len() != stabilizer.w() {
            return Err(Error::InvalidCircuit(format!(
                "{} data CNOTs but stabilizer weight {}",
                data_gaps.len(),
                stabilizer.w()
            )));
        }
        let mut expect_cols: Vec<usize> = (0..n).filter(|&j| c.get(f, j)).collect();
        let tagged: Vec<usize> = data_gaps.iter().map(|d| d.gap).collect();
        expect_cols.sort_unstable();
        if tagged != expect_cols {
            return Err(Error::InvalidCircuit(
                "data gap tags must list exactly the data-row CNOT columns in order".into(),
            ));
        }
        let support = stabilizer.support();
        for (k, d) in data_gaps.iter().enumerate() {
            if k >= support.len() || d.qubit != support[k] {
                return Err(Error::InvalidCircuit(format!(
                    "data CNOT {k} targets qubit {}, expected the stabilizer's \
                     non-identity positions in order",
                    d.qubit
                )));
            }
            if d.pauli != stabilizer.paulis()[d.qubit] {
                return Err(Error::InvalidCircuit(format!(
                    "data CNOT {k} applies {:?} but the stabilizer letter is {:?}",
                    d.pauli,
                    stabilizer.paulis()[d.qubit]
                )));
            }
        }
        Ok(FlagCircuit {
            c,
            fc,
            data_gaps,
            stabilizer,
            f,
            l: n + 1,
        })
    }

    /// CNOT column count.
    pub fn n(&self) -> usize {
        self.c.cols()
    }

    /// Row index of the data row in `c`.
    pub fn data_row(&self) -> usize {
        self.f
    }

    /// Stabilizer weight, which equals the data CNOT count.
    pub fn w(&self) -> usize {
        self.data_gaps.len()
    }
}

/// Derives the per-gap signature matrix from a CNOT matrix: per flag row, a
/// suffix XOR, with a trailing zero column for the gap after the circuit.
pub fn fc_from_circuit(c: &BitMatrix, data_row: usize) -> Result<BitMatrix> {
    let n = c.cols();
    for j in 0..n {
        if c.col(j).weight() != 1 {
            return Err(Error::InvalidCircuit(format!(
                "CNOT column {j} has weight {}, every column must hold exactly one CNOT",
                c.col(j).weight()
            )));
        }
    }
    let flag_rows: Vec<usize> = (0..c.rows()).filter(|&r| r != data_row).collect();
    let mut fc = BitMatrix::zeros(flag_rows.len(), n + 1);
    for (out_r, &r) in flag_rows.iter().enumerate() {
        let suffix = crate::f2::suffix_xor(&c.row(r));
        for j in 0..n {
            if suffix.get(j) {
                fc.set(out_r, j, true);
            }
        }
        // Column n (the gap after the last CNOT) stays zero.
    }
    Ok(fc)
}

/// Expands a stacked check matrix into a serial flag circuit.
///
/// The gap-signature walk starts at zero, ramps up to the first column,
/// visits every column in order with single-bit transition steps, and ramps
/// back to zero. The data CNOT of column i sits immediately after the gap
/// whose signature first equals column i.
pub fn unfold(g: &IdealGadget, stab: &Stabilizer, order: FlipOrder) -> Result<FlagCircuit> {
    if g.f.cols() != stab.w() {
        return Err(Error::InvalidArgument(format!(
            "matrix has {} columns but the stabilizer has weight {}",
            g.f.cols(),
            stab.w()
        )));
    }
    let f = g.f.rows();
    let w = stab.w();
    let support = stab.support();

    enum Col {
        Flag(usize),
        Data(usize),
    }
    let mut cols: Vec<Col> = Vec::new();
    let mut sigs: Vec<BitVector> = vec![BitVector::zeros(f)];

    let push_transition = |cols: &mut Vec<Col>, sigs: &mut Vec<BitVector>, to: &BitVector| {
        let cur = sigs.last().unwrap().clone();
        let diff = crate::f2::xor(&cur, to);
        let mut rows = diff.ones();
        if order == FlipOrder::BottomUp {
            rows.reverse();
        }
        let mut sig = cur;
        for r in rows {
            sig.flip(r);
            cols.push(Col::Flag(r));
            sigs.push(sig.clone());
        }
    };

    for i in 0..w {
        push_transition(&mut cols, &mut sigs, &g.f.col(i));
        cols.push(Col::Data(i));
        sigs.push(sigs.last().unwrap().clone());
    }
    push_transition(&mut cols, &mut sigs, &BitVector::zeros(f));

    let n = cols.len();
    debug_assert_eq!(sigs.len(), n + 1);
    for (j, sig) in sigs.iter().enumerate() {
        if sig.is_zero() && j != 0 && j != n {
            return Err(Error::OrderingViolation(format!(
                "gap {j} of {n} has the zero signature; reorder the columns so no \
                 transition passes through zero"
            )));
        }
    }

    let mut c = BitMatrix::zeros(f + 1, n);
    let mut data_gaps = Vec::with_capacity(w);
    for (j, col) in cols.iter().enumerate() {
        match *col {
            Col::Flag(r) => c.set(r, j, true),
            Col::Data(i) => {
                c.set(f, j, true);
                data_gaps.push(DataGap {
                    gap: j,
                    qubit: support[i],
                    pauli: stab.paulis()[support[i]],
                });
            }
        }
    }
    let circuit = FlagCircuit::new(c, data_gaps, stab.clone())?;
    debug_assert_eq!(
        (0..=n).map(|j| circuit.fc.col(j)).collect::<Vec<_>>(),
        sigs,
        "signature walk and suffix-XOR derivation must agree"
    );
    Ok(circuit)
}

/// The signature sequence from the first data CNOT's gap onward, with
/// consecutive duplicates collapsed. This is the matrix-shaped view of the
/// circuit: each original column appears once, transition columns between
/// them, ending in the zero column.
pub fn region_columns(c: &FlagCircuit) -> BitMatrix {
    let start = c.data_gaps.first().map(|d| d.gap).unwrap_or(0);
    let mut cols: Vec<BitVector> = Vec::new();
    for j in start..c.l {
        let col = c.fc.col(j);
        if cols.last() != Some(&col) {
            cols.push(col);
        }
    }
    BitMatrix::from_columns(c.f, &cols)
}

/// Replaces every data CNOT with an adjacent pair targeting two fresh data
/// qubits carrying the same letter, doubling the stabilizer weight while
/// leaving the flag structure untouched.
pub fn double_data(c: &FlagCircuit) -> FlagCircuit {
    let mut new_paulis = Vec::new();
    let mut copy_at = vec![usize::MAX; c.stabilizer.len()];
    for (q, &p) in c.stabilizer.paulis().iter().enumerate() {
        if p == Pauli::I {
            new_paulis.push(Pauli::I);
        } else {
            copy_at[q] = new_paulis.len();
            new_paulis.push(p);
            new_paulis.push(p);
        }
    }
    let stabilizer = Stabilizer::new(new_paulis).expect("doubling keeps weight positive");

    let f = c.f;
    let old_n = c.n();
    let mut cols: Vec<(usize, bool)> = Vec::new(); // (row, is_data) per new column
    let mut gaps: Vec<(usize, usize)> = Vec::new(); // (new column, old data index)
    for j in 0..old_n {
        if c.c.get(f, j) {
            let k = gaps.len() / 2;
            gaps.push((cols.len(), k));
            cols.push((f, true));
            gaps.push((cols.len(), k));
            cols.push((f, true));
        } else {
            let row = (0..f).find(|&r| c.c.get(r, j)).expect("weight-1 column");
            cols.push((row, false));
        }
    }

    let mut new_c = BitMatrix::zeros(f + 1, cols.len());
    for (j, &(row, _)) in cols.iter().enumerate() {
        new_c.set(row, j, true);
    }
    let mut data_gaps = Vec::new();
    for (idx, &(col, old_k)) in gaps.iter().enumerate() {
        let old = c.data_gaps[old_k];
        let qubit = copy_at[old.qubit] + (idx % 2);
        data_gaps.push(DataGap {
            gap: col,
            qubit,
            pauli: old.pauli,
        });
    }
    FlagCircuit::new(new_c, data_gaps, stabilizer).expect("doubled circuit stays valid")
}

/// Renders the circuit text form: a header, the CNOT matrix (data row last),
/// the stabilizer letters, and the data CNOT tags.
pub fn circuit_to_text(c: &FlagCircuit) -> String {
    let mut out = format!("flags={} cols={} w={}\n", c.f, c.n(), c.w());
    out.push_str(&crate::codes::matrix_to_text(&c.c));
    out.push_str(&format!("paulis={}\n", c.stabilizer.letters()));
    let tags: Vec<String> = c
        .data_gaps
        .iter()
        .map(|d| format!("{}:{}:{}", d.gap, d.qubit, d.pauli.to_char()))
        .collect();
    out.push_str(&format!("data_gaps={}\n", tags.join(",")));
    out
}

pub fn circuit_from_text(s: &str) -> Result<FlagCircuit> {
    let mut lines = s.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty circuit text".into()))?;
    let mut flags = None;
    let mut cols = None;
    let mut w = None;
    for part in header.split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token {part:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad header value in {part:?}")))?;
        match key {
            "flags" => flags = Some(value),
            "cols" => cols = Some(value),
            "w" => w = Some(value),
            _ => return Err(Error::Parse(format!("unknown header key {key:?}"))),
        }
    }
    let (f, n, w) = match (flags, cols, w) {
        (Some(f), Some(n), Some(w)) => (f, n, w),
        _ => return Err(Error::Parse("header must set flags, cols and w".into())),
    };

    let mut matrix_text = String::new();
    let shape = lines
        .next()
        .ok_or_else(|| Error::Parse("missing matrix block".into()))?;
    matrix_text.push_str(shape);
    matrix_text.push('\n');
    for _ in 0..f + 1 {
        let row = lines
            .next()
            .ok_or_else(|| Error::Parse("matrix block ended early".into()))?;
        matrix_text.push_str(row);
        matrix_text.push('\n');
    }
    let c = crate::codes::matrix_from_text(&matrix_text)?;
    if c.rows() != f + 1 || c.cols() != n {
        return Err(Error::Parse(format!(
            "matrix is {}x{}, header says {}x{}",
            c.rows(),
            c.cols(),
            f + 1,
            n
        )));
    }

    let paulis_line = lines
        .next()
        .ok_or_else(|| Error::Parse("missing paulis line".into()))?;
    let letters = paulis_line
        .strip_prefix("paulis=")
        .ok_or_else(|| Error::Parse("expected paulis=<letters>".into()))?;
    let stabilizer = Stabilizer::from_letters(letters.trim())?;

    let gaps_line = lines
        .next()
        .ok_or_else(|| Error::Parse("missing data_gaps line".into()))?;
    let tags = gaps_line
        .strip_prefix("data_gaps=")
        .ok_or_else(|| Error::Parse("expected data_gaps=<gap:qubit:pauli,...>".into()))?;
    let mut data_gaps = Vec::new();
    for tag in tags.trim().split(',').filter(|t| !t.is_empty()) {
        let fields: Vec<&str> = tag.split(':').collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("bad data gap tag {tag:?}")));
        }
        let gap: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad gap index in {tag:?}")))?;
        let qubit: usize = fields[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad qubit index in {tag:?}")))?;
        let pauli = fields[2]
            .chars()
            .next()
            .and_then(Pauli::from_char)
            .filter(|_| fields[2].len() == 1)
            .ok_or_else(|| Error::Parse(format!("bad pauli letter in {tag:?}")))?;
        data_gaps.push(DataGap { gap, qubit, pauli });
    }
    if stabilizer.w() != w {
        return Err(Error::Parse(format!(
            "stabilizer weight {} does not match header w={w}",
            stabilizer.w()
        )));
    }
    FlagCircuit::new(c, data_gaps, stabilizer)
}
