//! Connected syndrome extraction: every generator of a stabilizer code is
//! measured `rounds` times through one flag gadget, and fault injection is
//! simulated with a Pauli frame to check that a full cycle leaves at most a
//! bounded residual error.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::codes::{bch_check, sort_desc};
use crate::combi::{binomial, unrank_lex};
use crate::decode::CorrectionTable;
use crate::error::Error;
use crate::f2::{xor, BitVector};
use crate::faults::{propagate, FaultSet};
use crate::gadget::{stack, unfold, FlagCircuit, FlipOrder, Pauli, Stabilizer};
use crate::Result;

/// An n-qubit Pauli operator in symplectic form. Phases are not tracked;
/// the frame simulation only needs commutation data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOp {
    pub x: BitVector,
    pub z: BitVector,
}

impl PauliOp {
    pub fn identity(n: usize) -> PauliOp {
        PauliOp {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    pub fn from_stabilizer(s: &Stabilizer) -> PauliOp {
        let mut op = PauliOp::identity(s.len());
        for (q, &p) in s.paulis().iter().enumerate() {
            op.apply(q, p);
        }
        op
    }

    pub fn from_letters(s: &str) -> Result<PauliOp> {
        let letters: Vec<char> = s.chars().collect();
        let mut op = PauliOp::identity(letters.len());
        for (q, &ch) in letters.iter().enumerate() {
            let p = Pauli::from_char(ch)
                .ok_or_else(|| Error::Parse(format!("bad Pauli letter {ch:?}")))?;
            op.apply(q, p);
        }
        Ok(op)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        (0..self.len())
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .count()
    }

    pub fn pauli_at(&self, qubit: usize) -> Pauli {
        match (self.x.get(qubit), self.z.get(qubit)) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Multiplies a single-qubit Pauli into the operator.
    pub fn apply(&mut self, qubit: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => self.x.flip(qubit),
            Pauli::Y => {
                self.x.flip(qubit);
                self.z.flip(qubit);
            }
            Pauli::Z => self.z.flip(qubit),
        }
    }

    pub fn mul_in_place(&mut self, other: &PauliOp) {
        assert_eq!(self.len(), other.len());
        self.x.xor_in_place(&other.x);
        self.z.xor_in_place(&other.z);
    }

    /// Whether a single-qubit Pauli at `qubit` anticommutes with this
    /// operator's component there.
    pub fn anticommutes_at(&self, qubit: usize, p: Pauli) -> bool {
        let (px, pz) = match p {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        };
        (self.x.get(qubit) & pz) ^ (self.z.get(qubit) & px)
    }

    /// Symplectic product parity with another operator.
    pub fn anticommutes(&self, other: &PauliOp) -> bool {
        assert_eq!(self.len(), other.len());
        let mut parity = false;
        for q in 0..self.len() {
            parity ^= self.x.get(q) & other.z.get(q);
            parity ^= self.z.get(q) & other.x.get(q);
        }
        parity
    }

    pub fn letters(&self) -> String {
        (0..self.len()).map(|q| self.pauli_at(q).to_char()).collect()
    }
}

/// A stabilizer code given by its generator list, used at correction
/// weight `t`. Generator declaration order is visible downstream: it fixes
/// the coupling order of extraction plans and resource estimates.
#[derive(Clone, Debug)]
pub struct QuantumCode {
    pub n: usize,
    pub t: usize,
    pub generators: Vec<Stabilizer>,
}

impl QuantumCode {
    /// Validates generator lengths and pairwise commutation.
    pub fn new(t: usize, generators: Vec<Stabilizer>) -> Result<QuantumCode> {
        if t < 1 {
            return Err(Error::InvalidArgument(
                "correction weight t must be at least 1".into(),
            ));
        }
        let first = generators.first().ok_or_else(|| {
            Error::InvalidArgument("a code needs at least one generator".into())
        })?;
        let n = first.len();
        for g in &generators {
            if g.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "generator length {} does not match qubit count {n}",
                    g.len()
                )));
            }
        }
        let ops: Vec<PauliOp> = generators.iter().map(PauliOp::from_stabilizer).collect();
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if ops[i].anticommutes(&ops[j]) {
                    return Err(Error::InvalidArgument(format!(
                        "generators {i} and {j} anticommute"
                    )));
                }
            }
        }
        Ok(QuantumCode { n, t, generators })
    }

    /// One bit per generator: 1 where the error anticommutes with it.
    pub fn syndrome(&self, e: &PauliOp) -> BitVector {
        assert_eq!(e.len(), self.n);
        let mut s = BitVector::zeros(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            if PauliOp::from_stabilizer(g).anticommutes(e) {
                s.set(i, true);
            }
        }
        s
    }

    /// Correction for every syndrome reachable by a Pauli error of weight
    /// at most t. Enumeration is weight-ascending with first-wins ties, so
    /// each entry has minimum weight for its syndrome.
    pub fn decode_table(&self) -> HashMap<BitVector, PauliOp> {
        let mut table = HashMap::new();
        table.insert(
            BitVector::zeros(self.generators.len()),
            PauliOp::identity(self.n),
        );
        let mut support = Vec::new();
        for k in 1..=self.t {
            let total = binomial(self.n as u64, k as u64);
            for rank in 0..total {
                support.clear();
                unrank_lex(self.n, k, rank, &mut support);
                for assignment in 0..3usize.pow(k as u32) {
                    let mut op = PauliOp::identity(self.n);
                    let mut v = assignment;
                    for &q in &support {
                        op.apply(q, [Pauli::X, Pauli::Y, Pauli::Z][v % 3]);
                        v /= 3;
                    }
                    table.entry(self.syndrome(&op)).or_insert(op);
                }
            }
        }
        table
    }

    /// All products of generators. Exponential in the generator count, so
    /// guarded.
    pub fn stabilizer_group(&self) -> Result<Vec<PauliOp>> {
        let g = self.generators.len();
        if g > 24 {
            return Err(Error::ResourceLimit {
                what: "stabilizer group enumeration".into(),
                required: 1u128 << g,
                budget: 1 << 24,
            });
        }
        let ops: Vec<PauliOp> = self.generators.iter().map(PauliOp::from_stabilizer).collect();
        let mut out = Vec::with_capacity(1usize << g);
        out.push(PauliOp::identity(self.n));
        for mask in 1..(1usize << g) {
            let low = mask.trailing_zeros() as usize;
            let mut p = out[mask & (mask - 1)].clone();
            p.mul_in_place(&ops[low]);
            out.push(p);
        }
        Ok(out)
    }

    /// Least weight over the error's stabilizer coset.
    pub fn coset_weight(&self, e: &PauliOp) -> Result<usize> {
        assert_eq!(e.len(), self.n);
        let group = self.stabilizer_group()?;
        Ok(group
            .iter()
            .map(|s| {
                let mut p = e.clone();
                p.mul_in_place(s);
                p.weight()
            })
            .min()
            .expect("group contains the identity"))
    }
}

/// How the syndrome ancilla is provided across generator segments: one
/// serially reused qubit, or a fresh qubit per generator instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMode {
    SerialChain,
    ParallelAncilla,
}

/// One data CNOT of an extraction plan: the round, generator and data qubit
/// it belongs to, and the coupling Pauli.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotInfo {
    pub round: usize,
    pub gen: usize,
    pub qubit: usize,
    pub pauli: Pauli,
}

/// A flag circuit measuring every generator of a code `rounds` times, plus
/// the metadata mapping each data CNOT back to its (round, generator,
/// qubit) slot.
#[derive(Clone, Debug)]
pub struct ExtractionPlan {
    pub circuit: FlagCircuit,
    pub slots: Vec<SlotInfo>,
    pub rounds: usize,
    pub gens: usize,
    pub mode: ChainMode,
    pub code_n: usize,
}

impl ExtractionPlan {
    /// Ancilla count: flag qubits plus either one reused syndrome qubit or
    /// one per generator instance.
    pub fn total_ancillas(&self) -> usize {
        self.circuit.f
            + match self.mode {
                ChainMode::SerialChain => 1,
                ChainMode::ParallelAncilla => self.rounds * self.gens,
            }
    }
}

/// Builds the connected extraction circuit: all generator couplings in
/// round-major, generator-major, qubit-ascending order behind one stacked
/// flag gadget sized for the combined coupling sequence.
pub fn connect(
    code: &QuantumCode,
    rounds: usize,
    reps: usize,
    order: FlipOrder,
    mode: ChainMode,
) -> Result<ExtractionPlan> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    let mut slots = Vec::new();
    let mut paulis = Vec::new();
    for round in 0..rounds {
        for (gen, g) in code.generators.iter().enumerate() {
            for qubit in g.support() {
                let pauli = g.paulis()[qubit];
                slots.push(SlotInfo {
                    round,
                    gen,
                    qubit,
                    pauli,
                });
                paulis.push(pauli);
            }
        }
    }
    let stab = Stabilizer::new(paulis)?;
    let h = sort_desc(&bch_check(stab.len(), code.t)?)?;
    let gadget = stack(&h, reps);
    let circuit = unfold(&gadget, &stab, order)?;
    Ok(ExtractionPlan {
        circuit,
        slots,
        rounds,
        gens: code.generators.len(),
        mode,
        code_n: code.n,
    })
}

/// Runs the plan's data CNOTs against a Pauli frame. `gaps` are sorted
/// ancilla fault locations in the plan circuit's gap indexing; the frame
/// starts at `initial`. Returns one measurement vector per round (a bit per
/// generator) and the final frame.
///
/// Per slot the current frame decides the measurement kickback first, then
/// an ancilla fault active at the slot deposits the coupling Pauli on the
/// data qubit. Ancilla faults flip no outcome directly: the ancilla is read
/// in the basis its fault commutes with, so only deposited data errors and
/// their kickbacks are visible.
pub fn slot_walk(
    plan: &ExtractionPlan,
    gaps: &[usize],
    initial: &PauliOp,
) -> (Vec<BitVector>, PauliOp) {
    assert_eq!(initial.len(), plan.code_n);
    debug_assert!(gaps.windows(2).all(|p| p[0] <= p[1]));
    let mut frame = initial.clone();
    let mut raw = vec![BitVector::zeros(plan.gens); plan.rounds];
    let mut active = false;
    let mut next_gap = 0;
    let mut bit = false;
    for (k, slot) in plan.slots.iter().enumerate() {
        let gap = plan.circuit.data_gaps[k].gap;
        while next_gap < gaps.len() && gaps[next_gap] <= gap {
            active = !active;
            next_gap += 1;
        }
        if frame.anticommutes_at(slot.qubit, slot.pauli) {
            bit = !bit;
        }
        if active {
            frame.apply(slot.qubit, slot.pauli);
        }
        let boundary = match plan.slots.get(k + 1) {
            Some(next) => next.round != slot.round || next.gen != slot.gen,
            None => true,
        };
        if boundary {
            if bit {
                raw[slot.round].set(slot.gen, true);
            }
            bit = false;
        }
    }
    (raw, frame)
}

/// Removes an inferred fault's measurement footprint: replays it over a
/// clean frame and XORs the replayed bits out of the observed rounds.
pub fn adjust_syndromes(
    plan: &ExtractionPlan,
    inferred: &FaultSet,
    raw: &[BitVector],
) -> Vec<BitVector> {
    let identity = PauliOp::identity(plan.code_n);
    let (replay, _) = slot_walk(plan, &inferred.syndrome_gaps, &identity);
    raw.iter().zip(&replay).map(|(a, b)| xor(a, b)).collect()
}

/// The repetition rule: take the newest run of t+1 equal consecutive round
/// vectors; with no such run the last round stands.
pub fn settle_syndrome(rounds: &[BitVector], t: usize) -> (BitVector, bool) {
    let need = t + 1;
    if rounds.len() >= need {
        for start in (0..=rounds.len() - need).rev() {
            if rounds[start..start + need].windows(2).all(|w| w[0] == w[1]) {
                return (rounds[start].clone(), true);
            }
        }
    }
    (rounds.last().expect("at least one round").clone(), false)
}

/// Everything one simulated error-correction cycle produces.
#[derive(Clone, Debug)]
pub struct RoundOutcome {
    pub raw: Vec<BitVector>,
    pub adjusted: Vec<BitVector>,
    pub pattern: BitVector,
    /// The fault the flag table attributed the pattern to.
    pub inferred: FaultSet,
    pub syndrome: BitVector,
    /// Whether the syndrome came from a t+1 repetition run.
    pub repeated: bool,
    pub correction: PauliOp,
    /// Frame after the flag-table correction and the syndrome correction.
    pub residual: PauliOp,
}

/// Simulates one extraction cycle: injects `injected` on a frame starting
/// at `initial`, reads the flag pattern, applies the table's correction
/// word through the slot map, XORs the attributed fault's measurement
/// footprint out of the rounds, settles them by repetition, and applies the
/// code's correction.
///
/// The correction word may be the complement of the deposited suffix; the
/// two differ by the product of every coupling, which is a stabilizer, so
/// the residual coset is the same either way.
pub fn run_round(
    code: &QuantumCode,
    plan: &ExtractionPlan,
    table: &CorrectionTable,
    decode: &HashMap<BitVector, PauliOp>,
    injected: &FaultSet,
    initial: &PauliOp,
) -> Result<RoundOutcome> {
    let (raw, mut frame) = slot_walk(plan, &injected.syndrome_gaps, initial);
    let pattern = propagate(&plan.circuit, injected).pattern;
    let entry = table.lookup(&pattern).ok_or_else(|| {
        Error::UndecodableSubpattern(format!(
            "flag pattern {} has no table entry",
            pattern.to_bit_string()
        ))
    })?;
    let inferred = entry.rep_fault.clone().unwrap_or_default();
    let identity = PauliOp::identity(plan.code_n);
    let (replay_raw, _) = slot_walk(plan, &inferred.syndrome_gaps, &identity);
    let adjusted: Vec<BitVector> = raw
        .iter()
        .zip(&replay_raw)
        .map(|(a, b)| xor(a, b))
        .collect();
    for k in entry.correction.iter_ones() {
        frame.apply(plan.slots[k].qubit, plan.slots[k].pauli);
    }
    let (syndrome, repeated) = settle_syndrome(&adjusted, code.t);
    let correction = decode
        .get(&syndrome)
        .ok_or_else(|| {
            Error::UndecodableSubpattern(format!(
                "settled syndrome {} has no correction at t={}",
                syndrome.to_bit_string(),
                code.t
            ))
        })?
        .clone();
    let mut residual = frame;
    residual.mul_in_place(&correction);
    Ok(RoundOutcome {
        raw,
        adjusted,
        pattern,
        inferred,
        syndrome,
        repeated,
        correction,
        residual,
    })
}

/// Renders a code as `n=<n> t=<t>` plus one generator letter string per
/// line.
pub fn code_to_text(code: &QuantumCode) -> String {
    let mut out = String::new();
    writeln!(out, "n={} t={}", code.n, code.t).unwrap();
    for g in &code.generators {
        writeln!(out, "{}", g.letters()).unwrap();
    }
    out
}

pub fn code_from_text(s: &str) -> Result<QuantumCode> {
    let mut lines = s.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty code text".into()))?;
    let mut n = None;
    let mut t = None;
    for token in header.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token {token:?}")))?;
        let parsed: usize = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad header value {value:?}")))?;
        match key {
            "n" => n = Some(parsed),
            "t" => t = Some(parsed),
            _ => return Err(Error::Parse(format!("unknown header key {key:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("header is missing n=".into()))?;
    let t = t.ok_or_else(|| Error::Parse("header is missing t=".into()))?;
    let mut generators = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.chars().count() != n {
            return Err(Error::Parse(format!(
                "generator line {line:?} does not have {n} letters"
            )));
        }
        generators.push(Stabilizer::from_letters(line)?);
    }
    QuantumCode::new(t, generators)
}

fn css_code(t: usize, n: usize, faces: &[&[usize]]) -> QuantumCode {
    let mut generators = Vec::new();
    for &kind in &[Pauli::X, Pauli::Z] {
        for face in faces {
            let mut paulis = vec![Pauli::I; n];
            for &q in *face {
                paulis[q] = kind;
            }
            generators.push(Stabilizer::new(paulis).unwrap());
        }
    }
    QuantumCode::new(t, generators).unwrap()
}

/// The five-qubit code, four weight-4 generators.
pub fn five_qubit() -> QuantumCode {
    let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
        .iter()
        .map(|s| Stabilizer::from_letters(s).unwrap())
        .collect();
    QuantumCode::new(1, gens).unwrap()
}

/// The nine-qubit code with the weight-2 Z pairs declared before the two
/// weight-6 X generators; declaration order is what resource estimation
/// schedules.
pub fn shor_nine() -> QuantumCode {
    let gens = [
        "ZZIIIIIII",
        "IZZIIIIII",
        "IIIZZIIII",
        "IIIIZZIII",
        "IIIIIIZZI",
        "IIIIIIIZZ",
        "XXXXXXIII",
        "IIIXXXXXX",
    ]
    .iter()
    .map(|s| Stabilizer::from_letters(s).unwrap())
    .collect();
    QuantumCode::new(1, gens).unwrap()
}

/// The seven-qubit CSS code: three weight-4 faces, X and Z on the same
/// supports.
pub fn steane_seven() -> QuantumCode {
    css_code(1, 7, &[&[3, 4, 5, 6], &[1, 2, 5, 6], &[0, 2, 4, 6]])
}

/// A nineteen-qubit CSS code used at t = 2: nine faces (six weight-4 and
/// three weight-6) measured as same-support X and Z pairs, eighteen
/// generators of total weight 84. All pairwise face overlaps are even, so
/// the pairs commute.
pub fn nineteen_qubit() -> QuantumCode {
    css_code(
        2,
        19,
        &[
            &[0, 1, 2, 3],
            &[4, 5, 6, 7],
            &[0, 1, 4, 5],
            &[0, 2, 4, 6],
            &[8, 9, 10, 11],
            &[12, 13, 14, 15],
            &[8, 9, 12, 13, 16, 17],
            &[8, 9, 13, 14, 16, 18],
            &[8, 9, 13, 15, 17, 18],
        ],
    )
}
