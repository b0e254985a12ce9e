//! Correction tables and exhaustive fault-tolerance verification.
//!
//! A correction table maps each reachable flag pattern to a data correction.
//! The acceptance test for a table is always the same residual bound: for
//! every fault set with at most t faults, the leftover data error after the
//! table's correction must, modulo the full stabilizer, weigh no more than
//! the number of faults. Verification enumerates every fault set and checks
//! that bound; the first violation in enumeration order is reported.

use std::collections::HashMap;

use crate::codes::{decode_classical, ParityCheck};
use crate::exec;
use crate::f2::BitVector;
use crate::faults::{canonical_data, fault_at, propagate, FaultSet, Packed, Walker};
use crate::gadget::FlagCircuit;
use crate::{Error, Result};

/// How a table's corrections were chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decoder {
    Brute,
    Majority,
}

/// Where corrections are allowed to act.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrectionRule {
    /// Any data-CNOT support.
    Unrestricted,
    /// Supports whose boundaries sit only between the two CNOTs of a
    /// duplicated pair, for circuits produced by data doubling. Requires an
    /// even number of data CNOTs.
    BetweenPairs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    /// Support vector over the data CNOTs, already reduced modulo the full
    /// stabilizer.
    pub correction: BitVector,
    /// A minimal fault set producing this pattern, when the builder knows
    /// one. Parsed tables do not.
    pub rep_fault: Option<FaultSet>,
}

#[derive(Clone, Debug)]
pub struct CorrectionTable {
    pub t: usize,
    pub decoder: Decoder,
    pub entries: HashMap<BitVector, TableEntry>,
}

impl CorrectionTable {
    pub fn lookup(&self, pattern: &BitVector) -> Option<&TableEntry> {
        self.entries.get(pattern)
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub fault: FaultSet,
    pub pattern: BitVector,
    pub correction: BitVector,
    pub residual_weight: usize,
}

#[derive(Clone, Debug)]
pub struct FtVerdict {
    pub ok: bool,
    /// Fault sets whose pattern had no table entry; those were checked
    /// against the identity correction.
    pub missing_patterns: u64,
    /// The violation with the smallest enumeration rank, if any.
    pub counterexample: Option<Counterexample>,
}

/// Entries kept in memory for grouping scans; hard cap independent of the
/// caller's budget so a single scan cannot exhaust the machine.
const MAX_ENTRIES: u128 = 100_000_000;

const SCAN_CHUNK: usize = 1 << 16;

#[derive(Clone, Copy, Default)]
struct Entry {
    key: u128,
    rank: u64,
}

fn support_mask(w: usize) -> u64 {
    if w == 64 {
        u64::MAX
    } else {
        (1u64 << w) - 1
    }
}

/// Lexicographic order on packed supports, index 0 most significant, as a
/// sortable integer.
fn lex_key(word: u64) -> u64 {
    word.reverse_bits()
}

fn canonical_word(word: u64, w: usize, mask: u64) -> u64 {
    let wt = word.count_ones() as usize;
    if 2 * wt > w {
        word ^ mask
    } else if 2 * wt == w {
        let comp = word ^ mask;
        if lex_key(comp) < lex_key(word) {
            comp
        } else {
            word
        }
    } else {
        word
    }
}

/// Distance modulo the full stabilizer between two packed supports.
fn coset_distance(a: u64, b: u64, w: usize) -> usize {
    let d = (a ^ b).count_ones() as usize;
    d.min(w - d)
}

fn sorted_entries(p: &Packed) -> Result<Vec<Entry>> {
    let total = p.total();
    if total > MAX_ENTRIES {
        return Err(Error::ResourceLimit {
            what: "fault-set entries held in memory".into(),
            required: total,
            budget: MAX_ENTRIES as u64,
        });
    }
    let total = total as usize;
    let mut entries: Vec<Entry> = exec::fill_exact(total, SCAN_CHUNK, |start, buf| {
        let mut w = Walker::start(p, start as u128);
        let n = buf.len();
        for (i, e) in buf.iter_mut().enumerate() {
            *e = Entry {
                key: w.key(),
                rank: (start + i) as u64,
            };
            if i + 1 < n {
                w.step();
            }
        }
    });
    exec::sort_by_key(&mut entries, |e| (e.key, e.rank));
    Ok(entries)
}

/// Builds the table that assigns each reachable pattern the data error of
/// its minimal fault set: smallest fault count, ties broken on the sorted
/// gap list then the sorted flip list.
pub fn build_table_bruteforce(c: &FlagCircuit, t: usize) -> Result<CorrectionTable> {
    let p = Packed::new(c, t)?;
    let entries = sorted_entries(&p)?;
    let groups: Vec<(u128, TableEntry)> = exec::chunked_groups(
        &entries,
        SCAN_CHUNK,
        |a, b| a.key == b.key,
        Vec::new,
        |acc, run| {
            let rep = run
                .iter()
                .map(|e| fault_at(c, t, e.rank as u128))
                .min_by_key(|fs| (fs.size(), fs.clone()))
                .unwrap();
            let correction = canonical_data(&propagate(c, &rep).data);
            acc.push((
                run[0].key,
                TableEntry {
                    correction,
                    rep_fault: Some(rep),
                },
            ));
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    let entries = groups
        .into_iter()
        .map(|(key, e)| (BitVector::from_u128(c.f, key), e))
        .collect();
    Ok(CorrectionTable {
        t,
        decoder: Decoder::Brute,
        entries,
    })
}

/// Checks the residual bound for every fault set with at most t faults.
/// Patterns missing from the table are treated as identity corrections and
/// counted. The returned counterexample is the first in enumeration order.
pub fn verify_ft(c: &FlagCircuit, t: usize, table: &CorrectionTable) -> Result<FtVerdict> {
    let p = Packed::new(c, t)?;
    let w = c.w();
    let mut lut: HashMap<u128, u64> = HashMap::with_capacity(table.entries.len());
    for (pattern, entry) in &table.entries {
        if pattern.len() != c.f || entry.correction.len() != w {
            return Err(Error::InvalidArgument(format!(
                "table shaped for {} flags and {} data CNOTs, circuit has {} and {}",
                pattern.len(),
                entry.correction.len(),
                c.f,
                w
            )));
        }
        lut.insert(pattern.to_u128(), entry.correction.to_u64());
    }
    let total = u64::try_from(p.total()).map_err(|_| Error::ResourceLimit {
        what: "fault sets to verify".into(),
        required: p.total(),
        budget: u64::MAX,
    })?;

    let (first_bad, missing) = exec::map_reduce(
        total,
        SCAN_CHUNK as u64,
        |range| {
            let mut walker = Walker::start(&p, range.start as u128);
            let mut first_bad: Option<u64> = None;
            let mut missing = 0u64;
            for rank in range.clone() {
                let correction = match lut.get(&walker.key()) {
                    Some(&r) => r,
                    None => {
                        missing += 1;
                        0
                    }
                };
                let residual = (walker.data() ^ correction).count_ones() as usize;
                if residual.min(w - residual) > walker.size() && first_bad.is_none() {
                    first_bad = Some(rank);
                }
                if rank + 1 < range.end {
                    walker.step();
                }
            }
            (first_bad, missing)
        },
        |(a, ma), (b, mb)| {
            let min = match (a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            (min, ma + mb)
        },
        || (None, 0),
    );

    let counterexample = first_bad.map(|rank| {
        let fault = fault_at(c, t, rank as u128);
        let effect = propagate(c, &fault);
        let correction = table
            .lookup(&effect.pattern)
            .map(|e| e.correction.clone())
            .unwrap_or_else(|| BitVector::zeros(w));
        let residual = crate::f2::xor(&effect.data, &correction).weight();
        Counterexample {
            fault,
            pattern: effect.pattern,
            correction,
            residual_weight: residual.min(w - residual),
        }
    });
    Ok(FtVerdict {
        ok: counterexample.is_none(),
        missing_patterns: missing,
        counterexample,
    })
}

/// Whether some correction table satisfying the residual bound exists, by
/// intersecting per-pattern candidate balls. `budget` caps the number of
/// fault sets enumerated.
pub fn decodable(c: &FlagCircuit, t: usize, budget: u64) -> Result<bool> {
    decodable_with_rule(c, t, budget, CorrectionRule::Unrestricted, false).map(|(ok, _)| ok)
}

struct SearchAcc {
    ok: bool,
    entries: Option<Vec<(u128, TableEntry)>>,
}

/// As `decodable`, with a placement rule for the candidate corrections, and
/// optionally assembling the witnessing table (the lexicographically least
/// passing candidate per pattern).
pub fn decodable_with_rule(
    c: &FlagCircuit,
    t: usize,
    budget: u64,
    rule: CorrectionRule,
    want_table: bool,
) -> Result<(bool, Option<CorrectionTable>)> {
    let p = Packed::new(c, t)?;
    if p.total() > budget as u128 {
        return Err(Error::ResourceLimit {
            what: "fault sets to enumerate".into(),
            required: p.total(),
            budget,
        });
    }
    let w = c.w();
    let mask = support_mask(w);
    let restricted: Option<Vec<u64>> = match rule {
        CorrectionRule::Unrestricted => None,
        CorrectionRule::BetweenPairs => Some(paired_candidates(w)?),
    };

    let entries = sorted_entries(&p)?;
    let acc = exec::chunked_groups(
        &entries,
        SCAN_CHUNK,
        |a, b| a.key == b.key,
        || SearchAcc {
            ok: true,
            entries: want_table.then(Vec::new),
        },
        |acc, run| {
            if run.len() == 1 && rule == CorrectionRule::Unrestricted && !want_table {
                return; // A lone member is covered by its own data error.
            }
            let members: Vec<(FaultSet, u64)> = run
                .iter()
                .map(|e| {
                    let fs = fault_at(c, t, e.rank as u128);
                    let data = propagate(c, &fs).data.to_u64();
                    (fs, data)
                })
                .collect();
            let mut radii: HashMap<u64, usize> = HashMap::new();
            for (fs, data) in &members {
                let r = radii.entry(*data).or_insert(usize::MAX);
                *r = (*r).min(fs.size());
            }
            let (rep, center) = members
                .iter()
                .min_by_key(|(fs, _)| (fs.size(), fs.clone()))
                .map(|(fs, data)| (fs.clone(), *data))
                .unwrap();
            let r_min = rep.size();

            let mut best: Option<u64> = None;
            let mut consider = |cand: u64| {
                if radii
                    .iter()
                    .all(|(&d, &r)| coset_distance(cand, d, w) <= r)
                {
                    let canon = canonical_word(cand, w, mask);
                    if best.map_or(true, |b| lex_key(canon) < lex_key(b)) {
                        best = Some(canon);
                    }
                }
            };
            match &restricted {
                Some(cands) => cands.iter().for_each(|&c| consider(c)),
                None => for_each_flip(w, r_min.min(t), |delta| {
                    consider(center ^ delta);
                    consider(center ^ mask ^ delta);
                }),
            }

            match best {
                None => acc.ok = false,
                Some(corr) => {
                    if let Some(list) = acc.entries.as_mut() {
                        list.push((
                            run[0].key,
                            TableEntry {
                                correction: BitVector::from_u128(w, corr as u128),
                                rep_fault: Some(rep),
                            },
                        ));
                    }
                }
            }
        },
        |mut a, b| {
            a.ok &= b.ok;
            if let (Some(list), Some(other)) = (a.entries.as_mut(), b.entries) {
                list.extend(other);
            }
            a
        },
    );

    let table = match (acc.ok, acc.entries) {
        (true, Some(list)) => Some(CorrectionTable {
            t,
            decoder: Decoder::Brute,
            entries: list
                .into_iter()
                .map(|(key, e)| (BitVector::from_u128(c.f, key), e))
                .collect(),
        }),
        _ => None,
    };
    Ok((acc.ok, table))
}

/// All supports over paired data CNOTs whose value changes only between the
/// two halves of a pair: segment 0 is CNOT 0 alone, then two-CNOT segments
/// (1,2), (3,4), ..., and the last CNOT alone.
fn paired_candidates(w: usize) -> Result<Vec<u64>> {
    if w % 2 != 0 || w == 0 {
        return Err(Error::InvalidArgument(format!(
            "pair-restricted corrections need an even data-CNOT count, got {w}"
        )));
    }
    let segments = w / 2 + 1;
    if segments > 24 {
        return Err(Error::ResourceLimit {
            what: "pair segments to enumerate".into(),
            required: 1u128 << segments,
            budget: 1 << 24,
        });
    }
    let mut seg_masks = vec![1u64];
    let mut k = 1;
    while k + 1 < w {
        seg_masks.push((1 << k) | (1 << (k + 1)));
        k += 2;
    }
    seg_masks.push(1 << (w - 1));
    debug_assert_eq!(seg_masks.len(), segments);
    let mut out = Vec::with_capacity(1 << segments);
    for choice in 0u64..(1 << segments) {
        let mut word = 0u64;
        for (s, &m) in seg_masks.iter().enumerate() {
            if (choice >> s) & 1 == 1 {
                word |= m;
            }
        }
        out.push(word);
    }
    Ok(out)
}

/// Calls f with every w-bit word of weight at most kmax, including zero.
fn for_each_flip(w: usize, kmax: usize, mut f: impl FnMut(u64)) {
    f(0);
    let mut idx = vec![0usize; kmax.min(w)];
    for k in 1..=kmax.min(w) {
        for (i, v) in idx.iter_mut().take(k).enumerate() {
            *v = i;
        }
        loop {
            let mut word = 0u64;
            for &i in &idx[..k] {
                word |= 1 << i;
            }
            f(word);
            // Lexicographic successor of the index set.
            let mut i = k;
            while i > 0 && idx[i - 1] == w - k + (i - 1) {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[i - 1] + (j - i + 1);
            }
        }
    }
}

/// Decodes one pattern by repetition-block majority: the pattern splits into
/// (t+1)^2 sub-syndromes; the most frequent one (earliest on ties) is
/// decoded classically and the resulting bits become a correction acting
/// from each flagged region onward.
pub fn majority_decode(
    c: &FlagCircuit,
    h: &ParityCheck,
    t: usize,
    pattern: &BitVector,
) -> Result<BitVector> {
    let reps = (t + 1) * (t + 1);
    let rows = h.rows();
    if c.f != reps * rows {
        return Err(Error::InvalidArgument(format!(
            "majority decoding needs {} repetition blocks of {} rows, circuit has {} flags",
            reps, rows, c.f
        )));
    }
    if h.w != c.w() {
        return Err(Error::InvalidArgument(format!(
            "check matrix length {} does not match the circuit's {} data CNOTs",
            h.w,
            c.w()
        )));
    }
    if pattern.len() != c.f {
        return Err(Error::InvalidArgument(format!(
            "pattern has {} bits, circuit has {} flags",
            pattern.len(),
            c.f
        )));
    }

    let mut counts: HashMap<BitVector, usize> = HashMap::new();
    let mut order: Vec<BitVector> = Vec::new();
    for r in 0..reps {
        let sub = pattern.slice(r * rows, rows);
        if !counts.contains_key(&sub) {
            order.push(sub.clone());
        }
        *counts.entry(sub).or_insert(0) += 1;
    }
    // Strictly-greater updates keep the earliest block on ties.
    let mut winner = &order[0];
    for sub in &order[1..] {
        if counts[sub] > counts[winner] {
            winner = sub;
        }
    }

    let e = decode_classical(h, winner).ok_or_else(|| {
        Error::UndecodableSubpattern(format!(
            "majority sub-syndrome {} has no classical error of weight <= {t}",
            winner.to_bit_string()
        ))
    })?;
    // Each flagged column contributes the suffix from its data CNOT onward,
    // so the correction is the prefix parity of the classical error.
    let mut corr = BitVector::zeros(c.w());
    let mut acc = false;
    for k in 0..c.w() {
        if e.get(k) {
            acc = !acc;
        }
        if acc {
            corr.set(k, true);
        }
    }
    Ok(corr)
}

/// Builds the majority table over every pattern reachable by at most t
/// faults.
pub fn build_table_majority(
    c: &FlagCircuit,
    h: &ParityCheck,
    t: usize,
) -> Result<CorrectionTable> {
    let mut reps: HashMap<BitVector, FaultSet> = HashMap::new();
    for fs in crate::faults::enumerate_faults(c, t) {
        let pattern = propagate(c, &fs).pattern;
        reps.entry(pattern).or_insert(fs);
    }
    let mut entries = HashMap::with_capacity(reps.len());
    for (pattern, rep) in reps {
        let correction = majority_decode(c, h, t, &pattern)?;
        entries.insert(
            pattern,
            TableEntry {
                correction,
                rep_fault: Some(rep),
            },
        );
    }
    Ok(CorrectionTable {
        t,
        decoder: Decoder::Majority,
        entries,
    })
}

/// Renders a table: a header line, then one line per pattern in
/// lexicographic order mapping pattern bits to qubit:pauli corrections.
pub fn table_to_text(table: &CorrectionTable, c: &FlagCircuit) -> String {
    let decoder = match table.decoder {
        Decoder::Brute => "brute",
        Decoder::Majority => "majority",
    };
    let mut out = format!("t={} decoder={}\n", table.t, decoder);
    let mut patterns: Vec<&BitVector> = table.entries.keys().collect();
    patterns.sort();
    for pattern in patterns {
        let entry = &table.entries[pattern];
        if entry.correction.is_zero() {
            out.push_str(&format!("{} ->I\n", pattern.to_bit_string()));
        } else {
            let tokens: Vec<String> = entry
                .correction
                .ones()
                .into_iter()
                .map(|k| {
                    let d = &c.data_gaps[k];
                    format!("{}:{}", d.qubit, d.pauli.to_char())
                })
                .collect();
            out.push_str(&format!(
                "{} -> {}\n",
                pattern.to_bit_string(),
                tokens.join(",")
            ));
        }
    }
    out
}

pub fn table_from_text(s: &str, c: &FlagCircuit) -> Result<CorrectionTable> {
    let mut lines = s.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty table text".into()))?;
    let mut t = None;
    let mut decoder = None;
    for part in header.split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token {part:?}")))?;
        match key {
            "t" => {
                t = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad fault order {value:?}")))?,
                )
            }
            "decoder" => {
                decoder = Some(match value {
                    "brute" => Decoder::Brute,
                    "majority" => Decoder::Majority,
                    other => return Err(Error::Parse(format!("unknown decoder {other:?}"))),
                })
            }
            _ => return Err(Error::Parse(format!("unknown header key {key:?}"))),
        }
    }
    let (t, decoder) = match (t, decoder) {
        (Some(t), Some(d)) => (t, d),
        _ => return Err(Error::Parse("header must set t and decoder".into())),
    };

    let mut entries = HashMap::new();
    for line in lines {
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| Error::Parse(format!("missing -> in {line:?}")))?;
        let pattern = BitVector::from_bit_string(lhs.trim())
            .ok_or_else(|| Error::Parse(format!("bad pattern bits in {line:?}")))?;
        if pattern.len() != c.f {
            return Err(Error::Parse(format!(
                "pattern {} has {} bits, circuit has {} flags",
                lhs.trim(),
                pattern.len(),
                c.f
            )));
        }
        let mut correction = BitVector::zeros(c.w());
        let rhs = rhs.trim();
        if rhs != "I" {
            let mut from = 0usize;
            for token in rhs.split(',') {
                let (qubit, letter) = token
                    .trim()
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad correction token {token:?}")))?;
                let qubit: usize = qubit
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad qubit in {token:?}")))?;
                let pauli = crate::gadget::Pauli::from_char(
                    letter.chars().next().filter(|_| letter.len() == 1).ok_or_else(|| {
                        Error::Parse(format!("bad pauli in {token:?}"))
                    })?,
                )
                .ok_or_else(|| Error::Parse(format!("bad pauli in {token:?}")))?;
                let k = (from..c.w())
                    .find(|&k| c.data_gaps[k].qubit == qubit && c.data_gaps[k].pauli == pauli)
                    .ok_or_else(|| {
                        Error::Parse(format!("no data CNOT matches token {token:?}"))
                    })?;
                correction.set(k, true);
                from = k + 1;
            }
        }
        if entries
            .insert(
                pattern,
                TableEntry {
                    correction,
                    rep_fault: None,
                },
            )
            .is_some()
        {
            return Err(Error::Parse(format!("duplicate pattern in {line:?}")));
        }
    }
    Ok(CorrectionTable {
        t,
        decoder,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{bch_check, sort_desc};
    use crate::faults::{enumerate_faults, fault_count};
    use crate::gadget::{double_data, stack, unfold, FlipOrder, Stabilizer};

    fn circuit(w: usize, t: usize, r: usize) -> FlagCircuit {
        let h = sort_desc(&bch_check(w, t).unwrap()).unwrap();
        unfold(&stack(&h, r), &Stabilizer::all_x(w), FlipOrder::TopDown).unwrap()
    }

    #[test]
    fn brute_table_uses_minimal_representatives() {
        let c = circuit(7, 1, 3);
        let g = stack(&sort_desc(&bch_check(7, 1).unwrap()).unwrap(), 3);
        let table = build_table_bruteforce(&c, 1).unwrap();
        // The zero pattern maps to the trivial correction.
        let zero = BitVector::zeros(c.f);
        assert!(table.entries[&zero].correction.is_zero());
        assert_eq!(
            table.entries[&zero].rep_fault.as_ref().unwrap(),
            &FaultSet::empty()
        );
        // A pure stacked column's representative is the fault right before
        // that data CNOT, and its correction is the canonical suffix.
        for (i, d) in c.data_gaps.iter().enumerate() {
            let entry = &table.entries[&g.f.col(i)];
            let rep = entry.rep_fault.as_ref().unwrap();
            assert_eq!(rep, &FaultSet::new(vec![d.gap], vec![]));
            let suffix = propagate(&c, rep).data;
            assert_eq!(entry.correction, canonical_data(&suffix));
        }
    }

    #[test]
    fn verify_accepts_intersection_tables() {
        for (w, t, r) in [(7usize, 1usize, 3usize), (13, 2, 3)] {
            let c = circuit(w, t, r);
            let (ok, table) =
                decodable_with_rule(&c, t, 10_000_000, CorrectionRule::Unrestricted, true)
                    .unwrap();
            assert!(ok, "w={w} t={t} r={r} should admit a table");
            let verdict = verify_ft(&c, t, &table.unwrap()).unwrap();
            assert!(verdict.ok);
            assert_eq!(verdict.missing_patterns, 0);
        }
    }

    #[test]
    fn verify_flags_first_counterexample_against_empty_table() {
        let c = circuit(7, 1, 3);
        let empty = CorrectionTable {
            t: 1,
            decoder: Decoder::Brute,
            entries: HashMap::new(),
        };
        let verdict = verify_ft(&c, 1, &empty).unwrap();
        assert!(!verdict.ok);
        // Every fault set misses an empty table, the zero pattern included.
        assert_eq!(verdict.missing_patterns, fault_count(&c, 1) as u64);
        // Oracle: first enumerated fault whose bare data error is too heavy.
        let expected = enumerate_faults(&c, 1)
            .find(|fs| {
                let d = propagate(&c, fs).data.weight();
                d.min(7 - d) > fs.size()
            })
            .unwrap();
        assert_eq!(verdict.counterexample.unwrap().fault, expected);
    }

    #[test]
    fn single_block_with_flags_is_not_decodable() {
        // One repetition cannot distinguish a flag flip from a gap fault
        // raising the same single-bit pattern.
        let c = circuit(7, 1, 1);
        assert!(!decodable(&c, 1, 1_000_000).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let c = circuit(13, 2, 3);
        let total = fault_count(&c, 2);
        match decodable(&c, 2, 100) {
            Err(Error::ResourceLimit { required, budget, .. }) => {
                assert_eq!(required, total);
                assert_eq!(budget, 100);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn doubled_circuit_passes_with_paired_rule() {
        let c = circuit(7, 1, 3);
        let d = double_data(&c);
        let (ok, table) =
            decodable_with_rule(&d, 1, 10_000_000, CorrectionRule::BetweenPairs, true).unwrap();
        assert!(ok);
        let table = table.unwrap();
        let verdict = verify_ft(&d, 1, &table).unwrap();
        assert!(verdict.ok, "counterexample: {:?}", verdict.counterexample);
        // Every correction only changes value between pair halves, modulo
        // the full stabilizer.
        let w = d.w();
        let mask = support_mask(w);
        let allowed: Vec<u64> = paired_candidates(w).unwrap();
        for entry in table.entries.values() {
            let word = entry.correction.to_u64();
            assert!(
                allowed.contains(&word) || allowed.contains(&(word ^ mask)),
                "correction {} is not pair-aligned",
                entry.correction.to_bit_string()
            );
        }
    }

    #[test]
    fn paired_rule_rejects_odd_widths() {
        let c = circuit(7, 1, 3);
        assert!(matches!(
            decodable_with_rule(&c, 1, 1_000_000, CorrectionRule::BetweenPairs, false),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn majority_decodes_stacked_columns_and_votes() {
        let h = sort_desc(&bch_check(7, 1).unwrap()).unwrap();
        let c = unfold(&stack(&h, 4), &Stabilizer::all_x(7), FlipOrder::TopDown).unwrap();
        let t = 1;
        // Clean stacked column i: correction is the suffix from region i.
        for i in 0..7 {
            let pattern = stack(&h, 4).f.col(i);
            let corr = majority_decode(&c, &h, t, &pattern).unwrap();
            assert_eq!(corr.ones(), (i..7).collect::<Vec<_>>(), "column {i}");
        }
        // One corrupted block loses the vote 3 to 1.
        let mut pattern = stack(&h, 4).f.col(2);
        for r in 0..3 {
            pattern.flip(r); // scramble block 0 only
        }
        let corr = majority_decode(&c, &h, t, &pattern).unwrap();
        assert_eq!(corr.ones(), (2..7).collect::<Vec<_>>());
        // A 2-2 tie picks the earlier block value.
        let col_a = h.h.col(1);
        let col_b = h.h.col(4);
        let mut tied = BitVector::zeros(c.f);
        for r in 0..3 {
            if col_a.get(r) {
                tied.set(r, true);
                tied.set(3 + r, true);
            }
            if col_b.get(r) {
                tied.set(6 + r, true);
                tied.set(9 + r, true);
            }
        }
        let corr = majority_decode(&c, &h, t, &tied).unwrap();
        assert_eq!(corr.ones(), (1..7).collect::<Vec<_>>());
        // Zero pattern: identity.
        assert!(majority_decode(&c, &h, t, &BitVector::zeros(c.f))
            .unwrap()
            .is_zero());
        // Wrong repetition count is rejected.
        let three = unfold(&stack(&h, 3), &Stabilizer::all_x(7), FlipOrder::TopDown).unwrap();
        assert!(matches!(
            majority_decode(&three, &h, t, &BitVector::zeros(three.f)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn majority_reports_undecodable_subsyndromes() {
        let h = sort_desc(&bch_check(5, 1).unwrap()).unwrap();
        let c = unfold(&stack(&h, 4), &Stabilizer::all_x(5), FlipOrder::TopDown).unwrap();
        // Find a nonzero syndrome no single column produces.
        let cols: Vec<BitVector> = (0..5).map(|j| h.h.col(j)).collect();
        let missing = (1u32..8)
            .map(|v| {
                let mut s = BitVector::zeros(3);
                for b in 0..3 {
                    if (v >> b) & 1 == 1 {
                        s.set(b, true);
                    }
                }
                s
            })
            .find(|s| !cols.contains(s))
            .unwrap();
        let mut pattern = BitVector::zeros(c.f);
        for r in 0..4 {
            for b in 0..3 {
                if missing.get(b) {
                    pattern.set(3 * r + b, true);
                }
            }
        }
        assert!(matches!(
            majority_decode(&c, &h, 1, &pattern),
            Err(Error::UndecodableSubpattern(_))
        ));
    }

    #[test]
    fn majority_table_covers_reachable_patterns() {
        let h = sort_desc(&bch_check(7, 1).unwrap()).unwrap();
        let c = unfold(&stack(&h, 4), &Stabilizer::all_x(7), FlipOrder::TopDown).unwrap();
        let table = build_table_majority(&c, &h, 1).unwrap();
        for fs in enumerate_faults(&c, 1) {
            let pattern = propagate(&c, &fs).pattern;
            assert!(table.entries.contains_key(&pattern));
        }
        assert_eq!(table.decoder, Decoder::Majority);
    }

    #[test]
    fn table_text_roundtrip() {
        let c = circuit(7, 1, 3);
        let table = build_table_bruteforce(&c, 1).unwrap();
        let text = table_to_text(&table, &c);
        let back = table_from_text(&text, &c).unwrap();
        assert_eq!(back.t, table.t);
        assert_eq!(back.decoder, table.decoder);
        assert_eq!(back.entries.len(), table.entries.len());
        for (pattern, entry) in &table.entries {
            assert_eq!(back.entries[pattern].correction, entry.correction);
        }
        assert_eq!(table_to_text(&back, &c), text);

        assert!(table_from_text("", &c).is_err());
        assert!(table_from_text("t=1\n", &c).is_err());
        assert!(table_from_text("t=1 decoder=brute\n0 ->I\n", &c).is_err());
        assert!(table_from_text("t=1 decoder=magic\n", &c).is_err());
        let bits = "0".repeat(c.f);
        assert!(table_from_text(&format!("t=1 decoder=brute\n{bits} -> 9:X\n"), &c).is_err());
        assert!(
            table_from_text(&format!("t=1 decoder=brute\n{bits} ->I\n{bits} ->I\n"), &c)
                .is_err()
        );
    }
}
