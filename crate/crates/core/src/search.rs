//! Repetition-count grids and brute-force search over small flag layouts.
//!
//! `min_reps_grid` scans how many stacked repetitions a flagged extraction
//! circuit needs before the fault-tolerance check passes, one cell per
//! `(t, reps)` pair. `search_small` enumerates every placement of data and
//! flag couplings on a fixed number of CNOT slots and returns the first
//! layout that admits a valid correction table.

use crate::codes::{bch_check, sort_desc};
use crate::combi::{binomial, unrank_lex};
use crate::decode::{decodable_with_rule, CorrectionRule, CorrectionTable};
use crate::error::Error;
use crate::f2::BitMatrix;
use crate::gadget::{stack, unfold, DataGap, FlagCircuit, FlipOrder, Pauli, Stabilizer};
use crate::Result;
use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A correction table satisfying the residual bound exists.
    Ft,
    /// No table can satisfy the bound at this cell.
    NotFt,
    /// The fault enumeration would exceed the budget; not attempted.
    Skipped,
}

impl Verdict {
    pub fn to_char(self) -> char {
        match self {
            Verdict::Ft => 'Y',
            Verdict::NotFt => 'N',
            Verdict::Skipped => 'S',
        }
    }

    pub fn from_char(ch: char) -> Result<Verdict> {
        match ch {
            'Y' => Ok(Verdict::Ft),
            'N' => Ok(Verdict::NotFt),
            'S' => Ok(Verdict::Skipped),
            other => Err(Error::Parse(format!("unknown verdict {other:?}"))),
        }
    }
}

/// One resolved `(t, reps)` cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridCell {
    pub t: usize,
    pub reps: usize,
    pub verdict: Verdict,
}

/// Decide one cell: stack the sorted order-`t` check matrix for weight `w`
/// `reps` times, unfold it over an all-X stabilizer, and test whether any
/// correction table passes. Budget overruns become `Skipped`.
pub fn grid_cell(w: usize, t: usize, reps: usize, budget: u64) -> Result<Verdict> {
    let h = sort_desc(&bch_check(w, t)?)?;
    let gadget = stack(&h, reps);
    let circuit = unfold(&gadget, &Stabilizer::all_x(w), FlipOrder::TopDown)?;
    match decodable_with_rule(&circuit, t, budget, CorrectionRule::Unrestricted, false) {
        Ok((true, _)) => Ok(Verdict::Ft),
        Ok((false, _)) => Ok(Verdict::NotFt),
        Err(Error::ResourceLimit { .. }) => Ok(Verdict::Skipped),
        Err(e) => Err(e),
    }
}

/// Scan all cells with `t` in `1..=t_max` and `reps` in `2..=r_max`, in that
/// order. `lookup` may serve a cell from a checkpoint; a `Some` return is
/// trusted as-is and skips the computation. `progress` fires once per freshly
/// computed cell, so a caller can persist results as they land.
pub fn min_reps_grid(
    w: usize,
    t_max: usize,
    r_max: usize,
    budget: u64,
    mut lookup: impl FnMut(usize, usize) -> Option<Verdict>,
    mut progress: impl FnMut(&GridCell),
) -> Result<Vec<GridCell>> {
    if t_max == 0 || r_max < 2 {
        return Err(Error::InvalidArgument(
            "grid needs t_max >= 1 and r_max >= 2".into(),
        ));
    }
    let mut cells = Vec::with_capacity(t_max * (r_max - 1));
    for t in 1..=t_max {
        for reps in 2..=r_max {
            let verdict = match lookup(t, reps) {
                Some(v) => v,
                None => {
                    let v = grid_cell(w, t, reps, budget)?;
                    let cell = GridCell { t, reps, verdict: v };
                    progress(&cell);
                    v
                }
            };
            cells.push(GridCell { t, reps, verdict });
        }
    }
    Ok(cells)
}

/// Render the grid as one line per `t` value, verdict letters in `reps`
/// order, e.g. `t=2: N Y Y Y`.
pub fn grid_to_text(cells: &[GridCell]) -> String {
    let mut out = String::new();
    let mut row_t = None;
    for cell in cells {
        if row_t != Some(cell.t) {
            if row_t.is_some() {
                out.push('\n');
            }
            out.push_str(&format!("t={}:", cell.t));
            row_t = Some(cell.t);
        }
        out.push(' ');
        out.push(cell.verdict.to_char());
    }
    if !cells.is_empty() {
        out.push('\n');
    }
    out
}

/// One checkpoint line per cell: `t reps verdict-letter`.
pub fn checkpoint_line(cell: &GridCell) -> String {
    format!("{} {} {}", cell.t, cell.reps, cell.verdict.to_char())
}

/// Parse checkpoint lines written by `checkpoint_line`. Blank lines and
/// `#` comments are ignored.
pub fn parse_checkpoint(s: &str) -> Result<Vec<GridCell>> {
    let mut cells = Vec::new();
    for line in s.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(t), Some(reps), Some(v), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::Parse(format!("bad checkpoint line {line:?}")));
        };
        let t: usize = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad t in {line:?}")))?;
        let reps: usize = reps
            .parse()
            .map_err(|_| Error::Parse(format!("bad reps in {line:?}")))?;
        let mut chars = v.chars();
        let (Some(ch), None) = (chars.next(), chars.next()) else {
            return Err(Error::Parse(format!("bad verdict in {line:?}")));
        };
        cells.push(GridCell {
            t,
            reps,
            verdict: Verdict::from_char(ch)?,
        });
    }
    Ok(cells)
}

/// Search every layout of `w` data CNOTs and `slots - w` flag CNOTs spread
/// over `flags` flag qubits on a row of `slots` CNOT slots, and return the
/// first layout (with its witnessing correction table) whose fault sets of
/// size up to `t` are all correctable.
///
/// Layouts that only relabel flag rows are collapsed by requiring the rows'
/// first CNOT positions to be strictly increasing, with empty rows last.
/// `budget` caps both the number of layouts examined and the fault sets
/// enumerated per layout; when the layout space exceeds it, `budget` layouts
/// are sampled (with replacement) from a stream seeded with `seed`.
pub fn search_small(
    w: usize,
    t: usize,
    flags: usize,
    slots: usize,
    seed: u64,
    budget: u64,
) -> Result<Option<(FlagCircuit, CorrectionTable)>> {
    if w == 0 || slots < w {
        return Err(Error::InvalidArgument(
            "search needs 1 <= w <= slots".into(),
        ));
    }
    let data_choices = binomial(slots as u64, w as u64);
    let assignments = (flags as u128)
        .checked_pow((slots - w) as u32)
        .ok_or_else(|| Error::InvalidArgument("layout space overflows".into()))?;
    let total = data_choices
        .checked_mul(assignments)
        .ok_or_else(|| Error::InvalidArgument("layout space overflows".into()))?;
    if total == 0 {
        return Ok(None);
    }

    let try_index = |index: u128| -> Result<Option<(FlagCircuit, CorrectionTable)>> {
        let Some(circuit) = layout_at(w, flags, slots, assignments, index) else {
            return Ok(None);
        };
        let (ok, table) =
            decodable_with_rule(&circuit, t, budget, CorrectionRule::Unrestricted, true)?;
        if ok {
            Ok(Some((circuit, table.expect("table requested"))))
        } else {
            Ok(None)
        }
    };

    if total <= budget as u128 {
        for index in 0..total {
            if let Some(hit) = try_index(index)? {
                return Ok(Some(hit));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..budget {
            if let Some(hit) = try_index(uniform_below(&mut rng, total))? {
                return Ok(Some(hit));
            }
        }
    }
    Ok(None)
}

/// Decode a layout index into a circuit, or `None` when the index is not the
/// canonical representative of its flag-relabeling class.
fn layout_at(
    w: usize,
    flags: usize,
    slots: usize,
    assignments: u128,
    index: u128,
) -> Option<FlagCircuit> {
    let data_rank = index / assignments;
    let mut assign = index % assignments;

    let mut data_cols = Vec::with_capacity(w);
    unrank_lex(slots, w, data_rank, &mut data_cols);

    let mut row_of_col = vec![usize::MAX; slots];
    let mut iter = data_cols.iter().peekable();
    for col in 0..slots {
        if iter.peek() == Some(&&col) {
            iter.next();
            row_of_col[col] = flags; // data row sits below the flag rows
        } else {
            row_of_col[col] = (assign % flags as u128) as usize;
            assign /= flags as u128;
        }
    }

    // Canonical class representative: rows ordered by first CNOT position,
    // flagless rows trailing.
    let mut first = vec![None; flags];
    for col in (0..slots).rev() {
        if row_of_col[col] < flags {
            first[row_of_col[col]] = Some(col);
        }
    }
    for pair in first.windows(2) {
        match (pair[0], pair[1]) {
            (Some(a), Some(b)) if a >= b => return None,
            (None, Some(_)) => return None,
            _ => {}
        }
    }

    let mut c = BitMatrix::zeros(flags + 1, slots);
    let mut gaps = Vec::with_capacity(w);
    for col in 0..slots {
        c.set(row_of_col[col], col, true);
        if row_of_col[col] == flags {
            gaps.push(DataGap {
                gap: col,
                qubit: gaps.len(),
                pauli: Pauli::X,
            });
        }
    }
    Some(FlagCircuit::new(c, gaps, Stabilizer::all_x(w)).expect("columns are weight one"))
}

/// Uniform draw from `0..bound` by rejection on 128-bit words.
fn uniform_below(rng: &mut ChaCha8Rng, bound: u128) -> u128 {
    debug_assert!(bound > 0);
    let zone = u128::MAX - (u128::MAX % bound);
    loop {
        let wide = ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128;
        if wide < zone {
            return wide % bound;
        }
    }
}
