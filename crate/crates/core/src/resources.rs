//! Qubit-count estimates for one round of error correction, comparing
//! flagged connected extraction against cat-state style extraction.
//!
//! Times are in CNOT units. `tau` is the parallel qubit reset time and `mu`
//! the single-qubit measurement time. An ancilla blocks from its first
//! coupling until its couplings finish and it has been reset; measurement is
//! read out off the critical path, so `mu` extends the schedule length but
//! not the blocking window. Counting it as blocking too would only raise the
//! cat-state numbers, so the estimate below is a lower bound for them.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::codes::ceil_log2;
use crate::multi::QuantumCode;

/// Device timing relative to a unit CNOT.
#[derive(Clone, Copy, Debug)]
pub struct ResourceModel {
    /// Parallel reset time. `f64::INFINITY` models hardware that never
    /// reuses ancillas within a round.
    pub tau: f64,
    /// Measurement time.
    pub mu: f64,
}

/// Greedy ancilla count for cat-state extraction run as fast as possible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShorEstimate {
    /// Distinct ancilla qubits touched.
    pub qubits: usize,
    /// Time until the last measurement finishes.
    pub duration: f64,
}

/// Schedules `rounds` passes over the generators in declaration order, one
/// generator at a time, one CNOT per unit step. Each instance takes as many
/// fresh qubits as its generator's weight unless previously used qubits
/// have already been reset, reusing those first.
pub fn shor_estimate(code: &QuantumCode, rounds: usize, model: &ResourceModel) -> ShorEstimate {
    let weights: Vec<usize> = code.generators.iter().map(|g| g.w()).collect();
    let mut used = 0usize;
    let mut free = 0usize;
    // (release time, qubit count); release times are pushed in increasing
    // order because starts are cumulative
    let mut busy: VecDeque<(f64, usize)> = VecDeque::new();
    let mut start = 0usize;
    let mut duration = 0f64;
    for _ in 0..rounds {
        for &w in &weights {
            let now = start as f64;
            while busy.front().is_some_and(|&(at, _)| at <= now) {
                free += busy.pop_front().expect("checked front").1;
            }
            let reused = w.min(free);
            free -= reused;
            used += w - reused;
            busy.push_back((now + w as f64 + model.tau, w));
            duration = duration.max(now + w as f64 + model.mu);
            start += w;
        }
    }
    ShorEstimate {
        qubits: used,
        duration,
    }
}

/// Flag qubits for connected extraction: `reps` stacked copies of the t-error
/// check matrix over all `rounds * total_weight` coupling slots.
pub fn flag_count(t: usize, rounds: usize, total_weight: usize, reps: usize) -> usize {
    reps * t * ceil_log2(rounds * total_weight) as usize
}

/// Ancilla qubits for one full syndrome measurement with a verified logical
/// ancilla: one code block for the Steane style, two for the Knill style.
pub fn steane_knill(n: usize, num_syndromes: usize) -> (usize, usize) {
    (n * num_syndromes, 2 * n * num_syndromes)
}

/// Side-by-side ancilla requirements for one code.
#[derive(Clone, Debug)]
pub struct ResourceReport {
    pub n: usize,
    pub t: usize,
    pub rounds: usize,
    pub reps: usize,
    /// Summed generator weight of one round.
    pub total_weight: usize,
    pub flag_qubits: usize,
    /// Flags plus the one serially reused syndrome qubit.
    pub flag_total: usize,
    pub shor: ShorEstimate,
    pub steane_qubits: usize,
    pub knill_qubits: usize,
}

pub fn assess(
    code: &QuantumCode,
    rounds: usize,
    reps: usize,
    model: &ResourceModel,
) -> ResourceReport {
    let total_weight: usize = code.generators.iter().map(|g| g.w()).sum();
    let flag_qubits = flag_count(code.t, rounds, total_weight, reps);
    let (steane_qubits, knill_qubits) = steane_knill(code.n, code.generators.len());
    ResourceReport {
        n: code.n,
        t: code.t,
        rounds,
        reps,
        total_weight,
        flag_qubits,
        flag_total: flag_qubits + 1,
        shor: shor_estimate(code, rounds, model),
        steane_qubits,
        knill_qubits,
    }
}

pub fn report_text(r: &ResourceReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "code: n={} t={} ({} couplings per round, {} rounds)",
        r.n, r.t, r.total_weight, r.rounds
    )
    .unwrap();
    writeln!(
        out,
        "flagged: {} flag qubits + 1 syndrome qubit = {} ({} reps)",
        r.flag_qubits, r.flag_total, r.reps
    )
    .unwrap();
    writeln!(
        out,
        "cat-state: {} qubits, schedule length {:.3}",
        r.shor.qubits, r.shor.duration
    )
    .unwrap();
    writeln!(out, "steane: {} qubits", r.steane_qubits).unwrap();
    writeln!(out, "knill: {} qubits", r.knill_qubits).unwrap();
    out
}

pub fn report_kv(r: &ResourceReport) -> String {
    let mut out = String::new();
    writeln!(out, "n={}", r.n).unwrap();
    writeln!(out, "t={}", r.t).unwrap();
    writeln!(out, "rounds={}", r.rounds).unwrap();
    writeln!(out, "reps={}", r.reps).unwrap();
    writeln!(out, "total_weight={}", r.total_weight).unwrap();
    writeln!(out, "flag_qubits={}", r.flag_qubits).unwrap();
    writeln!(out, "flag_total={}", r.flag_total).unwrap();
    writeln!(out, "shor_qubits={}", r.shor.qubits).unwrap();
    writeln!(out, "shor_duration={}", r.shor.duration).unwrap();
    writeln!(out, "steane_qubits={}", r.steane_qubits).unwrap();
    writeln!(out, "knill_qubits={}", r.knill_qubits).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi::{five_qubit, nineteen_qubit, shor_nine, steane_seven};

    fn model(tau: f64, mu: f64) -> ResourceModel {
        ResourceModel { tau, mu }
    }

    #[test]
    fn unbounded_reset_needs_a_qubit_per_coupling() {
        let m = model(f64::INFINITY, 0.0);
        assert_eq!(shor_estimate(&five_qubit(), 4, &m).qubits, 64);
        assert_eq!(shor_estimate(&steane_seven(), 4, &m).qubits, 96);
        assert_eq!(shor_estimate(&nineteen_qubit(), 9, &m).qubits, 756);
    }

    #[test]
    fn instant_reset_needs_only_the_widest_generator() {
        let m = model(0.0, 0.0);
        assert_eq!(shor_estimate(&five_qubit(), 4, &m).qubits, 4);
        assert_eq!(shor_estimate(&steane_seven(), 4, &m).qubits, 4);
        assert_eq!(shor_estimate(&shor_nine(), 4, &m).qubits, 6);
        assert_eq!(shor_estimate(&nineteen_qubit(), 9, &m).qubits, 6);
    }

    #[test]
    fn qubit_count_is_monotone_in_reset_time() {
        let code = shor_nine();
        let taus = [0.0, 1.0, 5.0, 12.3, 38.5, 100.0, f64::INFINITY];
        let mut prev = 0;
        for tau in taus {
            let q = shor_estimate(&code, 4, &model(tau, 0.0)).qubits;
            assert!(q >= prev, "tau={tau}: {q} < {prev}");
            prev = q;
        }
        // mu does not block ancillas
        let base = shor_estimate(&code, 4, &model(12.3, 0.0)).qubits;
        let wide = shor_estimate(&code, 4, &model(12.3, 500.0)).qubits;
        assert_eq!(base, wide);
    }

    #[test]
    fn reference_pools_at_superconducting_times() {
        // 160 ns reset and 500 ns measurement against a 13 ns CNOT
        let m = model(160.0 / 13.0, 500.0 / 13.0);
        // weight-4 generators leave at most four instances in reset at once
        assert_eq!(shor_estimate(&steane_seven(), 4, &m).qubits, 20);
        // the weight-6 generators stall twice behind the reset window
        assert_eq!(shor_estimate(&shor_nine(), 4, &m).qubits, 24);
    }

    #[test]
    fn flagged_wins_exactly_where_generators_are_wide() {
        let m = model(160.0 / 13.0, 500.0 / 13.0);
        let flagged = |code: &crate::multi::QuantumCode| {
            let r = assess(code, 4, 3, &m);
            r.flag_total
        };
        // both codes need 21 flags + 1 syndrome qubit
        assert_eq!(flagged(&steane_seven()), 22);
        assert_eq!(flagged(&shor_nine()), 22);
        assert!(flagged(&shor_nine()) < shor_estimate(&shor_nine(), 4, &m).qubits);
        assert!(flagged(&steane_seven()) > shor_estimate(&steane_seven(), 4, &m).qubits);
    }

    #[test]
    fn flag_counts_for_reference_codes() {
        assert_eq!(flag_count(1, 4, 16, 3), 18);
        assert_eq!(flag_count(1, 4, 24, 3), 21);
        assert_eq!(flag_count(2, 9, 84, 5), 100);
        assert_eq!(flag_count(1, 4, 16, 4), 24);
        assert_eq!(flag_count(1, 4, 24, 4), 28);
        assert_eq!(flag_count(2, 9, 84, 9), 180);
    }

    #[test]
    fn steane_knill_reference_rows() {
        assert_eq!(steane_knill(5, 4), (20, 40));
        assert_eq!(steane_knill(7, 6), (42, 84));
        assert_eq!(steane_knill(19, 18), (342, 684));
    }

    #[test]
    fn duration_tracks_the_last_measurement() {
        let est = shor_estimate(&five_qubit(), 1, &model(0.0, 0.0));
        assert_eq!(est.duration, 16.0);
        let est = shor_estimate(&five_qubit(), 1, &model(0.0, 5.0));
        assert_eq!(est.duration, 21.0);
        // reset time does not extend the measured schedule
        let est = shor_estimate(&five_qubit(), 1, &model(100.0, 5.0));
        assert_eq!(est.duration, 21.0);
    }

    #[test]
    fn default_reps_fit_inside_the_round_budget() {
        for t in 1usize..=50 {
            assert!(2 * t + 1 <= (t + 1) * (t + 1));
        }
    }

    #[test]
    fn report_rendering() {
        let m = model(160.0 / 13.0, 500.0 / 13.0);
        let r = assess(&five_qubit(), 4, 3, &m);
        assert_eq!(r.total_weight, 16);
        assert_eq!(r.flag_qubits, 18);
        assert_eq!(r.flag_total, 19);
        assert_eq!((r.steane_qubits, r.knill_qubits), (20, 40));
        let text = report_text(&r);
        assert!(text.contains("18 flag qubits + 1 syndrome qubit = 19"));
        let kv = report_kv(&r);
        assert!(kv.contains("flag_total=19\n"));
        assert!(kv.contains("steane_qubits=20\n"));
        for line in kv.lines() {
            assert!(line.contains('='), "kv line {line:?}");
        }
    }
}
