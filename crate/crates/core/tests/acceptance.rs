//! Whole-crate checks, one per numbered release gate. Each test is a gate:
//! the harness line per test is the pass/fail record. c05 documents a known
//! limitation of the doubled construction at three repetitions; see the
//! assertion message there.

use std::collections::HashMap;

use flagforge::codes::{bch_check, sort_desc, verify_distance, ParityCheck};
use flagforge::decode::{
    build_table_bruteforce, build_table_majority, decodable_with_rule, majority_decode,
    verify_ft, CorrectionRule, CorrectionTable, Decoder, TableEntry,
};
use flagforge::f2::{suffix_xor, xor, BitMatrix, BitVector};
use flagforge::faults::{enumerate_faults, propagate, FaultSet};
use flagforge::gadget::{
    double_data, stack, unfold, DataGap, FlagCircuit, FlipOrder, Pauli, Stabilizer,
};
use flagforge::galois::{gf_add, gf_mul, make_field};
use flagforge::multi::{connect, five_qubit, nineteen_qubit, run_round, shor_nine, steane_seven, ChainMode, PauliOp};
use flagforge::resources::{assess, flag_count, shor_estimate, steane_knill, ResourceModel};
use flagforge::search::{
    checkpoint_line, grid_to_text, min_reps_grid, parse_checkpoint, search_small, Verdict,
};

const BUDGET: u64 = 1 << 26;

fn synth(w: usize, t: usize, reps: usize) -> FlagCircuit {
    let h = sort_desc(&bch_check(w, t).unwrap()).unwrap();
    let g = stack(&h, reps);
    unfold(&g, &Stabilizer::all_x(w), FlipOrder::TopDown).unwrap()
}

fn admits_table(c: &FlagCircuit, t: usize, rule: CorrectionRule) -> bool {
    decodable_with_rule(c, t, BUDGET, rule, false).unwrap().0
}

#[test]
fn c01_check_matrix_rows_and_designed_distance() {
    for (w, t, rows) in [(13usize, 2usize, 8usize), (15, 2, 8), (15, 3, 12)] {
        let pc = bch_check(w, t).unwrap();
        assert_eq!(pc.h.rows(), rows, "w={w} t={t}");
        assert_eq!(pc.w, w);
        let d = 2 * t + 1;
        assert!(
            verify_distance(&pc, d, BUDGET).unwrap(),
            "w={w} t={t}: distance below {d}"
        );
    }
}

#[test]
fn c02_unfolding_reference_and_column_properties() {
    // Frozen reference: the two-column example unfolds bottom-up to this
    // exact region sequence.
    let h = ParityCheck::from_matrix(
        BitMatrix::from_columns(
            3,
            &[
                BitVector::from_bools(&[true, false, true]),
                BitVector::from_bools(&[false, true, true]),
            ],
        ),
        1,
    )
    .unwrap();
    let g = stack(&h, 1);
    let c = unfold(&g, &Stabilizer::all_x(2), FlipOrder::BottomUp).unwrap();
    let regions = flagforge::gadget::region_columns(&c);
    let seen: Vec<String> = (0..regions.cols())
        .map(|j| regions.col(j).to_bit_string())
        .collect();
    assert_eq!(seen, vec!["101", "111", "011", "010", "000"]);

    // Default order, every constructible sorted matrix at desk scale:
    // adjacent gap signatures differ in at most one position, the nonzero
    // span has no interior zero column, and no column straddles more than
    // one partial repetition block.
    let mut swept = 0usize;
    for w in 2..=15usize {
        for t in 1..=3usize {
            let h = match bch_check(w, t) {
                Ok(pc) => sort_desc(&pc).unwrap(),
                // small weights cannot host the higher-order matrices
                Err(_) => continue,
            };
            for r in 1..=5usize {
                let g = stack(&h, r);
                let c = match unfold(&g, &Stabilizer::all_x(w), FlipOrder::TopDown) {
                    Ok(c) => c,
                    Err(e) => panic!("w={w} t={t} r={r}: unfold failed: {e}"),
                };
                swept += 1;
                let cols: Vec<BitVector> = (0..c.l).map(|j| c.fc.col(j)).collect();
                for j in 1..c.l {
                    assert!(
                        xor(&cols[j - 1], &cols[j]).weight() <= 1,
                        "w={w} t={t} r={r}: gap {j} jumps"
                    );
                }
                let nz: Vec<usize> = (0..c.l).filter(|&j| !cols[j].is_zero()).collect();
                if let (Some(&first), Some(&last)) = (nz.first(), nz.last()) {
                    for j in first..=last {
                        assert!(!cols[j].is_zero(), "w={w} t={t} r={r}: zero column at {j}");
                    }
                }
                for (j, col) in cols.iter().enumerate() {
                    assert!(
                        g.partial_blocks(col) <= 1,
                        "w={w} t={t} r={r}: column {j} splits two blocks"
                    );
                }
            }
        }
    }
    assert!(swept >= 150, "sweep shrank to {swept} circuits");
}

#[test]
fn c03_weight_15_repetition_grid_with_checkpoint_replay() {
    let mut log: Vec<String> = Vec::new();
    let cells = min_reps_grid(15, 3, 5, BUDGET, |_, _| None, |cell| {
        log.push(checkpoint_line(cell));
    })
    .unwrap();
    assert_eq!(
        grid_to_text(&cells),
        "t=1: Y Y Y Y\nt=2: N Y Y Y\nt=3: N N N Y\n"
    );
    assert_eq!(log.len(), 12, "every cell is checkpointed");

    // Replaying from the checkpoint must not recompute anything.
    let saved = parse_checkpoint(&log.join("\n")).unwrap();
    let lookup: HashMap<(usize, usize), Verdict> = saved
        .iter()
        .map(|c| ((c.t, c.reps), c.verdict))
        .collect();
    let replayed = min_reps_grid(
        15,
        3,
        5,
        BUDGET,
        |t, reps| lookup.get(&(t, reps)).copied(),
        |cell| panic!("cell t={} reps={} recomputed", cell.t, cell.reps),
    )
    .unwrap();
    assert_eq!(cells, replayed);
}

#[test]
fn c04_known_two_flag_gadget_and_search_rediscovery() {
    // The published 10-column, 2-flag layout for a weight-5 stabilizer.
    let mut c = BitMatrix::zeros(3, 10);
    for col in [4usize, 9] {
        c.set(0, col, true);
    }
    for col in [0usize, 2, 7] {
        c.set(1, col, true);
    }
    let mut gaps = Vec::new();
    for (qubit, col) in [1usize, 3, 5, 6, 8].into_iter().enumerate() {
        c.set(2, col, true);
        gaps.push(DataGap {
            gap: col,
            qubit,
            pauli: Pauli::X,
        });
    }
    let circuit = FlagCircuit::new(c, gaps, Stabilizer::all_x(5)).unwrap();

    // Its four published corrections, keyed by flag pattern.
    let mut entries = HashMap::new();
    for (pattern, correction) in [
        ("00", vec![]),
        ("01", vec![0usize]),
        ("10", vec![]),
        ("11", vec![0, 1, 2]),
    ] {
        entries.insert(
            BitVector::from_bit_string(pattern).unwrap(),
            TableEntry {
                correction: BitVector::from_indices(5, &correction),
                rep_fault: None,
            },
        );
    }
    let table = CorrectionTable {
        t: 2,
        decoder: Decoder::Brute,
        entries,
    };
    let verdict = verify_ft(&circuit, 2, &table).unwrap();
    assert!(verdict.ok, "{:?}", verdict.counterexample);
    assert_eq!(verdict.missing_patterns, 0);

    // Search over the same shape finds a passing layout on its own.
    let found = search_small(5, 2, 2, 10, 0, 1 << 20).unwrap();
    let (found_circuit, found_table) = found.expect("a 2-flag layout exists in 10 slots");
    assert_eq!(found_circuit.w(), 5);
    assert_eq!(found_circuit.f, 2);
    assert!(verify_ft(&found_circuit, 2, &found_table).unwrap().ok);
}

#[test]
fn c05_weight_13_circuit_and_its_doubled_form() {
    let base = synth(13, 2, 3);
    assert!(
        admits_table(&base, 2, CorrectionRule::Unrestricted),
        "w=13 r=3 admits no table at t=2"
    );

    let doubled = double_data(&base);
    assert_eq!(doubled.w(), 26);
    // 24 flag qubits plus the one syndrome qubit
    assert_eq!(doubled.f + 1, 25);
    assert!(
        admits_table(&doubled, 2, CorrectionRule::Unrestricted),
        "doubled circuit admits no unrestricted table at t=2"
    );

    // In the guaranteed regime (2t+1 repetitions) the pair-restricted rule
    // holds for the doubled circuit.
    let doubled_full = double_data(&synth(13, 2, 5));
    assert!(
        admits_table(&doubled_full, 2, CorrectionRule::BetweenPairs),
        "doubled circuit at 2t+1 repetitions rejects the pair rule"
    );

    // Dual-configuration report for the three-repetition cell. Sorting with
    // the opposite bit significance (first row most significant) makes this
    // very cell pass the pair rule, but that order breaks the weight-15 grid
    // of c03 at t=1, r=2, so it cannot be the default.
    let flipped = {
        let pc = bch_check(13, 2).unwrap();
        let mut cols: Vec<BitVector> = (0..pc.w).map(|j| pc.h.col(j)).collect();
        let rows = pc.h.rows();
        let val =
            |c: &BitVector| (0..rows).fold(0u64, |acc, i| (acc << 1) | c.get(i) as u64);
        cols.sort_by(|a, b| val(b).cmp(&val(a)));
        ParityCheck::from_matrix(BitMatrix::from_columns(rows, &cols), 5).unwrap()
    };
    let alt = unfold(
        &stack(&flipped, 3),
        &Stabilizer::all_x(13),
        FlipOrder::TopDown,
    )
    .unwrap();
    assert!(
        admits_table(&double_data(&alt), 2, CorrectionRule::BetweenPairs),
        "the opposite-significance order no longer passes the pair rule at r=3"
    );

    assert!(
        admits_table(&doubled, 2, CorrectionRule::BetweenPairs),
        "KNOWN LIMITATION: at three repetitions (below the guaranteed 2t+1) the \
         doubled weight-26 circuit admits no pair-boundary-restricted table under \
         the default column order, which is the order that reproduces the \
         weight-15 repetition grid (c03) exactly. Flag-flip faults merge five \
         fault classes into one pattern whose only common corrections need a cut \
         between pairs. The opposite bit-significance order passes this cell but \
         flips the weight-15 grid at t=1, r=2 from Y to N, so no single order \
         satisfies both checks; the default keeps c03 and this clause records \
         the trade. Unrestricted corrections for this circuit do exist (asserted \
         above), as does the pair rule at five repetitions."
    );
}

#[test]
fn c06_closed_form_ancilla_counts() {
    // minimal repetitions
    assert_eq!(flag_count(1, 4, 16, 3), 18);
    assert_eq!(flag_count(1, 4, 24, 3), 21);
    assert_eq!(flag_count(2, 9, 84, 5), 100);
    // square-law repetitions
    assert_eq!(flag_count(1, 4, 16, 4), 24);
    assert_eq!(flag_count(1, 4, 24, 4), 28);
    assert_eq!(flag_count(2, 9, 84, 9), 180);
    // verified-ancilla schemes
    assert_eq!(steane_knill(5, 4), (20, 40));
    assert_eq!(steane_knill(7, 6), (42, 84));
    assert_eq!(steane_knill(19, 18), (342, 684));
}

#[test]
fn c07_cat_state_estimate_limits_and_direction() {
    let inf = ResourceModel {
        tau: f64::INFINITY,
        mu: 0.0,
    };
    assert_eq!(shor_estimate(&five_qubit(), 4, &inf).qubits, 64);
    assert_eq!(shor_estimate(&steane_seven(), 4, &inf).qubits, 96);
    assert_eq!(shor_estimate(&nineteen_qubit(), 9, &inf).qubits, 756);

    let zero = ResourceModel { tau: 0.0, mu: 0.0 };
    assert_eq!(shor_estimate(&five_qubit(), 4, &zero).qubits, 4);
    assert_eq!(shor_estimate(&steane_seven(), 4, &zero).qubits, 4);
    assert_eq!(shor_estimate(&shor_nine(), 4, &zero).qubits, 6);

    // Monotone in both times over a sampled grid.
    let samples = [0.0, 1.0, 5.0, 12.3, 38.5, 100.0];
    for code in [five_qubit(), steane_seven(), shor_nine()] {
        for window in samples.windows(2) {
            let (lo, hi) = (window[0], window[1]);
            for mu in samples {
                let a = shor_estimate(&code, 4, &ResourceModel { tau: lo, mu });
                let b = shor_estimate(&code, 4, &ResourceModel { tau: hi, mu });
                assert!(b.qubits >= a.qubits, "tau {lo}->{hi} mu={mu}");
                let c = shor_estimate(&code, 4, &ResourceModel { tau: mu, mu: lo });
                let d = shor_estimate(&code, 4, &ResourceModel { tau: mu, mu: hi });
                assert!(d.duration >= c.duration, "mu {lo}->{hi} tau={mu}");
            }
        }
    }

    // At the reference hardware point (reset 160 ns, measurement 500 ns,
    // CNOT 13 ns) the flag construction beats the cat-state pool for the
    // nine-qubit code's wide generators and loses for the seven-qubit code.
    let hw = ResourceModel {
        tau: 160.0 / 13.0,
        mu: 500.0 / 13.0,
    };
    let nine = assess(&shor_nine(), 4, 3, &hw);
    assert!(nine.flag_total < nine.shor.qubits, "{nine:?}");
    let seven = assess(&steane_seven(), 4, 3, &hw);
    assert!(seven.flag_total > seven.shor.qubits, "{seven:?}");
}

#[test]
fn c08_majority_decoding_cross_validation() {
    let t = 1usize;
    let reps = (t + 1) * (t + 1);
    let h = sort_desc(&bch_check(15, t).unwrap()).unwrap();
    let g = stack(&h, reps);
    let c = unfold(&g, &Stabilizer::all_x(15), FlipOrder::TopDown).unwrap();
    let w = c.w();

    // Every pattern a single fault can raise decodes within the residual
    // bound through the per-block vote.
    for fs in enumerate_faults(&c, t) {
        let eff = propagate(&c, &fs);
        let corr = majority_decode(&c, &h, t, &eff.pattern).unwrap();
        let residual = xor(&eff.data, &corr).weight();
        assert!(
            residual.min(w - residual) <= fs.size(),
            "fault {fs:?} leaves residual {residual}"
        );
    }

    // Both table constructions pass full verification on their own.
    let brute = build_table_bruteforce(&c, t).unwrap();
    assert!(verify_ft(&c, t, &brute).unwrap().ok);
    let majority = build_table_majority(&c, &h, t).unwrap();
    assert!(verify_ft(&c, t, &majority).unwrap().ok);
}

#[test]
fn c09_connected_extraction_single_fault_injection() {
    let code = five_qubit();
    let plan = connect(&code, 4, 3, FlipOrder::TopDown, ChainMode::SerialChain).unwrap();
    let (ok, table) =
        decodable_with_rule(&plan.circuit, 1, BUDGET, CorrectionRule::Unrestricted, true)
            .unwrap();
    assert!(ok, "connected circuit is not decodable at t=1");
    let table = table.unwrap();
    let decode = code.decode_table();
    let idle = PauliOp::identity(5);

    // Every syndrome-qubit gap, including the inter-round connections.
    for g in 0..plan.circuit.l {
        let fs = FaultSet::new(vec![g], vec![]);
        let out = run_round(&code, &plan, &table, &decode, &fs, &idle).unwrap();
        let weight = code.coset_weight(&out.residual).unwrap();
        assert!(weight <= 1, "gap {g}: residual coset weight {weight}");
    }
    // Every flag qubit.
    for j in 0..plan.circuit.f {
        let fs = FaultSet::new(vec![], vec![j]);
        let out = run_round(&code, &plan, &table, &decode, &fs, &idle).unwrap();
        let weight = code.coset_weight(&out.residual).unwrap();
        assert!(weight <= 1, "flag {j}: residual coset weight {weight}");
    }
    // A clean run fully corrects any pre-existing single-qubit error.
    for q in 0..5 {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let mut e = PauliOp::identity(5);
            e.apply(q, p);
            let out =
                run_round(&code, &plan, &table, &decode, &FaultSet::empty(), &e).unwrap();
            assert_eq!(
                code.coset_weight(&out.residual).unwrap(),
                0,
                "q={q} {p:?} not corrected"
            );
        }
    }
}

#[test]
fn c10_supporting_property_bundle() {
    // Weight subadditivity and Hamming-distance triangle, exhaustive on 6
    // bits.
    for a in 0u64..64 {
        for b in 0u64..64 {
            let va = BitVector::from_u128(6, a as u128);
            let vb = BitVector::from_u128(6, b as u128);
            assert!(xor(&va, &vb).weight() <= va.weight() + vb.weight());
            for c in 0u64..64 {
                let ab = (a ^ b).count_ones();
                let bc = (b ^ c).count_ones();
                let ac = (a ^ c).count_ones();
                assert!(ac <= ab + bc);
            }
        }
    }

    // Suffix accumulation inverts by adjacent differences, exhaustive on 10
    // bits.
    for x in 0u64..1024 {
        let v = BitVector::from_u128(10, x as u128);
        let s = suffix_xor(&v);
        for i in 0..10 {
            let next = if i + 1 < 10 { s.get(i + 1) } else { false };
            assert_eq!(s.get(i) ^ next, v.get(i), "x={x} bit {i}");
        }
    }

    // Field axioms, exhaustive for every supported degree up to 4.
    for m in 1u32..=4 {
        let f = make_field(m).unwrap();
        let n = 1u64 << m;
        for a in 0..n {
            for b in 0..n {
                assert_eq!(gf_add(a, b), gf_add(b, a));
                assert_eq!(gf_mul(a, b, &f), gf_mul(b, a, &f));
                for c in 0..n {
                    assert_eq!(
                        gf_mul(a, gf_mul(b, c, &f), &f),
                        gf_mul(gf_mul(a, b, &f), c, &f)
                    );
                    assert_eq!(
                        gf_mul(a, gf_add(b, c), &f),
                        gf_add(gf_mul(a, b, &f), gf_mul(a, c, &f))
                    );
                }
            }
            assert_eq!(gf_mul(a, 1, &f), a);
            assert_eq!(gf_add(a, a), 0);
        }
        // Nonzero elements form a group: each has an inverse power.
        for a in 1..n {
            let mut inv = None;
            for b in 1..n {
                if gf_mul(a, b, &f) == 1 {
                    inv = Some(b);
                }
            }
            assert!(inv.is_some(), "m={m}: {a} has no inverse");
        }
    }

    // Stacking multiplies pairwise column distances by the repetition count.
    for (w, t) in [(7usize, 1usize), (8, 1), (13, 2)] {
        let h = sort_desc(&bch_check(w, t).unwrap()).unwrap();
        for r in 1..=4usize {
            let g = stack(&h, r);
            for i in 0..w {
                for j in (i + 1)..w {
                    let d = xor(&g.f.col(i), &g.f.col(j)).weight();
                    let base = xor(&h.h.col(i), &h.h.col(j)).weight();
                    assert_eq!(d, r * base, "w={w} r={r} cols {i},{j}");
                }
            }
        }
    }

    // With 2t+1 repetitions, fault sets raising the same pattern leave data
    // errors whose difference stays within their combined gap-fault count.
    for t in 1..=2usize {
        for w in (2 * t).max(2)..=8 {
            let h = match bch_check(w, t) {
                Ok(pc) => sort_desc(&pc).unwrap(),
                Err(_) => continue,
            };
            let g = stack(&h, 2 * t + 1);
            let c = match unfold(&g, &Stabilizer::all_x(w), FlipOrder::TopDown) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let mut classes: HashMap<u128, Vec<(usize, u64)>> = HashMap::new();
            for fs in enumerate_faults(&c, t) {
                let eff = propagate(&c, &fs);
                classes
                    .entry(eff.pattern.to_u128())
                    .or_default()
                    .push((fs.syndrome_gaps.len(), eff.data.to_u64()));
            }
            for members in classes.values() {
                for (i, &(ts_a, da)) in members.iter().enumerate() {
                    for &(ts_b, db) in &members[i + 1..] {
                        let diff = (da ^ db).count_ones() as usize;
                        let dist = diff.min(w - diff);
                        assert!(dist <= ts_a + ts_b, "w={w} t={t}: {dist} > {ts_a}+{ts_b}");
                    }
                }
            }
        }
    }
}
