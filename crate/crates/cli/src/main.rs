//! Command-line front end: synthesize flag circuits, build and verify
//! correction tables, scan repetition grids, search small layouts, chain
//! code extractions, and report qubit costs.
//!
//! Exit codes: 0 success, 1 a fault-tolerance check failed, 2 usage or
//! input error, 3 a budget was exhausted before an answer was reached.

use clap::{Args, Parser, Subcommand, ValueEnum};
use flagforge::codes::{
    bch_check, bch_check_with_field, matrix_to_text, sort_desc, ParityCheck,
};
use flagforge::decode::{
    build_table_bruteforce, build_table_majority, decodable_with_rule, table_from_text,
    table_to_text, verify_ft, CorrectionRule,
};
use flagforge::galois::make_field_with_modulus;
use flagforge::gadget::{
    circuit_from_text, circuit_to_text, double_data, stack, unfold, FlagCircuit, FlipOrder,
    Stabilizer,
};
use flagforge::multi::{
    code_from_text, connect, five_qubit, nineteen_qubit, shor_nine, steane_seven, ChainMode,
    QuantumCode,
};
use flagforge::resources::{assess, report_kv, report_text, ResourceModel};
use flagforge::search::{
    checkpoint_line, grid_to_text, min_reps_grid, parse_checkpoint, search_small, GridCell,
    Verdict,
};
use flagforge::{with_jobs, Error};
use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "flagforge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a narrow-sense binary BCH parity-check matrix.
    Bch(BchArgs),
    /// Synthesize a flagged extraction circuit for one all-X stabilizer.
    Synth(SynthArgs),
    /// Check a circuit (and optionally a table) for fault tolerance.
    Verify(VerifyArgs),
    /// Build a correction table for a circuit.
    Table(TableArgs),
    /// Scan which repetition counts make each order fault tolerant.
    Grid(GridArgs),
    /// Enumerate small CNOT layouts for a fault-tolerant circuit.
    Search(SearchArgs),
    /// Chain all stabilizer rounds of a code into one flagged extraction.
    Connect(ConnectArgs),
    /// Compare qubit costs against cat-state extraction schemes.
    Resources(ResourcesArgs),
}

#[derive(Args)]
struct BchArgs {
    /// Code length (stabilizer weight).
    #[arg(long)]
    w: usize,
    /// Number of correctable faults.
    #[arg(long)]
    t: usize,
    /// Override the field modulus polynomial, as hex bits (e.g. 0x13).
    #[arg(long, value_parser = parse_hex)]
    field_poly: Option<u64>,
    /// Emit columns in descending order instead of the raw construction.
    #[arg(long)]
    sorted: bool,
    /// Write the matrix here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Stabilizer weight.
    #[arg(long)]
    w: usize,
    /// Number of correctable faults.
    #[arg(long)]
    t: usize,
    /// Stacking repetitions of the check matrix.
    #[arg(long)]
    reps: usize,
    /// Which end of each bracketed region flips first.
    #[arg(long, value_enum, default_value_t = FlipOrderArg::Formula)]
    flip_order: FlipOrderArg,
    /// Double every data CNOT, halving what a single fault can reach.
    #[arg(long)]
    double: bool,
    /// Write the circuit here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Circuit file produced by `synth`, `search`, or `connect`.
    #[arg(long)]
    circuit: PathBuf,
    /// Table file to verify; without it, test whether any table exists.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Number of correctable faults.
    #[arg(long)]
    t: usize,
    /// Where candidate corrections may sit when searching for a table.
    #[arg(long, value_enum, default_value_t = RuleArg::Unrestricted)]
    rule: RuleArg,
    /// Cap on enumerated fault sets.
    #[arg(long, default_value_t = 1 << 26)]
    budget: u64,
    /// Worker threads (default: one per CPU).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct TableArgs {
    /// Circuit file to decode for.
    #[arg(long)]
    circuit: PathBuf,
    /// Number of correctable faults.
    #[arg(long)]
    t: usize,
    /// Table construction to use.
    #[arg(long, value_enum, default_value_t = DecoderArg::Brute)]
    decoder: DecoderArg,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: one per CPU).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct GridArgs {
    /// Stabilizer weight.
    #[arg(long)]
    w: usize,
    /// Highest fault order to scan.
    #[arg(long)]
    t_max: usize,
    /// Highest repetition count to scan (cells run reps = 2..=r_max).
    #[arg(long)]
    r_max: usize,
    /// Per-cell cap on enumerated fault sets; beyond it a cell is skipped.
    #[arg(long, default_value_t = 1 << 26)]
    budget: u64,
    /// Resume from and append finished cells to this file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Worker threads (default: one per CPU).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    /// Stabilizer weight (number of data CNOTs).
    #[arg(long)]
    w: usize,
    /// Number of correctable faults.
    #[arg(long)]
    t: usize,
    /// Flag qubits available.
    #[arg(long)]
    flags: usize,
    /// Total CNOT columns to fill.
    #[arg(long)]
    slots: usize,
    /// Seed for the sampled phase when the layout space exceeds the budget.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on layouts examined and on fault sets per layout.
    #[arg(long, default_value_t = 1 << 20)]
    budget: u64,
    /// Write the found circuit here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the witnessing correction table here.
    #[arg(long)]
    table_out: Option<PathBuf>,
    /// Worker threads (default: one per CPU).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ConnectArgs {
    /// Code file, or one of: five, shor, steane, nineteen.
    #[arg(long)]
    code: String,
    /// Syndrome measurement rounds to fuse.
    #[arg(long)]
    rounds: usize,
    /// Stacking repetitions of the flag check matrix.
    #[arg(long)]
    reps: usize,
    /// Reuse one syndrome ancilla, or measure one per round and generator.
    #[arg(long, value_enum, default_value_t = ModeArg::Serial)]
    mode: ModeArg,
    /// Which end of each bracketed region flips first.
    #[arg(long, value_enum, default_value_t = FlipOrderArg::Formula)]
    flip_order: FlipOrderArg,
    /// Write the fused circuit here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ResourcesArgs {
    /// Code file, or one of: five, shor, steane, nineteen.
    #[arg(long)]
    code: String,
    /// Syndrome measurement rounds.
    #[arg(long)]
    rounds: usize,
    /// Stacking repetitions of the flag check matrix.
    #[arg(long)]
    reps: usize,
    /// Ancilla reset time, in CNOT durations.
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// Measurement time, in CNOT durations.
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// Human lines or machine key=value lines.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlipOrderArg {
    /// Regions flip top-down, matching the closed-form region matrix.
    Formula,
    /// Regions flip bottom-up.
    PaperFig5,
}

impl From<FlipOrderArg> for FlipOrder {
    fn from(a: FlipOrderArg) -> FlipOrder {
        match a {
            FlipOrderArg::Formula => FlipOrder::TopDown,
            FlipOrderArg::PaperFig5 => FlipOrder::BottomUp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    /// Corrections may use any data-CNOT suffix support.
    Unrestricted,
    /// Corrections may only cut between the CNOTs of a doubled pair.
    BetweenPairs,
}

impl From<RuleArg> for CorrectionRule {
    fn from(a: RuleArg) -> CorrectionRule {
        match a {
            RuleArg::Unrestricted => CorrectionRule::Unrestricted,
            RuleArg::BetweenPairs => CorrectionRule::BetweenPairs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    /// Exhaustive minimum-weight representative per flag pattern.
    Brute,
    /// Majority vote across stacked repetitions.
    Majority,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Serial,
    Parallel,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Kv,
}

fn parse_hex(s: &str) -> Result<u64, String> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|e| format!("bad hex value {s:?}: {e}"))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceLimit { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run() -> flagforge::Result<ExitCode> {
    match Cli::parse().command {
        Command::Bch(a) => cmd_bch(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Table(a) => cmd_table(a),
        Command::Grid(a) => cmd_grid(a),
        Command::Search(a) => cmd_search(a),
        Command::Connect(a) => cmd_connect(a),
        Command::Resources(a) => cmd_resources(a),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> flagforge::Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_file(path: &Path) -> flagforge::Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn load_circuit(path: &Path) -> flagforge::Result<FlagCircuit> {
    circuit_from_text(&read_file(path)?)
}

fn load_code(spec: &str) -> flagforge::Result<QuantumCode> {
    match spec {
        "five" => Ok(five_qubit()),
        "shor" => Ok(shor_nine()),
        "steane" => Ok(steane_seven()),
        "nineteen" => Ok(nineteen_qubit()),
        path => code_from_text(&read_file(Path::new(path))?),
    }
}

fn cmd_bch(a: BchArgs) -> flagforge::Result<ExitCode> {
    let h = match a.field_poly {
        Some(poly) => {
            let m = (a.w.max(2) as u64).next_power_of_two().trailing_zeros();
            bch_check_with_field(a.w, a.t, &make_field_with_modulus(m, poly)?)?
        }
        None => bch_check(a.w, a.t)?,
    };
    let h = if a.sorted { sort_desc(&h)? } else { h };
    emit(&a.out, &matrix_to_text(&h.h))?;
    Ok(ExitCode::SUCCESS)
}

fn synth_check(w: usize, t: usize) -> flagforge::Result<ParityCheck> {
    sort_desc(&bch_check(w, t)?)
}

fn cmd_synth(a: SynthArgs) -> flagforge::Result<ExitCode> {
    let h = synth_check(a.w, a.t)?;
    let gadget = stack(&h, a.reps);
    let mut circuit = unfold(&gadget, &Stabilizer::all_x(a.w), a.flip_order.into())?;
    if a.double {
        circuit = double_data(&circuit);
    }
    emit(&a.out, &circuit_to_text(&circuit))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> flagforge::Result<ExitCode> {
    let circuit = load_circuit(&a.circuit)?;
    with_jobs(a.jobs, || match &a.table {
        Some(table_path) => {
            let table = table_from_text(&read_file(table_path)?, &circuit)?;
            let verdict = verify_ft(&circuit, a.t, &table)?;
            if verdict.missing_patterns > 0 {
                println!("missing-patterns: {}", verdict.missing_patterns);
            }
            match verdict.counterexample {
                None => {
                    println!("fault-tolerant: yes");
                    Ok(ExitCode::SUCCESS)
                }
                Some(ce) => {
                    println!("fault-tolerant: no");
                    println!(
                        "counterexample: gaps={:?} flips={:?} residual-weight={}",
                        ce.fault.syndrome_gaps, ce.fault.flag_flips, ce.residual_weight
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }
        None => {
            let (ok, _) = decodable_with_rule(&circuit, a.t, a.budget, a.rule.into(), false)?;
            println!("decodable: {}", if ok { "yes" } else { "no" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    })
}

fn cmd_table(a: TableArgs) -> flagforge::Result<ExitCode> {
    let circuit = load_circuit(&a.circuit)?;
    let table = with_jobs(a.jobs, || match a.decoder {
        DecoderArg::Brute => build_table_bruteforce(&circuit, a.t),
        DecoderArg::Majority => {
            // Majority decoding needs the stacked check matrix the circuit
            // was synthesized from; rebuild it from the circuit's weight.
            let h = synth_check(circuit.w(), a.t)?;
            build_table_majority(&circuit, &h, a.t)
        }
    })?;
    emit(&a.out, &table_to_text(&table, &circuit))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_grid(a: GridArgs) -> flagforge::Result<ExitCode> {
    let mut done: HashMap<(usize, usize), Verdict> = HashMap::new();
    if let Some(path) = &a.checkpoint {
        if path.exists() {
            for cell in parse_checkpoint(&read_file(path)?)? {
                done.insert((cell.t, cell.reps), cell.verdict);
            }
        }
    }
    let mut log = match &a.checkpoint {
        Some(path) => Some(fs::OpenOptions::new().create(true).append(true).open(path)?),
        None => None,
    };
    let cells = with_jobs(a.jobs, || {
        min_reps_grid(
            a.w,
            a.t_max,
            a.r_max,
            a.budget,
            |t, r| done.get(&(t, r)).copied(),
            |cell: &GridCell| {
                // Skips are not persisted so a rerun with a bigger budget
                // retries them.
                if cell.verdict != Verdict::Skipped {
                    if let Some(f) = log.as_mut() {
                        let _ = writeln!(f, "{}", checkpoint_line(cell));
                        let _ = f.flush();
                    }
                }
            },
        )
    })?;
    print!("{}", grid_to_text(&cells));
    for cell in &cells {
        println!("cell: {}", checkpoint_line(cell));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(a: SearchArgs) -> flagforge::Result<ExitCode> {
    let found = with_jobs(a.jobs, || {
        search_small(a.w, a.t, a.flags, a.slots, a.seed, a.budget)
    })?;
    match found {
        Some((circuit, table)) => {
            println!(
                "found: slots={} flags={} table-entries={}",
                circuit.n(),
                circuit.f,
                table.entries.len()
            );
            emit(&a.out, &circuit_to_text(&circuit))?;
            if let Some(path) = &a.table_out {
                fs::write(path, table_to_text(&table, &circuit))?;
            }
        }
        None => println!("found: none"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_connect(a: ConnectArgs) -> flagforge::Result<ExitCode> {
    let code = load_code(&a.code)?;
    let mode = match a.mode {
        ModeArg::Serial => ChainMode::SerialChain,
        ModeArg::Parallel => ChainMode::ParallelAncilla,
    };
    let plan = connect(&code, a.rounds, a.reps, a.flip_order.into(), mode)?;
    println!(
        "code: n={} t={} generators={}",
        code.n,
        code.t,
        code.generators.len()
    );
    println!(
        "plan: rounds={} slots={} flags={} locations={} ancillas={}",
        plan.rounds,
        plan.slots.len(),
        plan.circuit.f,
        plan.circuit.l,
        plan.total_ancillas()
    );
    if let Some(path) = &a.out {
        fs::write(path, circuit_to_text(&plan.circuit))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_resources(a: ResourcesArgs) -> flagforge::Result<ExitCode> {
    let code = load_code(&a.code)?;
    if !(a.tau >= 0.0) || !(a.mu >= 0.0) {
        return Err(Error::InvalidArgument(
            "tau and mu must be non-negative".into(),
        ));
    }
    let model = ResourceModel { tau: a.tau, mu: a.mu };
    let report = assess(&code, a.rounds, a.reps, &model);
    let text = match a.format {
        FormatArg::Text => report_text(&report),
        FormatArg::Kv => report_kv(&report),
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}
