//! Command-line interface: analyses, reports and experiments over
//! concurrent systems given as JSON documents.
//!
//! Exit codes: 0 success; 1 analysis findings that violate an operation's
//! preconditions (for example a non-probabilistic valuation passed to
//! `chain`); 2 input errors.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tracesys::chain::{sample_from_chain, ChainModel};
use tracesys::dcs::{bounded_lub_check, is_deterministic, maximal_execution};
use tracesys::error::Error;
use tracesys::heap::render_heap;
use tracesys::mobius::mobius_polynomial;
use tracesys::petri::PetriNet;
use tracesys::poly::Polynomial;
use tracesys::rat::format_rational;
use tracesys::report::full_report;
use tracesys::root::smallest_root;
use tracesys::system::ConcurrentSystem;
use tracesys::trace::Trace;
use tracesys::valuation::{
    mobius_of_valuation, probabilistic_violations, ProbabilisticValuation, Valuation,
};
use tracesys::IndependenceAlphabet;

#[derive(Parser)]
#[command(name = "tracesys", version, about = "Exact analysis of concurrent systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report: Möbius matrix, θ, root, irreducibility,
    /// determinism, boundary cardinalities, spectral table, theorem checks.
    Analyze {
        /// System JSON file, or `-` for stdin.
        input: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Characteristic/smallest root: accepts a polynomial ({"coeffs"}),
    /// an alphabet ({"letters"}, uses its Möbius polynomial), or a system
    /// ({"states"}, uses θ).
    Root {
        input: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Determinism verdict with witness, lattice cross-checks, and the
    /// maximal execution of every state when deterministic.
    CheckDcs {
        input: String,
        /// Depth of the bounded common-upper-bound check.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Validates a valuation and checks whether it is probabilistic;
    /// `--search` grid-searches for probabilistic valuations instead.
    ValuationCheck {
        input: String,
        /// Valuation JSON file, or `dominant`.
        #[arg(long, default_value = "dominant")]
        valuation: String,
        /// Search for probabilistic valuations over a rational grid.
        #[arg(long)]
        search: bool,
        /// Largest denominator of the search grid.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Seed for sampling the grid when it is too large to sweep.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The Markov chain of states-and-cliques of a probabilistic valuation.
    Chain {
        input: String,
        #[arg(long, default_value = "dominant")]
        valuation: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Samples the chain; emits one JSON line per step.
    Sample {
        input: String,
        #[arg(long, default_value = "dominant")]
        valuation: String,
        /// Starting state.
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerates executions from a state, grouped by terminal state, and
    /// cross-checks the counts against the growth-matrix recurrence.
    Enumerate {
        input: String,
        #[arg(long)]
        state: String,
        /// Maximum execution length.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Compiles a 1-safe net into a concurrent system (JSON on stdout,
    /// suitable for piping into `analyze -`).
    PetriImport { input: String },
    /// Renders a word over an alphabet as a heap of pieces.
    Heap {
        /// Alphabet JSON file, or `-` for stdin.
        input: String,
        /// The word, letters separated by spaces (clique bars `|` allowed).
        word: String,
    },
}

fn main() -> ExitCode {
    // die quietly when the downstream pipe closes, like other unix filters
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Findings that violate an operation's precondition exit with 1; malformed
/// or inconsistent input exits with 2.
fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Lib(
            Error::NotProbabilistic { .. }
            | Error::NotDeterministic { .. }
            | Error::DeadNode { .. }
            | Error::InvalidValuation(_),
        ) => 1,
        _ => 2,
    }
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

fn load_system(path: &str) -> Result<ConcurrentSystem, CliError> {
    Ok(ConcurrentSystem::from_json(&read_input(path)?)?)
}

fn load_valuation(sys: &ConcurrentSystem, spec: &str) -> Result<Valuation, CliError> {
    if spec == "dominant" {
        Ok(Valuation::dominant(sys))
    } else {
        Ok(Valuation::from_json(sys, &read_input(spec)?)?)
    }
}

fn emit(value: serde_json::Value, text: Option<String>, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializes")),
        Format::Text => match text {
            Some(t) => print!("{t}"),
            None => println!("{}", serde_json::to_string_pretty(&value).expect("serializes")),
        },
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { input, format } => {
            let sys = load_system(&input)?;
            let report = full_report(&sys)?;
            emit(report.to_json_value(&sys), Some(report.render_text(&sys)), format);
        }
        Command::Root { input, format } => {
            let doc = read_input(&input)?;
            let value: serde_json::Value = serde_json::from_str(&doc).map_err(Error::from)?;
            let (kind, poly) = if value.get("coeffs").is_some() {
                ("polynomial", Polynomial::from_json_value(&value)?)
            } else if value.get("states").is_some() {
                let sys = ConcurrentSystem::from_json_value(&value)?;
                ("system", tracesys::growth::theta(&sys))
            } else if value.get("letters").is_some() {
                let al = IndependenceAlphabet::from_json_value(&value)?;
                ("alphabet", mobius_polynomial(&al))
            } else {
                return Err(CliError::Io(
                    "expected a polynomial, alphabet or system document".into(),
                ));
            };
            let root = smallest_root(&poly)?;
            let out = serde_json::json!({
                "input_kind": kind,
                "polynomial": poly.to_json_value(),
                "root": root.to_json_value(),
            });
            let text = format!("polynomial: {poly}\nroot: {}\n", root.render());
            emit(out, Some(text), format);
        }
        Command::CheckDcs { input, depth, format } => {
            let sys = load_system(&input)?;
            let verdict = is_deterministic(&sys);
            let lattice: Vec<serde_json::Value> = sys
                .state_ids()
                .map(|s| match bounded_lub_check(&sys, s, depth) {
                    None => serde_json::json!({
                        "state": sys.state_name(s), "holds": true
                    }),
                    Some((x, y)) => serde_json::json!({
                        "state": sys.state_name(s), "holds": false,
                        "counterexample": [x.render(), y.render()],
                    }),
                })
                .collect();
            let maximal: Option<serde_json::Map<String, serde_json::Value>> =
                verdict.is_dcs.then(|| {
                    sys.state_ids()
                        .map(|s| {
                            let t = maximal_execution(&sys, s).expect("deterministic");
                            (sys.state_name(s).to_string(), serde_json::json!(t.render()))
                        })
                        .collect()
                });
            let witness = verdict.witness.map(|(s, a, b)| {
                serde_json::json!({
                    "state": sys.state_name(s),
                    "a": sys.alphabet().name(a),
                    "b": sys.alphabet().name(b),
                })
            });
            let out = serde_json::json!({
                "is_dcs": verdict.is_dcs,
                "witness": witness,
                "powerset_check": verdict.powerset_check,
                "bounded_lattice_check": lattice,
                "maximal_executions": maximal,
            });
            let mut text = format!("deterministic: {}\n", verdict.is_dcs);
            if let Some((s, a, b)) = verdict.witness {
                text += &format!(
                    "conflict: state {} letters {}, {}\n",
                    sys.state_name(s),
                    sys.alphabet().name(a),
                    sys.alphabet().name(b)
                );
            }
            if let Some(m) = &maximal {
                for (state, t) in m {
                    text += &format!("T({state}) = {}\n", t.as_str().unwrap());
                }
            }
            emit(out, Some(text), format);
        }
        Command::ValuationCheck { input, valuation, search, depth, seed, format } => {
            let sys = load_system(&input)?;
            if search {
                let found = grid_search(&sys, depth, seed);
                let out = serde_json::json!({
                    "grid_denominator": depth,
                    "found": found.iter().map(|v| v.to_json_value(&sys)).collect::<Vec<_>>(),
                });
                let text = format!(
                    "probabilistic valuations found: {}\n{}",
                    found.len(),
                    found
                        .iter()
                        .map(|v| v.to_json_value(&sys).to_string() + "\n")
                        .collect::<String>()
                );
                emit(out, Some(text), format);
                return Ok(());
            }
            let val = load_valuation(&sys, &valuation)?;
            let mobius = mobius_of_valuation(&sys, &val);
            let violations = probabilistic_violations(&sys, &mobius);
            let tables: serde_json::Map<String, serde_json::Value> = sys
                .state_ids()
                .map(|s| {
                    let row: serde_json::Map<String, serde_json::Value> = mobius
                        .table(s)
                        .iter()
                        .map(|(c, v)| {
                            (c.render(sys.alphabet()), serde_json::json!(format_rational(v)))
                        })
                        .collect();
                    (sys.state_name(s).to_string(), serde_json::Value::Object(row))
                })
                .collect();
            let out = serde_json::json!({
                "probabilistic": violations.is_empty(),
                "violations": violations
                    .iter()
                    .map(|v| serde_json::json!({
                        "state": sys.state_name(v.state),
                        "clique": v.clique.render(sys.alphabet()),
                        "value": format_rational(&v.value),
                    }))
                    .collect::<Vec<_>>(),
                "mobius_tables": tables,
            });
            let mut text = format!("probabilistic: {}\n", violations.is_empty());
            for v in &violations {
                text += &format!(
                    "violation: h[{}]({}) = {}\n",
                    sys.state_name(v.state),
                    v.clique.render(sys.alphabet()),
                    format_rational(&v.value)
                );
            }
            emit(out, Some(text), format);
        }
        Command::Chain { input, valuation, format } => {
            let sys = load_system(&input)?;
            let val = load_valuation(&sys, &valuation)?;
            let pv = ProbabilisticValuation::try_new(&sys, val)?;
            let chain = ChainModel::build(&sys, &pv);
            let node_json = |i: usize| {
                let n = &chain.nodes()[i];
                serde_json::json!({
                    "state": sys.state_name(n.state),
                    "clique": n.clique.iter().map(|l| sys.alphabet().name(l)).collect::<Vec<_>>(),
                })
            };
            let initial: serde_json::Map<String, serde_json::Value> = sys
                .state_ids()
                .map(|s| {
                    let dist: Vec<serde_json::Value> = chain
                        .initial(s)
                        .iter()
                        .map(|(i, w)| {
                            serde_json::json!({
                                "node": node_json(*i), "p": format_rational(w)
                            })
                        })
                        .collect();
                    (sys.state_name(s).to_string(), serde_json::json!(dist))
                })
                .collect();
            let rows: Vec<serde_json::Value> = (0..chain.nodes().len())
                .map(|i| {
                    let row = chain.row(i).map(|r| {
                        r.iter()
                            .map(|(j, w)| {
                                serde_json::json!({
                                    "node": node_json(*j), "p": format_rational(w)
                                })
                            })
                            .collect::<Vec<_>>()
                    });
                    serde_json::json!({ "from": node_json(i), "to": row })
                })
                .collect();
            let out = serde_json::json!({
                "nodes": (0..chain.nodes().len()).map(node_json).collect::<Vec<_>>(),
                "initial": initial,
                "transitions": rows,
                "dead_nodes": chain.dead_nodes().iter().map(|&i| node_json(i)).collect::<Vec<_>>(),
                "null_nodes": chain.null_nodes().iter().map(|&i| node_json(i)).collect::<Vec<_>>(),
                "kernel_identity_violations": chain
                    .identity_violations()
                    .iter()
                    .map(|&i| node_json(i))
                    .collect::<Vec<_>>(),
            });
            let mut text = String::new();
            for s in sys.state_ids() {
                text += &format!("initial from {}:\n", sys.state_name(s));
                for (i, w) in chain.initial(s) {
                    text += &format!("  {}: {}\n", chain.render_node(&sys, *i), format_rational(w));
                }
            }
            for i in 0..chain.nodes().len() {
                match chain.row(i) {
                    Some(row) => {
                        text += &format!("{} ->\n", chain.render_node(&sys, i));
                        for (j, w) in row {
                            text += &format!(
                                "  {}: {}\n",
                                chain.render_node(&sys, *j),
                                format_rational(w)
                            );
                        }
                    }
                    None => text += &format!("{} -> dead\n", chain.render_node(&sys, i)),
                }
            }
            let nulls: Vec<String> =
                chain.null_nodes().iter().map(|&i| chain.render_node(&sys, i)).collect();
            text += &format!("null nodes: {}\n", nulls.join(", "));
            emit(out, Some(text), format);
        }
        Command::Sample { input, valuation, state, steps, seed } => {
            let sys = load_system(&input)?;
            let val = load_valuation(&sys, &valuation)?;
            let pv = ProbabilisticValuation::try_new(&sys, val)?;
            let start = sys.state(&state)?;
            let chain = ChainModel::build(&sys, &pv);
            let run = sample_from_chain(&sys, &chain, start, steps, seed)?;
            for (i, (s, c)) in run.iter().enumerate() {
                let line = serde_json::json!({
                    "step": i + 1,
                    "state": sys.state_name(*s),
                    "clique": c.iter().map(|l| sys.alphabet().name(l)).collect::<Vec<_>>(),
                });
                println!("{line}");
            }
        }
        Command::Enumerate { input, state, depth, format } => {
            let sys = load_system(&input)?;
            let start = sys.state(&state)?;
            let growth = tracesys::growth::growth_matrix_coefficients(&sys, depth);
            let mut levels = Vec::new();
            let mut agree = true;
            let mut text = String::new();
            for n in 0..=depth {
                let execs = sys.executions_of_length(start, n);
                let mut by_target: std::collections::BTreeMap<String, Vec<String>> =
                    Default::default();
                for (t, end) in &execs {
                    by_target
                        .entry(sys.state_name(*end).to_string())
                        .or_default()
                        .push(t.render());
                }
                for target in sys.state_ids() {
                    let count =
                        by_target.get(sys.state_name(target)).map_or(0, |v| v.len());
                    if growth[n][start.index()][target.index()]
                        != num_bigint::BigInt::from(count)
                    {
                        agree = false;
                    }
                }
                text += &format!("length {n}: {} executions\n", execs.len());
                for (target, ts) in &by_target {
                    text += &format!("  -> {target}: {}\n", ts.join(", "));
                }
                levels.push(serde_json::json!({
                    "length": n,
                    "total": execs.len(),
                    "by_target": by_target,
                }));
            }
            text += &format!("growth-matrix agreement: {agree}\n");
            let out = serde_json::json!({
                "state": state,
                "depth": depth,
                "levels": levels,
                "growth_matrix_agrees": agree,
            });
            emit(out, Some(text), format);
        }
        Command::PetriImport { input } => {
            let net = PetriNet::from_json(&read_input(&input)?)?;
            let (sys, markings) = net.to_concurrent_system()?;
            let value = sys.to_json_value_with_markings(Some(markings));
            println!("{}", serde_json::to_string_pretty(&value).expect("serializes"));
        }
        Command::Heap { input, word } => {
            let al = IndependenceAlphabet::from_json(&read_input(&input)?)?;
            let trace = Trace::parse(al, &word)?;
            println!("normal form: {}", trace.render());
            let heap = render_heap(&trace);
            if !heap.is_empty() {
                println!("{heap}");
            }
        }
    }
    Ok(())
}

/// Sweeps valuations whose weights range over the fractions with bounded
/// denominator, reporting those that are probabilistic. When the sweep is
/// too large it samples grid points with the given seed. Not a completeness
/// claim.
fn grid_search(sys: &ConcurrentSystem, max_denominator: usize, seed: u64) -> Vec<Valuation> {
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeMap;

    let mut grid: Vec<BigRational> = Vec::new();
    for den in 1..=max_denominator.max(1) {
        for num in 0..=den {
            let v = BigRational::new((num as i64).into(), (den as i64).into());
            if !grid.contains(&v) {
                grid.push(v);
            }
        }
    }
    grid.sort();
    let slots: Vec<(tracesys::system::StateId, tracesys::Letter)> = sys
        .state_ids()
        .flat_map(|s| sys.enabled_letters(s).into_iter().map(move |l| (s, l)).collect::<Vec<_>>())
        .collect();
    let combos = (grid.len() as f64).powi(slots.len() as i32);
    let budget = 250_000f64;
    let mut found: Vec<Valuation> = Vec::new();
    let consider = |assignment: &[usize], found: &mut Vec<Valuation>| {
        let weights: BTreeMap<_, _> = slots
            .iter()
            .zip(assignment)
            .map(|(&(s, l), &gi)| ((s, l), grid[gi].clone()))
            .collect();
        if let Ok(val) = Valuation::new(sys, &weights) {
            if tracesys::valuation::is_probabilistic(sys, &val) && !found.contains(&val) {
                found.push(val);
            }
        }
    };
    if combos <= budget {
        let mut assignment = vec![0usize; slots.len()];
        loop {
            consider(&assignment, &mut found);
            if found.len() >= 50 {
                return found;
            }
            let mut k = 0;
            loop {
                if k == slots.len() {
                    return found;
                }
                assignment[k] += 1;
                if assignment[k] < grid.len() {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
        }
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..budget as usize {
            let assignment: Vec<usize> =
                (0..slots.len()).map(|_| rng.gen_range(0..grid.len())).collect();
            consider(&assignment, &mut found);
            if found.len() >= 50 {
                break;
            }
        }
        found
    }
}
