use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use zxopt::bench::{clifford_normal_form, full_optimize, run_benchmark, BenchConfig, BenchError, Method, VERIFY_MAX_QUBITS};
use zxopt::circuit::{gate_stats, Circuit};
use zxopt::qasm::{emit_qasm, parse_qasm};
use zxopt::semantics::circuits_equal;

#[derive(Parser)]
#[command(name = "zxopt", version, about = "Optimise quantum circuits with the ZX-calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simplify a circuit and extract an equivalent, usually smaller one.
    Optimize {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Emit the layered Clifford normal form (Clifford circuits only).
        #[arg(long)]
        clifford_nf: bool,
        /// Write the simplification steps as JSON lines.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Check that two circuits agree up to global phase.
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print gate counts.
    Stats { input: PathBuf },
    /// Compare optimisation methods on random Clifford+T circuits.
    Bench {
        #[arg(long, default_value_t = 8)]
        qubits: usize,
        #[arg(long, default_value_t = 800)]
        gates: usize,
        #[arg(long, default_value_t = 0.3)]
        p_cnot: f64,
        #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1,0.15")]
        p_t: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, value_delimiter = ',', default_value = "original,original_plus,naive,full")]
        methods: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

enum Failure {
    Mismatch(String),
    Usage(String),
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_qasm(&text).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Optimize { input, output, clifford_nf, log } => {
            let c = read_circuit(&input)?;
            let out = if clifford_nf {
                if c.gates().iter().any(|g| !g.is_clifford()) {
                    return Err(Failure::Usage("--clifford-nf needs a Clifford circuit".into()));
                }
                if log.is_some() {
                    eprintln!("note: --log is ignored with --clifford-nf");
                }
                clifford_normal_form(&c).map_err(usage)?
            } else {
                let (out, steps) = full_optimize(&c).map_err(usage)?;
                if let Some(p) = &log {
                    write(p, &steps.to_jsonl())?;
                }
                out
            };
            if c.qubit_count() <= VERIFY_MAX_QUBITS {
                if !circuits_equal(&c, &out, 1e-9).map_err(usage)? {
                    return Err(Failure::Mismatch("optimised circuit differs from the input".into()));
                }
            } else {
                eprintln!("note: self-verification skipped above {VERIFY_MAX_QUBITS} qubits");
            }
            let (before, after) = (gate_stats(&c), gate_stats(&out));
            eprintln!(
                "gates {} -> {}, two-qubit {} -> {}, T {} -> {}",
                before.total, after.total, before.two_qubit, after.two_qubit, before.t_like, after.t_like
            );
            let text = emit_qasm(&out);
            match output {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Verify { a, b, tol } => {
            let (ca, cb) = (read_circuit(&a)?, read_circuit(&b)?);
            if ca.qubit_count() != cb.qubit_count() {
                return Err(Failure::Mismatch(format!(
                    "circuits act on {} and {} qubits",
                    ca.qubit_count(),
                    cb.qubit_count()
                )));
            }
            if !circuits_equal(&ca, &cb, tol).map_err(usage)? {
                return Err(Failure::Mismatch("circuits differ".into()));
            }
            println!("equal up to global phase");
        }
        Command::Stats { input } => {
            let c = read_circuit(&input)?;
            let s = gate_stats(&c);
            println!("qubits {}", c.qubit_count());
            println!("total {}", s.total);
            println!("two_qubit {}", s.two_qubit);
            println!("t {}", s.t_like);
            println!("h {}", s.h_count);
        }
        Command::Bench { qubits, gates, p_cnot, p_t, seeds, methods, csv } => {
            let methods = methods.iter().map(|m| m.parse()).collect::<Result<Vec<Method>, _>>().map_err(usage)?;
            let cfg = BenchConfig { qubits, gate_count: gates, p_cnot, p_t, seeds: (0..seeds).collect(), methods };
            let report = match run_benchmark(&cfg) {
                Ok(r) => r,
                Err(e @ BenchError::Mismatch { .. }) => return Err(Failure::Mismatch(e.to_string())),
                Err(e) => return Err(usage(e)),
            };
            if !report.verified {
                println!("note: oracle verification skipped above {VERIFY_MAX_QUBITS} qubits");
            }
            print!("{}", report.to_table());
            if let Some(p) = csv {
                write(&p, &report.to_csv())?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
