//! Random Clifford+T circuits and the comparison of optimisation methods.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{circuit_to_diagram, gate_stats, Circuit, Gate, GateStats};
use crate::extract::{extract_circuit, ExtractError};
use crate::gslc::{extract_gslc_normal_form, GsLcError};
use crate::peephole::peephole_optimize;
use crate::rules::to_graph_like;
use crate::semantics::{circuits_equal, SemanticsError};
use crate::simplify::{clifford_simp, interior_spider_count, SimpLog};

/// Largest width at which benchmark results are checked against the oracle.
pub const VERIFY_MAX_QUBITS: usize = 6;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    NormalForm(#[from] GsLcError),
    #[error(transparent)]
    Oracle(#[from] SemanticsError),
    #[error("{method} changed the semantics of the circuit for p_t={p_t}, seed={seed}")]
    Mismatch { method: Method, p_t: f64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Original,
    OriginalPlus,
    Naive,
    Full,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Original, Method::OriginalPlus, Method::Naive, Method::Full];

    pub fn apply(self, c: &Circuit) -> Result<Circuit, BenchError> {
        match self {
            Method::Original => Ok(c.clone()),
            Method::OriginalPlus => Ok(peephole_optimize(c)),
            Method::Naive => naive_optimize(c),
            Method::Full => Ok(full_optimize(c)?.0),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Original => "original",
            Method::OriginalPlus => "original_plus",
            Method::Naive => "naive",
            Method::Full => "full",
        })
    }
}

impl FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Method, BenchError> {
        Method::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub qubits: usize,
    pub gate_count: usize,
    pub p_cnot: f64,
    pub p_t: Vec<f64>,
    pub seeds: Vec<u64>,
    pub methods: Vec<Method>,
}

impl Default for BenchConfig {
    fn default() -> BenchConfig {
        BenchConfig {
            qubits: 8,
            gate_count: 800,
            p_cnot: 0.3,
            p_t: vec![0.0, 0.05, 0.1, 0.15],
            seeds: (0..20).collect(),
            methods: Method::ALL.to_vec(),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.qubits < 2 {
            return Err(BenchError::Config("at least two qubits are needed".into()));
        }
        for &p in std::iter::once(&self.p_cnot).chain(&self.p_t) {
            if !(0.0..=1.0).contains(&p) {
                return Err(BenchError::Config(format!("probability {p} outside [0, 1]")));
            }
        }
        if let Some(p) = self.p_t.iter().find(|&&p| p + self.p_cnot > 1.0) {
            return Err(BenchError::Config(format!("p_cnot + p_t = {} exceeds 1", p + self.p_cnot)));
        }
        Ok(())
    }
}

/// A random circuit: CNOT on a uniform ordered pair with probability
/// `p_cnot`, T with probability `p_t`, and otherwise one of H, S, CZ
/// uniformly. Needs at least two qubits.
pub fn random_circuit_with(rng: &mut impl Rng, qubits: usize, gates: usize, p_cnot: f64, p_t: f64) -> Circuit {
    let mut c = Circuit::new(qubits);
    let pair = |rng: &mut _| {
        let a = Rng::gen_range(rng, 0..qubits);
        let b = (a + Rng::gen_range(rng, 1..qubits)) % qubits;
        (a, b)
    };
    for _ in 0..gates {
        let r: f64 = rng.gen();
        let g = if r < p_cnot {
            let (a, b) = pair(rng);
            Gate::cnot(a, b)
        } else if r < p_cnot + p_t {
            Gate::t(rng.gen_range(0..qubits))
        } else {
            match rng.gen_range(0..3) {
                0 => Gate::H(rng.gen_range(0..qubits)),
                1 => Gate::s(rng.gen_range(0..qubits)),
                _ => {
                    let (a, b) = pair(rng);
                    Gate::Cz(a, b)
                }
            }
        };
        c.push(g).expect("qubits in range");
    }
    c
}

pub fn random_circuit(cfg: &BenchConfig, p_t: f64, seed: u64) -> Result<Circuit, BenchError> {
    let single = BenchConfig { p_t: vec![p_t], ..cfg.clone() };
    single.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_circuit_with(&mut rng, cfg.qubits, cfg.gate_count, cfg.p_cnot, p_t))
}

/// Simplifies the whole circuit as one diagram, extracts it and cleans the
/// result up with the peephole pass. A diagram left without interior
/// spiders is extracted through the layered Clifford normal form.
pub fn full_optimize(c: &Circuit) -> Result<(Circuit, SimpLog), ExtractError> {
    let mut d = circuit_to_diagram(c);
    to_graph_like(&mut d);
    let log = clifford_simp(&mut d);
    let out = match interior_spider_count(&d) {
        0 => match extract_gslc_normal_form(&d) {
            Ok(lc) => lc.to_circuit(),
            Err(_) => extract_circuit(&d)?,
        },
        _ => extract_circuit(&d)?,
    };
    Ok((peephole_optimize(&out), log))
}

/// As [`full_optimize`] but always through the general extraction.
pub fn full_optimize_general(c: &Circuit) -> Result<Circuit, ExtractError> {
    let mut d = circuit_to_diagram(c);
    to_graph_like(&mut d);
    clifford_simp(&mut d);
    Ok(peephole_optimize(&extract_circuit(&d)?))
}

/// The Clifford normal form of a Clifford circuit.
pub fn clifford_normal_form(c: &Circuit) -> Result<Circuit, GsLcError> {
    let mut d = circuit_to_diagram(c);
    to_graph_like(&mut d);
    clifford_simp(&mut d);
    Ok(extract_gslc_normal_form(&d)?.to_circuit())
}

/// Replaces every maximal run of Clifford gates by its normal form and
/// leaves the non-Clifford gates in place.
pub fn naive_optimize(c: &Circuit) -> Result<Circuit, BenchError> {
    let n = c.qubit_count();
    let mut out = Circuit::new(n);
    let mut chunk = Vec::new();
    let flush = |chunk: &mut Vec<Gate>, out: &mut Circuit| -> Result<(), BenchError> {
        if !chunk.is_empty() {
            let nf = clifford_normal_form(&Circuit::from_gates(n, std::mem::take(chunk)).expect("same width"))?;
            out.append(&nf).expect("same width");
        }
        Ok(())
    };
    for &g in c.gates() {
        if g.is_clifford() {
            chunk.push(g);
        } else {
            flush(&mut chunk, &mut out)?;
            out.push(g).expect("same width");
        }
    }
    flush(&mut chunk, &mut out)?;
    Ok(peephole_optimize(&out))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub p_t: f64,
    pub method: Method,
    pub mean_total: f64,
    pub mean_two_qubit: f64,
    pub mean_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Whether every optimised circuit was compared with its original.
    pub verified: bool,
}

impl BenchReport {
    pub fn row(&self, p_t: f64, method: Method) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.p_t == p_t && r.method == method)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("p_t,method,mean_total,mean_two_qubit,mean_t\n");
        for r in &self.rows {
            writeln!(s, "{},{},{:.3},{:.3},{:.3}", r.p_t, r.method, r.mean_total, r.mean_two_qubit, r.mean_t).unwrap();
        }
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("{:>6}  {:<14} {:>10} {:>10} {:>8}\n", "p_t", "method", "total", "2-qubit", "T");
        for r in &self.rows {
            writeln!(
                s,
                "{:>6}  {:<14} {:>10.1} {:>10.1} {:>8.1}",
                r.p_t,
                r.method.to_string(),
                r.mean_total,
                r.mean_two_qubit,
                r.mean_t
            )
            .unwrap();
        }
        s
    }
}

fn one_run(cfg: &BenchConfig, p_t: f64, seed: u64, verify: bool) -> Result<Vec<GateStats>, BenchError> {
    let c = random_circuit(cfg, p_t, seed)?;
    cfg.methods
        .iter()
        .map(|&m| {
            let out = m.apply(&c)?;
            if verify && m != Method::Original && !circuits_equal(&c, &out, 1e-9)? {
                return Err(BenchError::Mismatch { method: m, p_t, seed });
            }
            Ok(gate_stats(&out))
        })
        .collect()
}

/// Runs every method on every `(p_t, seed)` circuit in parallel and
/// averages the gate counts. Results are checked against the oracle when
/// the width is at most [`VERIFY_MAX_QUBITS`].
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let verify = cfg.qubits <= VERIFY_MAX_QUBITS;
    let jobs: Vec<(f64, u64)> = cfg.p_t.iter().flat_map(|&p| cfg.seeds.iter().map(move |&s| (p, s))).collect();
    let results: Vec<Vec<GateStats>> =
        jobs.par_iter().map(|&(p, s)| one_run(cfg, p, s, verify)).collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for &p in &cfg.p_t {
        for (k, &m) in cfg.methods.iter().enumerate() {
            let stats: Vec<&GateStats> =
                jobs.iter().zip(&results).filter(|((jp, _), _)| *jp == p).map(|(_, r)| &r[k]).collect();
            let n = stats.len().max(1) as f64;
            let mean = |f: fn(&GateStats) -> usize| stats.iter().map(|s| f(s) as f64).sum::<f64>() / n;
            rows.push(BenchRow {
                p_t: p,
                method: m,
                mean_total: mean(|s| s.total),
                mean_two_qubit: mean(|s| s.two_qubit),
                mean_t: mean(|s| s.t_like),
            });
        }
    }
    Ok(BenchReport { rows, verified: verify })
}
