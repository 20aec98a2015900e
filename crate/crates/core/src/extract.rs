//! Circuit extraction from graph-like diagrams with a focused gFlow, by
//! moving a frontier of spiders from the outputs back to the inputs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::diagram::{EdgeKind, VertexData, VertexId, VertexKind, ZxDiagram};
use crate::f2::{gauss_jordan, permutation_to_swaps, F2Matrix, RowOpLog};
use crate::phase::Phase;
use crate::rules::is_graph_like;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("diagram is not graph-like: {0}")]
    NotGraphLike(String),
    #[error("{inputs} inputs but {outputs} outputs")]
    NotSquare { inputs: usize, outputs: usize },
    #[error("no frontier vertex can advance; stuck frontier {frontier:?}")]
    NonExtractable { frontier: Vec<VertexId> },
    #[error("row operation {0} -> {1} needs two distinct frontier qubits")]
    BadRowOperation(usize, usize),
    #[error("qubit {0} ends without reaching an input")]
    DanglingQubit(usize),
}

/// Frontier vertex per qubit. A qubit without an entry is a bare wire from an
/// input straight to its output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Frontier {
    pub slots: BTreeMap<usize, VertexId>,
}

impl Frontier {
    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.slots.values().copied().collect()
    }

    pub fn qubit_of(&self, v: VertexId) -> Option<usize> {
        self.slots.iter().find(|(_, &w)| w == v).map(|(&q, _)| q)
    }
}

/// Gates peeled off the output side, nearest the outputs first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extracted {
    pub qubits: usize,
    pub reversed: Vec<Gate>,
    /// CNOTs produced by row operations, as `(src row qubit, tgt row qubit)`.
    pub row_ops: Vec<(usize, usize)>,
}

impl Extracted {
    fn push(&mut self, g: Gate) {
        self.reversed.push(g);
    }
}

fn past_neighbours(d: &ZxDiagram, frontier: &BTreeSet<VertexId>, v: VertexId) -> Vec<VertexId> {
    d.neighbors(v).filter(|&n| d.kind(n).is_spider() && !frontier.contains(&n)).collect()
}

fn input_of(d: &ZxDiagram, v: VertexId) -> Option<VertexId> {
    d.neighbors(v).find(|n| d.inputs().contains(n))
}

/// Biadjacency of the given frontier qubits against `cols`.
pub fn biadjacency(d: &ZxDiagram, frontier: &Frontier, rows: &[usize], cols: &[VertexId]) -> F2Matrix {
    let mut m = F2Matrix::zeros(rows.len(), cols.len());
    for (i, q) in rows.iter().enumerate() {
        let v = frontier.slots[q];
        for (j, &c) in cols.iter().enumerate() {
            if d.connected(v, c) {
                m.set(i, j, true);
            }
        }
    }
    m
}

/// Adds the past neighbourhood of the frontier vertex on `src` to that of
/// `tgt` (mod 2) and records the CNOT, controlled on `tgt` and targeting
/// `src`, that compensates for it.
pub fn apply_row_operation(
    d: &mut ZxDiagram,
    frontier: &Frontier,
    src: usize,
    tgt: usize,
    out: &mut Extracted,
) -> Result<(), ExtractError> {
    let (Some(&a), Some(&b)) = (frontier.slots.get(&src), frontier.slots.get(&tgt)) else {
        return Err(ExtractError::BadRowOperation(src, tgt));
    };
    if src == tgt {
        return Err(ExtractError::BadRowOperation(src, tgt));
    }
    let fs = frontier.vertices();
    for n in past_neighbours(d, &fs, a) {
        d.toggle_hadamard(b, n);
    }
    out.push(Gate::cnot(tgt, src));
    out.row_ops.push((src, tgt));
    Ok(())
}

fn extract_frontier_cz(d: &mut ZxDiagram, frontier: &Frontier, out: &mut Extracted) {
    let slots: Vec<(usize, VertexId)> = frontier.slots.iter().map(|(&q, &v)| (q, v)).collect();
    for (i, &(q1, v1)) in slots.iter().enumerate() {
        for &(q2, v2) in &slots[i + 1..] {
            if d.connected(v1, v2) {
                d.remove_all_edges(v1, v2);
                out.push(Gate::Cz(q1, q2));
            }
        }
    }
}

/// Sets up the frontier from the output spiders: Hadamard output wires,
/// output phases and edges between output spiders become gates.
pub fn init_frontier(d: &mut ZxDiagram, out: &mut Extracted) -> Frontier {
    let mut frontier = Frontier::default();
    for (q, &b) in d.outputs().to_vec().iter().enumerate() {
        let Some(v) = d.neighbors(b).next() else { continue };
        if !d.kind(v).is_spider() {
            continue;
        }
        if d.edge(v, b).single() == Some(EdgeKind::Hadamard) {
            out.push(Gate::H(q));
            d.set_edge(v, b, EdgeKind::Simple);
        }
        let p = d.phase(v);
        if !p.is_zero() {
            out.push(Gate::ZPhase(q, p));
            d.set_phase(v, Phase::ZERO);
        }
        frontier.slots.insert(q, v);
    }
    extract_frontier_cz(d, &frontier, out);
    frontier
}

/// Input-attached frontier vertices that still have a past get a fresh
/// phaseless spider between them and their input.
fn separate_inputs(d: &mut ZxDiagram, frontier: &Frontier) {
    let fs = frontier.vertices();
    for &v in frontier.slots.values() {
        let Some(b) = input_of(d, v) else { continue };
        if past_neighbours(d, &fs, v).is_empty() {
            continue;
        }
        let e = d.edge(v, b).single().expect("boundary wire");
        d.remove_all_edges(v, b);
        let data = VertexData { kind: VertexKind::Z, phase: Phase::ZERO, qubit: d.vertex(v).qubit, row: d.vertex(v).row };
        let n = d.add_vertex_with(data);
        d.add_edge(b, n, e.toggled());
        d.add_edge(n, v, EdgeKind::Hadamard);
    }
}

fn unit_rows(m: &F2Matrix) -> Vec<(usize, usize)> {
    (0..m.rows())
        .filter(|&r| m.row_weight(r) == 1)
        .map(|r| (r, m.row(r).iter().position(|&b| b).expect("weight one")))
        .collect()
}

/// One round of frontier advancement. Returns the number of vertices moved
/// into the frontier (at least one) or the stuck frontier.
pub fn update_frontier(d: &mut ZxDiagram, frontier: &mut Frontier, out: &mut Extracted) -> Result<usize, ExtractError> {
    separate_inputs(d, frontier);
    let fs = frontier.vertices();
    let rows: Vec<usize> = frontier
        .slots
        .iter()
        .filter(|(_, &v)| input_of(d, v).is_none())
        .map(|(&q, _)| q)
        .collect();
    let mut cols: Vec<VertexId> = rows
        .iter()
        .flat_map(|q| past_neighbours(d, &fs, frontier.slots[q]))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    cols.sort_unstable();
    let stuck = || ExtractError::NonExtractable { frontier: frontier.slots.values().copied().collect() };
    if cols.is_empty() {
        return Err(stuck());
    }
    let m = biadjacency(d, frontier, &rows, &cols);
    let (reduced, full_log) = gauss_jordan(&m);
    let ws: Vec<usize> = unit_rows(&reduced).into_iter().map(|(_, c)| c).collect();
    if ws.is_empty() {
        return Err(stuck());
    }

    // eliminate on the chosen columns only, keeping the rows that end up
    // with a single past neighbour; fall back to the full elimination
    let mut small = F2Matrix::zeros(rows.len(), ws.len());
    for r in 0..rows.len() {
        for (j, &c) in ws.iter().enumerate() {
            small.set(r, j, m.get(r, c));
        }
    }
    let (_, small_log) = gauss_jordan(&small);
    let mut after = m.clone();
    small_log.replay(&mut after);
    let mut picks: Vec<(usize, usize)> = unit_rows(&after).into_iter().filter(|(_, c)| ws.contains(c)).collect();
    let last = last_step_order(d, &rows, &cols);
    let log: RowOpLog = if let Some(ordered) = last {
        // the remaining vertices all lead to inputs: eliminate to the identity
        // in input order so that no permutation is left over
        cols = ordered;
        let m = biadjacency(d, frontier, &rows, &cols);
        let (reduced, log) = gauss_jordan(&m);
        picks = unit_rows(&reduced);
        log
    } else if picks.is_empty() {
        picks = unit_rows(&reduced);
        full_log
    } else {
        small_log
    };

    for &(s, t) in &log.ops {
        apply_row_operation(d, frontier, rows[s], rows[t], out)?;
    }
    for &(r, c) in &picks {
        let q = rows[r];
        let v = frontier.slots[&q];
        let w = cols[c];
        debug_assert_eq!(past_neighbours(d, &fs, v), vec![w]);
        let b = d.outputs()[q];
        out.push(Gate::H(q));
        let p = d.phase(w);
        if !p.is_zero() {
            out.push(Gate::ZPhase(q, p));
            d.set_phase(w, Phase::ZERO);
        }
        d.remove_vertex(v);
        d.add_edge(w, b, EdgeKind::Simple);
        frontier.slots.insert(q, w);
    }
    extract_frontier_cz(d, frontier, out);
    Ok(picks.len())
}

/// Columns in input order, when every column is an input-attached vertex,
/// the number of columns equals the number of rows and the biadjacency is
/// invertible.
fn last_step_order(d: &ZxDiagram, rows: &[usize], cols: &[VertexId]) -> Option<Vec<VertexId>> {
    if rows.len() != cols.len() || rows.len() != d.outputs().len() {
        return None;
    }
    let mut keyed = Vec::new();
    for &c in cols {
        let i = input_of(d, c)?;
        keyed.push((d.inputs().iter().position(|&x| x == i).expect("input"), c));
    }
    keyed.sort_unstable();
    let ordered: Vec<VertexId> = keyed.into_iter().map(|(_, c)| c).collect();
    Some(ordered)
}

fn finish(d: &ZxDiagram, frontier: &Frontier, mut out: Extracted) -> Result<Circuit, ExtractError> {
    let n = out.qubits;
    let mut perm = vec![usize::MAX; n];
    for (q, &b) in d.outputs().iter().enumerate() {
        let v = frontier.slots.get(&q).copied().unwrap_or(b);
        let input = if v == b {
            d.neighbors(b).find(|x| d.inputs().contains(x))
        } else {
            input_of(d, v)
        };
        let Some(i) = input else { return Err(ExtractError::DanglingQubit(q)) };
        if d.edge(v, i).single() == Some(EdgeKind::Hadamard) {
            out.push(Gate::H(q));
        }
        perm[d.inputs().iter().position(|&x| x == i).expect("input")] = q;
    }
    let swaps = permutation_to_swaps(&perm).map_err(|_| ExtractError::DanglingQubit(0))?;
    let mut gates: Vec<Gate> = swaps.into_iter().map(|(a, b)| Gate::Swap(a, b)).collect();
    gates.extend(out.reversed.into_iter().rev());
    Ok(Circuit::from_gates(n, gates).expect("qubits in range"))
}

/// Extracts a circuit with the same linear map as `d` (up to a scalar).
pub fn extract_circuit(d: &ZxDiagram) -> Result<Circuit, ExtractError> {
    extract_with_log(d).map(|(c, _)| c)
}

/// As [`extract_circuit`], also returning the row operations performed.
pub fn extract_with_log(d: &ZxDiagram) -> Result<(Circuit, Vec<(usize, usize)>), ExtractError> {
    let report = is_graph_like(d);
    if !report.is_graph_like() {
        return Err(ExtractError::NotGraphLike(format!("conditions {:?}", report.conditions())));
    }
    if d.inputs().len() != d.outputs().len() {
        return Err(ExtractError::NotSquare { inputs: d.inputs().len(), outputs: d.outputs().len() });
    }
    let mut d = d.clone();
    let scalars: Vec<VertexId> = d.spiders().filter(|&v| d.degree(v) == 0).collect();
    for v in scalars {
        d.remove_vertex(v);
    }
    let mut out = Extracted { qubits: d.outputs().len(), ..Extracted::default() };
    let mut frontier = init_frontier(&mut d, &mut out);
    loop {
        let fs = frontier.vertices();
        if d.spiders().all(|v| fs.contains(&v)) {
            break;
        }
        update_frontier(&mut d, &mut frontier, &mut out)?;
    }
    let ops = out.row_ops.clone();
    Ok((finish(&d, &frontier, out)?, ops))
}
