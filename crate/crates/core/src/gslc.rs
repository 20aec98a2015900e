//! Graph states with local Cliffords: the form Clifford diagrams reach under
//! simplification, its reduction to a small set of local Cliffords, and its
//! extraction into an eight-layer circuit.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::diagram::{EdgeKind, VertexId, VertexKind, ZxDiagram};
use crate::f2::{gauss_jordan, F2Matrix};
use crate::graph::OpenGraph;
use crate::phase::Phase;
use crate::rules::is_graph_like;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GsLcError {
    #[error("diagram is not graph-like")]
    NotGraphLike,
    #[error("spider {0} is interior")]
    Interior(VertexId),
    #[error("spider {0} has a non-Clifford phase")]
    NonClifford(VertexId),
    #[error("{inputs} inputs but {outputs} outputs")]
    NotSquare { inputs: usize, outputs: usize },
    #[error("the input/output biadjacency is singular")]
    Singular,
    #[error("local Clifford on spider {0} is not a phase optionally followed by a Hadamard")]
    NotDiagonalForm(VertexId),
}

const TOL: f64 = 1e-9;

/// A single-qubit Clifford operator up to global phase.
#[derive(Clone, Copy)]
pub struct LocalClifford([C64; 4]);

impl LocalClifford {
    fn normalized(m: [C64; 4]) -> LocalClifford {
        let pivot = m.iter().find(|z| z.norm() > 1e-6).copied().expect("invertible");
        let scale = pivot.norm() / pivot;
        let norm = (m.iter().map(|z| z.norm_sqr()).sum::<f64>() / 2.0).sqrt();
        LocalClifford(m.map(|z| z * scale / norm))
    }

    pub fn identity() -> LocalClifford {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        LocalClifford([o, z, z, o])
    }

    pub fn h() -> LocalClifford {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        LocalClifford([h, h, h, -h])
    }

    pub fn z(quarter_turns: i64) -> LocalClifford {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let e = C64::i().powi(quarter_turns.rem_euclid(4) as i32);
        LocalClifford([o, z, z, e])
    }

    pub fn x(quarter_turns: i64) -> LocalClifford {
        LocalClifford::h() * LocalClifford::z(quarter_turns) * LocalClifford::h()
    }

    /// `H^f · Z(g·π/2)` when the operator has that shape.
    pub fn as_hz(&self) -> Option<(bool, i64)> {
        for f in [false, true] {
            for g in 0..4 {
                if *self == LocalClifford::hz(f, g) {
                    return Some((f, g));
                }
            }
        }
        None
    }

    pub fn hz(f: bool, g: i64) -> LocalClifford {
        let z = LocalClifford::z(g);
        if f {
            LocalClifford::h() * z
        } else {
            z
        }
    }

    /// `Z(a) · X(b) · Z(c)` in quarter turns.
    pub fn euler(&self) -> (i64, i64, i64) {
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    if *self == LocalClifford::z(a) * LocalClifford::x(b) * LocalClifford::z(c) {
                        return (a, b, c);
                    }
                }
            }
        }
        unreachable!("every Clifford has a quarter-turn Euler form")
    }

    /// Whether the operator lies in `{S^n, H, HZ}`.
    pub fn is_reduced(&self) -> bool {
        matches!(self.as_hz(), Some((false, _)) | Some((true, 0)) | Some((true, 2)))
    }
}

impl std::ops::Mul for LocalClifford {
    type Output = LocalClifford;

    fn mul(self, o: LocalClifford) -> LocalClifford {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        LocalClifford::normalized([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl PartialEq for LocalClifford {
    fn eq(&self, o: &LocalClifford) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| (a - b).norm() < TOL)
    }
}

impl fmt::Debug for LocalClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_hz() {
            Some((h, g)) => write!(f, "{}Z({g}/2)", if h { "H·" } else { "" }),
            None => {
                let (a, b, c) = self.euler();
                write!(f, "Z({a}/2)·X({b}/2)·Z({c}/2)")
            }
        }
    }
}

/// A graph state whose vertices each carry one leg to a boundary, through
/// a local Clifford. Legs are read as outputs of the state; an input leg is
/// the transpose, which for the phase and Hadamard generators is the same
/// operator.
#[derive(Debug, Clone, PartialEq)]
pub struct GsLc {
    pub graph: OpenGraph,
    pub local: BTreeMap<VertexId, LocalClifford>,
    /// Boundary vertex of each leg.
    pub boundary: BTreeMap<VertexId, VertexId>,
    pub inputs: Vec<VertexId>,
    pub outputs: Vec<VertexId>,
}

impl GsLc {
    /// Reads a graph-like diagram in which every spider touches a boundary.
    /// Boundary wires shared or joined directly are first split by
    /// [`attach_boundaries`].
    pub fn from_diagram(d: &ZxDiagram) -> Result<GsLc, GsLcError> {
        let mut d = d.clone();
        attach_boundaries(&mut d);
        let d = &d;
        if !is_graph_like(d).is_graph_like() {
            return Err(GsLcError::NotGraphLike);
        }
        let mut graph = OpenGraph::new();
        let mut local = BTreeMap::new();
        let mut boundary = BTreeMap::new();
        for v in d.spiders() {
            let b = d.boundary_of(v).ok_or(GsLcError::Interior(v))?;
            let g = d.phase(v).as_quarter_turns().ok_or(GsLcError::NonClifford(v))?;
            let f = d.edge(v, b).single() == Some(EdgeKind::Hadamard);
            graph.add_vertex(v);
            local.insert(v, LocalClifford::hz(f, g));
            boundary.insert(v, b);
            if d.inputs().contains(&b) {
                graph.inputs.insert(v);
            } else {
                graph.outputs.insert(v);
            }
        }
        for (a, b, _) in d.edges() {
            if d.kind(a).is_spider() && d.kind(b).is_spider() {
                graph.add_edge(a, b);
            }
        }
        Ok(GsLc { graph, local, boundary, inputs: d.inputs().to_vec(), outputs: d.outputs().to_vec() })
    }

    /// A diagram with the same linear map. Legs whose local Clifford is a
    /// phase optionally followed by a Hadamard stay graph-like; the others
    /// are written as Euler chains of spiders.
    pub fn to_diagram(&self) -> ZxDiagram {
        let mut d = ZxDiagram::new();
        let mut ids = BTreeMap::new();
        for v in self.graph.vertices() {
            ids.insert(v, d.add_vertex(VertexKind::Z, Phase::ZERO));
        }
        let mut bmap = BTreeMap::new();
        for &b in self.inputs.iter().chain(&self.outputs) {
            bmap.insert(b, d.add_vertex(VertexKind::Boundary, Phase::ZERO));
        }
        for (a, b) in self.graph.edges() {
            d.add_edge(ids[&a], ids[&b], EdgeKind::Hadamard);
        }
        for (&v, l) in &self.local {
            let s = ids[&v];
            let b = bmap[&self.boundary[&v]];
            if let Some((f, g)) = l.as_hz() {
                d.set_phase(s, Phase::quarter_turns(g));
                d.add_edge(s, b, if f { EdgeKind::Hadamard } else { EdgeKind::Simple });
            } else {
                let (a, x, c) = l.euler();
                d.set_phase(s, Phase::quarter_turns(c));
                let xs = d.add_vertex(VertexKind::X, Phase::quarter_turns(x));
                let zs = d.add_vertex(VertexKind::Z, Phase::quarter_turns(a));
                d.add_edge(s, xs, EdgeKind::Simple);
                d.add_edge(xs, zs, EdgeKind::Simple);
                d.add_edge(zs, b, EdgeKind::Simple);
            }
        }
        d.set_inputs(self.inputs.iter().map(|b| bmap[b]).collect());
        d.set_outputs(self.outputs.iter().map(|b| bmap[b]).collect());
        d
    }

    /// Local complementation at `u`, applied `times` times: the graph becomes
    /// `G ⋆ u` (or `G` for even counts), the leg of `u` absorbs `X(-π/2)` and
    /// each neighbour's leg absorbs `Z(π/2)` per application.
    pub fn local_complement(&mut self, u: VertexId, times: usize) {
        for _ in 0..times {
            let ns: Vec<VertexId> = self.graph.neighbors(u).iter().copied().collect();
            self.graph.local_complement_mut(u).expect("vertex of the graph");
            let lu = self.local[&u] * LocalClifford::x(-1);
            self.local.insert(u, lu);
            for n in ns {
                let ln = self.local[&n] * LocalClifford::z(1);
                self.local.insert(n, ln);
            }
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.local.values().all(LocalClifford::is_reduced)
    }
}

/// Gives every boundary a spider of its own: a wire joining two boundaries
/// gets two phase-free spiders, and a spider touching several boundaries
/// keeps the first and hands the rest to new phase-free neighbours.
pub fn attach_boundaries(d: &mut ZxDiagram) {
    let bs: Vec<VertexId> = d.inputs().iter().chain(d.outputs()).copied().collect();
    let mut seen = std::collections::BTreeSet::new();
    for &b in &bs {
        let Some(n) = d.neighbors(b).next() else { continue };
        let e = d.edge(b, n).single().expect("boundary has one wire");
        if !d.kind(n).is_spider() {
            if seen.contains(&b) {
                continue;
            }
            seen.insert(n);
            d.remove_all_edges(b, n);
            let s1 = d.add_vertex(VertexKind::Z, Phase::ZERO);
            let s2 = d.add_vertex(VertexKind::Z, Phase::ZERO);
            d.add_edge(b, s1, EdgeKind::Simple);
            d.add_edge(s1, s2, EdgeKind::Hadamard);
            d.add_edge(s2, n, e.toggled());
        } else if !seen.insert(n) {
            d.remove_all_edges(b, n);
            let s = d.add_vertex(VertexKind::Z, Phase::ZERO);
            d.add_edge(n, s, EdgeKind::Hadamard);
            d.add_edge(s, b, e.toggled());
        }
    }
}

fn in_phase_or_hadamard_coset(l: &LocalClifford) -> bool {
    l.as_hz().is_some()
}

/// Brings every local Clifford into `{S^n, H, HZ}` by local
/// complementations. Each leg is first moved into the form `H^f·S^n` by
/// complementing at its own vertex, which multiplies the neighbours' legs
/// by phases only. Then, while some leg is a Hadamard after an odd phase,
/// complementing there turns it into a plain phase; every such step lowers
/// the number of Hadamard legs by one.
pub fn reduce_local_cliffords(form: &mut GsLc) {
    let vs: Vec<VertexId> = form.graph.vertices().collect();
    for &u in &vs {
        let k = (0..4)
            .find(|&k| {
                let mut l = form.local[&u];
                for _ in 0..k {
                    l = l * LocalClifford::x(-1);
                }
                in_phase_or_hadamard_coset(&l)
            })
            .expect("every Clifford reaches the phase or Hadamard coset");
        form.local_complement(u, k);
    }
    loop {
        let bad = vs.iter().copied().find(|v| matches!(form.local[v].as_hz(), Some((true, g)) if g % 2 == 1));
        let Some(u) = bad else { break };
        let times = if form.local[&u].as_hz() == Some((true, 3)) { 1 } else { 3 };
        form.local_complement(u, times);
    }
}

/// Layers of the normal form, in circuit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Layer {
    InputH,
    InputS,
    InputCz,
    Cnot,
    MiddleH,
    OutputCz,
    OutputS,
    OutputH,
}

impl Layer {
    pub const ORDER: [Layer; 8] = [
        Layer::InputH,
        Layer::InputS,
        Layer::InputCz,
        Layer::Cnot,
        Layer::MiddleH,
        Layer::OutputCz,
        Layer::OutputS,
        Layer::OutputH,
    ];
}

/// A circuit whose gates are tagged with the layer they belong to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayeredCircuit {
    pub qubits: usize,
    pub layers: Vec<(Layer, Vec<Gate>)>,
}

impl LayeredCircuit {
    pub fn to_circuit(&self) -> Circuit {
        let gates = self.layers.iter().flat_map(|(_, gs)| gs.iter().cloned()).collect();
        Circuit::from_gates(self.qubits, gates).expect("qubits in range")
    }

    /// Layer tag of every gate, left to right.
    pub fn tags(&self) -> Vec<Layer> {
        self.layers.iter().flat_map(|(l, gs)| std::iter::repeat_n(*l, gs.len())).collect()
    }

    pub fn respects_order(&self) -> bool {
        let ls: Vec<Layer> = self.layers.iter().map(|(l, _)| *l).collect();
        ls == Layer::ORDER && self.tags().windows(2).all(|w| w[0] <= w[1])
    }
}

/// CNOTs mapping `|x⟩` to `|Mx⟩` for an invertible `m`.
pub fn synthesize_parity(m: &F2Matrix) -> Result<Vec<Gate>, GsLcError> {
    let (r, log) = gauss_jordan(m);
    if r != F2Matrix::identity(m.rows()) {
        return Err(GsLcError::Singular);
    }
    Ok(log.ops.iter().rev().map(|&(s, t)| Gate::cnot(s, t)).collect())
}

/// Extracts a Clifford diagram without interior spiders as the layers
/// `H, S, CZ, CNOT, H, CZ, S, H`, after reducing the local Cliffords.
pub fn extract_gslc_normal_form(d: &ZxDiagram) -> Result<LayeredCircuit, GsLcError> {
    let mut form = GsLc::from_diagram(d)?;
    reduce_local_cliffords(&mut form);
    layers_of(&form)
}

fn layers_of(form: &GsLc) -> Result<LayeredCircuit, GsLcError> {
    let n = form.outputs.len();
    if form.inputs.len() != n {
        return Err(GsLcError::NotSquare { inputs: form.inputs.len(), outputs: n });
    }
    let leg_of = |bs: &[VertexId]| -> Vec<VertexId> {
        bs.iter()
            .map(|b| *form.boundary.iter().find(|(_, &x)| x == *b).expect("attached boundary").0)
            .collect()
    };
    let ins = leg_of(&form.inputs);
    let outs = leg_of(&form.outputs);
    let hz = |v: VertexId| form.local[&v].as_hz().ok_or(GsLcError::NotDiagonalForm(v));

    let mut layers: Vec<(Layer, Vec<Gate>)> = Layer::ORDER.iter().map(|&l| (l, Vec::new())).collect();
    let cz_layer = |vs: &[VertexId]| -> Vec<Gate> {
        let mut gs = Vec::new();
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate().skip(i + 1) {
                if form.graph.has_edge(a, b) {
                    gs.push(Gate::Cz(i, j));
                }
            }
        }
        gs
    };
    for (p, &v) in ins.iter().enumerate() {
        let (f, g) = hz(v)?;
        if f {
            layers[0].1.push(Gate::H(p));
        }
        if g != 0 {
            layers[1].1.push(Gate::ZPhase(p, Phase::quarter_turns(g)));
        }
    }
    layers[2].1 = cz_layer(&ins);
    let mut m = F2Matrix::zeros(n, n);
    for (q, &o) in outs.iter().enumerate() {
        for (p, &i) in ins.iter().enumerate() {
            m.set(q, p, form.graph.has_edge(o, i));
        }
    }
    layers[3].1 = synthesize_parity(&m)?;
    layers[4].1 = (0..n).map(Gate::H).collect();
    layers[5].1 = cz_layer(&outs);
    for (q, &v) in outs.iter().enumerate() {
        let (f, g) = hz(v)?;
        if g != 0 {
            layers[6].1.push(Gate::ZPhase(q, Phase::quarter_turns(g)));
        }
        if f {
            layers[7].1.push(Gate::H(q));
        }
    }
    Ok(LayeredCircuit { qubits: n, layers })
}
