//! Gate-level circuits and their translation into ZX-diagrams.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{EdgeKind, RowSpan, VertexData, VertexId, VertexKind, ZxDiagram};
use crate::phase::Phase;

pub type Qubit = usize;

/// A gate. Named phase gates (S, T, Z, X and their inverses) are stored as
/// [`Gate::ZPhase`] / [`Gate::XPhase`] with an exact phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    Cnot { control: Qubit, target: Qubit },
    Cz(Qubit, Qubit),
    H(Qubit),
    ZPhase(Qubit, Phase),
    XPhase(Qubit, Phase),
    Swap(Qubit, Qubit),
}

impl Gate {
    pub fn cnot(control: Qubit, target: Qubit) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn s(q: Qubit) -> Gate {
        Gate::ZPhase(q, Phase::HALF_PI)
    }

    pub fn sdg(q: Qubit) -> Gate {
        Gate::ZPhase(q, Phase::MINUS_HALF_PI)
    }

    pub fn t(q: Qubit) -> Gate {
        Gate::ZPhase(q, Phase::QUARTER_PI)
    }

    pub fn tdg(q: Qubit) -> Gate {
        Gate::ZPhase(q, -Phase::QUARTER_PI)
    }

    pub fn z(q: Qubit) -> Gate {
        Gate::ZPhase(q, Phase::PI)
    }

    pub fn x(q: Qubit) -> Gate {
        Gate::XPhase(q, Phase::PI)
    }

    /// The qubits acted on, first qubit first (control before target).
    pub fn qubits(&self) -> Vec<Qubit> {
        match *self {
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz(a, b) | Gate::Swap(a, b) => vec![a, b],
            Gate::H(q) | Gate::ZPhase(q, _) | Gate::XPhase(q, _) => vec![q],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. } | Gate::Cz(..) | Gate::Swap(..))
    }

    pub fn is_clifford(&self) -> bool {
        match *self {
            Gate::ZPhase(_, p) | Gate::XPhase(_, p) => p.is_clifford(),
            _ => true,
        }
    }

    pub fn adjoint(&self) -> Gate {
        match *self {
            Gate::ZPhase(q, p) => Gate::ZPhase(q, -p),
            Gate::XPhase(q, p) => Gate::XPhase(q, -p),
            g => g,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate {0:?} addresses qubit {1}, but the circuit has {2} qubits")]
    QubitOutOfRange(Gate, Qubit, usize),
    #[error("gate {0:?} repeats qubit {1}")]
    RepeatedQubit(Gate, Qubit),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Circuit {
        Circuit { qubits, gates: Vec::new() }
    }

    pub fn from_gates(qubits: usize, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, g: Gate) -> Result<(), CircuitError> {
        let qs = g.qubits();
        for &q in &qs {
            if q >= self.qubits {
                return Err(CircuitError::QubitOutOfRange(g, q, self.qubits));
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(CircuitError::RepeatedQubit(g, qs[0]));
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    /// Appends all gates of `other`, which must have the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        for &g in other.gates() {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Circuit {
        Circuit {
            qubits: self.qubits,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    pub fn stats(&self) -> GateStats {
        gate_stats(self)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateStats {
    pub total: usize,
    pub two_qubit: usize,
    /// Non-Clifford phase gates.
    pub t_like: usize,
    pub h_count: usize,
}

pub fn gate_stats(c: &Circuit) -> GateStats {
    let mut s = GateStats::default();
    for g in c.gates() {
        s.total += 1;
        if g.is_two_qubit() {
            s.two_qubit += 1;
        }
        if !g.is_clifford() {
            s.t_like += 1;
        }
        if matches!(g, Gate::H(_)) {
            s.h_count += 1;
        }
    }
    s
}

struct Builder {
    d: ZxDiagram,
    last: Vec<VertexId>,
    pending: Vec<EdgeKind>,
    row: Vec<i64>,
}

impl Builder {
    fn spider(&mut self, q: Qubit, kind: VertexKind, phase: Phase, row: i64) -> VertexId {
        let v = self.d.add_vertex_with(VertexData {
            kind,
            phase,
            qubit: Some(q as i64),
            row: Some(RowSpan::at(row)),
        });
        self.d.add_edge(self.last[q], v, self.pending[q]);
        self.pending[q] = EdgeKind::Simple;
        self.last[q] = v;
        self.row[q] = row + 1;
        v
    }

    fn two(&mut self, a: Qubit, b: Qubit, ka: VertexKind, kb: VertexKind, link: EdgeKind) {
        let r = self.row[a].max(self.row[b]);
        let va = self.spider(a, ka, Phase::ZERO, r);
        let vb = self.spider(b, kb, Phase::ZERO, r);
        self.d.add_edge(va, vb, link);
    }

    fn gate(&mut self, g: &Gate) {
        match *g {
            Gate::H(q) => self.pending[q] = self.pending[q].toggled(),
            Gate::ZPhase(q, p) => {
                let r = self.row[q];
                self.spider(q, VertexKind::Z, p, r);
            }
            Gate::XPhase(q, p) => {
                self.pending[q] = self.pending[q].toggled();
                let r = self.row[q];
                self.spider(q, VertexKind::Z, p, r);
                self.pending[q] = EdgeKind::Hadamard;
            }
            Gate::Cnot { control, target } => {
                self.two(control, target, VertexKind::Z, VertexKind::X, EdgeKind::Simple)
            }
            Gate::Cz(a, b) => self.two(a, b, VertexKind::Z, VertexKind::Z, EdgeKind::Hadamard),
            Gate::Swap(a, b) => {
                for (c, t) in [(a, b), (b, a), (a, b)] {
                    self.two(c, t, VertexKind::Z, VertexKind::X, EdgeKind::Simple);
                }
            }
        }
    }
}

/// Translates a circuit gate by gate. Every spider records its qubit line and
/// the layer it sits in; inputs are at layer 0 and outputs one past the last
/// gate layer.
pub fn circuit_to_diagram(c: &Circuit) -> ZxDiagram {
    let n = c.qubit_count();
    let mut d = ZxDiagram::new();
    let inputs: Vec<VertexId> = (0..n)
        .map(|q| {
            d.add_vertex_with(VertexData {
                kind: VertexKind::Boundary,
                phase: Phase::ZERO,
                qubit: Some(q as i64),
                row: Some(RowSpan::at(0)),
            })
        })
        .collect();
    let mut b = Builder { d, last: inputs.clone(), pending: vec![EdgeKind::Simple; n], row: vec![1; n] };
    for g in c.gates() {
        b.gate(g);
    }
    let out_row = b.row.iter().copied().max().unwrap_or(1);
    let mut outputs = Vec::with_capacity(n);
    for q in 0..n {
        let o = b.d.add_vertex_with(VertexData {
            kind: VertexKind::Boundary,
            phase: Phase::ZERO,
            qubit: Some(q as i64),
            row: Some(RowSpan::at(out_row)),
        });
        b.d.add_edge(b.last[q], o, b.pending[q]);
        outputs.push(o);
    }
    let mut d = b.d;
    d.set_inputs(inputs);
    d.set_outputs(outputs);
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{circuit_to_matrix, diagram_to_matrix, equal_up_to_global_phase};

    fn agrees(c: &Circuit) -> bool {
        let d = circuit_to_diagram(c);
        d.validate().unwrap();
        equal_up_to_global_phase(&diagram_to_matrix(&d).unwrap(), &circuit_to_matrix(c).unwrap(), 1e-12).unwrap()
    }

    #[test]
    fn every_generator_translates_faithfully() {
        let gates = [
            Gate::H(0),
            Gate::s(0),
            Gate::sdg(0),
            Gate::t(0),
            Gate::tdg(0),
            Gate::z(0),
            Gate::x(0),
            Gate::ZPhase(0, Phase::new(2, 3)),
            Gate::XPhase(0, Phase::new(1, 5)),
            Gate::cnot(0, 1),
            Gate::cnot(1, 0),
            Gate::Cz(0, 1),
            Gate::Swap(0, 1),
        ];
        for g in gates {
            let c = Circuit::from_gates(2, vec![g]).unwrap();
            assert!(agrees(&c), "{g:?}");
        }
    }

    #[test]
    fn boundaries_and_hints() {
        let c = Circuit::from_gates(2, vec![Gate::cnot(0, 1), Gate::t(1)]).unwrap();
        let d = circuit_to_diagram(&c);
        assert_eq!(d.inputs().len(), 2);
        assert_eq!(d.outputs().len(), 2);
        for v in d.vertices() {
            assert!(d.vertex(v).qubit.is_some() && d.vertex(v).row.is_some());
        }
        let t = d.spiders().find(|&v| d.phase(v) == Phase::QUARTER_PI).unwrap();
        assert_eq!(d.vertex(t).row.unwrap().first, 2);
        assert_eq!(d.vertex(d.outputs()[0]).row.unwrap().first, 3);
    }

    #[test]
    fn out_of_range_qubit_is_rejected() {
        assert!(matches!(
            Circuit::from_gates(1, vec![Gate::cnot(0, 1)]),
            Err(CircuitError::QubitOutOfRange(_, 1, 1))
        ));
        assert!(matches!(Circuit::from_gates(2, vec![Gate::Cz(1, 1)]), Err(CircuitError::RepeatedQubit(_, 1))));
    }

    #[test]
    fn stats_counts() {
        assert_eq!(gate_stats(&Circuit::new(2)), GateStats::default());
        let c = Circuit::from_gates(2, vec![Gate::cnot(0, 1), Gate::H(0), Gate::t(1)]).unwrap();
        let s = gate_stats(&c);
        assert_eq!((s.total, s.two_qubit, s.t_like, s.h_count), (3, 1, 1, 1));
    }

    #[test]
    fn appendix_shape_counts() {
        let mut gates = vec![Gate::cnot(0, 1), Gate::Cz(1, 2), Gate::cnot(2, 3), Gate::Cz(0, 3), Gate::cnot(1, 0)];
        for q in 0..4 {
            gates.extend([Gate::H(q), Gate::s(q), Gate::t(q), Gate::H(q)]);
        }
        gates.extend([Gate::x(0), Gate::z(1), Gate::tdg(2)]);
        let s = gate_stats(&Circuit::from_gates(4, gates).unwrap());
        assert_eq!(s.two_qubit, 5);
        assert_eq!(s.total - s.two_qubit, 19);
    }

    #[test]
    fn random_three_qubit_circuits() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let mut c = Circuit::new(3);
            for _ in 0..20 {
                let a = rng.gen_range(0..3);
                let b = (a + rng.gen_range(1..3)) % 3;
                let g = match rng.gen_range(0..6) {
                    0 => Gate::H(a),
                    1 => Gate::ZPhase(a, Phase::new(rng.gen_range(0..8), 4)),
                    2 => Gate::XPhase(a, Phase::new(rng.gen_range(0..8), 4)),
                    3 => Gate::cnot(a, b),
                    4 => Gate::Cz(a, b),
                    _ => Gate::Swap(a, b),
                };
                c.push(g).unwrap();
            }
            assert!(agrees(&c));
        }
    }
}
