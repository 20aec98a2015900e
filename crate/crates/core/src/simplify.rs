//! Graph-theoretic simplification of graph-like diagrams: local
//! complementation and pivoting steps that delete interior Clifford spiders,
//! and the terminating driver that applies them to a fixpoint.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{EdgeKind, VertexData, VertexId, VertexKind, ZxDiagram};
use crate::gflow::{extend_input, extend_output, lcomp_update_unchecked, pivot_update_unchecked, FlowError, FocusedGFlow};
use crate::graph::open_graph_unchecked;
use crate::phase::Phase;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimpError {
    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),
    #[error("vertex {0} is not a Z spider joined to Z spiders by Hadamard edges")]
    NotLocallyGraphLike(VertexId),
    #[error("vertex {0} is not interior")]
    NotInterior(VertexId),
    #[error("vertex {0} does not carry a proper Clifford phase")]
    NotProperClifford(VertexId),
    #[error("vertex {0} does not carry a Pauli phase")]
    NotPauli(VertexId),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
    #[error("vertex {0} is not attached to a boundary")]
    NotBoundarySpider(VertexId),
}

/// One rewrite applied by [`clifford_simp`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SimpStep {
    LCompSimp {
        u: VertexId,
        phase: Phase,
        neighbours: Vec<VertexId>,
    },
    PivotSimp {
        u: VertexId,
        v: VertexId,
    },
    /// `u` interior Pauli, `v` the boundary spider it touched. `inserted`
    /// lists the new spiders from the boundary wire of `v`, innermost first;
    /// when `unitary` is set it is the outermost one and carries the phase
    /// that was on `v`.
    BoundaryPivot {
        u: VertexId,
        boundary_spider: VertexId,
        inserted: Vec<VertexId>,
        unitary: Option<VertexId>,
    },
    ScalarRemoval {
        v: VertexId,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpLog {
    pub steps: Vec<SimpStep>,
    /// Elementary edge toggles and phase updates performed.
    pub ops: u64,
}

impl SimpLog {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&serde_json::to_string(s).expect("step serializes"));
            out.push('\n');
        }
        out
    }
}

fn require_local(d: &ZxDiagram, u: VertexId) -> Result<(), SimpError> {
    if !d.contains(u) {
        return Err(SimpError::MissingVertex(u));
    }
    if d.kind(u) != VertexKind::Z {
        return Err(SimpError::NotLocallyGraphLike(u));
    }
    for (n, m) in d.incident(u) {
        if d.is_boundary(n) {
            continue;
        }
        if n == u || d.kind(n) != VertexKind::Z || m.single() != Some(EdgeKind::Hadamard) {
            return Err(SimpError::NotLocallyGraphLike(u));
        }
    }
    Ok(())
}

fn sorted_neighbours(d: &ZxDiagram, u: VertexId) -> Vec<VertexId> {
    let mut ns: Vec<VertexId> = d.neighbors(u).collect();
    ns.sort_unstable();
    ns
}

fn lc_unchecked(d: &mut ZxDiagram, u: VertexId, ops: &mut u64) -> Vec<VertexId> {
    let alpha = d.phase(u);
    let ns = sorted_neighbours(d, u);
    for (i, &a) in ns.iter().enumerate() {
        for &b in &ns[i + 1..] {
            d.toggle_hadamard(a, b);
        }
    }
    for &n in &ns {
        d.add_to_phase(n, -alpha);
    }
    *ops += (ns.len() * ns.len().saturating_sub(1) / 2 + ns.len()) as u64;
    d.remove_vertex(u);
    ns
}

fn pivot_unchecked(d: &mut ZxDiagram, u: VertexId, v: VertexId, ops: &mut u64) {
    let nu: Vec<VertexId> = d.neighbors(u).filter(|&x| x != v).collect();
    let nv: Vec<VertexId> = d.neighbors(v).filter(|&x| x != u).collect();
    let common: Vec<VertexId> = nu.iter().copied().filter(|x| nv.contains(x)).collect();
    let only_u: Vec<VertexId> = nu.iter().copied().filter(|x| !nv.contains(x)).collect();
    let only_v: Vec<VertexId> = nv.iter().copied().filter(|x| !nu.contains(x)).collect();
    for (xs, ys) in [(&only_u, &only_v), (&only_u, &common), (&only_v, &common)] {
        for &x in xs {
            for &y in ys {
                d.toggle_hadamard(x, y);
            }
        }
        *ops += (xs.len() * ys.len()) as u64;
    }
    let (pu, pv) = (d.phase(u), d.phase(v));
    for &x in &only_u {
        d.add_to_phase(x, pv);
    }
    for &x in &only_v {
        d.add_to_phase(x, pu);
    }
    for &x in &common {
        d.add_to_phase(x, pu + pv + Phase::PI);
    }
    *ops += nu.len() as u64 + only_v.len() as u64;
    d.remove_vertex(u);
    d.remove_vertex(v);
}

/// Deletes the interior proper Clifford spider `u`: complements its
/// neighbourhood and subtracts its phase from every neighbour. Returns the
/// former neighbours.
pub fn lc_simp(d: &mut ZxDiagram, u: VertexId) -> Result<Vec<VertexId>, SimpError> {
    require_local(d, u)?;
    if !d.is_interior(u) {
        return Err(SimpError::NotInterior(u));
    }
    if !d.phase(u).is_proper_clifford() {
        return Err(SimpError::NotProperClifford(u));
    }
    for n in d.neighbors(u).collect::<Vec<_>>() {
        require_local(d, n)?;
    }
    Ok(lc_unchecked(d, u, &mut 0))
}

/// Deletes the adjacent interior Pauli spiders `u` (phase `jπ`) and `v`
/// (phase `kπ`). Edges between the three neighbour regions are complemented;
/// neighbours of `u` only gain `kπ`, neighbours of `v` only gain `jπ` and
/// common neighbours gain `(j+k+1)π`.
pub fn pivot_simp(d: &mut ZxDiagram, u: VertexId, v: VertexId) -> Result<(), SimpError> {
    for x in [u, v] {
        require_local(d, x)?;
        if !d.is_interior(x) {
            return Err(SimpError::NotInterior(x));
        }
        if !d.phase(x).is_pauli() {
            return Err(SimpError::NotPauli(x));
        }
    }
    if u == v || !d.connected(u, v) {
        return Err(SimpError::NotAdjacent(u, v));
    }
    for x in [u, v] {
        for n in d.neighbors(x).collect::<Vec<_>>() {
            require_local(d, n)?;
        }
    }
    pivot_unchecked(d, u, v, &mut 0);
    Ok(())
}

fn spider_near(d: &mut ZxDiagram, v: VertexId, b: VertexId, phase: Phase) -> VertexId {
    let qubit = d.vertex(b).qubit.or(d.vertex(v).qubit);
    let row = d.vertex(v).row;
    d.add_vertex_with(VertexData { kind: VertexKind::Z, phase, qubit, row })
}

/// Moves the boundary of `v` one spider outward: `v–e–b` becomes
/// `v–H–w–(e·H)–b` with `w` phaseless, so `v` turns interior with its phase
/// untouched.
fn unfuse_boundary(d: &mut ZxDiagram, v: VertexId, b: VertexId) -> VertexId {
    let e = d.edge(v, b).single().expect("boundary wire");
    d.remove_all_edges(v, b);
    let w = spider_near(d, v, b, Phase::ZERO);
    d.add_edge(v, w, EdgeKind::Hadamard);
    d.add_edge(w, b, e.toggled());
    w
}

/// Peels the phase of the boundary spider `v` onto its boundary wire:
/// `v(α)–e–b` becomes `v(0)–H–w(0)–H–x(α)–e–b`. Returns `(w, x)`; `v` is
/// afterwards an interior Pauli spider and `x` holds the single-qubit
/// unitary that was on the wire.
pub fn boundary_pivot_prep(d: &mut ZxDiagram, v: VertexId) -> Result<(VertexId, VertexId), SimpError> {
    require_local(d, v)?;
    let b = d.boundary_of(v).ok_or(SimpError::NotBoundarySpider(v))?;
    let alpha = d.phase(v);
    let e = d.edge(v, b).single().expect("boundary wire");
    d.remove_all_edges(v, b);
    d.set_phase(v, Phase::ZERO);
    let w = spider_near(d, v, b, Phase::ZERO);
    let x = spider_near(d, v, b, alpha);
    d.add_edge(v, w, EdgeKind::Hadamard);
    d.add_edge(w, x, EdgeKind::Hadamard);
    d.add_edge(x, b, e);
    Ok((w, x))
}

/// A boundary spider holding a non-Clifford phase and a single spider
/// neighbour: a single-qubit unitary sitting on its wire.
pub fn is_wire_unitary(d: &ZxDiagram, x: VertexId) -> bool {
    d.kind(x).is_spider()
        && !d.phase(x).is_clifford()
        && d.boundary_of(x).is_some()
        && d.neighbors(x).filter(|&n| d.kind(n).is_spider()).count() == 1
}

/// Interior in the sense of the simplifier: not attached to a boundary and
/// not next to a single-qubit unitary on a boundary wire.
pub fn is_effectively_interior(d: &ZxDiagram, s: VertexId) -> bool {
    d.kind(s).is_spider()
        && d.neighbors(s).all(|n| !d.is_boundary(n) && !is_wire_unitary(d, n))
}

fn is_boundary_spider(d: &ZxDiagram, s: VertexId) -> bool {
    d.kind(s).is_spider() && d.boundary_of(s).is_some()
}

/// What [`boundary_pivot`] inserted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPivot {
    pub inserted: Vec<VertexId>,
    pub unitary: Option<VertexId>,
}

/// Removes the interior Pauli spider `u` together with its neighbour `v`,
/// which is attached to a boundary. A Pauli `v` gets a fresh boundary spider
/// and is pivoted away with `u`; a proper Clifford `v` gets a fresh boundary
/// spider, after which `v` and then `u` are removed by local
/// complementation; any other `v` has its phase peeled onto the wire first.
pub fn boundary_pivot(d: &mut ZxDiagram, u: VertexId, v: VertexId) -> Result<BoundaryPivot, SimpError> {
    require_local(d, u)?;
    if !is_effectively_interior(d, u) {
        return Err(SimpError::NotInterior(u));
    }
    if !d.phase(u).is_pauli() {
        return Err(SimpError::NotPauli(u));
    }
    if !d.connected(u, v) {
        return Err(SimpError::NotAdjacent(u, v));
    }
    require_local(d, v)?;
    if !is_boundary_spider(d, v) {
        return Err(SimpError::NotBoundarySpider(v));
    }
    for x in [u, v] {
        for n in d.neighbors(x).filter(|&n| !d.is_boundary(n)).collect::<Vec<_>>() {
            require_local(d, n)?;
        }
    }
    Ok(boundary_pivot_unchecked(d, u, v, &mut 0, None).expect("no flow to update"))
}

struct Tracker<'a> {
    flow: &'a mut FocusedGFlow,
}

fn boundary_pivot_unchecked(
    d: &mut ZxDiagram,
    u: VertexId,
    v: VertexId,
    ops: &mut u64,
    mut tracker: Option<&mut Tracker<'_>>,
) -> Result<BoundaryPivot, FlowError> {
    let b = d.boundary_of(v).expect("boundary spider");
    let on_input = d.inputs().contains(&b);
    let mut g = tracker.as_ref().map(|_| open_graph_unchecked(d));
    let extend = |g: &mut Option<crate::graph::OpenGraph>,
                      tracker: &mut Option<&mut Tracker<'_>>,
                      from: VertexId,
                      to: VertexId|
     -> Result<(), FlowError> {
        if let (Some(g), Some(t)) = (g.as_mut(), tracker.as_mut()) {
            if on_input {
                extend_input(g, t.flow, from, to)?;
            } else {
                extend_output(g, t.flow, from, to);
            }
        }
        Ok(())
    };
    let phase = d.phase(v);
    let result = if phase.is_pauli() {
        let w = unfuse_boundary(d, v, b);
        extend(&mut g, &mut tracker, v, w)?;
        if let Some(t) = tracker.as_mut() {
            *t.flow = pivot_update_unchecked(t.flow, u, v);
        }
        pivot_unchecked(d, u, v, ops);
        BoundaryPivot { inserted: vec![w], unitary: None }
    } else if phase.is_clifford() {
        let w = unfuse_boundary(d, v, b);
        extend(&mut g, &mut tracker, v, w)?;
        if let (Some(g), Some(t)) = (g.as_ref(), tracker.as_mut()) {
            *t.flow = lcomp_update_unchecked(g, t.flow, v);
        }
        lc_unchecked(d, v, ops);
        if let Some(t) = tracker.as_mut() {
            *t.flow = lcomp_update_unchecked(&open_graph_unchecked(d), t.flow, u);
        }
        lc_unchecked(d, u, ops);
        BoundaryPivot { inserted: vec![w], unitary: None }
    } else {
        let (w, x) = boundary_pivot_prep(d, v).expect("checked boundary spider");
        extend(&mut g, &mut tracker, v, w)?;
        extend(&mut g, &mut tracker, w, x)?;
        if let Some(t) = tracker.as_mut() {
            *t.flow = pivot_update_unchecked(t.flow, u, v);
        }
        pivot_unchecked(d, u, v, ops);
        BoundaryPivot { inserted: vec![w, x], unitary: Some(x) }
    };
    Ok(result)
}

/// Violations of the simplifier's fixpoint conditions, as `(condition,
/// vertex)`: 1 an interior proper Clifford spider, 2 an interior Pauli
/// spider next to another, 3 an interior Pauli spider next to a boundary
/// spider. Interior is read as [`is_effectively_interior`].
pub fn postcondition_violations(d: &ZxDiagram) -> Vec<(u8, VertexId)> {
    let mut out = Vec::new();
    for s in d.spiders() {
        if !is_effectively_interior(d, s) {
            continue;
        }
        let p = d.phase(s);
        if p.is_proper_clifford() {
            out.push((1, s));
        } else if p.is_pauli() {
            if d.neighbors(s).any(|n| is_effectively_interior(d, n) && d.phase(n).is_pauli()) {
                out.push((2, s));
            }
            if d.neighbors(s).any(|n| is_boundary_spider(d, n)) {
                out.push((3, s));
            }
        }
    }
    out
}

/// Number of interior spiders, boundary attachment being the only thing
/// that disqualifies a spider.
pub fn interior_spider_count(d: &ZxDiagram) -> usize {
    d.spiders().filter(|&s| d.is_interior(s)).count()
}

/// Runs the simplifier to its fixpoint.
pub fn clifford_simp(d: &mut ZxDiagram) -> SimpLog {
    run(d, None).expect("no flow to update")
}

/// As [`clifford_simp`], keeping `flow` a focused gFlow of the underlying
/// open graph after every step. The flow must belong to the input diagram.
pub fn clifford_simp_tracked(d: &mut ZxDiagram, flow: &mut FocusedGFlow) -> Result<SimpLog, FlowError> {
    run(d, Some(&mut Tracker { flow }))
}

fn run(d: &mut ZxDiagram, mut tracker: Option<&mut Tracker<'_>>) -> Result<SimpLog, FlowError> {
    let mut log = SimpLog::default();
    let ei = |d: &ZxDiagram, s: VertexId| d.contains(s) && is_effectively_interior(d, s);
    loop {
        let mut progress = false;

        let marked: Vec<VertexId> = d.spiders().filter(|&s| ei(d, s) && d.phase(s).is_proper_clifford()).collect();
        for u in marked {
            if !ei(d, u) || !d.phase(u).is_proper_clifford() {
                continue;
            }
            if let Some(t) = tracker.as_mut() {
                *t.flow = lcomp_update_unchecked(&open_graph_unchecked(d), t.flow, u);
            }
            let phase = d.phase(u);
            let neighbours = lc_unchecked(d, u, &mut log.ops);
            log.steps.push(SimpStep::LCompSimp { u, phase, neighbours });
            progress = true;
        }

        let paulis: Vec<VertexId> = d.spiders().filter(|&s| ei(d, s) && d.phase(s).is_pauli()).collect();
        for &u in &paulis {
            if !ei(d, u) || !d.phase(u).is_pauli() {
                continue;
            }
            let partner = d.neighbors(u).filter(|&n| ei(d, n) && d.phase(n).is_pauli()).min();
            if let Some(v) = partner {
                if let Some(t) = tracker.as_mut() {
                    *t.flow = pivot_update_unchecked(t.flow, u, v);
                }
                pivot_unchecked(d, u, v, &mut log.ops);
                log.steps.push(SimpStep::PivotSimp { u, v });
                progress = true;
            }
        }

        let paulis: Vec<VertexId> = d.spiders().filter(|&s| ei(d, s) && d.phase(s).is_pauli()).collect();
        for u in paulis {
            if !ei(d, u) || !d.phase(u).is_pauli() {
                continue;
            }
            let partner = d.neighbors(u).filter(|&n| is_boundary_spider(d, n)).min();
            if let Some(v) = partner {
                let bp = boundary_pivot_unchecked(d, u, v, &mut log.ops, tracker.as_deref_mut())?;
                log.steps.push(SimpStep::BoundaryPivot {
                    u,
                    boundary_spider: v,
                    inserted: bp.inserted,
                    unitary: bp.unitary,
                });
                progress = true;
            }
        }

        let isolated: Vec<VertexId> =
            d.spiders().filter(|&s| d.degree(s) == 0 && d.phase(s) != Phase::PI).collect();
        for v in isolated {
            if let Some(t) = tracker.as_mut() {
                t.flow.g.remove(&v);
                t.flow.order.remove(&v);
            }
            d.remove_vertex(v);
            log.steps.push(SimpStep::ScalarRemoval { v });
            progress = true;
        }

        if !progress {
            return Ok(log);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_to_diagram, Circuit, Gate};
    use crate::gflow::{circuit_gflow, verify_focused_gflow};
    use crate::graph::underlying_open_graph;
    use crate::rules::{is_graph_like, to_graph_like};
    use crate::semantics::{diagram_equals_circuit, diagrams_equal};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    /// Spiders `0..n`, each of the first `bound` attached to its own output,
    /// joined by Hadamard edges.
    fn open_diagram(phases: &[Phase], bound: usize, edges: &[(usize, usize)]) -> ZxDiagram {
        let mut d = ZxDiagram::new();
        for &p in phases {
            d.add_vertex(VertexKind::Z, p);
        }
        for &(a, b) in edges {
            d.toggle_hadamard(a, b);
        }
        let mut outs = Vec::new();
        for s in 0..bound {
            let o = d.add_vertex(VertexKind::Boundary, Phase::ZERO);
            d.add_edge(s, o, EdgeKind::Simple);
            outs.push(o);
        }
        d.set_outputs(outs);
        d
    }

    fn quarter(rng: &mut impl Rng) -> Phase {
        Phase::new(rng.gen_range(0..8), 4)
    }

    fn random_circuit(rng: &mut impl Rng, qubits: usize, gates: usize, p_t: f64) -> Circuit {
        let mut c = Circuit::new(qubits);
        for _ in 0..gates {
            let a = rng.gen_range(0..qubits);
            let b = (a + rng.gen_range(1..qubits)) % qubits;
            let g = if rng.gen_bool(p_t) {
                Gate::t(a)
            } else {
                match rng.gen_range(0..4) {
                    0 => Gate::H(a),
                    1 => Gate::s(a),
                    2 => Gate::cnot(a, b),
                    _ => Gate::Cz(a, b),
                }
            };
            c.push(g).unwrap();
        }
        c
    }

    fn graph_like(c: &Circuit) -> ZxDiagram {
        let mut d = circuit_to_diagram(c);
        to_graph_like(&mut d);
        d
    }

    #[test]
    fn lc_single_neighbour() {
        let a = Phase::QUARTER_PI;
        let mut d = open_diagram(&[a, Phase::HALF_PI], 1, &[(0, 1)]);
        let before = d.clone();
        assert_eq!(lc_simp(&mut d, 1).unwrap(), vec![0]);
        assert!(!d.contains(1));
        assert_eq!(d.phase(0), a - Phase::HALF_PI);
        assert!(diagrams_equal(&before, &d, TOL).unwrap());
    }

    #[test]
    fn lc_joins_two_neighbours() {
        let mut d = open_diagram(&[Phase::ZERO, Phase::ZERO, Phase::MINUS_HALF_PI], 2, &[(0, 2), (1, 2)]);
        let before = d.clone();
        lc_simp(&mut d, 2).unwrap();
        assert!(d.connected(0, 1));
        assert_eq!(d.phase(0), Phase::HALF_PI);
        assert_eq!(d.phase(1), Phase::HALF_PI);
        assert!(diagrams_equal(&before, &d, TOL).unwrap());
    }

    #[test]
    fn lc_calibration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            for alpha in [Phase::HALF_PI, Phase::MINUS_HALF_PI] {
                for _ in 0..6 {
                    let mut phases: Vec<Phase> = (0..n).map(|_| quarter(&mut rng)).collect();
                    phases.push(alpha);
                    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, n)).collect();
                    for i in 0..n {
                        for j in i + 1..n {
                            if rng.gen_bool(0.5) {
                                edges.push((i, j));
                            }
                        }
                    }
                    let mut d = open_diagram(&phases, n, &edges);
                    let before = d.clone();
                    lc_simp(&mut d, n).unwrap();
                    assert!(diagrams_equal(&before, &d, TOL).unwrap(), "n={n} alpha={alpha}");
                    assert!(is_graph_like(&d).is_graph_like());
                }
            }
        }
    }

    #[test]
    fn lc_errors() {
        let mut d = open_diagram(&[Phase::HALF_PI, Phase::HALF_PI], 1, &[(0, 1)]);
        assert_eq!(lc_simp(&mut d, 0), Err(SimpError::NotInterior(0)));
        let mut d = open_diagram(&[Phase::ZERO, Phase::PI], 1, &[(0, 1)]);
        assert_eq!(lc_simp(&mut d, 1), Err(SimpError::NotProperClifford(1)));
        assert_eq!(lc_simp(&mut d, 9), Err(SimpError::MissingVertex(9)));
    }

    /// Interior `u = 0`, `v = 1`, then regions of the given sizes attached
    /// to outputs, exclusive to `u`, common, exclusive to `v`.
    fn pivot_instance(
        rng: &mut impl Rng,
        j: i64,
        k: i64,
        sizes: [usize; 3],
        extra: f64,
    ) -> ZxDiagram {
        let n = sizes.iter().sum::<usize>();
        let mut phases: Vec<Phase> = (0..n).map(|_| quarter(rng)).collect();
        phases.push(Phase::new(j, 1));
        phases.push(Phase::new(k, 1));
        let (u, v) = (n, n + 1);
        let mut edges = vec![(u, v)];
        for i in 0..n {
            if i < sizes[0] {
                edges.push((i, u));
            } else if i < sizes[0] + sizes[1] {
                edges.push((i, u));
                edges.push((i, v));
            } else {
                edges.push((i, v));
            }
            for j in i + 1..n {
                if rng.gen_bool(extra) {
                    edges.push((i, j));
                }
            }
        }
        open_diagram(&phases, n, &edges)
    }

    #[test]
    fn pivot_private_neighbours_are_joined() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut d = pivot_instance(&mut rng, 0, 0, [1, 0, 1], 0.0);
        let (p0, p1) = (d.phase(0), d.phase(1));
        let before = d.clone();
        pivot_simp(&mut d, 2, 3).unwrap();
        assert!(d.connected(0, 1));
        assert_eq!((d.phase(0), d.phase(1)), (p0, p1));
        assert!(diagrams_equal(&before, &d, TOL).unwrap());
    }

    #[test]
    fn pivot_common_neighbour() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut d = pivot_instance(&mut rng, 1, 0, [0, 1, 0], 0.0);
        let p = d.phase(0);
        let before = d.clone();
        pivot_simp(&mut d, 1, 2).unwrap();
        assert_eq!(d.phase(0), p);
        assert!(diagrams_equal(&before, &d, TOL).unwrap());
    }

    #[test]
    fn pivot_calibration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for j in 0..2 {
            for k in 0..2 {
                for a in 0..=3 {
                    for b in 0..=3 {
                        for c in 0..=3 {
                            if a + b + c > 8 {
                                continue;
                            }
                            let mut d = pivot_instance(&mut rng, j, k, [a, b, c], 0.4);
                            let n = a + b + c;
                            let before = d.clone();
                            pivot_simp(&mut d, n, n + 1).unwrap();
                            assert!(
                                diagrams_equal(&before, &d, TOL).unwrap(),
                                "j={j} k={k} regions={a},{b},{c}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pivot_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut d = pivot_instance(&mut rng, 0, 0, [1, 0, 1], 0.0);
        assert_eq!(pivot_simp(&mut d, 0, 2), Err(SimpError::NotInterior(0)));
        d.set_phase(3, Phase::HALF_PI);
        assert_eq!(pivot_simp(&mut d, 2, 3), Err(SimpError::NotPauli(3)));
        let mut d = open_diagram(&[Phase::ZERO; 4], 2, &[(0, 2), (1, 3)]);
        assert_eq!(pivot_simp(&mut d, 2, 3), Err(SimpError::NotAdjacent(2, 3)));
    }

    #[test]
    fn prep_moves_phase_outward() {
        for alpha in [Phase::ZERO, Phase::QUARTER_PI, Phase::PI, Phase::HALF_PI] {
            let mut d = open_diagram(&[Phase::new(3, 4), alpha], 2, &[(0, 1)]);
            let before = d.clone();
            let (w, x) = boundary_pivot_prep(&mut d, 1).unwrap();
            assert_eq!(d.phase(1), Phase::ZERO);
            assert!(d.is_interior(1));
            assert_eq!(d.phase(w), Phase::ZERO);
            assert_eq!(d.phase(x), alpha);
            assert!(d.boundary_of(x).is_some());
            assert!(is_graph_like(&d).is_graph_like());
            assert!(diagrams_equal(&before, &d, TOL).unwrap());
        }
        let mut d = open_diagram(&[Phase::ZERO, Phase::ZERO], 1, &[(0, 1)]);
        assert_eq!(boundary_pivot_prep(&mut d, 1), Err(SimpError::NotBoundarySpider(1)));
    }

    #[test]
    fn prep_then_pivot_is_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            // 0, 1 boundary spiders; 2 the boundary spider to peel; 3 interior Pauli
            let phases = [quarter(&mut rng), quarter(&mut rng), quarter(&mut rng), Phase::new(rng.gen_range(0..2), 1)];
            let mut edges = vec![(2, 3), (0, 3)];
            if rng.gen_bool(0.5) {
                edges.push((1, 2));
            }
            if rng.gen_bool(0.5) {
                edges.push((1, 3));
            }
            let mut d = open_diagram(&phases, 3, &edges);
            let before = d.clone();
            boundary_pivot_prep(&mut d, 2).unwrap();
            pivot_simp(&mut d, 3, 2).unwrap();
            assert!(diagrams_equal(&before, &d, TOL).unwrap());
        }
    }

    #[test]
    fn boundary_pivot_all_phase_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for q in 0..8 {
            for _ in 0..10 {
                let phases = [quarter(&mut rng), quarter(&mut rng), Phase::new(q, 4), Phase::new(rng.gen_range(0..2), 1)];
                let mut edges = vec![(2, 3), (0, 3)];
                for e in [(1, 2), (1, 3), (0, 2), (0, 1)] {
                    if rng.gen_bool(0.5) {
                        edges.push(e);
                    }
                }
                let mut d = open_diagram(&phases, 3, &edges);
                if !is_effectively_interior(&d, 3) {
                    assert_eq!(boundary_pivot(&mut d, 3, 2), Err(SimpError::NotInterior(3)));
                    continue;
                }
                let before = d.clone();
                let spiders = d.num_spiders();
                let bp = boundary_pivot(&mut d, 3, 2).unwrap();
                assert!(!d.contains(3) && !d.contains(2));
                assert!(is_graph_like(&d).is_graph_like());
                assert!(diagrams_equal(&before, &d, TOL).unwrap(), "phase {q}/4");
                if Phase::new(q, 4).is_clifford() {
                    assert_eq!(d.num_spiders(), spiders - 1);
                    assert_eq!(bp.unitary, None);
                } else {
                    assert!(is_wire_unitary(&d, bp.unitary.unwrap()));
                }
            }
        }
    }

    #[test]
    fn clifford_circuits_lose_all_interior_spiders() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..30 {
            let c = random_circuit(&mut rng, 4, 60, 0.0);
            let mut d = graph_like(&c);
            let initial = d.num_spiders();
            let log = clifford_simp(&mut d);
            assert!(log.steps.len() <= initial);
            assert_eq!(interior_spider_count(&d), 0);
            assert!(postcondition_violations(&d).is_empty());
            assert!(is_graph_like(&d).is_graph_like());
            assert!(diagram_equals_circuit(&d, &c, TOL).unwrap());
        }
    }

    #[test]
    fn clifford_t_postconditions_and_soundness() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p_t in [0.05, 0.1, 0.3] {
            for _ in 0..15 {
                let q = rng.gen_range(2..=5);
                let c = random_circuit(&mut rng, q, 70, p_t);
                let mut d = graph_like(&c);
                let initial = d.num_spiders();
                let log = clifford_simp(&mut d);
                assert!(log.steps.len() <= initial);
                assert_eq!(postcondition_violations(&d), vec![]);
                assert!(is_graph_like(&d).is_graph_like());
                assert!(diagram_equals_circuit(&d, &c, TOL).unwrap());
            }
        }
    }

    #[test]
    fn every_step_is_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let c = random_circuit(&mut rng, 3, 30, 0.15);
            let d0 = graph_like(&c);
            let log = clifford_simp(&mut d0.clone());
            for upto in 0..=log.steps.len() {
                let mut d = d0.clone();
                replay(&mut d, &log.steps[..upto]);
                assert!(diagram_equals_circuit(&d, &c, TOL).unwrap(), "after {upto} steps");
            }
        }
    }

    fn replay(d: &mut ZxDiagram, steps: &[SimpStep]) {
        for s in steps {
            match s {
                SimpStep::LCompSimp { u, .. } => {
                    lc_simp(d, *u).unwrap();
                }
                SimpStep::PivotSimp { u, v } => pivot_simp(d, *u, *v).unwrap(),
                SimpStep::BoundaryPivot { u, boundary_spider, .. } => {
                    boundary_pivot(d, *u, *boundary_spider).unwrap();
                }
                SimpStep::ScalarRemoval { v } => d.remove_vertex(*v),
            }
        }
    }

    #[test]
    fn tracked_flow_stays_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for p_t in [0.0, 0.1, 0.3] {
            for _ in 0..10 {
                let q = rng.gen_range(2..=5);
                let c = random_circuit(&mut rng, q, 50, p_t);
                let mut d = graph_like(&c);
                let (_, mut flow) = circuit_gflow(&d).unwrap();
                clifford_simp_tracked(&mut d, &mut flow).unwrap();
                let g = underlying_open_graph(&d).unwrap();
                assert_eq!(verify_focused_gflow(&g, &flow).unwrap(), None);
            }
        }
    }

    #[test]
    fn fixpoint_and_log_format() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let c = random_circuit(&mut rng, 4, 40, 0.2);
        let mut d = graph_like(&c);
        let log = clifford_simp(&mut d);
        let text = log.to_jsonl();
        let parsed: Vec<SimpStep> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(parsed, log.steps);
        let snapshot = d.to_json();
        let again = clifford_simp(&mut d);
        assert!(again.steps.is_empty());
        assert_eq!(d.to_json(), snapshot);
    }

    #[test]
    fn four_t_gates_leave_non_clifford_skeleton() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let mut c = random_circuit(&mut rng, 8, 80, 0.0);
        for q in [1, 3, 5, 6] {
            c.push(Gate::t(q)).unwrap();
            c.append(&random_circuit(&mut rng, 8, 20, 0.0)).unwrap();
        }
        let mut d = graph_like(&c);
        clifford_simp(&mut d);
        let interior: Vec<VertexId> = d.spiders().filter(|&s| is_effectively_interior(&d, s)).collect();
        assert!(interior.len() <= 4);
        for s in interior {
            assert!(!d.phase(s).is_clifford());
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn simplify_postconditions(seed in 0u64..10_000, q in 2usize..=5, p_t in 0.0f64..0.4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_circuit(&mut rng, q, 40, p_t);
            let mut d = graph_like(&c);
            let initial = d.num_spiders();
            let log = clifford_simp(&mut d);
            proptest::prop_assert!(log.steps.len() <= initial);
            proptest::prop_assert!(postcondition_violations(&d).is_empty());
            proptest::prop_assert!(diagram_equals_circuit(&d, &c, TOL).unwrap());
        }
    }
}
