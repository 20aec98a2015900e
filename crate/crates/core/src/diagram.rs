//! The ZX-diagram data structure.
//!
//! Vertices are addressed by stable integer ids that are never reused. Edges
//! are stored per unordered vertex pair as a multiplicity of plain and
//! Hadamard wires; rewrites may leave transient parallel edges or self-loops
//! behind, which [`normalize_multiedges`](crate::rules::normalize_multiedges)
//! resolves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::phase::Phase;

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    #[serde(rename = "B")]
    Boundary,
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "X")]
    X,
}

impl VertexKind {
    pub fn is_spider(self) -> bool {
        !matches!(self, VertexKind::Boundary)
    }

    pub fn toggled(self) -> VertexKind {
        match self {
            VertexKind::Z => VertexKind::X,
            VertexKind::X => VertexKind::Z,
            VertexKind::Boundary => VertexKind::Boundary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    #[serde(rename = "s")]
    Simple,
    #[serde(rename = "h")]
    Hadamard,
}

impl EdgeKind {
    pub fn toggled(self) -> EdgeKind {
        match self {
            EdgeKind::Simple => EdgeKind::Hadamard,
            EdgeKind::Hadamard => EdgeKind::Simple,
        }
    }

    /// Kind of the wire obtained by composing two wires end to end.
    pub fn compose(self, other: EdgeKind) -> EdgeKind {
        if self == other {
            EdgeKind::Simple
        } else {
            EdgeKind::Hadamard
        }
    }
}

/// Number of plain and Hadamard wires between one pair of vertices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeMult {
    pub simple: u32,
    pub hadamard: u32,
}

impl EdgeMult {
    pub fn total(self) -> u32 {
        self.simple + self.hadamard
    }

    pub fn is_empty(self) -> bool {
        self.total() == 0
    }

    fn count_mut(&mut self, kind: EdgeKind) -> &mut u32 {
        match kind {
            EdgeKind::Simple => &mut self.simple,
            EdgeKind::Hadamard => &mut self.hadamard,
        }
    }

    /// The single edge kind, if exactly one wire is present.
    pub fn single(self) -> Option<EdgeKind> {
        match (self.simple, self.hadamard) {
            (1, 0) => Some(EdgeKind::Simple),
            (0, 1) => Some(EdgeKind::Hadamard),
            _ => None,
        }
    }
}

/// Row interval `[first, last]` of the circuit layers a spider was fused from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowSpan {
    pub first: i64,
    pub last: i64,
}

impl RowSpan {
    pub fn at(row: i64) -> RowSpan {
        RowSpan { first: row, last: row }
    }

    pub fn union(self, other: RowSpan) -> RowSpan {
        RowSpan {
            first: self.first.min(other.first),
            last: self.last.max(other.last),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexData {
    pub kind: VertexKind,
    pub phase: Phase,
    pub qubit: Option<i64>,
    pub row: Option<RowSpan>,
}

impl VertexData {
    pub fn new(kind: VertexKind, phase: Phase) -> VertexData {
        VertexData { kind, phase, qubit: None, row: None }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),
    #[error("boundary vertex {0} is assigned more than once")]
    DuplicateBoundary(VertexId),
    #[error("vertex {0} is listed as input/output but is not a boundary")]
    NotBoundary(VertexId),
    #[error("boundary vertex {0} must have degree 1, found {1}")]
    BoundaryDegree(VertexId, u32),
    #[error("boundary vertex {0} is neither an input nor an output")]
    UnassignedBoundary(VertexId),
    #[error("boundary vertex {0} cannot carry a phase")]
    BoundaryPhase(VertexId),
    #[error("duplicate vertex id {0}")]
    DuplicateId(VertexId),
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Default)]
pub struct ZxDiagram {
    vertices: Vec<Option<VertexData>>,
    adj: Vec<BTreeMap<VertexId, EdgeMult>>,
    inputs: Vec<VertexId>,
    outputs: Vec<VertexId>,
    live: usize,
}

impl ZxDiagram {
    pub fn new() -> ZxDiagram {
        ZxDiagram::default()
    }

    pub fn add_vertex(&mut self, kind: VertexKind, phase: Phase) -> VertexId {
        self.add_vertex_with(VertexData::new(kind, phase))
    }

    pub fn add_vertex_with(&mut self, mut data: VertexData) -> VertexId {
        if data.kind == VertexKind::Boundary {
            data.phase = Phase::ZERO;
        }
        let id = self.vertices.len();
        self.vertices.push(Some(data));
        self.adj.push(BTreeMap::new());
        self.live += 1;
        id
    }

    /// Adds a wire; parallel wires and self-loops accumulate.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, kind: EdgeKind) {
        *self.adj[u].entry(v).or_default().count_mut(kind) += 1;
        if u != v {
            *self.adj[v].entry(u).or_default().count_mut(kind) += 1;
        }
    }

    /// Toggles the presence of a single Hadamard edge between two distinct
    /// Z-spiders: the graph-like combination of adding a wire and cancelling a
    /// parallel pair.
    pub fn toggle_hadamard(&mut self, u: VertexId, v: VertexId) {
        debug_assert!(u != v);
        let present = self.edge(u, v).hadamard > 0;
        if present {
            self.remove_edge(u, v, EdgeKind::Hadamard);
        } else {
            self.add_edge(u, v, EdgeKind::Hadamard);
        }
    }

    /// Removes one wire of the given kind, if present.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId, kind: EdgeKind) -> bool {
        let Some(m) = self.adj[u].get_mut(&v) else { return false };
        let c = m.count_mut(kind);
        if *c == 0 {
            return false;
        }
        *c -= 1;
        if m.is_empty() {
            self.adj[u].remove(&v);
        }
        if u != v {
            let m = self.adj[v].get_mut(&u).expect("symmetric adjacency");
            *m.count_mut(kind) -= 1;
            if m.is_empty() {
                self.adj[v].remove(&u);
            }
        }
        true
    }

    /// Removes every wire between `u` and `v`.
    pub fn remove_all_edges(&mut self, u: VertexId, v: VertexId) -> EdgeMult {
        let m = self.adj[u].remove(&v).unwrap_or_default();
        if u != v {
            self.adj[v].remove(&u);
        }
        m
    }

    pub fn set_edge(&mut self, u: VertexId, v: VertexId, kind: EdgeKind) {
        self.remove_all_edges(u, v);
        self.add_edge(u, v, kind);
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        let nbrs: Vec<VertexId> = self.adj[v].keys().copied().collect();
        for n in nbrs {
            if n != v {
                self.adj[n].remove(&v);
            }
        }
        self.adj[v].clear();
        if self.vertices[v].take().is_some() {
            self.live -= 1;
        }
        self.inputs.retain(|&b| b != v);
        self.outputs.retain(|&b| b != v);
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.get(v).is_some_and(|d| d.is_some())
    }

    pub fn vertex(&self, v: VertexId) -> &VertexData {
        self.vertices[v].as_ref().expect("live vertex")
    }

    pub fn vertex_mut(&mut self, v: VertexId) -> &mut VertexData {
        self.vertices[v].as_mut().expect("live vertex")
    }

    pub fn get(&self, v: VertexId) -> Option<&VertexData> {
        self.vertices.get(v).and_then(|d| d.as_ref())
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.vertex(v).kind
    }

    pub fn phase(&self, v: VertexId) -> Phase {
        self.vertex(v).phase
    }

    pub fn set_phase(&mut self, v: VertexId, p: Phase) {
        self.vertex_mut(v).phase = p;
    }

    pub fn add_to_phase(&mut self, v: VertexId, p: Phase) {
        let d = self.vertex_mut(v);
        d.phase += p;
    }

    pub fn num_vertices(&self) -> usize {
        self.live
    }

    /// One past the largest id ever allocated.
    pub fn id_bound(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.as_ref().map(|_| i))
    }

    pub fn spiders(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(move |&v| self.kind(v).is_spider())
    }

    pub fn num_spiders(&self) -> usize {
        self.spiders().count()
    }

    /// Distinct neighbours (excluding `v` itself on self-loops), ascending.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v].keys().copied().filter(move |&n| n != v)
    }

    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = (VertexId, EdgeMult)> + '_ {
        self.adj[v].iter().map(|(&n, &m)| (n, m))
    }

    pub fn edge(&self, u: VertexId, v: VertexId) -> EdgeMult {
        self.adj[u].get(&v).copied().unwrap_or_default()
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u].contains_key(&v)
    }

    /// Number of wire ends at `v`; a self-loop counts twice.
    pub fn degree(&self, v: VertexId) -> u32 {
        self.adj[v]
            .iter()
            .map(|(&n, m)| if n == v { 2 * m.total() } else { m.total() })
            .sum()
    }

    pub fn num_edges(&self) -> usize {
        let mut total = 0;
        for v in self.vertices() {
            for (&n, m) in &self.adj[v] {
                if n >= v {
                    total += m.total() as usize;
                }
            }
        }
        total
    }

    /// All wires as `(u, v, kind)` with `u <= v`, one entry per wire.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, EdgeKind)> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for (&n, m) in &self.adj[v] {
                if n >= v {
                    for _ in 0..m.simple {
                        out.push((v, n, EdgeKind::Simple));
                    }
                    for _ in 0..m.hadamard {
                        out.push((v, n, EdgeKind::Hadamard));
                    }
                }
            }
        }
        out
    }

    pub fn inputs(&self) -> &[VertexId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[VertexId] {
        &self.outputs
    }

    pub fn set_inputs(&mut self, inputs: Vec<VertexId>) {
        self.inputs = inputs;
    }

    pub fn set_outputs(&mut self, outputs: Vec<VertexId>) {
        self.outputs = outputs;
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.kind(v) == VertexKind::Boundary
    }

    /// The boundary vertex attached to spider `v`, if any (the first by id).
    pub fn boundary_of(&self, v: VertexId) -> Option<VertexId> {
        self.neighbors(v).find(|&n| self.is_boundary(n))
    }

    /// A spider is interior when none of its neighbours is a boundary vertex.
    pub fn is_interior(&self, v: VertexId) -> bool {
        self.kind(v).is_spider() && self.boundary_of(v).is_none()
    }

    /// Checks every structural invariant that is independent of rewriting
    /// state (boundary assignment and degree, phaseless boundaries).
    pub fn validate(&self) -> Result<(), DiagramError> {
        let mut seen = std::collections::BTreeSet::new();
        for &b in self.inputs.iter().chain(&self.outputs) {
            if !self.contains(b) {
                return Err(DiagramError::MissingVertex(b));
            }
            if !self.is_boundary(b) {
                return Err(DiagramError::NotBoundary(b));
            }
            if !seen.insert(b) {
                return Err(DiagramError::DuplicateBoundary(b));
            }
        }
        for v in self.vertices() {
            if self.is_boundary(v) {
                if !seen.contains(&v) {
                    return Err(DiagramError::UnassignedBoundary(v));
                }
                let deg = self.degree(v);
                if deg != 1 {
                    return Err(DiagramError::BoundaryDegree(v, deg));
                }
                if !self.phase(v).is_zero() {
                    return Err(DiagramError::BoundaryPhase(v));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DiagramDoc::from(self)).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<ZxDiagram, DiagramError> {
        let doc: DiagramDoc =
            serde_json::from_str(text).map_err(|e| DiagramError::Malformed(e.to_string()))?;
        doc.build()
    }
}

/// Serialised form of a diagram. Field order is stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<(VertexId, VertexId, EdgeKind)>,
    pub inputs: Vec<VertexId>,
    pub outputs: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: VertexId,
    pub kind: VertexKind,
    pub phase: Phase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<RowSpan>,
}

impl From<&ZxDiagram> for DiagramDoc {
    fn from(d: &ZxDiagram) -> DiagramDoc {
        DiagramDoc {
            vertices: d
                .vertices()
                .map(|v| {
                    let data = d.vertex(v);
                    VertexDoc {
                        id: v,
                        kind: data.kind,
                        phase: data.phase,
                        qubit: data.qubit,
                        row: data.row,
                    }
                })
                .collect(),
            edges: d.edges(),
            inputs: d.inputs.clone(),
            outputs: d.outputs.clone(),
        }
    }
}

impl DiagramDoc {
    /// Builds a diagram, preserving the given ids (gaps become dead ids).
    pub fn build(&self) -> Result<ZxDiagram, DiagramError> {
        let mut d = ZxDiagram::new();
        let bound = self.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0);
        let mut present = vec![false; bound];
        for v in &self.vertices {
            if present[v.id] {
                return Err(DiagramError::DuplicateId(v.id));
            }
            present[v.id] = true;
        }
        let mut by_id: BTreeMap<VertexId, &VertexDoc> = BTreeMap::new();
        for v in &self.vertices {
            by_id.insert(v.id, v);
        }
        for id in 0..bound {
            match by_id.get(&id) {
                Some(v) => {
                    if v.kind == VertexKind::Boundary && !v.phase.is_zero() {
                        return Err(DiagramError::BoundaryPhase(id));
                    }
                    d.add_vertex_with(VertexData {
                        kind: v.kind,
                        phase: v.phase,
                        qubit: v.qubit,
                        row: v.row,
                    });
                }
                None => {
                    let placeholder = d.add_vertex(VertexKind::Z, Phase::ZERO);
                    d.vertices[placeholder] = None;
                    d.live -= 1;
                }
            }
        }
        for &(u, v, k) in &self.edges {
            if !d.contains(u) {
                return Err(DiagramError::MissingVertex(u));
            }
            if !d.contains(v) {
                return Err(DiagramError::MissingVertex(v));
            }
            d.add_edge(u, v, k);
        }
        d.inputs = self.inputs.clone();
        d.outputs = self.outputs.clone();
        d.validate()?;
        Ok(d)
    }
}

/// Raw element descriptions for [`build`].
#[derive(Debug, Clone)]
pub enum Element {
    Spider { kind: VertexKind, phase: Phase },
    Input,
    Output,
}

/// Builds a diagram from element descriptions (ids are list positions) and
/// wires between them. Inputs and outputs are ordered by position.
pub fn build(
    elements: &[Element],
    wires: &[(usize, usize, EdgeKind)],
) -> Result<ZxDiagram, DiagramError> {
    let mut d = ZxDiagram::new();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for e in elements {
        match e {
            Element::Spider { kind, phase } => {
                if *kind == VertexKind::Boundary {
                    return Err(DiagramError::Malformed(
                        "use Element::Input/Output for boundaries".into(),
                    ));
                }
                d.add_vertex(*kind, *phase);
            }
            Element::Input => inputs.push(d.add_vertex(VertexKind::Boundary, Phase::ZERO)),
            Element::Output => outputs.push(d.add_vertex(VertexKind::Boundary, Phase::ZERO)),
        }
    }
    for &(u, v, k) in wires {
        if u >= elements.len() {
            return Err(DiagramError::MissingVertex(u));
        }
        if v >= elements.len() {
            return Err(DiagramError::MissingVertex(v));
        }
        d.add_edge(u, v, k);
    }
    d.inputs = inputs;
    d.outputs = outputs;
    d.validate()?;
    Ok(d)
}
