//! Open graphs, odd neighbourhoods, local complementation and pivoting.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::diagram::{VertexId, ZxDiagram};
use crate::rules::{is_graph_like, GraphLikeReport};

pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("diagram is not graph-like: {}", .0.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotGraphLike(GraphLikeReport),
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexId),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
}

/// A simple undirected graph with designated input and output vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpenGraph {
    adj: BTreeMap<VertexId, VertexSet>,
    pub inputs: VertexSet,
    pub outputs: VertexSet,
}

impl OpenGraph {
    pub fn new() -> OpenGraph {
        OpenGraph::default()
    }

    pub fn from_edges(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        inputs: impl IntoIterator<Item = VertexId>,
        outputs: impl IntoIterator<Item = VertexId>,
    ) -> OpenGraph {
        let mut g = OpenGraph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (a, b) in edges {
            g.add_vertex(a);
            g.add_vertex(b);
            g.add_edge(a, b);
        }
        g.inputs = inputs.into_iter().collect();
        g.outputs = outputs.into_iter().collect();
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        if let Some(ns) = self.adj.remove(&v) {
            for n in ns {
                if let Some(s) = self.adj.get_mut(&n) {
                    s.remove(&v);
                }
            }
        }
        self.inputs.remove(&v);
        self.outputs.remove(&v);
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) {
        debug_assert!(a != b, "open graphs have no self-loops");
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
    }

    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) {
        if let Some(s) = self.adj.get_mut(&a) {
            s.remove(&b);
        }
        if let Some(s) = self.adj.get_mut(&b) {
            s.remove(&a);
        }
    }

    pub fn toggle_edge(&mut self, a: VertexId, b: VertexId) {
        if self.has_edge(a, b) {
            self.remove_edge(a, b);
        } else {
            self.add_edge(a, b);
        }
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.adj.keys().copied().collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (&a, s) in &self.adj {
            for &b in s.range(a + 1..) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn neighbors(&self, v: VertexId) -> &VertexSet {
        static EMPTY: VertexSet = VertexSet::new();
        self.adj.get(&v).unwrap_or(&EMPTY)
    }

    pub fn non_outputs(&self) -> VertexSet {
        self.vertices().filter(|v| !self.outputs.contains(v)).collect()
    }

    pub fn non_inputs(&self) -> VertexSet {
        self.vertices().filter(|v| !self.inputs.contains(v)).collect()
    }

    /// Vertices with an odd number of neighbours in `a`.
    pub fn odd_neighbourhood(&self, a: &VertexSet) -> VertexSet {
        let mut odd = VertexSet::new();
        for &v in a {
            for &n in self.neighbors(v) {
                if !odd.remove(&n) {
                    odd.insert(n);
                }
            }
        }
        odd
    }

    /// Complements the edges among the neighbours of `u`, in place.
    pub fn local_complement_mut(&mut self, u: VertexId) -> Result<(), GraphError> {
        if !self.contains(u) {
            return Err(GraphError::MissingVertex(u));
        }
        let ns: Vec<VertexId> = self.neighbors(u).iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                self.toggle_edge(a, b);
            }
        }
        Ok(())
    }

    pub fn local_complement(&self, u: VertexId) -> Result<OpenGraph, GraphError> {
        let mut g = self.clone();
        g.local_complement_mut(u)?;
        Ok(g)
    }

    /// Pivot along the edge `uv`: complements the edges between the three
    /// regions (common, exclusive to `u`, exclusive to `v`) of the two
    /// neighbourhoods and exchanges the neighbourhoods of `u` and `v`.
    pub fn pivot_mut(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        for x in [u, v] {
            if !self.contains(x) {
                return Err(GraphError::MissingVertex(x));
            }
        }
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAdjacent(u, v));
        }
        let (common, only_u, only_v) = self.pivot_regions(u, v);
        for (xs, ys) in [(&only_u, &only_v), (&only_u, &common), (&only_v, &common)] {
            for &x in xs {
                for &y in ys {
                    self.toggle_edge(x, y);
                }
            }
        }
        for &x in &only_u {
            self.remove_edge(u, x);
            self.add_edge(v, x);
        }
        for &x in &only_v {
            self.remove_edge(v, x);
            self.add_edge(u, x);
        }
        Ok(())
    }

    pub fn pivot(&self, u: VertexId, v: VertexId) -> Result<OpenGraph, GraphError> {
        let mut g = self.clone();
        g.pivot_mut(u, v)?;
        Ok(g)
    }

    /// The pivot computed as three local complementations, `⋆u ⋆v ⋆u`.
    pub fn pivot_by_local_complements(&self, u: VertexId, v: VertexId) -> Result<OpenGraph, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAdjacent(u, v));
        }
        let mut g = self.clone();
        g.local_complement_mut(u)?;
        g.local_complement_mut(v)?;
        g.local_complement_mut(u)?;
        Ok(g)
    }

    /// `(N(u) ∩ N(v), N(u) \ N[v], N(v) \ N[u])`.
    pub fn pivot_regions(&self, u: VertexId, v: VertexId) -> (VertexSet, VertexSet, VertexSet) {
        let nu: VertexSet = self.neighbors(u).iter().copied().filter(|&x| x != v).collect();
        let nv: VertexSet = self.neighbors(v).iter().copied().filter(|&x| x != u).collect();
        let common = nu.intersection(&nv).copied().collect();
        let only_u = nu.difference(&nv).copied().collect();
        let only_v = nv.difference(&nu).copied().collect();
        (common, only_u, only_v)
    }
}

/// Symmetric difference in place.
pub fn sym_diff_into(acc: &mut VertexSet, other: &VertexSet) {
    for &x in other {
        if !acc.remove(&x) {
            acc.insert(x);
        }
    }
}

pub fn sym_diff(a: &VertexSet, b: &VertexSet) -> VertexSet {
    a.symmetric_difference(b).copied().collect()
}

/// The open graph of a graph-like diagram: spiders, Hadamard wires, and the
/// spiders attached to inputs and outputs.
pub fn underlying_open_graph(d: &ZxDiagram) -> Result<OpenGraph, GraphError> {
    let report = is_graph_like(d);
    if !report.is_graph_like() {
        return Err(GraphError::NotGraphLike(report));
    }
    Ok(open_graph_unchecked(d))
}

pub(crate) fn open_graph_unchecked(d: &ZxDiagram) -> OpenGraph {
    let mut g = OpenGraph::new();
    for v in d.spiders() {
        g.add_vertex(v);
    }
    for (a, b, _) in d.edges() {
        if a != b && d.kind(a).is_spider() && d.kind(b).is_spider() {
            g.add_edge(a, b);
        }
    }
    let attached = |bs: &[VertexId]| -> VertexSet {
        bs.iter().filter_map(|&b| d.neighbors(b).next()).filter(|&s| d.kind(s).is_spider()).collect()
    };
    g.inputs = attached(d.inputs());
    g.outputs = attached(d.outputs());
    g
}
