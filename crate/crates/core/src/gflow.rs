//! Causal flow and focused gFlow on open graphs.
//!
//! Orders are represented by integer levels: `u ≺ v` iff `level(u) < level(v)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::diagram::{VertexId, ZxDiagram};
use crate::graph::{open_graph_unchecked, sym_diff_into, OpenGraph, VertexSet};

pub type Levels = BTreeMap<VertexId, i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalFlow {
    pub f: BTreeMap<VertexId, VertexId>,
    pub order: Levels,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FocusedGFlow {
    pub g: BTreeMap<VertexId, VertexSet>,
    pub order: Levels,
}

impl FocusedGFlow {
    /// The gFlow `g(v) = {f(v)}` induced by a causal flow. It is a gFlow but
    /// not necessarily focused.
    pub fn from_causal(flow: &CausalFlow) -> FocusedGFlow {
        FocusedGFlow {
            g: flow.f.iter().map(|(&v, &w)| (v, BTreeSet::from([w]))).collect(),
            order: flow.order.clone(),
        }
    }

    pub fn level(&self, v: VertexId) -> Option<i64> {
        self.order.get(&v).copied()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("correction map domain mismatch at vertex {0}")]
    Domain(VertexId),
    #[error("correction set of {0} contains input or unknown vertex {1}")]
    Codomain(VertexId, VertexId),
    #[error("vertex {0} has no level")]
    MissingLevel(VertexId),
    #[error("spider {0} has no qubit or row hint")]
    MissingHints(VertexId),
    #[error("non-output spider {0} has no successor on its qubit line")]
    NoSuccessor(VertexId),
    #[error("focusing did not converge within {0} steps")]
    FocusLimit(usize),
    #[error("vertex {0} is an input or output")]
    Boundary(VertexId),
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexId),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
    #[error("invalid input flow: {0}")]
    Invalid(Violation),
}

/// The first failing flow condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `Odd(g(u)) ∩ (V \ O) ≠ {u}`; carries the offending set.
    Focus(VertexId, VertexSet),
    /// `v ∈ g(u)` but not `u ≺ v`.
    Order(VertexId, VertexId),
    /// Causal flow: `f(v)` is not adjacent to `v`.
    NotNeighbour(VertexId),
    /// Causal flow: `w ~ f(v)` with `w ≠ v` but not `v ≺ w`.
    Successor(VertexId, VertexId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Focus(u, s) => write!(f, "condition 1 at {u}: Odd(g(u)) meets non-outputs in {s:?}"),
            Violation::Order(u, v) => write!(f, "condition 2 at {u}: {v} is not later than {u}"),
            Violation::NotNeighbour(v) => write!(f, "f({v}) is not a neighbour of {v}"),
            Violation::Successor(v, w) => write!(f, "{w} neighbours f({v}) but is not later than {v}"),
        }
    }
}

fn level(order: &Levels, v: VertexId) -> Result<i64, FlowError> {
    order.get(&v).copied().ok_or(FlowError::MissingLevel(v))
}

fn check_shape(g: &OpenGraph, flow: &FocusedGFlow) -> Result<(), FlowError> {
    let non_outputs = g.non_outputs();
    for &v in &non_outputs {
        if !flow.g.contains_key(&v) {
            return Err(FlowError::Domain(v));
        }
    }
    for (&u, set) in &flow.g {
        if !non_outputs.contains(&u) {
            return Err(FlowError::Domain(u));
        }
        for &w in set {
            if !g.contains(w) || g.inputs.contains(&w) {
                return Err(FlowError::Codomain(u, w));
            }
        }
    }
    for v in g.vertices() {
        level(&flow.order, v)?;
    }
    Ok(())
}

/// Checks both focused gFlow conditions. `Err` means the flow does not even
/// have the right domain; `Ok(Some(_))` reports the first violated condition.
pub fn verify_focused_gflow(g: &OpenGraph, flow: &FocusedGFlow) -> Result<Option<Violation>, FlowError> {
    check_shape(g, flow)?;
    for (&u, set) in &flow.g {
        let lu = level(&flow.order, u)?;
        let mut odd = g.odd_neighbourhood(set);
        odd.retain(|v| !g.outputs.contains(v));
        if odd.len() != 1 || !odd.contains(&u) {
            return Ok(Some(Violation::Focus(u, odd)));
        }
        for &v in set {
            if level(&flow.order, v)? <= lu {
                return Ok(Some(Violation::Order(u, v)));
            }
        }
    }
    Ok(None)
}

/// Checks the (unfocused) gFlow conditions: `u ∈ Odd(g(u))`, and every other
/// non-output in `Odd(g(u))` and every member of `g(u)` is later than `u`.
pub fn verify_gflow(g: &OpenGraph, flow: &FocusedGFlow) -> Result<Option<Violation>, FlowError> {
    check_shape(g, flow)?;
    for (&u, set) in &flow.g {
        let lu = level(&flow.order, u)?;
        let odd = g.odd_neighbourhood(set);
        if !odd.contains(&u) {
            return Ok(Some(Violation::Focus(u, odd)));
        }
        for &v in odd.iter().filter(|&&v| v != u && !g.outputs.contains(&v)) {
            if level(&flow.order, v)? <= lu {
                return Ok(Some(Violation::Focus(u, odd.clone())));
            }
        }
        for &v in set {
            if level(&flow.order, v)? <= lu {
                return Ok(Some(Violation::Order(u, v)));
            }
        }
    }
    Ok(None)
}

pub fn verify_causal_flow(g: &OpenGraph, flow: &CausalFlow) -> Result<Option<Violation>, FlowError> {
    for v in g.non_outputs() {
        let Some(&w) = flow.f.get(&v) else { return Err(FlowError::Domain(v)) };
        if g.inputs.contains(&w) || !g.contains(w) {
            return Err(FlowError::Codomain(v, w));
        }
        if !g.has_edge(v, w) {
            return Ok(Some(Violation::NotNeighbour(v)));
        }
        let lv = level(&flow.order, v)?;
        if level(&flow.order, w)? <= lv {
            return Ok(Some(Violation::Order(v, w)));
        }
        for &x in g.neighbors(w) {
            if x != v && level(&flow.order, x)? <= lv {
                return Ok(Some(Violation::Successor(v, x)));
            }
        }
    }
    Ok(None)
}

/// Builds the causal flow of a graph-like diagram obtained from a circuit,
/// using the qubit line and row interval each spider carries: `f(v)` is the
/// neighbour on the same qubit line that starts after `v` ends, and the level
/// of `v` is the last row it spans.
pub fn construct_causal_flow(d: &ZxDiagram) -> Result<(OpenGraph, CausalFlow), FlowError> {
    let g = open_graph_unchecked(d);
    let mut hints = BTreeMap::new();
    for v in g.vertices() {
        let data = d.vertex(v);
        match (data.qubit, data.row) {
            (Some(q), Some(r)) => {
                hints.insert(v, (q, r.first, r.last));
            }
            _ => return Err(FlowError::MissingHints(v)),
        }
    }
    let mut f = BTreeMap::new();
    for v in g.non_outputs() {
        let (q, _, t) = hints[&v];
        let next = g
            .neighbors(v)
            .iter()
            .filter(|w| {
                let (qw, sw, _) = hints[*w];
                qw == q && sw > t
            })
            .min_by_key(|w| (hints[*w].1, **w));
        match next {
            Some(&w) => {
                f.insert(v, w);
            }
            None => return Err(FlowError::NoSuccessor(v)),
        }
    }
    let order = hints.iter().map(|(&v, &(_, _, t))| (v, t)).collect();
    Ok((g, CausalFlow { f, order }))
}

/// Turns a gFlow into a focused one by repeatedly replacing `g(u)` with
/// `g(u) Δ g(v)` for the latest offending non-output `v ∈ Odd(g(u)) \ {u}`.
/// Vertices are processed from the latest level down, so every `g(v)` used is
/// already focused.
pub fn focus(g: &OpenGraph, flow: &FocusedGFlow) -> Result<FocusedGFlow, FlowError> {
    let mut out = flow.clone();
    let limit = g.num_vertices().pow(2).max(1);
    let mut steps = 0usize;
    let mut todo: Vec<VertexId> = out.g.keys().copied().collect();
    todo.sort_by_key(|&v| std::cmp::Reverse((out.order.get(&v).copied().unwrap_or(i64::MIN), v)));
    for u in todo {
        focus_vertex(g, &mut out, u, limit, &mut steps)?;
    }
    Ok(out)
}

fn focus_vertex(
    g: &OpenGraph,
    flow: &mut FocusedGFlow,
    u: VertexId,
    limit: usize,
    steps: &mut usize,
) -> Result<(), FlowError> {
    loop {
        let set = &flow.g[&u];
        let offending = g
            .odd_neighbourhood(set)
            .into_iter()
            .filter(|&v| v != u && !g.outputs.contains(&v))
            .max_by_key(|&v| (flow.order.get(&v).copied().unwrap_or(i64::MIN), v));
        let Some(v) = offending else { return Ok(()) };
        *steps += 1;
        if *steps > limit {
            return Err(FlowError::FocusLimit(limit));
        }
        let gv = flow.g.get(&v).cloned().ok_or(FlowError::Domain(v))?;
        sym_diff_into(flow.g.get_mut(&u).expect("domain"), &gv);
    }
}

fn require_valid(g: &OpenGraph, flow: &FocusedGFlow) -> Result<(), FlowError> {
    match verify_focused_gflow(g, flow)? {
        None => Ok(()),
        Some(v) => Err(FlowError::Invalid(v)),
    }
}

/// The focused gFlow of `(G ⋆ u) \ {u}` obtained from a focused gFlow of `G`.
/// `g` is the graph before the local complementation.
pub fn update_gflow_lcomp(g: &OpenGraph, flow: &FocusedGFlow, u: VertexId) -> Result<FocusedGFlow, FlowError> {
    if !g.contains(u) {
        return Err(FlowError::MissingVertex(u));
    }
    if g.inputs.contains(&u) || g.outputs.contains(&u) {
        return Err(FlowError::Boundary(u));
    }
    require_valid(g, flow)?;
    Ok(lcomp_update_unchecked(g, flow, u))
}

pub(crate) fn lcomp_update_unchecked(g: &OpenGraph, flow: &FocusedGFlow, u: VertexId) -> FocusedGFlow {
    let nu = g.neighbors(u);
    let r = |set: &VertexSet| -> VertexSet {
        set.iter().copied().filter(|t| nu.contains(t) && !g.outputs.contains(t)).collect()
    };
    let gu = flow.g[&u].clone();
    let ru = r(&gu);
    let mut todo: Vec<VertexId> = flow.g.keys().copied().filter(|&w| w != u).collect();
    todo.sort_by_key(|&w| std::cmp::Reverse((flow.order[&w], w)));
    let mut new_g: BTreeMap<VertexId, VertexSet> = BTreeMap::new();
    for w in todo {
        let gw = &flow.g[&w];
        let mut rw = r(gw);
        let mut next = gw.clone();
        if gw.contains(&u) {
            sym_diff_into(&mut next, &BTreeSet::from([u]));
            sym_diff_into(&mut next, &gu);
            sym_diff_into(&mut rw, &ru);
        }
        for t in rw {
            sym_diff_into(&mut next, &new_g[&t]);
        }
        new_g.insert(w, next);
    }
    let mut order = flow.order.clone();
    order.remove(&u);
    FocusedGFlow { g: new_g, order }
}

/// The focused gFlow of `(G ∧ uv) \ {u, v}`: every correction set loses `u`
/// and `v`.
pub fn update_gflow_pivot(
    g: &OpenGraph,
    flow: &FocusedGFlow,
    u: VertexId,
    v: VertexId,
) -> Result<FocusedGFlow, FlowError> {
    for x in [u, v] {
        if !g.contains(x) {
            return Err(FlowError::MissingVertex(x));
        }
        if g.inputs.contains(&x) || g.outputs.contains(&x) {
            return Err(FlowError::Boundary(x));
        }
    }
    if !g.has_edge(u, v) {
        return Err(FlowError::NotAdjacent(u, v));
    }
    require_valid(g, flow)?;
    Ok(pivot_update_unchecked(flow, u, v))
}

pub(crate) fn pivot_update_unchecked(flow: &FocusedGFlow, u: VertexId, v: VertexId) -> FocusedGFlow {
    let mut out = flow.clone();
    out.g.remove(&u);
    out.g.remove(&v);
    for set in out.g.values_mut() {
        set.remove(&u);
        set.remove(&v);
    }
    out.order.remove(&u);
    out.order.remove(&v);
    out
}

/// Output extension: `w` is added as a new output attached only to the
/// current output `v`, which becomes a non-output. Updates `g` and `flow`.
pub fn extend_output(g: &mut OpenGraph, flow: &mut FocusedGFlow, v: VertexId, w: VertexId) {
    debug_assert!(g.outputs.contains(&v) && !g.contains(w));
    let top = flow.order.values().copied().max().unwrap_or(0);
    for (&x, set) in flow.g.iter_mut() {
        if g.odd_neighbourhood(set).contains(&v) && x != v {
            sym_diff_into(set, &BTreeSet::from([w]));
        }
    }
    g.add_vertex(w);
    g.add_edge(v, w);
    g.outputs.remove(&v);
    g.outputs.insert(w);
    flow.g.insert(v, BTreeSet::from([w]));
    flow.order.insert(w, top + 1);
}

/// Input extension: `w` is added as a new input attached only to the current
/// input `v`, which becomes a non-input. Updates `g` and `flow`.
pub fn extend_input(g: &mut OpenGraph, flow: &mut FocusedGFlow, v: VertexId, w: VertexId) -> Result<(), FlowError> {
    debug_assert!(g.inputs.contains(&v) && !g.contains(w));
    let bottom = flow.order.values().copied().min().unwrap_or(0);
    g.add_vertex(w);
    g.add_edge(v, w);
    g.inputs.remove(&v);
    g.inputs.insert(w);
    flow.g.insert(w, BTreeSet::from([v]));
    flow.order.insert(w, bottom - 1);
    let limit = g.num_vertices().pow(2).max(1);
    focus_vertex(g, flow, w, limit, &mut 0)
}

/// Causal flow, lifted and focused, for a graph-like circuit diagram.
pub fn circuit_gflow(d: &ZxDiagram) -> Result<(OpenGraph, FocusedGFlow), FlowError> {
    let (g, cf) = construct_causal_flow(d)?;
    let flow = focus(&g, &FocusedGFlow::from_causal(&cf))?;
    Ok((g, flow))
}
