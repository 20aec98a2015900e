//! Primitive and derived ZX rewrite rules, and conversion to graph-like form.
//!
//! All rules rewrite the diagram in place and preserve its linear map up to a
//! non-zero scalar.

use std::fmt;

use thiserror::Error;

use crate::diagram::{EdgeKind, EdgeMult, VertexData, VertexId, VertexKind, ZxDiagram};
use crate::phase::Phase;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),
    #[error("vertex {0} is not a spider")]
    NotSpider(VertexId),
    #[error("spiders {0} and {1} have different kinds")]
    KindMismatch(VertexId, VertexId),
    #[error("vertices {0} and {1} are not joined by a plain wire")]
    NotAdjacent(VertexId, VertexId),
    #[error("vertex {0} has degree {1}, expected {2}")]
    Degree(VertexId, u32, u32),
    #[error("vertex {0} has non-zero phase {1}")]
    NonZeroPhase(VertexId, Phase),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

fn require_spider(d: &ZxDiagram, v: VertexId) -> Result<(), RuleError> {
    if !d.contains(v) {
        return Err(RuleError::MissingVertex(v));
    }
    if !d.kind(v).is_spider() {
        return Err(RuleError::NotSpider(v));
    }
    Ok(())
}

/// Moves every wire of `from` onto `to` and deletes `from`. Wires between the
/// two become self-loops on `to`.
fn merge_into(d: &mut ZxDiagram, to: VertexId, from: VertexId) {
    let wires: Vec<(VertexId, EdgeMult)> = d.incident(from).collect();
    for (n, m) in wires {
        let target = if n == from { to } else { n };
        for _ in 0..m.simple {
            d.add_edge(to, target, EdgeKind::Simple);
        }
        for _ in 0..m.hadamard {
            d.add_edge(to, target, EdgeKind::Hadamard);
        }
    }
    let gone = d.vertex(from).clone();
    let keep = d.vertex_mut(to);
    keep.phase += gone.phase;
    keep.qubit = keep.qubit.or(gone.qubit);
    keep.row = match (keep.row, gone.row) {
        (Some(a), Some(b)) => Some(a.union(b)),
        (a, b) => a.or(b),
    };
    d.remove_vertex(from);
}

/// Spider fusion across one plain wire. The merged spider keeps the smaller
/// id; remaining wires between the two become self-loops.
pub fn fuse(d: &mut ZxDiagram, u: VertexId, v: VertexId) -> Result<VertexId, RuleError> {
    require_spider(d, u)?;
    require_spider(d, v)?;
    if u == v || d.edge(u, v).simple == 0 {
        return Err(RuleError::NotAdjacent(u, v));
    }
    if d.kind(u) != d.kind(v) {
        return Err(RuleError::KindMismatch(u, v));
    }
    let (keep, gone) = (u.min(v), u.max(v));
    d.remove_edge(keep, gone, EdgeKind::Simple);
    merge_into(d, keep, gone);
    Ok(keep)
}

/// Colour change: toggles the spider kind and the kind of every incident wire.
/// Self-loops keep their kind since both of their ends are toggled.
pub fn color_change(d: &mut ZxDiagram, v: VertexId) -> Result<(), RuleError> {
    require_spider(d, v)?;
    let wires: Vec<(VertexId, EdgeMult)> = d.incident(v).filter(|&(n, _)| n != v).collect();
    for (n, m) in wires {
        d.remove_all_edges(v, n);
        for _ in 0..m.simple {
            d.add_edge(v, n, EdgeKind::Hadamard);
        }
        for _ in 0..m.hadamard {
            d.add_edge(v, n, EdgeKind::Simple);
        }
    }
    let data = d.vertex_mut(v);
    data.kind = data.kind.toggled();
    Ok(())
}

/// Removes a phase-free spider of degree two, joining its neighbours by a
/// wire whose kind composes the two removed wires.
pub fn remove_identity(d: &mut ZxDiagram, v: VertexId) -> Result<(), RuleError> {
    require_spider(d, v)?;
    let deg = d.degree(v);
    if deg != 2 || d.edge(v, v).total() > 0 {
        return Err(RuleError::Degree(v, deg, 2));
    }
    if !d.phase(v).is_zero() {
        return Err(RuleError::NonZeroPhase(v, d.phase(v)));
    }
    let mut ends = Vec::new();
    for (n, m) in d.incident(v) {
        for _ in 0..m.simple {
            ends.push((n, EdgeKind::Simple));
        }
        for _ in 0..m.hadamard {
            ends.push((n, EdgeKind::Hadamard));
        }
    }
    let (a, ka) = ends[0];
    let (b, kb) = ends[1];
    d.remove_vertex(v);
    d.add_edge(a, b, ka.compose(kb));
    Ok(())
}

/// Removes self-loops and resolves parallel wires between spiders until
/// neither remains:
///
/// * a plain self-loop is dropped, a Hadamard self-loop adds π;
/// * same-kind spiders with a plain wire among parallel wires are fused;
/// * parallel Hadamard wires between same-kind spiders cancel in pairs;
/// * parallel plain wires between opposite-kind spiders cancel in pairs
///   (antipode); a remaining Hadamard wire there is handled by colour
///   changing the larger id and fusing.
///
/// Returns the number of rewrites applied.
pub fn normalize_multiedges(d: &mut ZxDiagram) -> usize {
    let mut steps = 0;
    loop {
        let mut changed = false;
        let spiders: Vec<VertexId> = d.spiders().collect();
        for v in spiders {
            if !d.contains(v) {
                continue;
            }
            let lp = d.edge(v, v);
            if lp.total() > 0 {
                d.remove_all_edges(v, v);
                if lp.hadamard % 2 == 1 {
                    d.add_to_phase(v, Phase::PI);
                }
                steps += 1;
                changed = true;
            }
            let nbrs: Vec<VertexId> = d.neighbors(v).filter(|&n| n > v).collect();
            for n in nbrs {
                if !d.contains(v) || !d.contains(n) || !d.kind(n).is_spider() {
                    continue;
                }
                let m = d.edge(v, n);
                if m.total() < 2 {
                    continue;
                }
                if d.kind(v) == d.kind(n) {
                    if m.simple > 0 {
                        fuse(d, v, n).expect("plain wire between same-kind spiders");
                    } else {
                        d.remove_all_edges(v, n);
                        if m.hadamard % 2 == 1 {
                            d.add_edge(v, n, EdgeKind::Hadamard);
                        }
                    }
                } else if m.simple >= 2 {
                    d.remove_all_edges(v, n);
                    for _ in 0..m.simple % 2 {
                        d.add_edge(v, n, EdgeKind::Simple);
                    }
                    for _ in 0..m.hadamard {
                        d.add_edge(v, n, EdgeKind::Hadamard);
                    }
                } else {
                    color_change(d, n).expect("spider");
                }
                steps += 1;
                changed = true;
            }
        }
        if !changed {
            return steps;
        }
    }
}

/// Antipode: a Z- and an X-spider joined by exactly two plain wires are
/// disconnected.
pub fn apply_antipode(d: &mut ZxDiagram, u: VertexId, v: VertexId) -> Result<(), RuleError> {
    require_spider(d, u)?;
    require_spider(d, v)?;
    if d.kind(u) != VertexKind::Z || d.kind(v) != VertexKind::X {
        return Err(RuleError::Precondition(format!("{u} must be Z and {v} must be X")));
    }
    let m = d.edge(u, v);
    if m.simple != 2 || m.hadamard != 0 {
        return Err(RuleError::Precondition(format!(
            "{u} and {v} must be joined by exactly two plain wires"
        )));
    }
    d.remove_all_edges(u, v);
    Ok(())
}

/// π-copy: the π of an X(π) state plugged into a Z(α) spider is pushed
/// through it. The state becomes phase-free, α is negated and an X(π) is
/// placed on each of the remaining wires.
///
/// Returns the ids of the new X(π) spiders in wire order.
pub fn apply_pi_copy(d: &mut ZxDiagram, x: VertexId, z: VertexId) -> Result<Vec<VertexId>, RuleError> {
    require_spider(d, x)?;
    require_spider(d, z)?;
    if d.kind(x) != VertexKind::X || d.phase(x) != Phase::PI {
        return Err(RuleError::Precondition(format!("{x} must be an X(π) spider")));
    }
    if d.degree(x) != 1 || d.edge(x, z).simple != 1 {
        return Err(RuleError::Precondition(format!("{x} must have a single plain wire to {z}")));
    }
    if d.kind(z) != VertexKind::Z {
        return Err(RuleError::Precondition(format!("{z} must be a Z spider")));
    }
    if d.edge(z, z).total() > 0 {
        return Err(RuleError::Precondition(format!("{z} has a self-loop")));
    }
    d.set_phase(x, Phase::ZERO);
    let p = d.phase(z);
    d.set_phase(z, -p);
    let mut created = Vec::new();
    let wires: Vec<(VertexId, EdgeMult)> = d.incident(z).filter(|&(n, _)| n != x).collect();
    for (n, m) in wires {
        d.remove_all_edges(z, n);
        let kinds = std::iter::repeat_n(EdgeKind::Simple, m.simple as usize)
            .chain(std::iter::repeat_n(EdgeKind::Hadamard, m.hadamard as usize));
        for k in kinds {
            let c = d.add_vertex_with(VertexData {
                kind: VertexKind::X,
                phase: Phase::PI,
                qubit: d.vertex(z).qubit,
                row: d.vertex(z).row,
            });
            d.add_edge(z, c, EdgeKind::Simple);
            d.add_edge(c, n, k);
            created.push(c);
        }
    }
    Ok(created)
}

/// One violated condition of the graph-like definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: u8,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {}: {}", self.condition, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphLikeReport {
    pub violations: Vec<Violation>,
}

impl GraphLikeReport {
    pub fn is_graph_like(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn conditions(&self) -> Vec<u8> {
        let mut c: Vec<u8> = self.violations.iter().map(|v| v.condition).collect();
        c.dedup();
        c
    }
}

/// Checks the four graph-like conditions:
///
/// 1. only Z-spiders;
/// 2. spiders are joined only by Hadamard wires;
/// 3. no parallel wires or self-loops;
/// 4. every boundary is attached to a spider and every spider to at most
///    one boundary.
pub fn is_graph_like(d: &ZxDiagram) -> GraphLikeReport {
    let mut violations = Vec::new();
    let mut push = |condition: u8, detail: String| violations.push(Violation { condition, detail });
    for v in d.vertices() {
        if d.kind(v) == VertexKind::X {
            push(1, format!("vertex {v} is an X spider"));
        }
    }
    for v in d.vertices() {
        for (n, m) in d.incident(v) {
            if n < v {
                continue;
            }
            if n != v && d.kind(v).is_spider() && d.kind(n).is_spider() && m.simple > 0 {
                push(2, format!("spiders {v} and {n} share a plain wire"));
            }
            if n == v {
                push(3, format!("vertex {v} has a self-loop"));
            } else if m.total() > 1 {
                push(3, format!("vertices {v} and {n} share {} wires", m.total()));
            }
        }
    }
    for v in d.vertices() {
        if d.is_boundary(v) {
            if let Some(n) = d.neighbors(v).next() {
                if !d.kind(n).is_spider() {
                    push(4, format!("boundary {v} is wired directly to boundary {n}"));
                }
            }
        } else {
            let count = d.neighbors(v).filter(|&n| d.is_boundary(n)).count();
            if count > 1 {
                push(4, format!("spider {v} is attached to {count} boundaries"));
            }
        }
    }
    violations.sort_by_key(|v| v.condition);
    GraphLikeReport { violations }
}

fn dummy(d: &mut ZxDiagram, qubit: Option<i64>, row: i64) -> VertexId {
    d.add_vertex_with(VertexData {
        kind: VertexKind::Z,
        phase: Phase::ZERO,
        qubit,
        row: Some(crate::diagram::RowSpan::at(row)),
    })
}

fn row_of(d: &ZxDiagram, v: VertexId) -> Option<(i64, i64)> {
    d.vertex(v).row.map(|r| (r.first, r.last))
}

/// Fuses every plain wire between Z-spiders. Returns the number of fusions.
fn fuse_all(d: &mut ZxDiagram) -> usize {
    let mut count = 0;
    loop {
        let mut pair = None;
        'search: for v in d.spiders() {
            for (n, m) in d.incident(v) {
                if n != v && m.simple > 0 && d.kind(n) == d.kind(v) {
                    pair = Some((v, n));
                    break 'search;
                }
            }
        }
        match pair {
            Some((u, v)) => {
                fuse(d, u, v).expect("same-kind plain wire");
                count += 1;
            }
            None => return count,
        }
    }
}

/// Removes phase-free interior spiders sitting between two Hadamard wires,
/// fusing the two neighbours. Returns the number of removals.
fn remove_hh_identities(d: &mut ZxDiagram) -> usize {
    let mut count = 0;
    loop {
        let cand = d.spiders().find(|&v| {
            d.phase(v).is_zero()
                && d.degree(v) == 2
                && d.edge(v, v).total() == 0
                && d.incident(v).all(|(n, m)| m.simple == 0 && d.kind(n) == VertexKind::Z)
                && d.kind(v) == VertexKind::Z
        });
        let Some(v) = cand else { return count };
        let nbrs: Vec<VertexId> = d.neighbors(v).collect();
        remove_identity(d, v).expect("degree-2 phase-free spider");
        if nbrs.len() == 2 {
            fuse(d, nbrs[0], nbrs[1]).expect("neighbours now share a plain wire");
        }
        normalize_multiedges(d);
        count += 1;
    }
}

/// Converts any diagram into graph-like form with the same linear map.
pub fn to_graph_like(d: &mut ZxDiagram) {
    let xs: Vec<VertexId> = d.spiders().filter(|&v| d.kind(v) == VertexKind::X).collect();
    for v in xs {
        color_change(d, v).expect("spider");
    }
    loop {
        let mut changed = fuse_all(d) > 0;
        changed |= normalize_multiedges(d) > 0;
        changed |= remove_hh_identities(d) > 0;
        if !changed {
            break;
        }
    }

    // bare wires between an input and an output
    let inputs: Vec<VertexId> = d.inputs().to_vec();
    for b in inputs {
        let Some(o) = d.neighbors(b).next() else { continue };
        if !d.is_boundary(o) {
            continue;
        }
        let kind = d.edge(b, o).single().expect("boundary wire");
        d.remove_all_edges(b, o);
        let q = d.vertex(b).qubit.or(d.vertex(o).qubit);
        let rb = d.vertex(b).row.map_or(0, |r| r.first);
        let ro = d.vertex(o).row.map_or(rb + 1, |r| r.first);
        let d1 = dummy(d, q, rb);
        let d2 = dummy(d, q, ro);
        d.add_edge(b, d1, EdgeKind::Simple);
        d.add_edge(d1, d2, EdgeKind::Hadamard);
        d.add_edge(d2, o, kind.toggled());
    }

    // spiders attached to several boundaries keep the first and get a
    // dummy spider on each of the others
    let spiders: Vec<VertexId> = d.spiders().collect();
    for s in spiders {
        let bs: Vec<VertexId> = d.neighbors(s).filter(|&n| d.is_boundary(n)).collect();
        let keep = bs
            .iter()
            .copied()
            .find(|b| d.inputs().contains(b))
            .or_else(|| bs.first().copied());
        for &b in bs.iter().filter(|&&b| Some(b) != keep) {
            let kind = d.edge(s, b).single().expect("boundary wire");
            d.remove_all_edges(s, b);
            let q = d.vertex(b).qubit.or(d.vertex(s).qubit);
            let (first, last) = row_of(d, s).unwrap_or((0, 0));
            let row = if d.inputs().contains(&b) { (first - 1).max(0) } else { last + 1 };
            let w = dummy(d, q, row);
            d.add_edge(s, w, EdgeKind::Hadamard);
            d.add_edge(w, b, kind.toggled());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{build, Element};
    use crate::semantics::diagrams_equal;

    fn z(p: Phase) -> Element {
        Element::Spider { kind: VertexKind::Z, phase: p }
    }

    fn x(p: Phase) -> Element {
        Element::Spider { kind: VertexKind::X, phase: p }
    }

    use EdgeKind::{Hadamard as H, Simple as S};

    #[test]
    fn fuse_adds_phases() {
        let q = Phase::QUARTER_PI;
        let mut d = build(
            &[Element::Input, z(q), z(q), Element::Output],
            &[(0, 1, S), (1, 2, S), (2, 3, S)],
        )
        .unwrap();
        let orig = d.clone();
        assert_eq!(fuse(&mut d, 2, 1).unwrap(), 1);
        assert_eq!(d.phase(1), Phase::HALF_PI);
        assert!(!d.contains(2));
        assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
    }

    #[test]
    fn fuse_wraps_mod_two_pi() {
        let mut d = build(&[z(Phase::PI), z(Phase::PI)], &[(0, 1, S)]).unwrap();
        fuse(&mut d, 0, 1).unwrap();
        assert_eq!(d.phase(0), Phase::ZERO);
    }

    #[test]
    fn fuse_errors() {
        let mut d = build(&[z(Phase::ZERO), x(Phase::ZERO), z(Phase::ZERO)], &[(0, 1, S), (0, 2, H)]).unwrap();
        assert_eq!(fuse(&mut d, 0, 1).unwrap_err(), RuleError::KindMismatch(0, 1));
        assert_eq!(fuse(&mut d, 0, 2).unwrap_err(), RuleError::NotAdjacent(0, 2));
    }

    #[test]
    fn color_change_toggles_wires_and_is_involutive() {
        let mut d = build(
            &[Element::Input, x(Phase::new(1, 3)), Element::Output],
            &[(0, 1, S), (1, 2, S)],
        )
        .unwrap();
        let orig = d.clone();
        color_change(&mut d, 1).unwrap();
        assert_eq!(d.kind(1), VertexKind::Z);
        assert_eq!(d.edge(0, 1).single(), Some(H));
        assert_eq!(d.edge(1, 2).single(), Some(H));
        assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
        color_change(&mut d, 1).unwrap();
        assert_eq!(d.edges(), orig.edges());
        assert_eq!(d.kind(1), VertexKind::X);
        assert_eq!(color_change(&mut d, 0).unwrap_err(), RuleError::NotSpider(0));
    }

    #[test]
    fn remove_identity_cases() {
        for (k1, k2, want) in [(S, S, S), (H, H, S), (S, H, H)] {
            let mut d = build(&[Element::Input, z(Phase::ZERO), Element::Output], &[(0, 1, k1), (1, 2, k2)]).unwrap();
            let orig = d.clone();
            remove_identity(&mut d, 1).unwrap();
            assert_eq!(d.edge(0, 2).single(), Some(want));
            assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
        }
        let mut d = build(&[Element::Input, z(Phase::PI), Element::Output], &[(0, 1, S), (1, 2, S)]).unwrap();
        assert!(matches!(remove_identity(&mut d, 1), Err(RuleError::NonZeroPhase(1, _))));
        let mut d = build(&[Element::Input, z(Phase::ZERO)], &[(0, 1, S)]).unwrap();
        assert_eq!(remove_identity(&mut d, 1).unwrap_err(), RuleError::Degree(1, 1, 2));
    }

    fn two_spiders(hadamards: u32, alpha: Phase, beta: Phase) -> ZxDiagram {
        let mut d = build(
            &[Element::Input, z(alpha), z(beta), Element::Output],
            &[(0, 1, S), (2, 3, S)],
        )
        .unwrap();
        for _ in 0..hadamards {
            d.add_edge(1, 2, H);
        }
        d
    }

    #[test]
    fn parallel_hadamard_pair_cancels() {
        let mut d = two_spiders(2, Phase::new(1, 3), Phase::new(1, 5));
        let orig = d.clone();
        normalize_multiedges(&mut d);
        assert!(d.edge(1, 2).is_empty());
        assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
    }

    #[test]
    fn three_parallel_hadamards_leave_one() {
        let mut d = two_spiders(3, Phase::new(1, 3), Phase::new(1, 5));
        let orig = d.clone();
        normalize_multiedges(&mut d);
        assert_eq!(d.edge(1, 2).single(), Some(H));
        assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
    }

    #[test]
    fn hadamard_self_loop_adds_pi() {
        let alpha = Phase::new(1, 3);
        let mut d = build(&[Element::Input, z(alpha), Element::Output], &[(0, 1, S), (1, 2, S), (1, 1, H)]).unwrap();
        let orig = d.clone();
        normalize_multiedges(&mut d);
        assert_eq!(d.phase(1), alpha + Phase::PI);
        assert_eq!(d.edge(1, 1).total(), 0);
        assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
    }

    #[test]
    fn simple_self_loops_vanish_on_both_colours() {
        for el in [z(Phase::new(1, 3)), x(Phase::new(1, 3))] {
            let mut d = build(&[Element::Input, el, Element::Output], &[(0, 1, S), (1, 2, S), (1, 1, S)]).unwrap();
            let orig = d.clone();
            normalize_multiedges(&mut d);
            assert_eq!(d.phase(1), Phase::new(1, 3));
            assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
        }
        let mut d = build(&[Element::Input, x(Phase::ZERO), Element::Output], &[(0, 1, S), (1, 2, S), (1, 1, H)]).unwrap();
        let orig = d.clone();
        normalize_multiedges(&mut d);
        assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
    }

    #[test]
    fn mixed_parallel_pairs_are_sound() {
        for (kinds, second) in [
            (vec![S, H], z(Phase::new(1, 4))),
            (vec![S, S, S], z(Phase::new(1, 4))),
            (vec![S, S], x(Phase::new(1, 4))),
            (vec![S, S, H], x(Phase::new(1, 4))),
            (vec![H, H], x(Phase::new(1, 4))),
            (vec![S, H], x(Phase::new(1, 4))),
        ] {
            let mut wires = vec![(0, 1, S), (2, 3, S), (1, 4, S)];
            for k in kinds {
                wires.push((1, 2, k));
            }
            let mut d = build(
                &[Element::Input, z(Phase::new(1, 3)), second, Element::Output, Element::Output],
                &wires,
            )
            .unwrap();
            let orig = d.clone();
            normalize_multiedges(&mut d);
            for v in d.vertices() {
                assert_eq!(d.edge(v, v).total(), 0);
                for (n, m) in d.incident(v) {
                    if d.kind(v).is_spider() && d.kind(n).is_spider() {
                        assert!(m.total() <= 1, "{v}-{n}: {m:?}");
                    }
                }
            }
            assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
        }
    }

    #[test]
    fn antipode_disconnects() {
        for (a, b) in [(Phase::ZERO, Phase::ZERO), (Phase::new(1, 3), Phase::new(3, 4))] {
            let mut d = build(
                &[Element::Input, z(a), x(b), Element::Output],
                &[(0, 1, S), (1, 2, S), (1, 2, S), (2, 3, S)],
            )
            .unwrap();
            let orig = d.clone();
            apply_antipode(&mut d, 1, 2).unwrap();
            assert!(!d.connected(1, 2));
            assert_eq!((d.phase(1), d.phase(2)), (a, b));
            assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
        }
        let mut d = build(&[z(Phase::ZERO), x(Phase::ZERO)], &[(0, 1, S)]).unwrap();
        assert!(apply_antipode(&mut d, 0, 1).is_err());
    }

    #[test]
    fn pi_copy() {
        for (alpha, outs) in [(Phase::new(1, 3), 2usize), (Phase::ZERO, 2), (Phase::QUARTER_PI, 3)] {
            let mut els = vec![x(Phase::PI), z(alpha)];
            let mut wires = vec![(0, 1, S)];
            for i in 0..outs {
                els.push(Element::Output);
                wires.push((1, 2 + i, if i == 0 { H } else { S }));
            }
            let mut d = build(&els, &wires).unwrap();
            let orig = d.clone();
            let made = apply_pi_copy(&mut d, 0, 1).unwrap();
            assert_eq!(made.len(), outs);
            assert_eq!(d.phase(1), -alpha);
            assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
        }
        let mut d = build(&[x(Phase::HALF_PI), z(Phase::ZERO)], &[(0, 1, S)]).unwrap();
        assert!(apply_pi_copy(&mut d, 0, 1).is_err());
    }

    #[test]
    fn graph_like_violations() {
        let d = build(&[Element::Input, x(Phase::ZERO), Element::Output], &[(0, 1, S), (1, 2, S)]).unwrap();
        let r = is_graph_like(&d);
        assert!(!r.is_graph_like());
        assert!(r.conditions().contains(&1));
        assert!(r.violations.iter().any(|v| v.to_string().starts_with("condition 1")));

        let d = build(
            &[Element::Input, z(Phase::ZERO), z(Phase::ZERO), Element::Output],
            &[(0, 1, S), (1, 2, S), (2, 3, S)],
        )
        .unwrap();
        assert_eq!(is_graph_like(&d).conditions(), vec![2]);

        let d = build(&[Element::Input, Element::Output], &[(0, 1, S)]).unwrap();
        assert_eq!(is_graph_like(&d).conditions(), vec![4]);
    }

    #[test]
    fn bare_wire_becomes_two_dummies() {
        for k in [S, H] {
            let mut d = build(&[Element::Input, Element::Output], &[(0, 1, k)]).unwrap();
            let orig = d.clone();
            to_graph_like(&mut d);
            assert!(is_graph_like(&d).is_graph_like(), "{:?}", is_graph_like(&d));
            assert_eq!(d.num_spiders(), 2);
            assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
        }
    }

    #[test]
    fn multi_boundary_spider_is_split() {
        let mut d = build(
            &[Element::Input, Element::Input, z(Phase::HALF_PI), Element::Output],
            &[(0, 2, S), (1, 2, H), (2, 3, S)],
        )
        .unwrap();
        let orig = d.clone();
        to_graph_like(&mut d);
        assert!(is_graph_like(&d).is_graph_like());
        assert_eq!(d.num_spiders(), 3);
        assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
    }

    #[test]
    fn graph_like_conversion_is_idempotent() {
        let mut d = build(
            &[
                Element::Input,
                Element::Input,
                z(Phase::QUARTER_PI),
                x(Phase::ZERO),
                x(Phase::HALF_PI),
                z(Phase::ZERO),
                Element::Output,
                Element::Output,
            ],
            &[(0, 2, S), (1, 3, H), (2, 3, S), (2, 4, S), (3, 4, S), (4, 5, H), (5, 6, S), (3, 7, S)],
        )
        .unwrap();
        let orig = d.clone();
        to_graph_like(&mut d);
        assert!(is_graph_like(&d).is_graph_like(), "{:?}", is_graph_like(&d));
        assert!(diagrams_equal(&orig, &d, 1e-9).unwrap());
        let once = d.clone();
        to_graph_like(&mut d);
        assert_eq!(d.edges(), once.edges());
        assert_eq!(d.num_vertices(), once.num_vertices());
    }
}
