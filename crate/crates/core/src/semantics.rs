//! Dense linear-map semantics for diagrams and circuits.
//!
//! This is the oracle the rewrite rules are checked against. Diagrams are
//! evaluated by plain variable elimination over one bit per vertex, so the
//! cost is governed by the treewidth of the diagram rather than by spider
//! degrees.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::diagram::{EdgeKind, VertexId, VertexKind, ZxDiagram};

pub const DEFAULT_WIRE_CAP: usize = 12;
const MAX_INTERMEDIATE_RANK: usize = 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemanticsError {
    #[error("diagram has {0} boundary wires, above the cap of {1}")]
    WireCap(usize, usize),
    #[error("elimination needs a {0}-variable intermediate factor, above the limit of {1}")]
    Intermediate(usize, usize),
    #[error("circuit has {0} qubits, above the cap of {1}")]
    QubitCap(usize, usize),
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    Dimension(usize, usize, usize, usize),
}

/// Complex matrix, row-major. Row index encodes the outputs, column index the
/// inputs; qubit 0 is the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> DenseMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows.iter().flat_map(|row| row.iter().copied()).collect();
        DenseMatrix { rows: r, cols: c, data }
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, z: C64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * z).collect(),
        }
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }
}

/// A factor over binary variables; `vars[0]` is the most significant bit of
/// the index into `data`.
#[derive(Debug, Clone)]
struct Factor {
    vars: Vec<usize>,
    data: Vec<C64>,
}

fn bit(index: usize, pos: usize, rank: usize) -> usize {
    (index >> (rank - 1 - pos)) & 1
}

/// Multiplies `factors` together and sums out `elim` if given. The result
/// ranges over the union of their variables minus `elim`, in first-seen order.
fn combine(factors: &[Factor], elim: Option<usize>) -> Factor {
    let mut vars: Vec<usize> = Vec::new();
    for f in factors {
        for &v in &f.vars {
            if Some(v) != elim && !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    let mut all = vars.clone();
    if let Some(e) = elim {
        all.push(e);
    }
    let rank = all.len();
    let pos: Vec<Vec<usize>> = factors
        .iter()
        .map(|f| f.vars.iter().map(|v| all.iter().position(|x| x == v).expect("variable")).collect())
        .collect();
    let mut data = vec![C64::new(0.0, 0.0); 1 << vars.len()];
    for idx in 0..(1usize << rank) {
        let mut prod = C64::new(1.0, 0.0);
        for (f, ps) in factors.iter().zip(&pos) {
            let mut i = 0usize;
            for &p in ps {
                i = (i << 1) | bit(idx, p, rank);
            }
            prod *= f.data[i];
            if prod == C64::new(0.0, 0.0) {
                break;
            }
        }
        let out = if elim.is_some() { idx >> 1 } else { idx };
        data[out] += prod;
    }
    Factor { vars, data }
}

fn wire_factor(kind: EdgeKind, a: usize, b: usize) -> Factor {
    let data = match kind {
        EdgeKind::Simple => vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        EdgeKind::Hadamard => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            vec![C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)]
        }
    };
    if a == b {
        return Factor { vars: vec![a], data: vec![data[0], data[3]] };
    }
    Factor { vars: vec![a, b], data }
}

/// Variable elimination order used by [`diagram_to_matrix_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionOrder {
    /// Eliminate the spider whose removal creates the smallest factor next.
    Greedy,
    /// Eliminate spiders by ascending id.
    Sequential,
}

pub fn diagram_to_matrix(d: &ZxDiagram) -> Result<DenseMatrix, SemanticsError> {
    diagram_to_matrix_with(d, ContractionOrder::Greedy, DEFAULT_WIRE_CAP)
}

/// Every vertex is a binary variable: a Z spider forces all its legs to one
/// value, an X spider is a Z spider with a Hadamard on each leg, and a
/// boundary is an open variable. Wires become equality or Hadamard factors
/// and spider variables are summed out one at a time.
pub fn diagram_to_matrix_with(
    d: &ZxDiagram,
    order: ContractionOrder,
    wire_cap: usize,
) -> Result<DenseMatrix, SemanticsError> {
    let n_wires = d.inputs().len() + d.outputs().len();
    if n_wires > wire_cap {
        return Err(SemanticsError::WireCap(n_wires, wire_cap));
    }
    let mut factors: Vec<Factor> = Vec::new();
    for v in d.spiders() {
        let e = C64::from_polar(1.0, d.phase(v).to_radians());
        factors.push(Factor { vars: vec![v], data: vec![C64::new(1.0, 0.0), e] });
    }
    for (u, v, kind) in d.edges() {
        let mut k = kind;
        if u != v {
            for w in [u, v] {
                if d.kind(w) == VertexKind::X {
                    k = k.toggled();
                }
            }
        }
        factors.push(wire_factor(k, u, v));
    }

    let mut pending: Vec<VertexId> = d.spiders().collect();
    while !pending.is_empty() {
        let pick = match order {
            ContractionOrder::Sequential => 0,
            ContractionOrder::Greedy => {
                let mut best = (usize::MAX, 0usize);
                for (i, &v) in pending.iter().enumerate() {
                    let mut vars: Vec<usize> = Vec::new();
                    for f in factors.iter().filter(|f| f.vars.contains(&v)) {
                        for &x in &f.vars {
                            if !vars.contains(&x) {
                                vars.push(x);
                            }
                        }
                    }
                    if vars.len() < best.0 {
                        best = (vars.len(), i);
                    }
                }
                best.1
            }
        };
        let v = pending.remove(pick);
        let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = rest;
        let width = {
            let mut vars: Vec<usize> = touching.iter().flat_map(|f| f.vars.iter().copied()).collect();
            vars.sort_unstable();
            vars.dedup();
            vars.len()
        };
        if width > MAX_INTERMEDIATE_RANK {
            return Err(SemanticsError::Intermediate(width, MAX_INTERMEDIATE_RANK));
        }
        factors.push(combine(&touching, Some(v)));
    }
    let acc = combine(&factors, None);

    let out_vars: &[VertexId] = d.outputs();
    let in_vars: &[VertexId] = d.inputs();
    let (no, ni) = (out_vars.len(), in_vars.len());
    let rank = acc.vars.len();
    debug_assert_eq!(rank, no + ni);
    let positions: Vec<usize> = out_vars
        .iter()
        .chain(in_vars)
        .map(|b| acc.vars.iter().position(|x| x == b).expect("boundary variable survives"))
        .collect();
    let mut m = DenseMatrix::zeros(1 << no, 1 << ni);
    for r in 0..(1usize << no) {
        for c in 0..(1usize << ni) {
            let combined = (r << ni) | c;
            let mut bits = vec![0usize; rank];
            for (k, &p) in positions.iter().enumerate() {
                bits[p] = (combined >> (no + ni - 1 - k)) & 1;
            }
            let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b);
            m.data[r * m.cols + c] = acc.data[idx];
        }
    }
    Ok(m)
}

fn apply_single(m: &mut DenseMatrix, n: usize, q: usize, g: [[C64; 2]; 2]) {
    let bit = 1usize << (n - 1 - q);
    for r in 0..m.rows {
        if r & bit != 0 {
            continue;
        }
        let r1 = r | bit;
        for c in 0..m.cols {
            let a = m.data[r * m.cols + c];
            let b = m.data[r1 * m.cols + c];
            m.data[r * m.cols + c] = g[0][0] * a + g[0][1] * b;
            m.data[r1 * m.cols + c] = g[1][0] * a + g[1][1] * b;
        }
    }
}

fn swap_rows(m: &mut DenseMatrix, a: usize, b: usize) {
    for c in 0..m.cols {
        m.data.swap(a * m.cols + c, b * m.cols + c);
    }
}

/// Applies `g` to the left of `m`, where `m` has `2^n` rows.
pub fn apply_gate(m: &mut DenseMatrix, n: usize, g: &Gate) {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let bit = |q: usize| 1usize << (n - 1 - q);
    match *g {
        Gate::H(q) => {
            let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            apply_single(m, n, q, [[h, h], [h, -h]]);
        }
        Gate::ZPhase(q, p) => {
            apply_single(m, n, q, [[one, zero], [zero, C64::from_polar(1.0, p.to_radians())]]);
        }
        Gate::XPhase(q, p) => {
            let e = C64::from_polar(1.0, p.to_radians());
            let a = (one + e) * 0.5;
            let b = (one - e) * 0.5;
            apply_single(m, n, q, [[a, b], [b, a]]);
        }
        Gate::Cnot { control, target } => {
            let (bc, bt) = (bit(control), bit(target));
            for r in 0..m.rows {
                if r & bc != 0 && r & bt == 0 {
                    swap_rows(m, r, r | bt);
                }
            }
        }
        Gate::Cz(a, b) => {
            let (ba, bb) = (bit(a), bit(b));
            for r in 0..m.rows {
                if r & ba != 0 && r & bb != 0 {
                    for c in 0..m.cols {
                        m.data[r * m.cols + c] = -m.data[r * m.cols + c];
                    }
                }
            }
        }
        Gate::Swap(a, b) => {
            let (ba, bb) = (bit(a), bit(b));
            for r in 0..m.rows {
                if r & ba != 0 && r & bb == 0 {
                    swap_rows(m, r, (r & !ba) | bb);
                }
            }
        }
    }
}

pub fn circuit_to_matrix(c: &Circuit) -> Result<DenseMatrix, SemanticsError> {
    circuit_to_matrix_capped(c, DEFAULT_WIRE_CAP)
}

pub fn circuit_to_matrix_capped(c: &Circuit, cap: usize) -> Result<DenseMatrix, SemanticsError> {
    let n = c.qubit_count();
    if n > cap {
        return Err(SemanticsError::QubitCap(n, cap));
    }
    let mut m = DenseMatrix::identity(1 << n);
    for g in c.gates() {
        apply_gate(&mut m, n, g);
    }
    Ok(m)
}

/// Whether `a = z·b` for some non-zero `z`, after scaling both so their
/// largest entry has magnitude 1. The factor is estimated from the entry
/// where `a` is largest.
pub fn equal_up_to_global_phase(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> Result<bool, SemanticsError> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(SemanticsError::Dimension(a.rows, a.cols, b.rows, b.cols));
    }
    let (ma, mb) = (a.max_abs(), b.max_abs());
    if ma <= f64::EPSILON || mb <= f64::EPSILON {
        return Ok(ma <= f64::EPSILON && mb <= f64::EPSILON);
    }
    let an = a.scale(C64::new(1.0 / ma, 0.0));
    let bn = b.scale(C64::new(1.0 / mb, 0.0));
    let k = an
        .data
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if bn.data[k].norm() < 1e-12 {
        return Ok(false);
    }
    let z = an.data[k] / bn.data[k];
    Ok(an
        .data
        .iter()
        .zip(&bn.data)
        .all(|(x, y)| (x - z * y).norm() <= tol))
}

/// Convenience: both sides evaluated and compared.
pub fn diagram_equals_circuit(d: &ZxDiagram, c: &Circuit, tol: f64) -> Result<bool, SemanticsError> {
    equal_up_to_global_phase(&diagram_to_matrix(d)?, &circuit_to_matrix(c)?, tol)
}

pub fn diagrams_equal(a: &ZxDiagram, b: &ZxDiagram, tol: f64) -> Result<bool, SemanticsError> {
    equal_up_to_global_phase(&diagram_to_matrix(a)?, &diagram_to_matrix(b)?, tol)
}

pub fn circuits_equal(a: &Circuit, b: &Circuit, tol: f64) -> Result<bool, SemanticsError> {
    equal_up_to_global_phase(&circuit_to_matrix(a)?, &circuit_to_matrix(b)?, tol)
}
