//! A light gate-level clean-up: cancel adjacent inverse pairs, fuse adjacent
//! phase gates on the same axis, and move Hadamards to the right past CZ and
//! CNOT targets using `H_b · CZ(a,b) = CNOT(a,b) · H_b`.
//!
//! All gates in the supported set are symmetric matrices, so a pass over the
//! reversed gate list is sound as well; rounds alternate direction.

use crate::circuit::{Circuit, Gate};
use crate::phase::Phase;

struct Tape {
    gates: Vec<Option<Gate>>,
    wires: Vec<Vec<usize>>,
}

impl Tape {
    fn new(qubits: usize) -> Tape {
        Tape { gates: Vec::new(), wires: vec![Vec::new(); qubits] }
    }

    fn top(&self, q: usize) -> Option<usize> {
        self.wires[q].last().copied()
    }

    fn push(&mut self, g: Gate) {
        let i = self.gates.len();
        for q in g.qubits() {
            self.wires[q].push(i);
        }
        self.gates.push(Some(g));
    }

    fn pop(&mut self, i: usize) -> Gate {
        let g = self.gates[i].take().expect("live gate");
        for q in g.qubits() {
            debug_assert_eq!(self.wires[q].last(), Some(&i));
            self.wires[q].pop();
        }
        g
    }

    /// The latest gate on all of `qs`, if it is the same gate for each.
    fn shared_top(&self, qs: &[usize]) -> Option<usize> {
        let i = self.top(qs[0])?;
        qs.iter().all(|&q| self.top(q) == Some(i)).then_some(i)
    }

    fn add(&mut self, g: Gate) {
        let qs = g.qubits();
        if let Some(i) = self.shared_top(&qs) {
            let p = self.gates[i].expect("live gate");
            if p.qubits().len() == qs.len() {
                match combine(p, g) {
                    Combined::Cancel => {
                        self.pop(i);
                        return;
                    }
                    Combined::Merged(m) => {
                        self.pop(i);
                        self.add(m);
                        return;
                    }
                    Combined::None => {}
                }
            }
        }
        match g {
            Gate::Cz(a, b) => {
                for (c, t) in [(a, b), (b, a)] {
                    if let Some(i) = self.top(t) {
                        if self.gates[i] == Some(Gate::H(t)) {
                            self.pop(i);
                            self.add(Gate::cnot(c, t));
                            self.add(Gate::H(t));
                            return;
                        }
                    }
                }
            }
            Gate::Cnot { control, target } => {
                if let Some(i) = self.top(target) {
                    if self.gates[i] == Some(Gate::H(target)) {
                        self.pop(i);
                        self.add(Gate::Cz(control, target));
                        self.add(Gate::H(target));
                        return;
                    }
                }
            }
            _ => {}
        }
        self.push(g);
    }

    fn finish(self) -> Vec<Gate> {
        self.gates.into_iter().flatten().collect()
    }
}

enum Combined {
    Cancel,
    Merged(Gate),
    None,
}

fn combine(p: Gate, g: Gate) -> Combined {
    let fused = |s: Phase, m: Gate| if s.is_zero() { Combined::Cancel } else { Combined::Merged(m) };
    match (p, g) {
        (Gate::H(_), Gate::H(_)) => Combined::Cancel,
        (Gate::ZPhase(q, a), Gate::ZPhase(_, b)) => fused(a + b, Gate::ZPhase(q, a + b)),
        (Gate::XPhase(q, a), Gate::XPhase(_, b)) => fused(a + b, Gate::XPhase(q, a + b)),
        (Gate::Cnot { control: c1, target: t1 }, Gate::Cnot { control: c2, target: t2 }) if c1 == c2 && t1 == t2 => {
            Combined::Cancel
        }
        (Gate::Cz(..), Gate::Cz(..)) | (Gate::Swap(..), Gate::Swap(..)) => Combined::Cancel,
        _ => Combined::None,
    }
}

fn pass(qubits: usize, gates: impl Iterator<Item = Gate>) -> Vec<Gate> {
    let mut tape = Tape::new(qubits);
    for g in gates {
        if matches!(g, Gate::ZPhase(_, p) | Gate::XPhase(_, p) if p.is_zero()) {
            continue;
        }
        tape.add(g);
    }
    tape.finish()
}

/// One forward and one backward pass.
fn round(c: &Circuit) -> Vec<Gate> {
    let n = c.qubit_count();
    let fwd = pass(n, c.gates().iter().copied());
    let mut back = pass(n, fwd.into_iter().rev());
    back.reverse();
    back
}

/// Repeats rounds while they shorten the circuit and returns the last
/// shortening result, so the output is a fixpoint of this function.
pub fn peephole_optimize(c: &Circuit) -> Circuit {
    let mut cur = c.gates().to_vec();
    loop {
        let cc = Circuit::from_gates(c.qubit_count(), cur.clone()).expect("same qubits");
        let next = round(&cc);
        if next.len() >= cur.len() {
            return cc;
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::random_circuit_with as random_clifford_t;
    use crate::semantics::circuits_equal;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn opt(n: usize, gates: Vec<Gate>) -> Vec<Gate> {
        peephole_optimize(&Circuit::from_gates(n, gates).unwrap()).into_gates()
    }

    #[test]
    fn small_cases() {
        assert_eq!(opt(1, vec![Gate::H(0), Gate::H(0)]), vec![]);
        assert_eq!(opt(1, vec![Gate::t(0), Gate::t(0)]), vec![Gate::s(0)]);
        assert_eq!(opt(1, vec![Gate::t(0), Gate::tdg(0)]), vec![]);
        assert_eq!(opt(2, vec![Gate::cnot(0, 1), Gate::cnot(0, 1)]), vec![]);
        assert_eq!(opt(2, vec![Gate::cnot(0, 1), Gate::cnot(1, 0)]).len(), 2);
        assert_eq!(opt(2, vec![Gate::Cz(0, 1), Gate::Cz(1, 0)]), vec![]);
        assert_eq!(opt(1, vec![Gate::H(0), Gate::x(0), Gate::x(0), Gate::H(0)]), vec![]);
    }

    #[test]
    fn hadamard_moves_through_cz_and_cancels() {
        let g = vec![Gate::H(1), Gate::Cz(0, 1), Gate::H(1), Gate::cnot(0, 1)];
        let out = opt(2, g.clone());
        assert!(out.len() < g.len(), "{out:?}");
        let a = Circuit::from_gates(2, g).unwrap();
        let b = Circuit::from_gates(2, out).unwrap();
        assert!(circuits_equal(&a, &b, 1e-9).unwrap());
    }

    #[test]
    fn random_circuits_are_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let c = random_clifford_t(&mut rng, 4, 100, 0.3, 0.2);
            let o = peephole_optimize(&c);
            assert!(o.len() <= c.len());
            assert!(circuits_equal(&c, &o, 1e-9).unwrap());
            assert_eq!(peephole_optimize(&o), o);
        }
    }

    proptest! {
        #[test]
        fn idempotent_and_monotone(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_clifford_t(&mut rng, 3, 60, 0.3, 0.2);
            let o = peephole_optimize(&c);
            prop_assert!(o.stats().total <= c.stats().total);
            prop_assert_eq!(peephole_optimize(&o), o);
        }
    }
}
