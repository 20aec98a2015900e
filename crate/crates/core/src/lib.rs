//! Quantum circuit optimisation with the ZX-calculus.
//!
//! Circuits are translated into ZX-diagrams, brought into graph-like form,
//! simplified by local complementation and pivoting, and extracted back into
//! circuits. A dense matrix semantics is included so that every step can be
//! checked on small instances.

pub mod bench;
pub mod circuit;
pub mod diagram;
pub mod extract;
pub mod f2;
pub mod gflow;
pub mod graph;
pub mod gslc;
pub mod peephole;
pub mod phase;
pub mod qasm;
pub mod rules;
pub mod semantics;
pub mod simplify;
