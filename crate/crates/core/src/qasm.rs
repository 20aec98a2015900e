//! Reading and writing a small subset of OpenQASM 2.0: one quantum
//! register and the gates `h s sdg t tdg z x rz rx cx cz swap`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::phase::{Phase, DEFAULT_MAX_DENOMINATOR};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct QasmError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Real(f64),
    Str(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, message: String| QasmError { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let s: String = chars[start..i].iter().collect();
            match s.parse::<u64>() {
                Ok(n) => Tok::Int(n),
                Err(_) => Tok::Real(s.parse().map_err(|_| err(l0, c0, format!("malformed number `{s}`")))?),
            }
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if chars.get(i) != Some(&'"') {
                return Err(err(l0, c0, "unterminated string".into()));
            }
            i += 1;
            Tok::Str(chars[start + 1..i - 1].iter().collect())
        } else if "[](),;+-*/".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(err(l0, c0, format!("unexpected character `{c}`")));
        };
        col += i - start;
        out.push(Token { tok, line: l0, col: c0 });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, QasmError> {
        self.fail_at(self.here(), message)
    }

    fn fail_at<T>(&self, (line, col): (usize, usize), message: impl Into<String>) -> Result<T, QasmError> {
        Err(QasmError { line, col, message: message.into() })
    }

    fn next(&mut self) -> Result<Tok, QasmError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.tok.clone())
            }
            None => self.fail("unexpected end of input"),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), QasmError> {
        let at = self.here();
        match self.next()? {
            Tok::Sym(s) if s == c => Ok(()),
            t => self.fail_at(at, format!("expected `{c}`, found {}", describe(&t))),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, QasmError> {
        let at = self.here();
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            t => self.fail_at(at, format!("expected identifier, found {}", describe(&t))),
        }
    }

    fn int(&mut self) -> Result<u64, QasmError> {
        let at = self.here();
        match self.next()? {
            Tok::Int(n) => Ok(n),
            t => self.fail_at(at, format!("expected integer, found {}", describe(&t))),
        }
    }

    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v += self.term()?;
            } else if self.eat('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v *= self.unary()?;
            } else if self.eat('/') {
                let at = self.here();
                let d = self.unary()?;
                if d == 0.0 {
                    return self.fail_at(at, "division by zero");
                }
                v /= d;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        let at = self.here();
        match self.next()? {
            Tok::Int(n) => Ok(n as f64),
            Tok::Real(x) => Ok(x),
            Tok::Ident(s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.sym(')')?;
                Ok(v)
            }
            t => self.fail_at(at, format!("expected angle expression, found {}", describe(&t))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Real(x) => format!("`{x}`"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Sym(c) => format!("`{c}`"),
    }
}

/// Parses the supported subset. Angles must be rational multiples of π with
/// denominator at most [`DEFAULT_MAX_DENOMINATOR`].
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let toks = lex(text)?;
    let last_line = text.lines().count().max(1);
    let last_col = text.lines().last().map_or(1, |l| l.chars().count() + 1);
    let mut p = Parser { toks, pos: 0, end: (last_line, last_col) };
    let mut reg: Option<(String, usize)> = None;
    let mut circuit = Circuit::new(0);
    let mut first = true;
    while p.peek().is_some() {
        let at = p.here();
        let name = p.ident()?;
        match name.as_str() {
            "OPENQASM" => {
                if !first {
                    return p.fail_at(at, "OPENQASM must be the first statement");
                }
                let vat = p.here();
                match p.next()? {
                    Tok::Real(2.0) | Tok::Int(2) => {}
                    t => return p.fail_at(vat, format!("unsupported version {}", describe(&t))),
                }
                p.sym(';')?;
            }
            "include" => {
                let fat = p.here();
                match p.next()? {
                    Tok::Str(s) if s == "qelib1.inc" => {}
                    t => return p.fail_at(fat, format!("unsupported include {}", describe(&t))),
                }
                p.sym(';')?;
            }
            "qreg" => {
                if reg.is_some() {
                    return p.fail_at(at, "only one quantum register is supported");
                }
                let r = p.ident()?;
                p.sym('[')?;
                let nat = p.here();
                let n = p.int()? as usize;
                if n == 0 {
                    return p.fail_at(nat, "register must have at least one qubit");
                }
                p.sym(']')?;
                p.sym(';')?;
                circuit = Circuit::new(n);
                reg = Some((r, n));
            }
            _ => {
                let Some((rname, size)) = reg.clone() else {
                    return p.fail_at(at, format!("`{name}` before any qreg declaration"));
                };
                let gate = gate_stmt(&mut p, &name, at, &rname, size)?;
                circuit.push(gate).map_err(|e| QasmError { line: at.0, col: at.1, message: e.to_string() })?;
            }
        }
        first = false;
    }
    if reg.is_none() {
        return p.fail("missing qreg declaration");
    }
    Ok(circuit)
}

fn gate_stmt(p: &mut Parser, name: &str, at: (usize, usize), reg: &str, size: usize) -> Result<Gate, QasmError> {
    let param = match name {
        "rz" | "rx" => {
            p.sym('(')?;
            let aat = p.here();
            let theta = p.expr()?;
            p.sym(')')?;
            match Phase::from_radians(theta, DEFAULT_MAX_DENOMINATOR) {
                Ok(ph) => Some(ph),
                Err(e) => return p.fail_at(aat, e.to_string()),
            }
        }
        "h" | "s" | "sdg" | "t" | "tdg" | "z" | "x" | "cx" | "cz" | "swap" => None,
        _ => return p.fail_at(at, format!("unsupported statement `{name}`")),
    };
    let arity = if matches!(name, "cx" | "cz" | "swap") { 2 } else { 1 };
    let mut qs = Vec::new();
    for i in 0..arity {
        if i > 0 {
            p.sym(',')?;
        }
        let qat = p.here();
        let r = p.ident()?;
        if r != reg {
            return p.fail_at(qat, format!("unknown register `{r}`"));
        }
        p.sym('[')?;
        let iat = p.here();
        let q = p.int()? as usize;
        if q >= size {
            return p.fail_at(iat, format!("qubit {q} out of range for register of size {size}"));
        }
        p.sym(']')?;
        qs.push(q);
    }
    p.sym(';')?;
    let q = qs[0];
    Ok(match name {
        "h" => Gate::H(q),
        "s" => Gate::s(q),
        "sdg" => Gate::sdg(q),
        "t" => Gate::t(q),
        "tdg" => Gate::tdg(q),
        "z" => Gate::z(q),
        "x" => Gate::x(q),
        "rz" => Gate::ZPhase(q, param.expect("angle")),
        "rx" => Gate::XPhase(q, param.expect("angle")),
        "cx" => Gate::cnot(q, qs[1]),
        "cz" => Gate::Cz(q, qs[1]),
        _ => Gate::Swap(q, qs[1]),
    })
}

fn angle(p: Phase) -> String {
    match (p.numerator(), p.denominator()) {
        (0, _) => "0".into(),
        (1, 1) => "pi".into(),
        (n, 1) => format!("{n}*pi"),
        (1, d) => format!("pi/{d}"),
        (n, d) => format!("{n}*pi/{d}"),
    }
}

pub fn emit_qasm(c: &Circuit) -> String {
    let mut s = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(s, "qreg q[{}];", c.qubit_count()).unwrap();
    for g in c.gates() {
        let line = match *g {
            Gate::H(q) => format!("h q[{q}];"),
            Gate::Cnot { control, target } => format!("cx q[{control}],q[{target}];"),
            Gate::Cz(a, b) => format!("cz q[{a}],q[{b}];"),
            Gate::Swap(a, b) => format!("swap q[{a}],q[{b}];"),
            Gate::ZPhase(q, p) => match (p.numerator(), p.denominator()) {
                (1, 2) => format!("s q[{q}];"),
                (3, 2) => format!("sdg q[{q}];"),
                (1, 4) => format!("t q[{q}];"),
                (7, 4) => format!("tdg q[{q}];"),
                (1, 1) => format!("z q[{q}];"),
                _ => format!("rz({}) q[{q}];", angle(p)),
            },
            Gate::XPhase(q, p) if p == Phase::PI => format!("x q[{q}];"),
            Gate::XPhase(q, p) => format!("rx({}) q[{q}];", angle(p)),
        };
        s.push_str(&line);
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_to_diagram;
    use crate::semantics::{circuit_to_matrix, diagram_to_matrix, equal_up_to_global_phase, DenseMatrix};
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    fn parse1(body: &str, n: usize) -> Circuit {
        parse_qasm(&format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{n}];\n{body}")).unwrap()
    }

    #[test]
    fn single_gates() {
        assert_eq!(parse1("h q[0];", 1).gates(), &[Gate::H(0)]);
        assert_eq!(parse1("cx q[0],q[1];", 2).gates(), &[Gate::cnot(0, 1)]);
        assert_eq!(parse1("rz(pi/4) q[2];", 3).gates(), &[Gate::ZPhase(2, Phase::QUARTER_PI)]);
        assert_eq!(parse1("rz(-pi/2) q[0];", 1).gates(), &[Gate::sdg(0)]);
        assert_eq!(parse1("rx(3*pi/4) q[0];", 1).gates(), &[Gate::XPhase(0, Phase::new(3, 4))]);
        assert_eq!(parse1("rz(0.7853981633974483) q[0];", 1).gates(), &[Gate::t(0)]);
    }

    #[test]
    fn emission() {
        let c = Circuit::new(3);
        assert_eq!(emit_qasm(&c), "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\n");
        let c = Circuit::from_gates(2, vec![Gate::cnot(1, 0)]).unwrap();
        assert!(emit_qasm(&c).ends_with("cx q[1],q[0];\n"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_qasm("OPENQASM 2.0;\nqreg q[2];\nccx q[0],q[1],q[2];").unwrap_err();
        assert_eq!((e.line, e.col), (3, 1));
        assert!(e.message.contains("ccx"));
        let e = parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[5];").unwrap_err();
        assert_eq!((e.line, e.col), (3, 5));
        let e = parse_qasm("qreg q[2];\nrz(1.0) q[0];").unwrap_err();
        assert_eq!((e.line, e.col), (2, 4));
        let e = parse_qasm("qreg q[2];\nh q[0]").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_qasm("qreg q[2];\ncx q[0],q[0];").is_err());
        assert!(parse_qasm("qreg q[1];\ncreg c[1];").is_err());
        assert!(parse_qasm("qreg q[1];\nmeasure q[0] -> c[0];").is_err());
        assert!(parse_qasm("h q[0];").is_err());
        assert!(parse_qasm("OPENQASM 3.0;\nqreg q[1];").is_err());
    }

    #[test]
    fn comments_and_whitespace() {
        let c = parse_qasm("// header\nOPENQASM 2.0;\nqreg   q [ 2 ] ; // reg\n  cz q[0] , q[1];").unwrap();
        assert_eq!(c.gates(), &[Gate::Cz(0, 1)]);
    }

    fn textbook(name: &str) -> DenseMatrix {
        let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::i());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let t = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let rows: Vec<Vec<C64>> = match name {
            "h" => vec![vec![o * r, o * r], vec![o * r, -o * r]],
            "s" => vec![vec![o, z], vec![z, i]],
            "sdg" => vec![vec![o, z], vec![z, -i]],
            "t" => vec![vec![o, z], vec![z, t]],
            "tdg" => vec![vec![o, z], vec![z, t.conj()]],
            "z" => vec![vec![o, z], vec![z, -o]],
            "x" => vec![vec![z, o], vec![o, z]],
            "cx" => vec![
                vec![o, z, z, z],
                vec![z, o, z, z],
                vec![z, z, z, o],
                vec![z, z, o, z],
            ],
            "cz" => vec![
                vec![o, z, z, z],
                vec![z, o, z, z],
                vec![z, z, o, z],
                vec![z, z, z, -o],
            ],
            _ => unreachable!(),
        };
        DenseMatrix::from_rows(&rows)
    }

    #[test]
    fn basis_gates_match_textbook_unitaries() {
        for name in ["h", "s", "sdg", "t", "tdg", "z", "x", "cx", "cz"] {
            let c = if name.starts_with('c') {
                parse1(&format!("{name} q[0],q[1];"), 2)
            } else {
                parse1(&format!("{name} q[0];"), 1)
            };
            let m = diagram_to_matrix(&circuit_to_diagram(&c)).unwrap();
            assert!(equal_up_to_global_phase(&m, &textbook(name), 1e-12).unwrap(), "{name}");
            assert!(equal_up_to_global_phase(&circuit_to_matrix(&c).unwrap(), &textbook(name), 1e-12).unwrap());
        }
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        let pair = (0..n, 1..n).prop_map(move |(a, k)| (a, (a + k) % n));
        prop_oneof![
            (0..n).prop_map(Gate::H),
            ((0..n), (0i64..16), (1i64..9)).prop_map(|(q, a, b)| Gate::ZPhase(q, Phase::new(a, b))),
            ((0..n), (0i64..16), (1i64..9)).prop_map(|(q, a, b)| Gate::XPhase(q, Phase::new(a, b))),
            pair.clone().prop_map(|(a, b)| Gate::cnot(a, b)),
            pair.clone().prop_map(|(a, b)| Gate::Cz(a, b)),
            pair.prop_map(|(a, b)| Gate::Swap(a, b)),
        ]
    }

    proptest! {
        #[test]
        fn round_trip(gates in proptest::collection::vec(arb_gate(4), 0..50)) {
            let c = Circuit::from_gates(4, gates).unwrap();
            prop_assert_eq!(parse_qasm(&emit_qasm(&c)).unwrap(), c);
        }
    }
}
