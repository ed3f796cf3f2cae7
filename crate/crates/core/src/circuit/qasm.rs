//! OpenQASM 2.0 subset: one quantum register, gates
//! `h x rx ry rz rxz cx cz cp swap ccz cccz`. `rxz` (rotation about the
//! diagonal x+z axis), `ccz` and `cccz` are extensions. `creg`, `barrier`
//! and `measure` statements are accepted and ignored.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use thiserror::Error;

use super::{Axis, Circuit, CircuitError, Gate, GateKind};

const NAME_PREFIX: &str = "// circuit:";

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Str,
    Punct(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Num(s) => write!(f, "`{s}`"),
            Tok::Str => f.write_str("string literal"),
            Tok::Punct(c) => write!(f, "`{c}`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, col, msg: msg.into() }
}

fn lex(text: &str) -> Result<(Vec<Spanned>, Option<String>), ParseError> {
    let mut toks = Vec::new();
    let mut name = None;
    for (li, line) in text.lines().enumerate() {
        let lineno = li + 1;
        if name.is_none() {
            if let Some(rest) = line.trim_start().strip_prefix(NAME_PREFIX) {
                name = Some(rest.trim().to_string());
            }
        }
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line: lineno, col });
            } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
                let start = i;
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
                toks.push(Spanned { tok: Tok::Num(chars[start..i].iter().collect()), line: lineno, col });
            } else if c == '"' {
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(err(lineno, col, "unterminated string literal"));
                }
                i += 1;
                toks.push(Spanned { tok: Tok::Str, line: lineno, col });
            } else if "[](),;+-*/>".contains(c) {
                toks.push(Spanned { tok: Tok::Punct(c), line: lineno, col });
                i += 1;
            } else {
                return Err(err(lineno, col, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok((toks, name))
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.here();
        Err(err(l, c, msg))
    }

    fn next(&mut self) -> Result<Spanned, ParseError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.fail("unexpected end of input"),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Spanned { tok: Tok::Punct(p), .. }) if *p == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            return Ok(());
        }
        match self.peek() {
            Some(t) => {
                let msg = format!("expected `{c}`, found {}", t.tok);
                self.fail(msg)
            }
            None => self.fail(format!("expected `{c}`, found end of input")),
        }
    }

    fn ident(&mut self) -> Result<(String, usize, usize), ParseError> {
        let t = self.next()?;
        match t.tok {
            Tok::Ident(s) => Ok((s, t.line, t.col)),
            other => Err(err(t.line, t.col, format!("expected identifier, found {other}"))),
        }
    }

    fn integer(&mut self) -> Result<usize, ParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Num(s) => s
                .parse::<usize>()
                .map_err(|_| err(t.line, t.col, format!("expected non-negative integer, found `{s}`"))),
            other => Err(err(t.line, t.col, format!("expected integer, found {other}"))),
        }
    }

    fn skip_statement(&mut self) -> Result<(), ParseError> {
        loop {
            if self.eat(';') {
                return Ok(());
            }
            self.next()?;
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<f64, ParseError> {
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

    fn term(&mut self) -> Result<f64, ParseError> {
        let mut v = self.factor()?;
        loop {
            if self.eat('*') {
                v *= self.factor()?;
            } else if self.eat('/') {
                v /= self.factor()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn factor(&mut self) -> Result<f64, ParseError> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        if self.eat('(') {
            let v = self.expr()?;
            self.expect(')')?;
            return Ok(v);
        }
        let t = self.next()?;
        match &t.tok {
            Tok::Num(s) => s.parse::<f64>().map_err(|_| err(t.line, t.col, format!("bad number `{s}`"))),
            Tok::Ident(s) if s == "pi" => Ok(PI),
            other => Err(err(t.line, t.col, format!("expected number, found {other}"))),
        }
    }
}

fn gate_kind(name: &str, angle: Option<f64>) -> Option<(GateKind, bool)> {
    let k = match (name, angle) {
        ("h", None) => GateKind::H,
        ("x", None) => GateKind::X,
        ("rx", Some(a)) => GateKind::Rot { axis: Axis::X, angle: a },
        ("ry", Some(a)) => GateKind::Rot { axis: Axis::Y, angle: a },
        ("rz", Some(a)) => GateKind::Rot { axis: Axis::Z, angle: a },
        ("rxz", Some(a)) => GateKind::Rot { axis: Axis::Xz, angle: a },
        ("cx", None) => GateKind::Cx,
        ("cz", None) => GateKind::Cz,
        ("cp", Some(a)) => GateKind::Cp { angle: a },
        ("swap", None) => GateKind::Swap,
        ("ccz", None) => GateKind::Ccz,
        ("cccz", None) => GateKind::Cccz,
        _ => return None,
    };
    Some((k, angle.is_some()))
}

fn is_known_gate(name: &str) -> bool {
    matches!(name, "h" | "x" | "rx" | "ry" | "rz" | "rxz" | "cx" | "cz" | "cp" | "swap" | "ccz" | "cccz")
}

pub fn parse_qasm(text: &str) -> Result<Circuit, ParseError> {
    let (toks, name) = lex(text)?;
    let end = toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
    let mut p = Parser { toks, pos: 0, end };
    let mut circuit: Option<(String, Circuit)> = None;

    while p.peek().is_some() {
        let (word, line, col) = p.ident()?;
        match word.as_str() {
            "OPENQASM" => {
                let t = p.next()?;
                if !matches!(&t.tok, Tok::Num(v) if v == "2.0" || v == "2") {
                    return Err(err(t.line, t.col, "only OPENQASM 2.0 is supported"));
                }
                p.expect(';')?;
            }
            "include" => {
                let t = p.next()?;
                if t.tok != Tok::Str {
                    return Err(err(t.line, t.col, format!("expected file name, found {}", t.tok)));
                }
                p.expect(';')?;
            }
            "qreg" => {
                if circuit.is_some() {
                    return Err(err(line, col, "only one qreg is supported"));
                }
                let (reg, _, _) = p.ident()?;
                p.expect('[')?;
                let size = p.integer()?;
                p.expect(']')?;
                p.expect(';')?;
                let label = name.clone().unwrap_or_else(|| "main".to_string());
                circuit = Some((reg, Circuit::new(label, size)));
            }
            "creg" | "barrier" | "measure" => p.skip_statement()?,
            g => {
                let angle = if p.eat('(') {
                    let a = p.expr()?;
                    p.expect(')')?;
                    Some(a)
                } else {
                    None
                };
                let Some((kind, _)) = gate_kind(g, angle) else {
                    return Err(if is_known_gate(g) {
                        err(line, col, format!("wrong parameter list for gate `{g}`"))
                    } else {
                        err(line, col, format!("unknown gate `{g}`"))
                    });
                };
                let Some((reg, c)) = circuit.as_mut() else {
                    return Err(err(line, col, "gate before qreg declaration"));
                };
                let mut qubits = Vec::new();
                loop {
                    let (l, cl) = p.here();
                    let (r, _, _) = p.ident()?;
                    if &r != reg {
                        return Err(err(l, cl, format!("unknown register `{r}`")));
                    }
                    p.expect('[')?;
                    let q = p.integer()?;
                    p.expect(']')?;
                    if q >= c.num_qubits() {
                        return Err(err(l, cl, format!("qubit {r}[{q}] out of range")));
                    }
                    if qubits.contains(&q) {
                        return Err(err(l, cl, format!("duplicate operand {r}[{q}]")));
                    }
                    qubits.push(q);
                    if !p.eat(',') {
                        break;
                    }
                }
                p.expect(';')?;
                let gate = Gate::new(kind, qubits).map_err(|e: CircuitError| err(line, col, e.to_string()))?;
                c.push(gate).map_err(|e| err(line, col, e.to_string()))?;
            }
        }
    }
    circuit.map(|(_, c)| c).ok_or_else(|| err(end.0, end.1, "missing qreg declaration"))
}

pub fn emit_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(out, "{NAME_PREFIX} {}", c.name);
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits());
    for g in c.gates() {
        match g.kind {
            GateKind::Rot { axis, angle } => {
                let _ = write!(out, "r{}({angle:?})", axis.name());
            }
            GateKind::Cp { angle } => {
                let _ = write!(out, "cp({angle:?})");
            }
            other => out.push_str(other.tag().name()),
        }
        let ops: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", ops.join(","));
    }
    out
}
