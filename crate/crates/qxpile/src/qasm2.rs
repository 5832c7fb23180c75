//! OpenQASM 2.0 parsing and emission for the gate-application subset used
//! as the neutral interchange format.
//!
//! The accepted grammar is the `OPENQASM 2.0;` header, an optional
//! `include "qelib1.inc";` line, one or more `qreg` declarations (multiple
//! registers are flattened to a single 0-based index space in declaration
//! order), and gate applications over the canonical vocabulary. Angle
//! expressions support decimal literals, `pi`, unary minus, and binary
//! `+ - * /` with parentheses. Everything else (measure, barrier, creg,
//! gate definitions, if, opaque, reset) is rejected as an unsupported
//! feature.

use crate::ir::{Circuit, GateInstance, GateKind};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownGate,
    ArityMismatch,
    BadIndex,
    UnsupportedFeature,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::UnknownGate => "unknown_gate",
            ParseErrorKind::ArityMismatch => "arity_mismatch",
            ParseErrorKind::BadIndex => "bad_index",
            ParseErrorKind::UnsupportedFeature => "unsupported_feature",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("line {line}, column {column}: {message} ({kind})")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    /// Punctuation that is legal QASM2 but outside the supported subset
    /// (e.g. the `->` of measure, braces of gate bodies). Lexing tolerates
    /// it so statement-level classification can report the real feature.
    Other(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = text.chars().peekable();

    macro_rules! push {
        ($tok:expr, $line:expr, $col:expr) => {
            toks.push(Spanned {
                tok: $tok,
                line: $line,
                column: $col,
            })
        };
    }

    while let Some(&ch) = chars.peek() {
        let (tl, tc) = (line, column);
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            '/' => {
                chars.next();
                column += 1;
                if chars.peek() == Some(&'/') {
                    // line comment
                    for c in chars.by_ref() {
                        if c == '\n' {
                            break;
                        }
                    }
                    line += 1;
                    column = 1;
                } else {
                    push!(Tok::Slash, tl, tc);
                }
            }
            '(' | ')' | '[' | ']' | ',' | ';' | '+' | '-' | '*' => {
                chars.next();
                column += 1;
                let tok = match ch {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    _ => Tok::Star,
                };
                push!(tok, tl, tc);
            }
            '"' => {
                chars.next();
                column += 1;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => {
                            column += 1;
                            break;
                        }
                        Some('\n') | None => {
                            return Err(ParseError::new(
                                ParseErrorKind::Syntax,
                                tl,
                                tc,
                                "unterminated string literal",
                            ));
                        }
                        Some(c) => {
                            s.push(c);
                            column += 1;
                        }
                    }
                }
                push!(Tok::Str(s), tl, tc);
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() || c == '.' {
                        s.push(c);
                        chars.next();
                        column += 1;
                    } else if c == 'e' || c == 'E' {
                        // exponent suffix, optionally signed
                        s.push(c);
                        chars.next();
                        column += 1;
                        if let Some(&sign) = chars.peek() {
                            if sign == '+' || sign == '-' {
                                s.push(sign);
                                chars.next();
                                column += 1;
                            }
                        }
                    } else {
                        break;
                    }
                }
                push!(Tok::Number(s), tl, tc);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Ident(s), tl, tc);
            }
            '>' | '<' | '{' | '}' | '=' | '!' => {
                chars.next();
                column += 1;
                push!(Tok::Other(ch), tl, tc);
            }
            c => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    tl,
                    tc,
                    format!("unexpected character '{c}'"),
                ));
            }
        }
    }
    push!(Tok::Eof, line, column);
    Ok(toks)
}

struct Parser {
    toks: Vec<Spanned>,
    idx: usize,
    /// (name, size, flat offset) per declared register.
    registers: Vec<(String, usize, usize)>,
    nb_qubits: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.idx]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn err(&self, kind: ParseErrorKind, at: &Spanned, msg: impl Into<String>) -> ParseError {
        ParseError::new(kind, at.line, at.column, msg)
    }

    fn syntax(&self, at: &Spanned, msg: impl Into<String>) -> ParseError {
        self.err(ParseErrorKind::Syntax, at, msg)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Spanned, ParseError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            Err(self.syntax(&t, format!("expected {what}")))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Spanned), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(self.syntax(&t, "expected identifier")),
        }
    }

    fn header(&mut self) -> Result<(), ParseError> {
        let (kw, at) = self.expect_ident()?;
        if kw != "OPENQASM" {
            return Err(self.syntax(&at, "expected OPENQASM header"));
        }
        let t = self.next();
        let version = match &t.tok {
            Tok::Number(s) => s.clone(),
            _ => return Err(self.syntax(&t, "expected version number")),
        };
        if version != "2.0" {
            return Err(self.err(
                ParseErrorKind::UnsupportedFeature,
                &t,
                format!("unsupported OPENQASM version {version}"),
            ));
        }
        self.expect(Tok::Semi, "';' after header")?;
        Ok(())
    }

    fn include(&mut self) -> Result<(), ParseError> {
        // the `include` keyword has already been consumed
        let t = self.next();
        match &t.tok {
            Tok::Str(s) if s == "qelib1.inc" => {}
            Tok::Str(s) => {
                return Err(self.err(
                    ParseErrorKind::UnsupportedFeature,
                    &t,
                    format!("cannot resolve include \"{s}\""),
                ));
            }
            _ => return Err(self.syntax(&t, "expected include file name")),
        }
        self.expect(Tok::Semi, "';' after include")?;
        Ok(())
    }

    fn qreg(&mut self) -> Result<(), ParseError> {
        let (name, at) = self.expect_ident()?;
        if self.registers.iter().any(|(n, _, _)| *n == name) {
            return Err(self.syntax(&at, format!("register '{name}' already declared")));
        }
        self.expect(Tok::LBracket, "'['")?;
        let t = self.next();
        let size = match &t.tok {
            Tok::Number(s) => s
                .parse::<usize>()
                .map_err(|_| self.syntax(&t, "register size must be a non-negative integer"))?,
            _ => return Err(self.syntax(&t, "expected register size")),
        };
        if size == 0 {
            return Err(self.syntax(&t, "register size must be positive"));
        }
        self.expect(Tok::RBracket, "']'")?;
        self.expect(Tok::Semi, "';' after qreg")?;
        self.registers.push((name, size, self.nb_qubits));
        self.nb_qubits += size;
        Ok(())
    }

    fn operand(&mut self) -> Result<usize, ParseError> {
        let (name, at) = self.expect_ident()?;
        let (size, offset) = match self.registers.iter().find(|(n, _, _)| *n == name) {
            Some(&(_, size, offset)) => (size, offset),
            None => {
                return Err(self.err(
                    ParseErrorKind::BadIndex,
                    &at,
                    format!("unknown register '{name}'"),
                ));
            }
        };
        let open = self.next();
        if open.tok != Tok::LBracket {
            return Err(self.err(
                ParseErrorKind::UnsupportedFeature,
                &open,
                "whole-register operands are not supported",
            ));
        }
        let t = self.next();
        let index = match &t.tok {
            Tok::Number(s) => s
                .parse::<usize>()
                .map_err(|_| self.syntax(&t, "qubit index must be a non-negative integer"))?,
            _ => return Err(self.syntax(&t, "expected qubit index")),
        };
        if index >= size {
            return Err(self.err(
                ParseErrorKind::BadIndex,
                &t,
                format!("index {index} out of range for register '{name}[{size}]'"),
            ));
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(offset + index)
    }

    // Precedence-climbing evaluation of angle expressions.
    fn expr(&mut self) -> Result<f64, ParseError> {
        let mut value = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    value += self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    value -= self.term()?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn term(&mut self) -> Result<f64, ParseError> {
        let mut value = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    value *= self.factor()?;
                }
                Tok::Slash => {
                    self.next();
                    value /= self.factor()?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn factor(&mut self) -> Result<f64, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Minus => Ok(-self.factor()?),
            Tok::Number(s) => s
                .parse::<f64>()
                .map_err(|_| self.syntax(&t, format!("invalid number '{s}'"))),
            Tok::Ident(s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Ident(s) => Err(self.syntax(&t, format!("unknown symbol '{s}' in expression"))),
            Tok::LParen => {
                let value = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(value)
            }
            _ => Err(self.syntax(&t, "expected expression")),
        }
    }

    fn gate_statement(&mut self, name: String, at: Spanned) -> Result<GateInstance, ParseError> {
        let kind = GateKind::from_name(&name).ok_or_else(|| {
            self.err(
                ParseErrorKind::UnknownGate,
                &at,
                format!("unknown gate '{name}'"),
            )
        })?;

        let mut params = Vec::new();
        if self.peek().tok == Tok::LParen {
            self.next();
            loop {
                let value = self.expr()?;
                if !value.is_finite() {
                    return Err(self.syntax(&at, "parameter expression is not finite"));
                }
                params.push(value);
                let t = self.next();
                match t.tok {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => return Err(self.syntax(&t, "expected ',' or ')' in parameter list")),
                }
            }
        }
        if params.len() != kind.param_count() {
            return Err(self.err(
                ParseErrorKind::ArityMismatch,
                &at,
                format!(
                    "gate '{name}' takes {} parameter(s), got {}",
                    kind.param_count(),
                    params.len()
                ),
            ));
        }

        let mut qubits = Vec::new();
        loop {
            let q = self.operand()?;
            if qubits.contains(&q) {
                return Err(self.err(
                    ParseErrorKind::BadIndex,
                    &at,
                    format!("duplicate qubit operand q[{q}] on '{name}'"),
                ));
            }
            qubits.push(q);
            let t = self.next();
            match t.tok {
                Tok::Comma => continue,
                Tok::Semi => break,
                _ => return Err(self.syntax(&t, "expected ',' or ';' after operand")),
            }
        }
        if qubits.len() != kind.arity() {
            return Err(self.err(
                ParseErrorKind::ArityMismatch,
                &at,
                format!(
                    "gate '{name}' takes {} operand(s), got {}",
                    kind.arity(),
                    qubits.len()
                ),
            ));
        }

        GateInstance::new(kind, qubits, params)
            .map_err(|e| self.err(ParseErrorKind::Syntax, &at, e.to_string()))
    }
}

const UNSUPPORTED_KEYWORDS: [&str; 7] = [
    "creg", "measure", "barrier", "gate", "if", "opaque", "reset",
];

/// Parse a program in the supported subset into a circuit. The result
/// carries empty `name`/`circuit_type` labels; callers attach their own.
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        registers: Vec::new(),
        nb_qubits: 0,
    };
    p.header()?;

    let mut gates: Vec<GateInstance> = Vec::new();
    let mut seen_include = false;
    loop {
        let t = p.peek().clone();
        match &t.tok {
            Tok::Eof => break,
            Tok::Ident(name) => {
                let name = name.clone();
                p.next();
                if name == "include" {
                    if seen_include || !p.registers.is_empty() || !gates.is_empty() {
                        return Err(p.syntax(&t, "include must precede declarations"));
                    }
                    seen_include = true;
                    p.include()?;
                } else if name == "qreg" {
                    p.qreg()?;
                } else if UNSUPPORTED_KEYWORDS.contains(&name.as_str()) {
                    return Err(p.err(
                        ParseErrorKind::UnsupportedFeature,
                        &t,
                        format!("'{name}' statements are not supported"),
                    ));
                } else {
                    gates.push(p.gate_statement(name, t)?);
                }
            }
            _ => return Err(p.syntax(&t, "expected statement")),
        }
    }

    if p.nb_qubits == 0 {
        let at = p.peek().clone();
        return Err(p.syntax(&at, "program declares no quantum register"));
    }

    let mut circuit = Circuit::new(p.nb_qubits, "", "").expect("nb_qubits > 0");
    for g in gates {
        circuit.push(g).expect("operand indices already validated");
    }
    Ok(circuit)
}

/// Format an angle with 17 significant decimal digits, enough for a
/// lossless double round trip without relying on shortest-form printing.
fn format_param(x: f64) -> String {
    if x == 0.0 {
        // covers -0.0 as well
        return format!("{x:.16}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (16 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Emit a circuit as OpenQASM 2.0 text: header, the qelib1 include, a
/// single `qreg q[n];`, then one statement per gate in order.
pub fn emit(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{}];\n", c.nb_qubits()));
    for gate in c.gates() {
        out.push_str(gate.kind().name());
        if !gate.params().is_empty() {
            let params: Vec<String> = gate.params().iter().map(|&p| format_param(p)).collect();
            out.push('(');
            out.push_str(&params.join(","));
            out.push(')');
        }
        out.push(' ');
        let operands: Vec<String> = gate.qubits().iter().map(|q| format!("q[{q}]")).collect();
        out.push_str(&operands.join(","));
        out.push_str(";\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const BELL: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n";

    #[test]
    fn parses_bell_program() {
        let c = parse(BELL).unwrap();
        assert_eq!(c.nb_qubits(), 2);
        assert_eq!(c.gatecount(), 2);
        assert_eq!(c.gates()[0].kind(), GateKind::H);
        assert_eq!(c.gates()[1].kind(), GateKind::Cx);
        assert_eq!(c.gates()[1].qubits(), &[0, 1]);
    }

    #[test]
    fn evaluates_angle_expressions() {
        let c = parse("OPENQASM 2.0;\nqreg q[1];\nrx(pi/2) q[0];\n").unwrap();
        assert_eq!(c.gates()[0].params()[0], PI / 2.0);
        #[allow(clippy::approx_constant)]
        let half_pi_decimal = 1.5707963267948966;
        assert_eq!(c.gates()[0].params()[0], half_pi_decimal);

        let c = parse("OPENQASM 2.0;\nqreg q[1];\np(-pi/4 + 1.5*2) q[0];\n").unwrap();
        assert!((c.gates()[0].params()[0] - (-PI / 4.0 + 3.0)).abs() < 1e-15);

        let c = parse("OPENQASM 2.0;\nqreg q[1];\nrz((pi - 1) / (2 + 2)) q[0];\n").unwrap();
        assert!((c.gates()[0].params()[0] - (PI - 1.0) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_statements_outside_subset() {
        let cases = [
            "OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\n",
            "OPENQASM 2.0;\nqreg q[1];\nbarrier q[0];\n",
            "OPENQASM 2.0;\nqreg q[2];\ngate foo a { h a; }\n",
            "OPENQASM 2.0;\nqreg q[1];\nreset q[0];\n",
        ];
        for text in cases {
            let err = parse(text).unwrap_err();
            assert_eq!(err.kind, ParseErrorKind::UnsupportedFeature, "{text}");
        }
        let err = parse("OPENQASM 3.0;\nqubit[2] q;\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnsupportedFeature);
    }

    #[test]
    fn error_taxonomy() {
        let err = parse("OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownGate);
        assert_eq!(err.line, 3);

        let err = parse("OPENQASM 2.0;\nqreg q[2];\ncx q[0];\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ArityMismatch);

        let err = parse("OPENQASM 2.0;\nqreg q[1];\nh(1.0) q[0];\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ArityMismatch);

        let err = parse("OPENQASM 2.0;\nqreg q[1];\nrx q[0];\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ArityMismatch);

        let err = parse("OPENQASM 2.0;\nqreg q[2];\nh q[5];\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadIndex);

        let err = parse("OPENQASM 2.0;\nqreg q[2];\ncx q[1],q[1];\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadIndex);

        let err = parse("OPENQASM 2.0;\nqreg q[2];\nh r[0];\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadIndex);

        let err = parse("OPENQASM 2.0;\nqreg q[1];\nh q[0]\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);

        let err = parse("OPENQASM 2.0;\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn flattens_multiple_registers_in_declaration_order() {
        let c = parse("OPENQASM 2.0;\nqreg a[1];\nqreg b[2];\nh b[1];\ncx a[0],b[0];\n").unwrap();
        assert_eq!(c.nb_qubits(), 3);
        assert_eq!(c.gates()[0].qubits(), &[2]);
        assert_eq!(c.gates()[1].qubits(), &[0, 1]);
    }

    #[test]
    fn u_alias_normalizes_to_u3() {
        let c = parse("OPENQASM 2.0;\nqreg q[1];\nu(0.1,0.2,0.3) q[0];\n").unwrap();
        assert_eq!(c.gates()[0].kind(), GateKind::U3);
        assert_eq!(c.gates()[0].params(), &[0.1, 0.2, 0.3]);
    }

    #[test]
    fn emits_bell_program_byte_exact() {
        let mut c = Circuit::new(2, "bell", "Test").unwrap();
        c.push_gate(GateKind::H, vec![0], vec![]).unwrap();
        c.push_gate(GateKind::Cx, vec![0, 1], vec![]).unwrap();
        assert_eq!(emit(&c), BELL);
    }

    #[test]
    fn emits_angles_with_17_significant_digits() {
        let mut c = Circuit::new(1, "", "").unwrap();
        c.push_gate(GateKind::Rx, vec![0], vec![1.0]).unwrap();
        let text = emit(&c);
        assert!(text.contains("rx(1.0000000000000000) q[0];\n"), "{text}");

        assert_eq!(format_param(PI / 2.0), "1.5707963267948966");
        assert_eq!(format_param(0.1), "0.10000000000000001");
        assert_eq!(format_param(-0.25), "-0.25000000000000000");
        assert_eq!(format_param(0.0), "0.0000000000000000");
        // lossless round trip through the fixed rule
        for &x in &[PI, 2.0 * PI - 1e-12, 1e-9, 6.023, -PI / 3.0] {
            assert_eq!(format_param(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn u3_emitted_as_u3() {
        let mut c = Circuit::new(1, "", "").unwrap();
        c.push_gate(GateKind::U3, vec![0], vec![0.1, 0.2, 0.3])
            .unwrap();
        assert!(emit(&c).contains("u3(0.10000000000000001,0.20000000000000001,0.29999999999999999) q[0];"));
    }

    #[test]
    fn round_trips_every_kind() {
        let mut c = Circuit::new(3, "all-kinds", "Test").unwrap();
        let angles = [2.3127, 0.00041, 5.9, 1.0];
        for (i, kind) in GateKind::ALL.into_iter().enumerate() {
            let qubits: Vec<usize> = (0..kind.arity()).map(|j| (i + j) % 3).collect();
            let params: Vec<f64> = (0..kind.param_count())
                .map(|j| angles[(i + j) % angles.len()])
                .collect();
            c.push_gate(kind, qubits, params).unwrap();
        }
        let parsed = parse(&emit(&c)).unwrap();
        assert!(parsed.structurally_equal(&c, 1e-12));
        // the image of emit contains exactly gatecount(c) gate statements
        let statements = emit(&c).lines().count();
        assert_eq!(statements, 3 + c.gatecount());
    }

    #[test]
    fn accepts_comments_and_blank_lines() {
        let text = "OPENQASM 2.0;\n// a comment\ninclude \"qelib1.inc\";\n\nqreg q[1];\nh q[0]; // trailing\n";
        let c = parse(text).unwrap();
        assert_eq!(c.gatecount(), 1);
    }
}
