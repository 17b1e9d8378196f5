//! Newline-delimited ASCII circuit format.
//!
//! ```text
//! WIDTH 6
//! REG a 0 2 input_a
//! # gates follow
//! CNOT 0 1
//! TOF 0 2 4
//! SWAP 1 3
//! ```

use crate::circuit::{Circuit, Gate, RegisterRole};
use crate::error::{Error, Result};
use std::fmt::Write as _;

pub fn export_text(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "WIDTH {}", c.width()).unwrap();
    for r in c.registers() {
        writeln!(out, "REG {} {} {} {}", r.name, r.start, r.len, r.role.as_str()).unwrap();
    }
    for g in c.gates() {
        match *g {
            Gate::Cnot { control, target } => writeln!(out, "CNOT {control} {target}").unwrap(),
            Gate::Toffoli { c1, c2, target } => writeln!(out, "TOF {c1} {c2} {target}").unwrap(),
            Gate::Swap { a, b } => writeln!(out, "SWAP {a} {b}").unwrap(),
        }
    }
    out
}

pub fn parse_text(text: &str) -> Result<Circuit> {
    let err = |line: usize, msg: String| Error::ParseError { line, msg };
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().unwrap();
        let mut field = |what: &str| -> Result<String> {
            parts
                .next()
                .map(str::to_string)
                .ok_or_else(|| err(line_no, format!("missing {what}")))
        };
        let parse_num = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| err(line_no, format!("bad number '{s}'")))
        };
        match keyword {
            "WIDTH" => {
                if circuit.is_some() {
                    return Err(err(line_no, "duplicate WIDTH".into()));
                }
                circuit = Some(Circuit::new(parse_num(&field("width")?)?));
            }
            "REG" => {
                let c = circuit
                    .as_mut()
                    .ok_or_else(|| err(line_no, "REG before WIDTH".into()))?;
                let name = field("name")?;
                let start = parse_num(&field("start")?)?;
                let len = parse_num(&field("len")?)?;
                let role_s = field("role")?;
                let role = RegisterRole::parse(&role_s)
                    .ok_or_else(|| err(line_no, format!("bad role '{role_s}'")))?;
                if start + len > c.width() {
                    return Err(err(line_no, "register exceeds width".into()));
                }
                c.add_register(&name, start, len, role);
            }
            "CNOT" | "TOF" | "SWAP" => {
                let c = circuit
                    .as_mut()
                    .ok_or_else(|| err(line_no, "gate before WIDTH".into()))?;
                let mut wires = Vec::new();
                for w in parts.by_ref() {
                    wires.push(parse_num(w)?);
                }
                let gate = match (keyword, wires.as_slice()) {
                    ("CNOT", [a, b]) if a != b => Gate::cnot(*a, *b),
                    ("TOF", [a, b, t]) if a != b && a != t && b != t => Gate::toffoli(*a, *b, *t),
                    ("SWAP", [a, b]) if a != b => Gate::swap(*a, *b),
                    _ => return Err(err(line_no, format!("bad {keyword} operands"))),
                };
                if gate.max_wire() as usize >= c.width() {
                    return Err(err(line_no, "wire index out of range".into()));
                }
                c.push(gate);
            }
            other => return Err(err(line_no, format!("unknown keyword '{other}'"))),
        }
    }
    circuit.ok_or_else(|| err(0, "missing WIDTH header".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_examples() {
        let mut c = Circuit::new(10);
        c.push(Gate::cnot(0, 1));
        c.push(Gate::toffoli(2, 5, 9));
        let text = export_text(&c);
        assert!(text.contains("CNOT 0 1"));
        assert!(text.contains("TOF 2 5 9"));
    }

    #[test]
    fn round_trip_with_registers() {
        let mut c = Circuit::new(6);
        c.add_register("a", 0, 2, RegisterRole::InputA);
        c.add_register("b", 2, 2, RegisterRole::InputB);
        c.add_register("c", 4, 2, RegisterRole::Target);
        c.push(Gate::cnot(0, 2));
        c.push(Gate::toffoli(0, 2, 4));
        c.push(Gate::swap(4, 5));
        let parsed = parse_text(&export_text(&c)).unwrap();
        assert_eq!(parsed, c);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_text("WIDTH 4\nCNOT 0\n").unwrap_err();
        match e {
            Error::ParseError { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_text("CNOT 0 1\n").is_err());
        assert!(parse_text("WIDTH 2\nCNOT 0 5\n").is_err());
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let c = parse_text("WIDTH 3\n# a comment\n\nCNOT 0 1 # trailing\n").unwrap();
        assert_eq!(c.len(), 1);
    }
}
