//! Line-oriented circuit text format.
//!
//! ```text
//! name aqft
//! qubits 3
//! ancillas q2
//! param n=3
//! H q0
//! CPhase q1 q0 angle=1.5707963267948966
//! Toffoli q0 q1 q2 tag=adder
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Serialization prints
//! angles with the shortest representation that parses back to the same bits.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::{GateKind, GateOp, LogicalCircuit, QubitId, QubitRole};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn to_text(c: &LogicalCircuit) -> String {
    let mut out = String::new();
    if !c.metadata.name.is_empty() {
        let _ = writeln!(out, "name {}", c.metadata.name);
    }
    let _ = writeln!(out, "qubits {}", c.num_qubits());
    let ancillas: Vec<String> =
        c.qubits.iter().filter(|q| q.role == QubitRole::Ancilla).map(|q| format!("q{}", q.id)).collect();
    if !ancillas.is_empty() {
        let _ = writeln!(out, "ancillas {}", ancillas.join(" "));
    }
    for (k, v) in &c.metadata.params {
        let _ = writeln!(out, "param {k}={v}");
    }
    for op in &c.ops {
        out.push_str(op.kind.name());
        for q in &op.qubits {
            let _ = write!(out, " q{q}");
        }
        if let Some(a) = op.kind.angle() {
            let _ = write!(out, " angle={a:?}");
        }
        if let Some(t) = &op.tag {
            let _ = write!(out, " tag={t}");
        }
        out.push('\n');
    }
    out
}

fn parse_qubit(tok: &str, line: usize) -> Result<QubitId, ParseError> {
    tok.strip_prefix('q')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| err(line, format!("expected qubit like q3, got `{tok}`")))
}

fn parse_kind(name: &str, angle: Option<f64>, line: usize) -> Result<GateKind, ParseError> {
    let need_angle = || angle.ok_or_else(|| err(line, format!("{name} needs angle=")));
    let kind = match name {
        "H" => GateKind::H,
        "S" => GateKind::S,
        "X" => GateKind::X,
        "Z" => GateKind::Z,
        "CNOT" => GateKind::Cnot,
        "CZ" => GateKind::Cz,
        "SWAP" => GateKind::Swap,
        "T" => GateKind::T,
        "Tdg" => GateKind::Tdg,
        "Rz" => GateKind::Rz(need_angle()?),
        "CPhase" => GateKind::CPhase(need_angle()?),
        "Toffoli" => GateKind::Toffoli,
        "CCZ" => GateKind::Ccz,
        "Measure" => GateKind::Measure,
        "Prep" => GateKind::Prep,
        other => return Err(err(line, format!("unknown gate `{other}`"))),
    };
    if angle.is_some() && kind.angle().is_none() {
        return Err(err(line, format!("{name} takes no angle")));
    }
    Ok(kind)
}

pub fn parse_text(src: &str) -> Result<LogicalCircuit, ParseError> {
    let mut c = LogicalCircuit::default();
    let mut declared: Option<u32> = None;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut toks = text.split_whitespace();
        let head = toks.next().unwrap_or_default();
        match head {
            "name" => {
                c.metadata.name = text["name".len()..].trim().to_string();
            }
            "qubits" => {
                let n: u32 =
                    toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| err(line, "qubits needs a count"))?;
                if declared.is_some() {
                    return Err(err(line, "qubits declared twice"));
                }
                declared = Some(n);
                let name = core::mem::take(&mut c.metadata.name);
                let params = core::mem::take(&mut c.metadata.params);
                let ops = core::mem::take(&mut c.ops);
                c = LogicalCircuit::new(&name, n);
                c.metadata.params = params;
                c.ops = ops;
            }
            "ancillas" => {
                if declared.is_none() {
                    return Err(err(line, "ancillas before qubits"));
                }
                for t in toks {
                    let q = parse_qubit(t, line)?;
                    if q >= declared.unwrap_or(0) {
                        return Err(err(line, format!("ancilla q{q} not declared")));
                    }
                    c.set_role(q, QubitRole::Ancilla);
                }
            }
            "param" => {
                let rest = text["param".len()..].trim();
                let (k, v) = rest.split_once('=').ok_or_else(|| err(line, "param needs key=value"))?;
                c.metadata.params.insert(k.to_string(), v.to_string());
            }
            gate => {
                if declared.is_none() {
                    return Err(err(line, "gate before qubits header"));
                }
                let mut qubits = Vec::new();
                let mut angle = None;
                let mut tag = None;
                for t in toks {
                    if let Some(a) = t.strip_prefix("angle=") {
                        let v: f64 = a.parse().map_err(|_| err(line, format!("bad angle `{a}`")))?;
                        angle = Some(v);
                    } else if let Some(tg) = t.strip_prefix("tag=") {
                        tag = Some(tg.to_string());
                    } else {
                        qubits.push(parse_qubit(t, line)?);
                    }
                }
                let kind = parse_kind(gate, angle, line)?;
                c.ops.push(GateOp { kind, qubits, tag });
            }
        }
    }
    if declared.is_none() {
        return Err(err(0, "missing qubits header"));
    }
    c.validate().map_err(|e| err(0, e.to_string()))?;
    Ok(c)
}
