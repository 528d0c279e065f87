//! Text and structured (JSON) forms of a [`DatapathTrace`].
//!
//! Text form, one state per line, then a closing line:
//!
//! ```text
//! round=00 stage=1 L=CC00CCFF R=F0AAF0AA C=F0CCAAF D=556678F SUBKEY=------------
//! round=01 stage=1 L=F0AAF0AA R=EF4A6544 C=E19955F D=AACCF1E SUBKEY=1B02EFFC7072
//! ...
//! cycles=16 preoutput=0A4CD99543423234 output=85E813540F0AB405
//! ```
//!
//! The JSON form uses the same field names.

use std::fmt::Write as _;

use des_core::datapath::{DatapathTrace, RoundRegisterState};
use des_core::{Block64, Half32, Subkey48};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceFormat {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceFormatError {
    #[error("line {line}: missing field {field}")]
    MissingField { line: usize, field: &'static str },
    #[error("line {line}: bad value for {field}: {value:?}")]
    BadValue { line: usize, field: &'static str, value: String },
    #[error("trace has no closing output line")]
    MissingOutput,
    #[error("structured trace: {0}")]
    Json(String),
}

const UNDEFINED_SUBKEY: &str = "------------";

pub fn state_line(s: &RoundRegisterState) -> String {
    let subkey = s.subkey.map_or_else(|| UNDEFINED_SUBKEY.to_owned(), |k| k.to_string());
    format!(
        "round={:02} stage={} L={} R={} C={:07X} D={:07X} SUBKEY={}",
        s.round, s.stage, s.l, s.r, s.c, s.d, subkey
    )
}

pub fn render(trace: &DatapathTrace, format: TraceFormat) -> String {
    match format {
        TraceFormat::Text => render_text(trace),
        TraceFormat::Structured => render_json(trace),
    }
}

pub fn render_text(trace: &DatapathTrace) -> String {
    let mut out = String::new();
    for s in &trace.states {
        out.push_str(&state_line(s));
        out.push('\n');
    }
    let _ = writeln!(out, "cycles={} preoutput={} output={}", trace.cycles, trace.preoutput, trace.output);
    out
}

fn fields(line: &str) -> impl Iterator<Item = (&str, &str)> {
    line.split_whitespace().filter_map(|tok| tok.split_once('='))
}

fn field<'a>(line: &'a str, n: usize, name: &'static str) -> Result<&'a str, TraceFormatError> {
    fields(line)
        .find(|(k, _)| *k == name)
        .map(|(_, v)| v)
        .ok_or(TraceFormatError::MissingField { line: n, field: name })
}

fn hex_field(line: &str, n: usize, name: &'static str, max_digits: usize) -> Result<u64, TraceFormatError> {
    let v = field(line, n, name)?;
    let bad = || TraceFormatError::BadValue { line: n, field: name, value: v.to_owned() };
    if v.len() != max_digits || !v.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(bad());
    }
    u64::from_str_radix(v, 16).map_err(|_| bad())
}

fn dec_field(line: &str, n: usize, name: &'static str) -> Result<u32, TraceFormatError> {
    let v = field(line, n, name)?;
    v.parse().map_err(|_| TraceFormatError::BadValue { line: n, field: name, value: v.to_owned() })
}

pub fn parse_text(text: &str) -> Result<DatapathTrace, TraceFormatError> {
    let mut states = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("cycles=") {
            return Ok(DatapathTrace {
                states,
                cycles: dec_field(line, n, "cycles")?,
                preoutput: Block64(hex_field(line, n, "preoutput", 16)?),
                output: Block64(hex_field(line, n, "output", 16)?),
            });
        }
        let subkey = match field(line, n, "SUBKEY")? {
            UNDEFINED_SUBKEY => None,
            _ => Some(Subkey48::new(hex_field(line, n, "SUBKEY", 12)?)),
        };
        states.push(RoundRegisterState {
            round: dec_field(line, n, "round")? as u8,
            stage: dec_field(line, n, "stage")? as u8,
            l: Half32(hex_field(line, n, "L", 8)? as u32),
            r: Half32(hex_field(line, n, "R", 8)? as u32),
            c: hex_field(line, n, "C", 7)? as u32,
            d: hex_field(line, n, "D", 7)? as u32,
            subkey,
        });
    }
    Err(TraceFormatError::MissingOutput)
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    round: u8,
    stage: u8,
    #[serde(rename = "L")]
    l: String,
    #[serde(rename = "R")]
    r: String,
    #[serde(rename = "C")]
    c: String,
    #[serde(rename = "D")]
    d: String,
    #[serde(rename = "SUBKEY")]
    subkey: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct TraceRecord {
    states: Vec<StateRecord>,
    cycles: u32,
    preoutput: String,
    output: String,
}

pub fn render_json(trace: &DatapathTrace) -> String {
    let record = TraceRecord {
        states: trace
            .states
            .iter()
            .map(|s| StateRecord {
                round: s.round,
                stage: s.stage,
                l: s.l.to_string(),
                r: s.r.to_string(),
                c: format!("{:07X}", s.c),
                d: format!("{:07X}", s.d),
                subkey: s.subkey.map(|k| k.to_string()),
            })
            .collect(),
        cycles: trace.cycles,
        preoutput: trace.preoutput.to_string(),
        output: trace.output.to_string(),
    };
    let mut s = serde_json::to_string_pretty(&record).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<DatapathTrace, TraceFormatError> {
    let record: TraceRecord = serde_json::from_str(text).map_err(|e| TraceFormatError::Json(e.to_string()))?;
    let hex = |v: &str, digits: usize, field: &'static str| -> Result<u64, TraceFormatError> {
        if v.len() != digits || !v.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(TraceFormatError::Json(format!("bad {field} value {v:?}")));
        }
        Ok(u64::from_str_radix(v, 16).expect("validated"))
    };
    let states = record
        .states
        .iter()
        .map(|s| {
            Ok(RoundRegisterState {
                round: s.round,
                stage: s.stage,
                l: Half32(hex(&s.l, 8, "L")? as u32),
                r: Half32(hex(&s.r, 8, "R")? as u32),
                c: hex(&s.c, 7, "C")? as u32,
                d: hex(&s.d, 7, "D")? as u32,
                subkey: s.subkey.as_deref().map(|k| hex(k, 12, "SUBKEY").map(Subkey48::new)).transpose()?,
            })
        })
        .collect::<Result<Vec<_>, TraceFormatError>>()?;
    Ok(DatapathTrace {
        states,
        cycles: record.cycles,
        preoutput: Block64(hex(&record.preoutput, 16, "preoutput")?),
        output: Block64(hex(&record.output, 16, "output")?),
    })
}
