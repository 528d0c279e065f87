//! Known-answer-test files.
//!
//! ```text
//! # comment
//! [DES]            # or [TDES-EDE] / [TDES-EEE]
//! [ENCRYPT]        # or [DECRYPT]
//!
//! COUNT = 0
//! KEY = 133457799BBCDFF1          # TDES sections use KEY1, KEY2, KEY3
//! PLAINTEXT = 0123456789ABCDEF
//! CIPHERTEXT = 85E813540F0AB405
//! ```
//!
//! The field that matches the section direction is the input; the other one,
//! if present, is the expected output. Hex is case-insensitive on input and
//! uppercase on output.

use std::fmt::{self, Write as _};

use des_core::datapath::{EngineConfig, Operation};
use des_core::{make_bundle, Block64, HexError, Key64, TdeaSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::golden::golden_output;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Encrypt,
    Decrypt,
}

impl Direction {
    fn header(self) -> &'static str {
        match self {
            Direction::Encrypt => "ENCRYPT",
            Direction::Decrypt => "DECRYPT",
        }
    }
}

/// Algorithm and keys of one vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KatCipher {
    Des(Key64),
    Tdes { sequence: TdeaSequence, keys: [Key64; 3] },
}

/// Section-level algorithm, before any key is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Des,
    Tdes(TdeaSequence),
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Des, Suite::Tdes(TdeaSequence::Ede), Suite::Tdes(TdeaSequence::Eee)];

    pub fn header(self) -> &'static str {
        match self {
            Suite::Des => "DES",
            Suite::Tdes(TdeaSequence::Ede) => "TDES-EDE",
            Suite::Tdes(TdeaSequence::Eee) => "TDES-EEE",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.header())
    }
}

impl KatCipher {
    pub fn suite(&self) -> Suite {
        match self {
            KatCipher::Des(_) => Suite::Des,
            KatCipher::Tdes { sequence, .. } => Suite::Tdes(*sequence),
        }
    }

    pub fn engine_config(&self, direction: Direction) -> EngineConfig {
        match (self, direction) {
            (KatCipher::Des(k), Direction::Encrypt) => EngineConfig::des(Operation::DesEncrypt, *k),
            (KatCipher::Des(k), Direction::Decrypt) => EngineConfig::des(Operation::DesDecrypt, *k),
            (KatCipher::Tdes { sequence, keys: [k1, k2, k3] }, d) => {
                let op = match d {
                    Direction::Encrypt => Operation::TdeaEncrypt,
                    Direction::Decrypt => Operation::TdeaDecrypt,
                };
                EngineConfig::tdea(op, make_bundle(*k1, *k2, *k3, *sequence))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TestVector {
    /// 0-based position in the file.
    pub id: usize,
    /// The `COUNT` value as written.
    pub count: u64,
    pub cipher: KatCipher,
    pub direction: Direction,
    pub input: Block64,
    pub expected: Option<Block64>,
}

impl TestVector {
    pub fn engine_config(&self) -> EngineConfig {
        self.cipher.engine_config(self.direction)
    }

    pub fn golden(&self) -> Block64 {
        golden_output(&self.engine_config(), self.input)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed hex in {field}: {source}")]
    MalformedHex { field: String, source: HexError },
    #[error("{field} must be exactly 16 hex digits, found {found}")]
    WrongWidth { field: String, found: usize },
    #[error("vector is missing required field {0}")]
    MissingField(&'static str),
    #[error("unknown field {0}")]
    UnknownKey(String),
    #[error("unknown section header [{0}]")]
    UnknownSection(String),
    #[error("field {0} appears before any COUNT line")]
    FieldOutsideVector(String),
    #[error("field {field} is not valid in a {suite} section")]
    UnexpectedField { field: String, suite: Suite },
    #[error("field {0} given twice in one vector")]
    DuplicateField(String),
    #[error("COUNT value is not a non-negative integer")]
    BadCount,
    #[error("COUNT before {0} section header")]
    MissingContext(&'static str),
    #[error("expected `NAME = VALUE` or `[SECTION]`")]
    MalformedLine,
}

/// A KAT parse failure with its 1-based line number and offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind} (at {token:?})")]
pub struct ParseError {
    pub line: usize,
    pub token: String,
    pub kind: ParseErrorKind,
}

#[derive(Default)]
struct Pending {
    line: usize,
    token: String,
    count: u64,
    key: Option<Key64>,
    keys: [Option<Key64>; 3],
    plaintext: Option<Block64>,
    ciphertext: Option<Block64>,
}

fn parse_hex_field(field: &str, value: &str) -> Result<Block64, ParseErrorKind> {
    Block64::from_hex(value).map_err(|e| match e {
        HexError::WrongWidth { found, .. } => ParseErrorKind::WrongWidth { field: field.to_owned(), found },
        source => ParseErrorKind::MalformedHex { field: field.to_owned(), source },
    })
}

fn set_once<T>(slot: &mut Option<T>, value: T, field: &str) -> Result<(), ParseErrorKind> {
    if slot.is_some() {
        return Err(ParseErrorKind::DuplicateField(field.to_owned()));
    }
    *slot = Some(value);
    Ok(())
}

struct Parser {
    suite: Option<Suite>,
    direction: Option<Direction>,
    pending: Option<Pending>,
    out: Vec<TestVector>,
}

impl Parser {
    fn finish(&mut self) -> Result<(), ParseError> {
        let Some(p) = self.pending.take() else { return Ok(()) };
        let err = |kind| ParseError { line: p.line, token: p.token.clone(), kind };
        // Context was checked when COUNT was accepted.
        let suite = self.suite.expect("context checked");
        let direction = self.direction.expect("context checked");
        let cipher = match suite {
            Suite::Des => KatCipher::Des(p.key.ok_or_else(|| err(ParseErrorKind::MissingField("KEY")))?),
            Suite::Tdes(sequence) => {
                let mut keys = [Key64(0); 3];
                for (i, (slot, name)) in p.keys.iter().zip(["KEY1", "KEY2", "KEY3"]).enumerate() {
                    keys[i] = slot.ok_or_else(|| err(ParseErrorKind::MissingField(name)))?;
                }
                KatCipher::Tdes { sequence, keys }
            }
        };
        let (input, expected, input_name) = match direction {
            Direction::Encrypt => (p.plaintext, p.ciphertext, "PLAINTEXT"),
            Direction::Decrypt => (p.ciphertext, p.plaintext, "CIPHERTEXT"),
        };
        let input = input.ok_or_else(|| err(ParseErrorKind::MissingField(input_name)))?;
        self.out.push(TestVector { id: self.out.len(), count: p.count, cipher, direction, input, expected });
        Ok(())
    }

    fn line(&mut self, number: usize, line: &str) -> Result<(), ParseError> {
        let fail = |token: &str, kind| ParseError { line: number, token: token.to_owned(), kind };

        if let Some(inner) = line.strip_prefix('[') {
            let name = inner.strip_suffix(']').ok_or_else(|| fail(line, ParseErrorKind::MalformedLine))?.trim();
            self.finish()?;
            match name.to_ascii_uppercase().as_str() {
                "DES" => self.suite = Some(Suite::Des),
                "TDES-EDE" => self.suite = Some(Suite::Tdes(TdeaSequence::Ede)),
                "TDES-EEE" => self.suite = Some(Suite::Tdes(TdeaSequence::Eee)),
                "ENCRYPT" => self.direction = Some(Direction::Encrypt),
                "DECRYPT" => self.direction = Some(Direction::Decrypt),
                _ => return Err(fail(name, ParseErrorKind::UnknownSection(name.to_owned()))),
            }
            return Ok(());
        }

        let (name, value) = line.split_once('=').ok_or_else(|| fail(line, ParseErrorKind::MalformedLine))?;
        let (name, value) = (name.trim(), value.trim());
        let upper = name.to_ascii_uppercase();

        if upper == "COUNT" {
            self.finish()?;
            if self.suite.is_none() {
                return Err(fail(line, ParseErrorKind::MissingContext("algorithm")));
            }
            if self.direction.is_none() {
                return Err(fail(line, ParseErrorKind::MissingContext("direction")));
            }
            let count = value.parse().map_err(|_| fail(value, ParseErrorKind::BadCount))?;
            self.pending = Some(Pending { line: number, token: line.to_owned(), count, ..Pending::default() });
            return Ok(());
        }

        if !matches!(upper.as_str(), "KEY" | "KEY1" | "KEY2" | "KEY3" | "PLAINTEXT" | "CIPHERTEXT") {
            return Err(fail(name, ParseErrorKind::UnknownKey(name.to_owned())));
        }
        let suite = self.suite;
        let Some(p) = self.pending.as_mut() else {
            return Err(fail(name, ParseErrorKind::FieldOutsideVector(upper)));
        };
        let at_value = |kind| fail(value, kind);
        let block = parse_hex_field(&upper, value).map_err(at_value)?;
        let result = match (upper.as_str(), suite) {
            ("KEY", Some(Suite::Des)) => set_once(&mut p.key, Key64(block.0), &upper),
            ("KEY1", Some(Suite::Tdes(_))) => set_once(&mut p.keys[0], Key64(block.0), &upper),
            ("KEY2", Some(Suite::Tdes(_))) => set_once(&mut p.keys[1], Key64(block.0), &upper),
            ("KEY3", Some(Suite::Tdes(_))) => set_once(&mut p.keys[2], Key64(block.0), &upper),
            ("PLAINTEXT", _) => set_once(&mut p.plaintext, block, &upper),
            ("CIPHERTEXT", _) => set_once(&mut p.ciphertext, block, &upper),
            (_, suite) => Err(ParseErrorKind::UnexpectedField {
                field: upper.clone(),
                suite: suite.expect("pending vector implies context"),
            }),
        };
        result.map_err(|kind| fail(name, kind))
    }
}

/// Parses a KAT file into vectors in file order.
pub fn parse_kat(text: &str) -> Result<Vec<TestVector>, ParseError> {
    let mut parser = Parser { suite: None, direction: None, pending: None, out: Vec::new() };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            parser.line(i + 1, line)?;
        }
    }
    parser.finish()?;
    Ok(parser.out)
}

/// Renders vectors, emitting section headers whenever the suite or
/// direction changes.
pub fn render_kat(vectors: &[TestVector]) -> String {
    let mut out = String::new();
    let mut suite = None;
    let mut direction = None;
    for v in vectors {
        if suite != Some(v.cipher.suite()) {
            suite = Some(v.cipher.suite());
            direction = None;
            let _ = writeln!(out, "[{}]", v.cipher.suite());
        }
        if direction != Some(v.direction) {
            direction = Some(v.direction);
            let _ = writeln!(out, "[{}]\n", v.direction.header());
        }
        let _ = writeln!(out, "COUNT = {}", v.count);
        match v.cipher {
            KatCipher::Des(k) => {
                let _ = writeln!(out, "KEY = {k}");
            }
            KatCipher::Tdes { keys, .. } => {
                for (i, k) in keys.iter().enumerate() {
                    let _ = writeln!(out, "KEY{} = {k}", i + 1);
                }
            }
        }
        let (input_name, expected_name) = match v.direction {
            Direction::Encrypt => ("PLAINTEXT", "CIPHERTEXT"),
            Direction::Decrypt => ("CIPHERTEXT", "PLAINTEXT"),
        };
        let _ = writeln!(out, "{input_name} = {}", v.input);
        if let Some(e) = v.expected {
            let _ = writeln!(out, "{expected_name} = {e}");
        }
        out.push('\n');
    }
    out
}

/// How many vectors to generate for each (suite, direction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerateSpec {
    pub counts: Vec<(Suite, Direction, usize)>,
}

impl GenerateSpec {
    /// `n` vectors for each of the six (suite, direction) pairs.
    pub fn uniform(n: usize) -> Self {
        let counts = Suite::ALL
            .into_iter()
            .flat_map(|s| [(s, Direction::Encrypt, n), (s, Direction::Decrypt, n)])
            .collect();
        GenerateSpec { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|(_, _, n)| n).sum()
    }
}

/// Deterministic vectors with expected values from the golden model. TDES
/// vectors cycle through three-key, two-key (K1 = K3) and one-key bundles.
pub fn generate_vectors(spec: &GenerateSpec, seed: u64) -> Vec<TestVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(spec.total());
    for &(suite, direction, n) in &spec.counts {
        for i in 0..n {
            let mut key = || Key64(rng.gen()).fix_parity();
            let cipher = match suite {
                Suite::Des => KatCipher::Des(key()),
                Suite::Tdes(sequence) => {
                    let (k1, k2, k3) = (key(), key(), key());
                    let keys = match i % 3 {
                        0 => [k1, k2, k3],
                        1 => [k1, k2, k1],
                        _ => [k1, k1, k1],
                    };
                    KatCipher::Tdes { sequence, keys }
                }
            };
            let input = Block64(rng.gen());
            let id = out.len();
            let mut v = TestVector { id, count: id as u64, cipher, direction, input, expected: None };
            v.expected = Some(v.golden());
            out.push(v);
        }
    }
    out
}

pub fn generate_kat(spec: &GenerateSpec, seed: u64) -> String {
    let mut text = format!("# Generated known-answer vectors, seed {seed}.\n\n");
    text.push_str(&render_kat(&generate_vectors(spec, seed)));
    text
}
