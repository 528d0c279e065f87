//! Drive vectors through the datapath engine, observe its registers and
//! compare against the golden model and the file's expectations.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use des_core::datapath::{Engine, Fault, RoundRegisterState};
use des_core::Block64;
use thiserror::Error;

use crate::golden::{golden_output, golden_states};
use crate::kat::{parse_kat, Direction, ParseError, TestVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    /// The datapath disagrees with the golden model.
    GoldenMismatch,
    /// Datapath and golden model agree, but not with the file.
    ExpectationMismatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::GoldenMismatch => "GOLDEN-MISMATCH",
            Verdict::ExpectationMismatch => "EXPECTATION-MISMATCH",
        })
    }
}

/// First register state where the datapath left the golden path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Divergence {
    pub stage: u8,
    pub round: u8,
    pub golden: RoundRegisterState,
    pub datapath: RoundRegisterState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorReport {
    pub id: usize,
    pub count: u64,
    pub vector: TestVector,
    pub golden_output: Block64,
    pub datapath_output: Block64,
    pub expected: Option<Block64>,
    pub verdict: Verdict,
    /// Present exactly when the verdict is [`Verdict::GoldenMismatch`].
    pub first_divergence: Option<Divergence>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub golden_mismatches: usize,
    pub expectation_mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquivalenceReport {
    pub entries: Vec<VectorReport>,
    pub summary: Summary,
}

impl EquivalenceReport {
    pub fn from_entries(entries: Vec<VectorReport>) -> Self {
        let mut summary = Summary { total: entries.len(), ..Summary::default() };
        for e in &entries {
            match e.verdict {
                Verdict::Pass => summary.passed += 1,
                Verdict::GoldenMismatch => summary.golden_mismatches += 1,
                Verdict::ExpectationMismatch => summary.expectation_mismatches += 1,
            }
        }
        EquivalenceReport { entries, summary }
    }

    pub fn is_success(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn failures(&self) -> impl Iterator<Item = &VectorReport> {
        self.entries.iter().filter(|e| e.verdict != Verdict::Pass)
    }

    /// One line per vector, failure details, then the summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let dir = match e.vector.direction {
                Direction::Encrypt => "ENCRYPT",
                Direction::Decrypt => "DECRYPT",
            };
            let _ = writeln!(
                out,
                "COUNT = {:<4} [{} {}] {}",
                e.count,
                e.vector.cipher.suite(),
                dir,
                e.verdict
            );
            if e.verdict != Verdict::Pass {
                let expected = e.expected.map_or_else(|| "-".to_owned(), |b| b.to_string());
                let _ = writeln!(
                    out,
                    "    golden {}  datapath {}  expected {}",
                    e.golden_output, e.datapath_output, expected
                );
            }
            if let Some(d) = &e.first_divergence {
                let _ = writeln!(out, "    first divergence at stage {} round {}", d.stage, d.round);
                let _ = writeln!(out, "      golden   {}", crate::trace_format::state_line(&d.golden));
                let _ = writeln!(out, "      datapath {}", crate::trace_format::state_line(&d.datapath));
            }
        }
        let s = &self.summary;
        let _ = write!(out, "passed {}/{}", s.passed, s.total);
        if !self.is_success() {
            let failing: Vec<String> = self.failures().map(|e| e.count.to_string()).collect();
            let _ = write!(
                out,
                " ({} golden-mismatch, {} expectation-mismatch; failing COUNT {})",
                s.golden_mismatches,
                s.expectation_mismatches,
                failing.join(", ")
            );
        }
        out.push('\n');
        out
    }
}

/// Runs one vector through the golden model and the datapath.
pub fn drive_and_observe(vector: &TestVector) -> VectorReport {
    drive_with_faults(vector, &[])
}

/// As [`drive_and_observe`] with faults armed in the datapath.
///
/// Panics if a fault is not injectable for this vector's operation.
pub fn drive_with_faults(vector: &TestVector, faults: &[Fault]) -> VectorReport {
    let config = vector.engine_config();
    let golden = golden_output(&config, vector.input);

    let mut engine = Engine::load(config, vector.input).expect("vector config is well formed");
    for &fault in faults {
        engine.inject_fault(fault).expect("fault fits the operation");
    }
    let (datapath, trace) = engine.run_to_completion();

    let (verdict, first_divergence) = if datapath != golden {
        let expected_states = golden_states(&config, vector.input);
        let (golden, datapath) = expected_states
            .iter()
            .zip(&trace.states)
            .find(|(g, d)| g != d)
            .expect("different outputs imply a differing register state");
        let d = Divergence { stage: datapath.stage, round: datapath.round, golden: *golden, datapath: *datapath };
        (Verdict::GoldenMismatch, Some(d))
    } else if vector.expected.is_some_and(|e| e != golden) {
        (Verdict::ExpectationMismatch, None)
    } else {
        (Verdict::Pass, None)
    };

    VectorReport {
        id: vector.id,
        count: vector.count,
        vector: *vector,
        golden_output: golden,
        datapath_output: datapath,
        expected: vector.expected,
        verdict,
        first_divergence,
    }
}

/// Drives every vector; report order is vector order.
pub fn run_vectors(vectors: &[TestVector]) -> EquivalenceReport {
    EquivalenceReport::from_entries(vectors.iter().map(drive_and_observe).collect())
}

pub fn run_kat_str(text: &str) -> Result<EquivalenceReport, ParseError> {
    Ok(run_vectors(&parse_kat(text)?))
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
}

pub fn run_kat_file(path: impl AsRef<Path>) -> Result<EquivalenceReport, HarnessError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| HarnessError::Io { path: path.to_owned(), source })?;
    run_kat_str(&text).map_err(|source| HarnessError::Parse { path: path.to_owned(), source })
}

/// The self-test corpus shipped with the crate.
pub const SELFTEST_CORPUS: &str = include_str!("../data/selftest.kat");
