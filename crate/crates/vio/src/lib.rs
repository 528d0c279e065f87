//! Verification tooling around `des-core`: a golden-model harness that drives
//! the datapath engine and compares it register by register, known-answer
//! test files, trace formats, block modes, benchmarks and the `tdes` CLI.

pub mod bench;
pub mod cli;
pub mod golden;
pub mod harness;
pub mod kat;
pub mod modes;
pub mod trace_format;

pub use bench::{run_benchmark, BenchmarkReport, EngineChoice};
pub use harness::{
    drive_and_observe, drive_with_faults, run_kat_file, run_kat_str, run_vectors, Divergence, EquivalenceReport,
    HarnessError, Summary, Verdict, VectorReport, SELFTEST_CORPUS,
};
pub use kat::{generate_kat, generate_vectors, parse_kat, render_kat, Direction, GenerateSpec, KatCipher, ParseError, ParseErrorKind, Suite, TestVector};
