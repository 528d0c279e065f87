//! The `tdes` command-line front end.
//!
//! Exit statuses: 0 success, 1 verification failure, 2 usage or
//! configuration error, 3 I/O error, 4 data error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use des_core::datapath::{Engine, EngineConfig, Operation};
use des_core::{derive_subkeys, make_bundle, Block64, BlockCipher, Key64, KeySchedule, TdeaKeyBundle, TdeaSequence, Weakness};
use thiserror::Error;

use crate::bench::{run_benchmark, EngineChoice};
use crate::harness::{run_kat_str, SELFTEST_CORPUS};
use crate::kat::{generate_kat, GenerateSpec};
use crate::modes::{self, BlockMode, ModeError, Padding};
use crate::trace_format::{render, TraceFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    VerificationFailure = 1,
    Usage = 2,
    Io = 3,
    Data = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Usage(_) => ExitStatus::Usage,
            CliError::Io { .. } => ExitStatus::Io,
            CliError::Data(_) => ExitStatus::Data,
        }
    }
}

impl From<ModeError> for CliError {
    fn from(e: ModeError) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Algo {
    #[default]
    Des,
    Tdes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Seq {
    #[default]
    Ede,
    Eee,
}

impl From<Seq> for TdeaSequence {
    fn from(s: Seq) -> Self {
        match s {
            Seq::Ede => TdeaSequence::Ede,
            Seq::Eee => TdeaSequence::Eee,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ModeChoice {
    #[default]
    Ecb,
    Cbc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum PadChoice {
    #[default]
    Pkcs7,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ParityPolicy {
    Ignore,
    #[default]
    Warn,
    Enforce,
    Fix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum TraceFormatChoice {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum EngineArg {
    #[default]
    OneShot,
    Datapath,
}

/// Everything a subcommand needs, after flag parsing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliConfig {
    pub algo: Algo,
    pub seq: Seq,
    pub keys: Vec<Key64>,
    pub mode: ModeChoice,
    pub iv: Option<Block64>,
    pub padding: PadChoice,
    pub parity: ParityPolicy,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub trace_format: TraceFormatChoice,
}

/// A keyed single or triple DES.
#[derive(Debug, Clone, Copy)]
#[allow(clippy::large_enum_variant)]
pub enum Cipher {
    Des(KeySchedule),
    Tdes(TdeaKeyBundle),
}

impl BlockCipher for Cipher {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        match self {
            Cipher::Des(s) => s.encrypt_block(block),
            Cipher::Tdes(b) => b.encrypt_block(block),
        }
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        match self {
            Cipher::Des(s) => s.decrypt_block(block),
            Cipher::Tdes(b) => b.decrypt_block(block),
        }
    }
}

impl CliConfig {
    fn check_key_count(&self) -> Result<(), CliError> {
        match (self.algo, self.keys.len()) {
            (Algo::Des, 1) | (Algo::Tdes, 3) => Ok(()),
            (Algo::Des, n) => Err(CliError::Usage(format!("des takes exactly one key (--key), got {n}"))),
            (Algo::Tdes, n) => Err(CliError::Usage(format!(
                "tdes takes exactly three keys (--key, --key2, --key3), got {n}"
            ))),
        }
    }

    /// Keys after applying the parity policy. `enforce` rejects bad parity.
    pub fn effective_keys(&self) -> Result<Vec<Key64>, CliError> {
        match self.parity {
            ParityPolicy::Fix => Ok(self.keys.iter().map(|k| k.fix_parity()).collect()),
            ParityPolicy::Enforce => {
                if let Some(k) = self.keys.iter().find(|k| !k.parity_check().all_valid()) {
                    return Err(CliError::Usage(format!("key {k} has invalid parity (policy enforce)")));
                }
                Ok(self.keys.clone())
            }
            ParityPolicy::Ignore | ParityPolicy::Warn => Ok(self.keys.clone()),
        }
    }

    /// Messages for standard error under the `warn` policy.
    pub fn parity_warnings(&self) -> Vec<String> {
        if self.parity != ParityPolicy::Warn {
            return Vec::new();
        }
        self.keys
            .iter()
            .filter(|k| !k.parity_check().all_valid())
            .map(|k| format!("warning: key {k} has invalid parity (ignored by the key schedule)"))
            .collect()
    }

    pub fn block_mode(&self) -> Result<BlockMode, CliError> {
        match (self.mode, self.iv) {
            (ModeChoice::Ecb, _) => Ok(BlockMode::Ecb),
            (ModeChoice::Cbc, Some(iv)) => Ok(BlockMode::Cbc { iv }),
            (ModeChoice::Cbc, None) => Err(CliError::Usage("cbc mode requires --iv".into())),
        }
    }

    pub fn padding(&self) -> Padding {
        match self.padding {
            PadChoice::Pkcs7 => Padding::Pkcs7,
            PadChoice::None => Padding::None,
        }
    }

    pub fn cipher(&self) -> Result<Cipher, CliError> {
        self.check_key_count()?;
        let keys = self.effective_keys()?;
        Ok(match self.algo {
            Algo::Des => Cipher::Des(derive_subkeys(keys[0])),
            Algo::Tdes => Cipher::Tdes(make_bundle(keys[0], keys[1], keys[2], self.seq.into())),
        })
    }

    fn engine_config(&self, encrypt: bool) -> Result<EngineConfig, CliError> {
        Ok(match self.cipher()? {
            Cipher::Des(s) => {
                let op = if encrypt { Operation::DesEncrypt } else { Operation::DesDecrypt };
                EngineConfig::des(op, s.source_key())
            }
            Cipher::Tdes(b) => {
                let op = if encrypt { Operation::TdeaEncrypt } else { Operation::TdeaDecrypt };
                EngineConfig::tdea(op, b)
            }
        })
    }
}

pub fn cmd_encrypt(config: &CliConfig, plaintext: &[u8]) -> Result<Vec<u8>, CliError> {
    let cipher = config.cipher()?;
    Ok(modes::encrypt(&cipher, config.block_mode()?, config.padding(), plaintext)?)
}

pub fn cmd_decrypt(config: &CliConfig, ciphertext: &[u8]) -> Result<Vec<u8>, CliError> {
    let cipher = config.cipher()?;
    Ok(modes::decrypt(&cipher, config.block_mode()?, config.padding(), ciphertext)?)
}

/// Runs KAT text; returns the exit status and the rendered report.
pub fn cmd_kat_text(text: &str) -> (ExitStatus, String) {
    match run_kat_str(text) {
        Ok(report) => {
            let status = if report.is_success() { ExitStatus::Success } else { ExitStatus::VerificationFailure };
            (status, report.render())
        }
        Err(e) => (ExitStatus::Usage, format!("error: {e}\n")),
    }
}

pub fn cmd_kat(path: &Path) -> (ExitStatus, String) {
    match std::fs::read_to_string(path) {
        Ok(text) => {
            let (status, out) = cmd_kat_text(&text);
            if status == ExitStatus::Usage {
                (status, format!("{}: {}", path.display(), out))
            } else {
                (status, out)
            }
        }
        Err(e) => (ExitStatus::Io, format!("error: {}: {e}\n", path.display())),
    }
}

pub fn cmd_kat_generate(spec: &GenerateSpec, seed: u64) -> String {
    generate_kat(spec, seed)
}

pub fn cmd_trace(config: &CliConfig, hex_block: &str, decrypt: bool) -> Result<String, CliError> {
    let block = Block64::from_hex(hex_block.trim())
        .map_err(|e| CliError::Usage(format!("block {hex_block:?}: {e}")))?;
    let engine_config = config.engine_config(!decrypt)?;
    let engine = Engine::load(engine_config, block).map_err(|e| CliError::Usage(e.to_string()))?;
    let (_, trace) = engine.run_to_completion();
    let format = match config.trace_format {
        TraceFormatChoice::Text => TraceFormat::Text,
        TraceFormatChoice::Structured => TraceFormat::Structured,
    };
    Ok(render(&trace, format))
}

/// Parity and weak-key report for every key given. `enforce` with bad
/// parity exits 2; `fix` prints the repaired key.
pub fn cmd_keycheck(config: &CliConfig) -> (ExitStatus, String) {
    let mut out = String::new();
    let mut bad_parity = false;
    for (i, key) in config.keys.iter().enumerate() {
        let report = key.parity_check();
        let flags: Vec<&str> = report.bytes.iter().map(|&ok| if ok { "ok" } else { "BAD" }).collect();
        out.push_str(&format!("key {}: {key}\n", i + 1));
        out.push_str(&format!("  parity: {} [{}]\n", if report.all_valid() { "ok" } else { "invalid" }, flags.join(" ")));
        match key.weakness() {
            Some(Weakness::Weak) => out.push_str("  warning: weak key (all sixteen subkeys equal)\n"),
            Some(Weakness::SemiWeak) => out.push_str("  warning: semi-weak key\n"),
            None => {}
        }
        if !report.all_valid() {
            bad_parity = true;
            if config.parity == ParityPolicy::Fix {
                out.push_str(&format!("  fixed: {}\n", key.fix_parity()));
            }
        }
    }
    if config.algo == Algo::Tdes && config.keys.len() == 3 {
        let b = make_bundle(config.keys[0], config.keys[1], config.keys[2], config.seq.into());
        out.push_str(&format!("keying option: {:?}\n", b.option()));
    }
    let status = if bad_parity && config.parity == ParityPolicy::Enforce {
        out.push_str("error: invalid parity (policy enforce)\n");
        ExitStatus::Usage
    } else {
        ExitStatus::Success
    };
    (status, out)
}

pub fn cmd_bench(config: &CliConfig, block_count: u64, engine: EngineChoice) -> Result<String, CliError> {
    if block_count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let ops = match config.algo {
        Algo::Des => [Operation::DesEncrypt, Operation::DesDecrypt],
        Algo::Tdes => [Operation::TdeaEncrypt, Operation::TdeaDecrypt],
    };
    Ok(ops.iter().map(|&op| format!("{}\n", run_benchmark(op, block_count, engine))).collect())
}

// ---- flag parsing -------------------------------------------------------

fn parse_key(s: &str) -> Result<Key64, String> {
    Key64::from_hex(s).map_err(|e| e.to_string())
}

fn parse_block(s: &str) -> Result<Block64, String> {
    Block64::from_hex(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "tdes", version, about = "DES / Triple-DES engine, datapath tracer and KAT harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct KeyArgs {
    #[arg(long, value_enum, default_value_t)]
    algo: Algo,
    #[arg(long, value_enum, default_value_t)]
    seq: Seq,
    #[arg(long, value_parser = parse_key)]
    key: Option<Key64>,
    #[arg(long, value_parser = parse_key)]
    key2: Option<Key64>,
    #[arg(long, value_parser = parse_key)]
    key3: Option<Key64>,
    #[arg(long, value_enum, default_value_t)]
    parity: ParityPolicy,
}

#[derive(Debug, Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value_t)]
    mode: ModeChoice,
    #[arg(long, value_parser = parse_block)]
    iv: Option<Block64>,
    #[arg(long, value_enum, default_value_t)]
    pad: PadChoice,
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Input file; standard input when omitted.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encrypt a file.
    Encrypt {
        #[command(flatten)]
        keys: KeyArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Decrypt a file.
    Decrypt {
        #[command(flatten)]
        keys: KeyArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Drive a KAT file through the datapath and the golden model.
    Kat {
        /// KAT file; standard input when omitted.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Run the built-in self-test corpus instead.
        #[arg(long, conflicts_with = "input")]
        builtin: bool,
    },
    /// Generate a KAT file with expected values from the golden model.
    KatGen {
        /// Vectors per (algorithm, direction) section.
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Print the round-by-round register trace of one block.
    Trace {
        #[command(flatten)]
        keys: KeyArgs,
        #[arg(long, value_enum, default_value_t)]
        trace_format: TraceFormatChoice,
        /// Trace a decryption instead of an encryption.
        #[arg(long)]
        decrypt: bool,
        /// 16 hex digits.
        block: String,
    },
    /// Report key parity and weak keys.
    Keycheck {
        #[command(flatten)]
        keys: KeyArgs,
    },
    /// Measure throughput.
    Bench {
        #[arg(long, value_enum, default_value_t)]
        algo: Algo,
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        #[arg(long, value_enum, default_value_t)]
        engine: EngineArg,
    },
}

fn config_from(keys: &KeyArgs) -> CliConfig {
    CliConfig {
        algo: keys.algo,
        seq: keys.seq,
        keys: [keys.key, keys.key2, keys.key3].into_iter().flatten().collect(),
        parity: keys.parity,
        ..CliConfig::default()
    }
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    match path {
        Some(p) => {
            buf = std::fs::read(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
        }
        None => {
            std::io::stdin()
                .read_to_end(&mut buf)
                .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
        }
    }
    Ok(buf)
}

fn write_output(path: Option<&Path>, data: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, data).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => std::io::stdout()
            .write_all(data)
            .and_then(|_| std::io::stdout().flush())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn finish(result: Result<ExitStatus, CliError>) -> ExitStatus {
    match result {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            e.status()
        }
    }
}

fn run_cipher(keys: &KeyArgs, mode: &ModeArgs, io: &IoArgs, encrypt: bool) -> Result<ExitStatus, CliError> {
    let config = CliConfig {
        mode: mode.mode,
        iv: mode.iv,
        padding: mode.pad,
        input: io.input.clone(),
        output: io.output.clone(),
        ..config_from(keys)
    };
    // Validate before touching any file.
    config.cipher()?;
    config.block_mode()?;
    for w in config.parity_warnings() {
        eprintln!("{w}");
    }
    let data = read_input(config.input.as_deref())?;
    let out = if encrypt { cmd_encrypt(&config, &data)? } else { cmd_decrypt(&config, &data)? };
    write_output(config.output.as_deref(), &out)?;
    Ok(ExitStatus::Success)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitStatus::Usage } else { ExitStatus::Success };
        }
    };
    match cli.command {
        Command::Encrypt { keys, mode, io } => finish(run_cipher(&keys, &mode, &io, true)),
        Command::Decrypt { keys, mode, io } => finish(run_cipher(&keys, &mode, &io, false)),
        Command::Kat { input, builtin } => {
            let (status, out) = match (builtin, input) {
                (true, _) => cmd_kat_text(SELFTEST_CORPUS),
                (false, Some(path)) => cmd_kat(&path),
                (false, None) => match read_input(None) {
                    Ok(bytes) => cmd_kat_text(&String::from_utf8_lossy(&bytes)),
                    Err(e) => return finish(Err(e)),
                },
            };
            if status == ExitStatus::Success || status == ExitStatus::VerificationFailure {
                print!("{out}");
            } else {
                eprint!("{out}");
            }
            status
        }
        Command::KatGen { count, seed, output } => {
            let text = cmd_kat_generate(&GenerateSpec::uniform(count), seed);
            finish(write_output(output.as_deref(), text.as_bytes()).map(|_| ExitStatus::Success))
        }
        Command::Trace { keys, trace_format, decrypt, block } => {
            let config = CliConfig { trace_format, ..config_from(&keys) };
            for w in config.parity_warnings() {
                eprintln!("{w}");
            }
            finish(cmd_trace(&config, &block, decrypt).map(|text| {
                print!("{text}");
                ExitStatus::Success
            }))
        }
        Command::Keycheck { keys } => {
            let config = config_from(&keys);
            if config.keys.is_empty() {
                return finish(Err(CliError::Usage("keycheck needs at least --key".into())));
            }
            let (status, out) = cmd_keycheck(&config);
            print!("{out}");
            status
        }
        Command::Bench { algo, count, engine } => {
            let config = CliConfig { algo, ..CliConfig::default() };
            let engine = match engine {
                EngineArg::OneShot => EngineChoice::OneShot,
                EngineArg::Datapath => EngineChoice::Datapath,
            };
            finish(cmd_bench(&config, count, engine).map(|text| {
                print!("{text}");
                ExitStatus::Success
            }))
        }
    }
}
