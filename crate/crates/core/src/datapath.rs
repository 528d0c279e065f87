//! Iterative, one-round-per-clock model of the DES datapath.
//!
//! The engine holds the same registers a hardware core would: the L/R block
//! halves, the C/D key halves and the subkey formed from them. Each call to
//! [`Engine::step`] is one clock: the key registers rotate (left when
//! encrypting, right when decrypting), PC-2 forms the round subkey and the
//! Feistel update is applied. Subkeys are never precomputed.
//!
//! A TDEA operation chains three passes. The handoff between passes (FP of
//! the finished pass, IP of the next input and PC-1 of the next key) is
//! combinational and costs no cycle, so DES takes 16 cycles and TDEA 48.
//!
//! Every state is recorded, including round 0 of each pass, so a DES trace
//! holds 17 states and a TDEA trace 51.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bits::{Block64, Half32, Subkey48};
use crate::feistel::feistel_f;
use crate::key::{Key64, KeyHalves};
use crate::permute::permute_bits;
use crate::tables::{FP, IP, SHIFTS};
use crate::tdes::{TdeaKeyBundle, TdeaSequence};

pub const ROUNDS_PER_PASS: u8 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operation {
    DesEncrypt,
    DesDecrypt,
    TdeaEncrypt,
    TdeaDecrypt,
}

impl Operation {
    pub const ALL: [Operation; 4] = [
        Operation::DesEncrypt,
        Operation::DesDecrypt,
        Operation::TdeaEncrypt,
        Operation::TdeaDecrypt,
    ];

    pub fn is_tdea(self) -> bool {
        matches!(self, Operation::TdeaEncrypt | Operation::TdeaDecrypt)
    }

    pub fn is_encrypt(self) -> bool {
        matches!(self, Operation::DesEncrypt | Operation::TdeaEncrypt)
    }

    pub fn label(self) -> &'static str {
        match self {
            Operation::DesEncrypt => "des-encrypt",
            Operation::DesDecrypt => "des-decrypt",
            Operation::TdeaEncrypt => "tdea-encrypt",
            Operation::TdeaDecrypt => "tdea-decrypt",
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum KeyMaterial {
    Single(Key64),
    Bundle(TdeaKeyBundle),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub operation: Operation,
    pub keys: KeyMaterial,
}

impl EngineConfig {
    pub fn des(operation: Operation, key: Key64) -> Self {
        EngineConfig { operation, keys: KeyMaterial::Single(key) }
    }

    pub fn tdea(operation: Operation, bundle: TdeaKeyBundle) -> Self {
        EngineConfig { operation, keys: KeyMaterial::Bundle(bundle) }
    }

    pub fn is_well_formed(&self) -> bool {
        matches!(
            (self.operation.is_tdea(), &self.keys),
            (false, KeyMaterial::Single(_)) | (true, KeyMaterial::Bundle(_))
        )
    }
}

/// Direction of one DES pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PassDirection {
    Encrypt,
    Decrypt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pass {
    key: Key64,
    direction: PassDirection,
}

/// The (key, direction) of each DES pass an operation runs, in clock order.
fn pass_plan(config: &EngineConfig) -> Option<([Pass; 3], u8)> {
    use PassDirection::{Decrypt, Encrypt};
    let pass = |key, direction| Pass { key, direction };
    match (config.operation, &config.keys) {
        (Operation::DesEncrypt, KeyMaterial::Single(k)) => Some(([pass(*k, Encrypt); 3], 1)),
        (Operation::DesDecrypt, KeyMaterial::Single(k)) => Some(([pass(*k, Decrypt); 3], 1)),
        (Operation::TdeaEncrypt, KeyMaterial::Bundle(b)) => {
            let [k1, k2, k3] = b.keys();
            let middle = match b.sequence() {
                TdeaSequence::Ede => Decrypt,
                TdeaSequence::Eee => Encrypt,
            };
            Some(([pass(k1, Encrypt), pass(k2, middle), pass(k3, Encrypt)], 3))
        }
        (Operation::TdeaDecrypt, KeyMaterial::Bundle(b)) => {
            let [k1, k2, k3] = b.keys();
            let middle = match b.sequence() {
                TdeaSequence::Ede => Encrypt,
                TdeaSequence::Eee => Decrypt,
            };
            Some(([pass(k3, Decrypt), pass(k2, middle), pass(k1, Decrypt)], 3))
        }
        _ => None,
    }
}

/// Register contents after one clock (or after loading, at round 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoundRegisterState {
    /// 0..=16 within the current pass.
    pub round: u8,
    /// 1 for DES; 1..=3 for the passes of a TDEA operation.
    pub stage: u8,
    pub l: Half32,
    pub r: Half32,
    /// 28-bit key register C.
    pub c: u32,
    /// 28-bit key register D.
    pub d: u32,
    /// Subkey used by this round; `None` at round 0.
    pub subkey: Option<Subkey48>,
}

/// Full register history of one operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatapathTrace {
    pub states: Vec<RoundRegisterState>,
    /// R16 ∥ L16 of the final pass.
    pub preoutput: Block64,
    pub output: Block64,
    pub cycles: u32,
}

impl DatapathTrace {
    pub fn passes(&self) -> usize {
        self.states.iter().filter(|s| s.round == 0).count()
    }

    /// The 17 states of pass `stage`.
    pub fn pass(&self, stage: u8) -> impl Iterator<Item = &RoundRegisterState> {
        self.states.iter().filter(move |s| s.stage == stage)
    }
}

/// Internal signals exposed to probes and fault injection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signal {
    L,
    R,
    C,
    D,
    Subkey,
    Round,
    Stage,
    Cycles,
    Done,
}

impl Signal {
    pub const ALL: [Signal; 9] = [
        Signal::L,
        Signal::R,
        Signal::C,
        Signal::D,
        Signal::Subkey,
        Signal::Round,
        Signal::Stage,
        Signal::Cycles,
        Signal::Done,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Signal::L => "L",
            Signal::R => "R",
            Signal::C => "C",
            Signal::D => "D",
            Signal::Subkey => "SUBKEY",
            Signal::Round => "ROUND",
            Signal::Stage => "STAGE",
            Signal::Cycles => "CYCLES",
            Signal::Done => "DONE",
        }
    }

    /// Width in bits of a register signal that faults can target.
    pub fn register_width(self) -> Option<u8> {
        match self {
            Signal::L | Signal::R => Some(32),
            Signal::C | Signal::D => Some(28),
            Signal::Subkey => Some(48),
            _ => None,
        }
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSignal {
    pub name: String,
}

impl fmt::Display for UnknownSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown signal {:?}; valid signals are", self.name)?;
        for (i, s) in Signal::ALL.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, s.name())?;
        }
        Ok(())
    }
}

impl core::error::Error for UnknownSignal {}

impl FromStr for Signal {
    type Err = UnknownSignal;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Signal::ALL
            .iter()
            .copied()
            .find(|sig| sig.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownSignal { name: String::from(s) })
    }
}

/// Flip `bit` (1-based, MSB-first within the signal) of `signal` while
/// clocking round `round` of pass `stage`.
///
/// C/D faults hit the key registers right after rotation, so they also
/// feed later rounds. SUBKEY faults affect only that round's subkey. L/R
/// faults hit the registers after the Feistel update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fault {
    pub signal: Signal,
    pub stage: u8,
    pub round: u8,
    pub bit: u8,
}

impl Fault {
    fn mask(self) -> u64 {
        let width = self.signal.register_width().expect("validated on injection");
        1u64 << (width - self.bit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    /// The key material does not fit the requested operation.
    KeyMaterialMismatch(Operation),
    /// All rounds have been clocked.
    Complete,
    UnknownSignal(UnknownSignal),
    /// Faults target L, R, C, D or SUBKEY only.
    NotInjectable(Signal),
    FaultOutOfRange(Fault),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::KeyMaterialMismatch(op) => {
                let want = if op.is_tdea() { "a three-key bundle" } else { "a single key" };
                write!(f, "{op} requires {want}")
            }
            EngineError::Complete => f.write_str("engine complete"),
            EngineError::UnknownSignal(e) => e.fmt(f),
            EngineError::NotInjectable(s) => write!(f, "signal {s} cannot carry a fault"),
            EngineError::FaultOutOfRange(fault) => write!(
                f,
                "fault on {} at stage {} round {} bit {} is out of range",
                fault.signal, fault.stage, fault.round, fault.bit
            ),
        }
    }
}

impl core::error::Error for EngineError {}

impl From<UnknownSignal> for EngineError {
    fn from(e: UnknownSignal) -> Self {
        EngineError::UnknownSignal(e)
    }
}

/// A loaded datapath. Single-owner mutable state.
#[derive(Debug, Clone)]
pub struct Engine {
    operation: Operation,
    passes: [Pass; 3],
    pass_count: u8,
    state: RoundRegisterState,
    cycles: u32,
    done: bool,
    trace: Vec<RoundRegisterState>,
    faults: Vec<Fault>,
    preoutput: Option<Block64>,
    output: Option<Block64>,
}

fn initial_state(block: Block64, key: Key64, stage: u8) -> RoundRegisterState {
    let (l, r) = Block64(permute_bits(block.0, IP.input_width, IP.sources)).halves();
    let halves = KeyHalves::from_key(key);
    RoundRegisterState { round: 0, stage, l, r, c: halves.c, d: halves.d, subkey: None }
}

impl Engine {
    /// Loads `block` and the first key: post-IP halves, post-PC-1 key
    /// registers, zero cycles.
    pub fn load(config: EngineConfig, block: Block64) -> Result<Engine, EngineError> {
        let (passes, pass_count) =
            pass_plan(&config).ok_or(EngineError::KeyMaterialMismatch(config.operation))?;
        let state = initial_state(block, passes[0].key, 1);
        let mut trace = Vec::with_capacity(17 * usize::from(pass_count));
        trace.push(state);
        Ok(Engine {
            operation: config.operation,
            passes,
            pass_count,
            state,
            cycles: 0,
            done: false,
            trace,
            faults: Vec::new(),
            preoutput: None,
            output: None,
        })
    }

    pub fn operation(&self) -> Operation {
        self.operation
    }

    pub fn state(&self) -> &RoundRegisterState {
        &self.state
    }

    pub fn cycles(&self) -> u32 {
        self.cycles
    }

    pub fn is_complete(&self) -> bool {
        self.done
    }

    pub fn output(&self) -> Option<Block64> {
        self.output
    }

    pub fn trace(&self) -> &[RoundRegisterState] {
        &self.trace
    }

    /// Arms a fault. Several faults may be armed at once.
    pub fn inject_fault(&mut self, fault: Fault) -> Result<(), EngineError> {
        let width = fault.signal.register_width().ok_or(EngineError::NotInjectable(fault.signal))?;
        let in_range = (1..=self.pass_count).contains(&fault.stage)
            && (1..=ROUNDS_PER_PASS).contains(&fault.round)
            && (1..=width).contains(&fault.bit);
        if !in_range {
            return Err(EngineError::FaultOutOfRange(fault));
        }
        self.faults.push(fault);
        Ok(())
    }

    fn fault_mask(&self, signal: Signal, stage: u8, round: u8) -> u64 {
        self.faults
            .iter()
            .filter(|f| f.signal == signal && f.stage == stage && f.round == round)
            .fold(0, |m, f| m ^ f.mask())
    }

    /// FP of the finished pass feeding IP of the next, plus PC-1 of the next key.
    fn handoff(&mut self) {
        let pass_output = self.pass_output();
        let next_stage = self.state.stage + 1;
        let key = self.passes[usize::from(next_stage - 1)].key;
        self.state = initial_state(pass_output, key, next_stage);
        self.trace.push(self.state);
    }

    fn preoutput_now(&self) -> Block64 {
        Block64::from_halves(self.state.r, self.state.l)
    }

    fn pass_output(&self) -> Block64 {
        Block64(permute_bits(self.preoutput_now().0, FP.input_width, FP.sources))
    }

    /// Clocks one round.
    pub fn step(&mut self) -> Result<RoundRegisterState, EngineError> {
        if self.done {
            return Err(EngineError::Complete);
        }
        if self.state.round == ROUNDS_PER_PASS {
            self.handoff();
        }
        let prev = self.state;
        let stage = prev.stage;
        let round = prev.round + 1;
        let pass = self.passes[usize::from(stage - 1)];

        let halves = KeyHalves { c: prev.c, d: prev.d };
        let mut halves = match pass.direction {
            PassDirection::Encrypt => halves.rotate_left(SHIFTS[usize::from(round - 1)]),
            // Round 1 of a decryption uses C16 = C0 as loaded.
            PassDirection::Decrypt if round == 1 => halves,
            PassDirection::Decrypt => halves.rotate_right(SHIFTS[usize::from(17 - round)]),
        };
        halves.c ^= self.fault_mask(Signal::C, stage, round) as u32;
        halves.d ^= self.fault_mask(Signal::D, stage, round) as u32;

        let subkey =
            Subkey48::new(halves.subkey().bits() ^ self.fault_mask(Signal::Subkey, stage, round));
        let l = Half32(prev.r.0 ^ self.fault_mask(Signal::L, stage, round) as u32);
        let r = Half32(
            (prev.l ^ feistel_f(prev.r, subkey)).0 ^ self.fault_mask(Signal::R, stage, round) as u32,
        );

        self.state = RoundRegisterState { round, stage, l, r, c: halves.c, d: halves.d, subkey: Some(subkey) };
        self.cycles += 1;
        self.trace.push(self.state);

        if round == ROUNDS_PER_PASS && stage == self.pass_count {
            self.done = true;
            self.preoutput = Some(self.preoutput_now());
            self.output = Some(self.pass_output());
        }
        Ok(self.state)
    }

    /// Clocks until done and returns the output with the full trace.
    pub fn run_to_completion(mut self) -> (Block64, DatapathTrace) {
        while !self.done {
            self.step().expect("engine not complete");
        }
        let output = self.output.expect("set on completion");
        let trace = DatapathTrace {
            states: self.trace,
            preoutput: self.preoutput.expect("set on completion"),
            output,
            cycles: self.cycles,
        };
        (output, trace)
    }

    /// Reads a signal without clocking. `None` only for SUBKEY at round 0.
    pub fn probe(&self, signal: Signal) -> Option<u64> {
        let s = &self.state;
        Some(match signal {
            Signal::L => u64::from(s.l.0),
            Signal::R => u64::from(s.r.0),
            Signal::C => u64::from(s.c),
            Signal::D => u64::from(s.d),
            Signal::Subkey => return s.subkey.map(Subkey48::bits),
            Signal::Round => u64::from(s.round),
            Signal::Stage => u64::from(s.stage),
            Signal::Cycles => u64::from(self.cycles),
            Signal::Done => u64::from(self.done),
        })
    }

    pub fn probe_named(&self, name: &str) -> Result<Option<u64>, UnknownSignal> {
        Ok(self.probe(name.parse()?))
    }
}
