//! Throughput measurement for the one-shot cipher and the datapath engine.

use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use des_core::datapath::{Engine, EngineConfig, Operation};
use des_core::{derive_subkeys, make_bundle, Block64, BlockCipher, Key64, TdeaKeyBundle, TdeaSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    OneShot,
    Datapath,
}

impl fmt::Display for EngineChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineChoice::OneShot => "one-shot",
            EngineChoice::Datapath => "datapath",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkReport {
    pub operation: Operation,
    pub engine: EngineChoice,
    pub blocks: u64,
    pub wall_seconds: f64,
    pub blocks_per_second: f64,
    pub bits_per_second: f64,
}

impl fmt::Display for BenchmarkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}): {} blocks in {:.6} s, {:.0} blocks/s, {:.3} Mbit/s",
            self.operation,
            self.engine,
            self.blocks,
            self.wall_seconds,
            self.blocks_per_second,
            self.bits_per_second / 1e6
        )
    }
}

const DES_KEY: Key64 = Key64(0x1334_5779_9BBC_DFF1);
const TDEA_KEYS: [Key64; 3] =
    [Key64(0x0123_4567_89AB_CDEF), Key64(0x2345_6789_ABCD_EF01), Key64(0x4567_89AB_CDEF_0123)];
const WARMUP_BLOCKS: usize = 256;

fn bundle() -> TdeaKeyBundle {
    make_bundle(TDEA_KEYS[0], TDEA_KEYS[1], TDEA_KEYS[2], TdeaSequence::Ede)
}

fn one_shot(operation: Operation, blocks: &[Block64]) {
    let schedule = derive_subkeys(DES_KEY);
    let bundle = bundle();
    let cipher: &dyn BlockCipher = if operation.is_tdea() { &bundle } else { &schedule };
    for &b in blocks {
        black_box(if operation.is_encrypt() { cipher.encrypt_block(b) } else { cipher.decrypt_block(b) });
    }
}

fn datapath(operation: Operation, blocks: &[Block64]) {
    let config = if operation.is_tdea() {
        EngineConfig::tdea(operation, bundle())
    } else {
        EngineConfig::des(operation, DES_KEY)
    };
    for &b in blocks {
        let engine = Engine::load(config, b).expect("config matches operation");
        black_box(engine.run_to_completion());
    }
}

/// Times `block_count` random blocks with fixed keys after an untimed warm-up.
///
/// Panics if `block_count` is zero.
pub fn run_benchmark(operation: Operation, block_count: u64, engine: EngineChoice) -> BenchmarkReport {
    assert!(block_count >= 1, "block_count must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(block_count);
    let blocks: Vec<Block64> = (0..block_count).map(|_| Block64(rng.gen())).collect();
    let run = |bs: &[Block64]| match engine {
        EngineChoice::OneShot => one_shot(operation, bs),
        EngineChoice::Datapath => datapath(operation, bs),
    };

    run(&blocks[..blocks.len().min(WARMUP_BLOCKS)]);
    let start = Instant::now();
    run(&blocks);
    let wall_seconds = start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);

    let blocks_per_second = block_count as f64 / wall_seconds;
    BenchmarkReport {
        operation,
        engine,
        blocks: block_count,
        wall_seconds,
        blocks_per_second,
        bits_per_second: 64.0 * blocks_per_second,
    }
}
