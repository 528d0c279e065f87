//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test -p des-vio --test acceptance -- --nocapture`

mod common;

use std::panic;
use std::time::{Duration, Instant};

use des_core::datapath::{Engine, EngineConfig, Fault, Operation, Signal};
use des_core::{
    derive_subkeys, des_decrypt_block, des_encrypt_block, make_bundle, tdea_decrypt_block, tdea_encrypt_block,
    Block64, Key64, TdeaKeyBundle, TdeaSequence, WEAK_KEYS,
};
use des_vio::{
    drive_with_faults, generate_kat, generate_vectors, parse_kat, run_benchmark, run_kat_file, Direction, EngineChoice,
    GenerateSpec, KatCipher, TestVector, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xACCE_0000 + criterion)
}

fn random_bundle(rng: &mut ChaCha8Rng) -> TdeaKeyBundle {
    let seq = if rng.gen() { TdeaSequence::Ede } else { TdeaSequence::Eee };
    let (k1, k2, k3) = (Key64(rng.gen()), Key64(rng.gen()), Key64(rng.gen()));
    match rng.gen_range(0..3) {
        0 => make_bundle(k1, k2, k3, seq),
        1 => make_bundle(k1, k2, k1, seq),
        _ => make_bundle(k1, k1, k1, seq),
    }
}

fn known_answer() {
    let schedule = derive_subkeys(Key64(0x1334_5779_9BBC_DFF1));
    let ct = des_encrypt_block(Block64(0x0123_4567_89AB_CDEF), &schedule);
    assert_eq!(ct, Block64(0x85E8_1354_0F0A_B405));
    assert_eq!(des_decrypt_block(ct, &schedule), Block64(0x0123_4567_89AB_CDEF));
}

fn oracle_corpus() {
    let report = run_kat_file(concat!(env!("CARGO_MANIFEST_DIR"), "/data/selftest.kat")).unwrap();
    assert!(report.summary.total >= 20);
    assert!(report.is_success(), "{}", report.render());
    // Every TDEA sequence under three and two keys is represented.
    for seq in [TdeaSequence::Ede, TdeaSequence::Eee] {
        for two_key in [false, true] {
            let present = report.entries.iter().any(|e| match e.vector.cipher {
                KatCipher::Tdes { sequence, keys: [k1, k2, k3] } => {
                    sequence == seq && k1 != k2 && (k1 == k3) == two_key
                }
                KatCipher::Des(_) => false,
            });
            assert!(present, "{seq} two_key={two_key}");
        }
    }
    for dir in [Direction::Encrypt, Direction::Decrypt] {
        assert!(report.entries.iter().any(|e| matches!(e.vector.cipher, KatCipher::Des(_)) && e.vector.direction == dir));
    }
    let out = common::tdes(&["kat", "--in", concat!(env!("CARGO_MANIFEST_DIR"), "/data/selftest.kat")], &[]);
    assert_eq!(out.code, 0);
}

fn round_trip() {
    let mut rng = rng(3);
    for _ in 0..10_000 {
        let schedule = derive_subkeys(Key64(rng.gen()));
        let x = Block64(rng.gen());
        assert_eq!(des_decrypt_block(des_encrypt_block(x, &schedule), &schedule), x);
    }
    for _ in 0..10_000 {
        let bundle = random_bundle(&mut rng);
        let x = Block64(rng.gen());
        assert_eq!(tdea_decrypt_block(tdea_encrypt_block(x, &bundle), &bundle), x);
    }
}

fn degeneration() {
    let mut rng = rng(4);
    for _ in 0..1000 {
        let k = Key64(rng.gen());
        let x = Block64(rng.gen());
        let bundle = make_bundle(k, k, k, TdeaSequence::Ede);
        let schedule = derive_subkeys(k);
        assert_eq!(tdea_encrypt_block(x, &bundle), des_encrypt_block(x, &schedule));
        assert_eq!(tdea_decrypt_block(x, &bundle), des_decrypt_block(x, &schedule));
    }
}

fn complementation() {
    let mut rng = rng(5);
    for _ in 0..1000 {
        let k = Key64(rng.gen());
        let x = Block64(rng.gen());
        let ct = des_encrypt_block(x, &derive_subkeys(k));
        assert_eq!(des_encrypt_block(!x, &derive_subkeys(!k)), !ct);
    }
}

fn weak_key_involution() {
    let mut rng = rng(6);
    for k in WEAK_KEYS {
        let schedule = derive_subkeys(k);
        for _ in 0..100 {
            let x = Block64(rng.gen());
            assert_eq!(des_encrypt_block(des_encrypt_block(x, &schedule), &schedule), x);
        }
    }
}

fn datapath_equivalence() {
    let mut rng = rng(7);
    for i in 0..10_000 {
        let op = Operation::ALL[i % 4];
        let x = Block64(rng.gen());
        let config = if op.is_tdea() {
            EngineConfig::tdea(op, random_bundle(&mut rng))
        } else {
            EngineConfig::des(op, Key64(rng.gen()))
        };
        let golden = des_vio::golden::golden_output(&config, x);
        let (out, trace) = Engine::load(config, x).unwrap().run_to_completion();
        assert_eq!(out, golden, "{op} {x}");
        if op.is_tdea() {
            assert_eq!((trace.states.len(), trace.cycles), (51, 48));
        } else {
            assert_eq!((trace.states.len(), trace.cycles), (17, 16));
        }
    }
}

fn fault_localization() {
    let vector = TestVector {
        id: 0,
        count: 0,
        cipher: KatCipher::Des(Key64(0x1334_5779_9BBC_DFF1)),
        direction: Direction::Encrypt,
        input: Block64(0x0123_4567_89AB_CDEF),
        expected: Some(Block64(0x85E8_1354_0F0A_B405)),
    };
    for round in [1, 8, 16] {
        let fault = Fault { signal: Signal::Subkey, stage: 1, round, bit: 20 };
        let r = drive_with_faults(&vector, &[fault]);
        assert_eq!(r.verdict, Verdict::GoldenMismatch);
        assert_eq!(r.first_divergence.unwrap().round, round);
    }
}

fn parser_totality() {
    let spec = GenerateSpec::uniform(1000usize.div_ceil(6));
    let vectors = generate_vectors(&spec, 2024);
    assert!(vectors.len() >= 1000);
    assert_eq!(parse_kat(&generate_kat(&spec, 2024)).unwrap(), vectors);
    for case in common::MALFORMED {
        let err = parse_kat(case.text).expect_err(case.name);
        assert_eq!(err.line, case.line, "{}", case.name);
        assert!((case.matches)(&err.kind), "{}: {:?}", case.name, err.kind);
    }
}

fn cli_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for algo in ["des", "tdes"] {
        for mode in ["ecb", "cbc"] {
            for len in [0usize, 1, 7, 8, 9, 8 * 1024 + 3] {
                let data: Vec<u8> = (0..len).map(|i| (i * 13 + 1) as u8).collect();
                let (back, _) = common::file_round_trip(dir.path(), algo, mode, &data);
                assert_eq!(back, data, "{algo} {mode} {len}");
            }
        }
    }
    let key = ["--key", common::DES_KEY];
    let missing = dir.path().join("missing").display().to_string();
    let corrupted = des_vio::SELFTEST_CORPUS.replacen("85E813540F0AB405", "85E813540F0AB404", 1);
    let cases: [(&[&str], &[u8], i32); 6] = [
        (&["kat", "--builtin"], b"", 0),
        (&["kat"], corrupted.as_bytes(), 1),
        (&["encrypt", "--mode", "cbc", key[0], key[1]], b"x", 2),
        (&["encrypt", "--in", &missing, key[0], key[1]], b"", 3),
        (&["decrypt", key[0], key[1]], &[0; 7], 4),
        (&["kat"], b"[DES]\n[ENCRYPT]\nCOUNT = 0\nKEY = 0123\n", 2),
    ];
    for (args, stdin, code) in cases {
        assert_eq!(common::tdes(args, stdin).code, code, "{args:?}");
    }
}

fn avalanche() {
    let mut rng = rng(11);
    let mut total = 0u32;
    for _ in 0..1000 {
        let schedule = derive_subkeys(Key64(rng.gen()));
        let x: u64 = rng.gen();
        let flipped = x ^ (1u64 << rng.gen_range(0..64));
        total += (des_encrypt_block(Block64(x), &schedule).0 ^ des_encrypt_block(Block64(flipped), &schedule).0)
            .count_ones();
    }
    let mean = f64::from(total) / 1000.0;
    assert!((26.0..=38.0).contains(&mean), "mean {mean}");
}

fn benchmark_sanity() {
    let des = run_benchmark(Operation::DesEncrypt, 20_000, EngineChoice::OneShot);
    let tdea = run_benchmark(Operation::TdeaEncrypt, 20_000, EngineChoice::OneShot);
    for r in [&des, &tdea, &run_benchmark(Operation::DesDecrypt, 1, EngineChoice::Datapath)] {
        let rate = r.blocks as f64 / r.wall_seconds;
        assert!((r.blocks_per_second - rate).abs() <= 1e-9 * rate, "{r}");
        assert!((r.bits_per_second - 64.0 * r.blocks_per_second).abs() <= 1e-9 * r.bits_per_second, "{r}");
    }
    assert!(des.blocks_per_second >= tdea.blocks_per_second, "{des} / {tdea}");
}

type Check = fn();

const CRITERIA: [(&str, Check, Option<u64>); 12] = [
    ("known-answer", known_answer, Some(1)),
    ("oracle corpus", oracle_corpus, Some(1)),
    ("round-trip", round_trip, Some(10)),
    ("one-key EDE degenerates to DES", degeneration, Some(1)),
    ("complementation", complementation, Some(2)),
    ("weak-key involution", weak_key_involution, Some(1)),
    ("datapath equivalence", datapath_equivalence, Some(30)),
    ("fault-injection localization", fault_localization, Some(1)),
    ("parser totality", parser_totality, Some(2)),
    ("CLI round-trip and exit statuses", cli_round_trip, Some(5)),
    ("avalanche", avalanche, Some(2)),
    ("benchmark sanity", benchmark_sanity, None),
];

fn main() {
    let mut failed = 0;
    for (i, (name, check, limit)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(check);
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
        let verdict = match (&result, over) {
            (Ok(()), false) => "PASS",
            _ => {
                failed += 1;
                "FAIL"
            }
        };
        let budget = limit.map_or_else(String::new, |s| format!(" (limit {s} s)"));
        let note = match (result.is_err(), over) {
            (true, _) => " assertion failed",
            (false, true) => " over time budget",
            _ => "",
        };
        println!("{verdict} {:>2} {name}: {:.3} s{budget}{note}", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {}/{} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
