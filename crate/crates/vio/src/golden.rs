//! Golden model: one-shot results and the register states a correct
//! datapath must pass through, rebuilt from the precomputed key schedule.

use des_core::datapath::{EngineConfig, KeyMaterial, Operation, PassDirection, RoundRegisterState};
use des_core::tables::{IP, SHIFTS};
use des_core::{
    derive_subkeys, des_decrypt_block, des_encrypt_block, feistel_f, permute, tdea_decrypt_block,
    tdea_encrypt_block, BitVector, Block64, Key64, KeyHalves, TdeaSequence,
};

/// One-shot output of the operation described by `config`.
///
/// Panics if the key material does not fit the operation.
pub fn golden_output(config: &EngineConfig, block: Block64) -> Block64 {
    match (config.operation, &config.keys) {
        (Operation::DesEncrypt, KeyMaterial::Single(k)) => des_encrypt_block(block, &derive_subkeys(*k)),
        (Operation::DesDecrypt, KeyMaterial::Single(k)) => des_decrypt_block(block, &derive_subkeys(*k)),
        (Operation::TdeaEncrypt, KeyMaterial::Bundle(b)) => tdea_encrypt_block(block, b),
        (Operation::TdeaDecrypt, KeyMaterial::Bundle(b)) => tdea_decrypt_block(block, b),
        (op, _) => panic!("key material does not match {op}"),
    }
}

fn passes(config: &EngineConfig) -> Vec<(Key64, PassDirection)> {
    use PassDirection::{Decrypt, Encrypt};
    match (config.operation, &config.keys) {
        (Operation::DesEncrypt, KeyMaterial::Single(k)) => vec![(*k, Encrypt)],
        (Operation::DesDecrypt, KeyMaterial::Single(k)) => vec![(*k, Decrypt)],
        (op, KeyMaterial::Bundle(b)) if op.is_tdea() => {
            let [k1, k2, k3] = b.keys();
            let outer = if op.is_encrypt() { Encrypt } else { Decrypt };
            let middle = match (b.sequence(), outer) {
                (TdeaSequence::Eee, d) => d,
                (TdeaSequence::Ede, Encrypt) => Decrypt,
                (TdeaSequence::Ede, Decrypt) => Encrypt,
            };
            if op.is_encrypt() {
                vec![(k1, outer), (k2, middle), (k3, outer)]
            } else {
                vec![(k3, outer), (k2, middle), (k1, outer)]
            }
        }
        (op, _) => panic!("key material does not match {op}"),
    }
}

/// Expected register states, 17 per pass, in the engine's trace order.
pub fn golden_states(config: &EngineConfig, block: Block64) -> Vec<RoundRegisterState> {
    let mut states = Vec::new();
    let mut input = block;
    for (stage, (key, direction)) in passes(config).into_iter().enumerate() {
        let stage = stage as u8 + 1;
        let schedule = derive_subkeys(key);

        // Key registers after i cumulative left rotations, i = 0..=16.
        let mut cd = [KeyHalves::from_key(key); 17];
        for i in 1..=16 {
            cd[i] = cd[i - 1].rotate_left(SHIFTS[i - 1]);
        }

        let ip = permute(BitVector::new(input.0, 64), &IP).expect("64-bit input");
        let (mut l, mut r) = Block64(ip.value()).halves();
        states.push(RoundRegisterState { round: 0, stage, l, r, c: cd[0].c, d: cd[0].d, subkey: None });
        for round in 1..=16usize {
            let (subkey_index, regs) = match direction {
                PassDirection::Encrypt => (round, cd[round]),
                // Round 1 of a decryption sees C16 = C0; round i sees C(17-i).
                PassDirection::Decrypt => (17 - round, cd[(17 - round) % 16]),
            };
            let k = schedule.subkey(subkey_index);
            let next_r = l ^ feistel_f(r, k);
            l = r;
            r = next_r;
            states.push(RoundRegisterState {
                round: round as u8,
                stage,
                l,
                r,
                c: regs.c,
                d: regs.d,
                subkey: Some(k),
            });
        }
        input = match direction {
            PassDirection::Encrypt => des_encrypt_block(input, &schedule),
            PassDirection::Decrypt => des_decrypt_block(input, &schedule),
        };
    }
    states
}
