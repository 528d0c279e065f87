use core::fmt;

use crate::bits::Block64;
use crate::des::{des_decrypt_block, des_encrypt_block};
use crate::key::{derive_subkeys, Key64, KeySchedule};

/// Order of the three DES passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TdeaSequence {
    /// Encrypt, encrypt, encrypt.
    Eee,
    /// Encrypt, decrypt, encrypt.
    Ede,
}

impl fmt::Display for TdeaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TdeaSequence::Eee => "EEE",
            TdeaSequence::Ede => "EDE",
        })
    }
}

/// Relationship between K1, K2 and K3, judged on key material only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyingOption {
    ThreeKey,
    /// K1 = K3.
    TwoKey,
    /// K1 = K2 = K3.
    OneKey,
}

/// Three keys, their schedules and the pass sequence of one TDEA operation.
///
/// Built only through [`make_bundle`], so the schedules always match the keys
/// and the keying option always matches the key material.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TdeaKeyBundle {
    keys: [Key64; 3],
    schedules: [KeySchedule; 3],
    sequence: TdeaSequence,
    option: KeyingOption,
}

impl TdeaKeyBundle {
    pub fn keys(&self) -> [Key64; 3] {
        self.keys
    }

    /// Schedule for key `n` in 1..=3.
    pub fn schedule(&self, n: usize) -> &KeySchedule {
        assert!((1..=3).contains(&n), "key index {n} outside 1..=3");
        &self.schedules[n - 1]
    }

    pub fn sequence(&self) -> TdeaSequence {
        self.sequence
    }

    pub fn option(&self) -> KeyingOption {
        self.option
    }
}

/// Derives all three schedules and classifies the keying option.
///
/// EEE2/EDE2 are a sequence with [`KeyingOption::TwoKey`]; EEE3/EDE3 the same
/// with [`KeyingOption::ThreeKey`].
pub fn make_bundle(k1: Key64, k2: Key64, k3: Key64, sequence: TdeaSequence) -> TdeaKeyBundle {
    let option = if k1.same_key_material(k2) && k2.same_key_material(k3) {
        KeyingOption::OneKey
    } else if k1.same_key_material(k3) {
        KeyingOption::TwoKey
    } else {
        KeyingOption::ThreeKey
    };
    TdeaKeyBundle {
        keys: [k1, k2, k3],
        schedules: [derive_subkeys(k1), derive_subkeys(k2), derive_subkeys(k3)],
        sequence,
        option,
    }
}

pub fn tdea_encrypt_block(block: Block64, bundle: &TdeaKeyBundle) -> Block64 {
    let [s1, s2, s3] = &bundle.schedules;
    let stage1 = des_encrypt_block(block, s1);
    let stage2 = match bundle.sequence {
        TdeaSequence::Ede => des_decrypt_block(stage1, s2),
        TdeaSequence::Eee => des_encrypt_block(stage1, s2),
    };
    des_encrypt_block(stage2, s3)
}

pub fn tdea_decrypt_block(block: Block64, bundle: &TdeaKeyBundle) -> Block64 {
    let [s1, s2, s3] = &bundle.schedules;
    let stage1 = des_decrypt_block(block, s3);
    let stage2 = match bundle.sequence {
        TdeaSequence::Ede => des_encrypt_block(stage1, s2),
        TdeaSequence::Eee => des_decrypt_block(stage1, s2),
    };
    des_decrypt_block(stage2, s1)
}
