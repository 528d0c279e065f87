//! Bit-exact DES and Triple-DES (TDEA) primitives with a round-accurate
//! datapath model.
//!
//! All bit numbering follows FIPS 46-3: bit 1 is the most significant bit of
//! a value, and every permutation table lists 1-based source positions.
//!
//! The crate is `no_std`; only [`datapath`] needs `alloc` (for traces).
//!
//! ```
//! use des_core::{derive_subkeys, des_encrypt_block, Block64, Key64};
//!
//! let schedule = derive_subkeys(Key64(0x1334_5779_9BBC_DFF1));
//! let ct = des_encrypt_block(Block64(0x0123_4567_89AB_CDEF), &schedule);
//! assert_eq!(ct, Block64(0x85E8_1354_0F0A_B405));
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod bits;
pub mod datapath;
mod des;
mod feistel;
mod key;
mod permute;
mod sbox;
pub mod tables;
mod tdes;

pub use bits::{Block64, Half32, HexError, Subkey48};
pub use des::{des_decrypt_block, des_encrypt_block};
pub use feistel::{expand, feistel_f};
pub use key::{derive_subkeys, Key64, KeyHalves, KeySchedule, ParityReport, Weakness, SEMI_WEAK_PAIRS, WEAK_KEYS};
pub use permute::{permute, BitVector, PermutationSpec, WidthMismatch};
pub use sbox::{sbox_layer, SBox, SBOXES};
pub use tdes::{make_bundle, tdea_decrypt_block, tdea_encrypt_block, KeyingOption, TdeaKeyBundle, TdeaSequence};

/// A 64-bit block cipher keyed ahead of time.
pub trait BlockCipher {
    fn encrypt_block(&self, block: Block64) -> Block64;
    fn decrypt_block(&self, block: Block64) -> Block64;
}

impl BlockCipher for KeySchedule {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        des_encrypt_block(block, self)
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        des_decrypt_block(block, self)
    }
}

impl BlockCipher for TdeaKeyBundle {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        tdea_encrypt_block(block, self)
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        tdea_decrypt_block(block, self)
    }
}
