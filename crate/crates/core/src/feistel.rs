use crate::bits::{Half32, Subkey48};
use crate::permute::permute_bits;
use crate::sbox::sbox_layer;
use crate::tables::{E, P};

/// Expands a half block to 48 bits through the E table.
#[inline]
pub fn expand(r: Half32) -> u64 {
    permute_bits(u64::from(r.0), E.input_width, E.sources)
}

/// The DES round function: `P(S(E(r) ^ k))`.
#[inline]
pub fn feistel_f(r: Half32, k: Subkey48) -> Half32 {
    let substituted = sbox_layer(expand(r) ^ k.bits());
    Half32(permute_bits(u64::from(substituted.0), P.input_width, P.sources) as u32)
}
