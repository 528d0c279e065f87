use crate::bits::{Block64, Half32, Subkey48};
use crate::feistel::feistel_f;
use crate::key::KeySchedule;
use crate::permute::permute_bits;
use crate::tables::{FP, IP};

/// Sixteen Feistel rounds between IP and FP, subkeys taken in iteration order.
fn crypt<'a>(block: Block64, subkeys: impl Iterator<Item = &'a Subkey48>) -> Block64 {
    let (mut l, mut r) = Block64(permute_bits(block.0, IP.input_width, IP.sources)).halves();
    for &k in subkeys {
        let next_r: Half32 = l ^ feistel_f(r, k);
        l = r;
        r = next_r;
    }
    // Preoutput is R16 ∥ L16.
    let preoutput = Block64::from_halves(r, l);
    Block64(permute_bits(preoutput.0, FP.input_width, FP.sources))
}

pub fn des_encrypt_block(block: Block64, schedule: &KeySchedule) -> Block64 {
    crypt(block, schedule.subkeys().iter())
}

/// Takes the schedule in encryption order; the reversal happens here.
pub fn des_decrypt_block(block: Block64, schedule: &KeySchedule) -> Block64 {
    crypt(block, schedule.subkeys().iter().rev())
}
