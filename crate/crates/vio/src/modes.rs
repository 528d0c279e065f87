//! ECB and CBC over any [`BlockCipher`], with optional PKCS#7 padding.

use des_core::{Block64, BlockCipher};
use thiserror::Error;

pub const BLOCK_BYTES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockMode {
    Ecb,
    Cbc { iv: Block64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Padding {
    #[default]
    Pkcs7,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModeError {
    #[error("input length {0} is not a multiple of 8 bytes")]
    Unaligned(usize),
    #[error("invalid PKCS#7 padding")]
    BadPadding,
}

pub fn pkcs7_pad(data: &[u8]) -> Vec<u8> {
    let n = BLOCK_BYTES - data.len() % BLOCK_BYTES;
    let mut out = Vec::with_capacity(data.len() + n);
    out.extend_from_slice(data);
    out.resize(data.len() + n, n as u8);
    out
}

pub fn pkcs7_unpad(data: &[u8]) -> Result<&[u8], ModeError> {
    let &last = data.last().ok_or(ModeError::BadPadding)?;
    let n = usize::from(last);
    if !(1..=BLOCK_BYTES).contains(&n) || n > data.len() {
        return Err(ModeError::BadPadding);
    }
    let (body, pad) = data.split_at(data.len() - n);
    if pad.iter().any(|&b| b != last) {
        return Err(ModeError::BadPadding);
    }
    Ok(body)
}

fn blocks(data: &[u8]) -> impl Iterator<Item = Block64> + '_ {
    data.chunks_exact(BLOCK_BYTES).map(|c| Block64::from_bytes(c.try_into().expect("8-byte chunk")))
}

pub fn encrypt(cipher: &impl BlockCipher, mode: BlockMode, padding: Padding, data: &[u8]) -> Result<Vec<u8>, ModeError> {
    let padded;
    let data = match padding {
        Padding::Pkcs7 => {
            padded = pkcs7_pad(data);
            &padded[..]
        }
        Padding::None if data.len() % BLOCK_BYTES != 0 => return Err(ModeError::Unaligned(data.len())),
        Padding::None => data,
    };
    let mut out = Vec::with_capacity(data.len());
    match mode {
        BlockMode::Ecb => {
            for b in blocks(data) {
                out.extend_from_slice(&cipher.encrypt_block(b).to_bytes());
            }
        }
        BlockMode::Cbc { iv } => {
            let mut chain = iv;
            for b in blocks(data) {
                chain = cipher.encrypt_block(b ^ chain);
                out.extend_from_slice(&chain.to_bytes());
            }
        }
    }
    Ok(out)
}

pub fn decrypt(cipher: &impl BlockCipher, mode: BlockMode, padding: Padding, data: &[u8]) -> Result<Vec<u8>, ModeError> {
    if data.len() % BLOCK_BYTES != 0 {
        return Err(ModeError::Unaligned(data.len()));
    }
    let mut out = Vec::with_capacity(data.len());
    match mode {
        BlockMode::Ecb => {
            for b in blocks(data) {
                out.extend_from_slice(&cipher.decrypt_block(b).to_bytes());
            }
        }
        BlockMode::Cbc { iv } => {
            let mut chain = iv;
            for b in blocks(data) {
                out.extend_from_slice(&(cipher.decrypt_block(b) ^ chain).to_bytes());
                chain = b;
            }
        }
    }
    if padding == Padding::Pkcs7 {
        let len = pkcs7_unpad(&out)?.len();
        out.truncate(len);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use des_core::{derive_subkeys, Key64};
    use proptest::prelude::*;

    #[test]
    fn pad_rules() {
        assert_eq!(pkcs7_pad(&[]), [8; 8]);
        assert_eq!(pkcs7_pad(&[1, 2, 3, 4, 5, 6, 7]), [1, 2, 3, 4, 5, 6, 7, 1]);
        assert_eq!(pkcs7_pad(&[0; 8]).len(), 16);
        assert_eq!(pkcs7_unpad(&[1, 2, 3, 4, 5, 6, 2, 2]), Ok(&[1, 2, 3, 4, 5, 6][..]));
        assert_eq!(pkcs7_unpad(&[1, 2, 3, 4, 5, 6, 7, 0]), Err(ModeError::BadPadding));
        assert_eq!(pkcs7_unpad(&[1, 2, 3, 4, 5, 6, 7, 9]), Err(ModeError::BadPadding));
        assert_eq!(pkcs7_unpad(&[1, 2, 3, 4, 5, 6, 3, 2]), Err(ModeError::BadPadding));
        assert_eq!(pkcs7_unpad(&[1, 2, 3, 4, 5, 3, 2, 3]), Err(ModeError::BadPadding));
        assert_eq!(pkcs7_unpad(&[]), Err(ModeError::BadPadding));
    }

    #[test]
    fn empty_input_is_one_pad_block() {
        let s = derive_subkeys(Key64(0x1334_5779_9BBC_DFF1));
        let ct = encrypt(&s, BlockMode::Ecb, Padding::Pkcs7, &[]).unwrap();
        assert_eq!(ct, s.encrypt_block(Block64(0x0808_0808_0808_0808)).to_bytes());
    }

    #[test]
    fn unpadded_unaligned_is_rejected() {
        let s = derive_subkeys(Key64(0));
        assert_eq!(encrypt(&s, BlockMode::Ecb, Padding::None, &[0; 9]), Err(ModeError::Unaligned(9)));
        assert_eq!(decrypt(&s, BlockMode::Ecb, Padding::None, &[0; 7]), Err(ModeError::Unaligned(7)));
    }

    #[test]
    fn cbc_with_zero_iv_on_one_block_is_ecb() {
        let s = derive_subkeys(Key64(0x1334_5779_9BBC_DFF1));
        let pt = Block64(0x0123_4567_89AB_CDEF).to_bytes();
        let ecb = encrypt(&s, BlockMode::Ecb, Padding::None, &pt).unwrap();
        let cbc = encrypt(&s, BlockMode::Cbc { iv: Block64::ZERO }, Padding::None, &pt).unwrap();
        assert_eq!(ecb, cbc);
        assert_eq!(ecb, 0x85E8_1354_0F0A_B405u64.to_be_bytes());
    }

    proptest! {
        #[test]
        fn round_trip(k: u64, iv: u64, data in proptest::collection::vec(any::<u8>(), 0..64), cbc: bool) {
            let s = derive_subkeys(Key64(k));
            let mode = if cbc { BlockMode::Cbc { iv: Block64(iv) } } else { BlockMode::Ecb };
            let ct = encrypt(&s, mode, Padding::Pkcs7, &data).unwrap();
            prop_assert_eq!(ct.len(), (data.len() / 8 + 1) * 8);
            prop_assert_eq!(decrypt(&s, mode, Padding::Pkcs7, &ct).unwrap(), data);
        }
    }
}
