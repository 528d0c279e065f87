use core::fmt;
use core::str::FromStr;

use crate::bits::{parse_hex_exact, HexError, Subkey48};
use crate::permute::permute_bits;
use crate::tables::{PC1, PC2, SHIFTS};

/// A 64-bit DES key. Bits 8, 16, .., 64 (the low bit of each byte) are parity
/// bits and never reach the key schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Key64(pub u64);

/// Mask of the 56 key-material bit positions.
const KEY_BITS_MASK: u64 = 0xFEFE_FEFE_FEFE_FEFE;

/// The four keys whose schedule is sixteen equal subkeys.
pub const WEAK_KEYS: [Key64; 4] = [
    Key64(0x0101_0101_0101_0101),
    Key64(0xFEFE_FEFE_FEFE_FEFE),
    Key64(0xE0E0_E0E0_F1F1_F1F1),
    Key64(0x1F1F_1F1F_0E0E_0E0E),
];

/// Six pairs of keys where encryption under one inverts encryption under the other.
pub const SEMI_WEAK_PAIRS: [(Key64, Key64); 6] = [
    (Key64(0x011F_011F_010E_010E), Key64(0x1F01_1F01_0E01_0E01)),
    (Key64(0x01E0_01E0_01F1_01F1), Key64(0xE001_E001_F101_F101)),
    (Key64(0x01FE_01FE_01FE_01FE), Key64(0xFE01_FE01_FE01_FE01)),
    (Key64(0x1FE0_1FE0_0EF1_0EF1), Key64(0xE01F_E01F_F10E_F10E)),
    (Key64(0x1FFE_1FFE_0EFE_0EFE), Key64(0xFE1F_FE1F_FE0E_FE0E)),
    (Key64(0xE0FE_E0FE_F1FE_F1FE), Key64(0xFEE0_FEE0_FEF1_FEF1)),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weakness {
    Weak,
    SemiWeak,
}

/// Odd-parity verdict for each key byte, byte 1 being the most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityReport {
    pub bytes: [bool; 8],
}

impl ParityReport {
    pub fn all_valid(&self) -> bool {
        self.bytes.iter().all(|&b| b)
    }

    /// 1-based positions of bytes with even parity.
    pub fn invalid_bytes(&self) -> impl Iterator<Item = usize> + '_ {
        self.bytes.iter().enumerate().filter(|(_, &ok)| !ok).map(|(i, _)| i + 1)
    }
}

impl Key64 {
    pub fn from_hex(s: &str) -> Result<Self, HexError> {
        parse_hex_exact(s, 16).map(Key64)
    }

    /// The 56 key-material bits in place, parity positions cleared.
    pub fn key_bits(self) -> u64 {
        self.0 & KEY_BITS_MASK
    }

    /// True when both keys carry the same 56 key-material bits.
    pub fn same_key_material(self, other: Key64) -> bool {
        self.key_bits() == other.key_bits()
    }

    pub fn parity_check(self) -> ParityReport {
        let mut bytes = [false; 8];
        for (flag, byte) in bytes.iter_mut().zip(self.0.to_be_bytes()) {
            *flag = byte.count_ones() % 2 == 1;
        }
        ParityReport { bytes }
    }

    /// Sets each byte's low bit so the byte has odd population count.
    pub fn fix_parity(self) -> Key64 {
        let mut bytes = self.0.to_be_bytes();
        for byte in &mut bytes {
            let upper = *byte & 0xFE;
            *byte = upper | u8::from(upper.count_ones() % 2 == 0);
        }
        Key64(u64::from_be_bytes(bytes))
    }

    /// Weak or semi-weak classification, ignoring parity bits.
    pub fn weakness(self) -> Option<Weakness> {
        if WEAK_KEYS.iter().any(|w| w.same_key_material(self)) {
            return Some(Weakness::Weak);
        }
        SEMI_WEAK_PAIRS
            .iter()
            .any(|(a, b)| a.same_key_material(self) || b.same_key_material(self))
            .then_some(Weakness::SemiWeak)
    }
}

impl core::ops::Not for Key64 {
    type Output = Key64;
    fn not(self) -> Key64 {
        Key64(!self.0)
    }
}

impl fmt::Display for Key64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016X}", self.0)
    }
}

impl FromStr for Key64 {
    type Err = HexError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Key64::from_hex(s)
    }
}

const HALF_MASK: u32 = (1 << 28) - 1;

/// The two 28-bit key registers C and D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct KeyHalves {
    pub c: u32,
    pub d: u32,
}

impl KeyHalves {
    /// PC-1 of `key`, split into C (bits 1..28) and D (bits 29..56).
    pub fn from_key(key: Key64) -> Self {
        let cd = permute_bits(key.0, PC1.input_width, PC1.sources);
        KeyHalves { c: (cd >> 28) as u32 & HALF_MASK, d: cd as u32 & HALF_MASK }
    }

    pub fn rotate_left(self, n: u8) -> Self {
        KeyHalves { c: rotl28(self.c, n), d: rotl28(self.d, n) }
    }

    pub fn rotate_right(self, n: u8) -> Self {
        KeyHalves { c: rotl28(self.c, 28 - n % 28), d: rotl28(self.d, 28 - n % 28) }
    }

    /// PC-2 of C ∥ D.
    pub fn subkey(self) -> Subkey48 {
        let cd = (u64::from(self.c) << 28) | u64::from(self.d);
        Subkey48::new(permute_bits(cd, PC2.input_width, PC2.sources))
    }
}

fn rotl28(v: u32, n: u8) -> u32 {
    let n = u32::from(n % 28);
    ((v << n) | (v >> ((28 - n) % 28))) & HALF_MASK
}

/// The sixteen subkeys of a key, in encryption order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeySchedule {
    subkeys: [Subkey48; 16],
    source_key: Key64,
}

impl KeySchedule {
    pub fn subkeys(&self) -> &[Subkey48; 16] {
        &self.subkeys
    }

    /// Subkey for `round` in 1..=16.
    pub fn subkey(&self, round: usize) -> Subkey48 {
        assert!((1..=16).contains(&round), "round {round} outside 1..=16");
        self.subkeys[round - 1]
    }

    pub fn source_key(&self) -> Key64 {
        self.source_key
    }

    /// Subkeys in decryption order (16 down to 1).
    pub fn reversed(&self) -> [Subkey48; 16] {
        let mut rev = self.subkeys;
        rev.reverse();
        rev
    }
}

/// Runs PC-1, the rotation schedule and PC-2. Parity bits are ignored.
pub fn derive_subkeys(key: Key64) -> KeySchedule {
    let mut halves = KeyHalves::from_key(key);
    let mut subkeys = [Subkey48::default(); 16];
    for (slot, &shift) in subkeys.iter_mut().zip(SHIFTS.iter()) {
        halves = halves.rotate_left(shift);
        *slot = halves.subkey();
    }
    KeySchedule { subkeys, source_key: key }
}
