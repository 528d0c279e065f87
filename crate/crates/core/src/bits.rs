use core::fmt;
use core::str::FromStr;

/// Error produced when parsing a fixed-width hex field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HexError {
    /// The string does not have exactly the required number of digits.
    WrongWidth { expected: usize, found: usize },
    /// A character that is not a hex digit, with its 0-based position.
    InvalidDigit { position: usize, found: char },
}

impl fmt::Display for HexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HexError::WrongWidth { expected, found } => {
                write!(f, "expected {expected} hex digits, found {found}")
            }
            HexError::InvalidDigit { position, found } => {
                write!(f, "invalid hex digit {found:?} at position {position}")
            }
        }
    }
}

impl core::error::Error for HexError {}

/// Parses exactly `digits` hex digits (either case) into an integer.
pub(crate) fn parse_hex_exact(s: &str, digits: usize) -> Result<u64, HexError> {
    let found = s.chars().count();
    if let Some((position, found)) = s.chars().enumerate().find(|(_, c)| !c.is_ascii_hexdigit()) {
        return Err(HexError::InvalidDigit { position, found });
    }
    if found != digits {
        return Err(HexError::WrongWidth { expected: digits, found });
    }
    // Only ASCII hex digits remain, so from_str_radix cannot see a sign.
    Ok(u64::from_str_radix(s, 16).expect("validated hex"))
}

/// A 64-bit cipher block. Bit 1 is the most significant bit; the first hex
/// byte of the rendering holds bits 1..8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Block64(pub u64);

impl Block64 {
    pub const ZERO: Block64 = Block64(0);

    /// Returns bit `i` (1..=64, MSB-first).
    pub fn bit(self, i: u32) -> bool {
        assert!((1..=64).contains(&i), "bit index {i} outside 1..=64");
        (self.0 >> (64 - i)) & 1 == 1
    }

    pub fn with_bit(self, i: u32, value: bool) -> Self {
        assert!((1..=64).contains(&i), "bit index {i} outside 1..=64");
        let mask = 1u64 << (64 - i);
        Block64(if value { self.0 | mask } else { self.0 & !mask })
    }

    pub fn from_halves(left: Half32, right: Half32) -> Self {
        Block64((u64::from(left.0) << 32) | u64::from(right.0))
    }

    /// Splits into (bits 1..32, bits 33..64).
    pub fn halves(self) -> (Half32, Half32) {
        (Half32((self.0 >> 32) as u32), Half32(self.0 as u32))
    }

    pub fn from_hex(s: &str) -> Result<Self, HexError> {
        parse_hex_exact(s, 16).map(Block64)
    }

    pub fn to_bytes(self) -> [u8; 8] {
        self.0.to_be_bytes()
    }

    pub fn from_bytes(bytes: [u8; 8]) -> Self {
        Block64(u64::from_be_bytes(bytes))
    }
}

impl core::ops::Not for Block64 {
    type Output = Block64;
    fn not(self) -> Block64 {
        Block64(!self.0)
    }
}

impl core::ops::BitXor for Block64 {
    type Output = Block64;
    fn bitxor(self, rhs: Block64) -> Block64 {
        Block64(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Block64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016X}", self.0)
    }
}

impl FromStr for Block64 {
    type Err = HexError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Block64::from_hex(s)
    }
}

/// One 32-bit half of a block, numbered 1..32 MSB-first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Half32(pub u32);

impl Half32 {
    pub fn bit(self, i: u32) -> bool {
        assert!((1..=32).contains(&i), "bit index {i} outside 1..=32");
        (self.0 >> (32 - i)) & 1 == 1
    }
}

impl core::ops::BitXor for Half32 {
    type Output = Half32;
    fn bitxor(self, rhs: Half32) -> Half32 {
        Half32(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Half32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08X}", self.0)
    }
}

/// A 48-bit round subkey held in the low bits of a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subkey48(u64);

impl Subkey48 {
    pub const MASK: u64 = (1 << 48) - 1;

    /// Keeps only the low 48 bits of `bits`.
    pub const fn new(bits: u64) -> Self {
        Subkey48(bits & Self::MASK)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn from_hex(s: &str) -> Result<Self, HexError> {
        parse_hex_exact(s, 12).map(Subkey48)
    }
}

impl fmt::Display for Subkey48 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:012X}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hex_rendering_is_uppercase_big_endian() {
        let b = Block64(0x0123_4567_89ab_cdef);
        assert_eq!(alloc::format!("{b}"), "0123456789ABCDEF");
        assert_eq!(b.to_bytes()[0], 0x01);
        assert!(!b.bit(1));
        assert!(b.bit(64));
        assert!(b.bit(8));
    }

    #[test]
    fn hex_parse_errors() {
        assert_eq!(
            Block64::from_hex("0123"),
            Err(HexError::WrongWidth { expected: 16, found: 4 })
        );
        assert_eq!(
            Block64::from_hex("0123456789ABCDEG"),
            Err(HexError::InvalidDigit { position: 15, found: 'G' })
        );
        assert_eq!(
            Block64::from_hex("+123456789ABCDEF"),
            Err(HexError::InvalidDigit { position: 0, found: '+' })
        );
        assert_eq!(Block64::from_hex("85e813540f0ab405"), Ok(Block64(0x85E8_1354_0F0A_B405)));
    }

    #[test]
    fn subkey_masks_to_48_bits() {
        assert_eq!(Subkey48::new(u64::MAX).bits(), Subkey48::MASK);
        assert_eq!(alloc::format!("{}", Subkey48::new(0x1B02_EFFC_7072)), "1B02EFFC7072");
    }

    proptest! {
        #[test]
        fn bit_extraction_round_trips(x: u64) {
            let b = Block64(x);
            let rebuilt = (1..=64).fold(Block64::ZERO, |acc, i| acc.with_bit(i, b.bit(i)));
            prop_assert_eq!(rebuilt, b);
            let s = alloc::format!("{b}");
            prop_assert_eq!(s.len(), 16);
            prop_assert_eq!(Block64::from_hex(&s), Ok(b));
        }

        #[test]
        fn halves_round_trip(x: u64) {
            let (l, r) = Block64(x).halves();
            prop_assert_eq!(Block64::from_halves(l, r), Block64(x));
        }
    }
}
