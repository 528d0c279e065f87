use crate::bits::Half32;
use crate::tables::SBOX_TABLES;

/// One 6-bit to 4-bit substitution box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SBox {
    /// 1..=8
    pub index: u8,
    pub table: [[u8; 16]; 4],
}

impl SBox {
    /// Looks up a 6-bit group `b1..b6` (b1 = bit 5 of `group`): row from the
    /// outer bits, column from the inner four.
    #[inline]
    pub fn lookup(&self, group: u8) -> u8 {
        let row = ((group >> 4) & 0b10) | (group & 1);
        let col = (group >> 1) & 0xF;
        self.table[usize::from(row)][usize::from(col)]
    }
}

pub static SBOXES: [SBox; 8] = {
    let mut boxes = [SBox { index: 0, table: [[0; 16]; 4] }; 8];
    let mut i = 0;
    while i < 8 {
        boxes[i] = SBox { index: i as u8 + 1, table: SBOX_TABLES[i] };
        i += 1;
    }
    boxes
};

/// Substitutes a 48-bit value (low 48 bits of `input`) as eight 6-bit groups,
/// group 1 taken from the most significant end.
pub fn sbox_layer(input: u64) -> Half32 {
    debug_assert!(input >> 48 == 0, "sbox_layer input wider than 48 bits");
    let mut out = 0u32;
    for (g, sbox) in SBOXES.iter().enumerate() {
        let group = ((input >> (42 - 6 * g)) & 0x3F) as u8;
        out = (out << 4) | u32::from(sbox.lookup(group));
    }
    Half32(out)
}
