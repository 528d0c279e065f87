use core::fmt;

/// A table-driven bit selection: output bit `j` (1-based, MSB-first) is input
/// bit `sources[j - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermutationSpec<'a> {
    pub name: &'a str,
    pub input_width: u8,
    pub sources: &'a [u8],
}

impl PermutationSpec<'_> {
    pub fn output_width(&self) -> u8 {
        self.sources.len() as u8
    }

    /// Every source index lies in `1..=input_width` and both widths fit a `u64`.
    pub fn is_well_formed(&self) -> bool {
        (1..=64).contains(&self.input_width)
            && !self.sources.is_empty()
            && self.sources.len() <= 64
            && self.sources.iter().all(|&s| (1..=self.input_width).contains(&s))
    }

    /// True when the spec is a bijection on `1..=input_width`.
    pub fn is_bijective(&self) -> bool {
        if !self.is_well_formed() || self.sources.len() != usize::from(self.input_width) {
            return false;
        }
        let mut seen = 0u64;
        for &s in self.sources {
            seen |= 1 << (s - 1);
        }
        seen.count_ones() == u32::from(self.input_width)
    }
}

/// A value of a known bit width (at most 64), held in the low bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    value: u64,
    width: u8,
}

impl BitVector {
    /// Builds a bit vector, masking `value` to `width` bits.
    pub fn new(value: u64, width: u8) -> Self {
        assert!((1..=64).contains(&width), "bit width {width} outside 1..=64");
        BitVector { value: value & mask(width), width }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn width(self) -> u8 {
        self.width
    }
}

/// Input width did not match the spec's declared input width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WidthMismatch {
    pub spec_input_width: u8,
    pub actual: u8,
}

impl fmt::Display for WidthMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "permutation expects {} input bits, got {}",
            self.spec_input_width, self.actual
        )
    }
}

impl core::error::Error for WidthMismatch {}

/// Applies `spec` to `input`.
pub fn permute(input: BitVector, spec: &PermutationSpec<'_>) -> Result<BitVector, WidthMismatch> {
    if input.width != spec.input_width {
        return Err(WidthMismatch { spec_input_width: spec.input_width, actual: input.width });
    }
    Ok(BitVector::new(
        permute_bits(input.value, spec.input_width, spec.sources),
        spec.output_width(),
    ))
}

/// Unchecked core of [`permute`]; callers guarantee the widths agree.
#[inline]
pub(crate) fn permute_bits(value: u64, input_width: u8, sources: &[u8]) -> u64 {
    let mut out = 0u64;
    for &src in sources {
        out = (out << 1) | ((value >> (input_width - src)) & 1);
    }
    out
}

pub(crate) const fn mask(width: u8) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}
