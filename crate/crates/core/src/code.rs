//! N-bit radiation-state words.
//!
//! A [`CodeWord`] holds one on/off state per array element. Bit = 1 means the
//! element radiates (its PIN diode is unbiased); bit = 0 means the element is
//! shorted into the guide wall and contributes only leakage. The textual form
//! reads left to right as elements 0..N-1, so element 0 is the most
//! significant bit of the integer form: `"1010...".parse()` puts element 0 in
//! the radiating state.

use std::fmt;
use thiserror::Error;

/// Largest element count a code word can describe.
pub const MAX_CODE_BITS: usize = 24;

/// Radix accepted by [`CodeWord::parse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Radix {
    Bin,
    Dec,
    Hex,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("code word length {0} outside 1..={MAX_CODE_BITS}")]
    BadLength(usize),
    #[error("value {value:#x} does not fit in {bits} bits")]
    Overflow { value: u64, bits: usize },
    #[error("invalid digit {digit:?} for {radix:?} input")]
    InvalidDigit { digit: char, radix: Radix },
    #[error("empty code text")]
    Empty,
}

/// Ordered radiation states of one array configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeWord {
    bits: u32,
    len: u8,
}

impl CodeWord {
    /// Builds a word from its integer form. Bit `len-1` of `value` is
    /// element 0.
    pub fn from_value(value: u32, len: usize) -> Result<Self, CodeError> {
        if len == 0 || len > MAX_CODE_BITS {
            return Err(CodeError::BadLength(len));
        }
        if len < 32 && value >> len != 0 {
            return Err(CodeError::Overflow {
                value: value as u64,
                bits: len,
            });
        }
        Ok(Self {
            bits: value,
            len: len as u8,
        })
    }

    /// All elements radiating.
    pub fn all_ones(len: usize) -> Self {
        Self::from_value(((1u64 << len) - 1) as u32, len).expect("len checked by caller")
    }

    /// No element radiating.
    pub fn all_zeros(len: usize) -> Self {
        Self::from_value(0, len).expect("len checked by caller")
    }

    /// Parses text in the given radix. Accepts an optional `0b`/`0x` prefix
    /// matching the radix. Values must fit in `len` bits.
    pub fn parse(text: &str, radix: Radix, len: usize) -> Result<Self, CodeError> {
        let t = text.trim();
        let t = match radix {
            Radix::Bin => t.strip_prefix("0b").or_else(|| t.strip_prefix("0B")).unwrap_or(t),
            Radix::Hex => t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t),
            Radix::Dec => t,
        };
        if t.is_empty() {
            return Err(CodeError::Empty);
        }
        let base = match radix {
            Radix::Bin => 2,
            Radix::Dec => 10,
            Radix::Hex => 16,
        };
        let mut value: u64 = 0;
        for digit in t.chars() {
            let d = digit
                .to_digit(base)
                .ok_or(CodeError::InvalidDigit { digit, radix })?;
            value = value * base as u64 + d as u64;
            if value >> len != 0 {
                return Err(CodeError::Overflow { value, bits: len });
            }
        }
        Self::from_value(value as u32, len)
    }

    /// Number of elements the word describes.
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false // a code word always has at least one bit
    }

    /// Integer form; element 0 is the most significant of the `len` bits.
    pub fn value(&self) -> u32 {
        self.bits
    }

    /// Radiation state of element `n` (1 = radiating).
    pub fn bit(&self, n: usize) -> u8 {
        debug_assert!(n < self.len());
        ((self.bits >> (self.len() - 1 - n)) & 1) as u8
    }

    /// Iterator over element states, feed end first.
    pub fn states(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |n| self.bit(n))
    }

    /// Number of radiating elements.
    pub fn ones(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Bitwise complement (the word the FPGA drives onto the diodes).
    pub fn complement(&self) -> Self {
        Self {
            bits: !self.bits & (((1u64 << self.len) - 1) as u32),
            len: self.len,
        }
    }

    /// Cyclic rotation moving every element one position toward the load end
    /// (element n takes the state of element n-1; element 0 takes element
    /// N-1), repeated `by` times.
    pub fn rotate(&self, by: usize) -> Self {
        let n = self.len();
        let by = by % n;
        if by == 0 {
            return *self;
        }
        let mask = ((1u64 << n) - 1) as u32;
        let bits = ((self.bits >> by) | (self.bits << (n - by))) & mask;
        Self { bits, len: self.len }
    }

    /// Binary text form, element 0 first.
    pub fn to_bin_string(&self) -> String {
        (0..self.len()).map(|n| if self.bit(n) == 1 { '1' } else { '0' }).collect()
    }

    /// Hex text form, zero padded to the word width.
    pub fn to_hex_string(&self) -> String {
        format!("{:0width$X}", self.bits, width = self.len().div_ceil(4))
    }
}

impl fmt::Display for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bin_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radix_identity() {
        let a = CodeWord::parse("1010101010101010", Radix::Bin, 16).unwrap();
        let b = CodeWord::parse("AAAA", Radix::Hex, 16).unwrap();
        let c = CodeWord::parse("43690", Radix::Dec, 16).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.value(), 0xAAAA);
    }

    #[test]
    fn reference_dual_beam_code_hex() {
        let w = CodeWord::parse("1001001001001001", Radix::Bin, 16).unwrap();
        assert_eq!(w.value(), 0x9249);
        assert_eq!(w.to_hex_string(), "9249");
    }

    #[test]
    fn overflow_rejected() {
        assert_eq!(
            CodeWord::parse("65536", Radix::Dec, 16),
            Err(CodeError::Overflow { value: 65536, bits: 16 })
        );
        assert!(CodeWord::parse("65535", Radix::Dec, 16).is_ok());
    }

    #[test]
    fn invalid_digit_rejected() {
        assert!(matches!(
            CodeWord::parse("10102", Radix::Bin, 16),
            Err(CodeError::InvalidDigit { digit: '2', .. })
        ));
        assert!(matches!(
            CodeWord::parse("12G4", Radix::Hex, 16),
            Err(CodeError::InvalidDigit { digit: 'G', .. })
        ));
    }

    #[test]
    fn element_order_is_msb_first() {
        let w = CodeWord::parse("1000000000000000", Radix::Bin, 16).unwrap();
        assert_eq!(w.bit(0), 1);
        assert_eq!(w.bit(15), 0);
        assert_eq!(w.value(), 0x8000);
    }

    #[test]
    fn complement_involution() {
        let w = CodeWord::from_value(0x9249, 16).unwrap();
        assert_eq!(w.complement().complement(), w);
        assert_eq!(w.complement().value(), !0x9249u32 & 0xFFFF);
    }

    #[test]
    fn rotation_cycles() {
        let w = CodeWord::parse("1100", Radix::Bin, 4).unwrap();
        assert_eq!(w.rotate(1).to_bin_string(), "0110");
        assert_eq!(w.rotate(4), w);
        assert_eq!(w.rotate(1).rotate(3), w);
    }
}
