use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A message: a sequence of bits, packed most significant bit first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push_bit(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, big-endian.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        assert!(width <= 64);
        assert!(
            width == 64 || value >> width == 0,
            "{value} does not fit in {width} bits"
        );
        for i in (0..width).rev() {
            self.push_bit((value >> i) & 1 == 1);
        }
    }

    pub fn append(&mut self, other: &BitString) {
        for i in 0..other.len {
            self.push_bit(other.bit(i));
        }
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index out of range");
        self.bytes[i / 8] & (0x80 >> (i % 8)) != 0
    }

    /// The first `len` bits.
    pub fn prefix(&self, len: usize) -> BitString {
        assert!(len <= self.len);
        let mut out = BitString::new();
        for i in 0..len {
            out.push_bit(self.bit(i));
        }
        out
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { bits: self, pos: 0 }
    }

    /// Lowercase hex of the packed bytes; the final byte is zero-padded.
    pub fn to_hex(&self) -> String {
        const DIGITS: &[u8; 16] = b"0123456789abcdef";
        let mut s = String::with_capacity(self.bytes.len() * 2);
        for &b in &self.bytes {
            s.push(DIGITS[(b >> 4) as usize] as char);
            s.push(DIGITS[(b & 0xf) as usize] as char);
        }
        s
    }

    /// Inverse of [`to_hex`](Self::to_hex). Rejects wrong lengths, bad digits
    /// and nonzero padding.
    pub fn from_hex(hex: &str, len: usize) -> Option<BitString> {
        if hex.len() != len.div_ceil(8) * 2 {
            return None;
        }
        let mut bytes = Vec::with_capacity(hex.len() / 2);
        for pair in hex.as_bytes().chunks(2) {
            let hi = (pair[0] as char).to_digit(16)?;
            let lo = (pair[1] as char).to_digit(16)?;
            bytes.push((hi * 16 + lo) as u8);
        }
        if len % 8 != 0 {
            let pad = 0xffu8 >> (len % 8);
            if bytes.last().is_some_and(|b| b & pad != 0) {
                return None;
            }
        }
        Some(BitString { bytes, len })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Sequential big-endian field reader over a [`BitString`].
pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl BitReader<'_> {
    /// Reads `width` bits; `None` if the message is too short.
    pub fn read(&mut self, width: u32) -> Option<u64> {
        if self.pos + width as usize > self.bits.len() {
            return None;
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | u64::from(self.bits.bit(self.pos));
            self.pos += 1;
        }
        Some(v)
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        self.read(1).map(|b| b == 1)
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn big_endian_packing() {
        let mut b = BitString::new();
        b.push_bits(0b101, 3);
        b.push_bits(0xff, 8);
        assert_eq!(b.len(), 11);
        assert_eq!(b.to_hex(), "bfe0");
        let mut r = b.reader();
        assert_eq!(r.read(3), Some(5));
        assert_eq!(r.read(8), Some(255));
        assert_eq!(r.read(1), None);
        assert_eq!(BitString::new().to_hex(), "");
    }

    #[test]
    fn hex_rejects_garbage() {
        assert!(BitString::from_hex("bfe1", 11).is_none());
        assert!(BitString::from_hex("bf", 11).is_none());
        assert!(BitString::from_hex("zz", 8).is_none());
    }

    proptest! {
        #[test]
        fn hex_roundtrip(fields in proptest::collection::vec((0u64..1 << 20, 1u32..21), 0..6)) {
            let mut b = BitString::new();
            for &(v, w) in &fields {
                b.push_bits(v & ((1 << w) - 1), w);
            }
            let back = BitString::from_hex(&b.to_hex(), b.len()).unwrap();
            prop_assert_eq!(&back, &b);
            let mut r = back.reader();
            for &(v, w) in &fields {
                prop_assert_eq!(r.read(w), Some(v & ((1 << w) - 1)));
            }
        }
    }
}
