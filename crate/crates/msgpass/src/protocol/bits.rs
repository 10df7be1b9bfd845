//! Fixed-width bit-string states.
//!
//! Bit 0 is the "first bit" convention (the output bit of a node protocol).
//! Hex dumps pack bit i into byte i/8 at position i%8.

/// A bit string of explicit length. Bounded protocol runs require every state
/// to have exactly the protocol's width B.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitState {
    bits: Vec<bool>,
}

impl BitState {
    pub fn zeros(len: usize) -> Self {
        BitState {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        BitState {
            bits: bits.to_vec(),
        }
    }

    /// Low `len` bits of `value`, bit i = (value >> i) & 1.
    pub fn from_uint(value: u64, len: usize) -> Self {
        BitState {
            bits: (0..len).map(|i| value >> i & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Reads bits [lo, lo+len) as a little-endian integer.
    pub fn uint(&self, lo: usize, len: usize) -> u64 {
        (0..len).fold(0u64, |acc, i| acc | (self.bits[lo + i] as u64) << i)
    }

    /// Concatenation of slots, in order.
    pub fn concat(parts: &[&BitState]) -> Self {
        let mut bits = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for p in parts {
            bits.extend_from_slice(&p.bits);
        }
        BitState { bits }
    }

    pub fn slice(&self, lo: usize, len: usize) -> BitState {
        BitState {
            bits: self.bits[lo..lo + len].to_vec(),
        }
    }

    /// Zero-pads (or asserts) up to `len` bits.
    pub fn padded(&self, len: usize) -> BitState {
        assert!(
            self.len() <= len,
            "cannot pad {} bits into {}",
            self.len(),
            len
        );
        let mut bits = self.bits.clone();
        bits.resize(len, false);
        BitState { bits }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn to_hex(&self) -> String {
        let mut bytes = vec![0u8; self.bits.len().div_ceil(8)];
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                bytes[i / 8] |= 1 << (i % 8);
            }
        }
        let mut s = String::with_capacity(2 * bytes.len());
        for byte in bytes {
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }
}

impl std::fmt::Debug for BitState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitState(")?;
        for &b in &self.bits {
            write!(f, "{}", b as u8)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uint_round_trip() {
        let s = BitState::from_uint(0b1011, 4);
        assert_eq!(s.uint(0, 4), 0b1011);
        assert_eq!(s.uint(0, 2), 0b11);
        assert_eq!(s.uint(2, 2), 0b10);
        assert!(s.bit(0) && s.bit(1) && !s.bit(2) && s.bit(3));
    }

    #[test]
    fn concat_and_slice() {
        let a = BitState::from_uint(0b01, 2);
        let b = BitState::from_uint(0b10, 2);
        let c = BitState::concat(&[&a, &b]);
        assert_eq!(c.len(), 4);
        assert_eq!(c.slice(2, 2), b);
    }

    #[test]
    fn hex_packs_low_bits_first() {
        let s = BitState::from_uint(0x1, 9);
        assert_eq!(s.to_hex(), "0100");
    }
}
