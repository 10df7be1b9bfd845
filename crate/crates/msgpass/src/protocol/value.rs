//! Structured (unbounded) states: atoms, tuples and canonical multisets.
//!
//! Multisets are stored canonically: each element is serialized with a
//! self-delimiting binary encoding and elements are kept sorted by that
//! encoding. Structural equality, hashing and canonical order all agree.

use super::bits::BitState;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum StructuredValue {
    Bits(BitState),
    Int(i64),
    Sym(u32),
    Tuple(Vec<StructuredValue>),
    Multiset(Vec<StructuredValue>),
}

impl StructuredValue {
    /// The all-zero initial state of every protocol.
    pub fn zero() -> Self {
        StructuredValue::Int(0)
    }

    /// Builds a multiset, canonicalizing element order.
    pub fn multiset(mut items: Vec<StructuredValue>) -> Self {
        items.sort_by_cached_key(|v| v.encode());
        StructuredValue::Multiset(items)
    }

    pub fn tuple(items: Vec<StructuredValue>) -> Self {
        StructuredValue::Tuple(items)
    }

    /// Self-delimiting binary encoding; doubles as the canonical sort key.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    fn encode_into(&self, out: &mut Vec<u8>) {
        match self {
            StructuredValue::Bits(b) => {
                out.push(1);
                write_varint(out, b.len() as u64);
                let mut byte = 0u8;
                for (i, &bit) in b.bits().iter().enumerate() {
                    if bit {
                        byte |= 1 << (i % 8);
                    }
                    if i % 8 == 7 {
                        out.push(byte);
                        byte = 0;
                    }
                }
                if b.len() % 8 != 0 {
                    out.push(byte);
                }
            }
            StructuredValue::Int(k) => {
                out.push(2);
                write_varint(out, zigzag(*k));
            }
            StructuredValue::Sym(s) => {
                out.push(3);
                write_varint(out, *s as u64);
            }
            StructuredValue::Tuple(items) => {
                out.push(4);
                write_varint(out, items.len() as u64);
                for item in items {
                    item.encode_into(out);
                }
            }
            StructuredValue::Multiset(items) => {
                out.push(5);
                write_varint(out, items.len() as u64);
                for item in items {
                    item.encode_into(out);
                }
            }
        }
    }

    /// Payload size in bits: bit-string length, integer/symbol bit length, and
    /// the sum over components for containers. Structural headers are not
    /// counted; this is the statistic the memory audits assert on.
    pub fn size_bits(&self) -> usize {
        match self {
            StructuredValue::Bits(b) => b.len(),
            StructuredValue::Int(k) => int_bits(k.unsigned_abs()),
            StructuredValue::Sym(s) => int_bits(*s as u64),
            StructuredValue::Tuple(items) | StructuredValue::Multiset(items) => {
                items.iter().map(|v| v.size_bits()).sum()
            }
        }
    }

    /// Largest integer atom anywhere inside the value, if any.
    pub fn max_int(&self) -> Option<i64> {
        match self {
            StructuredValue::Int(k) => Some(*k),
            StructuredValue::Bits(_) | StructuredValue::Sym(_) => None,
            StructuredValue::Tuple(items) | StructuredValue::Multiset(items) => {
                items.iter().filter_map(|v| v.max_int()).max()
            }
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            StructuredValue::Int(k) => Some(*k),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            StructuredValue::Bits(b) => json!({"bits": b.to_hex(), "len": b.len()}),
            StructuredValue::Int(k) => json!(k),
            StructuredValue::Sym(s) => json!({"sym": s}),
            StructuredValue::Tuple(items) => {
                json!({"tuple": items.iter().map(|v| v.to_json()).collect::<Vec<_>>()})
            }
            StructuredValue::Multiset(items) => {
                json!({"multiset": items.iter().map(|v| v.to_json()).collect::<Vec<_>>()})
            }
        }
    }
}

fn int_bits(k: u64) -> usize {
    (64 - k.leading_zeros()).max(1) as usize
}

fn zigzag(k: i64) -> u64 {
    ((k << 1) ^ (k >> 63)) as u64
}

fn write_varint(out: &mut Vec<u8>, mut value: u64) {
    loop {
        let byte = (value & 0x7f) as u8;
        value >>= 7;
        if value == 0 {
            out.push(byte);
            break;
        }
        out.push(byte | 0x80);
    }
}
