//! Bit strings and the Elias-gamma self-delimiting wrapper.
//!
//! Textual form is an ASCII `'0'`/`'1'` string, most significant bit first.
//! The same form is used when a [`BitString`] is embedded in JSON.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite sequence of bits with an explicit length. The empty string is valid.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn ones(len: usize) -> Self {
        Self { bits: vec![true; len] }
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_u64(value: u64, width: usize) -> Self {
        assert!(width <= 64, "from_u64 supports at most 64 bits");
        let bits = (0..width).map(|i| (value >> (width - 1 - i)) & 1 == 1).collect();
        Self { bits }
    }

    /// Interprets the string as an unsigned integer, most significant bit first.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len() <= 64, "to_u64 supports at most 64 bits");
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// Minimal binary representation of `value` ("" for 0).
    pub fn binary(value: u64) -> Self {
        let width = (64 - value.leading_zeros()) as usize;
        Self::from_u64(value, width)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    pub fn bit(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_all_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    pub fn slice(&self, range: Range<usize>) -> BitString {
        BitString { bits: self.bits[range].to_vec() }
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn set(&mut self, index: usize, bit: bool) {
        self.bits[index] = bit;
    }

    /// `self` XOR the first `len(self)` bits of `mask`; bits past the end of
    /// `mask` are left untouched.
    pub fn xor_prefix(&self, mask: &BitString) -> BitString {
        let bits = self
            .bits
            .iter()
            .enumerate()
            .map(|(i, &b)| b ^ mask.get(i).unwrap_or(false))
            .collect();
        BitString { bits }
    }

    /// Zero-pads on the right up to `len` bits. Panics if already longer.
    pub fn padded(&self, len: usize) -> BitString {
        assert!(self.len() <= len, "cannot pad {} bits to {}", self.len(), len);
        let mut out = self.clone();
        out.bits.resize(len, false);
        out
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::ParseBits(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::from_bits)
    }
}

impl From<&[bool]> for BitString {
    fn from(bits: &[bool]) -> Self {
        Self { bits: bits.to_vec() }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self { bits: iter.into_iter().collect() }
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `a || b`.
pub fn concat(a: &BitString, b: &BitString) -> BitString {
    a.concat(b)
}

/// Elias-gamma code of a positive integer: `floor(log2 m)` zeros followed by
/// the binary representation of `m`.
pub fn elias_gamma(m: u64) -> BitString {
    assert!(m >= 1, "Elias gamma is defined for positive integers");
    let body = BitString::binary(m);
    let mut out = BitString::zeros(body.len() - 1);
    out.extend_from(&body);
    out
}

/// Decodes one Elias-gamma integer starting at `start`; returns the value and
/// the number of bits consumed.
pub fn decode_elias_gamma(s: &BitString, start: usize) -> Result<(u64, usize)> {
    let mut zeros = 0usize;
    loop {
        match s.get(start + zeros) {
            Some(false) => zeros += 1,
            Some(true) => break,
            None => return Err(Error::MalformedCode("truncated Elias-gamma header".into())),
        }
    }
    if zeros >= 64 {
        return Err(Error::MalformedCode("Elias-gamma value exceeds 64 bits".into()));
    }
    let end = start + 2 * zeros + 1;
    if end > s.len() {
        return Err(Error::MalformedCode("truncated Elias-gamma body".into()));
    }
    let value = s.slice(start + zeros..end).to_u64();
    Ok((value, end - start))
}

/// Length of the Elias-gamma header for a payload of `payload_len` bits.
pub fn header_len(payload_len: usize) -> usize {
    elias_gamma_len(payload_len as u64 + 1)
}

fn elias_gamma_len(m: u64) -> usize {
    2 * (63 - m.leading_zeros() as usize) + 1
}

/// Length of `encode_self_delimiting(p)` for `len(p) = payload_len`.
pub fn self_delimited_len(payload_len: usize) -> usize {
    payload_len + header_len(payload_len)
}

/// Prefix-free wrapper: Elias-gamma of `len(p) + 1`, then `p`.
pub fn encode_self_delimiting(payload: &BitString) -> BitString {
    let mut out = elias_gamma(payload.len() as u64 + 1);
    out.extend_from(payload);
    out
}

/// Reads one self-delimited payload from the front of `s`. Trailing bits are
/// ignored; the second value is the number of bits consumed.
pub fn decode_self_delimiting(s: &BitString) -> Result<(BitString, usize)> {
    let (m, header) = decode_elias_gamma(s, 0)?;
    let len = (m - 1) as usize;
    let end = header
        .checked_add(len)
        .ok_or_else(|| Error::MalformedCode("length overflow".into()))?;
    if end > s.len() {
        return Err(Error::MalformedCode(format!(
            "payload of {len} bits truncated after {} bits",
            s.len() - header
        )));
    }
    Ok((s.slice(header..end), end))
}
