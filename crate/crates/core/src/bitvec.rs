//! Fixed-length binary vectors.
//!
//! Bit 0 is the most significant bit when a vector is read as an integer,
//! and it is the leftmost character in the textual form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    bits: Vec<bool>,
}

impl BitVec {
    pub fn new(bits: Vec<bool>) -> Self {
        BitVec { bits }
    }

    pub fn zeros(dim: usize) -> Self {
        BitVec {
            bits: vec![false; dim],
        }
    }

    /// The `dim`-bit big-endian representation of `value`.
    pub fn from_int(value: u64, dim: usize) -> Result<Self> {
        if dim < 64 && value >> dim != 0 {
            return Err(Error::out_of_range(
                "value",
                format!("{value} does not fit in {dim} bits"),
            ));
        }
        let bits = (0..dim)
            .map(|i| {
                let shift = dim - 1 - i;
                shift < 64 && (value >> shift) & 1 == 1
            })
            .collect();
        Ok(BitVec { bits })
    }

    /// `Int(β) = Σ β_i 2^{dim-i-1}`. Fails when the value needs more than 64 bits.
    pub fn to_int(&self) -> Result<u64> {
        let lead = self.bits.iter().take_while(|b| !**b).count();
        if self.bits.len() - lead > 64 {
            return Err(Error::out_of_range(
                "vector",
                format!("{} significant bits exceed 64", self.bits.len() - lead),
            ));
        }
        Ok(self.bits[lead..]
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn dim(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(BitVec {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    pub fn hamming(&self, other: &BitVec) -> Result<usize> {
        Ok(self.xor(other)?.count_ones())
    }
}

impl From<Vec<bool>> for BitVec {
    fn from(bits: Vec<bool>) -> Self {
        BitVec { bits }
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(1, format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitVec { bits })
    }
}
