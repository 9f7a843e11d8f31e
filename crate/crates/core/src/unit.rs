//! Single threshold units `[w·x ≥ θ]` and the recognizer units built from them.

use crate::bitvec::BitVec;
use crate::error::{Error, Result};

/// A Boolean threshold function with integer weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdUnit {
    pub weights: Vec<i64>,
    pub theta: i64,
}

impl ThresholdUnit {
    pub fn new(weights: Vec<i64>, theta: i64) -> Self {
        ThresholdUnit { weights, theta }
    }

    pub fn fan_in(&self) -> usize {
        self.weights.len()
    }

    /// Returns 1 iff `w·x ≥ θ`.
    pub fn eval(&self, input: &BitVec) -> Result<bool> {
        if input.dim() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                actual: input.dim(),
            });
        }
        Ok(self.eval_bits(input.bits()))
    }

    pub(crate) fn eval_bits(&self, bits: &[bool]) -> bool {
        let sum: i128 = self
            .weights
            .iter()
            .zip(bits)
            .filter(|(_, b)| **b)
            .map(|(w, _)| *w as i128)
            .sum();
        sum >= self.theta as i128
    }

    /// Evaluates against the indices of the set input bits only.
    pub(crate) fn eval_active(&self, active: &[usize]) -> bool {
        let mut sum: i128 = 0;
        for &i in active {
            sum += self.weights[i] as i128;
        }
        sum >= self.theta as i128
    }
}

/// Free-function form of [`ThresholdUnit::eval`].
pub fn eval_unit(unit: &ThresholdUnit, input: &BitVec) -> Result<bool> {
    unit.eval(input)
}

/// Unit firing exactly when its input equals `pattern` bitwise:
/// weight +1 on set bits, −1 on clear bits, θ = number of set bits.
pub fn make_vector_recognizer(pattern: &BitVec) -> ThresholdUnit {
    let weights = pattern
        .bits()
        .iter()
        .map(|&b| if b { 1 } else { -1 })
        .collect();
    ThresholdUnit::new(weights, pattern.count_ones() as i64)
}

/// Unit computing `[Int(β) = k]` on a `d`-bit input.
pub fn make_equality_recognizer(k: u64, d: usize) -> Result<ThresholdUnit> {
    if d == 0 || d > 63 {
        return Err(Error::out_of_range("d", format!("{d} not in 1..=63")));
    }
    if k >> d != 0 {
        return Err(Error::out_of_range("k", format!("{k} is not below 2^{d}")));
    }
    Ok(make_vector_recognizer(&BitVec::from_int(k, d)?))
}

/// Recognizer of `value` on the contiguous input slice `[start, start+len)` of a
/// `dim`-bit input; all other weights are zero.
pub(crate) fn slice_recognizer(dim: usize, start: usize, len: usize, value: u64) -> ThresholdUnit {
    let mut weights = vec![0i64; dim];
    let mut theta = 0;
    for i in 0..len {
        let bit = (value >> (len - 1 - i)) & 1 == 1;
        weights[start + i] = if bit { 1 } else { -1 };
        theta += bit as i64;
    }
    ThresholdUnit::new(weights, theta)
}
