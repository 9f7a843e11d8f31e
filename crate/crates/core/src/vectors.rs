//! Ordered vector sets and their positional code assignment.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::bitvec::BitVec;
use crate::error::{Error, Result};
use crate::netlist::split_lines;

/// `n` binary vectors of common dimension `D`, in code order.
///
/// Sets built with [`VectorSet::new`] hold pairwise-distinct vectors. A decoder
/// only needs the target row for each code, so [`VectorSet::code_table`] accepts
/// repeated rows; such sets cannot be given a threshold encoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSet {
    dim: usize,
    vectors: Vec<BitVec>,
    distinct: bool,
}

/// `d = ⌈log2 n⌉`, with `d = 1` for `n = 1`.
pub fn code_width(n: usize) -> usize {
    if n <= 2 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

fn first_duplicate(vectors: &[BitVec]) -> Option<(usize, usize)> {
    let mut seen: HashMap<&BitVec, usize> = HashMap::with_capacity(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        if let Some(&first) = seen.get(v) {
            return Some((first, i));
        }
        seen.insert(v, i);
    }
    None
}

impl VectorSet {
    pub fn new(vectors: Vec<BitVec>) -> Result<Self> {
        let set = Self::code_table(vectors)?;
        if let Some((first, second)) = first_duplicate(&set.vectors) {
            return Err(Error::DuplicateVector { first, second });
        }
        Ok(set)
    }

    /// Like [`VectorSet::new`] but repeated rows are allowed.
    pub fn code_table(vectors: Vec<BitVec>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::out_of_range("n", "vector set is empty"));
        };
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::out_of_range(
                "D",
                "vectors must have at least one bit",
            ));
        }
        if let Some(bad) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: bad.dim(),
            });
        }
        let distinct = first_duplicate(&vectors).is_none();
        Ok(VectorSet {
            dim,
            vectors,
            distinct,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn code_width(&self) -> usize {
        code_width(self.len())
    }

    pub fn is_distinct(&self) -> bool {
        self.distinct
    }

    pub fn vectors(&self) -> &[BitVec] {
        &self.vectors
    }

    pub fn get(&self, k: usize) -> &BitVec {
        &self.vectors[k]
    }

    /// Bit `j` of vector `k`, with indices past `n` reading as phantom zeros.
    pub(crate) fn bit_or_zero(&self, k: usize, j: usize) -> bool {
        self.vectors.get(k).is_some_and(|v| v.get(j))
    }

    /// Parses the vector-set text format: `#` comment lines, then one
    /// '0'/'1' string per line. Repeated rows are accepted.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vectors = Vec::new();
        for (i, line) in split_lines(text)?.into_iter().enumerate() {
            if line.starts_with('#') {
                continue;
            }
            let v: BitVec = line
                .parse()
                .map_err(|_| Error::parse(i + 1, "vector lines may contain only '0' and '1'"))?;
            if let Some(first) = vectors.first() {
                let first: &BitVec = first;
                if first.dim() != v.dim() {
                    return Err(Error::parse(
                        i + 1,
                        format!("vector has {} bits, expected {}", v.dim(), first.dim()),
                    ));
                }
            }
            vectors.push(v);
        }
        Self::code_table(vectors)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.len() * (self.dim + 1));
        for v in &self.vectors {
            writeln!(out, "{v}").unwrap();
        }
        out
    }
}

/// Positional code assignment: vector `k` receives the `d`-bit code of `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeAssignment {
    pub code_width: usize,
    pub codes: Vec<BitVec>,
}

impl CodeAssignment {
    pub fn code(&self, k: usize) -> &BitVec {
        &self.codes[k]
    }
}

pub fn assign_codes(set: &VectorSet) -> Result<CodeAssignment> {
    if let Some((first, second)) = first_duplicate(set.vectors()) {
        return Err(Error::DuplicateVector { first, second });
    }
    let d = set.code_width();
    let codes = (0..set.len())
        .map(|k| BitVec::from_int(k as u64, d))
        .collect::<Result<_>>()?;
    Ok(CodeAssignment {
        code_width: d,
        codes,
    })
}
