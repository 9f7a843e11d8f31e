//! Perfect decoders with width `max(⌈n/B⌉+B, BD)`, plus a recognizer-based encoder.
//!
//! Decoder layers, for code `β` of vector `k = Bℓ + r`:
//!
//! * γ layer: `γ_i = [⌊Int(β)/B⌋ = i]` for `i < n_B` and `γ_{n_B+h} = [Int(β) ≡ h mod B]`.
//! * y layer: `y_{j,b} = [Σ_i w_{i,j,b} γ_i ≥ 2]` with `w_{h,j,b} = x_j^{Bh+b}` and
//!   `w_{n_B+h,j,b} = [h = b]`, so `y_{j,b} = 1` iff `b = r` and `x_j^k = 1`.
//! * output: `y_j = [Σ_b y_{j,b} ≥ 1]`.

use crate::bitvec::BitVec;
use crate::codec::{CodecBundle, Encoder, Mode};
use crate::error::{Error, Result};
use crate::net::{Layer, LayeredNet};
use crate::unit::{
    make_equality_recognizer, make_vector_recognizer, slice_recognizer, ThresholdUnit,
};
use crate::vectors::{assign_codes, code_width, CodeAssignment, VectorSet};

/// Largest supported block size; keeps every weight within `±2^32`.
pub const MAX_BLOCK: usize = 32;

pub(crate) fn blocks(n: usize, b: usize) -> usize {
    n.div_ceil(b)
}

/// D → n → d encoder: one recognizer per vector, then an OR per code bit.
pub fn build_encoder(set: &VectorSet, codes: &CodeAssignment) -> Result<LayeredNet> {
    if codes.codes.len() != set.len() {
        return Err(Error::DimensionMismatch {
            expected: set.len(),
            actual: codes.codes.len(),
        });
    }
    let recognizers: Layer = set.vectors().iter().map(make_vector_recognizer).collect();
    let bits: Layer = (0..codes.code_width)
        .map(|j| {
            let weights = codes.codes.iter().map(|c| c.get(j) as i64).collect();
            ThresholdUnit::new(weights, 1)
        })
        .collect();
    LayeredNet::new(set.dim(), vec![recognizers, bits])
}

fn check_block(n: usize, b: usize, min: usize) -> Result<()> {
    if b < min || b > n {
        return Err(Error::out_of_range(
            "B",
            format!("{b} not in {min}..={n} (n={n})"),
        ));
    }
    if b > MAX_BLOCK {
        return Err(Error::Capacity(b));
    }
    Ok(())
}

/// Layers computing the one-hot quotient/remainder indicators `γ_0 … γ_{n_B+B-1}`
/// from a `d`-bit code.
///
/// For `B = 2^K` this is one layer: quotient units match the top `d-K` bits and
/// remainder units the low `K` bits. Otherwise the first layer recognizes each
/// code `m < n` and the second ORs the recognizers of each block and residue.
pub fn build_gamma_layer(n: usize, b: usize, d: usize) -> Result<Vec<Layer>> {
    if b <= 1 || b > n {
        return Err(Error::out_of_range("B", format!("{b} not in 2..={n}")));
    }
    if d == 0 || d > 63 || (n as u128) > (1u128 << d) {
        return Err(Error::out_of_range(
            "d",
            format!("{d} bits cannot index n={n}"),
        ));
    }
    let n_blocks = blocks(n, b);
    if b.is_power_of_two() {
        let k = b.trailing_zeros() as usize;
        let mut layer: Layer = (0..n_blocks)
            .map(|i| slice_recognizer(d, 0, d - k, i as u64))
            .collect();
        layer.extend((0..b).map(|h| slice_recognizer(d, d - k, k, h as u64)));
        Ok(vec![layer])
    } else {
        let recognizers: Layer = (0..n)
            .map(|m| make_equality_recognizer(m as u64, d))
            .collect::<Result<_>>()?;
        let mut ors: Layer = (0..n_blocks)
            .map(|i| ThresholdUnit::new((0..n).map(|m| (m / b == i) as i64).collect(), 1))
            .collect();
        ors.extend(
            (0..b).map(|h| ThresholdUnit::new((0..n).map(|m| (m % b == h) as i64).collect(), 1)),
        );
        Ok(vec![recognizers, ors])
    }
}

fn constant_decoder(set: &VectorSet) -> Result<LayeredNet> {
    let x = set.get(0);
    let layer = (0..set.dim())
        .map(|j| ThresholdUnit::new(vec![0], if x.get(j) { 0 } else { 1 }))
        .collect();
    LayeredNet::new(1, vec![layer])
}

/// The decoder network alone. For `n = 1` this is a single layer of constant units
/// and `b` is ignored.
pub fn perfect_decoder_net(set: &VectorSet, b: usize) -> Result<LayeredNet> {
    let n = set.len();
    if n == 1 {
        return constant_decoder(set);
    }
    check_block(n, b, 2)?;
    let dim = set.dim();
    let d = code_width(n);
    let n_blocks = blocks(n, b);
    let gamma = n_blocks + b;

    let mut layers = build_gamma_layer(n, b, d)?;
    let mut y_layer = Vec::with_capacity(b * dim);
    for j in 0..dim {
        for slot in 0..b {
            let mut weights = Vec::with_capacity(gamma);
            weights.extend((0..n_blocks).map(|h| set.bit_or_zero(b * h + slot, j) as i64));
            weights.extend((0..b).map(|h| (h == slot) as i64));
            y_layer.push(ThresholdUnit::new(weights, 2));
        }
    }
    layers.push(y_layer);
    let out = (0..dim)
        .map(|j| {
            let weights = (0..b * dim).map(|i| (i / b == j) as i64).collect();
            ThresholdUnit::new(weights, 1)
        })
        .collect();
    layers.push(out);
    LayeredNet::new(d, layers)
}

pub(crate) fn encoder_for(set: &VectorSet) -> Result<Encoder> {
    if set.is_distinct() {
        Ok(Encoder::Net(build_encoder(set, &assign_codes(set)?)?))
    } else {
        Ok(Encoder::Positional)
    }
}

/// Builds the perfect codec for `set` with block size `b` (`1 < b ≤ n`).
pub fn build_perfect_decoder(set: &VectorSet, b: usize) -> Result<CodecBundle> {
    let decoder = perfect_decoder_net(set, b)?;
    let bundle = CodecBundle {
        mode: Mode::Perfect,
        n: set.len(),
        dim: set.dim(),
        code_width: set.code_width(),
        block: if set.len() == 1 { 1 } else { b },
        encoder: encoder_for(set)?,
        decoder,
        mask_a: None,
        pattern_c: None,
    };
    debug_assert!(bundle.validate().is_ok());
    Ok(bundle)
}

/// `⌈√(n/D)⌉`, at least 2. Requires `n > D`.
pub fn optimal_b(n: usize, dim: usize) -> Result<usize> {
    if dim == 0 || n <= dim {
        return Err(Error::out_of_range(
            "n",
            format!("block formula needs n > D (n={n}, D={dim})"),
        ));
    }
    // smallest b with b²·D ≥ n
    let mut b = ((n as f64 / dim as f64).sqrt().ceil() as u128).max(1);
    let (n, dim) = (n as u128, dim as u128);
    while b > 1 && (b - 1) * (b - 1) * dim >= n {
        b -= 1;
    }
    while b * b * dim < n {
        b += 1;
    }
    Ok((b as usize).max(2))
}

/// Indices of the γ nodes that fire for code `k`, read off a simulation.
pub fn active_gammas(n: usize, b: usize, k: u64) -> Result<Vec<usize>> {
    let d = code_width(n);
    let layers = build_gamma_layer(n, b, d)?;
    let net = LayeredNet::new(d, layers)?;
    let out = net.eval(&BitVec::from_int(k, d)?)?;
    Ok(out
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, b)| **b)
        .map(|(i, _)| i)
        .collect())
}
