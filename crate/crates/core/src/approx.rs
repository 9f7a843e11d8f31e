//! Approximate decoders of width `max(⌈n/B⌉+B, (B-1)D+1)`.
//!
//! For code `k = Bi + r` the γ layer activates `γ_i` and `γ_{n_B+r}`. Unit
//! `y_{j,h}` (`h < B-1`) sums the data weight `w_h(p)` of the block pattern `p`
//! at output bit `j` and a penalty of `-2^B/4` when `r = 0` or `-2^B/2` when
//! `r = h+1`, with threshold 0. `w_h` moves bit `p_{h+1}` to the front, so
//!
//! * `r ≥ 1`: only `y_{j,r-1}` can be 0, and it equals `p_r`;
//! * `r = 0`: `y_{j,h} = p_0 ∨ p_{h+1}`.
//!
//! `z_j = ∧_h y_{j,h}` reproduces `p_r` everywhere except `p = 011…1, r = 0`.
//! The corrected decoder feeds `χ_a(p) = p ⊕ a` instead of `p` and then XORs
//! `z_j` with `a_r`, which moves the single erroneous pattern onto the least
//! frequent one `c = 011…1 ⊕ a`.

use std::collections::BTreeMap;

use crate::bitvec::BitVec;
use crate::codec::{CodecBundle, Mode};
use crate::error::{Error, Result};
use crate::net::{Layer, LayeredNet};
use crate::perfect::{blocks, build_gamma_layer, encoder_for, MAX_BLOCK};
use crate::unit::ThresholdUnit;
use crate::vectors::{code_width, VectorSet};

/// Frequencies of the length-`B` column patterns over all blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternStats {
    pub block: usize,
    /// Patterns (MSB-first integers) that occur at least once.
    pub counts: BTreeMap<u64, u64>,
    /// Least frequent pattern, lexicographically smallest among ties.
    pub c: BitVec,
    /// Correction mask `a = c ⊕ 011…1`.
    pub a: BitVec,
}

impl PatternStats {
    pub fn count(&self, pattern: u64) -> u64 {
        self.counts.get(&pattern).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn c_value(&self) -> u64 {
        self.c.to_int().expect("B ≤ 32")
    }

    pub fn a_value(&self) -> u64 {
        self.a.to_int().expect("B ≤ 32")
    }
}

/// `011…1` on `b` bits.
pub fn error_pattern(b: usize) -> u64 {
    (1u64 << (b - 1)) - 1
}

fn check_pattern_block(b: usize) -> Result<()> {
    if !(2..=MAX_BLOCK).contains(&b) {
        return Err(Error::out_of_range("B", format!("{b} not in 2..=32")));
    }
    Ok(())
}

/// Pattern `x^{Bi}_j … x^{Bi+B-1}_j` as an MSB-first integer; phantom rows read 0.
pub fn block_pattern(set: &VectorSet, b: usize, block: usize, j: usize) -> u64 {
    (0..b).fold(0u64, |acc, r| {
        (acc << 1) | set.bit_or_zero(b * block + r, j) as u64
    })
}

pub fn count_patterns(set: &VectorSet, b: usize) -> Result<PatternStats> {
    check_pattern_block(b)?;
    let mut counts = BTreeMap::new();
    for i in 0..blocks(set.len(), b) {
        for j in 0..set.dim() {
            *counts.entry(block_pattern(set, b, i, j)).or_insert(0u64) += 1;
        }
    }
    let c = if (counts.len() as u64) < 1u64 << b {
        // some pattern never occurs; take the smallest absent one
        let mut next = 0u64;
        for &p in counts.keys() {
            if p != next {
                break;
            }
            next += 1;
        }
        next
    } else {
        let mut best = (u64::MAX, 0u64);
        for (&p, &count) in &counts {
            if count < best.0 {
                best = (count, p);
            }
        }
        best.1
    };
    let a = c ^ error_pattern(b);
    Ok(PatternStats {
        block: b,
        counts,
        c: BitVec::from_int(c, b)?,
        a: BitVec::from_int(a, b)?,
    })
}

/// `χ_a(p) = p ⊕ a`, bitwise.
pub fn chi(a: &BitVec, p: &BitVec) -> Result<BitVec> {
    p.xor(a)
}

/// `w_h(k_0 … k_{B-1}) = Int(k_{h+1} k_0 … k_h k_{h+2} … k_{B-1})`.
pub fn weight_fn(h: usize, k: u64, b: usize) -> Result<u64> {
    check_pattern_block(b)?;
    if h > b - 2 {
        return Err(Error::out_of_range(
            "h",
            format!("{h} not in 0..={}", b - 2),
        ));
    }
    if k >> b != 0 {
        return Err(Error::out_of_range("k", format!("{k} is not below 2^{b}")));
    }
    Ok(permute(h, k, b))
}

fn permute(h: usize, k: u64, b: usize) -> u64 {
    let low_bits = b - h - 2;
    let top = k >> low_bits; // k_0 … k_{h+1}
    let low = k & ((1u64 << low_bits) - 1);
    let rotated = ((top & 1) << (h + 1)) | (top >> 1);
    (rotated << low_bits) | low
}

/// Penalty weight on remainder indicator `γ_{n_B+r}` for unit `y_{·,h}`.
pub fn penalty_weight(r: usize, h: usize, b: usize) -> i64 {
    if r == 0 {
        -(1i64 << (b - 2))
    } else if r == h + 1 {
        -(1i64 << (b - 1))
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Corrected,
    Uncorrected,
}

fn check_approx_block(n: usize, b: usize) -> Result<()> {
    if b < 3 || b > n {
        return Err(Error::out_of_range(
            "B",
            format!("{b} not in 3..={n} (n={n})"),
        ));
    }
    if b > MAX_BLOCK {
        return Err(Error::Capacity(b));
    }
    Ok(())
}

/// Builds the decoder network. Layer widths for `B = 2^K`:
/// corrected `n_B+B, (B-1)D+1, D+1, 2D, D`; uncorrected `n_B+B, (B-1)D, D`.
pub fn approx_decoder_net(
    set: &VectorSet,
    b: usize,
    variant: Variant,
) -> Result<(LayeredNet, PatternStats)> {
    let n = set.len();
    check_approx_block(n, b)?;
    let stats = count_patterns(set, b)?;
    let dim = set.dim();
    let d = code_width(n);
    let n_blocks = blocks(n, b);
    let gamma = n_blocks + b;
    let mask = match variant {
        Variant::Corrected => stats.a_value(),
        Variant::Uncorrected => 0,
    };

    let mut layers = build_gamma_layer(n, b, d)?;

    let mut y_layer: Layer = Vec::with_capacity((b - 1) * dim + 1);
    for j in 0..dim {
        let patterns: Vec<u64> = (0..n_blocks)
            .map(|i| block_pattern(set, b, i, j) ^ mask)
            .collect();
        for h in 0..b - 1 {
            let mut weights = Vec::with_capacity(gamma);
            weights.extend(patterns.iter().map(|&p| permute(h, p, b) as i64));
            weights.extend((0..b).map(|r| penalty_weight(r, h, b)));
            y_layer.push(ThresholdUnit::new(weights, 0));
        }
    }
    let y_count = y_layer.len();
    if variant == Variant::Corrected {
        // γ' = [Σ_h a_h γ_{n_B+h} ≥ 1]
        let mut weights = vec![0i64; n_blocks];
        weights.extend((0..b).map(|h| ((mask >> (b - 1 - h)) & 1) as i64));
        y_layer.push(ThresholdUnit::new(weights, 1));
    }
    let y_width = y_layer.len();
    layers.push(y_layer);

    let mut z_layer: Layer = (0..dim)
        .map(|j| {
            let weights = (0..y_width)
                .map(|i| (i < y_count && i / (b - 1) == j) as i64)
                .collect();
            ThresholdUnit::new(weights, (b - 1) as i64)
        })
        .collect();

    if variant == Variant::Corrected {
        // γ'' copies γ' so it sits next to z_j
        let mut copy = vec![0i64; y_width];
        copy[y_count] = 1;
        z_layer.push(ThresholdUnit::new(copy, 1));
        layers.push(z_layer);

        let mut xor_halves: Layer = Vec::with_capacity(2 * dim);
        for j in 0..dim {
            for sign in [1i64, -1] {
                let mut weights = vec![0i64; dim + 1];
                weights[j] = sign;
                weights[dim] = -sign;
                xor_halves.push(ThresholdUnit::new(weights, 1));
            }
        }
        layers.push(xor_halves);
        let out = (0..dim)
            .map(|j| {
                let weights = (0..2 * dim).map(|i| (i / 2 == j) as i64).collect();
                ThresholdUnit::new(weights, 1)
            })
            .collect();
        layers.push(out);
    } else {
        layers.push(z_layer);
    }
    Ok((LayeredNet::new(d, layers)?, stats))
}

fn bundle(set: &VectorSet, b: usize, variant: Variant) -> Result<CodecBundle> {
    let (decoder, stats) = approx_decoder_net(set, b, variant)?;
    let (mode, mask_a, pattern_c) = match variant {
        Variant::Corrected => (Mode::Approx, stats.a, stats.c),
        Variant::Uncorrected => (
            Mode::ApproxUncorrected,
            BitVec::zeros(b),
            BitVec::from_int(error_pattern(b), b)?,
        ),
    };
    let bundle = CodecBundle {
        mode,
        n: set.len(),
        dim: set.dim(),
        code_width: set.code_width(),
        block: b,
        encoder: encoder_for(set)?,
        decoder,
        mask_a: Some(mask_a),
        pattern_c: Some(pattern_c),
    };
    debug_assert!(bundle.validate().is_ok());
    Ok(bundle)
}

/// Corrected approximate codec; `3 ≤ b ≤ min(n, 32)`.
pub fn build_approx_decoder(set: &VectorSet, b: usize) -> Result<CodecBundle> {
    bundle(set, b, Variant::Corrected)
}

/// Approximate codec without the mask transform or XOR stage.
pub fn build_approx_decoder_uncorrected(set: &VectorSet, b: usize) -> Result<CodecBundle> {
    bundle(set, b, Variant::Uncorrected)
}

pub fn build_approx_decoder_b3(set: &VectorSet) -> Result<CodecBundle> {
    if set.len() < 3 {
        return Err(Error::out_of_range("n", format!("{} < 3", set.len())));
    }
    build_approx_decoder(set, 3)
}

/// Expected decoder output for code `k` when blocks with pattern `error` decode
/// with bit flips at offset 0.
pub fn predict_with_pattern(set: &VectorSet, b: usize, error: u64, k: usize) -> Result<BitVec> {
    if k >= set.len() {
        return Err(Error::out_of_range(
            "k",
            format!("{k} is not below n={}", set.len()),
        ));
    }
    let mut out = set.get(k).clone();
    if k % b == 0 {
        for j in 0..set.dim() {
            if block_pattern(set, b, k / b, j) == error {
                out.set(j, !out.get(j));
            }
        }
    }
    Ok(out)
}

/// Expected corrected-decoder output for code `k`: `x^k` with bit `j` flipped iff
/// `k ≡ 0 (mod B)` and the pattern at `(j, ⌊k/B⌋)` is `c`.
pub fn predict_output(set: &VectorSet, b: usize, stats: &PatternStats, k: usize) -> Result<BitVec> {
    if stats.block != b {
        return Err(Error::DimensionMismatch {
            expected: b,
            actual: stats.block,
        });
    }
    predict_with_pattern(set, b, stats.c_value(), k)
}

fn bits3(v: u64) -> String {
    format!("{v:03b}")
}

/// Eight-column instance whose column `j` carries pattern `j` in its single block.
fn all_patterns_b3() -> Result<VectorSet> {
    let rows = (0..3)
        .map(|r| BitVec::new((0..8u64).map(|j| (j >> (2 - r)) & 1 == 1).collect()))
        .collect();
    VectorSet::new(rows)
}

fn traces(net: &LayeredNet, n: usize) -> Result<Vec<Vec<BitVec>>> {
    (0..n)
        .map(|k| {
            Ok(net
                .eval_trace(&BitVec::from_int(k as u64, code_width(n))?)?
                .1)
        })
        .collect()
}

fn column(traces: &[Vec<BitVec>], layer: usize, unit: usize) -> String {
    traces
        .iter()
        .map(|t| if t[layer].get(unit) { '1' } else { '0' })
        .collect()
}

/// Weight/activation table for the uncorrected `B = 3` decoder, one row per
/// pattern: `pattern & w_0 & w_1 & y_0 & y_1 & z \\`, values read off the built
/// network and its simulation.
pub fn regenerate_weight_table() -> Result<Vec<String>> {
    let set = all_patterns_b3()?;
    let (net, _) = approx_decoder_net(&set, 3, Variant::Uncorrected)?;
    let y_layer = net.layers().len() - 2;
    let z_layer = net.layers().len() - 1;
    let t = traces(&net, 3)?;
    Ok((0..8)
        .map(|j| {
            let units = &net.layers()[y_layer];
            let w0 = units[2 * j].weights[0] as u64;
            let w1 = units[2 * j + 1].weights[0] as u64;
            format!(
                "{} & {} & {} & {} & {} & {} \\\\",
                bits3(j as u64),
                bits3(w0),
                bits3(w1),
                column(&t, y_layer, 2 * j),
                column(&t, y_layer, 2 * j + 1),
                column(&t, z_layer, j),
            )
        })
        .collect())
}

/// Corrected `B = 3` decoder with `c = 000`, one row per pattern:
/// `pattern & χ_a(pattern) & z & z' \\`.
pub fn regenerate_correction_table() -> Result<Vec<String>> {
    let set = all_patterns_b3()?;
    let bundle = build_approx_decoder(&set, 3)?;
    let a = bundle.mask_a.clone().expect("approx bundle has a mask");
    let net = &bundle.decoder;
    let z_layer = net.layers().len() - 3;
    let out_layer = net.layers().len() - 1;
    let t = traces(net, 3)?;
    (0..8u64)
        .map(|j| {
            let p = BitVec::from_int(j, 3)?;
            Ok(format!(
                "{} & {} & {} & {} \\\\",
                p,
                chi(&a, &p)?,
                column(&t, z_layer, j as usize),
                column(&t, out_layer, j as usize),
            ))
        })
        .collect()
}
