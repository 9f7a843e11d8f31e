//! Closed-form size and width bounds.

use std::fmt;

use crate::error::{Error, Result};
use crate::perfect::blocks;
use crate::vectors::code_width;

/// Decoder-size lower bound `√((D-1)/(3d))·√n` and whether it reaches `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    pub meaningful: bool,
}

pub fn lower_bound(n: u64, dim: u64, d: u64) -> LowerBound {
    let value = if n == 0 || dim < 1 || d == 0 {
        0.0
    } else {
        ((dim - 1) as f64 / (3 * d) as f64).sqrt() * (n as f64).sqrt()
    };
    LowerBound {
        value,
        meaningful: value >= dim as f64,
    }
}

/// Exact test of `size ≥ √((D-1)/(3d))·√n`, i.e. `3d·size² ≥ (D-1)·n`.
pub fn size_meets_lower_bound(size: u64, n: u64, dim: u64, d: u64) -> bool {
    if d == 0 {
        return false;
    }
    3 * d as u128 * (size as u128).pow(2) >= (dim.saturating_sub(1) as u128) * n as u128
}

/// The lower bound only applies when `d ≤ (D-1)/3`.
pub fn lower_bound_applies(dim: u64, d: u64) -> bool {
    3 * d + 1 <= dim
}

/// `N + dN² > n(D-1)/3`, evaluated as `3(N + dN²) > n(D-1)`.
pub fn counting_inequality(size: u64, n: u64, d: u64, dim: u64) -> bool {
    let size = size as u128;
    3 * (size + d as u128 * size * size) > n as u128 * dim.saturating_sub(1) as u128
}

pub fn perfect_width(n: usize, dim: usize, b: usize) -> Result<usize> {
    if b < 2 {
        return Err(Error::out_of_range("B", format!("{b} < 2")));
    }
    Ok((blocks(n, b) + b).max(b * dim))
}

pub fn approx_width(n: usize, dim: usize, b: usize) -> Result<usize> {
    if b < 3 {
        return Err(Error::out_of_range("B", format!("{b} < 3")));
    }
    Ok((blocks(n, b) + b).max((b - 1) * dim + 1))
}

pub fn width_formulas(n: usize, dim: usize, b: usize) -> (Result<usize>, Result<usize>) {
    (perfect_width(n, dim, b), approx_width(n, dim, b))
}

/// Size of the perfect decoder: `(⌈n/B⌉+B) + BD + D` for `B = 2^K`.
pub fn perfect_size(n: usize, dim: usize, b: usize) -> usize {
    blocks(n, b) + b + b * dim + dim
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub dim: usize,
    pub d: usize,
    pub b: usize,
    pub lower_bound: f64,
    pub meaningful: bool,
    pub perfect_width: usize,
    pub approx_width: Option<usize>,
    /// Decoder size `N` used in the counting inequality.
    pub size: usize,
    /// `N + dN²`.
    pub counting_lhs: u128,
    /// `n(D-1)`; the inequality compares `counting_lhs` with a third of this.
    pub counting_rhs_times3: u128,
    pub applicable: bool,
}

impl BoundsReport {
    /// `d` defaults to `⌈log2 n⌉`; `N` is the perfect decoder size for these parameters.
    pub fn new(n: usize, dim: usize, d: Option<usize>, b: usize) -> Result<Self> {
        if n == 0 || dim == 0 {
            return Err(Error::out_of_range("n/D", "must be positive"));
        }
        let d = d.unwrap_or_else(|| code_width(n));
        let lb = lower_bound(n as u64, dim as u64, d as u64);
        let size = perfect_size(n, dim, b);
        let s = size as u128;
        Ok(BoundsReport {
            n,
            dim,
            d,
            b,
            lower_bound: lb.value,
            meaningful: lb.meaningful,
            perfect_width: perfect_width(n, dim, b)?,
            approx_width: approx_width(n, dim, b).ok(),
            size,
            counting_lhs: s + d as u128 * s * s,
            counting_rhs_times3: n as u128 * (dim as u128 - 1),
            applicable: lower_bound_applies(dim as u64, d as u64),
        })
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let approx = self
            .approx_width
            .map_or_else(|| "n/a".to_string(), |w| w.to_string());
        let rows = [
            ("n", self.n.to_string()),
            ("D", self.dim.to_string()),
            ("d", self.d.to_string()),
            ("B", self.b.to_string()),
            ("lower_bound", format_real(self.lower_bound)),
            ("meaningful", (self.meaningful as u8).to_string()),
            ("applicable", (self.applicable as u8).to_string()),
            ("perfect_width", self.perfect_width.to_string()),
            ("approx_width", approx),
            ("decoder_size", self.size.to_string()),
            ("counting_lhs", self.counting_lhs.to_string()),
            ("counting_rhs", format!("{}/3", self.counting_rhs_times3)),
        ];
        let pad = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            writeln!(f, "{k:>pad$}={v}")?;
        }
        Ok(())
    }
}

/// Shortest decimal with at most six fractional digits, trailing zeros trimmed.
fn format_real(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}
