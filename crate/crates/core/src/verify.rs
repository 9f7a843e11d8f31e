//! Verification harness: exhaustive decode checks, exact Hamming-error
//! accounting, oracle comparison and seeded instance generation.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use num_rational::Ratio;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::approx::predict_with_pattern;
use crate::bitvec::BitVec;
use crate::codec::{CodecBundle, Encoder, Mode};
use crate::error::{Error, Result};
use crate::vectors::VectorSet;

pub type Rational = Ratio<u128>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorReport {
    pub per_vector: Vec<u64>,
    pub average: Rational,
    pub bound: Rational,
    pub satisfied: bool,
}

impl ErrorReport {
    pub fn new(per_vector: Vec<u64>, bound: Rational) -> Self {
        let total: u128 = per_vector.iter().map(|&d| d as u128).sum();
        let average = Rational::new(total, per_vector.len().max(1) as u128);
        ErrorReport {
            satisfied: average <= bound,
            per_vector,
            average,
            bound,
        }
    }

    pub fn total(&self) -> u128 {
        self.per_vector.iter().map(|&d| d as u128).sum()
    }
}

impl fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, d) in self.per_vector.iter().enumerate() {
            writeln!(out, "k {k} dist {d}")?;
        }
        writeln!(
            out,
            "avg {}/{} bound {}/{} ok {}",
            self.average.numer(),
            self.average.denom(),
            self.bound.numer(),
            self.bound.denom(),
            self.satisfied as u8
        )?;
        f.write_str(&out)
    }
}

/// `D(1/(B·2^B) + 1/n) = D(n + B·2^B) / (B·2^B·n)`.
pub fn approx_error_bound(dim: usize, n: usize, b: usize) -> Rational {
    let scale = (b as u128) << b;
    Rational::new(dim as u128 * (n as u128 + scale), scale * n as u128)
}

fn check_bundle(bundle: &CodecBundle, set: &VectorSet) -> Result<()> {
    if bundle.n != set.len() {
        return Err(Error::DimensionMismatch {
            expected: bundle.n,
            actual: set.len(),
        });
    }
    if bundle.dim != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: bundle.dim,
            actual: set.dim(),
        });
    }
    Ok(())
}

fn distances<F>(set: &VectorSet, decode: F) -> Result<Vec<u64>>
where
    F: Fn(usize) -> Result<BitVec> + Sync,
{
    (0..set.len())
        .into_par_iter()
        .map(|k| Ok(decode(k)?.hamming(set.get(k))? as u64))
        .collect()
}

/// Runs every vector through encoder and decoder. The bound is 0, so the report
/// is satisfied only when every vector is reproduced exactly.
pub fn verify_perfect(bundle: &CodecBundle, set: &VectorSet) -> Result<ErrorReport> {
    check_bundle(bundle, set)?;
    let per_vector = distances(set, |k| {
        let code = match &bundle.encoder {
            Encoder::Net(net) => net.eval(set.get(k))?,
            Encoder::Positional => bundle.code(k)?,
        };
        bundle.decoder.eval(&code)
    })?;
    Ok(ErrorReport::new(per_vector, Rational::from_integer(0)))
}

/// Decodes the code of every vector and compares with the original. The bound is
/// 0 for perfect codecs and `D(1/(B·2^B) + 1/n)` otherwise.
pub fn measure_error(bundle: &CodecBundle, set: &VectorSet) -> Result<ErrorReport> {
    check_bundle(bundle, set)?;
    let per_vector = distances(set, |k| bundle.decoder.eval(&bundle.code(k)?))?;
    let bound = match bundle.mode {
        Mode::Perfect => Rational::from_integer(0),
        Mode::Approx | Mode::ApproxUncorrected => {
            approx_error_bound(bundle.dim, bundle.n, bundle.block)
        }
    };
    Ok(ErrorReport::new(per_vector, bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCheck {
    pub equivalent: bool,
    /// `(k, j)` of the first differing bit.
    pub first_mismatch: Option<(usize, usize)>,
}

/// Compares simulation of an approximate decoder with [`predict_with_pattern`]
/// for every code.
pub fn oracle_equivalence(bundle: &CodecBundle, set: &VectorSet) -> Result<OracleCheck> {
    check_bundle(bundle, set)?;
    let pattern = match (&bundle.pattern_c, bundle.mode) {
        (Some(c), Mode::Approx | Mode::ApproxUncorrected) => c.to_int()?,
        _ => {
            return Err(Error::out_of_range(
                "mode",
                "oracle comparison needs an approximate codec",
            ))
        }
    };
    let mismatches: Vec<Option<(usize, usize)>> = (0..set.len())
        .into_par_iter()
        .map(|k| -> Result<Option<(usize, usize)>> {
            let got = bundle.decoder.eval(&bundle.code(k)?)?;
            let want = predict_with_pattern(set, bundle.block, pattern, k)?;
            Ok((0..set.dim())
                .find(|&j| got.get(j) != want.get(j))
                .map(|j| (k, j)))
        })
        .collect::<Result<_>>()?;
    let first_mismatch = mismatches.into_iter().flatten().next();
    Ok(OracleCheck {
        equivalent: first_mismatch.is_none(),
        first_mismatch,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distribution {
    UniformDistinct,
    /// Every column of every block carries this pattern; `B` is its length.
    Adversarial(BitVec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    pub distribution: Distribution,
}

impl InstanceSpec {
    pub fn uniform(n: usize, dim: usize, seed: u64) -> Self {
        InstanceSpec {
            n,
            dim,
            seed,
            distribution: Distribution::UniformDistinct,
        }
    }
}

/// Draws one `dim`-bit vector: `⌈dim/64⌉` successive `next_u64` words, bit `j`
/// taken from word `j / 64` at position `63 - j % 64`.
fn draw_vector(rng: &mut ChaCha8Rng, dim: usize) -> BitVec {
    let words: Vec<u64> = (0..dim.div_ceil(64)).map(|_| rng.next_u64()).collect();
    BitVec::new(
        (0..dim)
            .map(|j| (words[j / 64] >> (63 - j % 64)) & 1 == 1)
            .collect(),
    )
}

/// Generates an instance deterministically from its seed.
///
/// Uniform sets use ChaCha8 seeded with `seed_from_u64(seed)`; vectors are drawn
/// as in `draw_vector` and a draw equal to an earlier vector is rejected and
/// redrawn. Adversarial sets set `x^k_j = p_{k mod B}` for every `j` and are
/// returned as code tables, since their rows repeat.
pub fn gen_random_set(spec: &InstanceSpec) -> Result<VectorSet> {
    if spec.n == 0 || spec.dim == 0 {
        return Err(Error::out_of_range("n/D", "must be positive"));
    }
    match &spec.distribution {
        Distribution::UniformDistinct => {
            if spec.dim < 64 && spec.n as u128 > 1u128 << spec.dim {
                return Err(Error::out_of_range(
                    "n",
                    format!(
                        "{} distinct vectors do not exist in dimension {}",
                        spec.n, spec.dim
                    ),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let mut seen = HashSet::with_capacity(spec.n);
            let mut vectors = Vec::with_capacity(spec.n);
            while vectors.len() < spec.n {
                let v = draw_vector(&mut rng, spec.dim);
                if seen.insert(v.clone()) {
                    vectors.push(v);
                }
            }
            VectorSet::new(vectors)
        }
        Distribution::Adversarial(pattern) => {
            let b = pattern.dim();
            if b == 0 {
                return Err(Error::out_of_range("pattern", "must be non-empty"));
            }
            let rows = (0..spec.n)
                .map(|k| BitVec::new(vec![pattern.get(k % b); spec.dim]))
                .collect();
            VectorSet::code_table(rows)
        }
    }
}

/// Sample mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarlo {
    pub samples: usize,
    pub mean: f64,
    pub std_error: f64,
}

impl MonteCarlo {
    pub fn from_samples(samples: &[f64]) -> Self {
        let m = samples.len();
        let mean = samples.iter().sum::<f64>() / m as f64;
        let var = if m > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64
        } else {
            0.0
        };
        MonteCarlo {
            samples: m,
            mean,
            std_error: (var / m as f64).sqrt(),
        }
    }

    /// Whether `target` lies within `sigmas` standard errors of the mean.
    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.mean - target).abs() <= sigmas * self.std_error
    }
}
