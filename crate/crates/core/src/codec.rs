//! Encoder/decoder bundles and the codec manifest text format.
//!
//! ```text
//! CODEC mode=<perfect|approx|approx-uncorrected> n=<n> D=<D> d=<d> B=<B>[ c=<bits> a=<bits>]
//! ENCODER
//! <netlist, or the single line POSITIONAL>
//! DECODER
//! <netlist>
//! ```

use std::fmt;
use std::str::FromStr;

use crate::bitvec::BitVec;
use crate::error::{Error, Result};
use crate::net::LayeredNet;
use crate::netlist::{parse_netlist_lines, split_lines, write_netlist_into};
use crate::vectors::code_width;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Perfect,
    Approx,
    /// Approximate decoder without the mask transform and XOR correction stage.
    ApproxUncorrected,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Perfect => "perfect",
            Mode::Approx => "approx",
            Mode::ApproxUncorrected => "approx-uncorrected",
        }
    }

    pub fn is_approx(self) -> bool {
        !matches!(self, Mode::Perfect)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perfect" => Ok(Mode::Perfect),
            "approx" => Ok(Mode::Approx),
            "approx-uncorrected" => Ok(Mode::ApproxUncorrected),
            other => Err(Error::out_of_range(
                "mode",
                format!("unknown mode {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Encoder {
    Net(LayeredNet),
    /// Vector `k` is encoded as the code of `k`; used for sets with repeated rows.
    Positional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodecBundle {
    pub mode: Mode,
    pub n: usize,
    pub dim: usize,
    pub code_width: usize,
    pub block: usize,
    pub encoder: Encoder,
    pub decoder: LayeredNet,
    /// Correction mask `a`; for the uncorrected variant this is all zeros.
    pub mask_a: Option<BitVec>,
    /// Pattern whose blocks decode with an error at offset 0: the least frequent
    /// pattern `c` when corrected, `011…1` when uncorrected.
    pub pattern_c: Option<BitVec>,
}

impl CodecBundle {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.dim == 0 || self.block == 0 {
            return Err(Error::out_of_range("n/D/B", "must be positive"));
        }
        if self.code_width != code_width(self.n) {
            return Err(Error::out_of_range(
                "d",
                format!(
                    "expected {} for n={}, got {}",
                    code_width(self.n),
                    self.n,
                    self.code_width
                ),
            ));
        }
        if self.decoder.input_dim() != self.code_width {
            return Err(Error::DimensionMismatch {
                expected: self.code_width,
                actual: self.decoder.input_dim(),
            });
        }
        if self.decoder.output_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: self.decoder.output_dim(),
            });
        }
        if let Encoder::Net(enc) = &self.encoder {
            if enc.input_dim() != self.dim || enc.output_dim() != self.code_width {
                return Err(Error::MalformedNet(format!(
                    "encoder maps {} -> {}, expected {} -> {}",
                    enc.input_dim(),
                    enc.output_dim(),
                    self.dim,
                    self.code_width
                )));
            }
        }
        let approx = self.mode.is_approx();
        for (field, value) in [("a", &self.mask_a), ("c", &self.pattern_c)] {
            match value {
                Some(bits) if !approx => {
                    return Err(Error::out_of_range(
                        field,
                        format!("{bits} given for a perfect codec"),
                    ))
                }
                Some(bits) if bits.dim() != self.block => {
                    return Err(Error::DimensionMismatch {
                        expected: self.block,
                        actual: bits.dim(),
                    })
                }
                None if approx => {
                    return Err(Error::out_of_range(
                        field,
                        "required for approximate codecs",
                    ))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn code(&self, k: usize) -> Result<BitVec> {
        if k >= self.n {
            return Err(Error::out_of_range(
                "k",
                format!("{k} is not below n={}", self.n),
            ));
        }
        BitVec::from_int(k as u64, self.code_width)
    }

    pub fn encode(&self, x: &BitVec) -> Result<BitVec> {
        match &self.encoder {
            Encoder::Net(net) => net.eval(x),
            Encoder::Positional => Err(Error::out_of_range(
                "encoder",
                "positional codec has no threshold encoder",
            )),
        }
    }

    pub fn decode(&self, code: &BitVec) -> Result<BitVec> {
        self.decoder.eval(code)
    }

    pub fn header(&self) -> String {
        let mut line = format!(
            "CODEC mode={} n={} D={} d={} B={}",
            self.mode, self.n, self.dim, self.code_width, self.block
        );
        if let (Some(c), Some(a)) = (&self.pattern_c, &self.mask_a) {
            line.push_str(&format!(" c={c} a={a}"));
        }
        line
    }

    pub fn to_manifest(&self) -> String {
        let mut out = self.header();
        out.push_str("\nENCODER\n");
        match &self.encoder {
            Encoder::Net(net) => write_netlist_into(net, &mut out),
            Encoder::Positional => out.push_str("POSITIONAL\n"),
        }
        out.push_str("DECODER\n");
        write_netlist_into(&self.decoder, &mut out);
        out
    }

    pub fn from_manifest(text: &str) -> Result<Self> {
        let lines = split_lines(text)?;
        let header = lines
            .first()
            .ok_or_else(|| Error::parse(1, "empty manifest"))?;
        let mut toks = header.split(' ');
        if toks.next() != Some("CODEC") {
            return Err(Error::parse(1, "expected CODEC header"));
        }
        let mut kv: Vec<(&str, &str)> = Vec::new();
        for tok in toks {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse(1, format!("expected key=value, got {tok:?}")))?;
            kv.push((k, v));
        }
        let keys: Vec<&str> = kv.iter().map(|(k, _)| *k).collect();
        let expected_keys: &[&str] = if keys.len() == 5 {
            &["mode", "n", "D", "d", "B"]
        } else {
            &["mode", "n", "D", "d", "B", "c", "a"]
        };
        if keys != expected_keys {
            return Err(Error::parse(
                1,
                format!("unexpected header fields {keys:?}"),
            ));
        }
        let num = |i: usize| -> Result<usize> {
            let v = kv[i].1;
            if v.is_empty()
                || (v.len() > 1 && v.starts_with('0'))
                || !v.bytes().all(|b| b.is_ascii_digit())
            {
                return Err(Error::parse(
                    1,
                    format!("{}: not a canonical integer", kv[i].0),
                ));
            }
            v.parse()
                .map_err(|_| Error::parse(1, format!("{}: integer out of range", kv[i].0)))
        };
        let bits = |i: usize| -> Result<BitVec> {
            kv[i]
                .1
                .parse()
                .map_err(|_| Error::parse(1, format!("{}: not a bit string", kv[i].0)))
        };
        let mode: Mode = kv[0]
            .1
            .parse()
            .map_err(|e: Error| Error::parse(1, e.to_string()))?;
        let (pattern_c, mask_a) = if kv.len() == 7 {
            (Some(bits(5)?), Some(bits(6)?))
        } else {
            (None, None)
        };

        if lines.get(1) != Some(&"ENCODER") {
            return Err(Error::parse(2, "expected ENCODER"));
        }
        let split = lines
            .iter()
            .position(|l| *l == "DECODER")
            .ok_or_else(|| Error::parse(lines.len(), "missing DECODER section"))?;
        let enc_lines = &lines[2..split];
        let encoder = if enc_lines == ["POSITIONAL"] {
            Encoder::Positional
        } else {
            Encoder::Net(parse_netlist_lines(enc_lines, 3)?)
        };
        let decoder = parse_netlist_lines(&lines[split + 1..], split + 2)?;

        let bundle = CodecBundle {
            mode,
            n: num(1)?,
            dim: num(2)?,
            code_width: num(3)?,
            block: num(4)?,
            encoder,
            decoder,
            mask_a,
            pattern_c,
        };
        bundle
            .validate()
            .map_err(|e| Error::parse(1, e.to_string()))?;
        Ok(bundle)
    }
}
