//! Layered feed-forward threshold networks.

use crate::bitvec::BitVec;
use crate::error::{Error, Result};
use crate::unit::ThresholdUnit;

pub type Layer = Vec<ThresholdUnit>;

/// A layered Boolean threshold network. Layer 0 (the input) is implicit;
/// `layers[0]` reads the input vector and each later layer reads the one before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredNet {
    input_dim: usize,
    layers: Vec<Layer>,
}

/// Size, depth and width of a layered network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetMetrics {
    /// Node count, input layer excluded.
    pub size: usize,
    /// Layer count minus one, input layer included in the count.
    pub depth: usize,
    /// Largest hidden layer; input and output layers excluded.
    pub width: usize,
}

impl LayeredNet {
    pub fn new(input_dim: usize, layers: Vec<Layer>) -> Result<Self> {
        if input_dim == 0 {
            return Err(Error::MalformedNet(
                "input dimension must be positive".into(),
            ));
        }
        let mut prev = input_dim;
        for (li, layer) in layers.iter().enumerate() {
            for (ui, unit) in layer.iter().enumerate() {
                if unit.fan_in() != prev {
                    return Err(Error::MalformedNet(format!(
                        "layer {} unit {} has {} weights, previous layer has {} nodes",
                        li + 1,
                        ui,
                        unit.fan_in(),
                        prev
                    )));
                }
            }
            prev = layer.len();
        }
        Ok(LayeredNet { input_dim, layers })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(self.input_dim, Vec::len)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer_widths(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// Mutable access for fault injection in tests and tooling. Shape changes are
    /// not re-validated, so callers must keep every fan-in intact.
    pub fn unit_mut(&mut self, layer: usize, unit: usize) -> &mut ThresholdUnit {
        &mut self.layers[layer][unit]
    }

    fn check_input(&self, input: &BitVec) -> Result<()> {
        if input.dim() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                actual: input.dim(),
            });
        }
        Ok(())
    }

    fn forward(&self, input: &BitVec, mut record: Option<&mut Vec<BitVec>>) -> BitVec {
        let mut current: Vec<bool> = input.bits().to_vec();
        let mut active = Vec::new();
        for layer in &self.layers {
            active.clear();
            active.extend(
                current
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| **b)
                    .map(|(i, _)| i),
            );
            current = layer.iter().map(|u| u.eval_active(&active)).collect();
            if let Some(trace) = record.as_deref_mut() {
                trace.push(BitVec::new(current.clone()));
            }
        }
        BitVec::new(current)
    }

    pub fn eval(&self, input: &BitVec) -> Result<BitVec> {
        self.check_input(input)?;
        Ok(self.forward(input, None))
    }

    /// Evaluates and also returns one activation vector per layer (output last).
    pub fn eval_trace(&self, input: &BitVec) -> Result<(BitVec, Vec<BitVec>)> {
        self.check_input(input)?;
        let mut trace = Vec::with_capacity(self.layers.len());
        let out = self.forward(input, Some(&mut trace));
        Ok((out, trace))
    }

    pub fn metrics(&self) -> NetMetrics {
        let widths = self.layer_widths();
        let hidden = widths.len().saturating_sub(1);
        NetMetrics {
            size: widths.iter().sum(),
            depth: widths.len(),
            width: widths[..hidden].iter().copied().max().unwrap_or(0),
        }
    }

    /// Composition: `self` followed by `next`.
    pub fn then(&self, next: &LayeredNet) -> Result<LayeredNet> {
        if next.input_dim != self.output_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.output_dim(),
                actual: next.input_dim,
            });
        }
        let mut layers = self.layers.clone();
        layers.extend(next.layers.iter().cloned());
        LayeredNet::new(self.input_dim, layers)
    }
}

/// Evaluates `net` on `input`, optionally returning the per-layer trace.
pub fn eval_net(
    net: &LayeredNet,
    input: &BitVec,
    trace: bool,
) -> Result<(BitVec, Option<Vec<BitVec>>)> {
    if trace {
        let (out, t) = net.eval_trace(input)?;
        Ok((out, Some(t)))
    } else {
        Ok((net.eval(input)?, None))
    }
}

pub fn metrics(net: &LayeredNet) -> NetMetrics {
    net.metrics()
}
