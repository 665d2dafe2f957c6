//! Fully connected feedforward network whose parameters live in one flat
//! vector, so a particle position can be used directly as a set of weights.
//!
//! Flat layout, per adjacent layer pair and destination-major: the weights
//! into destination unit 0 in source order followed by its bias, then unit 1,
//! and so on. Layer pairs follow each other input side first.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Per-unit nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Transfer {
    Linear,
    /// Unit step; `threshold(0) = 1`.
    Threshold,
    /// Logistic `1 / (1 + e^-x)`.
    Sigmoid,
}

impl Transfer {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Transfer::Linear => x,
            Transfer::Threshold => {
                if x >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Transfer::Sigmoid => {
                // split on sign so exp never overflows
                if x >= 0.0 {
                    1.0 / (1.0 + libm::exp(-x))
                } else {
                    let e = libm::exp(x);
                    e / (1.0 + e)
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Transfer::Linear => "linear",
            Transfer::Threshold => "threshold",
            Transfer::Sigmoid => "sigmoid",
        }
    }
}

impl fmt::Display for Transfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Transfer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Transfer::Linear),
            "threshold" => Ok(Transfer::Threshold),
            "sigmoid" => Ok(Transfer::Sigmoid),
            _ => Err(Error::UnknownTransfer(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawTopology"))]
pub struct NetworkTopology {
    layer_sizes: Vec<usize>,
    hidden_transfer: Transfer,
    output_transfer: Transfer,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawTopology {
    layer_sizes: Vec<usize>,
    hidden_transfer: Transfer,
    output_transfer: Transfer,
}

#[cfg(feature = "serde")]
impl TryFrom<RawTopology> for NetworkTopology {
    type Error = Error;

    fn try_from(raw: RawTopology) -> Result<Self> {
        Self::new(raw.layer_sizes, raw.hidden_transfer, raw.output_transfer)
    }
}

impl NetworkTopology {
    pub fn new(
        layer_sizes: Vec<usize>,
        hidden_transfer: Transfer,
        output_transfer: Transfer,
    ) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::InvalidTopology(
                "need at least an input and an output layer",
            ));
        }
        if layer_sizes.contains(&0) {
            return Err(Error::InvalidTopology(
                "every layer needs at least one unit",
            ));
        }
        Ok(Self {
            layer_sizes,
            hidden_transfer,
            output_transfer,
        })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn inputs(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn outputs(&self) -> usize {
        self.layer_sizes[self.layer_sizes.len() - 1]
    }

    pub fn hidden_transfer(&self) -> Transfer {
        self.hidden_transfer
    }

    pub fn output_transfer(&self) -> Transfer {
        self.output_transfer
    }

    /// Number of weights plus biases, i.e. the PSO search dimension.
    pub fn dimension(&self) -> usize {
        self.layer_sizes
            .windows(2)
            .map(|pair| (pair[0] + 1) * pair[1])
            .sum()
    }

    fn widest(&self) -> usize {
        self.layer_sizes.iter().copied().max().unwrap_or(0)
    }

    fn check_len(&self, weights: &[f64]) -> Result<()> {
        let expected = self.dimension();
        if weights.len() != expected {
            return Err(Error::Shape {
                what: "weight vector",
                expected,
                actual: weights.len(),
            });
        }
        Ok(())
    }

    /// Splits a flat parameter vector into one view per layer pair.
    pub fn unflatten<'w>(&self, weights: &'w [f64]) -> Result<Vec<LayerView<'w>>> {
        self.check_len(weights)?;
        let mut rest = weights;
        let mut views = Vec::with_capacity(self.layer_sizes.len() - 1);
        for pair in self.layer_sizes.windows(2) {
            let (inputs, outputs) = (pair[0], pair[1]);
            let (params, tail) = rest.split_at((inputs + 1) * outputs);
            views.push(LayerView {
                inputs,
                outputs,
                params,
            });
            rest = tail;
        }
        Ok(views)
    }

    /// Runs the network on one input vector.
    pub fn forward(&self, weights: &[f64], input: &[f64]) -> Result<Vec<f64>> {
        let mut scratch = Scratch::new(self);
        self.forward_with(weights, input, &mut scratch)
            .map(|out| out.to_vec())
    }

    /// Allocation-free variant of [`forward`](Self::forward); `scratch` must
    /// come from [`Scratch::new`] for this topology (or a wider one).
    pub fn forward_with<'s>(
        &self,
        weights: &[f64],
        input: &[f64],
        scratch: &'s mut Scratch,
    ) -> Result<&'s [f64]> {
        self.check_len(weights)?;
        if input.len() != self.inputs() {
            return Err(Error::Shape {
                what: "network input",
                expected: self.inputs(),
                actual: input.len(),
            });
        }
        let Scratch { current, next } = scratch;
        current.clear();
        current.extend_from_slice(input);

        let last = self.layer_sizes.len() - 2;
        let mut offset = 0;
        for (layer, pair) in self.layer_sizes.windows(2).enumerate() {
            let (inputs, outputs) = (pair[0], pair[1]);
            let transfer = if layer == last {
                self.output_transfer
            } else {
                self.hidden_transfer
            };
            next.clear();
            for unit in weights[offset..offset + (inputs + 1) * outputs].chunks_exact(inputs + 1) {
                let (w, bias) = unit.split_at(inputs);
                let activation = w
                    .iter()
                    .zip(current.iter())
                    .fold(bias[0], |acc, (w, x)| acc + w * x);
                next.push(transfer.apply(activation));
            }
            offset += (inputs + 1) * outputs;
            core::mem::swap(current, next);
        }
        Ok(&current[..])
    }
}

/// Reusable activation buffers for [`NetworkTopology::forward_with`].
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    current: Vec<f64>,
    next: Vec<f64>,
}

impl Scratch {
    pub fn new(topology: &NetworkTopology) -> Self {
        let width = topology.widest();
        Self {
            current: Vec::with_capacity(width),
            next: Vec::with_capacity(width),
        }
    }
}

/// Borrowed parameters of one layer pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerView<'w> {
    pub inputs: usize,
    pub outputs: usize,
    params: &'w [f64],
}

impl<'w> LayerView<'w> {
    pub fn weight(&self, dst: usize, src: usize) -> f64 {
        assert!(dst < self.outputs && src < self.inputs);
        self.params[dst * (self.inputs + 1) + src]
    }

    pub fn bias(&self, dst: usize) -> f64 {
        assert!(dst < self.outputs);
        self.params[dst * (self.inputs + 1) + self.inputs]
    }

    pub fn params(&self) -> &'w [f64] {
        self.params
    }
}

/// Inverse of [`NetworkTopology::unflatten`].
pub fn flatten(views: &[LayerView<'_>]) -> Vec<f64> {
    let mut out = Vec::with_capacity(views.iter().map(|v| v.params.len()).sum());
    for view in views {
        for dst in 0..view.outputs {
            for src in 0..view.inputs {
                out.push(view.weight(dst, src));
            }
            out.push(view.bias(dst));
        }
    }
    out
}

/// Flat parameter vector checked against a topology.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(topology: &NetworkTopology, values: Vec<f64>) -> Result<Self> {
        topology.check_len(&values)?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteWeight(i));
        }
        Ok(Self(values))
    }

    pub fn zeros(topology: &NetworkTopology) -> Self {
        Self(vec![0.0; topology.dimension()])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for WeightVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Transfer::*;

    fn topo(sizes: &[usize], hidden: Transfer, output: Transfer) -> NetworkTopology {
        NetworkTopology::new(sizes.to_vec(), hidden, output).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(topo(&[4, 8, 1], Sigmoid, Linear).dimension(), 49);
        assert_eq!(topo(&[1, 1], Linear, Linear).dimension(), 2);
        assert_eq!(topo(&[4, 8, 8, 1], Sigmoid, Linear).dimension(), 121);
    }

    #[test]
    fn invalid_topologies() {
        assert!(NetworkTopology::new(vec![3], Sigmoid, Linear).is_err());
        assert!(NetworkTopology::new(vec![3, 0, 1], Sigmoid, Linear).is_err());
    }

    #[test]
    fn transfer_values() {
        assert_eq!(Sigmoid.apply(0.0), 0.5);
        assert_eq!(Threshold.apply(-0.3), 0.0);
        assert_eq!(Threshold.apply(0.0), 1.0);
        assert_eq!(Linear.apply(-2.5), -2.5);
        // 1 / (1 + e^-2) = 0.88079707797788244...
        assert!((Sigmoid.apply(2.0) - 0.880_797_077_977_882_4).abs() < 1e-15);
        assert!((Sigmoid.apply(-2.0) - 0.119_202_922_022_117_6).abs() < 1e-15);
        assert_eq!(Sigmoid.apply(-1000.0), 0.0);
        assert_eq!(Sigmoid.apply(1000.0), 1.0);
    }

    #[test]
    fn identity_network() {
        let t = topo(&[1, 1], Linear, Linear);
        assert_eq!(t.forward(&[1.0, 0.0], &[3.7]).unwrap(), vec![3.7]);
    }

    #[test]
    fn affine_sum() {
        let t = topo(&[2, 1], Linear, Linear);
        assert_eq!(t.forward(&[1.0, 1.0, 0.5], &[1.0, 2.0]).unwrap(), vec![3.5]);
    }

    #[test]
    fn zero_hidden_weights_hand_trace() {
        let t = topo(&[2, 2, 1], Sigmoid, Linear);
        // hidden: 2 x (2 weights + bias) all zero; output: w = [1, 1], b = 0
        let mut w = vec![0.0; t.dimension()];
        w[6] = 1.0;
        w[7] = 1.0;
        assert_eq!(t.forward(&w, &[0.3, -4.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn zero_weights_sigmoid_and_linear_outputs() {
        let w = vec![0.0; 49];
        let t = topo(&[4, 8, 1], Sigmoid, Sigmoid);
        assert_eq!(t.forward(&w, &[1.0, 2.0, 3.0, 4.0]).unwrap(), vec![0.5]);
        let t = topo(&[4, 8, 1], Sigmoid, Linear);
        assert_eq!(t.forward(&w, &[1.0, 2.0, 3.0, 4.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn destination_major_layout() {
        let t = topo(&[1, 1], Linear, Linear);
        let views = t.unflatten(&[0.3, 0.7]).unwrap();
        assert_eq!(views.len(), 1);
        assert_eq!(views[0].weight(0, 0), 0.3);
        assert_eq!(views[0].bias(0), 0.7);

        let t = topo(&[2, 2, 1], Sigmoid, Linear);
        let w: Vec<f64> = (0..9).map(f64::from).collect();
        let views = t.unflatten(&w).unwrap();
        assert_eq!(views[0].weight(1, 0), 3.0);
        assert_eq!(views[0].bias(1), 5.0);
        assert_eq!(views[1].weight(0, 1), 7.0);
        assert_eq!(views[1].bias(0), 8.0);
        assert_eq!(flatten(&views), w);
    }

    #[test]
    fn shape_errors() {
        let t = topo(&[4, 8, 1], Sigmoid, Linear);
        assert_eq!(
            t.unflatten(&[0.0; 48]),
            Err(Error::Shape {
                what: "weight vector",
                expected: 49,
                actual: 48
            })
        );
        assert!(matches!(
            t.forward(&[0.0; 49], &[1.0, 2.0]),
            Err(Error::Shape {
                expected: 4,
                actual: 2,
                ..
            })
        ));
    }

    #[test]
    fn weight_vector_rejects_non_finite() {
        let t = topo(&[1, 1], Linear, Linear);
        assert_eq!(
            WeightVector::new(&t, vec![1.0, f64::INFINITY]),
            Err(Error::NonFiniteWeight(1))
        );
        assert!(WeightVector::new(&t, vec![1.0]).is_err());
        assert_eq!(WeightVector::zeros(&t).as_slice(), &[0.0, 0.0]);
    }
}
