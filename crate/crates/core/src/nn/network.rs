use ndarray::{Array1, Array2, ArrayView2, Axis, Zip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Activation, DenseLayer, Real};
use crate::error::{CtnnError, Result};

/// A stack of dense layers trained with mean-squared-error backpropagation.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp<F> {
    layers: Vec<DenseLayer<F>>,
}

/// Activations kept from a batch forward pass; `activations[0]` is the input.
#[derive(Debug, Clone)]
pub struct ForwardTrace<F> {
    pub activations: Vec<Array2<F>>,
}

impl<F: Real> ForwardTrace<F> {
    pub fn output(&self) -> &Array2<F> {
        self.activations
            .last()
            .expect("trace holds at least the input")
    }
}

/// Parameter gradients, shaped like the layers they belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<F> {
    pub weights: Vec<Array2<F>>,
    pub biases: Vec<Array1<F>>,
}

impl<F: Real> Gradients<F> {
    pub fn zeros_like(net: &Mlp<F>) -> Self {
        Gradients {
            weights: net
                .layers
                .iter()
                .map(|l| Array2::zeros(l.weights.raw_dim()))
                .collect(),
            biases: net
                .layers
                .iter()
                .map(|l| Array1::zeros(l.biases.raw_dim()))
                .collect(),
        }
    }

    /// All gradient values in layer order, weights (row-major) then biases.
    pub fn flatten(&self) -> Vec<F> {
        let mut out = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend(w.iter().copied());
            out.extend(b.iter().copied());
        }
        out
    }
}

impl<F: Real> Mlp<F> {
    /// Layers sized by `sizes`, relu on every hidden layer and sigmoid on the last.
    pub fn seeded(sizes: &[usize], seed: u64) -> Result<Self> {
        check_sizes(sizes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let last = sizes.len() - 2;
        let layers = sizes
            .windows(2)
            .enumerate()
            .map(|(i, w)| DenseLayer::glorot_uniform(w[0], w[1], activation_for(i, last), &mut rng))
            .collect();
        Ok(Mlp { layers })
    }

    /// Same shape as [`Mlp::seeded`] with every weight and bias zero.
    pub fn zeros(sizes: &[usize]) -> Result<Self> {
        check_sizes(sizes)?;
        let last = sizes.len() - 2;
        let layers = sizes
            .windows(2)
            .enumerate()
            .map(|(i, w)| DenseLayer::zeros(w[0], w[1], activation_for(i, last)))
            .collect();
        Ok(Mlp { layers })
    }

    pub fn from_layers(layers: Vec<DenseLayer<F>>) -> Result<Self> {
        if layers.is_empty() {
            return Err(CtnnError::InvalidTopology("network has no layers".into()));
        }
        for pair in layers.windows(2) {
            if pair[0].outputs() != pair[1].inputs() {
                return Err(CtnnError::InvalidTopology(format!(
                    "layer output width {} feeds layer input width {}",
                    pair[0].outputs(),
                    pair[1].inputs()
                )));
            }
        }
        for layer in &layers {
            if layer.biases.len() != layer.outputs() {
                return Err(CtnnError::InvalidTopology(
                    "bias length differs from layer output width".into(),
                ));
            }
        }
        Ok(Mlp { layers })
    }

    pub fn layers(&self) -> &[DenseLayer<F>] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [DenseLayer<F>] {
        &mut self.layers
    }

    /// Layer widths including the input, e.g. `[1568, 512, ..., 1568]`.
    pub fn topology(&self) -> Vec<usize> {
        let mut sizes = vec![self.layers[0].inputs()];
        sizes.extend(self.layers.iter().map(|l| l.outputs()));
        sizes
    }

    pub fn input_width(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn output_width(&self) -> usize {
        self.layers[self.layers.len() - 1].outputs()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(DenseLayer::param_count).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.layers.iter().all(DenseLayer::is_finite)
    }

    pub fn forward_trace(&self, input: ArrayView2<'_, F>) -> Result<ForwardTrace<F>> {
        CtnnError::check_len(self.input_width(), input.ncols())?;
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(input.to_owned());
        for layer in &self.layers {
            let next = layer.forward_batch(activations.last().unwrap().view());
            activations.push(next);
        }
        Ok(ForwardTrace { activations })
    }

    /// Batch forward pass returning only the output layer.
    pub fn forward_batch(&self, input: ArrayView2<'_, F>) -> Result<Array2<F>> {
        CtnnError::check_len(self.input_width(), input.ncols())?;
        let mut current = self.layers[0].forward_batch(input);
        for layer in &self.layers[1..] {
            current = layer.forward_batch(current.view());
        }
        Ok(current)
    }

    /// Mean squared error of the batch output against `target`, averaged
    /// over every element of the batch.
    pub fn batch_loss(&self, input: ArrayView2<'_, F>, target: ArrayView2<'_, F>) -> Result<F> {
        let out = self.forward_batch(input)?;
        if out.dim() != target.dim() {
            return Err(CtnnError::LengthMismatch {
                expected: out.len(),
                actual: target.len(),
            });
        }
        Ok(squared_error_mean(out.view(), target))
    }

    /// Backpropagates the batch MSE through a recorded forward pass.
    ///
    /// Returns the loss and the gradient of that loss with respect to every
    /// weight and bias.
    pub fn backward(
        &self,
        trace: &ForwardTrace<F>,
        target: ArrayView2<'_, F>,
    ) -> Result<(F, Gradients<F>)> {
        let output = trace.output();
        if output.dim() != target.dim() {
            return Err(CtnnError::LengthMismatch {
                expected: output.len(),
                actual: target.len(),
            });
        }
        let loss = squared_error_mean(output.view(), target);
        let scale = F::from_f64(2.0 / output.len() as f64);
        let mut delta = (output - &target) * scale;

        let n = self.layers.len();
        let mut weights = Vec::with_capacity(n);
        let mut biases = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let layer = &self.layers[i];
            let act = layer.activation;
            Zip::from(&mut delta)
                .and(&trace.activations[i + 1])
                .for_each(|d, &a| *d *= act.derivative_from_output(a));
            weights.push(delta.t().dot(&trace.activations[i]));
            biases.push(delta.sum_axis(Axis(0)));
            if i > 0 {
                delta = delta.dot(&layer.weights);
            }
        }
        weights.reverse();
        biases.reverse();
        Ok((loss, Gradients { weights, biases }))
    }

    /// Calls `f` on every parameter in layer order, weights (row-major) then biases.
    pub fn for_each_param_mut(&mut self, mut f: impl FnMut(&mut F)) {
        for layer in &mut self.layers {
            layer.weights.iter_mut().for_each(&mut f);
            layer.biases.iter_mut().for_each(&mut f);
        }
    }

    /// Replaces every bias with a seeded uniform draw from `±scale`.
    ///
    /// Zero biases can leave relu units sitting exactly on their kink, where
    /// finite differences disagree with any subgradient; gradient checks use
    /// this to move off it.
    pub fn randomize_biases(&mut self, scale: f64, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for layer in &mut self.layers {
            layer
                .biases
                .mapv_inplace(|_| F::from_f64(rng.random_range(-scale..=scale)));
        }
    }

    pub fn cast<G: Real>(&self) -> Mlp<G> {
        Mlp {
            layers: self
                .layers
                .iter()
                .map(|l| DenseLayer {
                    weights: l.weights.mapv(|v| G::from_f64(v.to_f64())),
                    biases: l.biases.mapv(|v| G::from_f64(v.to_f64())),
                    activation: l.activation,
                })
                .collect(),
        }
    }
}

fn activation_for(index: usize, last: usize) -> Activation {
    if index == last {
        Activation::Sigmoid
    } else {
        Activation::Relu
    }
}

fn check_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.len() < 2 {
        return Err(CtnnError::InvalidTopology(
            "need at least an input and an output width".into(),
        ));
    }
    if sizes.contains(&0) {
        return Err(CtnnError::InvalidTopology("layer width 0".into()));
    }
    Ok(())
}

fn squared_error_mean<F: Real>(a: ArrayView2<'_, F>, b: ArrayView2<'_, F>) -> F {
    let mut sum = 0.0f64;
    Zip::from(&a).and(&b).for_each(|&x, &y| {
        let d = (x - y).to_f64();
        sum += d * d;
    });
    F::from_f64(sum / a.len() as f64)
}
