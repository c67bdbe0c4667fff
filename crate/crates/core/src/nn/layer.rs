use ndarray::{Array1, Array2, ArrayView2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Sigmoid,
}

impl Activation {
    pub fn apply<F: Real>(self, z: F) -> F {
        match self {
            Activation::Relu => {
                if z > F::zero() {
                    z
                } else {
                    F::zero()
                }
            }
            Activation::Sigmoid => F::one() / (F::one() + (-z).exp()),
        }
    }

    /// Derivative expressed through the activation value `a = f(z)`.
    pub fn derivative_from_output<F: Real>(self, a: F) -> F {
        match self {
            Activation::Relu => {
                if a > F::zero() {
                    F::one()
                } else {
                    F::zero()
                }
            }
            Activation::Sigmoid => a * (F::one() - a),
        }
    }
}

/// One fully connected layer, `y = f(W x + b)` with `W` stored `[out x in]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer<F> {
    pub weights: Array2<F>,
    pub biases: Array1<F>,
    pub activation: Activation,
}

impl<F: Real> DenseLayer<F> {
    pub fn zeros(inputs: usize, outputs: usize, activation: Activation) -> Self {
        DenseLayer {
            weights: Array2::zeros((outputs, inputs)),
            biases: Array1::zeros(outputs),
            activation,
        }
    }

    /// Uniform init in `±sqrt(6 / (fan_in + fan_out))`, zero biases.
    ///
    /// Samples are drawn in `f64` so an `f32` and an `f64` layer built from the
    /// same RNG state agree up to rounding.
    pub fn glorot_uniform<R: Rng>(
        inputs: usize,
        outputs: usize,
        activation: Activation,
        rng: &mut R,
    ) -> Self {
        let limit = (6.0 / (inputs + outputs) as f64).sqrt();
        let weights = Array2::from_shape_simple_fn((outputs, inputs), || {
            F::from_f64(rng.random_range(-limit..=limit))
        });
        DenseLayer {
            weights,
            biases: Array1::zeros(outputs),
            activation,
        }
    }

    pub fn inputs(&self) -> usize {
        self.weights.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.weights.nrows()
    }

    pub fn param_count(&self) -> usize {
        self.weights.len() + self.biases.len()
    }

    /// Forward pass for a batch laid out one sample per row.
    pub fn forward_batch(&self, input: ArrayView2<'_, F>) -> Array2<F> {
        let mut z = input.dot(&self.weights.t());
        z += &self.biases;
        let act = self.activation;
        z.mapv_inplace(|v| act.apply(v));
        z
    }

    pub fn is_finite(&self) -> bool {
        self.weights
            .iter()
            .chain(self.biases.iter())
            .all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sigmoid_at_zero_is_half() {
        assert_eq!(Activation::Sigmoid.apply(0.0f64), 0.5);
    }

    #[test]
    fn relu_clips_negative() {
        assert_eq!(Activation::Relu.apply(-3.0f32), 0.0);
        assert_eq!(Activation::Relu.apply(2.5f32), 2.5);
        assert_eq!(Activation::Relu.derivative_from_output(0.0f32), 0.0);
    }

    #[test]
    fn forward_matches_hand_computation() {
        let layer = DenseLayer {
            weights: array![[1.0, 2.0], [-1.0, 0.5]],
            biases: array![0.5, -1.0],
            activation: Activation::Relu,
        };
        let out = layer.forward_batch(array![[1.0f64, 1.0]].view());
        assert_eq!(out, array![[3.5, 0.0]]);
    }

    #[test]
    fn glorot_stays_within_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let layer = DenseLayer::<f32>::glorot_uniform(40, 20, Activation::Relu, &mut rng);
        let limit = (6.0f32 / 60.0).sqrt();
        assert!(layer.weights.iter().all(|w| w.abs() <= limit));
        assert!(layer.biases.iter().all(|&b| b == 0.0));
        assert_eq!(layer.weights.dim(), (20, 40));
    }
}
