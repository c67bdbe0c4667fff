use ndarray::{Array1, Array2, Zip};
use serde::{Deserialize, Serialize};

use super::{Gradients, Mlp, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Adam with bias-corrected first and second moments.
#[derive(Debug, Clone)]
pub struct Adam<F> {
    config: AdamConfig,
    step: i32,
    m_weights: Vec<Array2<F>>,
    v_weights: Vec<Array2<F>>,
    m_biases: Vec<Array1<F>>,
    v_biases: Vec<Array1<F>>,
}

impl<F: Real> Adam<F> {
    pub fn new(config: AdamConfig, net: &Mlp<F>) -> Self {
        let zeros = Gradients::zeros_like(net);
        Adam {
            config,
            step: 0,
            m_weights: zeros.weights.clone(),
            v_weights: zeros.weights,
            m_biases: zeros.biases.clone(),
            v_biases: zeros.biases,
        }
    }

    pub fn config(&self) -> &AdamConfig {
        &self.config
    }

    pub fn steps_taken(&self) -> i32 {
        self.step
    }

    pub fn step(&mut self, net: &mut Mlp<F>, grads: &Gradients<F>) {
        self.step += 1;
        let c = self.config;
        let b1 = F::from_f64(c.beta1);
        let b2 = F::from_f64(c.beta2);
        let one = F::one();
        let bias1 = one - b1.powi(self.step);
        let bias2 = one - b2.powi(self.step);
        let lr = F::from_f64(c.learning_rate);
        let eps = F::from_f64(c.epsilon);

        let update = |p: &mut F, g: &F, m: &mut F, v: &mut F| {
            *m = b1 * *m + (one - b1) * *g;
            *v = b2 * *v + (one - b2) * *g * *g;
            let m_hat = *m / bias1;
            let v_hat = *v / bias2;
            *p -= lr * m_hat / (v_hat.sqrt() + eps);
        };

        for (i, layer) in net.layers_mut().iter_mut().enumerate() {
            Zip::from(&mut layer.weights)
                .and(&grads.weights[i])
                .and(&mut self.m_weights[i])
                .and(&mut self.v_weights[i])
                .for_each(update);
            Zip::from(&mut layer.biases)
                .and(&grads.biases[i])
                .and(&mut self.m_biases[i])
                .and(&mut self.v_biases[i])
                .for_each(update);
        }
    }
}
