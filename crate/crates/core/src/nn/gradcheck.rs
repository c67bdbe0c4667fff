//! Central finite-difference check of the backpropagation gradients.

use ndarray::ArrayView2;

use super::{Gradients, Mlp, Real};
use crate::error::{CtnnError, Result};

/// Gradients below this magnitude are compared absolutely rather than relatively.
const RELATIVE_FLOOR: f64 = 1e-6;

/// `|a - n| / max(|a|, |n|, 1e-6)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(RELATIVE_FLOOR)
}

/// Largest [`relative_error`] over all parameters.
pub fn max_relative_error<F: Real>(analytic: &Gradients<F>, numeric: &Gradients<F>) -> f64 {
    analytic
        .flatten()
        .into_iter()
        .zip(numeric.flatten())
        .map(|(a, n)| relative_error(a.to_f64(), n.to_f64()))
        .fold(0.0, f64::max)
}

/// Estimates the auto-encoding loss gradient for every parameter by
/// `(L(p + eps) - L(p - eps)) / (2 eps)`.
pub fn numerical_gradients<F: Real>(
    net: &Mlp<F>,
    input: &[F],
    epsilon: f64,
) -> Result<Gradients<F>> {
    let x = ArrayView2::from_shape((1, input.len()), input)
        .map_err(|_| CtnnError::InvalidArgument("input shape".into()))?;
    let mut probe = net.clone();
    let mut grads = Gradients::zeros_like(net);
    let eps = F::from_f64(epsilon);
    let two_eps = F::from_f64(2.0 * epsilon);

    for layer in 0..net.layers().len() {
        let (rows, cols) = net.layers()[layer].weights.dim();
        for r in 0..rows {
            for c in 0..cols {
                let orig = net.layers()[layer].weights[[r, c]];
                probe.layers_mut()[layer].weights[[r, c]] = orig + eps;
                let plus = probe.batch_loss(x, x)?;
                probe.layers_mut()[layer].weights[[r, c]] = orig - eps;
                let minus = probe.batch_loss(x, x)?;
                probe.layers_mut()[layer].weights[[r, c]] = orig;
                grads.weights[layer][[r, c]] = (plus - minus) / two_eps;
            }
        }
        for r in 0..rows {
            let orig = net.layers()[layer].biases[r];
            probe.layers_mut()[layer].biases[r] = orig + eps;
            let plus = probe.batch_loss(x, x)?;
            probe.layers_mut()[layer].biases[r] = orig - eps;
            let minus = probe.batch_loss(x, x)?;
            probe.layers_mut()[layer].biases[r] = orig;
            grads.biases[layer][r] = (plus - minus) / two_eps;
        }
    }
    Ok(grads)
}

/// Compares backprop against central differences on one input and returns
/// the max relative error. Intended for small networks in `f64`.
pub fn gradient_check<F: Real>(net: &Mlp<F>, input: &[F], epsilon: f64) -> Result<f64> {
    if !(1e-6..=1e-3).contains(&epsilon) {
        return Err(CtnnError::InvalidArgument(format!(
            "epsilon {epsilon} outside [1e-6, 1e-3]"
        )));
    }
    let x = ArrayView2::from_shape((1, input.len()), input)
        .map_err(|_| CtnnError::InvalidArgument("input shape".into()))?;
    let trace = net.forward_trace(x)?;
    let (_, analytic) = net.backward(&trace, x)?;
    let numeric = numerical_gradients(net, input, epsilon)?;
    Ok(max_relative_error(&analytic, &numeric))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SMALL: [usize; 7] = [16, 8, 4, 2, 4, 8, 16];

    fn random_input(seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..16).map(|_| rng.random::<f64>()).collect()
    }

    #[test]
    fn backprop_matches_finite_differences() {
        for seed in 0..5 {
            let mut net = Mlp::<f64>::seeded(&SMALL, seed).unwrap();
            net.randomize_biases(0.1, seed);
            let err = gradient_check(&net, &random_input(100 + seed), 1e-5).unwrap();
            assert!(err < 1e-4, "seed {seed}: max relative error {err}");
        }
    }

    #[test]
    fn zero_network_output_bias_gradient() {
        let net = Mlp::<f64>::zeros(&SMALL).unwrap();
        let input = vec![0.0; 16];
        let x = ArrayView2::from_shape((1, 16), &input[..]).unwrap();
        let trace = net.forward_trace(x).unwrap();
        let (_, analytic) = net.backward(&trace, x).unwrap();
        let numeric = numerical_gradients(&net, &input, 1e-5).unwrap();
        // d/db of mean((sigmoid(b) - 0)^2) at b = 0 is 2/16 * 0.5 * 0.25.
        for (a, n) in analytic.biases[5].iter().zip(numeric.biases[5].iter()) {
            assert!((a - 0.015625).abs() < 1e-12);
            assert!((a - n).abs() < 1e-6);
        }
    }

    #[test]
    fn corrupted_gradient_is_detected() {
        let mut net = Mlp::<f64>::seeded(&SMALL, 3).unwrap();
        net.randomize_biases(0.1, 3);
        let input = random_input(9);
        let x = ArrayView2::from_shape((1, 16), &input[..]).unwrap();
        let trace = net.forward_trace(x).unwrap();
        let (_, mut analytic) = net.backward(&trace, x).unwrap();
        analytic.biases[5].mapv_inplace(|g| g * 1.05);
        let numeric = numerical_gradients(&net, &input, 1e-5).unwrap();
        assert!(max_relative_error(&analytic, &numeric) > 1e-2);
    }

    #[test]
    fn epsilon_outside_range_is_rejected() {
        let net = Mlp::<f64>::seeded(&SMALL, 3).unwrap();
        assert!(gradient_check(&net, &random_input(1), 1e-1).is_err());
        assert!(gradient_check(&net, &random_input(1), 1e-8).is_err());
    }

    #[test]
    fn relative_error_floor() {
        assert_eq!(relative_error(0.0, 0.0), 0.0);
        assert_eq!(relative_error(2.0, 1.0), 0.5);
        assert!(relative_error(1e-12, 0.0) <= 1e-6);
    }
}
