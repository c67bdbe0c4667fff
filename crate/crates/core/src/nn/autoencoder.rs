use ndarray::{Array2, ArrayView1, ArrayView2, Axis};

use super::Mlp;
use crate::error::{CtnnError, Result};
use crate::{FRAME_LEN, LATENT_LEN};

/// A network-domain signal: every element in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedVector(Vec<f32>);

impl NormalizedVector {
    pub fn new(values: Vec<f32>) -> Result<Self> {
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(CtnnError::OutOfRange {
                index,
                value: value as f64,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(NormalizedVector(values))
    }

    pub fn zeros(len: usize) -> Self {
        NormalizedVector(vec![0.0; len])
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Bottleneck activation of the auto-encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentCode(pub Vec<f32>);

/// The cortex: a six-layer dense auto-encoder
/// `1568 -> h1 -> h2 -> 100 -> h2 -> h1 -> 1568`.
///
/// Layers 0-2 encode, layers 3-5 decode. Hidden layers use relu, the output
/// layer a sigmoid so reconstructions live on the normalized pixel scale.
#[derive(Debug, Clone, PartialEq)]
pub struct AutoEncoder {
    net: Mlp<f32>,
}

/// Checks `[1568, h1, h2, 100, h2, h1, 1568]` with `h1 > h2 > 100`.
pub fn validate_topology(topology: &[usize]) -> Result<()> {
    let bad = |msg: String| Err(CtnnError::InvalidTopology(msg));
    if topology.len() != 7 {
        return bad(format!("expected 7 layer widths, got {}", topology.len()));
    }
    if topology[0] != FRAME_LEN {
        return bad(format!(
            "input width must be {FRAME_LEN}, got {}",
            topology[0]
        ));
    }
    if topology[6] != FRAME_LEN {
        return bad(format!(
            "output width must be {FRAME_LEN}, got {}",
            topology[6]
        ));
    }
    if topology[3] != LATENT_LEN {
        return bad(format!(
            "bottleneck width must be {LATENT_LEN}, got {}",
            topology[3]
        ));
    }
    let (h1, h2) = (topology[1], topology[2]);
    if topology[4] != h2 || topology[5] != h1 {
        return bad(format!(
            "decoder widths must mirror the encoder: {topology:?}"
        ));
    }
    if !(h1 > h2 && h2 > LATENT_LEN) {
        return bad(format!(
            "hidden widths must satisfy h1 > h2 > {LATENT_LEN}: {topology:?}"
        ));
    }
    Ok(())
}

/// Builds a freshly initialized auto-encoder; identical seeds give identical weights.
pub fn build_autoencoder(topology: &[usize], seed: u64) -> Result<AutoEncoder> {
    validate_topology(topology)?;
    Ok(AutoEncoder {
        net: Mlp::seeded(topology, seed)?,
    })
}

impl AutoEncoder {
    /// Wraps an existing network after validating its shape.
    pub fn from_network(net: Mlp<f32>) -> Result<Self> {
        validate_topology(&net.topology())?;
        Ok(AutoEncoder { net })
    }

    pub fn network(&self) -> &Mlp<f32> {
        &self.net
    }

    pub fn network_mut(&mut self) -> &mut Mlp<f32> {
        &mut self.net
    }

    pub fn topology(&self) -> Vec<usize> {
        self.net.topology()
    }

    pub fn param_count(&self) -> usize {
        self.net.param_count()
    }

    /// Returns the bottleneck activation and the reconstruction.
    pub fn forward(&self, input: &NormalizedVector) -> Result<(LatentCode, NormalizedVector)> {
        CtnnError::check_len(FRAME_LEN, input.len())?;
        let x = ArrayView2::from_shape((1, FRAME_LEN), input.as_slice()).expect("row shape");
        let trace = self.net.forward_trace(x)?;
        let latent = trace.activations[3].row(0).to_vec();
        let output = trace.output().row(0).to_vec();
        Ok((LatentCode(latent), NormalizedVector(output)))
    }

    /// Reconstructs a batch, one sample per row, skipping the latent bookkeeping.
    pub fn reconstruct_batch(&self, inputs: ArrayView2<'_, f32>) -> Result<Array2<f32>> {
        self.net.forward_batch(inputs)
    }

    pub fn reconstruct(&self, input: ArrayView1<'_, f32>) -> Result<Vec<f32>> {
        let out = self.net.forward_batch(input.insert_axis(Axis(0)))?;
        Ok(out.into_raw_vec_and_offset().0)
    }
}
