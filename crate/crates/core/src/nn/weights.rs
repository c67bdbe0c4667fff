//! Portable weight files.
//!
//! Layout: the bytes `CTNN1\n`, one ASCII line of space-separated layer
//! widths, then for each layer its weights (row-major, `[out x in]`) followed
//! by its biases, every value an `f32` in little-endian order. No padding.

use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::{Array1, Array2};

use super::{Activation, AutoEncoder, DenseLayer, Mlp};
use crate::error::{CtnnError, Result};

const MAGIC: &str = "CTNN1\n";

pub fn write_weights<W: Write>(net: &Mlp<f32>, mut out: W) -> std::io::Result<()> {
    out.write_all(MAGIC.as_bytes())?;
    let topology: Vec<String> = net.topology().iter().map(ToString::to_string).collect();
    out.write_all(topology.join(" ").as_bytes())?;
    out.write_all(b"\n")?;
    let mut buf = Vec::with_capacity(net.param_count() * 4);
    for layer in net.layers() {
        for v in layer.weights.iter().chain(layer.biases.iter()) {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    out.write_all(&buf)
}

/// Parses a weight file of any dense topology. Hidden layers get relu,
/// the last layer sigmoid.
pub fn read_weights(bytes: &[u8], source: &Path) -> Result<Mlp<f32>> {
    let rest = bytes
        .strip_prefix(MAGIC.as_bytes())
        .ok_or(CtnnError::BadMagic { expected: MAGIC })?;
    let newline = rest
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| CtnnError::format(source, "missing topology line"))?;
    let line = std::str::from_utf8(&rest[..newline])
        .map_err(|_| CtnnError::format(source, "topology line is not ASCII"))?;
    let topology = line
        .split(' ')
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| CtnnError::format(source, format!("bad topology line {line:?}")))?;
    if topology.len() < 2 || topology.contains(&0) {
        return Err(CtnnError::format(
            source,
            format!("bad topology {topology:?}"),
        ));
    }

    let header_len = MAGIC.len() + newline + 1;
    let payload = &rest[newline + 1..];
    let scalars: usize = topology.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
    let expected = header_len + scalars * 4;
    let actual = bytes.len();
    if actual < expected {
        return Err(CtnnError::Truncated { expected, actual });
    }
    if actual > expected {
        return Err(CtnnError::format(
            source,
            format!("{} trailing bytes after weights", actual - expected),
        ));
    }

    let mut values = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]));
    let last = topology.len() - 2;
    let mut layers = Vec::with_capacity(topology.len() - 1);
    for (i, w) in topology.windows(2).enumerate() {
        let (inputs, outputs) = (w[0], w[1]);
        let weights: Vec<f32> = values.by_ref().take(inputs * outputs).collect();
        let biases: Vec<f32> = values.by_ref().take(outputs).collect();
        layers.push(DenseLayer {
            weights: Array2::from_shape_vec((outputs, inputs), weights).expect("sized above"),
            biases: Array1::from_vec(biases),
            activation: if i == last {
                Activation::Sigmoid
            } else {
                Activation::Relu
            },
        });
    }
    Mlp::from_layers(layers)
}

pub fn save_weights(model: &AutoEncoder, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    write_weights(model.network(), &mut bytes).expect("writing to a Vec cannot fail");
    fs::write(path, bytes).map_err(|e| CtnnError::io(path, e))
}

pub fn load_weights(path: impl AsRef<Path>) -> Result<AutoEncoder> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| CtnnError::io(path, e))?;
    AutoEncoder::from_network(read_weights(&bytes, path)?)
}

/// Like [`load_weights`] but fails with [`CtnnError::TopologyMismatch`]
/// unless the stored topology equals `expected`.
pub fn load_weights_expecting(path: impl AsRef<Path>, expected: &[usize]) -> Result<AutoEncoder> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| CtnnError::io(path, e))?;
    let net = read_weights(&bytes, path)?;
    let found = net.topology();
    if found != expected {
        return Err(CtnnError::TopologyMismatch {
            expected: expected.to_vec(),
            found,
        });
    }
    AutoEncoder::from_network(net)
}
