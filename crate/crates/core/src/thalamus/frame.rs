use std::path::Path;

use crate::error::{CtnnError, Result};
use crate::nn::NormalizedVector;
use crate::pgm::{to_byte, GrayImage};
use crate::{FRAME_LEN, GRID_SIDE, MAX_INTENSITY, MODALITY_LEN};

/// One 28x28 modality grid, row-major, intensities in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(Vec<f32>);

impl Grid {
    pub fn new(values: Vec<f32>) -> Result<Self> {
        CtnnError::check_len(MODALITY_LEN, values.len())?;
        check_intensities(&values)?;
        Ok(Grid(values))
    }

    pub fn zeros() -> Self {
        Grid(vec![0.0; MODALITY_LEN])
    }

    pub fn get(&self, row: usize, col: usize) -> f32 {
        self.0[row * GRID_SIDE + col]
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.0
    }

    pub(crate) fn from_raw(values: Vec<f32>) -> Self {
        debug_assert_eq!(values.len(), MODALITY_LEN);
        Grid(values)
    }
}

/// A multi-modal input: visual grid then audio grid, flattened row-major
/// into 1,568 intensities on the raw `[0, 255]` scale.
#[derive(Debug, Clone, PartialEq)]
pub struct SensoryFrame {
    pixels: Vec<f32>,
    label: Option<u8>,
}

impl SensoryFrame {
    pub fn new(pixels: Vec<f32>, label: Option<u8>) -> Result<Self> {
        CtnnError::check_len(FRAME_LEN, pixels.len())?;
        check_intensities(&pixels)?;
        Ok(SensoryFrame { pixels, label })
    }

    pub fn from_grids(visual: &Grid, audio: &Grid, label: Option<u8>) -> Self {
        let mut pixels = Vec::with_capacity(FRAME_LEN);
        pixels.extend_from_slice(visual.as_slice());
        pixels.extend_from_slice(audio.as_slice());
        SensoryFrame { pixels, label }
    }

    /// The all-zero frame, also the gate's "nothing forwarded" output.
    pub fn zeros() -> Self {
        SensoryFrame {
            pixels: vec![0.0; FRAME_LEN],
            label: None,
        }
    }

    pub fn pixels(&self) -> &[f32] {
        &self.pixels
    }

    pub(crate) fn pixels_mut(&mut self) -> &mut [f32] {
        &mut self.pixels
    }

    pub fn visual(&self) -> &[f32] {
        &self.pixels[..MODALITY_LEN]
    }

    pub fn audio(&self) -> &[f32] {
        &self.pixels[MODALITY_LEN..]
    }

    pub fn label(&self) -> Option<u8> {
        self.label
    }

    pub fn with_label(mut self, label: Option<u8>) -> Self {
        self.label = label;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.pixels.iter().all(|&v| v == 0.0)
    }

    /// Scales onto the network domain `[0, 1]`.
    pub fn normalized(&self) -> NormalizedVector {
        NormalizedVector::new(self.pixels.iter().map(|v| v / MAX_INTENSITY).collect())
            .expect("frame intensities are validated on construction")
    }

    /// Side-by-side 28x56 image: visual on the left, audio on the right.
    pub fn to_image(&self) -> GrayImage {
        side_by_side(&self.pixels)
    }

    pub fn from_image(image: &GrayImage, label: Option<u8>, source: &Path) -> Result<Self> {
        if image.width != 2 * GRID_SIDE || image.height != GRID_SIDE {
            return Err(CtnnError::format(
                source,
                format!(
                    "expected a {}x{} frame image, got {}x{}",
                    2 * GRID_SIDE,
                    GRID_SIDE,
                    image.width,
                    image.height
                ),
            ));
        }
        let mut pixels = vec![0.0; FRAME_LEN];
        for r in 0..GRID_SIDE {
            for c in 0..GRID_SIDE {
                pixels[r * GRID_SIDE + c] = image.pixels[r * 2 * GRID_SIDE + c] as f32;
                pixels[MODALITY_LEN + r * GRID_SIDE + c] =
                    image.pixels[r * 2 * GRID_SIDE + GRID_SIDE + c] as f32;
            }
        }
        Ok(SensoryFrame { pixels, label })
    }
}

/// The cortex's prediction, mapped back onto the frame layout and raw scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction(Vec<f32>);

impl Reconstruction {
    /// Clamps every value onto `[0, 255]`.
    pub fn from_raw(mut values: Vec<f32>) -> Self {
        for v in &mut values {
            *v = if v.is_nan() {
                0.0
            } else {
                v.clamp(0.0, MAX_INTENSITY)
            };
        }
        Reconstruction(values)
    }

    pub fn zeros(len: usize) -> Self {
        Reconstruction(vec![0.0; len])
    }

    pub fn pixels(&self) -> &[f32] {
        &self.0
    }

    pub fn visual(&self) -> &[f32] {
        &self.0[..MODALITY_LEN]
    }

    pub fn audio(&self) -> &[f32] {
        &self.0[MODALITY_LEN..]
    }

    pub fn to_image(&self) -> GrayImage {
        side_by_side(&self.0)
    }
}

fn side_by_side(pixels: &[f32]) -> GrayImage {
    assert_eq!(
        pixels.len(),
        FRAME_LEN,
        "frame images need {FRAME_LEN} pixels"
    );
    let mut out = vec![0u8; FRAME_LEN];
    for r in 0..GRID_SIDE {
        for c in 0..GRID_SIDE {
            out[r * 2 * GRID_SIDE + c] = to_byte(pixels[r * GRID_SIDE + c]);
            out[r * 2 * GRID_SIDE + GRID_SIDE + c] =
                to_byte(pixels[MODALITY_LEN + r * GRID_SIDE + c]);
        }
    }
    GrayImage::new(2 * GRID_SIDE, GRID_SIDE, out).expect("sized above")
}

fn check_intensities(values: &[f32]) -> Result<()> {
    match values
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..=MAX_INTENSITY).contains(*v))
    {
        Some((index, &value)) => Err(CtnnError::OutOfRange {
            index,
            value: value as f64,
            min: 0.0,
            max: MAX_INTENSITY as f64,
        }),
        None => Ok(()),
    }
}
