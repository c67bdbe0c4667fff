//! The thalamic stage: reconstruction engine, difference engine and gate.
//!
//! The difference score `D` is the mean squared error between the incoming
//! frame `y` and the cortex's last reconstruction `ỹ`, both on the raw
//! `[0, 255]` scale. The gate forwards `y` when `D >= TH` and the all-zero
//! frame otherwise.

mod frame;
mod stream;

pub use frame::{Grid, Reconstruction, SensoryFrame};
pub use stream::{run_sequence, run_signals, CtnnState, SequenceTrace, SignalStep, StepRecord};

use crate::error::{CtnnError, Result};
use crate::nn::{mse, AutoEncoder, NormalizedVector};
use crate::pgm::{to_byte, GrayImage};
use crate::{FRAME_LEN, MAX_INTENSITY};

/// Anything that can play the cortex: maps a raw-scale input to a raw-scale
/// reconstruction of the same width.
pub trait Cortex {
    fn width(&self) -> usize;
    fn reconstruct(&self, incoming: &[f32]) -> Result<Vec<f32>>;
}

impl Cortex for AutoEncoder {
    fn width(&self) -> usize {
        FRAME_LEN
    }

    fn reconstruct(&self, incoming: &[f32]) -> Result<Vec<f32>> {
        CtnnError::check_len(FRAME_LEN, incoming.len())?;
        let frame = SensoryFrame::new(incoming.to_vec(), None)?;
        let (_, decoded) = self.forward(&frame.normalized())?;
        Ok(reconstruction_engine(&decoded)?.pixels().to_vec())
    }
}

impl<C: Cortex + ?Sized> Cortex for &C {
    fn width(&self) -> usize {
        (**self).width()
    }

    fn reconstruct(&self, incoming: &[f32]) -> Result<Vec<f32>> {
        (**self).reconstruct(incoming)
    }
}

/// Maps decoder output (`[0, 1]`, flattened) back onto the frame layout and
/// the raw intensity scale.
pub fn reconstruction_engine(decoder_output: &NormalizedVector) -> Result<Reconstruction> {
    CtnnError::check_len(FRAME_LEN, decoder_output.len())?;
    Ok(Reconstruction::from_raw(
        decoder_output
            .as_slice()
            .iter()
            .map(|v| v * MAX_INTENSITY)
            .collect(),
    ))
}

/// `D = (1/n) * sum((y - ỹ)^2)` on the raw scale; lies in `[0, 65025]`.
pub fn difference_score(incoming: &SensoryFrame, recon: &Reconstruction) -> Result<f64> {
    mse(incoming.pixels(), recon.pixels())
}

/// `O = y` if `D >= TH`, otherwise the all-zero frame.
pub fn gate(incoming: &SensoryFrame, difference: f64, threshold: f64) -> SensoryFrame {
    if fires(difference, threshold) {
        incoming.clone()
    } else {
        SensoryFrame::zeros()
    }
}

#[inline]
pub(crate) fn fires(difference: f64, threshold: f64) -> bool {
    difference >= threshold
}

/// Per-pixel `|y - ỹ|`, for visual inspection of the difference engine.
pub fn difference_image(incoming: &SensoryFrame, recon: &Reconstruction) -> GrayImage {
    let diff: Vec<f32> = incoming
        .pixels()
        .iter()
        .zip(recon.pixels())
        .map(|(a, b)| (a - b).abs())
        .collect();
    Reconstruction::from_raw(diff).to_image()
}

/// Byte form of a frame image, handy for checksums.
pub fn frame_bytes(frame: &SensoryFrame) -> Vec<u8> {
    frame.pixels().iter().map(|&v| to_byte(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frame_of(v: f32) -> SensoryFrame {
        SensoryFrame::new(vec![v; FRAME_LEN], Some(1)).unwrap()
    }

    #[test]
    fn engine_scales_and_round_trips() {
        let half = NormalizedVector::new(vec![0.5; FRAME_LEN]).unwrap();
        let r = reconstruction_engine(&half).unwrap();
        assert!(r.pixels().iter().all(|&v| v == 127.5));

        let frame =
            SensoryFrame::new((0..FRAME_LEN).map(|i| (i % 256) as f32).collect(), None).unwrap();
        let back = reconstruction_engine(&frame.normalized()).unwrap();
        for (a, b) in frame.pixels().iter().zip(back.pixels()) {
            assert!((a - b).abs() < 1e-4);
        }
        assert!(reconstruction_engine(&NormalizedVector::zeros(5)).is_err());
    }

    #[test]
    fn difference_extremes() {
        let y = frame_of(255.0);
        assert_eq!(
            difference_score(&y, &Reconstruction::zeros(FRAME_LEN)).unwrap(),
            65025.0
        );
        let same = Reconstruction::from_raw(y.pixels().to_vec());
        assert_eq!(difference_score(&y, &same).unwrap(), 0.0);
        assert!(difference_score(&y, &Reconstruction::zeros(3)).is_err());
    }

    #[test]
    fn gate_cases() {
        let y = frame_of(200.0);
        assert_eq!(gate(&y, 150.0, 100.0), y);
        assert!(gate(&y, 50.0, 100.0).is_zero());
        assert_eq!(gate(&y, 100.0, 100.0), y);
    }

    #[test]
    fn difference_image_is_absolute() {
        let y = frame_of(10.0);
        let r = Reconstruction::from_raw(vec![30.0; FRAME_LEN]);
        assert!(difference_image(&y, &r).pixels.iter().all(|&p| p == 20));
    }

    proptest! {
        #[test]
        fn gate_never_blends(v in 0.0f32..=255.0, d in 0.0f64..70000.0, th in 0.0f64..70000.0) {
            let y = frame_of(v);
            let out = gate(&y, d, th);
            prop_assert!(out == y || out.is_zero());
            prop_assert_eq!(out == y && !(v == 0.0), d >= th && v != 0.0);
        }

        #[test]
        fn difference_is_symmetric(a in prop::collection::vec(0.0f32..=255.0, FRAME_LEN),
                                   b in prop::collection::vec(0.0f32..=255.0, FRAME_LEN)) {
            let ya = SensoryFrame::new(a.clone(), None).unwrap();
            let yb = SensoryFrame::new(b.clone(), None).unwrap();
            let d1 = difference_score(&ya, &Reconstruction::from_raw(b)).unwrap();
            let d2 = difference_score(&yb, &Reconstruction::from_raw(a)).unwrap();
            prop_assert_eq!(d1, d2);
            prop_assert!((0.0..=65025.0).contains(&d1));
        }
    }
}
