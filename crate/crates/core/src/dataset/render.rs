use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::GlyphAtlas;
use crate::error::{CtnnError, Result};
use crate::thalamus::{Grid, SensoryFrame};
use crate::{GRID_SIDE, MAX_INTENSITY};

/// Per-variant perturbations applied when rendering a frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Augmentation {
    /// Std-dev of additive Gaussian pixel noise, in intensity units.
    pub noise_sigma: f64,
    /// Glyphs shift by an integer offset drawn from `-t..=t` on each axis.
    pub max_translation: i32,
    /// Tone amplitude is scaled by `1 + u`, `u` uniform in `±amplitude_jitter`.
    pub amplitude_jitter: f64,
}

impl Default for Augmentation {
    fn default() -> Self {
        Augmentation {
            noise_sigma: 3.0,
            max_translation: 0,
            amplitude_jitter: 0.02,
        }
    }
}

/// Frequency band that encodes one digit's tone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneSpec {
    pub digit: u8,
    pub band_row: usize,
    pub band_sigma: f64,
}

impl ToneSpec {
    /// Band centred on row `25 - 2 * digit` with a one-row spread.
    pub fn for_digit(digit: u8) -> Result<Self> {
        check_digit(digit)?;
        Ok(ToneSpec {
            digit,
            band_row: 25 - 2 * digit as usize,
            band_sigma: 1.0,
        })
    }

    /// Noise-free band intensity at `row`.
    pub fn profile(&self, row: usize) -> f64 {
        let d = row as f64 - self.band_row as f64;
        MAX_INTENSITY as f64 * (-(d * d) / (2.0 * self.band_sigma * self.band_sigma)).exp()
    }
}

/// Renders the visual and audio halves of frames from a glyph atlas.
#[derive(Debug, Clone)]
pub struct FrameRenderer {
    atlas: GlyphAtlas,
    augmentation: Augmentation,
}

impl Default for FrameRenderer {
    fn default() -> Self {
        FrameRenderer::new(GlyphAtlas::embedded(), Augmentation::default())
    }
}

// Independent ChaCha streams per (digit, modality) under one seed.
fn modality_rng(seed: u64, digit: u8, audio: bool) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * digit as u64 + u64::from(audio));
    rng
}

impl FrameRenderer {
    pub fn new(atlas: GlyphAtlas, augmentation: Augmentation) -> Self {
        FrameRenderer {
            atlas,
            augmentation,
        }
    }

    pub fn augmentation(&self) -> &Augmentation {
        &self.augmentation
    }

    pub fn render_digit(&self, digit: u8, seed: u64) -> Result<Grid> {
        check_digit(digit)?;
        let mut rng = modality_rng(seed, digit, false);
        let t = self.augmentation.max_translation.max(0);
        let dx = rng.random_range(-t..=t);
        let dy = rng.random_range(-t..=t);
        let n = GRID_SIDE as i32;
        let mut values = Vec::with_capacity(GRID_SIDE * GRID_SIDE);
        for r in 0..n {
            for c in 0..n {
                let (sr, sc) = (r - dy, c - dx);
                let lit = (0..n).contains(&sr)
                    && (0..n).contains(&sc)
                    && self.atlas.is_lit(digit, sr as usize, sc as usize);
                values.push(if lit { MAX_INTENSITY as f64 } else { 0.0 });
            }
        }
        add_noise(&mut values, self.augmentation.noise_sigma, &mut rng)?;
        Ok(quantize(values))
    }

    pub fn render_tone(&self, digit: u8, seed: u64) -> Result<Grid> {
        let tone = ToneSpec::for_digit(digit)?;
        let mut rng = modality_rng(seed, digit, true);
        let j = self.augmentation.amplitude_jitter.abs();
        let amplitude = 1.0
            + if j > 0.0 {
                rng.random_range(-j..=j)
            } else {
                0.0
            };
        let mut values = Vec::with_capacity(GRID_SIDE * GRID_SIDE);
        for r in 0..GRID_SIDE {
            let v = amplitude * tone.profile(r);
            values.extend(std::iter::repeat_n(v, GRID_SIDE));
        }
        add_noise(&mut values, self.augmentation.noise_sigma, &mut rng)?;
        Ok(quantize(values))
    }

    pub fn make_frame(&self, digit: u8, seed: u64) -> Result<SensoryFrame> {
        Ok(SensoryFrame::from_grids(
            &self.render_digit(digit, seed)?,
            &self.render_tone(digit, seed)?,
            Some(digit),
        ))
    }
}

/// Typeset digit with the default augmentation.
pub fn render_digit(digit: u8, seed: u64) -> Result<Grid> {
    FrameRenderer::default().render_digit(digit, seed)
}

/// Tone image with the default augmentation.
pub fn render_tone(digit: u8, seed: u64) -> Result<Grid> {
    FrameRenderer::default().render_tone(digit, seed)
}

/// Visual glyph next to its tone, labelled with the digit.
pub fn make_frame(digit: u8, seed: u64) -> Result<SensoryFrame> {
    FrameRenderer::default().make_frame(digit, seed)
}

pub(crate) fn check_digit(digit: u8) -> Result<()> {
    if digit <= 9 {
        Ok(())
    } else {
        Err(CtnnError::InvalidDigit(digit))
    }
}

fn add_noise(values: &mut [f64], sigma: f64, rng: &mut ChaCha8Rng) -> Result<()> {
    if sigma <= 0.0 {
        return Ok(());
    }
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| CtnnError::InvalidArgument(format!("noise sigma {sigma}: {e}")))?;
    for v in values {
        *v += normal.sample(rng);
    }
    Ok(())
}

/// Rounds to whole intensities so frames survive 8-bit export unchanged.
fn quantize(values: Vec<f64>) -> Grid {
    Grid::from_raw(
        values
            .into_iter()
            .map(|v| v.round().clamp(0.0, MAX_INTENSITY as f64) as f32)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::mse;
    use crate::FRAME_LEN;

    fn d(a: &Grid, b: &Grid) -> f64 {
        mse(a.as_slice(), b.as_slice()).unwrap()
    }

    #[test]
    fn digit_rendering_is_deterministic_and_varied() {
        let a = render_digit(3, 1).unwrap();
        assert_eq!(a, render_digit(3, 1).unwrap());
        let b = render_digit(3, 2).unwrap();
        assert_ne!(a, b);
        assert!(d(&a, &b) < 20.0, "same-class D = {}", d(&a, &b));
    }

    #[test]
    fn different_digits_are_far_apart() {
        for seed in 0..20 {
            let dist = d(
                &render_digit(3, seed).unwrap(),
                &render_digit(8, seed + 100).unwrap(),
            );
            assert!(dist > 100.0);
        }
    }

    #[test]
    fn tone_band_rows() {
        assert_eq!(ToneSpec::for_digit(0).unwrap().band_row, 25);
        assert_eq!(ToneSpec::for_digit(9).unwrap().band_row, 7);
        let rows: Vec<usize> = (0..10)
            .map(|d| ToneSpec::for_digit(d).unwrap().band_row)
            .collect();
        for w in rows.windows(2) {
            assert!(w[0] - w[1] >= 2);
        }
        assert!(rows.iter().all(|r| (2..=25).contains(r)));

        let clean = FrameRenderer::new(
            GlyphAtlas::embedded(),
            Augmentation {
                noise_sigma: 0.0,
                amplitude_jitter: 0.0,
                ..Augmentation::default()
            },
        );
        let tone = clean.render_tone(0, 5).unwrap();
        let brightest = (0..GRID_SIDE)
            .max_by(|&a, &b| tone.get(a, 0).total_cmp(&tone.get(b, 0)))
            .unwrap();
        assert_eq!(brightest, 25);
        assert_eq!(tone.get(25, 0), 255.0);
        // Constant across columns.
        assert!((0..GRID_SIDE).all(|c| tone.get(24, c) == tone.get(24, 0)));
    }

    #[test]
    fn tone_similarity_regime() {
        for seed in 0..20 {
            let same = d(
                &render_tone(4, seed).unwrap(),
                &render_tone(4, seed + 50).unwrap(),
            );
            assert!(same < 20.0, "seed {seed}: same-tone D = {same}");
            let diff = d(
                &render_tone(0, seed).unwrap(),
                &render_tone(1, seed).unwrap(),
            );
            assert!(diff > 100.0);
        }
    }

    #[test]
    fn frame_composition() {
        let f = make_frame(5, 9).unwrap();
        assert_eq!(f.pixels().len(), FRAME_LEN);
        assert_eq!(f.label(), Some(5));
        assert_eq!(f.visual(), render_digit(5, 9).unwrap().as_slice());
        assert_eq!(f.audio(), render_tone(5, 9).unwrap().as_slice());
    }

    #[test]
    fn blank_glyphs_leave_audio_alone() {
        let quiet = Augmentation {
            noise_sigma: 0.0,
            ..Augmentation::default()
        };
        let blank = GlyphAtlas::from_masks(vec![vec![false; 784]; 10]).unwrap();
        let renderer = FrameRenderer::new(blank, quiet);
        let reference = FrameRenderer::new(GlyphAtlas::embedded(), quiet);
        let f = renderer.make_frame(2, 3).unwrap();
        assert!(f.visual().iter().all(|&v| v == 0.0));
        assert_eq!(f.audio(), reference.render_tone(2, 3).unwrap().as_slice());
    }

    #[test]
    fn translation_moves_the_glyph() {
        let renderer = FrameRenderer::new(
            GlyphAtlas::embedded(),
            Augmentation {
                noise_sigma: 0.0,
                max_translation: 2,
                amplitude_jitter: 0.0,
            },
        );
        let clean = GlyphAtlas::embedded().clean_grid(7);
        let moved = (0..10).any(|s| renderer.render_digit(7, s).unwrap() != clean);
        assert!(moved);
    }

    #[test]
    fn out_of_range_digit() {
        assert!(matches!(
            render_digit(10, 0),
            Err(CtnnError::InvalidDigit(10))
        ));
        assert!(render_tone(11, 0).is_err());
        assert!(make_frame(12, 0).is_err());
    }

    #[test]
    fn values_are_whole_intensities() {
        let f = make_frame(8, 77).unwrap();
        assert!(f
            .pixels()
            .iter()
            .all(|v| v.fract() == 0.0 && (0.0..=255.0).contains(v)));
    }
}
