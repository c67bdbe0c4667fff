use super::glyph_data::GLYPH_ROWS;
use crate::thalamus::Grid;
use crate::{GRID_SIDE, MAX_INTENSITY, MODALITY_LEN};

/// Ten 28x28 binary digit bitmaps, lit pixels at full intensity.
#[derive(Debug, Clone, PartialEq)]
pub struct GlyphAtlas {
    glyphs: Vec<Vec<bool>>,
}

impl GlyphAtlas {
    /// The bundled monospace digit set.
    pub fn embedded() -> Self {
        let glyphs = GLYPH_ROWS
            .iter()
            .map(|rows| {
                rows.iter()
                    .flat_map(|row| row.bytes().map(|b| b == b'#'))
                    .collect::<Vec<_>>()
            })
            .collect();
        GlyphAtlas { glyphs }
    }

    /// Builds an atlas from ten row-major 28x28 masks.
    pub fn from_masks(glyphs: Vec<Vec<bool>>) -> Option<Self> {
        (glyphs.len() == 10 && glyphs.iter().all(|g| g.len() == MODALITY_LEN))
            .then_some(GlyphAtlas { glyphs })
    }

    pub fn is_lit(&self, digit: u8, row: usize, col: usize) -> bool {
        self.glyphs[digit as usize][row * GRID_SIDE + col]
    }

    pub fn lit_count(&self, digit: u8) -> usize {
        self.glyphs[digit as usize].iter().filter(|&&b| b).count()
    }

    /// Noise-free glyph at intensity 255.
    pub fn clean_grid(&self, digit: u8) -> Grid {
        Grid::from_raw(
            self.glyphs[digit as usize]
                .iter()
                .map(|&lit| if lit { MAX_INTENSITY } else { 0.0 })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::mse;

    #[test]
    fn every_glyph_is_substantial() {
        let atlas = GlyphAtlas::embedded();
        for d in 0..10 {
            assert!(
                atlas.lit_count(d) >= 40,
                "digit {d} has {} lit pixels",
                atlas.lit_count(d)
            );
        }
    }

    #[test]
    fn glyphs_are_pairwise_separated() {
        let atlas = GlyphAtlas::embedded();
        for i in 0..10u8 {
            for j in (i + 1)..10 {
                let d = mse(
                    atlas.clean_grid(i).as_slice(),
                    atlas.clean_grid(j).as_slice(),
                )
                .unwrap();
                assert!(d > 100.0, "glyphs {i} and {j} too close: {d}");
            }
        }
    }

    #[test]
    fn rows_are_28_wide() {
        for rows in GLYPH_ROWS.iter() {
            assert!(rows.iter().all(|r| r.len() == GRID_SIDE));
        }
    }
}
