use rand::Rng;

use crate::error::{ensure_dims, precondition, Result};
use crate::linalg::Matrix;
use crate::scalar::FieldSpec;

/// A graded automorphism of a window space, with its inverse cached.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeElement {
    maps: Vec<Matrix>,
    inverses: Vec<Matrix>,
}

impl GaugeElement {
    pub fn new(maps: Vec<Matrix>) -> Result<Self> {
        for m in &maps {
            ensure_dims!(m.rows() == m.cols(), "gauge blocks must be square");
            precondition!(m.is_invertible(), "gauge block is not invertible");
        }
        let inverses = maps.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        Ok(GaugeElement { maps, inverses })
    }

    pub fn identity(field: FieldSpec, dims: &[usize]) -> Self {
        let maps: Vec<Matrix> = dims.iter().map(|&d| Matrix::identity(field, d)).collect();
        GaugeElement { inverses: maps.clone(), maps }
    }

    /// Random invertible blocks; with `levels`, each block is triangular with
    /// respect to the flag levels so the result is parabolic.
    pub fn random(field: FieldSpec, dims: &[usize], levels: Option<&[Vec<u32>]>, rng: &mut impl Rng) -> Self {
        let maps = dims
            .iter()
            .enumerate()
            .map(|(i, &d)| loop {
                let mut m = Matrix::zeros(field, d, d);
                for r in 0..d {
                    for c in 0..d {
                        let allowed = levels.map_or(true, |lv| lv[i][r] <= lv[i][c]);
                        if allowed {
                            m.set(r, c, field.from_i64(rng.gen_range(-2..=2)));
                        }
                    }
                }
                if m.is_invertible() {
                    break m;
                }
            })
            .collect();
        GaugeElement::new(maps).expect("invertible by construction")
    }

    pub fn dims(&self) -> Vec<usize> {
        self.maps.iter().map(Matrix::rows).collect()
    }

    pub fn map(&self, i: usize) -> &Matrix {
        &self.maps[i]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn inverse(&self, i: usize) -> &Matrix {
        &self.inverses[i]
    }

    /// Whether each block maps level-`l` coordinates into levels `≤ l`, so every
    /// flag step (a coordinate span in adapted bases) goes into itself.
    pub fn preserves_levels(&self, levels: &[Vec<u32>]) -> bool {
        self.maps.iter().zip(levels).all(|(m, lv)| {
            (0..m.rows()).all(|r| (0..m.cols()).all(|c| m.get(r, c).is_zero() || lv[r] <= lv[c]))
        })
    }
}
