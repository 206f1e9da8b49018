use std::fmt;
use std::str::FromStr;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Parallax dimensionality of a multiview image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parallax {
    /// Horizontal parallax only: 1D patterns under a vertical lenticular.
    Hpo,
    /// Full parallax: 2D patterns under crossed lenticulars.
    Fp,
}

impl fmt::Display for Parallax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parallax::Hpo => "hpo",
            Parallax::Fp => "fp",
        })
    }
}

impl FromStr for Parallax {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hpo" => Ok(Parallax::Hpo),
            "fp" => Ok(Parallax::Fp),
            other => Err(Error::InvalidArgument(format!(
                "unknown parallax mode {other:?} (expected hpo or fp)"
            ))),
        }
    }
}

/// Single-channel image in `[0, 1]` made of whole square cells.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiviewImage {
    pixels: Array2<f64>,
    cell_px: usize,
    parallax: Parallax,
}

impl MultiviewImage {
    /// Validates cell tiling and the intensity range. Pixels are indexed
    /// `[row, column]`.
    pub fn new(pixels: Array2<f64>, cell_px: usize, parallax: Parallax) -> Result<Self> {
        if cell_px == 0 {
            return Err(Error::CellTooSmall { cell_px, min: 1 });
        }
        let (height, width) = pixels.dim();
        if width % cell_px != 0 || height % cell_px != 0 {
            return Err(Error::WholeCells {
                width,
                height,
                cell_px,
            });
        }
        if let Some(((y, x), &value)) = pixels
            .indexed_iter()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::IntensityRange { x, y, value });
        }
        Ok(MultiviewImage {
            pixels,
            cell_px,
            parallax,
        })
    }

    /// Like [`MultiviewImage::new`], but clamps intensities into `[0, 1]`
    /// (NaN becomes 0) instead of rejecting them.
    pub fn clamped(mut pixels: Array2<f64>, cell_px: usize, parallax: Parallax) -> Result<Self> {
        pixels.mapv_inplace(|v| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) });
        Self::new(pixels, cell_px, parallax)
    }

    pub fn zeros(
        width_cells: usize,
        height_cells: usize,
        cell_px: usize,
        parallax: Parallax,
    ) -> Result<Self> {
        Self::new(
            Array2::zeros((height_cells * cell_px, width_cells * cell_px)),
            cell_px,
            parallax,
        )
    }

    pub fn pixels(&self) -> &Array2<f64> {
        &self.pixels
    }

    pub fn into_pixels(self) -> Array2<f64> {
        self.pixels
    }

    pub fn width(&self) -> usize {
        self.pixels.ncols()
    }

    pub fn height(&self) -> usize {
        self.pixels.nrows()
    }

    pub fn cell_px(&self) -> usize {
        self.cell_px
    }

    pub fn parallax(&self) -> Parallax {
        self.parallax
    }

    pub fn with_parallax(mut self, parallax: Parallax) -> Self {
        self.parallax = parallax;
        self
    }

    pub fn width_cells(&self) -> usize {
        self.width() / self.cell_px
    }

    pub fn height_cells(&self) -> usize {
        self.height() / self.cell_px
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_cells_enforced() {
        let err = MultiviewImage::new(Array2::zeros((8, 13)), 4, Parallax::Fp).unwrap_err();
        assert!(matches!(
            err,
            Error::WholeCells {
                width: 13,
                height: 8,
                cell_px: 4
            }
        ));
    }

    #[test]
    fn range_enforced() {
        let mut px = Array2::zeros((4, 4));
        px[[1, 2]] = 1.5;
        assert!(matches!(
            MultiviewImage::new(px.clone(), 4, Parallax::Hpo),
            Err(Error::IntensityRange { x: 2, y: 1, .. })
        ));
        let img = MultiviewImage::clamped(px, 4, Parallax::Hpo).unwrap();
        assert_eq!(img.pixels()[[1, 2]], 1.0);
    }

    #[test]
    fn parallax_parsing() {
        assert_eq!("FP".parse::<Parallax>().unwrap(), Parallax::Fp);
        assert_eq!(Parallax::Hpo.to_string(), "hpo");
        assert!("3d".parse::<Parallax>().is_err());
    }
}
