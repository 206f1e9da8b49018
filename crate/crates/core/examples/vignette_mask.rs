//! Circular per-cell apertures of growing radius.

use mvwave::synth::{apply_vignette, MaskSpec};
use mvwave::transform::{MultiviewImage, Parallax};
use ndarray::Array2;

fn main() -> mvwave::Result<()> {
    let cell = 8;
    let image = MultiviewImage::new(Array2::ones((4 * cell, 4 * cell)), cell, Parallax::Fp)?;
    for radius in [0.5, 1.5, 2.5, 4.0, 6.0] {
        let masked = apply_vignette(&image, &MaskSpec::new(radius, cell)?)?;
        let open = masked.pixels().iter().filter(|&&v| v > 0.0).count();
        println!(
            "radius {radius:>4}: {:.1}% of pixels open",
            100.0 * open as f64 / masked.pixels().len() as f64
        );
    }
    Ok(())
}
