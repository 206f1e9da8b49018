//! Write a coefficient volume to disk and read it back.

use mvwave::io::{read_volume, write_volume};
use mvwave::synth::{render_scene, Tetrahedron};
use mvwave::transform::{direct_cwt, TransformConfig};

fn main() -> mvwave::Result<()> {
    let tet = Tetrahedron {
        cell_px: 10,
        size_cells: 8,
        ..Tetrahedron::default()
    };
    let image = render_scene(&tet.scene()?)?;
    let volume = direct_cwt(&image, &TransformConfig::for_cell(10))?;

    let path = std::env::temp_dir()
        .join("mvwave-examples")
        .join("tetrahedron.mvwv");
    std::fs::create_dir_all(path.parent().unwrap())?;
    write_volume(&volume, &path)?;
    let back = read_volume(&path)?;
    let worst = volume
        .planes()
        .iter()
        .zip(back.planes())
        .flat_map(|((_, a), (_, b))| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
        .fold(0.0f64, f64::max);
    println!(
        "{} bytes, {} planes of {}x{}, largest f32 rounding error {worst:.2e}",
        std::fs::metadata(&path)?.len(),
        back.planes().len(),
        back.width(),
        back.height()
    );
    Ok(())
}
