//! Render the tetrahedron, analyse it and reconstruct it with both
//! synthesis operators.

use mvwave::io::write_image;
use mvwave::synth::Tetrahedron;
use mvwave::transform::{direct_cwt, inverse_cwt_with, ncc, Parallax, Synthesis, TransformConfig};

fn main() -> mvwave::Result<()> {
    let tet = Tetrahedron::default();
    let image = mvwave::synth::render_scene(&tet.scene()?)?;
    let volume = direct_cwt(&image, &TransformConfig::for_cell(image.cell_px()))?;
    println!(
        "planes {:?}",
        volume.depths().iter().map(|d| d.get()).collect::<Vec<_>>()
    );

    let dir = std::env::temp_dir().join("mvwave-examples");
    std::fs::create_dir_all(&dir)?;
    write_image(&image, &dir.join("tetrahedron.pgm"))?;
    for (name, synthesis) in [
        ("dual", Synthesis::default()),
        ("adjoint", Synthesis::Adjoint),
    ] {
        let rec = inverse_cwt_with(&volume, Parallax::Fp, synthesis)?;
        println!("{name:>7}: NCC {:.4}", ncc(image.pixels(), rec.pixels()));
        write_image(&rec, &dir.join(format!("tetrahedron_{name}.pgm")))?;
    }
    println!("images in {}", dir.display());
    Ok(())
}
