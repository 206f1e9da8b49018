//! Full-parallax analysis followed by horizontal-parallax synthesis.

use mvwave::io::write_image;
use mvwave::synth::{render_scene, Tetrahedron};
use mvwave::transform::{direct_cwt, inverse_cwt, voxel_response, Parallax, TransformConfig};

fn main() -> mvwave::Result<()> {
    let tet = Tetrahedron::default();
    let image = render_scene(&tet.scene()?)?;
    let config = TransformConfig::for_cell(image.cell_px());
    let hpo = inverse_cwt(&direct_cwt(&image, &config)?, Parallax::Hpo)?;
    let again = direct_cwt(&hpo, &config)?;
    for (x, y) in tet.vertices() {
        let r = voxel_response(&again, x, y, 1).expect("planes");
        println!(
            "vertex ({x}, {y}) reads {} at offset {:?}",
            r.depth, r.offset
        );
    }
    let path = std::env::temp_dir()
        .join("mvwave-examples")
        .join("tetrahedron_hpo.pgm");
    std::fs::create_dir_all(path.parent().unwrap())?;
    write_image(&hpo, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
