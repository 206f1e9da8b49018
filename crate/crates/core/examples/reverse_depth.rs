//! Swap every plane to the opposite side of the screen and read the
//! tetrahedron's vertices back.

use mvwave::synth::{render_scene, Tetrahedron};
use mvwave::transform::{
    direct_cwt, inverse_cwt, reverse_depth, voxel_response, Parallax, TransformConfig,
};

fn main() -> mvwave::Result<()> {
    let tet = Tetrahedron::default();
    let image = render_scene(&tet.scene()?)?;
    let config = TransformConfig::for_cell(image.cell_px());
    let volume = direct_cwt(&image, &config)?;
    let flipped = inverse_cwt(&reverse_depth(&volume)?, Parallax::Fp)?;
    let again = direct_cwt(&flipped, &config)?;
    for (name, (x, y)) in ["base", "base", "base", "apex"].iter().zip(tet.vertices()) {
        let before = voxel_response(&volume, x, y, 1).expect("planes");
        let after = voxel_response(&again, x, y, 1).expect("planes");
        println!("{name} ({x}, {y}): {} -> {}", before.depth, after.depth);
    }
    Ok(())
}
