//! Depth of single voxels: each one answers on its own plane.

use mvwave::kernels::DepthPlane;
use mvwave::synth::{render_scene, SceneSpec, Voxel};
use mvwave::transform::{
    direct_cwt, energy_argmax, peak, plane_energy, EnergySampling, Parallax, TransformConfig,
};

fn main() -> mvwave::Result<()> {
    let cell = 12;
    for d in [-6, -3, -1, 2, 4] {
        let depth = DepthPlane::new(d)?;
        let scene =
            SceneSpec::new(10, 10, cell, Parallax::Fp).with_voxel(Voxel::new(5, 5, depth, 1.0));
        let volume = direct_cwt(&render_scene(&scene)?, &TransformConfig::for_cell(cell))?;
        let energy = plane_energy(&volume, EnergySampling::VoxelLattice);
        let best = energy_argmax(&energy).expect("planes");
        let p = peak(&volume, EnergySampling::VoxelLattice).expect("planes");
        println!(
            "voxel on {depth}: energy argmax {best}, peak {} at px ({}, {}), stamp cell {}",
            p.depth,
            p.x,
            p.y,
            depth.stamp_origin(5)
        );
    }
    Ok(())
}
