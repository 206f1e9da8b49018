use ndarray::Array2;

use super::cwt::CoefficientVolume;
use super::image::Parallax;
use crate::error::Result;
use crate::kernels::DepthPlane;

/// Swaps every plane to the other side of the screen. Coefficients and the
/// scaling plane are kept as they are.
pub fn reverse_depth(volume: &CoefficientVolume) -> Result<CoefficientVolume> {
    let planes = volume
        .planes()
        .iter()
        .map(|(d, a)| (d.reversed(), a.clone()))
        .collect();
    volume.with_planes(planes, volume.scaling().cloned())
}

/// Which translations a readout looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergySampling {
    /// Cell-aligned translations only, where voxel stamps can start.
    #[default]
    VoxelLattice,
    /// Every pixel translation.
    Dense,
}

impl EnergySampling {
    fn includes(self, cell_px: usize, y: usize, x: usize) -> bool {
        match self {
            EnergySampling::Dense => true,
            EnergySampling::VoxelLattice => y.is_multiple_of(cell_px) && x.is_multiple_of(cell_px),
        }
    }
}

/// Sum of squared coefficients per plane, in plane order. The scaling plane
/// is not included.
pub fn plane_energy(
    volume: &CoefficientVolume,
    sampling: EnergySampling,
) -> Vec<(DepthPlane, f64)> {
    let cp = volume.cell_px();
    volume
        .planes()
        .iter()
        .map(|(d, a)| {
            let energy = a
                .indexed_iter()
                .filter(|((y, x), _)| sampling.includes(cp, *y, *x))
                .map(|(_, v)| v * v)
                .sum();
            (*d, energy)
        })
        .collect()
}

/// Plane with the largest energy; the first one wins ties.
pub fn energy_argmax(table: &[(DepthPlane, f64)]) -> Option<DepthPlane> {
    let mut best: Option<(DepthPlane, f64)> = None;
    for &(d, e) in table {
        if best.is_none_or(|(_, b)| e > b) {
            best = Some((d, e));
        }
    }
    best.map(|(d, _)| d)
}

/// Position of a coefficient. `x`, `y` are pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub depth: DepthPlane,
    pub x: usize,
    pub y: usize,
    pub value: f64,
}

/// Largest signed coefficient over all planes. Ties go to the lower plane,
/// then to the first position in row-major order.
pub fn peak(volume: &CoefficientVolume, sampling: EnergySampling) -> Option<Peak> {
    let cp = volume.cell_px();
    let mut best: Option<Peak> = None;
    for (d, a) in volume.planes() {
        for ((y, x), &value) in a.indexed_iter() {
            if sampling.includes(cp, y, x) && best.is_none_or(|b| value > b.value) {
                best = Some(Peak {
                    depth: *d,
                    x,
                    y,
                    value,
                });
            }
        }
    }
    best
}

/// Best plane for a voxel. `offset` is in cells relative to the voxel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoxelResponse {
    pub depth: DepthPlane,
    pub offset: (i64, i64),
    pub value: f64,
}

/// Largest signed coefficient at the stamp origins of voxels within
/// `radius` cells of cell `(cx, cy)`, over all planes. Each plane is read
/// at its own stamp origin, so a voxel whose pattern matches plane `d`
/// answers `d` at offset `(0, 0)`.
///
/// Horizontal-parallax volumes carry no depth information vertically, so
/// both the voxel's own row and the full-parallax stamp row are tried;
/// the latter is where content lands after converting a full-parallax
/// volume.
pub fn voxel_response(
    volume: &CoefficientVolume,
    cx: i64,
    cy: i64,
    radius: i64,
) -> Option<VoxelResponse> {
    let cp = volume.cell_px() as i64;
    let mut best: Option<VoxelResponse> = None;
    for (d, a) in volume.planes() {
        let mut anchors = vec![stamp_row(*d, volume.parallax(), cy)];
        if volume.parallax() == Parallax::Hpo && d.stamp_origin(cy) != cy {
            anchors.push(d.stamp_origin(cy));
        }
        for anchor in anchors {
            for dy in -radius..=radius {
                for dx in -radius..=radius {
                    let ox = d.stamp_origin(cx + dx) * cp;
                    let Some(value) = at(a, ox, (anchor + dy) * cp) else {
                        continue;
                    };
                    if best.is_none_or(|b| value > b.value) {
                        best = Some(VoxelResponse {
                            depth: *d,
                            offset: (dx, dy),
                            value,
                        });
                    }
                }
            }
        }
    }
    best
}

/// Top cell row of a voxel's stamp: footprint-centred for full parallax,
/// the voxel's own row for horizontal parallax.
pub(crate) fn stamp_row(d: DepthPlane, parallax: Parallax, cy: i64) -> i64 {
    match parallax {
        Parallax::Fp => d.stamp_origin(cy),
        Parallax::Hpo => cy,
    }
}

fn at(a: &Array2<f64>, x: i64, y: i64) -> Option<f64> {
    if x < 0 || y < 0 {
        return None;
    }
    a.get([y as usize, x as usize]).copied()
}
