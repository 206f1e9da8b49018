//! Direct and inverse wavelet transforms by depth planes, and edits in
//! coefficient space.

mod cwt;
mod engine;
mod format;
mod image;
mod modify;

pub use cwt::{
    analysis_kernel, direct_cwt, inverse_cwt, inverse_cwt_with, inverse_raw, ncc, scaling_kernel,
    stamp_pattern, synthesize, CoefficientVolume, Synthesis, TransformConfig,
};
pub use engine::{convolve_adjoint, correlate, THREADS_ENV};
pub use format::{read_volume_from, write_volume_to, MAGIC, VERSION};
pub use image::{MultiviewImage, Parallax};
pub(crate) use modify::stamp_row;
pub use modify::{
    energy_argmax, peak, plane_energy, reverse_depth, voxel_response, EnergySampling, Peak,
    VoxelResponse,
};
