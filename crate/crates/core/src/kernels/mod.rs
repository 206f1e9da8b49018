//! Voxel patterns, pattern-based wavelets, scaling functions and their spectra.

mod kernel;
mod pattern;
mod spectrum;

pub(crate) use kernel::footprint_pattern;
pub use kernel::{
    make_auxiliary, make_scaling, make_wavelet_1d, make_wavelet_2d, pulse_runs, sample_pattern,
    wavelet_bias, wavelet_coeff, wavelet_levels, Kernel, KernelKind,
};
pub use pattern::{pattern_geometry, rect_pulse, DepthPlane, PatternGeometry, Rational, Sign};
pub use spectrum::{
    analytic_ft, closed_form_pattern_1, closed_form_pattern_2, closed_form_wavelet_1,
    closed_form_wavelet_2, dominant_extremum, numeric_ft, numeric_ft_2d, sinc, Spectrum2d,
    SpectrumSpec, SpectrumTable,
};
