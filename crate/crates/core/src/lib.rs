//! Pattern-based multiview wavelets.
//!
//! A multiview image seen through a lenticular plate is a sum of voxel
//! patterns, one per 3D point, whose pulse layout encodes the point's depth
//! plane. This crate builds the patterns and the wavelets derived from them,
//! decomposes images into per-plane coefficient arrays, edits those arrays
//! (depth reversal, full-to-horizontal parallax conversion) and
//! reconstructs images from them. A small voxel scene synthesiser provides
//! test objects.

pub mod cli;
pub mod error;
mod fft;
pub mod io;
pub mod kernels;
pub mod synth;
pub mod transform;

pub use error::{Error, Result};
