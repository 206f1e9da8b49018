use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pattern order {0}: order must be at least 1")]
    InvalidOrder(usize),

    #[error("depth plane 0 does not exist")]
    ZeroDepth,

    #[error("order {order} does not divide the cell size of {cell_px} px: each pulse must span whole pixels")]
    Divisibility { order: usize, cell_px: usize },

    #[error("plane {depth} cannot be sampled at {cell_px} px per cell: {cell_px} is not a multiple of {order}", order = depth.unsigned_abs())]
    PlaneDivisibility { depth: i32, cell_px: usize },

    #[error("cell size must be at least {min} px, got {cell_px}")]
    CellTooSmall { cell_px: usize, min: usize },

    #[error("image of {width}x{height} px is not made of whole {cell_px} px cells")]
    WholeCells {
        width: usize,
        height: usize,
        cell_px: usize,
    },

    #[error("intensity {value} at ({x}, {y}) is outside [0, 1]")]
    IntensityRange { x: usize, y: usize, value: f64 },

    #[error("the depth plane set is empty")]
    EmptyPlaneSet,

    #[error("depth plane {0} appears more than once")]
    DuplicatePlane(i32),

    #[error("plane {depth} has shape {got:?}, expected {expected:?}")]
    DimensionMismatch {
        depth: i32,
        got: (usize, usize),
        expected: (usize, usize),
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("voxel {index} at cell ({cx}, {cy}) with depth {depth} does not fit the {width}x{height} cell canvas")]
    Footprint {
        index: usize,
        cx: i64,
        cy: i64,
        depth: i32,
        width: usize,
        height: usize,
    },

    #[error("scene: {0}")]
    Scene(String),

    #[error("format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
