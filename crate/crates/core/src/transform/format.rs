//! MVWV: binary coefficient volume files.
//!
//! Layout, all little-endian:
//!
//! ```text
//! "MVWV" | version u16 | parallax u8 (0 hpo, 1 fp)
//! width u32 | height u32 | cell_px u32 | plane count u16
//! per plane: depth i16 | kind u8 (0 wavelet, 1 scaling) | width*height f32, row-major
//! ```
//!
//! The scaling plane is stored with depth 0.

use std::io::{Read, Write};

use ndarray::Array2;

use super::cwt::CoefficientVolume;
use super::image::Parallax;
use crate::error::{Error, Result};
use crate::kernels::DepthPlane;

pub const MAGIC: &[u8; 4] = b"MVWV";
pub const VERSION: u16 = 1;

const KIND_WAVELET: u8 = 0;
const KIND_SCALING: u8 = 1;

pub fn write_volume_to<W: Write>(volume: &CoefficientVolume, mut w: W) -> Result<()> {
    let count = volume.planes().len() + usize::from(volume.scaling().is_some());
    let count = u16::try_from(count)
        .map_err(|_| Error::Format(format!("{count} planes do not fit the plane count field")))?;
    let dim = |v: usize, what: &str| {
        u32::try_from(v).map_err(|_| Error::Format(format!("{what} {v} does not fit in 32 bits")))
    };
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&[match volume.parallax() {
        Parallax::Hpo => 0,
        Parallax::Fp => 1,
    }])?;
    w.write_all(&dim(volume.width(), "width")?.to_le_bytes())?;
    w.write_all(&dim(volume.height(), "height")?.to_le_bytes())?;
    w.write_all(&dim(volume.cell_px(), "cell size")?.to_le_bytes())?;
    w.write_all(&count.to_le_bytes())?;
    let mut write_plane = |depth: i16, kind: u8, data: &Array2<f64>| -> Result<()> {
        w.write_all(&depth.to_le_bytes())?;
        w.write_all(&[kind])?;
        let mut buf = Vec::with_capacity(data.len() * 4);
        for &v in data.iter() {
            buf.extend_from_slice(&(v as f32).to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    };
    for (d, data) in volume.planes() {
        let depth = i16::try_from(d.get())
            .map_err(|_| Error::Format(format!("depth {d} does not fit in 16 bits")))?;
        write_plane(depth, KIND_WAVELET, data)?;
    }
    if let Some(sc) = volume.scaling() {
        write_plane(0, KIND_SCALING, sc)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_volume_from<R: Read>(mut r: R) -> Result<CoefficientVolume> {
    let mut magic = [0u8; 4];
    read_exact(&mut r, &mut magic, "magic")?;
    if &magic != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {magic:?}, expected \"MVWV\""
        )));
    }
    let version = u16::from_le_bytes(read_array(&mut r, "version")?);
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported version {version}, expected {VERSION}"
        )));
    }
    let parallax = match read_array::<1>(&mut r, "parallax")?[0] {
        0 => Parallax::Hpo,
        1 => Parallax::Fp,
        other => return Err(Error::Format(format!("unknown parallax byte {other}"))),
    };
    let width = u32::from_le_bytes(read_array(&mut r, "width")?) as usize;
    let height = u32::from_le_bytes(read_array(&mut r, "height")?) as usize;
    let cell_px = u32::from_le_bytes(read_array(&mut r, "cell size")?) as usize;
    let count = u16::from_le_bytes(read_array(&mut r, "plane count")?);
    let samples = width
        .checked_mul(height)
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;

    let mut planes = Vec::new();
    let mut scaling = None;
    let mut buf = vec![0u8; samples * 4];
    for index in 0..count {
        let depth = i16::from_le_bytes(read_array(&mut r, "plane header")?);
        let kind = read_array::<1>(&mut r, "plane kind")?[0];
        read_exact(&mut r, &mut buf, "plane samples")?;
        let values: Vec<f64> = buf
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
            .collect();
        let data = Array2::from_shape_vec((height, width), values).expect("plane shape");
        match kind {
            KIND_WAVELET => {
                let d = DepthPlane::new(depth.into())
                    .map_err(|_| Error::Format(format!("wavelet plane {index} has depth 0")))?;
                planes.push((d, data));
            }
            KIND_SCALING => {
                if scaling.replace(data).is_some() {
                    return Err(Error::Format("more than one scaling plane".into()));
                }
            }
            other => return Err(Error::Format(format!("unknown plane kind {other}"))),
        }
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after the last plane".into()));
    }
    CoefficientVolume::new(planes, scaling, cell_px, parallax, width, height).map_err(|e| match e {
        Error::DuplicatePlane(d) => Error::Format(format!("depth plane {d} stored twice")),
        other => other,
    })
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => {
            Error::Format(format!("truncated file while reading {what}"))
        }
        _ => Error::Io(e),
    })
}

fn read_array<const N: usize>(r: &mut impl Read, what: &str) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    read_exact(r, &mut buf, what)?;
    Ok(buf)
}
