//! Image codecs, volume files and text exports.
//!
//! Images are 8-bit gray, binary PGM (`P5`) or PNG, chosen by file
//! extension. All writes go to a temporary file in the destination directory
//! and are renamed into place, so a failed command leaves no partial output.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::kernels::{Kernel, SpectrumTable};
use crate::transform::{
    read_volume_from, write_volume_to, CoefficientVolume, MultiviewImage, Parallax,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Png,
}

impl ImageFormat {
    /// PNG for `.png`, PGM otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("png") => ImageFormat::Png,
            _ => ImageFormat::Pgm,
        }
    }
}

/// Writes through a temporary file renamed over `path` on success.
pub fn write_atomic(path: &Path, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        write(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Raw 8-bit samples, row-major.
pub fn read_gray8(path: &Path) -> Result<Array2<u8>> {
    let file = File::open(path)?;
    match ImageFormat::from_path(path) {
        ImageFormat::Pgm => decode_pgm(BufReader::new(file)),
        ImageFormat::Png => decode_png(BufReader::new(file)),
    }
}

pub fn write_gray8(pixels: &Array2<u8>, path: &Path) -> Result<()> {
    let format = ImageFormat::from_path(path);
    write_atomic(path, |w| match format {
        ImageFormat::Pgm => encode_pgm(pixels, w),
        ImageFormat::Png => encode_png(pixels, w),
    })
}

/// Decodes a binary PGM with maxval up to 255.
pub fn decode_pgm(mut r: impl Read) -> Result<Array2<u8>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let mut pos = 0;
    let mut token = || -> Result<String> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("truncated PGM header".into()));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    if token()? != "P5" {
        return Err(Error::Format("not a binary PGM (P5) file".into()));
    }
    let mut number = |what: &str| -> Result<usize> {
        token()?
            .parse()
            .map_err(|_| Error::Format(format!("bad PGM {what}")))
    };
    let width = number("width")?;
    let height = number("height")?;
    let maxval = number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Format(format!(
            "unsupported PGM maxval {maxval}: only 8-bit images are supported"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    let start = pos + 1;
    let len = width * height;
    if bytes.len() < start + len {
        return Err(Error::Format("truncated PGM raster".into()));
    }
    let raster = &bytes[start..start + len];
    let pixels = if maxval == 255 {
        raster.to_vec()
    } else {
        raster
            .iter()
            .map(|&v| ((v.min(maxval as u8) as f64 / maxval as f64) * 255.0 + 0.5).floor() as u8)
            .collect()
    };
    Ok(Array2::from_shape_vec((height, width), pixels).expect("raster shape"))
}

pub fn encode_pgm(pixels: &Array2<u8>, w: &mut dyn Write) -> Result<()> {
    let (h, wd) = pixels.dim();
    write!(w, "P5\n{wd} {h}\n255\n")?;
    w.write_all(pixels.as_standard_layout().as_slice().expect("contiguous"))?;
    Ok(())
}

fn decode_png(r: impl Read) -> Result<Array2<u8>> {
    let decoder = png::Decoder::new(r);
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::Format(format!("PNG: {e}")))?;
    let info = reader.info();
    if info.color_type != png::ColorType::Grayscale || info.bit_depth != png::BitDepth::Eight {
        return Err(Error::Format(format!(
            "unsupported PNG {:?} at {:?}: only 8-bit grayscale is supported",
            info.color_type, info.bit_depth
        )));
    }
    let mut buf = vec![0; reader.output_buffer_size()];
    let frame = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::Format(format!("PNG: {e}")))?;
    let (w, h) = (frame.width as usize, frame.height as usize);
    let mut out = Array2::zeros((h, w));
    for (y, row) in buf.chunks(frame.line_size).take(h).enumerate() {
        for (x, &v) in row[..w].iter().enumerate() {
            out[[y, x]] = v;
        }
    }
    Ok(out)
}

fn encode_png(pixels: &Array2<u8>, w: &mut dyn Write) -> Result<()> {
    let (h, wd) = pixels.dim();
    let mut encoder = png::Encoder::new(w, wd as u32, h as u32);
    encoder.set_color(png::ColorType::Grayscale);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder
        .write_header()
        .map_err(|e| Error::Format(format!("PNG: {e}")))?;
    writer
        .write_image_data(pixels.as_standard_layout().as_slice().expect("contiguous"))
        .map_err(|e| Error::Format(format!("PNG: {e}")))?;
    writer
        .finish()
        .map_err(|e| Error::Format(format!("PNG: {e}")))?;
    Ok(())
}

/// `v/255`.
pub fn to_unit(pixels: &Array2<u8>) -> Array2<f64> {
    pixels.mapv(|v| v as f64 / 255.0)
}

/// `floor(v·255 + 1/2)` after clamping into `[0, 1]`.
pub fn quantize(values: &Array2<f64>) -> Array2<u8> {
    values.mapv(|v| (v.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8)
}

/// Path of the file recording an image's cell size.
pub fn cell_sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".cell");
    PathBuf::from(s)
}

/// Cell size from `flag`, or else from the image's sidecar file.
pub fn resolve_cell_px(path: &Path, flag: Option<usize>) -> Result<usize> {
    if let Some(cp) = flag {
        return Ok(cp);
    }
    let sidecar = cell_sidecar(path);
    let text = std::fs::read_to_string(&sidecar).map_err(|_| {
        Error::InvalidArgument(format!(
            "no cell size given: pass --cell or create {}",
            sidecar.display()
        ))
    })?;
    text.trim()
        .parse()
        .map_err(|_| Error::Format(format!("{} does not hold a cell size", sidecar.display())))
}

pub fn read_image(
    path: &Path,
    cell_px: Option<usize>,
    parallax: Parallax,
) -> Result<MultiviewImage> {
    let cp = resolve_cell_px(path, cell_px)?;
    let raw = read_gray8(path)?;
    MultiviewImage::new(to_unit(&raw), cp, parallax)
}

/// Writes the image and its cell-size sidecar.
pub fn write_image(image: &MultiviewImage, path: &Path) -> Result<()> {
    write_gray8(&quantize(image.pixels()), path)?;
    write_atomic(&cell_sidecar(path), |w| {
        writeln!(w, "{}", image.cell_px())?;
        Ok(())
    })
}

pub fn write_volume(volume: &CoefficientVolume, path: &Path) -> Result<()> {
    write_atomic(path, |w| write_volume_to(volume, w))
}

pub fn read_volume(path: &Path) -> Result<CoefficientVolume> {
    read_volume_from(BufReader::new(File::open(path)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlaneStyle {
    /// Maximum black, minimum white, zero mid-gray.
    #[default]
    Pseudo,
    /// Minimum black, maximum white.
    Gray,
}

/// Renders a coefficient array as an 8-bit image.
pub fn render_plane_image(coeffs: &Array2<f64>, style: PlaneStyle) -> Array2<u8> {
    match style {
        PlaneStyle::Pseudo => {
            let scale = coeffs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            coeffs.mapv(|v| {
                let t = if scale > 0.0 { v / scale } else { 0.0 };
                (255.0 * (0.5 - 0.5 * t) + 0.5).floor().clamp(0.0, 255.0) as u8
            })
        }
        PlaneStyle::Gray => {
            let lo = coeffs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = coeffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            coeffs.mapv(|v| {
                if hi > lo {
                    (255.0 * (v - lo) / (hi - lo) + 0.5).floor() as u8
                } else {
                    128
                }
            })
        }
    }
}

/// One row per line, space-separated.
pub fn write_kernel_text(kernel: &Kernel, path: &Path) -> Result<()> {
    write_atomic(path, |w| {
        for row in kernel.samples.rows() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    })
}

/// CSV with header `omega,analytic,numeric,power`; missing columns are
/// left empty.
pub fn write_spectrum_csv(table: &SpectrumTable, w: &mut dyn Write) -> Result<()> {
    writeln!(w, "omega,analytic,numeric,power")?;
    let cell = |col: &Option<Vec<f64>>, i: usize| {
        col.as_ref().map(|c| c[i].to_string()).unwrap_or_default()
    };
    for (i, omega) in table.omega.iter().enumerate() {
        writeln!(
            w,
            "{omega},{},{},{}",
            cell(&table.analytic, i),
            cell(&table.numeric, i),
            cell(&table.power, i)
        )?;
    }
    Ok(())
}
