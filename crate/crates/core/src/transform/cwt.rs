use ndarray::{s, Array2, ArrayView2};
use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use super::engine::{convolve_adjoint, correlate, install};
use super::image::{MultiviewImage, Parallax};
use crate::error::{Error, Result};
use crate::fft::{fft2, padded_fft2, Direction};
use crate::kernels::{footprint_pattern, make_wavelet_1d, make_wavelet_2d, DepthPlane};

/// Which depth planes to analyse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformConfig {
    pub planes: Vec<DepthPlane>,
    /// Also compute the scaling-function plane.
    pub include_scaling: bool,
}

impl Default for TransformConfig {
    /// Planes ±1..±8 plus the scaling plane.
    fn default() -> Self {
        TransformConfig {
            planes: symmetric_planes(8),
            include_scaling: true,
        }
    }
}

fn symmetric_planes(max_order: i32) -> Vec<DepthPlane> {
    (-max_order..=max_order)
        .filter(|&d| d != 0)
        .map(|d| DepthPlane::new(d).expect("non-zero"))
        .collect()
}

impl TransformConfig {
    pub fn new(planes: impl IntoIterator<Item = DepthPlane>) -> Self {
        TransformConfig {
            planes: planes.into_iter().collect(),
            include_scaling: true,
        }
    }

    /// Builds a config from signed plane indices, rejecting zero.
    pub fn from_depths(depths: &[i32]) -> Result<Self> {
        Ok(Self::new(
            depths
                .iter()
                .map(|&d| DepthPlane::new(d))
                .collect::<Result<Vec<_>>>()?,
        ))
    }

    /// The default planes whose order divides `cell_px`.
    pub fn for_cell(cell_px: usize) -> Self {
        let mut config = Self::default();
        config.planes.retain(|d| cell_px.is_multiple_of(d.order()));
        config
    }

    pub fn without_scaling(mut self) -> Self {
        self.include_scaling = false;
        self
    }

    /// Checks the plane set is non-empty, duplicate free and samplable.
    pub fn validate(&self, cell_px: usize) -> Result<()> {
        if self.planes.is_empty() {
            return Err(Error::EmptyPlaneSet);
        }
        check_planes(self.planes.iter().copied(), cell_px)
    }
}

fn check_planes(planes: impl Iterator<Item = DepthPlane>, cell_px: usize) -> Result<()> {
    if cell_px == 0 {
        return Err(Error::CellTooSmall { cell_px, min: 1 });
    }
    let mut seen = std::collections::HashSet::new();
    for d in planes {
        if !seen.insert(d) {
            return Err(Error::DuplicatePlane(d.get()));
        }
        if !cell_px.is_multiple_of(d.order()) {
            return Err(Error::PlaneDivisibility {
                depth: d.get(),
                cell_px,
            });
        }
    }
    Ok(())
}

/// Per-plane coefficient arrays, sorted by depth, plus an optional scaling
/// plane. All arrays share the source image's shape.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVolume {
    planes: Vec<(DepthPlane, Array2<f64>)>,
    scaling: Option<Array2<f64>>,
    cell_px: usize,
    parallax: Parallax,
    width: usize,
    height: usize,
}

impl CoefficientVolume {
    pub fn new(
        mut planes: Vec<(DepthPlane, Array2<f64>)>,
        scaling: Option<Array2<f64>>,
        cell_px: usize,
        parallax: Parallax,
        width: usize,
        height: usize,
    ) -> Result<Self> {
        let expected = (height, width);
        for (d, arr) in &planes {
            if arr.dim() != expected {
                return Err(Error::DimensionMismatch {
                    depth: d.get(),
                    got: arr.dim(),
                    expected,
                });
            }
        }
        if let Some(arr) = &scaling {
            if arr.dim() != expected {
                return Err(Error::DimensionMismatch {
                    depth: 0,
                    got: arr.dim(),
                    expected,
                });
            }
        }
        planes.sort_by_key(|(d, _)| *d);
        if let Some(w) = planes.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicatePlane(w[0].0.get()));
        }
        if cell_px == 0 {
            return Err(Error::CellTooSmall { cell_px, min: 1 });
        }
        Ok(CoefficientVolume {
            planes,
            scaling,
            cell_px,
            parallax,
            width,
            height,
        })
    }

    pub fn planes(&self) -> &[(DepthPlane, Array2<f64>)] {
        &self.planes
    }

    pub fn plane(&self, d: DepthPlane) -> Option<&Array2<f64>> {
        self.planes
            .binary_search_by_key(&d, |(p, _)| *p)
            .ok()
            .map(|i| &self.planes[i].1)
    }

    pub fn depths(&self) -> Vec<DepthPlane> {
        self.planes.iter().map(|(d, _)| *d).collect()
    }

    pub fn scaling(&self) -> Option<&Array2<f64>> {
        self.scaling.as_ref()
    }

    pub fn cell_px(&self) -> usize {
        self.cell_px
    }

    /// Parallax of the kernels used for analysis.
    pub fn parallax(&self) -> Parallax {
        self.parallax
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[allow(clippy::type_complexity)]
    pub fn into_parts(self) -> (Vec<(DepthPlane, Array2<f64>)>, Option<Array2<f64>>) {
        (self.planes, self.scaling)
    }

    /// A volume of the same shape and metadata with new plane data.
    pub fn with_planes(
        &self,
        planes: Vec<(DepthPlane, Array2<f64>)>,
        scaling: Option<Array2<f64>>,
    ) -> Result<Self> {
        Self::new(
            planes,
            scaling,
            self.cell_px,
            self.parallax,
            self.width,
            self.height,
        )
    }

    /// Sum of elementwise products over all planes with matching depths and
    /// the scaling planes.
    pub fn inner(&self, other: &CoefficientVolume) -> f64 {
        let mut total = 0.0;
        for (d, a) in &self.planes {
            if let Some(b) = other.plane(*d) {
                total += (a * b).sum();
            }
        }
        if let (Some(a), Some(b)) = (&self.scaling, &other.scaling) {
            total += (a * b).sum();
        }
        total
    }
}

/// Wavelet used for plane `d`: the 2D wavelet for full parallax, the 1D
/// wavelet repeated over one cell of rows for horizontal parallax.
pub fn analysis_kernel(d: DepthPlane, parallax: Parallax, cell_px: usize) -> Result<Array2<f64>> {
    match parallax {
        Parallax::Fp => Ok(make_wavelet_2d(d.order(), d.sign(), cell_px)?.samples),
        Parallax::Hpo => {
            let k = make_wavelet_1d(d.order(), d.sign(), cell_px)?;
            let row = k.row();
            Ok(Array2::from_shape_fn((cell_px, row.len()), |(_, x)| row[x]))
        }
    }
}

/// Scaling function samples and the coefficient its plane is scaled by.
pub fn scaling_kernel(parallax: Parallax, cell_px: usize) -> (Array2<f64>, f64) {
    match parallax {
        Parallax::Fp => (Array2::ones((2 * cell_px, 2 * cell_px)), 0.25),
        Parallax::Hpo => (Array2::ones((cell_px, 2 * cell_px)), 0.5),
    }
}

/// Voxel pattern as stamped into an image: the outer product of the 1D
/// pattern for full parallax, one cell of identical rows for horizontal.
pub fn stamp_pattern(d: DepthPlane, parallax: Parallax, cell_px: usize) -> Result<Array2<f64>> {
    let p = footprint_pattern(d.order(), d.sign(), cell_px)?;
    let len = p.len();
    Ok(match parallax {
        Parallax::Fp => Array2::from_shape_fn((len, len), |(y, x)| p[y] * p[x]),
        Parallax::Hpo => Array2::from_shape_fn((cell_px, len), |(_, x)| p[x]),
    })
}

/// Correlates the image with every plane's wavelet (and the scaling
/// function). Kernels follow the image's parallax.
pub fn direct_cwt(image: &MultiviewImage, config: &TransformConfig) -> Result<CoefficientVolume> {
    let cp = image.cell_px();
    config.validate(cp)?;
    let parallax = image.parallax();
    let px = image.pixels().view();
    let planes = install(|| {
        config
            .planes
            .par_iter()
            .map(|&d| Ok((d, correlate(px, analysis_kernel(d, parallax, cp)?.view()))))
            .collect::<Result<Vec<_>>>()
    })?;
    let scaling = config.include_scaling.then(|| {
        let (phi, coef) = scaling_kernel(parallax, cp);
        correlate(px, phi.view()) * coef
    });
    CoefficientVolume::new(planes, scaling, cp, parallax, image.width(), image.height())
}

/// How planes are merged back into an image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Synthesis {
    /// Matched-filter sum: each plane convolved with its wavelet and divided
    /// by the wavelet energy, plus the scaling plane.
    Adjoint,
    /// The matched-filter sum followed by a regularised inverse of the
    /// synthesis frame operator. `regularization` is relative to the
    /// operator's peak.
    DualFrame { regularization: f64 },
}

impl Default for Synthesis {
    fn default() -> Self {
        Synthesis::DualFrame {
            regularization: 1e-5,
        }
    }
}

struct SynthesisKernels {
    planes: Vec<(Array2<f64>, f64)>,
    scaling: Option<(Array2<f64>, f64)>,
}

/// Kernels for synthesis in `target` parallax with their weights: `1/E_d`
/// for wavelets and `1/(coef·(Σφ)²)` for the scaling function, which
/// restores the mean exactly.
fn synthesis_kernels(volume: &CoefficientVolume, target: Parallax) -> Result<SynthesisKernels> {
    let cp = volume.cell_px();
    check_planes(volume.depths().into_iter(), cp)?;
    let planes = volume
        .planes()
        .iter()
        .map(|(d, _)| {
            let k = analysis_kernel(*d, target, cp)?;
            let energy = k.iter().map(|v| v * v).sum::<f64>();
            Ok((k, 1.0 / energy))
        })
        .collect::<Result<Vec<_>>>()?;
    let scaling = volume.scaling().map(|_| {
        let (phi, coef) = scaling_kernel(target, cp);
        let total = phi.sum();
        (phi, 1.0 / (coef * total * total))
    });
    Ok(SynthesisKernels { planes, scaling })
}

/// Reconstructs an unclamped image from a volume using `target` parallax
/// kernels.
pub fn synthesize(
    volume: &CoefficientVolume,
    target: Parallax,
    synthesis: Synthesis,
) -> Result<Array2<f64>> {
    let kernels = synthesis_kernels(volume, target)?;
    match synthesis {
        Synthesis::Adjoint => Ok(adjoint_sum(volume, &kernels)),
        Synthesis::DualFrame { regularization } => {
            if !(regularization > 0.0 && regularization.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "regularization must be positive, got {regularization}"
                )));
            }
            let coef = scaling_kernel(target, volume.cell_px()).1;
            Ok(dual_frame(volume, &kernels, coef, regularization))
        }
    }
}

fn adjoint_sum(volume: &CoefficientVolume, kernels: &SynthesisKernels) -> Array2<f64> {
    let mut out = Array2::zeros((volume.height(), volume.width()));
    for ((_, coeffs), (k, weight)) in volume.planes().iter().zip(&kernels.planes) {
        out.scaled_add(*weight, &convolve_adjoint(coeffs.view(), k.view()));
    }
    if let (Some(sc), Some((phi, w0))) = (volume.scaling(), &kernels.scaling) {
        out.scaled_add(*w0, &convolve_adjoint(sc.view(), phi.view()));
    }
    out
}

/// Solves `(S + ε)·X = A` in the frequency domain, where `A` is the
/// transform of the matched-filter sum and `S = Σ w_d·|ψ̂_d|²` (plus the
/// scaling term), on a canvas padded to at least twice the image.
fn dual_frame(
    volume: &CoefficientVolume,
    kernels: &SynthesisKernels,
    scaling_coef: f64,
    regularization: f64,
) -> Array2<f64> {
    let (h, w) = (volume.height(), volume.width());
    let (mut kh, mut kw) = (0, 0);
    for (k, _) in kernels.planes.iter().chain(kernels.scaling.as_ref()) {
        kh = kh.max(k.nrows());
        kw = kw.max(k.ncols());
    }
    let shape = ((2 * h).max(h + kh), (2 * w).max(w + kw));
    let mut numerator = Array2::from_elem(shape, Complex64::default());
    let mut frame = Array2::<f64>::zeros(shape);

    let mut accumulate =
        |coeffs: ArrayView2<'_, f64>, k: &Array2<f64>, weight: f64, frame_weight: f64| {
            let kf = padded_fft2(k, shape);
            let cf = padded_fft2(&coeffs.to_owned(), shape);
            numerator.zip_mut_with(&(cf * &kf), |n, v| *n += v * weight);
            frame.zip_mut_with(&kf, |s, v| *s += v.norm_sqr() * frame_weight);
        };
    for ((_, coeffs), (k, weight)) in volume.planes().iter().zip(&kernels.planes) {
        accumulate(coeffs.view(), k, *weight, *weight);
    }
    if let (Some(sc), Some((phi, w0))) = (volume.scaling(), &kernels.scaling) {
        accumulate(sc.view(), phi, *w0, *w0 * scaling_coef);
    }

    let peak = frame.iter().copied().fold(0.0, f64::max);
    let eps = regularization * peak.max(f64::MIN_POSITIVE);
    numerator.zip_mut_with(&frame, |n, &s| *n /= s + eps);
    fft2(&mut numerator, Direction::Inverse);
    let norm = (shape.0 * shape.1) as f64;
    numerator.slice(s![..h, ..w]).mapv(|v| v.re / norm)
}

/// Default inverse: dual-frame synthesis with `target` kernels, clamped to
/// `[0, 1]`.
pub fn inverse_cwt(volume: &CoefficientVolume, target: Parallax) -> Result<MultiviewImage> {
    inverse_cwt_with(volume, target, Synthesis::default())
}

pub fn inverse_cwt_with(
    volume: &CoefficientVolume,
    target: Parallax,
    synthesis: Synthesis,
) -> Result<MultiviewImage> {
    let pixels = synthesize(volume, target, synthesis)?;
    MultiviewImage::clamped(pixels, volume.cell_px(), target)
}

/// Exact adjoint of [`direct_cwt`] for the volume's own parallax: no energy
/// weighting, no clamping. The scaling plane is scaled by its coefficient,
/// as in the analysis.
pub fn inverse_raw(volume: &CoefficientVolume) -> Result<Array2<f64>> {
    let cp = volume.cell_px();
    let parallax = volume.parallax();
    let mut out = Array2::zeros((volume.height(), volume.width()));
    for (d, coeffs) in volume.planes() {
        let k = analysis_kernel(*d, parallax, cp)?;
        out += &convolve_adjoint(coeffs.view(), k.view());
    }
    if let Some(sc) = volume.scaling() {
        let (phi, coef) = scaling_kernel(parallax, cp);
        out.scaled_add(coef, &convolve_adjoint(sc.view(), phi.view()));
    }
    Ok(out)
}

/// Normalised cross-correlation of two equally shaped arrays. Returns 0 when
/// either is constant.
pub fn ncc(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    let (ma, mb) = (a.mean().unwrap_or(0.0), b.mean().unwrap_or(0.0));
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b.iter()) {
        let (x, y) = (x - ma, y - mb);
        ab += x * y;
        aa += x * x;
        bb += y * y;
    }
    if aa == 0.0 || bb == 0.0 {
        0.0
    } else {
        ab / (aa * bb).sqrt()
    }
}
