//! Continuous Fourier spectra of patterns and wavelets.
//!
//! Frequencies are angular, in radians per cell. Spectra are referenced to
//! the centre of the kernel support, so the symmetric kernels have purely
//! real transforms and are reported as signed real amplitudes. The order-one
//! wavelet is reported in its French-hat phase (pulse centred in the
//! two-cell support); `numeric_ft` applies the same half-cell shift.

use ndarray::Array2;

use super::kernel::{wavelet_bias, wavelet_coeff, Kernel, KernelKind};
use super::pattern::{footprint_cells, pattern_geometry, ratio_to_f64, Sign};
use crate::error::{Error, Result};
use crate::fft::{padded_fft, padded_fft2};

/// Unnormalised `sin(x)/x`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// What to transform analytically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumSpec {
    pub kind: KernelKind,
    pub order: usize,
    pub sign: Sign,
}

impl SpectrumSpec {
    pub fn pattern(order: usize, sign: Sign) -> Self {
        SpectrumSpec {
            kind: KernelKind::Pattern,
            order,
            sign,
        }
    }

    pub fn wavelet(order: usize, sign: Sign) -> Self {
        SpectrumSpec {
            kind: KernelKind::Wavelet1D,
            order,
            sign,
        }
    }

    pub fn scaling() -> Self {
        SpectrumSpec {
            kind: KernelKind::Scaling1D,
            order: 0,
            sign: Sign::Positive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumTable {
    pub omega: Vec<f64>,
    pub analytic: Option<Vec<f64>>,
    pub numeric: Option<Vec<f64>>,
    pub power: Option<Vec<f64>>,
}

impl SpectrumTable {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Fills the analytic column on this table's frequency grid.
    pub fn with_analytic(mut self, spec: SpectrumSpec) -> Result<Self> {
        self.analytic = analytic_ft(spec, &self.omega)?.analytic;
        Ok(self)
    }

    /// Largest `|analytic - numeric|` over rows with `lo < ω ≤ hi`, relative
    /// to the peak analytic magnitude in the same range.
    pub fn max_relative_deviation(&self, lo: f64, hi: f64) -> Option<f64> {
        let (a, n) = (self.analytic.as_ref()?, self.numeric.as_ref()?);
        let mut peak = 0.0f64;
        let mut worst = 0.0f64;
        for ((&w, &a), &n) in self.omega.iter().zip(a).zip(n) {
            if w > lo && w <= hi {
                peak = peak.max(a.abs());
                worst = worst.max((a - n).abs());
            }
        }
        (peak > 0.0).then(|| worst / peak)
    }
}

/// Offsets of pulse centres from the support centre, pulse width, and the
/// support width, all in cells.
fn pulse_layout(kind: KernelKind, order: usize, sign: Sign) -> Result<(Vec<f64>, f64, f64)> {
    let geometry = pattern_geometry(order, sign)?;
    let width = ratio_to_f64(geometry.pulse_width());
    let support = match kind {
        KernelKind::Pattern => geometry.support_cells,
        _ => footprint_cells(order),
    } as f64;
    let offsets = if kind == KernelKind::Wavelet1D && order == 1 {
        vec![0.0]
    } else {
        geometry
            .pulse_centers()
            .into_iter()
            .map(|c| ratio_to_f64(c) - support / 2.0)
            .collect()
    };
    Ok((offsets, width, support))
}

/// Exact transform by summing one shifted sinc per pulse, plus the bias
/// pulse for wavelets. `ω = 0` returns the exact area.
pub fn analytic_ft(spec: SpectrumSpec, omega: &[f64]) -> Result<SpectrumTable> {
    let values: Vec<f64> = match spec.kind {
        KernelKind::Scaling1D => omega
            .iter()
            .map(|&w| if w == 0.0 { 2.0 } else { 2.0 * sinc(w) })
            .collect(),
        KernelKind::Pattern | KernelKind::Wavelet1D => {
            let (offsets, width, support) = pulse_layout(spec.kind, spec.order, spec.sign)?;
            let pulses = |w: f64| -> f64 {
                offsets
                    .iter()
                    .map(|&delta| width * sinc(w * width / 2.0) * (w * delta).cos())
                    .sum()
            };
            if spec.kind == KernelKind::Pattern {
                omega
                    .iter()
                    .map(|&w| if w == 0.0 { 1.0 } else { pulses(w) })
                    .collect()
            } else {
                let c = ratio_to_f64(wavelet_coeff(spec.order, false));
                let bias_area = ratio_to_f64(wavelet_bias(spec.order, false)) * support;
                omega
                    .iter()
                    .map(|&w| {
                        if w == 0.0 {
                            0.0
                        } else {
                            c * (pulses(w) + bias_area * sinc(w * support / 2.0))
                        }
                    })
                    .collect()
            }
        }
        other => {
            return Err(Error::Unsupported(format!(
                "no analytic spectrum for {other:?}; use numeric_ft_2d for 2D kernels"
            )))
        }
    };
    Ok(SpectrumTable {
        omega: omega.to_vec(),
        analytic: Some(values),
        numeric: None,
        power: None,
    })
}

/// Closed form for the first-order pattern: `sinc(ω/2)`.
pub fn closed_form_pattern_1(omega: f64) -> f64 {
    sinc(omega / 2.0)
}

/// Closed forms for the second-order patterns. The merged negative pattern
/// coincides with the first-order one.
pub fn closed_form_pattern_2(omega: f64, sign: Sign) -> f64 {
    match sign {
        Sign::Negative => {
            if omega == 0.0 {
                1.0
            } else {
                4.0 / omega * (omega / 4.0).sin() * (omega / 4.0).cos()
            }
        }
        Sign::Positive => {
            if omega == 0.0 {
                1.0
            } else {
                2.0 / omega * (omega / 2.0).sin() * (4.0 * (omega / 4.0).cos().powi(2) - 3.0)
            }
        }
    }
}

/// Closed form for the first-order (French hat) wavelet.
pub fn closed_form_wavelet_1(omega: f64) -> f64 {
    if omega == 0.0 {
        0.0
    } else {
        2.0 / omega * (omega / 2.0).sin() * (1.0 - (omega / 2.0).cos())
    }
}

/// Closed form for the second-order wavelets, `±2·sinc(ω/2)·sin²(ω/4)`,
/// positive for the merged (negative-depth) pulse.
pub fn closed_form_wavelet_2(omega: f64, sign: Sign) -> f64 {
    let s = match sign {
        Sign::Negative => 1.0,
        Sign::Positive => -1.0,
    };
    s * 2.0 * sinc(omega / 2.0) * (omega / 4.0).sin().powi(2)
}

/// Spectrum of the samples of a one-dimensional kernel.
///
/// Each sample is a pixel-wide box, so the DFT of the zero-padded samples is
/// multiplied by the box transform and rescaled to radians per cell. Rows
/// run from `ω = 0` to the pixel Nyquist frequency `π·cell_px`.
pub fn numeric_ft(kernel: &Kernel, pad_factor: usize) -> Result<SpectrumTable> {
    if pad_factor == 0 {
        return Err(Error::InvalidArgument(
            "pad factor must be at least 1".into(),
        ));
    }
    if kernel.samples.nrows() != 1 {
        return Err(Error::Unsupported(
            "numeric_ft takes 1D kernels; use numeric_ft_2d".into(),
        ));
    }
    let cp = kernel.cell_px;
    let mut row = kernel.row().to_vec();
    if kernel.kind == KernelKind::Wavelet1D && kernel.order == 1 {
        if !cp.is_multiple_of(2) {
            return Err(Error::Unsupported(
                "the first-order wavelet spectrum needs an even cell size".into(),
            ));
        }
        row.rotate_right(cp / 2);
    }
    let len = row.len();
    let n = len * pad_factor;
    let spectrum = padded_fft(&row, n);
    let h = 1.0 / cp as f64;
    let center = len as f64 * h / 2.0;
    let mut omega = Vec::with_capacity(n / 2 + 1);
    let mut numeric = Vec::with_capacity(n / 2 + 1);
    let mut power = Vec::with_capacity(n / 2 + 1);
    for (m, x) in spectrum.iter().take(n / 2 + 1).enumerate() {
        let w = 2.0 * std::f64::consts::PI * m as f64 * cp as f64 / n as f64;
        let phase = rustfft::num_complex::Complex64::from_polar(1.0, w * (center - h / 2.0));
        let f = x * phase * (h * sinc(w * h / 2.0));
        omega.push(w);
        numeric.push(f.re);
        power.push(f.norm_sqr());
    }
    Ok(SpectrumTable {
        omega,
        analytic: None,
        numeric: Some(numeric),
        power: Some(power),
    })
}

/// Power spectrum of a 2D kernel on a padded grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2d {
    /// Angular frequency of each row/column index, radians per cell.
    pub omega: Vec<f64>,
    pub power: Array2<f64>,
}

pub fn numeric_ft_2d(kernel: &Kernel, pad_factor: usize) -> Result<Spectrum2d> {
    if pad_factor == 0 {
        return Err(Error::InvalidArgument(
            "pad factor must be at least 1".into(),
        ));
    }
    let (h, w) = kernel.samples.dim();
    let n = h.max(w) * pad_factor;
    let spectrum = padded_fft2(&kernel.samples, (n, n));
    let cp = kernel.cell_px as f64;
    let pixel = 1.0 / cp;
    let omega: Vec<f64> = (0..n)
        .map(|m| {
            let m = if m <= n / 2 {
                m as f64
            } else {
                m as f64 - n as f64
            };
            2.0 * std::f64::consts::PI * m * cp / n as f64
        })
        .collect();
    let power = Array2::from_shape_fn((n, n), |(y, x)| {
        let aperture = pixel * pixel * sinc(omega[x] * pixel / 2.0) * sinc(omega[y] * pixel / 2.0);
        spectrum[[y, x]].norm_sqr() * aperture * aperture
    });
    Ok(Spectrum2d { omega, power })
}

/// Frequency of the dominant extremum past the DC lobe: the largest `|F|`
/// after the first zero crossing, over `0 < ω ≤ limit`.
pub fn dominant_extremum(omega: &[f64], values: &[f64], limit: f64) -> Option<f64> {
    let rows: Vec<(f64, f64)> = omega
        .iter()
        .copied()
        .zip(values.iter().copied())
        .filter(|&(w, _)| w > 0.0 && w <= limit)
        .collect();
    let crossing = rows
        .windows(2)
        .position(|p| p[0].1.signum() != p[1].1.signum())?;
    rows[crossing + 1..]
        .iter()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|&(w, _)| w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_wavelet_1d, sample_pattern};
    use std::f64::consts::PI;

    fn grid(max: f64, steps: usize) -> Vec<f64> {
        (0..=steps).map(|i| max * i as f64 / steps as f64).collect()
    }

    #[test]
    fn pattern_dc_is_area() {
        let t = analytic_ft(SpectrumSpec::pattern(1, Sign::Positive), &[0.0, 1e-9]).unwrap();
        let a = t.analytic.unwrap();
        assert_eq!(a[0], 1.0);
        assert!((a[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_pulse_sums() {
        let w = grid(6.0 * PI, 997);
        let p1 = analytic_ft(SpectrumSpec::pattern(1, Sign::Positive), &w).unwrap();
        let p2m = analytic_ft(SpectrumSpec::pattern(2, Sign::Negative), &w).unwrap();
        let p2p = analytic_ft(SpectrumSpec::pattern(2, Sign::Positive), &w).unwrap();
        let w1 = analytic_ft(SpectrumSpec::wavelet(1, Sign::Positive), &w).unwrap();
        let w2m = analytic_ft(SpectrumSpec::wavelet(2, Sign::Negative), &w).unwrap();
        let w2p = analytic_ft(SpectrumSpec::wavelet(2, Sign::Positive), &w).unwrap();
        for (i, &om) in w.iter().enumerate() {
            assert!((p1.analytic.as_ref().unwrap()[i] - closed_form_pattern_1(om)).abs() < 1e-12);
            let neg = closed_form_pattern_2(om, Sign::Negative);
            assert!((p2m.analytic.as_ref().unwrap()[i] - neg).abs() < 1e-12);
            let pos = closed_form_pattern_2(om, Sign::Positive);
            assert!((p2p.analytic.as_ref().unwrap()[i] - pos).abs() < 1e-12);
            assert!((w1.analytic.as_ref().unwrap()[i] - closed_form_wavelet_1(om)).abs() < 1e-12);
            let wneg = closed_form_wavelet_2(om, Sign::Negative);
            assert!((w2m.analytic.as_ref().unwrap()[i] - wneg).abs() < 1e-12);
            let wpos = closed_form_wavelet_2(om, Sign::Positive);
            assert!((w2p.analytic.as_ref().unwrap()[i] - wpos).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_layouts_have_no_sine_part() {
        for n in 2..=16 {
            for sign in [Sign::Positive, Sign::Negative] {
                let (offsets, _, _) = pulse_layout(KernelKind::Pattern, n, sign).unwrap();
                let mut sorted = offsets.clone();
                sorted.sort_by(f64::total_cmp);
                for (a, b) in sorted.iter().zip(sorted.iter().rev()) {
                    assert!((a + b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn wavelet_zero_at_dc_and_multiples_of_two_pi() {
        for n in 1..=2 {
            for sign in [Sign::Positive, Sign::Negative] {
                let w: Vec<f64> = (0..6).map(|k| 2.0 * PI * k as f64).collect();
                let t = analytic_ft(SpectrumSpec::wavelet(n, sign), &w).unwrap();
                let a = t.analytic.unwrap();
                assert_eq!(a[0], 0.0);
                assert!(a.iter().all(|v| v.abs() < 1e-12));
            }
        }
    }

    #[test]
    fn numeric_matches_first_order_closed_form() {
        let k = make_wavelet_1d(1, Sign::Positive, 16).unwrap();
        let t = numeric_ft(&k, 8).unwrap();
        for (w, v) in t.omega.iter().zip(t.numeric.unwrap()) {
            assert!((v - closed_form_wavelet_1(*w)).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_kernel_has_zero_spectrum() {
        let mut k = sample_pattern(2, Sign::Positive, 4).unwrap();
        k.samples.fill(0.0);
        let t = numeric_ft(&k, 2).unwrap();
        assert!(t.numeric.unwrap().iter().all(|&v| v == 0.0));
        assert!(t.power.unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fourth_order_extremum_sides() {
        for (sign, above) in [(Sign::Negative, true), (Sign::Positive, false)] {
            let k = sample_pattern(4, sign, 16).unwrap();
            let t = numeric_ft(&k, 16).unwrap();
            let w = dominant_extremum(&t.omega, t.numeric.as_ref().unwrap(), 6.0 * PI).unwrap();
            assert_eq!(w > 2.0 * PI, above, "{sign:?}: {w}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(analytic_ft(
            SpectrumSpec {
                kind: KernelKind::Wavelet2D,
                order: 2,
                sign: Sign::Positive
            },
            &[1.0]
        )
        .is_err());
        let k = sample_pattern(2, Sign::Positive, 4).unwrap();
        assert!(numeric_ft(&k, 0).is_err());
    }

    #[test]
    fn two_d_power_at_dc_is_squared_sum() {
        let k = crate::kernels::make_scaling(2, 4).unwrap();
        let s = numeric_ft_2d(&k, 2).unwrap();
        // Area of the 2x2-cell scaling function is 4.
        assert!((s.power[[0, 0]] - 16.0).abs() < 1e-9);
        let w = crate::kernels::make_wavelet_2d(3, Sign::Negative, 6).unwrap();
        let s = numeric_ft_2d(&w, 2).unwrap();
        assert!(s.power[[0, 0]] < 1e-20);
    }
}
