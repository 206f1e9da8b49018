use ndarray::{Array2, Axis};

use super::pattern::{
    check_divisible, footprint_cells, pattern_geometry, ratio_to_f64, Rational, Sign,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Pattern,
    Wavelet1D,
    Wavelet2D,
    Scaling1D,
    Scaling2D,
    PulseTrain,
    Chirp,
}

impl KernelKind {
    pub fn is_wavelet(self) -> bool {
        matches!(self, KernelKind::Wavelet1D | KernelKind::Wavelet2D)
    }

    pub fn is_2d(self) -> bool {
        matches!(self, KernelKind::Wavelet2D | KernelKind::Scaling2D)
    }
}

/// A pixel-sampled pattern, wavelet, scaling function or auxiliary signal.
///
/// One-dimensional kernels are stored as a single row.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub kind: KernelKind,
    /// Pattern order; zero for scaling functions and auxiliary signals.
    pub order: usize,
    pub sign: Option<Sign>,
    pub cell_px: usize,
    pub samples: Array2<f64>,
    /// Bias added to the pattern before normalisation (cell-unit amplitude).
    pub bias: f64,
    /// Normalisation multiplier. For scaling functions this is the export
    /// coefficient applied to their coefficients, not to the samples.
    pub coeff: f64,
    pub support_cells: usize,
}

impl Kernel {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.samples.sum()
    }

    /// Sum of squared samples.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum()
    }

    /// The single row of a one-dimensional kernel.
    pub fn row(&self) -> ndarray::ArrayView1<'_, f64> {
        self.samples.index_axis(Axis(0), 0)
    }
}

/// Wavelet bias: `-1/2` (1D) or `-1/4` (2D) for order one, otherwise
/// `-1/n` or `-1/n²`, so that the bias cancels the unit pulse area over the
/// support.
pub fn wavelet_bias(order: usize, two_d: bool) -> Rational {
    let n = order as i64;
    match (order, two_d) {
        (1, false) => Rational::new(-1, 2),
        (1, true) => Rational::new(-1, 4),
        (_, false) => Rational::new(-1, n),
        (_, true) => Rational::new(-1, n * n),
    }
}

/// Wavelet normalisation coefficient. The norm it inverts is the squared
/// sum of absolute amplitudes, `2(n-1)/n` in 1D and `2(n²-1)/n²` in 2D.
pub fn wavelet_coeff(order: usize, two_d: bool) -> Rational {
    let n = order as i64;
    match (order, two_d) {
        (1, _) => Rational::from_integer(1),
        (_, false) => Rational::new(n, 2 * (n - 1)),
        (_, true) => Rational::new(n * n, 2 * (n * n - 1)),
    }
}

/// The two sample levels `(c·b, c·(b+1))` of a wavelet.
pub fn wavelet_levels(order: usize, two_d: bool) -> (Rational, Rational) {
    let b = wavelet_bias(order, two_d);
    let c = wavelet_coeff(order, two_d);
    (c * b, c * (b + 1))
}

/// Samples the voxel pattern of the given order over its own support
/// (`n` cells, one cell for order one).
pub fn sample_pattern(order: usize, sign: Sign, cell_px: usize) -> Result<Kernel> {
    let geometry = pattern_geometry(order, sign)?;
    check_divisible(order, cell_px)?;
    let row = geometry.sample(cell_px, geometry.support_cells);
    Ok(Kernel {
        kind: KernelKind::Pattern,
        order,
        sign: geometry.sign,
        cell_px,
        samples: row_array(row),
        bias: 0.0,
        coeff: 1.0,
        support_cells: geometry.support_cells,
    })
}

/// Pattern samples laid over the wavelet footprint (two cells for order one,
/// with the pulse in the first cell).
pub(crate) fn footprint_pattern(order: usize, sign: Sign, cell_px: usize) -> Result<Vec<f64>> {
    let geometry = pattern_geometry(order, sign)?;
    check_divisible(order, cell_px)?;
    Ok(geometry.sample(cell_px, footprint_cells(order)))
}

pub fn make_wavelet_1d(order: usize, sign: Sign, cell_px: usize) -> Result<Kernel> {
    let pattern = footprint_pattern(order, sign, cell_px)?;
    let (low, high) = wavelet_levels(order, false);
    let (low, high) = (ratio_to_f64(low), ratio_to_f64(high));
    let row: Vec<f64> = pattern
        .iter()
        .map(|&p| if p > 0.5 { high } else { low })
        .collect();
    Ok(Kernel {
        kind: KernelKind::Wavelet1D,
        order,
        sign: (order > 1).then_some(sign),
        cell_px,
        samples: row_array(row),
        bias: ratio_to_f64(wavelet_bias(order, false)),
        coeff: ratio_to_f64(wavelet_coeff(order, false)),
        support_cells: footprint_cells(order),
    })
}

pub fn make_wavelet_2d(order: usize, sign: Sign, cell_px: usize) -> Result<Kernel> {
    let pattern = footprint_pattern(order, sign, cell_px)?;
    let (low, high) = wavelet_levels(order, true);
    let (low, high) = (ratio_to_f64(low), ratio_to_f64(high));
    let len = pattern.len();
    let samples = Array2::from_shape_fn((len, len), |(y, x)| {
        if pattern[x] * pattern[y] > 0.5 {
            high
        } else {
            low
        }
    });
    Ok(Kernel {
        kind: KernelKind::Wavelet2D,
        order,
        sign: (order > 1).then_some(sign),
        cell_px,
        samples,
        bias: ratio_to_f64(wavelet_bias(order, true)),
        coeff: ratio_to_f64(wavelet_coeff(order, true)),
        support_cells: footprint_cells(order),
    })
}

/// Unbiased double-width pulse. `dim` is 1 or 2.
pub fn make_scaling(dim: usize, cell_px: usize) -> Result<Kernel> {
    if cell_px == 0 {
        return Err(Error::CellTooSmall { cell_px, min: 1 });
    }
    let len = 2 * cell_px;
    let (kind, samples, coeff) = match dim {
        1 => (KernelKind::Scaling1D, Array2::ones((1, len)), 0.5),
        2 => (KernelKind::Scaling2D, Array2::ones((len, len)), 0.25),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "scaling function dimension must be 1 or 2, got {dim}"
            )))
        }
    };
    Ok(Kernel {
        kind,
        order: 0,
        sign: None,
        cell_px,
        samples,
        bias: 0.0,
        coeff,
        support_cells: 2,
    })
}

/// Signals covering the spectral holes of the wavelets: a half-duty pulse
/// train of period one cell centred on the cell edges, or a chirp whose
/// period falls from half a cell to two pixels.
pub fn make_auxiliary(kind: KernelKind, cell_px: usize, length_cells: usize) -> Result<Kernel> {
    if length_cells == 0 {
        return Err(Error::InvalidArgument(
            "auxiliary signal length must be at least one cell".into(),
        ));
    }
    let row = match kind {
        KernelKind::PulseTrain => pulse_train(cell_px, length_cells)?,
        KernelKind::Chirp => chirp(cell_px, length_cells)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "{other:?} is not an auxiliary signal"
            )))
        }
    };
    Ok(Kernel {
        kind,
        order: 0,
        sign: None,
        cell_px,
        samples: row_array(row),
        bias: 0.0,
        coeff: 1.0,
        support_cells: length_cells,
    })
}

fn pulse_train(cell_px: usize, length_cells: usize) -> Result<Vec<f64>> {
    if cell_px == 0 {
        return Err(Error::CellTooSmall { cell_px, min: 1 });
    }
    // Pixel centre (2i+1)/(2·cp) lies inside a pulse when it is closer than
    // 1/4 cell to an integer; compared in units of 1/(4·cp).
    let cp = cell_px as i64;
    Ok((0..(length_cells * cell_px) as i64)
        .map(|i| {
            let doubled = (2 * i + 1).rem_euclid(2 * cp);
            let dist = doubled.min(2 * cp - doubled);
            if 4 * dist < 2 * cp {
                1.0
            } else {
                0.0
            }
        })
        .collect())
}

fn chirp(cell_px: usize, length_cells: usize) -> Result<Vec<f64>> {
    if cell_px < 4 {
        return Err(Error::CellTooSmall { cell_px, min: 4 });
    }
    let total = cell_px * length_cells;
    let first = (cell_px / 2) as f64;
    let periods = |count: usize| -> Vec<usize> {
        (0..count)
            .map(|k| {
                let t = k as f64 / (count - 1) as f64;
                (first + (2.0 - first) * t).round() as usize
            })
            .collect()
    };
    // Largest pulse count whose periods fit the requested length.
    let mut count = 2;
    while periods(count + 1).iter().sum::<usize>() <= total {
        count += 1;
    }
    let mut row = vec![0.0; total];
    let mut start = 0;
    for period in periods(count) {
        for v in &mut row[start..start + period.div_ceil(2)] {
            *v = 1.0;
        }
        start += period;
    }
    Ok(row)
}

fn row_array(row: Vec<f64>) -> Array2<f64> {
    let len = row.len();
    Array2::from_shape_vec((1, len), row).expect("row shape")
}

/// Lengths of the maximal runs of samples above one half.
pub fn pulse_runs(row: &[f64]) -> Vec<usize> {
    let mut runs = Vec::new();
    let mut current = 0;
    for &v in row {
        if v > 0.5 {
            current += 1;
        } else if current > 0 {
            runs.push(current);
            current = 0;
        }
    }
    if current > 0 {
        runs.push(current);
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(k: &Kernel) -> Vec<f64> {
        k.row().to_vec()
    }

    #[test]
    fn first_order_pattern_fills_one_cell() {
        let k = sample_pattern(1, Sign::Positive, 4).unwrap();
        assert_eq!(row(&k), vec![1.0; 4]);
    }

    #[test]
    fn negative_second_order_merges_into_one_pulse() {
        let k = sample_pattern(2, Sign::Negative, 4).unwrap();
        assert_eq!(row(&k), vec![0., 0., 1., 1., 1., 1., 0., 0.]);
        assert_eq!(pulse_runs(&row(&k)), vec![4]);
    }

    #[test]
    fn third_order_positive_layout() {
        // Pulses 2 px wide, 8 px apart, first one flush with the left edge.
        let k = sample_pattern(3, Sign::Positive, 6).unwrap();
        let mut expected = vec![0.0; 18];
        for start in [0, 8, 16] {
            expected[start] = 1.0;
            expected[start + 1] = 1.0;
        }
        assert_eq!(row(&k), expected);
    }

    #[test]
    fn divisibility_error_names_order_and_cell() {
        let err = sample_pattern(3, Sign::Positive, 4).unwrap_err();
        assert!(matches!(
            err,
            Error::Divisibility {
                order: 3,
                cell_px: 4
            }
        ));
        assert!(err.to_string().contains('3') && err.to_string().contains('4'));
        assert!(make_wavelet_2d(5, Sign::Negative, 12).is_err());
    }

    #[test]
    fn first_order_wavelet_levels() {
        let k = make_wavelet_1d(1, Sign::Positive, 4).unwrap();
        assert_eq!(row(&k), vec![0.5, 0.5, 0.5, 0.5, -0.5, -0.5, -0.5, -0.5]);
        assert_eq!(k.support_cells, 2);
    }

    #[test]
    fn second_order_wavelets_are_negatives() {
        let plus = make_wavelet_1d(2, Sign::Positive, 4).unwrap();
        let minus = make_wavelet_1d(2, Sign::Negative, 4).unwrap();
        assert_eq!(plus.samples, -minus.samples);
    }

    #[test]
    fn first_order_is_shifted_second_order() {
        for cp in [2, 4, 8] {
            let mut one = row(&make_wavelet_1d(1, Sign::Positive, cp).unwrap());
            one.rotate_right(cp / 2);
            assert_eq!(one, row(&make_wavelet_1d(2, Sign::Negative, cp).unwrap()));
            let plus = row(&make_wavelet_1d(2, Sign::Positive, cp).unwrap());
            assert_eq!(one, plus.iter().map(|v| -v).collect::<Vec<_>>());
        }
    }

    #[test]
    fn third_order_levels() {
        assert_eq!(
            wavelet_levels(3, false),
            (Rational::new(-1, 4), Rational::new(1, 2))
        );
        let k = make_wavelet_1d(3, Sign::Positive, 6).unwrap();
        assert!(k.row().iter().all(|&v| v == -0.25 || v == 0.5));
    }

    #[test]
    fn two_d_levels() {
        assert_eq!(
            wavelet_levels(1, true),
            (Rational::new(-1, 4), Rational::new(3, 4))
        );
        assert_eq!(
            wavelet_levels(2, true),
            (Rational::new(-1, 6), Rational::new(1, 2))
        );
        let k = make_wavelet_2d(1, Sign::Negative, 4).unwrap();
        assert_eq!(k.samples.dim(), (8, 8));
        assert!(k.sum().abs() < 1e-12);
    }

    #[test]
    fn normalisation_matches_amplitude_sum_norm() {
        // c · (peak excess + bias spread) = 1 under the amplitude-sum norm.
        for n in 2..=16usize {
            let nn = n as i64;
            let norm1 =
                (Rational::from_integer(1) - Rational::new(1, nn)) + Rational::new(nn - 1, nn);
            assert_eq!(wavelet_coeff(n, false) * norm1, Rational::from_integer(1));
            let n2 = nn * nn;
            let norm2 =
                (Rational::from_integer(1) - Rational::new(1, n2)) + Rational::new(n2 - 1, n2);
            assert_eq!(wavelet_coeff(n, true) * norm2, Rational::from_integer(1));
        }
    }

    #[test]
    fn scaling_kernels() {
        let s1 = make_scaling(1, 4).unwrap();
        assert_eq!(row(&s1), vec![1.0; 8]);
        assert_eq!(s1.coeff, 0.5);
        let s2 = make_scaling(2, 2).unwrap();
        assert_eq!(s2.samples, Array2::ones((4, 4)));
        assert_eq!(s2.coeff, 0.25);
        assert_eq!(s2.samples.mean().unwrap(), 1.0);
        assert!(make_scaling(3, 2).is_err());
    }

    #[test]
    fn pulse_train_centred_on_cell_edges() {
        let k = make_auxiliary(KernelKind::PulseTrain, 4, 2).unwrap();
        assert_eq!(row(&k), vec![1., 0., 0., 1., 1., 0., 0., 1.]);
    }

    #[test]
    fn chirp_ends_at_two_pixel_period() {
        let k = make_auxiliary(KernelKind::Chirp, 16, 6).unwrap();
        let row = row(&k);
        assert!(row.iter().all(|&v| v == 0.0 || v == 1.0));
        let starts: Vec<usize> = (0..row.len())
            .filter(|&i| row[i] == 1.0 && (i == 0 || row[i - 1] == 0.0))
            .collect();
        let periods: Vec<usize> = starts.windows(2).map(|w| w[1] - w[0]).collect();
        assert_eq!(periods[0], 8);
        assert!(periods.windows(2).all(|w| w[1] <= w[0]));
        // The final pulse is one pixel wide, so its period is two pixels.
        let last = *starts.last().unwrap();
        assert_eq!(row[last], 1.0);
        assert_eq!(row[last + 1], 0.0);
        assert_eq!(*periods.last().unwrap(), 2);
    }

    #[test]
    fn chirp_needs_four_pixel_cells() {
        assert!(matches!(
            make_auxiliary(KernelKind::Chirp, 3, 4),
            Err(Error::CellTooSmall { min: 4, .. })
        ));
        assert!(make_auxiliary(KernelKind::Wavelet1D, 4, 4).is_err());
        assert!(make_auxiliary(KernelKind::PulseTrain, 4, 0).is_err());
    }
}
