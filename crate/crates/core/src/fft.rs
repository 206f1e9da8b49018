//! Thin 2D FFT over `ndarray`, built from row and column passes of rustfft.

use ndarray::{Array2, Axis};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// In-place unnormalised 2D transform.
pub(crate) fn fft2(data: &mut Array2<Complex64>, direction: Direction) {
    let mut planner = FftPlanner::new();
    let (rows, cols) = data.dim();
    let row_fft = match direction {
        Direction::Forward => planner.plan_fft_forward(cols),
        Direction::Inverse => planner.plan_fft_inverse(cols),
    };
    let col_fft = match direction {
        Direction::Forward => planner.plan_fft_forward(rows),
        Direction::Inverse => planner.plan_fft_inverse(rows),
    };
    let mut buf = vec![Complex64::default(); cols.max(rows)];
    for mut row in data.axis_iter_mut(Axis(0)) {
        buf[..cols]
            .iter_mut()
            .zip(row.iter())
            .for_each(|(b, v)| *b = *v);
        row_fft.process(&mut buf[..cols]);
        row.iter_mut().zip(&buf[..cols]).for_each(|(v, b)| *v = *b);
    }
    for mut col in data.axis_iter_mut(Axis(1)) {
        buf[..rows]
            .iter_mut()
            .zip(col.iter())
            .for_each(|(b, v)| *b = *v);
        col_fft.process(&mut buf[..rows]);
        col.iter_mut().zip(&buf[..rows]).for_each(|(v, b)| *v = *b);
    }
}

/// Forward transform of `src` zero-padded to `shape` (top-left aligned).
pub(crate) fn padded_fft2(src: &Array2<f64>, shape: (usize, usize)) -> Array2<Complex64> {
    let mut out = Array2::from_elem(shape, Complex64::default());
    let (h, w) = src.dim();
    out.slice_mut(ndarray::s![..h, ..w])
        .zip_mut_with(src, |o, &v| *o = Complex64::new(v, 0.0));
    fft2(&mut out, Direction::Forward);
    out
}

/// One-dimensional forward transform of `src` zero-padded to `len`.
pub(crate) fn padded_fft(src: &[f64], len: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = src
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .chain(std::iter::repeat(Complex64::default()))
        .take(len)
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    buf
}
