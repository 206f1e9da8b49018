//! Dense 2D correlation and its adjoint.
//!
//! Both routines accumulate taps in a fixed row-major order per output
//! pixel, so results do not depend on the number of worker threads and match
//! a naive per-pixel loop bit for bit.

use std::sync::OnceLock;

use ndarray::{Array2, ArrayView2};
use rayon::prelude::*;
use rayon::ThreadPool;

/// Environment variable capping the number of transform worker threads.
pub const THREADS_ENV: &str = "MVWAVE_THREADS";

fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| format!("mvwave-{i}"))
            .build()
            .expect("failed to start transform thread pool")
    })
}

/// Runs `f` on the transform thread pool.
pub(crate) fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    pool().install(f)
}

/// `out[y][x] = Σ_{i,j} img[y+i][x+j] · k[i][j]`, with zeros outside the
/// image. The output has the image's shape.
pub fn correlate(img: ArrayView2<'_, f64>, kernel: ArrayView2<'_, f64>) -> Array2<f64> {
    let (h, w) = img.dim();
    let kh = kernel.nrows();
    let mut out = Array2::<f64>::zeros((h, w));
    let img = img.as_standard_layout();
    let kernel = kernel.as_standard_layout();
    install(|| {
        out.as_slice_mut()
            .expect("fresh array")
            .par_chunks_mut(w.max(1))
            .enumerate()
            .for_each(|(y, row)| {
                for i in 0..kh.min(h - y) {
                    let src = img.row(y + i);
                    let src = src.as_slice().expect("contiguous image row");
                    let taps = kernel.row(i);
                    for (j, &tap) in taps.iter().enumerate().take(w) {
                        for (o, &s) in row[..w - j].iter_mut().zip(&src[j..]) {
                            *o += s * tap;
                        }
                    }
                }
            });
    });
    out
}

/// Adjoint of [`correlate`]: `out[u][v] = Σ_{i,j} c[u-i][v-j] · k[i][j]`
/// over in-range coefficients, i.e. convolution cropped to the input shape.
pub fn convolve_adjoint(coeffs: ArrayView2<'_, f64>, kernel: ArrayView2<'_, f64>) -> Array2<f64> {
    let (h, w) = coeffs.dim();
    let kh = kernel.nrows();
    let mut out = Array2::<f64>::zeros((h, w));
    let coeffs = coeffs.as_standard_layout();
    let kernel = kernel.as_standard_layout();
    install(|| {
        out.as_slice_mut()
            .expect("fresh array")
            .par_chunks_mut(w.max(1))
            .enumerate()
            .for_each(|(u, row)| {
                for i in 0..kh.min(u + 1) {
                    let src = coeffs.row(u - i);
                    let src = src.as_slice().expect("contiguous coefficient row");
                    for (j, &tap) in kernel.row(i).iter().enumerate().take(w) {
                        for (o, &s) in row[j..].iter_mut().zip(src) {
                            *o += s * tap;
                        }
                    }
                }
            });
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn naive(img: &Array2<f64>, k: &Array2<f64>) -> Array2<f64> {
        let (h, w) = img.dim();
        Array2::from_shape_fn((h, w), |(y, x)| {
            let mut s = 0.0;
            for ((i, j), &t) in k.indexed_iter() {
                if y + i < h && x + j < w {
                    s += img[[y + i, x + j]] * t;
                }
            }
            s
        })
    }

    #[test]
    fn matches_naive_bitwise() {
        let img = Array2::from_shape_fn((7, 9), |(y, x)| ((y * 31 + x * 17) % 11) as f64 / 7.3);
        let k = Array2::from_shape_fn((3, 4), |(i, j)| (i as f64 - 1.3) * (j as f64 + 0.7));
        let fast = correlate(img.view(), k.view());
        let slow = naive(&img, &k);
        for (a, b) in fast.iter().zip(slow.iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn kernel_larger_than_image() {
        let img = array![[1.0, 2.0], [3.0, 4.0]];
        let k = Array2::ones((3, 5));
        assert_eq!(
            correlate(img.view(), k.view()),
            array![[10.0, 6.0], [7.0, 4.0]]
        );
    }

    #[test]
    fn adjoint_identity() {
        let img = Array2::from_shape_fn((6, 5), |(y, x)| (y as f64 * 0.3 - x as f64).sin());
        let c = Array2::from_shape_fn((6, 5), |(y, x)| (x as f64 * 0.7 + y as f64).cos());
        let k = Array2::from_shape_fn((2, 3), |(i, j)| 1.0 + i as f64 - 0.5 * j as f64);
        let lhs: f64 = (correlate(img.view(), k.view()) * &c).sum();
        let rhs: f64 = (convolve_adjoint(c.view(), k.view()) * &img).sum();
        assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn impulse_spreads_kernel() {
        let mut c = Array2::zeros((5, 5));
        c[[1, 2]] = 1.0;
        let k = array![[1.0, 2.0], [3.0, 4.0]];
        let out = convolve_adjoint(c.view(), k.view());
        assert_eq!(out[[1, 2]], 1.0);
        assert_eq!(out[[1, 3]], 2.0);
        assert_eq!(out[[2, 2]], 3.0);
        assert_eq!(out[[2, 3]], 4.0);
        assert_eq!(out.sum(), 10.0);
    }
}
