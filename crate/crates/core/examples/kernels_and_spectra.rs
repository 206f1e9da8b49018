//! Patterns, wavelets and their spectra for a few depth planes.

use mvwave::kernels::{
    dominant_extremum, make_wavelet_1d, numeric_ft, sample_pattern, DepthPlane, SpectrumSpec,
};

fn main() -> mvwave::Result<()> {
    let cell = 12;
    let limit = 6.0 * std::f64::consts::PI;
    println!("plane  support  energy    extremum/2pi  max deviation");
    for d in [-6, -4, -3, -2, -1, 1, 2, 3, 4, 6] {
        let d = DepthPlane::new(d)?;
        let wavelet = make_wavelet_1d(d.order(), d.sign(), cell)?;
        let pattern = sample_pattern(d.order(), d.sign(), cell)?;
        let table =
            numeric_ft(&pattern, 8)?.with_analytic(SpectrumSpec::pattern(d.order(), d.sign()))?;
        let peak = dominant_extremum(&table.omega, table.numeric.as_deref().unwrap_or(&[]), limit);
        println!(
            "{:>5}  {:>7}  {:>8.3}  {:>12}  {:.1e}",
            d.to_string(),
            wavelet.len(),
            wavelet.energy(),
            peak.map_or("-".into(), |w| format!(
                "{:.3}",
                w / (2.0 * std::f64::consts::PI)
            )),
            table.max_relative_deviation(0.0, limit).unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
