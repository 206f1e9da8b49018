//! Voxel pattern geometry.
//!
//! A point at depth plane `d` leaves `n = |d|` rectangular pulses of width
//! `1/n` cell in the image plane, spread over `n` cells. For `d > 0` the
//! outermost pulses touch the outer boundaries of the end cells; for `d < 0`
//! they touch the inner boundaries. All lengths here are in cell units and
//! kept as exact rationals so the pixel layout never depends on rounding.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Side of the screen a depth plane lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    /// In front of the screen, `d > 0`.
    Positive,
    /// Behind the screen, `d < 0`.
    Negative,
}

impl Sign {
    pub fn of(d: i32) -> Option<Sign> {
        match d {
            d if d > 0 => Some(Sign::Positive),
            d if d < 0 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    fn factor(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

/// A signed, non-zero depth plane index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DepthPlane(i32);

impl DepthPlane {
    pub fn new(d: i32) -> Result<Self> {
        if d == 0 {
            Err(Error::ZeroDepth)
        } else {
            Ok(DepthPlane(d))
        }
    }

    pub fn get(self) -> i32 {
        self.0
    }

    /// Pattern order `n = |d|`.
    pub fn order(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn sign(self) -> Sign {
        if self.0 > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn reversed(self) -> DepthPlane {
        DepthPlane(-self.0)
    }

    /// Width in cells of the wavelet support (and of a voxel's footprint).
    /// Order one needs two cells so that its bias can cancel the pulse.
    pub fn footprint_cells(self) -> usize {
        footprint_cells(self.order())
    }

    /// Upper-left cell of the footprint of a voxel centred on cell `c`.
    pub fn stamp_origin(self, c: i64) -> i64 {
        c - (self.footprint_cells() as i64 - 1) / 2
    }
}

impl fmt::Display for DepthPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.0)
    }
}

impl TryFrom<i32> for DepthPlane {
    type Error = Error;

    fn try_from(d: i32) -> Result<Self> {
        DepthPlane::new(d)
    }
}

pub(crate) fn footprint_cells(order: usize) -> usize {
    if order == 1 {
        2
    } else {
        order
    }
}

/// Symmetric rectangular unit pulse: 1 inside `|x| < 1/2`, 1/2 on the edge.
pub fn rect_pulse(x: f64) -> f64 {
    let a = x.abs();
    if a < 0.5 {
        1.0
    } else if a == 0.5 {
        0.5
    } else {
        0.0
    }
}

pub(crate) fn rect_pulse_exact(x: Rational) -> Rational {
    let a = if x < Rational::from_integer(0) { -x } else { x };
    let half = Rational::new(1, 2);
    if a < half {
        Rational::from_integer(1)
    } else if a == half {
        half
    } else {
        Rational::from_integer(0)
    }
}

/// Placement parameters of a voxel pattern, in cell units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGeometry {
    pub order: usize,
    /// `None` for order one, where both sides share one pattern.
    pub sign: Option<Sign>,
    /// Centre of the first pulse, reduced into the first cell.
    pub phase: Rational,
    /// Centre-to-centre distance between pulses; not defined for order one.
    pub period: Option<Rational>,
    /// Empty space between neighbouring pulses; not defined for order one.
    pub gap: Option<Rational>,
    pub support_cells: usize,
}

pub fn pattern_geometry(order: usize, sign: Sign) -> Result<PatternGeometry> {
    if order == 0 {
        return Err(Error::InvalidOrder(order));
    }
    let n = order as i64;
    if order == 1 {
        return Ok(PatternGeometry {
            order,
            sign: None,
            phase: Rational::new(1, 2),
            period: None,
            gap: None,
            support_cells: 1,
        });
    }
    let s = sign.factor();
    // 1 ± 1/(2n), taken modulo one cell.
    let raw_phase = Rational::from_integer(1) + Rational::new(s, 2 * n);
    let phase = raw_phase - raw_phase.floor();
    let period = Rational::new(n + s, n);
    let gap = Rational::from_integer(1) - Rational::new(1, n) + Rational::new(s, n);
    Ok(PatternGeometry {
        order,
        sign: Some(sign),
        phase,
        period: Some(period),
        gap: Some(gap),
        support_cells: order,
    })
}

impl PatternGeometry {
    pub fn pulse_width(&self) -> Rational {
        Rational::new(1, self.order as i64)
    }

    pub fn pulse_centers(&self) -> Vec<Rational> {
        let period = self.period.unwrap_or_else(|| Rational::from_integer(1));
        (0..self.order as i64)
            .map(|k| self.phase + period * k)
            .collect()
    }

    /// Open intervals `(start, end)` occupied by the pulses.
    pub fn pulse_intervals(&self) -> Vec<(Rational, Rational)> {
        let half = self.pulse_width() / 2;
        self.pulse_centers()
            .into_iter()
            .map(|c| (c - half, c + half))
            .collect()
    }

    /// Exact pattern value at `x` cells from the left edge of the support.
    pub fn value_at(&self, x: Rational) -> Rational {
        let n = Rational::from_integer(self.order as i64);
        self.pulse_centers()
            .into_iter()
            .map(|c| rect_pulse_exact(n * (x - c)))
            .sum()
    }

    pub fn value(&self, x: f64) -> f64 {
        let n = self.order as f64;
        self.pulse_centers()
            .into_iter()
            .map(|c| rect_pulse(n * (x - ratio_to_f64(c))))
            .sum()
    }

    /// Samples the pattern at pixel centres over `cells` cells.
    pub(crate) fn sample(&self, cell_px: usize, cells: usize) -> Vec<f64> {
        let den = 2 * cell_px as i64;
        (0..cells * cell_px)
            .map(|i| ratio_to_f64(self.value_at(Rational::new(2 * i as i64 + 1, den))))
            .collect()
    }
}

pub(crate) fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub(crate) fn check_divisible(order: usize, cell_px: usize) -> Result<()> {
    if cell_px == 0 {
        return Err(Error::CellTooSmall { cell_px, min: 1 });
    }
    if !cell_px.is_multiple_of(order) {
        return Err(Error::Divisibility { order, cell_px });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rect_pulse_branches() {
        assert_eq!(rect_pulse(0.0), 1.0);
        assert_eq!(rect_pulse(0.5), 0.5);
        assert_eq!(rect_pulse(-0.5), 0.5);
        assert_eq!(rect_pulse(3.0), 0.0);
    }

    #[test]
    fn second_order_geometry() {
        let plus = pattern_geometry(2, Sign::Positive).unwrap();
        assert_eq!(plus.phase, r(1, 4));
        assert_eq!(plus.period, Some(r(3, 2)));
        let minus = pattern_geometry(2, Sign::Negative).unwrap();
        assert_eq!(minus.phase, r(3, 4));
        assert_eq!(minus.period, Some(r(1, 2)));
        assert_eq!(minus.gap, Some(r(0, 1)));
    }

    #[test]
    fn first_order_ignores_sign() {
        for sign in [Sign::Positive, Sign::Negative] {
            let g = pattern_geometry(1, sign).unwrap();
            assert_eq!(g.phase, r(1, 2));
            assert_eq!(g.period, None);
            assert_eq!(g.gap, None);
            assert_eq!(g.sign, None);
        }
    }

    #[test]
    fn negative_fourth_order_gap() {
        assert_eq!(
            pattern_geometry(4, Sign::Negative).unwrap().gap,
            Some(r(1, 2))
        );
    }

    #[test]
    fn zero_order_rejected() {
        assert!(matches!(
            pattern_geometry(0, Sign::Positive),
            Err(Error::InvalidOrder(0))
        ));
    }

    #[test]
    fn end_pulses_touch_outer_or_inner_boundaries() {
        for n in 2..=16usize {
            let nn = n as i64;
            let plus = pattern_geometry(n, Sign::Positive)
                .unwrap()
                .pulse_intervals();
            assert_eq!(plus[0].0, r(0, 1));
            assert_eq!(plus[n - 1].1, r(nn, 1));
            let minus = pattern_geometry(n, Sign::Negative)
                .unwrap()
                .pulse_intervals();
            assert_eq!(minus[0].1, r(1, 1));
            assert_eq!(minus[n - 1].0, r(nn - 1, 1));
        }
    }

    #[test]
    fn depth_plane_rejects_zero() {
        assert!(matches!(DepthPlane::new(0), Err(Error::ZeroDepth)));
        let d = DepthPlane::new(-3).unwrap();
        assert_eq!(d.order(), 3);
        assert_eq!(d.sign(), Sign::Negative);
        assert_eq!(d.reversed().get(), 3);
        assert_eq!(d.to_string(), "-3");
    }

    #[test]
    fn stamp_origins() {
        assert_eq!(DepthPlane::new(1).unwrap().stamp_origin(5), 5);
        assert_eq!(DepthPlane::new(2).unwrap().stamp_origin(5), 5);
        assert_eq!(DepthPlane::new(-3).unwrap().stamp_origin(5), 4);
        assert_eq!(DepthPlane::new(6).unwrap().stamp_origin(6), 4);
    }
}
