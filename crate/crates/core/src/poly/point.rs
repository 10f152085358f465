use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use super::scalar::GaussianRational;

/// Normalizes an angle into `[0, 2pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Signed angular difference `a - b` folded into `(-pi, pi]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

/// One coordinate of a torus point: either an exactly unimodular Gaussian
/// rational or an angle `theta` standing for `e^{i theta}`.
#[derive(Clone, Debug, PartialEq)]
pub enum UnitCoord {
    Exact(GaussianRational),
    Angle(f64),
}

impl UnitCoord {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            UnitCoord::Exact(q) => q.to_c64(),
            UnitCoord::Angle(t) => Complex64::from_polar(1.0, *t),
        }
    }

    /// Angle in `[0, 2pi)`.
    pub fn angle(&self) -> f64 {
        match self {
            UnitCoord::Exact(q) => {
                // Exact axis points get exact angles.
                let c = q.to_c64();
                if q.im.is_zero() {
                    if c.re > 0.0 {
                        0.0
                    } else {
                        std::f64::consts::PI
                    }
                } else {
                    wrap_angle(c.arg())
                }
            }
            UnitCoord::Angle(t) => wrap_angle(*t),
        }
    }

    pub fn exact(&self) -> Option<&GaussianRational> {
        match self {
            UnitCoord::Exact(q) => Some(q),
            UnitCoord::Angle(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, UnitCoord::Exact(_))
    }
}

impl fmt::Display for UnitCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitCoord::Exact(q) => write!(f, "{q}"),
            UnitCoord::Angle(t) => write!(f, "exp({:.12}*i)", wrap_angle(*t)),
        }
    }
}

/// A point of the torus `T^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnimodularPoint {
    pub coords: Vec<UnitCoord>,
}

impl UnimodularPoint {
    /// Builds an exact point; every coordinate must be exactly unimodular.
    pub fn exact(coords: Vec<GaussianRational>) -> Option<Self> {
        if coords.iter().all(GaussianRational::is_unimodular) {
            Some(Self { coords: coords.into_iter().map(UnitCoord::Exact).collect() })
        } else {
            None
        }
    }

    pub fn from_angles(angles: &[f64]) -> Self {
        Self { coords: angles.iter().map(|&t| UnitCoord::Angle(t)).collect() }
    }

    pub fn ones(k: usize) -> Self {
        Self { coords: vec![UnitCoord::Exact(GaussianRational::from_int(1)); k] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coords.iter().map(UnitCoord::to_c64).collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.coords.iter().map(UnitCoord::angle).collect()
    }

    /// All coordinates exact, as Gaussian rationals.
    pub fn to_exact(&self) -> Option<Vec<GaussianRational>> {
        self.coords.iter().map(|c| c.exact().cloned()).collect()
    }

    /// Largest coordinatewise angular distance (periodic).
    pub fn angular_distance(&self, other: &Self) -> f64 {
        self.angles()
            .iter()
            .zip(other.angles())
            .map(|(a, b)| angle_diff(*a, b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for UnimodularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_points_require_unimodular_coordinates() {
        assert!(UnimodularPoint::exact(vec![GaussianRational::from_parts(3, 4, 5)]).is_some());
        assert!(UnimodularPoint::exact(vec![GaussianRational::from_int(2)]).is_none());
    }

    #[test]
    fn angles_are_wrapped() {
        assert_eq!(UnitCoord::Exact(GaussianRational::from_int(-1)).angle(), std::f64::consts::PI);
        assert!((UnitCoord::Angle(-0.5).angle() - (TAU - 0.5)).abs() < 1e-15);
        assert!((angle_diff(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
    }
}
