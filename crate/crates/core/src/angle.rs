//! Measurement directions and the relative angle between them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Unit vectors further than this from norm 1 are rejected.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// Relative angle between two measurement directions, in `[0, π]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return domain(format!("angle {theta} outside [0, π]"));
        }
        Ok(Angle(theta))
    }

    /// Folds an arbitrary real angle onto `[0, π]` (the angle between two
    /// planar directions separated by `theta`).
    pub fn normalized(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return domain(format!("angle {theta} is not finite"));
        }
        let wrapped = theta.rem_euclid(2.0 * PI);
        let folded = if wrapped > PI {
            2.0 * PI - wrapped
        } else {
            wrapped
        };
        Ok(Angle(folded.clamp(0.0, PI)))
    }

    /// `arccos(a·b)` with the dot product clamped to `[-1, 1]`.
    pub fn between(a: &Direction, b: &Direction) -> Self {
        Angle(a.dot(b).clamp(-1.0, 1.0).acos())
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// A unit vector in three dimensions. Planar directions lie in the x-y plane,
/// the plane perpendicular to the particles' momentum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction([f64; 3]);

impl Direction {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return domain(format!("({x}, {y}, {z}) is not a unit vector"));
        }
        Ok(Direction([x, y, z]))
    }

    /// Direction at polar angle `phi` in the measurement plane.
    pub fn planar(phi: f64) -> Self {
        Direction([phi.cos(), phi.sin(), 0.0])
    }

    /// Direction with polar angle `theta` from the z axis and azimuth `phi`.
    pub fn spherical(theta: f64, phi: f64) -> Self {
        Direction([
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn is_planar(&self) -> bool {
        self.0[2].abs() <= UNIT_TOLERANCE
    }

    /// Polar angle of the in-plane projection.
    pub fn planar_angle(&self) -> f64 {
        self.0[1].atan2(self.0[0])
    }
}
