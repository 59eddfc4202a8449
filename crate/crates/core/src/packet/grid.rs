use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::packet::profile::SpectralProfile;

/// Uniform grid of `n_points` positions on [x_min, x_max], endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidArgument(format!("grid needs x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if n_points < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 points, got {n_points}")));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    /// Largest spacing that resolves the shortest wavelength in the profile.
    pub fn max_spacing(profile: &SpectralProfile) -> f64 {
        PI / (4.0 * profile.k_high())
    }

    pub fn check_resolution(&self, profile: &SpectralProfile) -> Result<()> {
        let limit = Self::max_spacing(profile);
        if self.spacing() > limit {
            return Err(Error::InvalidArgument(format!(
                "grid spacing {} exceeds {limit} needed to resolve k up to {}",
                self.spacing(),
                profile.k_high()
            )));
        }
        Ok(())
    }

    /// Trapezoidal weight of point i.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n_points {
            0.5 * self.spacing()
        } else {
            self.spacing()
        }
    }
}
