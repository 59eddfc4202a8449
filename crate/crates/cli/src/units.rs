//! Conversion of reported quantities to natural units built from κ0, ħ
//! and m, in which every table is written.

use stepscatter_core::{PhysicalConfig, StepPotential};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalUnits {
    kappa0: f64,
    hbar: f64,
    mass: f64,
}

impl NaturalUnits {
    pub fn new(step: &StepPotential, cfg: &PhysicalConfig) -> Self {
        Self {
            kappa0: step.kappa0(),
            hbar: cfg.hbar,
            mass: cfg.mass,
        }
    }

    pub fn wavenumber(&self, k: f64) -> f64 {
        k / self.kappa0
    }

    pub fn length(&self, x: f64) -> f64 {
        x * self.kappa0
    }

    pub fn time(&self, t: f64) -> f64 {
        t * self.hbar * self.kappa0 * self.kappa0 / self.mass
    }

    pub fn velocity(&self, v: f64) -> f64 {
        v * self.mass / (self.hbar * self.kappa0)
    }

    pub fn momentum(&self, p: f64) -> f64 {
        p / (self.hbar * self.kappa0)
    }
}
