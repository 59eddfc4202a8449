use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::step::{Sign, StepPotential};

pub const DEFAULT_WINDOW_SIGMAS: f64 = 8.0;
pub const DEFAULT_NODES: usize = 513;

/// Gaussian momentum distribution of the incident packet, truncated to
/// [k̄ − window, k̄ + window].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralProfile {
    l0: f64,
    k_bar: f64,
    window: f64,
    nodes: usize,
}

impl SpectralProfile {
    /// Profile with the default window of 8σ_k and 513 nodes.
    pub fn new(l0: f64, k_bar: f64) -> Result<Self> {
        if !(l0.is_finite() && l0 > 0.0) {
            return Err(Error::InvalidArgument(format!("packet width l0 must be positive, got {l0}")));
        }
        if !(k_bar.is_finite() && k_bar > 0.0) {
            return Err(Error::NonPositiveWavenumber(k_bar));
        }
        let profile = Self {
            l0,
            k_bar,
            window: DEFAULT_WINDOW_SIGMAS / (2.0 * l0),
            nodes: DEFAULT_NODES,
        };
        profile.check_window()?;
        Ok(profile)
    }

    pub fn with_window(mut self, window: f64) -> Result<Self> {
        if !(window.is_finite() && window > 0.0) {
            return Err(Error::InvalidArgument(format!("spectral window must be positive, got {window}")));
        }
        self.window = window;
        self.check_window()?;
        Ok(self)
    }

    pub fn with_nodes(mut self, nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 spectral nodes, got {nodes}")));
        }
        self.nodes = nodes;
        Ok(self)
    }

    fn check_window(&self) -> Result<()> {
        let tail = self.tail_mass_bound();
        if tail >= 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "spectral window {} leaves a tail mass up to {tail:e} outside the quadrature range",
                self.window
            )));
        }
        Ok(())
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    pub fn k_bar(&self) -> f64 {
        self.k_bar
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn sigma_k(&self) -> f64 {
        1.0 / (2.0 * self.l0)
    }

    pub fn k_low(&self) -> f64 {
        self.k_bar - self.window
    }

    pub fn k_high(&self) -> f64 {
        self.k_bar + self.window
    }

    pub fn amplitude(&self, k: f64) -> f64 {
        spectral_amplitude(self, k)
    }

    /// Upper bound on ∫|A|² outside the window: erfc(z) < e^{−z²}/(z√π)
    /// with z = √2·l0·window.
    pub fn tail_mass_bound(&self) -> f64 {
        let z = std::f64::consts::SQRT_2 * self.l0 * self.window;
        (-z * z).exp() / (z * PI.sqrt())
    }

    /// The whole window must lie on the propagating branch, at positive k.
    pub fn check_guard(&self, step: &StepPotential) -> Result<()> {
        let bound = match step.beta() {
            Sign::Positive => step.kappa0(),
            Sign::Negative => 0.0,
        };
        if self.k_low() <= bound {
            return Err(Error::SpectralGuardViolated {
                k_low: self.k_low(),
                k_high: self.k_high(),
                bound,
            });
        }
        Ok(())
    }
}

/// (2l0²/π)^{1/4}·exp(−l0²(k − k̄)²)
pub fn spectral_amplitude(profile: &SpectralProfile, k: f64) -> f64 {
    let l0 = profile.l0;
    let d = k - profile.k_bar;
    (2.0 * l0 * l0 / PI).powf(0.25) * (-(l0 * d).powi(2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::GaussLegendre;
    use crate::step::PhysicalConfig;

    #[test]
    fn peak_value() {
        let p = SpectralProfile::new(50.0, 1.5).unwrap();
        assert!((p.amplitude(1.5) - (2.0 * 2500.0 / PI).powf(0.25)).abs() < 1e-14);
    }

    #[test]
    fn window_mass_matches_error_function() {
        let p = SpectralProfile::new(50.0, 1.5).unwrap();
        let gl = GaussLegendre::new(p.nodes()).unwrap();
        let full = gl.integrate(p.k_low(), p.k_high(), |k| p.amplitude(k).powi(2));
        assert!((full - 1.0).abs() < 1e-8);

        // a window of 2σ holds erf(√2) of the mass
        let narrow = p.with_window(2.0 * p.sigma_k());
        assert!(narrow.is_err());
        let mass = gl.integrate(1.5 - 0.02, 1.5 + 0.02, |k| p.amplitude(k).powi(2));
        // erf(√2), from mpmath at 30 digits
        let exact = 0.954_499_736_103_641_6;
        assert!((mass - exact).abs() < 1e-12, "{mass} {exact}");
    }

    #[test]
    fn tail_bound_arithmetic() {
        let p = SpectralProfile::new(50.0, 1.5).unwrap();
        let ratio = (p.amplitude(p.k_high()) / p.amplitude(1.5)).powi(2);
        // exp(-2 l0² w²) with l0·w = 4
        assert!((ratio.ln() + 32.0).abs() < 1e-9);
        assert!(p.tail_mass_bound() < 1e-14);
    }

    #[test]
    fn guard() {
        let cfg = PhysicalConfig::default();
        let up = StepPotential::from_kappa0(Sign::Positive, 1.0, 500.0, &cfg).unwrap();
        let p = SpectralProfile::new(50.0, 1.05).unwrap();
        assert!(matches!(p.check_guard(&up), Err(Error::SpectralGuardViolated { .. })));
        assert!(SpectralProfile::new(50.0, 1.5).unwrap().check_guard(&up).is_ok());
        let down = up.mirrored();
        assert!(p.check_guard(&down).is_ok());
        let wide = SpectralProfile::new(2.0, 1.5).unwrap();
        assert!(wide.check_guard(&up).is_err());
        assert!(wide.check_guard(&down).is_err());
        assert!(SpectralProfile::new(0.0, 1.5).is_err());
        assert!(p.with_nodes(1).is_err());
    }
}
