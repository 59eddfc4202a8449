use crate::numerics::{integrate_adaptive, AdaptiveOptions};
use crate::packet::profile::{spectral_amplitude, SpectralProfile};
use crate::step::{Sign, StepPotential};
use crate::swf::{turning_point, Decomposition};

/// Ratio every "much larger than" condition must reach.
pub const SEPARATION_FACTOR: f64 = 10.0;

/// Diagnostics for whether a packet describes completed scattering with
/// well separated, narrow channel packets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletedScatteringReport {
    /// a / l0
    pub separation_ratio: f64,
    pub separation_ok: bool,
    pub spectral_guard_ok: bool,
    /// l0 / |x_c'(k̄) / x_c(k̄)|
    pub narrowness_ratio: f64,
    pub narrowness_ok: bool,
    /// l0 / (x_c(k̄) − a)
    pub region_ratio: f64,
    pub region_ok: bool,
    /// ⟨x_c⟩_tr − a, the transmission-weighted spectral mean of x_c − a.
    pub effective_length: f64,
    pub effective_length_ok: bool,
}

impl CompletedScatteringReport {
    pub fn passed(&self) -> bool {
        self.separation_ok && self.spectral_guard_ok && self.narrowness_ok && self.region_ok && self.effective_length_ok
    }
}

pub fn validate_completed_scattering(profile: &SpectralProfile, step: &StepPotential) -> CompletedScatteringReport {
    let l0 = profile.l0();
    let k_bar = profile.k_bar();
    let separation_ratio = step.a() / l0;
    let spectral_guard_ok = profile.check_guard(step).is_ok();

    let (narrowness_ratio, region_ratio) = match turning_point(step, k_bar) {
        Ok(region) => {
            let mut h = 1e-5 * step.kappa0();
            if step.beta() == Sign::Positive {
                h = h.min(0.5 * (k_bar - step.kappa0()));
            }
            let slope = match (turning_point(step, k_bar + h), turning_point(step, k_bar - h)) {
                (Ok(up), Ok(down)) => (up.x_c - down.x_c) / (2.0 * h),
                _ => f64::NAN,
            };
            (l0 / (slope / region.x_c).abs(), l0 / region.length)
        }
        Err(_) => (f64::NAN, f64::NAN),
    };

    let effective_length = effective_transitional_length(profile, step);
    CompletedScatteringReport {
        separation_ratio,
        separation_ok: separation_ratio >= SEPARATION_FACTOR,
        spectral_guard_ok,
        narrowness_ratio,
        narrowness_ok: narrowness_ratio >= SEPARATION_FACTOR,
        region_ratio,
        region_ok: region_ratio >= SEPARATION_FACTOR,
        effective_length,
        effective_length_ok: effective_length.is_finite(),
    }
}

/// ∫|A|²T(x_c − a)dk / ∫|A|²T dk over the propagating part of the window.
fn effective_transitional_length(profile: &SpectralProfile, step: &StepPotential) -> f64 {
    let threshold = match step.beta() {
        Sign::Positive => step.kappa0(),
        Sign::Negative => 0.0,
    };
    let lo = profile.k_low().max(threshold);
    let hi = profile.k_high();
    if lo >= hi {
        return f64::NAN;
    }
    let weighted = |k: f64, with_length: bool| -> f64 {
        match Decomposition::new(step, k) {
            Ok(d) => {
                let w = spectral_amplitude(profile, k).powi(2) * d.stationary.trans_coef;
                if with_length {
                    w * d.region.length
                } else {
                    w
                }
            }
            Err(_) => f64::NAN,
        }
    };
    let opts = AdaptiveOptions {
        abs_tol: 1e-13,
        max_subintervals: 200,
        ..AdaptiveOptions::default()
    };
    let num = integrate_adaptive(|k| weighted(k, true), lo, hi, opts);
    let den = integrate_adaptive(|k| weighted(k, false), lo, hi, opts);
    match (num, den) {
        (Ok(n), Ok(d)) if d.value > 0.0 => n.value / d.value,
        _ => f64::NAN,
    }
}
