//! Characteristic times and lengths of the transmission and reflection
//! subprocesses: flow velocity, dwell times, penetration depth, asymptotic
//! group times, and the clock-model values they are compared against.

use crate::error::{Error, Result};
use crate::numerics::{integrate_adaptive, AdaptiveOptions};
use crate::step::{kappa_of_k, probability_current, EnergyRegime, Kappa, PhysicalConfig, StepPotential};
use crate::swf::Decomposition;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DwellReport {
    pub tau_tr_dwell: f64,
    pub tau_ref_dwell: f64,
    /// Time to cross the transitional region at the transmitted velocity.
    pub tau_free: f64,
    pub tau_tr_dwell_delay: f64,
    pub l_depth: f64,
    pub regime: EnergyRegime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupReport {
    pub t_dep: f64,
    pub x_start: f64,
    pub t_arr_tr: f64,
    pub t_arr_ref: f64,
    /// Arrival minus departure over the whole interval [0, a + L].
    pub delta_t_tr: f64,
    pub delta_t_ref: f64,
    pub tau_tr_group: f64,
    pub tau_ref_group: f64,
    pub tau_group_delay: f64,
    pub davies_tau_tr: f64,
    pub davies_tau_ref: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalReflectionReport {
    pub tau_ref_dwell: f64,
    pub l_depth: f64,
    pub tau_ref_group: f64,
    pub davies_depth: f64,
}

/// arctan(u) − u/(1+u²), with its power series for small u where the two
/// terms cancel to O(u³).
fn arctan_minus_rational(u: f64) -> f64 {
    if u < 0.1 {
        let u2 = u * u;
        let mut power = u * u2;
        let mut sum = 0.0;
        let mut sign = 1.0;
        for n in 1..40 {
            let n = n as f64;
            let term = sign * 2.0 * n / (2.0 * n + 1.0) * power;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            power *= u2;
            sign = -sign;
        }
        sum
    } else {
        u.atan() - u / (1.0 + u * u)
    }
}

/// arctan(u) − u, series for small u.
fn arctan_minus_identity(u: f64) -> f64 {
    if u < 0.1 {
        let u2 = u * u;
        let mut power = u * u2;
        let mut sum = 0.0;
        let mut sign = -1.0;
        for n in 1..40 {
            let term = sign * power / (2 * n + 1) as f64;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            power *= u2;
            sign = -sign;
        }
        sum
    } else {
        u.atan() - u
    }
}

/// v_tr-flow = I_tr / |ψ_tr|², with I_tr = (ħk/m)·T.
pub fn flow_velocity(step: &StepPotential, k: f64, x: f64, cfg: &PhysicalConfig) -> Result<f64> {
    let d = Decomposition::new(step, k)?;
    Ok(flow_velocity_of(&d, x, cfg))
}

pub(crate) fn flow_velocity_of(d: &Decomposition, x: f64, cfg: &PhysicalConfig) -> f64 {
    let density = d.transmission(x).0.norm_sqr();
    debug_assert!(density > 0.0, "transmission SWF has no nodes");
    cfg.velocity(d.k()) * d.stationary.trans_coef / density
}

pub fn dwell_times(step: &StepPotential, k: f64, cfg: &PhysicalConfig) -> Result<DwellReport> {
    let d = Decomposition::new(step, k)?;
    let kappa = d.kappa;
    let u = (kappa / k).sqrt();
    let theta = u.atan();
    let tf = cfg.time_factor();

    // (κ²+k²)θ − βκ0²√(kκ)/(k+κ) = k²[(θ − u) + u³ + u⁴θ] using βκ0² = k² − κ².
    let u2 = u * u;
    let bracket_tr = arctan_minus_identity(u) + u * u2 + u2 * u2 * theta;
    let tau_tr_dwell = tf * k * bracket_tr / (2.0 * kappa.powi(3));

    let g = arctan_minus_rational(u);
    let tau_ref_dwell = 2.0 * tf * g / (kappa * kappa);
    let l_depth = k * g / (kappa * kappa);

    let tau_free = tf * d.region.length / kappa;
    let diff = kappa - k;
    let tau_tr_dwell_delay = tf * diff / (2.0 * k * kappa.powi(3)) * (diff * theta + (k * kappa).sqrt());

    Ok(DwellReport {
        tau_tr_dwell,
        tau_ref_dwell,
        tau_free,
        tau_tr_dwell_delay,
        l_depth,
        regime: EnergyRegime::Propagating,
    })
}

/// Subprocess whose dwell time is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DwellChannel {
    Transmission,
    Reflection,
}

/// Dwell time from its defining integral: ∫|ψ|² over the region behind the
/// step occupied by the channel, divided by the channel's incident flux.
pub fn dwell_time_oracle(
    step: &StepPotential,
    k: f64,
    channel: DwellChannel,
    cfg: &PhysicalConfig,
) -> Result<f64> {
    let opts = AdaptiveOptions::default();
    match kappa_of_k(step, k)? {
        Kappa::Propagating(_) => {
            let d = Decomposition::new(step, k)?;
            let (flux, integral) = match channel {
                DwellChannel::Transmission => (
                    cfg.velocity(k) * d.stationary.trans_coef,
                    integrate_adaptive(|x| d.transmission(x).0.norm_sqr(), d.a, d.x_c(), opts)?,
                ),
                DwellChannel::Reflection => (
                    cfg.velocity(k) * d.stationary.refl_coef,
                    integrate_adaptive(|x| d.reflection(x).0.norm_sqr(), d.a, d.x_c(), opts)?,
                ),
            };
            Ok(integral.value / flux)
        }
        Kappa::Evanescent(kappa) => {
            if channel == DwellChannel::Transmission {
                return Err(Error::WrongRegime { expected: "propagating" });
            }
            let amp = crate::step::stationary_amplitudes(step, k)?;
            // Tail beyond 40/κ carries a fraction e^{-80} of the integral.
            let end = step.a() + 40.0 / kappa;
            let integral = integrate_adaptive(|x| amp.psi(x).norm_sqr(), step.a(), end, opts)?;
            Ok(integral.value / cfg.velocity(k))
        }
    }
}

/// Departure, arrival and asymptotic group times for the observation
/// interval [0, a + L].
pub fn group_times(step: &StepPotential, k: f64, interval_l: f64, cfg: &PhysicalConfig) -> Result<GroupReport> {
    if !(interval_l.is_finite() && interval_l > 0.0) {
        return Err(Error::InvalidArgument(format!("interval length L must be positive, got {interval_l}")));
    }
    let d = Decomposition::new(step, k)?;
    let kappa = d.kappa;
    let tf = cfg.time_factor();
    let v_k = cfg.velocity(k);
    let v_kappa = cfg.velocity(kappa);
    // k − κ = βκ0²/(k + κ)
    let diff = step.beta().value() * step.kappa0().powi(2) / (k + kappa);
    let t_dep = tf * diff / (k * kappa).powf(1.5);
    let tau_free = d.region.length / v_kappa;
    let t_arr_ref = 2.0 * step.a() / v_k;
    let t_arr_tr = step.a() / v_k + interval_l / v_kappa;
    Ok(GroupReport {
        t_dep,
        x_start: -v_k * t_dep,
        t_arr_tr,
        t_arr_ref,
        delta_t_tr: t_arr_tr - t_dep,
        delta_t_ref: t_arr_ref - t_dep,
        tau_tr_group: tau_free - t_dep,
        tau_ref_group: -t_dep,
        tau_group_delay: -t_dep,
        davies_tau_tr: tau_free,
        davies_tau_ref: 0.0,
    })
}

pub fn total_reflection_times(step: &StepPotential, k: f64, cfg: &PhysicalConfig) -> Result<TotalReflectionReport> {
    let kappa = match kappa_of_k(step, k)? {
        Kappa::Evanescent(q) => q,
        Kappa::Propagating(_) => return Err(Error::WrongRegime { expected: "evanescent" }),
    };
    let k0sq = step.kappa0().powi(2);
    let l_depth = k * k / (kappa * k0sq);
    Ok(TotalReflectionReport {
        tau_ref_dwell: 2.0 * l_depth / cfg.velocity(k),
        l_depth,
        tau_ref_group: 2.0 * cfg.time_factor() / (k * kappa),
        davies_depth: 1.0 / kappa,
    })
}

/// Clock-model penetration depth: 1/κ under total reflection, zero when
/// the step is overcome.
pub fn davies_depth(step: &StepPotential, k: f64) -> Result<f64> {
    Ok(match kappa_of_k(step, k)? {
        Kappa::Evanescent(q) => 1.0 / q,
        Kappa::Propagating(_) => 0.0,
    })
}

/// Transmitted current at x, for checks of flux constancy.
pub fn transmission_current(step: &StepPotential, k: f64, x: f64, cfg: &PhysicalConfig) -> Result<f64> {
    let d = Decomposition::new(step, k)?;
    let (v, dv) = d.transmission(x);
    Ok(probability_current(v, dv, cfg))
}
