//! Decomposition of the stationary total wave function into a transmission
//! and a reflection subprocess wave function (SWF).
//!
//! Left of the step both SWFs carry one incoming wave, `A_tr e^{ikx}` and
//! `A_ref e^{ikx}`, with `A_tr + A_ref = 1`. The reflection SWF is a
//! currentless standing wave that continues into the step region as
//! `C sin(κ(x - x_c))` and vanishes identically beyond its node `x_c`; the
//! transmission SWF is whatever remains of the total wave function.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{bisect, sign_change_brackets};
use crate::step::{stationary_amplitudes, Sign, StationaryAmplitudes, StepPotential};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwfAmplitudes {
    pub lambda: f64,
    pub amp_tr: Complex64,
    pub amp_ref: Complex64,
    /// Phases (μ, ν) of `A_tr = √T e^{iμ}` and `A_ref = √R e^{iν}`.
    pub chosen_roots: (f64, f64),
    /// The other solution of `√T e^{iμ} + √R e^{iν} = 1`.
    pub rejected_roots: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionalRegion {
    pub x_c: f64,
    pub length: f64,
    pub amp_c: Complex64,
}

/// λ = 2·arctan(√((κ/k)^β)), always in (0, π/2) on the propagating branch.
pub fn lambda_phase(step: &StepPotential, k: f64) -> Result<f64> {
    let kappa = crate::step::kappa_of_k(step, k)?.propagating()?;
    Ok(lambda_from_ratio(step.beta(), kappa / k))
}

fn lambda_from_ratio(beta: Sign, ratio: f64) -> f64 {
    let r = match beta {
        Sign::Positive => ratio,
        Sign::Negative => 1.0 / ratio,
    };
    2.0 * r.sqrt().atan()
}

/// λ from its coefficient form arctan(√(T/R)).
pub fn lambda_from_coefficients(trans_coef: f64, refl_coef: f64) -> f64 {
    (trans_coef / refl_coef).sqrt().atan()
}

pub fn swf_amplitudes(step: &StepPotential, k: f64) -> Result<SwfAmplitudes> {
    let amp = stationary_amplitudes(step, k)?;
    let kappa = amp.kappa.propagating()?;
    Ok(swf_from_stationary(step.beta(), &amp, kappa))
}

fn swf_from_stationary(beta: Sign, amp: &StationaryAmplitudes, kappa: f64) -> SwfAmplitudes {
    let b = beta.value();
    let lambda = lambda_from_ratio(beta, kappa / amp.k);
    let chosen = (b * (lambda - FRAC_PI_2), b * lambda);
    let rejected = (-chosen.0, -chosen.1);
    SwfAmplitudes {
        lambda,
        amp_tr: Complex64::from_polar(amp.trans_coef.sqrt(), chosen.0),
        amp_ref: Complex64::from_polar(amp.refl_coef.sqrt(), chosen.1),
        chosen_roots: chosen,
        rejected_roots: rejected,
    }
}

/// Angle κ(x_c − a) = arctan √(κ/k) and the length x_c − a.
///
/// When the angle is tiny the length is taken from the series
/// arctan(u)/κ ≈ (1 − u²/3)/√(κk), which avoids forming u/κ.
fn transitional_length(k: f64, kappa: f64) -> (f64, f64) {
    let u = (kappa / k).sqrt();
    let angle = u.atan();
    let length = if angle < 1e-8 {
        (1.0 - u * u / 3.0) / (kappa * k).sqrt()
    } else {
        angle / kappa
    };
    (angle, length)
}

pub fn turning_point(step: &StepPotential, k: f64) -> Result<TransitionalRegion> {
    Ok(Decomposition::new(step, k)?.region)
}

/// Everything needed to evaluate both SWFs at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub beta: Sign,
    pub a: f64,
    pub kappa: f64,
    pub stationary: StationaryAmplitudes,
    pub swf: SwfAmplitudes,
    pub region: TransitionalRegion,
}

impl Decomposition {
    /// Requires the propagating regime.
    pub fn new(step: &StepPotential, k: f64) -> Result<Self> {
        let stationary = stationary_amplitudes(step, k)?;
        let kappa = stationary.kappa.propagating()?;
        let beta = step.beta();
        let swf = swf_from_stationary(beta, &stationary, kappa);
        let (_, length) = transitional_length(k, kappa);
        let a = step.a();
        // C = -2 i^{(β-1)/2} √(kR/κ) e^{i(ka + βλ/2)}
        let phase = Complex64::cis(k * a + beta.value() * swf.lambda / 2.0);
        let prefactor = match beta {
            Sign::Positive => Complex64::new(-1.0, 0.0),
            Sign::Negative => Complex64::new(0.0, 1.0),
        };
        let amp_c = prefactor * 2.0 * (k * stationary.refl_coef / kappa).sqrt() * phase;
        Ok(Self {
            beta,
            a,
            kappa,
            stationary,
            swf,
            region: TransitionalRegion { x_c: a + length, length, amp_c },
        })
    }

    pub fn k(&self) -> f64 {
        self.stationary.k
    }

    pub fn x_c(&self) -> f64 {
        self.region.x_c
    }

    /// Φ_ref: the reflection standing wave on the whole axis, without the
    /// cut at x_c. Returns value and first derivative.
    pub fn reflection_continuation(&self, x: f64) -> (Complex64, Complex64) {
        if x < self.a {
            let k = self.k();
            let e = Complex64::cis(k * x);
            let inc = self.swf.amp_ref * e;
            let out = self.stationary.amp_b * e.conj();
            (inc + out, Complex64::i() * k * (inc - out))
        } else {
            let (s, c) = (self.kappa * (x - self.region.x_c)).sin_cos();
            let c_amp = self.region.amp_c;
            (c_amp * s, c_amp * (self.kappa * c))
        }
    }

    /// ψ_ref = Φ_ref·θ(x_c − x).
    pub fn reflection(&self, x: f64) -> (Complex64, Complex64) {
        if x > self.region.x_c {
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            self.reflection_continuation(x)
        }
    }

    /// ψ_tr: `A_tr e^{ikx}` left of the step, Ψ_tot − ψ_ref on [a, x_c]
    /// and the transmitted wave beyond.
    pub fn transmission(&self, x: f64) -> (Complex64, Complex64) {
        if x < self.a {
            let k = self.k();
            let v = self.swf.amp_tr * Complex64::cis(k * x);
            (v, Complex64::i() * k * v)
        } else {
            let (tv, td) = self.stationary.psi_with_derivative(x);
            let (rv, rd) = self.reflection(x);
            (tv - rv, td - rd)
        }
    }

    /// The reflection SWF for x < a written as a standing wave around the
    /// step, `√R e^{i(ka+βλ/2)}[e^{iz} + β e^{-iz}]` with `z = k(x−a) + βλ/2`.
    pub fn reflection_standing_form(&self, x: f64) -> Complex64 {
        let b = self.beta.value();
        let k = self.k();
        let half = b * self.swf.lambda / 2.0;
        let z = k * (x - self.a) + half;
        let global = Complex64::from_polar(self.stationary.refl_coef.sqrt(), k * self.a + half);
        global * (Complex64::cis(z) + b * Complex64::cis(-z))
    }
}

pub fn stationary_swf_ref(step: &StepPotential, k: f64, x: f64) -> Result<Complex64> {
    Ok(Decomposition::new(step, k)?.reflection(x).0)
}

pub fn stationary_swf_tr(step: &StepPotential, k: f64, x: f64) -> Result<Complex64> {
    Ok(Decomposition::new(step, k)?.transmission(x).0)
}

/// A standing wave that is a free solution with wavenumber `k` left of the
/// step and with wavenumber `kappa` right of it, obtained by continuing the
/// left expression through x = a with matched value and slope.
#[derive(Debug, Clone, Copy)]
struct MatchedStandingWave {
    a: f64,
    k: f64,
    kappa: f64,
    incoming: Complex64,
    outgoing: Complex64,
    value_at_step: Complex64,
    slope_at_step: Complex64,
}

impl MatchedStandingWave {
    fn new(a: f64, k: f64, kappa: f64, incoming: Complex64, outgoing: Complex64) -> Self {
        let e = Complex64::cis(k * a);
        let value_at_step = incoming * e + outgoing * e.conj();
        let slope_at_step = Complex64::i() * k * (incoming * e - outgoing * e.conj());
        Self { a, k, kappa, incoming, outgoing, value_at_step, slope_at_step }
    }

    fn eval(&self, x: f64) -> (Complex64, Complex64) {
        if x < self.a {
            let e = Complex64::cis(self.k * x);
            let inc = self.incoming * e;
            let out = self.outgoing * e.conj();
            (inc + out, Complex64::i() * self.k * (inc - out))
        } else {
            let (s, c) = (self.kappa * (x - self.a)).sin_cos();
            let v = self.value_at_step * c + self.slope_at_step * (s / self.kappa);
            let d = -self.value_at_step * (self.kappa * s) + self.slope_at_step * c;
            (v, d)
        }
    }

    /// Real profile of the standing wave after removing its global phase.
    fn real_profile(&self, x: f64) -> f64 {
        let unit = self.value_at_step / self.value_at_step.norm();
        (unit.conj() * self.eval(x).0).re
    }
}

/// Zeros of a matched standing wave in (a, a + 10π/κ], scanning with step
/// π/(8κ) and bisecting each bracket.
fn standing_wave_zeros(wave: &MatchedStandingWave) -> Result<Vec<f64>> {
    let a = wave.a;
    let end = a + 10.0 * PI / wave.kappa;
    let step = PI / (8.0 * wave.kappa);
    let f = |x: f64| wave.real_profile(x);
    let zeros: Vec<f64> = sign_change_brackets(f, a, end, step)
        .into_iter()
        .map(|(lo, hi)| bisect(f, lo, hi, 1e-12 * hi.abs().max(1.0)))
        .filter(|&z| z > a)
        .collect();
    if zeros.is_empty() {
        return Err(Error::NoZeroFound { start: a, end });
    }
    Ok(zeros)
}

fn reflection_wave(step: &StepPotential, k: f64, use_rejected: bool) -> Result<MatchedStandingWave> {
    let amp = stationary_amplitudes(step, k)?;
    let kappa = amp.kappa.propagating()?;
    let b = step.beta().value();
    let lambda = lambda_from_ratio(step.beta(), kappa / k);
    let nu = if use_rejected { -b * lambda } else { b * lambda };
    let incoming = Complex64::from_polar(amp.refl_coef.sqrt(), nu);
    Ok(MatchedStandingWave::new(step.a(), k, kappa, incoming, amp.amp_b))
}

/// Result of the root-finding check on the turning point.
#[derive(Debug, Clone, PartialEq)]
pub struct TurningPointOracle {
    /// Zero nearest to the step.
    pub zero: f64,
    /// All zeros found in the scan range, ascending.
    pub zeros: Vec<f64>,
    /// |dx_n/dk| for the first three zero families, by central differences.
    pub family_slopes: [f64; 3],
    pub delta_k: f64,
    /// Whether the nearest zero has the smallest |dx_n/dk|.
    pub nearest_minimizes_slope: bool,
}

/// Locates the zeros of the continued reflection standing wave numerically
/// and checks that the one nearest the step moves least with k.
pub fn turning_point_oracle(step: &StepPotential, k: f64) -> Result<TurningPointOracle> {
    let zeros = standing_wave_zeros(&reflection_wave(step, k, false)?)?;
    let k0 = step.kappa0();
    let mut delta_k = 1e-5 * k0;
    if step.beta() == Sign::Positive {
        // keep k - Δk on the propagating branch
        delta_k = delta_k.min(0.5 * (k - k0));
    }
    let upper = standing_wave_zeros(&reflection_wave(step, k + delta_k, false)?)?;
    let lower = standing_wave_zeros(&reflection_wave(step, k - delta_k, false)?)?;
    if zeros.len() < 3 || upper.len() < 3 || lower.len() < 3 {
        let kappa = crate::step::kappa_of_k(step, k)?.value();
        return Err(Error::NoZeroFound { start: step.a(), end: step.a() + 10.0 * PI / kappa });
    }
    let mut family_slopes = [0.0; 3];
    for (n, slope) in family_slopes.iter_mut().enumerate() {
        *slope = ((upper[n] - lower[n]) / (2.0 * delta_k)).abs();
    }
    let nearest_minimizes_slope = family_slopes[0] < family_slopes[1] && family_slopes[0] < family_slopes[2];
    Ok(TurningPointOracle {
        zero: zeros[0],
        zeros,
        family_slopes,
        delta_k,
        nearest_minimizes_slope,
    })
}

/// Reflection standing wave built from the rejected root pair, continued
/// through the step with matched value and slope (no cut). Returns value
/// and derivative.
pub fn alternative_swf_ref(step: &StepPotential, k: f64, x: f64) -> Result<(Complex64, Complex64)> {
    Ok(reflection_wave(step, k, true)?.eval(x))
}

/// Real profile of the alternative standing wave (global phase removed).
pub fn alternative_swf_ref_profile(step: &StepPotential, k: f64, x: f64) -> Result<f64> {
    Ok(reflection_wave(step, k, true)?.real_profile(x))
}

/// Reflection SWF under total reflection; it coincides with Ψ_tot.
pub fn total_reflection_swf(step: &StepPotential, k: f64, x: f64) -> Result<Complex64> {
    let amp = evanescent_amplitudes(step, k)?;
    Ok(amp.psi(x))
}

/// Transmission SWF under total reflection: identically zero.
pub fn total_reflection_swf_tr(step: &StepPotential, k: f64, _x: f64) -> Result<Complex64> {
    evanescent_amplitudes(step, k)?;
    Ok(Complex64::new(0.0, 0.0))
}

fn evanescent_amplitudes(step: &StepPotential, k: f64) -> Result<StationaryAmplitudes> {
    let amp = stationary_amplitudes(step, k)?;
    match amp.kappa {
        crate::step::Kappa::Evanescent(_) => Ok(amp),
        crate::step::Kappa::Propagating(_) => Err(Error::WrongRegime { expected: "evanescent" }),
    }
}
