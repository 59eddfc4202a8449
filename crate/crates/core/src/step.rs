//! Step potential, dispersion relation and the stationary total wave
//! function with its transmission and reflection coefficients.
//!
//! The step of height `v0` sits at `x = a`; a particle of wavenumber `k`
//! impinges from the left. Behind the step the wavenumber is
//! `kappa = sqrt(k^2 - beta kappa0^2)` when the region is classically
//! accessible, and the field decays with `kappa = sqrt(kappa0^2 - k^2)`
//! when it is not.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Units of action and mass. Wave functions depend on neither; velocities,
/// currents and times carry them as prefactors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

impl PhysicalConfig {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidConfig(format!("hbar must be positive, got {hbar}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidConfig(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { hbar, mass })
    }

    /// Group velocity ħk/m of a free plane wave.
    #[inline]
    pub fn velocity(&self, k: f64) -> f64 {
        self.hbar * k / self.mass
    }

    /// Energy ħ²k²/2m.
    #[inline]
    pub fn energy(&self, k: f64) -> f64 {
        self.hbar * self.hbar * k * k / (2.0 * self.mass)
    }

    /// The factor m/ħ that turns (length × wavenumber⁻¹)-type expressions
    /// into times.
    #[inline]
    pub fn time_factor(&self) -> f64 {
        self.mass / self.hbar
    }
}

/// Sign of the step height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPotential {
    v0: f64,
    a: f64,
    kappa0: f64,
    beta: Sign,
}

impl StepPotential {
    pub fn new(v0: f64, a: f64, cfg: &PhysicalConfig) -> Result<Self> {
        if !v0.is_finite() || v0 == 0.0 {
            return Err(Error::InvalidStep(format!("step height must be finite and nonzero, got {v0}")));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidStep(format!("step position must be positive, got {a}")));
        }
        let kappa0 = (2.0 * cfg.mass * v0.abs()).sqrt() / cfg.hbar;
        let beta = if v0 > 0.0 { Sign::Positive } else { Sign::Negative };
        Ok(Self { v0, a, kappa0, beta })
    }

    /// Builds the step from its threshold wavenumber instead of its height.
    pub fn from_kappa0(beta: Sign, kappa0: f64, a: f64, cfg: &PhysicalConfig) -> Result<Self> {
        if !(kappa0.is_finite() && kappa0 > 0.0) {
            return Err(Error::InvalidStep(format!("kappa0 must be positive, got {kappa0}")));
        }
        let v0 = beta.value() * (cfg.hbar * kappa0).powi(2) / (2.0 * cfg.mass);
        let mut step = Self::new(v0, a, cfg)?;
        step.kappa0 = kappa0;
        Ok(step)
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    pub fn beta(&self) -> Sign {
        self.beta
    }

    /// The same step with the height reversed.
    pub fn mirrored(&self) -> Self {
        Self { v0: -self.v0, beta: self.beta.flip(), ..*self }
    }

    /// The incident wavenumber whose propagating-branch partner is `kappa`.
    pub fn k_for_kappa(&self, kappa: f64) -> f64 {
        (kappa * kappa + self.beta.value() * self.kappa0 * self.kappa0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergyRegime {
    /// E > V0: a transmitted plane wave exists.
    Propagating,
    /// 0 < E < V0 on a positive step: total reflection.
    Evanescent,
}

impl EnergyRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            EnergyRegime::Propagating => "propagating",
            EnergyRegime::Evanescent => "evanescent",
        }
    }
}

/// Wavenumber behind the step, tagged by branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa {
    Propagating(f64),
    /// Positive decay constant of `exp(-kappa x)`.
    Evanescent(f64),
}

impl Kappa {
    pub fn value(self) -> f64 {
        match self {
            Kappa::Propagating(v) | Kappa::Evanescent(v) => v,
        }
    }

    pub fn regime(self) -> EnergyRegime {
        match self {
            Kappa::Propagating(_) => EnergyRegime::Propagating,
            Kappa::Evanescent(_) => EnergyRegime::Evanescent,
        }
    }

    pub fn propagating(self) -> Result<f64> {
        match self {
            Kappa::Propagating(v) => Ok(v),
            Kappa::Evanescent(_) => Err(Error::WrongRegime { expected: "propagating" }),
        }
    }
}

pub fn kappa_of_k(step: &StepPotential, k: f64) -> Result<Kappa> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::NonPositiveWavenumber(k));
    }
    let k0 = step.kappa0;
    match step.beta {
        Sign::Negative => Ok(Kappa::Propagating(k.hypot(k0))),
        Sign::Positive if k == k0 => Err(Error::DegenerateEnergy { k }),
        // Factored differences avoid cancellation next to the threshold.
        Sign::Positive if k > k0 => Ok(Kappa::Propagating(((k - k0) * (k + k0)).sqrt())),
        Sign::Positive => Ok(Kappa::Evanescent(((k0 - k) * (k0 + k)).sqrt())),
    }
}

/// Amplitudes of the stationary total wave function
/// `e^{ikx} + B e^{-ikx}` (x < a) and `A e^{iκx}` or `A e^{-κx}` (x > a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryAmplitudes {
    pub k: f64,
    pub kappa: Kappa,
    pub amp_a: Complex64,
    pub amp_b: Complex64,
    pub trans_coef: f64,
    pub refl_coef: f64,
    a: f64,
    /// Right-branch value at x = a, kept separately because `amp_a`
    /// overflows on the evanescent branch once κa exceeds ~700.
    at_step: Complex64,
}

pub fn stationary_amplitudes(step: &StepPotential, k: f64) -> Result<StationaryAmplitudes> {
    let kappa = kappa_of_k(step, k)?;
    let a = step.a;
    let out = match kappa {
        Kappa::Propagating(q) => {
            // k - κ = β κ0² / (k + κ) without cancellation.
            let diff = step.beta.value() * step.kappa0 * step.kappa0 / (k + q);
            let ratio = diff / (k + q);
            let at_step = Complex64::from_polar(2.0 * k / (k + q), k * a);
            StationaryAmplitudes {
                k,
                kappa,
                amp_a: Complex64::from_polar(2.0 * k / (k + q), (k - q) * a),
                amp_b: Complex64::from_polar(ratio, 2.0 * k * a),
                trans_coef: 4.0 * k * q / ((k + q) * (k + q)),
                refl_coef: ratio * ratio,
                a,
                at_step,
            }
        }
        Kappa::Evanescent(q) => {
            let denom = Complex64::new(k, q);
            let at_step = 2.0 * k / denom * Complex64::cis(k * a);
            StationaryAmplitudes {
                k,
                kappa,
                amp_a: 2.0 * k / denom * Complex64::new(q * a, k * a).exp(),
                amp_b: Complex64::new(k, -q) / denom * Complex64::cis(2.0 * k * a),
                trans_coef: 0.0,
                refl_coef: 1.0,
                a,
                at_step,
            }
        }
    };
    Ok(out)
}

impl StationaryAmplitudes {
    pub fn regime(&self) -> EnergyRegime {
        self.kappa.regime()
    }

    /// Ψ_tot(x) and dΨ_tot/dx.
    pub fn psi_with_derivative(&self, x: f64) -> (Complex64, Complex64) {
        let k = self.k;
        if x < self.a {
            let e = Complex64::cis(k * x);
            let r = self.amp_b * e.conj();
            (e + r, Complex64::i() * k * (e - r))
        } else {
            match self.kappa {
                Kappa::Propagating(q) => {
                    let v = self.at_step * Complex64::cis(q * (x - self.a));
                    (v, Complex64::i() * q * v)
                }
                Kappa::Evanescent(q) => {
                    let v = self.at_step * (-q * (x - self.a)).exp();
                    (v, -q * v)
                }
            }
        }
    }

    pub fn psi(&self, x: f64) -> Complex64 {
        self.psi_with_derivative(x).0
    }

    /// Value of the left (x < a) prescription, evaluated at any x.
    pub fn left_branch(&self, x: f64) -> Complex64 {
        let e = Complex64::cis(self.k * x);
        e + self.amp_b * e.conj()
    }

    /// Value of the right (x > a) prescription, evaluated at any x.
    pub fn right_branch(&self, x: f64) -> Complex64 {
        match self.kappa {
            Kappa::Propagating(q) => self.at_step * Complex64::cis(q * (x - self.a)),
            Kappa::Evanescent(q) => self.at_step * (-q * (x - self.a)).exp(),
        }
    }
}

pub fn total_wavefunction(step: &StepPotential, k: f64, x: f64) -> Result<Complex64> {
    Ok(stationary_amplitudes(step, k)?.psi(x))
}

/// Probability current density (ħ/m)·Im(ψ* ψ').
#[inline]
pub fn probability_current(value: Complex64, derivative: Complex64, cfg: &PhysicalConfig) -> f64 {
    cfg.hbar / cfg.mass * (value.conj() * derivative).im
}
