use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{ComplexSum, GaussLegendre, NeumaierSum};
use crate::packet::grid::SpatialGrid;
use crate::packet::moments::{fit_trajectory, moments, MomentRecord, TrajectoryFit};
use crate::packet::profile::SpectralProfile;
use crate::packet::Channel;
use crate::step::{PhysicalConfig, StepPotential};
use crate::swf::Decomposition;

/// Channel wave packet sampled on a grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketSnapshot {
    pub t: f64,
    pub grid: SpatialGrid,
    pub channel: Channel,
    pub values: Vec<Complex64>,
    /// ∂ψ/∂x at the same points when known analytically.
    pub derivatives: Option<Vec<Complex64>>,
}

impl PacketSnapshot {
    /// Multiplies values and derivatives by a constant.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            derivatives: self.derivatives.as_ref().map(|d| d.iter().map(|v| v * c).collect()),
            ..self.clone()
        }
    }

    pub fn peak_density(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max)
    }

    /// Larger of the two edge densities relative to the peak density.
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.peak_density();
        if peak == 0.0 {
            return 0.0;
        }
        let first = self.values.first().map_or(0.0, |v| v.norm_sqr());
        let last = self.values.last().map_or(0.0, |v| v.norm_sqr());
        first.max(last) / peak
    }

    pub fn norm(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for (i, v) in self.values.iter().enumerate() {
            acc.add(self.grid.weight(i) * v.norm_sqr());
        }
        acc.value()
    }
}

/// Values and x-derivatives of every channel at one grid point.
#[derive(Debug, Clone, Copy, Default)]
struct PointField {
    values: [Complex64; Channel::COUNT],
    derivatives: [Complex64; Channel::COUNT],
}

struct SpectralNode {
    k: f64,
    /// Gauss–Legendre weight times A(k)/√(2π).
    weight: f64,
    /// Gauss–Legendre weight times |A(k)|².
    mass: f64,
    decomposition: Decomposition,
}

impl SpectralNode {
    /// Stationary channel functions φ(x, k) and their x-derivatives.
    #[inline]
    fn stationary(&self, x: f64) -> PointField {
        let d = &self.decomposition;
        let k = self.k;
        let ik = Complex64::new(0.0, k);
        let e = Complex64::cis(k * x);
        let mut out = PointField::default();
        let amp_tr = d.swf.amp_tr;
        let amp_ref = d.swf.amp_ref;
        let mut set = |c: Channel, v: Complex64, dv: Complex64| {
            out.values[c.index()] = v;
            out.derivatives[c.index()] = dv;
        };
        set(Channel::Incident, e, ik * e);
        set(Channel::TransmissionIncident, amp_tr * e, ik * amp_tr * e);
        set(Channel::ReflectionIncident, amp_ref * e, ik * amp_ref * e);
        if x < d.a {
            let back = d.stationary.amp_b * e.conj();
            set(Channel::Total, e + back, ik * (e - back));
            set(Channel::Transmission, amp_tr * e, ik * amp_tr * e);
            let fwd = amp_ref * e;
            set(Channel::Reflection, fwd + back, ik * (fwd - back));
        } else {
            let (tv, td) = d.stationary.psi_with_derivative(x);
            let (rv, rd) = d.reflection(x);
            set(Channel::Total, tv, td);
            set(Channel::Reflection, rv, rd);
            set(Channel::Transmission, tv - rv, td - rd);
        }
        out
    }
}

/// Spectral propagator: every channel packet is the Gauss–Legendre sum
/// over a fixed node set of A(k)·φ(x, k)·e^{−iE(k)t/ħ}/√(2π).
pub struct Propagator {
    profile: SpectralProfile,
    step: StepPotential,
    cfg: PhysicalConfig,
    nodes: Vec<SpectralNode>,
}

impl Propagator {
    pub fn new(profile: SpectralProfile, step: StepPotential, cfg: PhysicalConfig) -> Result<Self> {
        profile.check_guard(&step)?;
        let gl = GaussLegendre::new(profile.nodes())?;
        let norm = 1.0 / (2.0 * PI).sqrt();
        let nodes = gl
            .mapped(profile.k_low(), profile.k_high())
            .map(|(k, w)| {
                let amp = profile.amplitude(k);
                Ok(SpectralNode {
                    k,
                    weight: w * amp * norm,
                    mass: w * amp * amp,
                    decomposition: Decomposition::new(&step, k)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { profile, step, cfg, nodes })
    }

    pub fn profile(&self) -> &SpectralProfile {
        &self.profile
    }

    pub fn step(&self) -> &StepPotential {
        &self.step
    }

    pub fn config(&self) -> &PhysicalConfig {
        &self.cfg
    }

    /// Node wavenumbers in ascending order.
    pub fn node_wavenumbers(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().map(|n| n.k)
    }

    /// (𝒯_as, ℛ_as) = (∫|A|²T dk, ∫|A|²R dk).
    pub fn asymptotic_norms(&self) -> (f64, f64) {
        let mut t = NeumaierSum::new();
        let mut r = NeumaierSum::new();
        for n in &self.nodes {
            t.add(n.mass * n.decomposition.stationary.trans_coef);
            r.add(n.mass * n.decomposition.stationary.refl_coef);
        }
        (t.value(), r.value())
    }

    /// Spectral average of a function of k weighted by |A|²·weight(k).
    pub fn spectral_average<W, F>(&self, weight: W, f: F) -> f64
    where
        W: Fn(&Decomposition) -> f64,
        F: Fn(&Decomposition) -> f64,
    {
        let mut num = NeumaierSum::new();
        let mut den = NeumaierSum::new();
        for n in &self.nodes {
            let w = n.mass * weight(&n.decomposition);
            num.add(w * f(&n.decomposition));
            den.add(w);
        }
        num.value() / den.value()
    }

    fn time_weights(&self, t: f64) -> Vec<Complex64> {
        let hbar = self.cfg.hbar;
        self.nodes
            .iter()
            .map(|n| n.weight * Complex64::cis(-self.cfg.energy(n.k) * t / hbar))
            .collect()
    }

    fn field_at(&self, x: f64, weights: &[Complex64]) -> PointField {
        let mut values = [ComplexSum::new(); Channel::COUNT];
        let mut derivatives = [ComplexSum::new(); Channel::COUNT];
        for (node, w) in self.nodes.iter().zip(weights) {
            let phi = node.stationary(x);
            for c in 0..Channel::COUNT {
                values[c].add(w * phi.values[c]);
                derivatives[c].add(w * phi.derivatives[c]);
            }
        }
        let mut out = PointField::default();
        for c in 0..Channel::COUNT {
            out.values[c] = values[c].value();
            out.derivatives[c] = derivatives[c].value();
        }
        out
    }

    /// All channels at time t. Grid points are evaluated in parallel; each
    /// spectral sum runs in ascending node order.
    pub fn evolve_all(&self, t: f64, grid: &SpatialGrid) -> Vec<PacketSnapshot> {
        let weights = self.time_weights(t);
        let fields: Vec<PointField> = (0..grid.n_points())
            .into_par_iter()
            .map(|i| self.field_at(grid.x(i), &weights))
            .collect();
        Channel::ALL
            .iter()
            .map(|&channel| {
                let c = channel.index();
                PacketSnapshot {
                    t,
                    grid: *grid,
                    channel,
                    values: fields.iter().map(|f| f.values[c]).collect(),
                    derivatives: Some(fields.iter().map(|f| f.derivatives[c]).collect()),
                }
            })
            .collect()
    }

    pub fn evolve(&self, t: f64, grid: &SpatialGrid, channel: Channel) -> PacketSnapshot {
        self.evolve_all(t, grid).swap_remove(channel.index())
    }

    /// Moments of every channel at time t. Channels whose norm is too small
    /// for moments have `None`.
    pub fn moments_at(&self, t: f64, grid: &SpatialGrid) -> ChannelMoments {
        let snapshots = self.evolve_all(t, grid);
        let mut out = ChannelMoments {
            t,
            norms: [0.0; Channel::COUNT],
            edge_ratios: [0.0; Channel::COUNT],
            records: [None; Channel::COUNT],
        };
        for s in &snapshots {
            let c = s.channel.index();
            out.norms[c] = s.norm();
            out.edge_ratios[c] = s.edge_ratio();
            out.records[c] = moments(s, &self.cfg).ok();
        }
        out
    }

    pub fn series(&self, times: &[f64], grid: &SpatialGrid) -> Vec<ChannelMoments> {
        times.iter().map(|&t| self.moments_at(t, grid)).collect()
    }

    /// Spatial norms (𝒯(t), ℛ(t)) of the transmission and reflection packets.
    pub fn channel_norms(&self, t: f64, grid: &SpatialGrid) -> Result<(f64, f64)> {
        let m = self.moments_at(t, grid);
        m.check_grid(&[Channel::Transmission, Channel::Reflection])?;
        Ok((m.norm(Channel::Transmission), m.norm(Channel::Reflection)))
    }

    /// Moments of one channel at each time and a straight-line fit of its
    /// center of mass. All times must lie in one asymptotic stage.
    pub fn cm_trajectory(
        &self,
        times: &[f64],
        grid: &SpatialGrid,
        channel: Channel,
    ) -> Result<(Vec<MomentRecord>, TrajectoryFit)> {
        let records = times
            .iter()
            .map(|&t| moments(&self.evolve(t, grid, channel), &self.cfg))
            .collect::<Result<Vec<_>>>()?;
        let fit = fit_trajectory(&records, self.profile.l0())?;
        Ok((records, fit))
    }
}

/// Norms and moments of all channels at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMoments {
    pub t: f64,
    pub norms: [f64; Channel::COUNT],
    pub edge_ratios: [f64; Channel::COUNT],
    pub records: [Option<MomentRecord>; Channel::COUNT],
}

/// Edge density above this fraction of the peak means the grid clips the packet.
pub const EDGE_RATIO_LIMIT: f64 = 1e-10;

impl ChannelMoments {
    pub fn norm(&self, channel: Channel) -> f64 {
        self.norms[channel.index()]
    }

    pub fn record(&self, channel: Channel) -> Result<MomentRecord> {
        self.records[channel.index()].ok_or(Error::EmptyChannel { norm: self.norm(channel) })
    }

    pub fn check_grid(&self, channels: &[Channel]) -> Result<()> {
        for c in channels {
            let edge_ratio = self.edge_ratios[c.index()];
            if edge_ratio > EDGE_RATIO_LIMIT {
                return Err(Error::GridTooSmall { edge_ratio });
            }
        }
        Ok(())
    }
}

/// Evaluates one channel of a fresh propagator.
pub fn evolve(
    profile: &SpectralProfile,
    step: &StepPotential,
    t: f64,
    grid: &SpatialGrid,
    channel: Channel,
    cfg: &PhysicalConfig,
) -> Result<PacketSnapshot> {
    Ok(Propagator::new(*profile, *step, *cfg)?.evolve(t, grid, channel))
}
