use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{fit_line, NeumaierSum};
use crate::packet::grid::SpatialGrid;
use crate::packet::propagator::PacketSnapshot;
use crate::packet::Channel;
use crate::step::PhysicalConfig;

/// Below this norm a channel has no meaningful moments.
pub const MIN_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRecord {
    pub t: f64,
    pub norm: f64,
    pub x_mean: f64,
    pub p_mean: f64,
    pub x2_mean: f64,
}

impl MomentRecord {
    pub fn spread(&self) -> f64 {
        (self.x2_mean - self.x_mean * self.x_mean).max(0.0).sqrt()
    }
}

/// Norm, ⟨x⟩, ⟨x²⟩ and ⟨p⟩ by trapezoidal sums over the grid. The momentum
/// uses the snapshot's analytic derivatives when present and centered
/// differences otherwise.
pub fn moments(snapshot: &PacketSnapshot, cfg: &PhysicalConfig) -> Result<MomentRecord> {
    let grid = &snapshot.grid;
    let psi = &snapshot.values;
    let n = psi.len();
    if n != grid.n_points() {
        return Err(Error::InvalidArgument(format!(
            "snapshot has {n} values for a grid of {} points",
            grid.n_points()
        )));
    }
    let mut norm = NeumaierSum::new();
    let mut first = NeumaierSum::new();
    for (i, v) in psi.iter().enumerate() {
        let w = grid.weight(i) * v.norm_sqr();
        norm.add(w);
        first.add(w * grid.x(i));
    }
    let norm = norm.value();
    if norm.is_nan() || norm <= MIN_NORM {
        return Err(Error::EmptyChannel { norm });
    }
    let x_mean = first.value() / norm;
    // centered second moment keeps the variance nonnegative
    let mut second = NeumaierSum::new();
    let mut current = NeumaierSum::new();
    for (i, v) in psi.iter().enumerate() {
        let w = grid.weight(i);
        let dx = grid.x(i) - x_mean;
        second.add(w * v.norm_sqr() * dx * dx);
        let d = match &snapshot.derivatives {
            Some(d) => d[i],
            None => finite_difference(psi, grid, i),
        };
        current.add(w * (v.conj() * d).im);
    }
    let variance = second.value() / norm;
    Ok(MomentRecord {
        t: snapshot.t,
        norm,
        x_mean,
        p_mean: cfg.hbar * current.value() / norm,
        x2_mean: x_mean * x_mean + variance,
    })
}

fn finite_difference(psi: &[Complex64], grid: &SpatialGrid, i: usize) -> Complex64 {
    let h = grid.spacing();
    let n = psi.len();
    if i == 0 {
        (psi[1] - psi[0]) / h
    } else if i + 1 == n {
        (psi[n - 1] - psi[n - 2]) / h
    } else {
        (psi[i + 1] - psi[i - 1]) / (2.0 * h)
    }
}

/// Straight-line fit x̄(t) = slope·t + intercept over a set of records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub t_window: (f64, f64),
}

impl TrajectoryFit {
    /// Time at which the fitted center of mass passes x = 0.
    pub fn departure_time(&self) -> f64 {
        -self.intercept / self.slope
    }

    pub fn arrival_time(&self, x: f64) -> f64 {
        (x - self.intercept) / self.slope
    }
}

/// Fails with `BadFitWindow` when the rms residual exceeds 0.01·l0.
pub fn fit_trajectory(records: &[MomentRecord], l0: f64) -> Result<TrajectoryFit> {
    let ts: Vec<f64> = records.iter().map(|r| r.t).collect();
    let xs: Vec<f64> = records.iter().map(|r| r.x_mean).collect();
    let line = fit_line(&ts, &xs)?;
    let limit = 0.01 * l0;
    if line.rms_residual > limit {
        return Err(Error::BadFitWindow {
            rms_residual: line.rms_residual,
            limit,
        });
    }
    let lo = ts.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(TrajectoryFit {
        slope: line.slope,
        intercept: line.intercept,
        rms_residual: line.rms_residual,
        t_window: (lo, hi),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Initial,
    Final,
}

/// Number of spreads that must separate a packet from the scattering
/// region, and from the grid edges, for a record to count as asymptotic.
pub const STAGE_SPREADS: f64 = 5.0;

/// Whether a record belongs to the given asymptotic stage. Initially the
/// packet lies left of the step and moves right; finally the transmitted
/// packet lies past `x_c` and the reflected one lies left of the step and
/// moves left.
pub fn in_stage(record: &MomentRecord, channel: Channel, stage: Stage, a: f64, x_c: f64, grid: &SpatialGrid) -> bool {
    let reach = STAGE_SPREADS * record.spread();
    let (lo, hi) = (record.x_mean - reach, record.x_mean + reach);
    if lo < grid.x_min() || hi > grid.x_max() {
        return false;
    }
    match (stage, channel) {
        (Stage::Initial, _) => hi < a && record.p_mean > 0.0,
        (Stage::Final, Channel::Transmission) => lo > x_c,
        (Stage::Final, Channel::Reflection) => hi < a && record.p_mean < 0.0,
        (Stage::Final, _) => false,
    }
}
