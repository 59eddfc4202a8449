//! Time-dependent Gaussian packets built by spectral quadrature over the
//! stationary solutions, for the total wave function and each subprocess.

mod grid;
mod moments;
mod profile;
mod propagator;
mod validate;

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub use grid::SpatialGrid;
pub use moments::{fit_trajectory, in_stage, moments, MomentRecord, Stage, TrajectoryFit, MIN_NORM, STAGE_SPREADS};
pub use profile::{spectral_amplitude, SpectralProfile, DEFAULT_NODES, DEFAULT_WINDOW_SIGMAS};
pub use propagator::{evolve, ChannelMoments, PacketSnapshot, Propagator, EDGE_RATIO_LIMIT};
pub use validate::{validate_completed_scattering, CompletedScatteringReport, SEPARATION_FACTOR};

/// Which packet to synthesize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Total,
    /// The free incident packet, as if the step were absent.
    Incident,
    Transmission,
    Reflection,
    /// Incident-stage part of the transmission packet, A_tr·e^{ikx}.
    TransmissionIncident,
    /// Incident-stage part of the reflection packet, A_ref·e^{ikx}.
    ReflectionIncident,
}

impl Channel {
    pub const COUNT: usize = 6;
    pub const ALL: [Channel; Channel::COUNT] = [
        Channel::Total,
        Channel::Incident,
        Channel::Transmission,
        Channel::Reflection,
        Channel::TransmissionIncident,
        Channel::ReflectionIncident,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Total => "total",
            Channel::Incident => "incident",
            Channel::Transmission => "tr",
            Channel::Reflection => "ref",
            Channel::TransmissionIncident => "tr_inc",
            Channel::ReflectionIncident => "ref_inc",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Channel::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown channel '{s}'")))
    }
}
