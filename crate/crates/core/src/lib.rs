//! Scattering of a nonrelativistic particle on a potential step, split into
//! its transmission and reflection subprocesses.

pub mod error;
pub mod numerics;
pub mod packet;
pub mod step;
pub mod swf;
pub mod times;

pub use error::{Error, Result};
pub use step::{
    kappa_of_k, probability_current, stationary_amplitudes, total_wavefunction, EnergyRegime, Kappa,
    PhysicalConfig, Sign, StationaryAmplitudes, StepPotential,
};
pub use swf::{
    lambda_phase, swf_amplitudes, turning_point, turning_point_oracle, Decomposition, SwfAmplitudes,
    TransitionalRegion, TurningPointOracle,
};
pub use times::{
    davies_depth, dwell_time_oracle, dwell_times, flow_velocity, group_times, total_reflection_times, DwellChannel,
    DwellReport, GroupReport, TotalReflectionReport,
};
pub use packet::{
    evolve, moments, spectral_amplitude, validate_completed_scattering, Channel, MomentRecord, PacketSnapshot,
    Propagator, SpatialGrid, SpectralProfile, TrajectoryFit,
};
