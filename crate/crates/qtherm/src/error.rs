//! Error type shared by the physics modules.

use thiserror::Error;

/// Errors raised by state algebra, propagation, and readout operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Hamiltonian gap must be positive and finite.
    #[error("qubit gap must be positive and finite, got {0}")]
    InvalidFrequency(f64),

    /// Bath parameters violate `T > 0`, `gamma > 0`, `gamma0 >= 0`.
    #[error("invalid bath: {0}")]
    InvalidBath(String),

    /// Inverse temperature of a Gibbs state must be finite.
    #[error("gibbs inverse temperature must be finite, got {0}")]
    InvalidBeta(f64),

    /// Heat capacity is defined for positive temperature only.
    #[error("heat capacity needs beta > 0, got beta = {0}")]
    NonPositiveTemperature(f64),

    /// The relative-entropy reference is (numerically) rank-deficient.
    #[error("relative-entropy reference is pure; divergence is infinite")]
    PureReference,

    /// Entropy derivatives diverge on pure states.
    #[error("operation undefined on a pure state (|r| = {0})")]
    PureState(f64),

    /// Mean energy outside the open spectral interval `(-omega/2, omega/2)`.
    #[error("energy {energy} outside the open interval (-{half_gap}, {half_gap})")]
    UnphysicalEnergy { energy: f64, half_gap: f64 },

    /// Channel rates must be non-negative.
    #[error("negative dissipation rate: {0}")]
    NegativeRate(f64),

    /// `gamma_p = 0` leaves every Bloch vector on the z-axis stationary.
    #[error("no unique steady state: gamma_p = 0")]
    NoSteadyState,

    /// A time grid must start at `t >= 0` and increase strictly.
    #[error("time grid must start at t >= 0 and be strictly increasing")]
    InvalidGrid,

    /// The integrator pushed the state out of the Bloch ball by more than
    /// the clamping budget.
    #[error("numeric integration unstable: |r| = {norm} at t = {t}")]
    IntegrationUnstable { norm: f64, t: f64 },

    /// A trajectory state lies outside the Bloch ball.
    #[error("trajectory state outside the Bloch ball: |r| = {0}")]
    UnphysicalState(f64),

    /// Finite-lag endpoint falls outside the sampled trajectory.
    #[error("lag endpoint t + tau = {0} outside the trajectory span")]
    LagOutsideSpan(f64),

    /// Index into a trajectory is out of bounds.
    #[error("trajectory index {index} out of bounds (len {len})")]
    IndexOutOfBounds { index: usize, len: usize },

    /// Fisher-information formula is singular on the sphere when the
    /// radial derivative does not vanish.
    #[error("singular state: |r| = 1 with r . dr/dT != 0")]
    SingularState,

    /// Worst-case evaluation needs `0 < T_min <= T_max`.
    #[error("invalid temperature interval [{0}, {1}]")]
    InvalidInterval(f64, f64),

    /// Composite Simpson quadrature needs a minimum panel count.
    #[error("quadrature needs at least 16 panels, got {0}")]
    TooFewPanels(usize),

    /// Measurement counts must be at least one.
    #[error("measurement count must be >= 1")]
    ZeroMeasurements,

    /// Fisher information must be non-negative.
    #[error("negative Fisher information: {0}")]
    NegativeInformation(f64),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
