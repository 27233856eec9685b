//! Time evolution of the probe under the three-channel Lindblad equation:
//! thermal excitation/de-excitation (`sigma_+`, `sigma_-`) plus pure
//! dephasing (`sigma_z`).
//!
//! The Bloch equations of motion are
//!
//! ```text
//! rx' = -(4 gamma0 + gamma_p) rx / 2 - omega ry
//! ry' =  omega rx - (4 gamma0 + gamma_p) ry / 2
//! rz' =  gamma_m - gamma_p rz
//! ```
//!
//! with `gamma_p = gamma_+ + gamma_-` and `gamma_m = gamma_+ - gamma_-`.
//! [`propagate_analytic`] evaluates the closed-form solution;
//! [`propagate_numeric`] integrates the same equations with fixed-step RK4
//! and serves as an independent oracle for it.

use crate::error::{Error, Result};
use crate::qubit::{BathSpec, BlochVector, QubitHamiltonian};

/// Largest tolerated excess of `|r|` over 1 along a numeric trajectory;
/// anything smaller is clamped back onto the sphere, anything larger is an
/// integration failure.
const CLAMP_BUDGET: f64 = 1e-6;

/// Excess-norm tolerance for states handed to [`Trajectory::new`].
const STATE_TOL: f64 = 1e-9;

/// Channel rates of the three-channel Lindblad generator.
///
/// For a bath at `T > 0` the thermal rates are `gamma_+ = gamma N` and
/// `gamma_- = gamma (N + 1)` with `N` the Bose-Einstein occupation, so
/// `gamma_- > gamma_+ > 0` and `gamma_m = -gamma < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationRates {
    gamma_plus: f64,
    gamma_minus: f64,
    gamma_p: f64,
    gamma_m: f64,
    gamma0: f64,
}

impl DissipationRates {
    /// Assemble rates from the raw channel strengths.
    ///
    /// All-zero rates are allowed (free precession); derived sums are
    /// computed here so they cannot drift out of sync.
    pub fn new(gamma_plus: f64, gamma_minus: f64, gamma0: f64) -> Result<Self> {
        for g in [gamma_plus, gamma_minus, gamma0] {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::NegativeRate(g));
            }
        }
        Ok(Self {
            gamma_plus,
            gamma_minus,
            gamma_p: gamma_plus + gamma_minus,
            gamma_m: gamma_plus - gamma_minus,
            gamma0,
        })
    }

    /// Excitation rate `gamma_+`.
    pub fn gamma_plus(&self) -> f64 {
        self.gamma_plus
    }

    /// De-excitation rate `gamma_-`.
    pub fn gamma_minus(&self) -> f64 {
        self.gamma_minus
    }

    /// Population relaxation rate `gamma_p = gamma_+ + gamma_-`.
    pub fn gamma_p(&self) -> f64 {
        self.gamma_p
    }

    /// Signed rate `gamma_m = gamma_+ - gamma_-`; the stationary state sits
    /// at `rz = gamma_m / gamma_p`.
    pub fn gamma_m(&self) -> f64 {
        self.gamma_m
    }

    /// Pure-dephasing rate `gamma0`.
    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    /// Transverse (coherence) decay rate `2 gamma0 + gamma_p / 2`.
    pub fn coherence_decay(&self) -> f64 {
        2.0 * self.gamma0 + 0.5 * self.gamma_p
    }
}

/// Channel rates induced by a thermal bath: `gamma_+ = gamma N`,
/// `gamma_- = gamma (N + 1)` with `N = 1 / (exp(omega/T) - 1)`.
///
/// `gamma_m` is set to `-gamma` exactly, which the identity
/// `gamma_+ - gamma_- = -gamma` guarantees; at very low `T` the occupation
/// underflows to zero and the vacuum rates are recovered.
pub fn rates_from_bath(bath: &BathSpec, h: &QubitHamiltonian) -> DissipationRates {
    let occupation = 1.0 / (h.omega() / bath.temperature()).exp_m1();
    let gamma_plus = bath.gamma() * occupation;
    let gamma_minus = bath.gamma() * (occupation + 1.0);
    DissipationRates {
        gamma_plus,
        gamma_minus,
        gamma_p: gamma_plus + gamma_minus,
        gamma_m: -bath.gamma(),
        gamma0: bath.gamma0(),
    }
}

/// Right-hand side of the Bloch equations of motion at `state`.
pub fn bloch_time_derivative(
    state: &BlochVector,
    rates: &DissipationRates,
    h: &QubitHamiltonian,
) -> BlochVector {
    let transverse = 0.5 * (4.0 * rates.gamma0 + rates.gamma_p);
    BlochVector::new(
        -transverse * state.rx - h.omega() * state.ry,
        h.omega() * state.rx - transverse * state.ry,
        rates.gamma_m - rates.gamma_p * state.rz,
    )
}

/// Closed-form solution of the Bloch equations after time `t >= 0`.
///
/// Transverse components decay at `2 gamma0 + gamma_p / 2` while precessing
/// at `omega`; the population component relaxes exponentially onto
/// `gamma_m / gamma_p`.
pub fn propagate_analytic(
    initial: &BlochVector,
    rates: &DissipationRates,
    h: &QubitHamiltonian,
    t: f64,
) -> BlochVector {
    assert!(t >= 0.0, "propagation time must be non-negative");
    let decay = (-rates.coherence_decay() * t).exp();
    let (sin, cos) = (h.omega() * t).sin_cos();
    let rz = if rates.gamma_p == 0.0 {
        initial.rz
    } else {
        let relaxed = -(-rates.gamma_p * t).exp_m1(); // 1 - exp(-gamma_p t)
        initial.rz * (-rates.gamma_p * t).exp() + (rates.gamma_m / rates.gamma_p) * relaxed
    };
    BlochVector::new(
        decay * (initial.rx * cos - initial.ry * sin),
        decay * (initial.rx * sin + initial.ry * cos),
        rz,
    )
}

/// Fixed point `(0, 0, gamma_m / gamma_p)` of the relaxation.
///
/// For bath-derived rates this is the Bloch form of the thermal state.
pub fn stationary_state(rates: &DissipationRates) -> Result<BlochVector> {
    if rates.gamma_p <= 0.0 {
        return Err(Error::NoSteadyState);
    }
    Ok(BlochVector::new(0.0, 0.0, rates.gamma_m / rates.gamma_p))
}

/// A sampled trajectory: strictly increasing times with one state per time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<BlochVector>,
}

impl Trajectory {
    /// Validate and store a sampled trajectory.
    ///
    /// Times must start at `t >= 0` and increase strictly; states may
    /// overshoot the Bloch ball by at most `1e-9` and are clamped back.
    pub fn new(times: Vec<f64>, states: Vec<BlochVector>) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() {
            return Err(Error::InvalidGrid);
        }
        if !(times[0] >= 0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid);
        }
        let mut clamped = Vec::with_capacity(states.len());
        for s in &states {
            if !s.is_physical(STATE_TOL) {
                return Err(Error::UnphysicalState(s.norm()));
            }
            clamped.push(s.clamped());
        }
        Ok(Self { times, states: clamped })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[BlochVector] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Time/state pair at `index`.
    pub fn sample(&self, index: usize) -> Option<(f64, BlochVector)> {
        Some((*self.times.get(index)?, *self.states.get(index)?))
    }
}

/// Integrate the Bloch equations with classic fixed-step RK4 over `grid`.
///
/// `initial` is the state at `grid[0]`. The substep is capped at
/// `1e-3 / (gamma_p + 4 gamma0 + omega)` so both relaxation and precession
/// are resolved far below the oracle tolerances. Deterministic by
/// construction; exists as an independent check on [`propagate_analytic`].
pub fn propagate_numeric(
    initial: &BlochVector,
    rates: &DissipationRates,
    h: &QubitHamiltonian,
    grid: &[f64],
) -> Result<Trajectory> {
    if !initial.is_physical(STATE_TOL) {
        return Err(Error::UnphysicalState(initial.norm()));
    }
    if grid.is_empty() || !(grid[0] >= 0.0) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid);
    }

    let rate_scale = rates.gamma_p + 4.0 * rates.gamma0 + h.omega();
    let max_step = 1e-3 / rate_scale;

    let mut states = Vec::with_capacity(grid.len());
    let mut state = initial.clamped();
    states.push(state);
    for pair in grid.windows(2) {
        let span = pair[1] - pair[0];
        let substeps = (span / max_step).ceil().max(1.0) as usize;
        let step = span / substeps as f64;
        for k in 0..substeps {
            state = rk4_step(&state, rates, h, step);
            let norm = state.norm();
            if norm > 1.0 + CLAMP_BUDGET {
                return Err(Error::IntegrationUnstable {
                    norm,
                    t: pair[0] + (k + 1) as f64 * step,
                });
            }
            state = state.clamped();
        }
        states.push(state);
    }
    Trajectory::new(grid.to_vec(), states)
}

fn rk4_step(
    state: &BlochVector,
    rates: &DissipationRates,
    h: &QubitHamiltonian,
    step: f64,
) -> BlochVector {
    let k1 = bloch_time_derivative(state, rates, h);
    let k2 = bloch_time_derivative(&(*state + k1 * (0.5 * step)), rates, h);
    let k3 = bloch_time_derivative(&(*state + k2 * (0.5 * step)), rates, h);
    let k4 = bloch_time_derivative(&(*state + k3 * step), rates, h);
    *state + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (step / 6.0)
}
