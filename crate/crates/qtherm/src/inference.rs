//! Temperature readout pipeline.
//!
//! The probe's instantaneous mean energy fixes a Gibbsian reference state via
//! the maximum entropy principle; its inverse temperature `beta_r` is the
//! raw readout. Two positive semi-definite error functions lower-bound the
//! deviation of that readout from the true sample temperature, and shifting
//! the readout by them (with a sign fixed by the cooling/heating regime)
//! yields the corrected dynamical temperature.
//!
//! Quantities that can legitimately be undefined at a time sample (reference
//! temperature at zero energy, effective temperature at an energy turning
//! point, error bounds for a near-pure reference) are modeled as `Option`;
//! they are never silent zeros or NaNs.

use crate::dynamics::{bloch_time_derivative, propagate_analytic, DissipationRates, Trajectory};
use crate::error::{Error, Result};
use crate::qubit::{
    mean_energy, relative_entropy, von_neumann_entropy, BlochVector, GibbsState, QubitHamiltonian,
};

/// Absolute threshold below which an energy rate or difference counts as zero.
pub const EPS_RATE: f64 = 1e-12;

/// Reference entropies below this flag 1st error function as undefined.
pub const EPS_ENTROPY: f64 = 1e-12;

/// Energy margin for classifying the relaxation regime.
pub const EPS_ENERGY: f64 = 1e-12;

/// Energy difference below which finite-lag estimators suffer catastrophic
/// cancellation; see [`finite_lag_estimators`].
pub const EPS_LAG_ENERGY: f64 = EPS_RATE;

/// Maximum-entropy reference readout: the inverse temperature of the Gibbs
/// state sharing the probe's mean energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceReadout {
    /// Inverse reference temperature; zero for a maximally mixed energy.
    pub beta_r: f64,
    /// `1 / beta_r`, undefined at `beta_r = 0` (infinite temperature).
    pub t_r: Option<f64>,
}

impl ReferenceReadout {
    /// Wrap a known inverse reference temperature.
    pub fn from_beta(beta_r: f64) -> Self {
        let t_r = (beta_r != 0.0).then(|| 1.0 / beta_r);
        Self { beta_r, t_r }
    }
}

/// The two error functions: `e1` bounds `|T_r - T|` (temperature units),
/// `e2` bounds `|beta_r - beta|` (inverse-temperature units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPair {
    pub e1: Option<f64>,
    pub e2: f64,
}

/// Direction of the relaxation, fixed once by the initial energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Probe starts above the equilibrium energy and releases heat.
    Cooling,
    /// Probe starts below the equilibrium energy and absorbs heat.
    Heating,
    /// Initial energy already matches equilibrium.
    Equilibrated,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Cooling => "Cooling",
            Regime::Heating => "Heating",
            Regime::Equilibrated => "Equilibrated",
        })
    }
}

/// Reference temperature shifted by the error bounds.
///
/// `beta_corr` is deliberately *not* `1 / t_corr`; the two corrections are
/// independent readouts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectedReadout {
    pub t_corr: Option<f64>,
    pub beta_corr: f64,
    pub regime: Regime,
}

/// Finite-lag counterparts of the reference and effective temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteLagEstimates {
    /// Reconstructed from `ln Z_r`, `beta_r`, `E_p` at the two times;
    /// tends to `beta_r(t)` as `tau -> 0`.
    pub beta1: Option<f64>,
    /// Entropy-over-energy difference quotient; tends to `beta_e(t)`.
    pub beta2: Option<f64>,
    pub tau: f64,
}

/// Invert the energy constraint: `beta_r = -(2/omega) artanh(2 E / omega)`.
///
/// Fails when the energy lies outside the open spectral interval.
pub fn infer_beta_r(energy: f64, h: &QubitHamiltonian) -> Result<ReferenceReadout> {
    let x = 2.0 * energy / h.omega();
    if !(x.abs() < 1.0) {
        return Err(Error::UnphysicalEnergy { energy, half_gap: h.operator_norm() });
    }
    let mut beta_r = -(2.0 / h.omega()) * x.atanh();
    if beta_r == 0.0 {
        beta_r = 0.0; // normalize -0.0 from artanh
    }
    Ok(ReferenceReadout::from_beta(beta_r))
}

/// Conventional effective inverse temperature `(dS/dt) / (dE/dt)` evaluated
/// from the analytic equations of motion.
///
/// Returns `None` when the energy is momentarily stationary
/// (`|dE/dt| < EPS_RATE`); fails on pure states, where the entropy
/// derivative diverges.
pub fn effective_beta_e(
    state: &BlochVector,
    rates: &DissipationRates,
    h: &QubitHamiltonian,
) -> Result<Option<f64>> {
    let norm = state.norm();
    if norm >= 1.0 {
        return Err(Error::PureState(norm));
    }
    let velocity = bloch_time_derivative(state, rates, h);
    let de_dt = 0.5 * h.omega() * velocity.rz;
    if de_dt.abs() < EPS_RATE {
        return Ok(None);
    }
    let ds_dt = if norm < 1e-15 {
        0.0
    } else {
        -norm.atanh() * state.dot(&velocity) / norm
    };
    Ok(Some(ds_dt / de_dt))
}

/// Finite-lag estimators `beta1`, `beta2` over the segment
/// `[times[index], times[index] + tau]` of a relaxation trajectory.
///
/// The state at the lagged endpoint is reached by exact propagation from the
/// stored sample (the dynamics is a semigroup), so `tau` need not align with
/// the grid. Both estimators are undefined when the energy difference over
/// the lag is below `EPS_LAG_ENERGY`.
pub fn finite_lag_estimators(
    traj: &Trajectory,
    index: usize,
    tau: f64,
    rates: &DissipationRates,
    h: &QubitHamiltonian,
) -> Result<FiniteLagEstimates> {
    let (t, state_a) = traj
        .sample(index)
        .ok_or(Error::IndexOutOfBounds { index, len: traj.len() })?;
    let t_end = *traj.times().last().expect("trajectory is non-empty");
    if tau < 0.0 || t + tau > t_end + 1e-9 {
        return Err(Error::LagOutsideSpan(t + tau));
    }
    let state_b = propagate_analytic(&state_a, rates, h, tau);

    let energy_a = mean_energy(&state_a, h);
    let energy_b = mean_energy(&state_b, h);
    let delta_e = energy_b - energy_a;
    if delta_e.abs() < EPS_LAG_ENERGY {
        return Ok(FiniteLagEstimates { beta1: None, beta2: None, tau });
    }

    let readout_a = infer_beta_r(energy_a, h)?;
    let readout_b = infer_beta_r(energy_b, h)?;
    let ln_z = |beta: f64| GibbsState::new(beta, h).expect("finite beta").log_partition();
    let beta1 = (ln_z(readout_b.beta_r) - ln_z(readout_a.beta_r)
        + readout_b.beta_r * energy_b
        - readout_a.beta_r * energy_a)
        / delta_e;
    let beta2 = (von_neumann_entropy(&state_b) - von_neumann_entropy(&state_a)) / delta_e;
    Ok(FiniteLagEstimates { beta1: Some(beta1), beta2: Some(beta2), tau })
}

/// First error function: lower bound on `|T_r - T|` built from the relative
/// entropy to the reference and the entropy mismatch,
/// `E1 = | T_r D / S_r - |T_r S / S_r - T| |`.
///
/// Undefined (`None`) when `beta_r` is zero or non-finite, when the
/// reference entropy falls below `EPS_ENTROPY`, or when the reference is
/// numerically pure.
pub fn error_e1(
    state: &BlochVector,
    readout: &ReferenceReadout,
    true_temperature: f64,
    h: &QubitHamiltonian,
) -> Option<f64> {
    let t_r = readout.t_r.filter(|t| t.is_finite())?;
    let reference = GibbsState::new(readout.beta_r, h).ok()?;
    let entropy_ref = von_neumann_entropy(&reference.bloch());
    if entropy_ref < EPS_ENTROPY {
        return None;
    }
    let divergence = relative_entropy(state, &reference).ok()?;
    let entropy = von_neumann_entropy(state);
    let bound =
        (t_r * divergence / entropy_ref - (t_r * entropy / entropy_ref - true_temperature).abs()).abs();
    Some(bound)
}

/// Second error function: lower bound on `|beta_r - beta|` from energetics
/// alone, `E2 = |E_T - E_p| / (omega/2)^2`.
pub fn error_e2(energy: f64, true_beta: f64, h: &QubitHamiltonian) -> f64 {
    let equilibrium = -h.operator_norm() * (0.5 * true_beta * h.omega()).tanh();
    (equilibrium - energy).abs() / (h.operator_norm() * h.operator_norm())
}

/// Fix the relaxation direction from the initial energy relative to the
/// equilibrium energy, with an `EPS_ENERGY` tie margin.
pub fn classify_regime(initial_energy: f64, thermal_energy: f64) -> Regime {
    if initial_energy > thermal_energy + EPS_ENERGY {
        Regime::Cooling
    } else if initial_energy < thermal_energy - EPS_ENERGY {
        Regime::Heating
    } else {
        Regime::Equilibrated
    }
}

/// Shift the reference readout by the error bounds.
///
/// Cooling: `T_corr = T_r - E1`, `beta_corr = beta_r + E2`; heating flips
/// both signs; an equilibrated probe gets no correction. `T_corr` is
/// undefined when `E1` is, or when the reference temperature is not positive
/// (inverted probe); `beta_corr` is always produced.
pub fn corrected_readout(
    readout: &ReferenceReadout,
    errors: &ErrorPair,
    regime: Regime,
) -> CorrectedReadout {
    let t_r = readout.t_r.filter(|&t| t > 0.0);
    let (t_corr, beta_corr) = match regime {
        Regime::Equilibrated => (t_r, readout.beta_r),
        Regime::Cooling => (
            t_r.zip(errors.e1).map(|(t, e)| t - e),
            readout.beta_r + errors.e2,
        ),
        Regime::Heating => (
            t_r.zip(errors.e1).map(|(t, e)| t + e),
            readout.beta_r - errors.e2,
        ),
    };
    CorrectedReadout { t_corr, beta_corr, regime }
}

/// Residual of the covariance integral identity
/// `(beta_r - beta) * int_0^1 Cov(H, H) ds = E_T - E_p`
/// along the interpolating Gibbs family `beta_s = beta + s (beta_r - beta)`.
///
/// The covariance `(omega/2)^2 (1 - tanh^2(beta_s omega / 2))` is integrated
/// with composite Simpson quadrature over `panels` subintervals (rounded up
/// to even, at least 16). The identity is exact; the returned residual is
/// pure quadrature error.
pub fn covariance_identity_residual(
    readout: &ReferenceReadout,
    true_beta: f64,
    h: &QubitHamiltonian,
    panels: usize,
) -> Result<f64> {
    if panels < 16 {
        return Err(Error::TooFewPanels(panels));
    }
    let panels = panels + panels % 2;
    let contrast = readout.beta_r - true_beta;

    let covariance = |s: f64| {
        let beta_s = true_beta + s * contrast;
        let tanh = (0.5 * beta_s * h.omega()).tanh();
        h.operator_norm() * h.operator_norm() * (1.0 - tanh * tanh)
    };
    let step = 1.0 / panels as f64;
    let mut sum = covariance(0.0) + covariance(1.0);
    for k in 1..panels {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * covariance(k as f64 * step);
    }
    let integral = sum * step / 3.0;

    let energy_probe = -h.operator_norm() * (0.5 * readout.beta_r * h.omega()).tanh();
    let energy_thermal = -h.operator_norm() * (0.5 * true_beta * h.omega()).tanh();
    Ok((contrast * integral - (energy_thermal - energy_probe)).abs())
}

/// Generalized nonequilibrium free energy `F = E_p - T_r S`.
///
/// Satisfies `F - F_r = T_r D(rho || rho_r)` with `F_r = -T_r ln Z_r`.
/// Undefined at `beta_r = 0`.
pub fn generalized_free_energy(
    state: &BlochVector,
    readout: &ReferenceReadout,
    h: &QubitHamiltonian,
) -> Option<f64> {
    let t_r = readout.t_r?;
    Some(mean_energy(state, h) - t_r * von_neumann_entropy(state))
}

/// Worst-case error pair when the true temperature is only known to lie in
/// `[t_min, t_max]`: both error functions are evaluated at the boundary
/// temperatures and the componentwise maximum is returned.
///
/// An undefined `e1` at either boundary makes the worst-case `e1` undefined.
pub fn worst_case_errors(
    state: &BlochVector,
    energy: f64,
    interval: (f64, f64),
    h: &QubitHamiltonian,
) -> Result<ErrorPair> {
    let (t_min, t_max) = interval;
    if !(t_min.is_finite() && t_max.is_finite() && 0.0 < t_min && t_min <= t_max) {
        return Err(Error::InvalidInterval(t_min, t_max));
    }
    let readout = infer_beta_r(energy, h)?;
    let e1 = match (
        error_e1(state, &readout, t_min, h),
        error_e1(state, &readout, t_max, h),
    ) {
        (Some(low), Some(high)) => Some(low.max(high)),
        _ => None,
    };
    let e2 = error_e2(energy, 1.0 / t_min, h).max(error_e2(energy, 1.0 / t_max, h));
    Ok(ErrorPair { e1, e2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{propagate_numeric, rates_from_bath, stationary_state};
    use crate::qubit::{gibbs_properties, BathSpec};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn hamiltonian() -> QubitHamiltonian {
        QubitHamiltonian::new(1.0).unwrap()
    }

    /// Root-finding oracle for the closed-form inversion: bisect
    /// `gibbs energy(beta) = E` to 1e-12.
    fn beta_r_bisection(energy: f64, h: &QubitHamiltonian) -> f64 {
        let (mut lo, mut hi) = (-500.0f64, 500.0f64);
        // energy is strictly decreasing in beta
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            let e_mid = GibbsState::new(mid, h).unwrap().energy();
            if e_mid > energy {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn beta_r_examples() {
        let h = hamiltonian();
        let flat = infer_beta_r(0.0, &h).unwrap();
        assert_eq!(flat.beta_r, 0.0);
        assert!(flat.beta_r.is_sign_positive());
        assert_eq!(flat.t_r, None);

        let cold = infer_beta_r(-0.2, &h).unwrap();
        assert_abs_diff_eq!(cold.beta_r, 0.8472978603872037, epsilon = 1e-14);
        assert_abs_diff_eq!(cold.beta_r, beta_r_bisection(-0.2, &h), epsilon = 1e-10);

        let inverted = infer_beta_r(0.2, &h).unwrap();
        assert_abs_diff_eq!(inverted.beta_r, -0.8472978603872037, epsilon = 1e-14);

        assert!(infer_beta_r(0.5, &h).is_err());
        assert!(infer_beta_r(-0.5, &h).is_err());
    }

    #[test]
    fn beta_r_round_trips_through_gibbs_energy() {
        let h = hamiltonian();
        for energy in [-0.45, -0.2, -0.01, 0.13, 0.4] {
            let readout = infer_beta_r(energy, &h).unwrap();
            let back = GibbsState::new(readout.beta_r, &h).unwrap().energy();
            assert_abs_diff_eq!(back, energy, epsilon = 1e-14);
        }
    }

    #[test]
    fn effective_temperature_on_diagonal_states_matches_reference() {
        let h = hamiltonian();
        let bath = BathSpec::new(0.5, 1.0, 0.0).unwrap();
        let rates = rates_from_bath(&bath, &h);
        let state = BlochVector::new(0.0, 0.0, -0.4);
        let beta_e = effective_beta_e(&state, &rates, &h).unwrap().unwrap();
        assert_abs_diff_eq!(beta_e, 0.8472978603872037, epsilon = 1e-12);
    }

    #[test]
    fn effective_temperature_undefined_at_equilibrium() {
        let h = hamiltonian();
        let bath = BathSpec::new(0.5, 1.0, 0.0).unwrap();
        let rates = rates_from_bath(&bath, &h);
        let fixed = stationary_state(&rates).unwrap();
        assert_eq!(effective_beta_e(&fixed, &rates, &h).unwrap(), None);
    }

    #[test]
    fn effective_temperature_rejects_pure_states() {
        let h = hamiltonian();
        let bath = BathSpec::new(0.5, 1.0, 0.0).unwrap();
        let rates = rates_from_bath(&bath, &h);
        let pure = BlochVector::new(0.0, 0.0, 1.0);
        assert!(matches!(effective_beta_e(&pure, &rates, &h), Err(Error::PureState(_))));
    }

    #[test]
    fn coherent_state_reference_beats_effective() {
        // with coherence present, beta_e sits strictly farther from the true
        // beta = 2 than beta_r at the same instant
        let h = hamiltonian();
        let bath = BathSpec::new(0.5, 1.0, 0.5).unwrap();
        let rates = rates_from_bath(&bath, &h);
        let state = BlochVector::new(0.4, 0.0, -0.4);
        let beta_e = effective_beta_e(&state, &rates, &h).unwrap().unwrap();
        let beta_r = infer_beta_r(mean_energy(&state, &h), &h).unwrap().beta_r;
        assert!((2.0 - beta_r).abs() < (2.0 - beta_e).abs());
    }

    fn relaxation_trajectory(
        initial: BlochVector,
        bath: &BathSpec,
    ) -> (Trajectory, DissipationRates, QubitHamiltonian) {
        let h = hamiltonian();
        let rates = rates_from_bath(bath, &h);
        let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
        let states: Vec<BlochVector> =
            grid.iter().map(|&t| propagate_analytic(&initial, &rates, &h, t)).collect();
        (Trajectory::new(grid, states).unwrap(), rates, h)
    }

    #[test]
    fn finite_lag_limits() {
        let bath = BathSpec::new(0.5, 1.0, 0.0).unwrap();
        let (traj, rates, h) = relaxation_trajectory(BlochVector::new(0.4, 0.0, -0.4), &bath);
        let index = 20; // t = 1
        let lag = finite_lag_estimators(&traj, index, 1e-6, &rates, &h).unwrap();
        let state = traj.states()[index];
        let beta_r = infer_beta_r(mean_energy(&state, &h), &h).unwrap().beta_r;
        let beta_e = effective_beta_e(&state, &rates, &h).unwrap().unwrap();
        assert_abs_diff_eq!(lag.beta1.unwrap(), beta_r, epsilon = 1e-4);
        assert_abs_diff_eq!(lag.beta2.unwrap(), beta_e, epsilon = 1e-4);
    }

    #[test]
    fn finite_lag_ordering_on_cooling_and_heating_segments() {
        let beta = 2.0;
        let bath = BathSpec::new(0.5, 1.0, 0.0).unwrap();
        // cooling: E decreasing, chain runs beta >= beta1 >= beta2
        let (traj, rates, h) = relaxation_trajectory(BlochVector::new(0.0, 0.0, -0.4), &bath);
        for index in (0..100).step_by(10) {
            let lag = finite_lag_estimators(&traj, index, 0.1, &rates, &h).unwrap();
            let (beta1, beta2) = (lag.beta1.unwrap(), lag.beta2.unwrap());
            assert!(beta >= beta1 - 1e-9 && beta1 >= beta2 - 1e-9);
        }
        // heating: start below the thermal energy, chain reversed
        let (traj, rates, h) = relaxation_trajectory(BlochVector::new(0.0, 0.0, -0.9), &bath);
        for index in (0..100).step_by(10) {
            let lag = finite_lag_estimators(&traj, index, 0.1, &rates, &h).unwrap();
            let (beta1, beta2) = (lag.beta1.unwrap(), lag.beta2.unwrap());
            assert!(beta <= beta1 + 1e-9 && beta1 <= beta2 + 1e-9);
        }
    }

    #[test]
    fn finite_lag_flags_and_errors() {
        let bath = BathSpec::new(0.5, 1.0, 0.0).unwrap();
        let fixed = BlochVector::new(0.0, 0.0, -(1.0f64).tanh());
        let (traj, rates, h) = relaxation_trajectory(fixed, &bath);
        let lag = finite_lag_estimators(&traj, 5, 0.1, &rates, &h).unwrap();
        assert_eq!(lag.beta1, None);
        assert_eq!(lag.beta2, None);

        let (traj, rates, h) = relaxation_trajectory(BlochVector::new(0.0, 0.0, -0.4), &bath);
        assert!(matches!(
            finite_lag_estimators(&traj, 200, 0.5, &rates, &h),
            Err(Error::LagOutsideSpan(_))
        ));
        assert!(matches!(
            finite_lag_estimators(&traj, 500, 0.1, &rates, &h),
            Err(Error::IndexOutOfBounds { .. })
        ));
    }

    #[test]
    fn error_e1_examples() {
        let h = hamiltonian();
        let temperature = 0.5;
        let thermal = GibbsState::from_temperature(temperature, &h).unwrap();
        let readout = infer_beta_r(thermal.energy(), &h).unwrap();
        let e1 = error_e1(&thermal.bloch(), &readout, temperature, &h).unwrap();
        assert_abs_diff_eq!(e1, 0.0, epsilon = 1e-12);

        // diagonal states saturate the bound exactly: E1 = |T_r - T|
        let state = BlochVector::new(0.0, 0.0, -0.4);
        let readout = infer_beta_r(mean_energy(&state, &h), &h).unwrap();
        let e1 = error_e1(&state, &readout, temperature, &h).unwrap();
        assert_abs_diff_eq!(e1, (readout.t_r.unwrap() - temperature).abs(), epsilon = 1e-12);

        // coherent state: the bound stays below the actual deviation
        let state = BlochVector::new(0.4, 0.0, -0.4);
        let readout = infer_beta_r(mean_energy(&state, &h), &h).unwrap();
        let e1 = error_e1(&state, &readout, temperature, &h).unwrap();
        assert!(e1 <= (readout.t_r.unwrap() - temperature).abs());

        // undefined at beta_r = 0
        assert_eq!(error_e1(&state, &ReferenceReadout::from_beta(0.0), temperature, &h), None);
    }

    #[test]
    fn error_e2_examples() {
        let h = hamiltonian();
        let thermal_energy = GibbsState::from_temperature(0.5, &h).unwrap().energy();
        assert_eq!(error_e2(thermal_energy, 2.0, &h), 0.0);
        assert_abs_diff_eq!(error_e2(-0.2, 2.0, &h), 0.7231883119115297, epsilon = 1e-14);
    }

    #[test]
    fn regime_classification() {
        let thermal_energy = -0.3807970779778824;
        assert_eq!(classify_regime(-0.2, thermal_energy), Regime::Cooling);
        assert_eq!(classify_regime(-0.45, thermal_energy), Regime::Heating);
        assert_eq!(classify_regime(thermal_energy, thermal_energy), Regime::Equilibrated);
    }

    #[test]
    fn corrected_readout_sign_rules() {
        let readout = ReferenceReadout::from_beta(1.0 / 0.6);
        let zero = ErrorPair { e1: Some(0.0), e2: 0.0 };
        let same = corrected_readout(&readout, &zero, Regime::Equilibrated);
        assert_eq!(same.t_corr, readout.t_r);
        assert_eq!(same.beta_corr, readout.beta_r);

        let errors = ErrorPair { e1: Some(0.05), e2: 0.1 };
        let cooling = corrected_readout(&readout, &errors, Regime::Cooling);
        assert_abs_diff_eq!(cooling.t_corr.unwrap(), 0.55, epsilon = 1e-15);
        assert_abs_diff_eq!(cooling.beta_corr, readout.beta_r + 0.1, epsilon = 1e-15);

        let heating = corrected_readout(&readout, &errors, Regime::Heating);
        assert_abs_diff_eq!(heating.t_corr.unwrap(), 0.65, epsilon = 1e-15);
        assert_abs_diff_eq!(heating.beta_corr, readout.beta_r - 0.1, epsilon = 1e-15);
    }

    #[test]
    fn corrected_readout_undefined_propagation() {
        // undefined E1 blanks t_corr but beta_corr is still produced
        let readout = ReferenceReadout::from_beta(2.0);
        let errors = ErrorPair { e1: None, e2: 0.1 };
        let out = corrected_readout(&readout, &errors, Regime::Cooling);
        assert_eq!(out.t_corr, None);
        assert_abs_diff_eq!(out.beta_corr, 2.1, epsilon = 1e-15);

        // inverted probe (negative reference temperature): t_corr undefined
        let inverted = ReferenceReadout::from_beta(-0.5);
        let errors = ErrorPair { e1: Some(0.01), e2: 0.1 };
        let out = corrected_readout(&inverted, &errors, Regime::Cooling);
        assert_eq!(out.t_corr, None);
        assert_abs_diff_eq!(out.beta_corr, -0.4, epsilon = 1e-15);
    }

    #[test]
    fn covariance_identity_examples() {
        let h = hamiltonian();
        let same = covariance_identity_residual(&ReferenceReadout::from_beta(2.0), 2.0, &h, 256);
        assert_eq!(same.unwrap(), 0.0);

        let readout = ReferenceReadout::from_beta(0.8472978603872037);
        let residual = covariance_identity_residual(&readout, 2.0, &h, 256).unwrap();
        assert!(residual < 1e-10, "residual = {residual}");

        assert!(covariance_identity_residual(&readout, 2.0, &h, 8).is_err());
    }

    #[test]
    fn covariance_is_bounded_by_operator_norm() {
        // Schatten-norm chain: Cov <= ||H||^2 pointwise on the family
        let h = hamiltonian();
        let bound = h.operator_norm() * h.operator_norm();
        let (beta, beta_r) = (2.0, 0.8472978603872037);
        for k in 0..=64 {
            let s = k as f64 / 64.0;
            let beta_s = beta + s * (beta_r - beta);
            let tanh = (0.5 * beta_s * h.omega()).tanh();
            let cov = bound * (1.0 - tanh * tanh);
            assert!(cov <= bound + 1e-15);
        }
    }

    #[test]
    fn free_energy_identity() {
        let h = hamiltonian();
        // thermal state: F = E_T - T S_T
        let g = GibbsState::from_temperature(0.5, &h).unwrap();
        let p = gibbs_properties(&g);
        let readout = infer_beta_r(p.energy, &h).unwrap();
        let f = generalized_free_energy(&p.bloch, &readout, &h).unwrap();
        assert_abs_diff_eq!(f, p.energy - 0.5 * p.entropy, epsilon = 1e-12);

        // diagonal state: F = F_r exactly (zero divergence)
        let state = BlochVector::new(0.0, 0.0, -0.4);
        let readout = infer_beta_r(mean_energy(&state, &h), &h).unwrap();
        let f = generalized_free_energy(&state, &readout, &h).unwrap();
        let t_r = readout.t_r.unwrap();
        let f_r = -t_r * GibbsState::new(readout.beta_r, &h).unwrap().log_partition();
        assert_abs_diff_eq!(f, f_r, epsilon = 1e-12);

        // coherent state: F - F_r = T_r D, both sides independent
        let state = BlochVector::new(0.4, 0.0, -0.4);
        let readout = infer_beta_r(mean_energy(&state, &h), &h).unwrap();
        let f = generalized_free_energy(&state, &readout, &h).unwrap();
        let t_r = readout.t_r.unwrap();
        let reference = GibbsState::new(readout.beta_r, &h).unwrap();
        let f_r = -t_r * reference.log_partition();
        let divergence = relative_entropy(&state, &reference).unwrap();
        assert_abs_diff_eq!(f - f_r, t_r * divergence, epsilon = 1e-10);

        assert_eq!(generalized_free_energy(&state, &ReferenceReadout::from_beta(0.0), &h), None);
    }

    #[test]
    fn worst_case_interval_examples() {
        let h = hamiltonian();
        let state = BlochVector::new(0.4, 0.0, -0.4);
        let energy = mean_energy(&state, &h);
        let readout = infer_beta_r(energy, &h).unwrap();

        // degenerate interval reduces to the point evaluation
        let point = worst_case_errors(&state, energy, (0.5, 0.5), &h).unwrap();
        assert_eq!(point.e1, error_e1(&state, &readout, 0.5, &h));
        assert_eq!(point.e2, error_e2(energy, 2.0, &h));

        // fig-3a-like state at t = 1 against an interval around T
        let bath = BathSpec::new(0.5, 1.0, 0.0).unwrap();
        let rates = rates_from_bath(&bath, &h);
        let evolved = propagate_analytic(&state, &rates, &h, 1.0);
        let worst =
            worst_case_errors(&evolved, mean_energy(&evolved, &h), (0.45, 0.55), &h).unwrap();
        assert!(worst.e1.unwrap() >= 0.0);
        assert!(worst.e2 >= 0.0);
        // boundary maxima dominate each boundary value
        for t_bound in [0.45, 0.55] {
            let r = infer_beta_r(mean_energy(&evolved, &h), &h).unwrap();
            assert!(worst.e1.unwrap() >= error_e1(&evolved, &r, t_bound, &h).unwrap() - 1e-15);
            assert!(worst.e2 >= error_e2(mean_energy(&evolved, &h), 1.0 / t_bound, &h) - 1e-15);
        }

        assert!(worst_case_errors(&state, energy, (0.6, 0.4), &h).is_err());
        assert!(worst_case_errors(&state, energy, (0.0, 0.4), &h).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        /// Eq-style bound checks on random states and temperatures.
        #[test]
        fn error_functions_lower_bound_the_deviations(
            state in crate::qubit::tests::bloch_ball(),
            temperature in 0.1..5.0f64,
        ) {
            let h = hamiltonian();
            prop_assume!(state.rz.abs() < 0.999);
            let energy = mean_energy(&state, &h);
            let readout = infer_beta_r(energy, &h).unwrap();
            let beta = 1.0 / temperature;
            if let (Some(e1), Some(t_r)) =
                (error_e1(&state, &readout, temperature, &h), readout.t_r)
            {
                prop_assert!(e1 >= 0.0);
                prop_assert!(e1 <= (t_r - temperature).abs() + 1e-9);
            }
            let e2 = error_e2(energy, beta, &h);
            prop_assert!(e2 >= 0.0);
            prop_assert!(e2 <= (readout.beta_r - beta).abs() + 1e-9);
        }

        /// The covariance identity is exact for arbitrary contrast pairs.
        #[test]
        fn covariance_identity_holds(beta in 0.5..2.5f64, beta_r in 0.5..2.5f64) {
            let h = hamiltonian();
            let readout = ReferenceReadout::from_beta(beta_r);
            let residual = covariance_identity_residual(&readout, beta, &h, 256).unwrap();
            prop_assert!(residual < 1e-10);
        }
    }

    #[test]
    fn pipeline_survives_reference_crossing_zero() {
        // inverted initial state: beta_r starts negative and crosses zero
        let h = hamiltonian();
        let bath = BathSpec::new(0.5, 1.0, 0.0).unwrap();
        let rates = rates_from_bath(&bath, &h);
        let initial = BlochVector::new(0.0, 0.0, 0.4);
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let traj = propagate_numeric(&initial, &rates, &h, &grid).unwrap();
        let mut saw_undefined_t_corr = false;
        for state in traj.states() {
            let energy = mean_energy(state, &h);
            let readout = infer_beta_r(energy, &h).unwrap();
            let errors = ErrorPair {
                e1: error_e1(state, &readout, 0.5, &h),
                e2: error_e2(energy, 2.0, &h),
            };
            let corrected = corrected_readout(&readout, &errors, Regime::Cooling);
            if corrected.t_corr.is_none() {
                saw_undefined_t_corr = true;
            }
        }
        assert!(saw_undefined_t_corr);
    }
}
