//! Fisher-information diagnostics for the temperature estimate.
//!
//! The quantum Fisher information (QFI) of a qubit state is evaluated through
//! its Bloch representation,
//!
//! ```text
//! F_T = |dr/dT|^2 + (r . dr/dT)^2 / (1 - |r|^2),
//! ```
//!
//! with the temperature derivative of the trajectory available both in
//! closed form and as a finite-difference oracle. [`qfi_closed_form`] expands
//! the same quantity analytically for the three-channel relaxation, and
//! [`thermal_qfi`] gives its stationary value, equal to the heat capacity
//! over `T^2`.

use crate::dynamics::{propagate_analytic, rates_from_bath};
use crate::error::{Error, Result};
use crate::qubit::{BathSpec, BlochVector, QubitHamiltonian};

/// Denominators `1 - |r|^2` below this count as singular.
const PURITY_FLOOR: f64 = 1e-14;

/// Temperature derivative of the Bloch vector, `dr/dT`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TemperatureDerivative {
    pub d_rx: f64,
    pub d_ry: f64,
    pub d_rz: f64,
}

impl TemperatureDerivative {
    pub fn norm_squared(&self) -> f64 {
        self.d_rx * self.d_rx + self.d_ry * self.d_ry + self.d_rz * self.d_rz
    }

    /// Radial component `r . dr/dT`.
    pub fn radial(&self, state: &BlochVector) -> f64 {
        state.rx * self.d_rx + state.ry * self.d_ry + state.rz * self.d_rz
    }
}

/// Finite-difference derivative plus a step-quality flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericDerivative {
    pub derivative: TemperatureDerivative,
    /// Set when a Richardson half-step comparison estimates a relative
    /// error above `1e-3`, i.e. the requested step is too coarse.
    pub step_warning: bool,
}

/// Temperature derivative of the population relaxation rate,
/// `gamma_p' = gamma omega / (2 T^2 sinh^2(omega / 2T))`.
///
/// The thermal rates enter the trajectory only through `gamma_p`
/// (`gamma_m = -gamma` is temperature-independent), so this single scalar
/// carries all the temperature sensitivity.
pub fn gamma_p_derivative(bath: &BathSpec, h: &QubitHamiltonian) -> f64 {
    let t = bath.temperature();
    let s = (0.5 * h.omega() / t).sinh();
    bath.gamma() * h.omega() / (2.0 * t * t * s * s)
}

/// Closed-form `dr/dT` along the relaxation at time `t`, assuming a
/// temperature-independent initial state.
///
/// Transverse components pick up `-(gamma_p' t / 2)` times themselves; the
/// population component differentiates its exponential approach to
/// `gamma_m / gamma_p`.
pub fn temperature_derivative_analytic(
    initial: &BlochVector,
    bath: &BathSpec,
    h: &QubitHamiltonian,
    t: f64,
) -> TemperatureDerivative {
    assert!(t >= 0.0, "time must be non-negative");
    let rates = rates_from_bath(bath, h);
    let (gp, gm) = (rates.gamma_p(), rates.gamma_m());
    let slope = gamma_p_derivative(bath, h);
    let evolved = propagate_analytic(initial, &rates, h, t);
    let ep = (-gp * t).exp();
    let relaxed = -(-gp * t).exp_m1(); // 1 - exp(-gamma_p t)
    TemperatureDerivative {
        d_rx: -0.5 * slope * t * evolved.rx,
        d_ry: -0.5 * slope * t * evolved.ry,
        d_rz: -slope * t * ep * (initial.rz - gm / gp) - slope * (gm / (gp * gp)) * relaxed,
    }
}

/// Central finite difference of [`propagate_analytic`] over the bath
/// temperature; the independent oracle for
/// [`temperature_derivative_analytic`].
///
/// Requires `step > 0` and `T - step > 0`. A Richardson half-step check
/// raises `step_warning` when the step is too coarse for three significant
/// digits.
pub fn temperature_derivative_numeric(
    initial: &BlochVector,
    bath: &BathSpec,
    h: &QubitHamiltonian,
    t: f64,
    step: f64,
) -> Result<NumericDerivative> {
    if !(step > 0.0 && bath.temperature() - step > 0.0) {
        return Err(Error::InvalidBath(format!(
            "finite-difference step {step} incompatible with T = {}",
            bath.temperature()
        )));
    }
    let central = |delta: f64| -> Result<TemperatureDerivative> {
        let up = BathSpec::new(bath.temperature() + delta, bath.gamma(), bath.gamma0())?;
        let down = BathSpec::new(bath.temperature() - delta, bath.gamma(), bath.gamma0())?;
        let plus = propagate_analytic(initial, &rates_from_bath(&up, h), h, t);
        let minus = propagate_analytic(initial, &rates_from_bath(&down, h), h, t);
        Ok(TemperatureDerivative {
            d_rx: (plus.rx - minus.rx) / (2.0 * delta),
            d_ry: (plus.ry - minus.ry) / (2.0 * delta),
            d_rz: (plus.rz - minus.rz) / (2.0 * delta),
        })
    };
    let coarse = central(step)?;
    let fine = central(0.5 * step)?;
    let delta2 = (coarse.d_rx - fine.d_rx).powi(2)
        + (coarse.d_ry - fine.d_ry).powi(2)
        + (coarse.d_rz - fine.d_rz).powi(2);
    // central differences are O(step^2): the half-step gap over 3 estimates
    // the coarse-step truncation error
    let scale = fine.norm_squared().sqrt().max(1e-12);
    let step_warning = delta2.sqrt() / 3.0 > 1e-3 * scale;
    Ok(NumericDerivative { derivative: coarse, step_warning })
}

/// QFI from a state and its temperature derivative.
///
/// On the sphere (`|r| = 1`) the radial term is the directional limit `0`
/// when `r . dr/dT` vanishes, and an error otherwise.
pub fn qfi_bloch(state: &BlochVector, derivative: &TemperatureDerivative) -> Result<f64> {
    let gradient = derivative.norm_squared();
    let radial = derivative.radial(state);
    let gap = 1.0 - state.norm_squared();
    if gap < PURITY_FLOOR {
        if radial.abs() < 1e-12 {
            return Ok(gradient);
        }
        return Err(Error::SingularState);
    }
    Ok(gradient + radial * radial / gap)
}

/// Closed-form QFI of the relaxing probe at time `t`.
///
/// Evaluates the analytic expansion of the Bloch QFI with the prefactor
/// `gamma_p'^2`; coherences contribute only through `|rho_21(0)|^2`, so pure
/// dephasing is invisible for incoherent initial states.
pub fn qfi_closed_form(
    initial: &BlochVector,
    bath: &BathSpec,
    h: &QubitHamiltonian,
    t: f64,
) -> Result<f64> {
    assert!(t >= 0.0, "time must be non-negative");
    if t == 0.0 {
        // every term carries t or (1 - e^{-gamma_p t})
        return Ok(0.0);
    }
    let rates = rates_from_bath(bath, h);
    let (gp, gm, g0) = (rates.gamma_p(), rates.gamma_m(), rates.gamma0());
    let slope = gamma_p_derivative(bath, h);
    let ratio = gm / gp;

    let ep = (-gp * t).exp();
    let relaxed = -(-gp * t).exp_m1(); // 1 - exp(-gamma_p t)
    let ec = (-(4.0 * g0 + gp) * t).exp();
    let coherence2 = 0.25 * (initial.rx * initial.rx + initial.ry * initial.ry); // |rho_21(0)|^2
    let rz0 = initial.rz;

    let transverse = t * t * ec * coherence2;
    let population = -t * ep * (rz0 - ratio) - (gm / (gp * gp)) * relaxed;
    let radial_z = (-rz0 * rz0 + ratio * rz0) * t * ep * ep
        - (gm / (gp * gp)) * rz0 * ep * relaxed
        + (-rz0 * ratio + ratio * ratio) * t * ep * relaxed
        - ratio * ratio / gp * relaxed * relaxed;

    let rz_t = rz0 * ep + ratio * relaxed;
    let gap = 1.0 - (4.0 * ec * coherence2 + rz_t * rz_t);
    if gap < PURITY_FLOOR {
        return Err(Error::SingularState);
    }
    let radial = 2.0 * t * ec * coherence2 - radial_z;
    Ok(slope * slope * (transverse + population * population + radial * radial / gap))
}

/// Stationary QFI `omega^2 / (4 T^4 cosh^2(omega / 2T))`, the QFI of the
/// equilibrium state; equals `heat_capacity / T^2`.
pub fn thermal_qfi(bath: &BathSpec, h: &QubitHamiltonian) -> f64 {
    let t = bath.temperature();
    let x = 0.5 * h.omega() / t;
    let ratio = x / (t * x.cosh());
    ratio * ratio
}

/// Quantum Cramer-Rao bound on the estimator variance for `n` measurements,
/// `Var >= 1 / (n F_T)`; `None` when the information vanishes (no finite
/// bound exists).
pub fn qcrb_variance_bound(qfi: f64, n_measurements: u64) -> Result<Option<f64>> {
    if n_measurements == 0 {
        return Err(Error::ZeroMeasurements);
    }
    if !(qfi >= 0.0) {
        return Err(Error::NegativeInformation(qfi));
    }
    if qfi == 0.0 {
        return Ok(None);
    }
    Ok(Some(1.0 / (n_measurements as f64 * qfi)))
}
