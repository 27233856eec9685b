//! Declarative experiment runs: a config (or built-in preset) describes the
//! probe, bath, time grid, and temperature knowledge; [`run_experiment`]
//! evaluates the full readout pipeline on every grid point and
//! [`emit_csv`](csv::emit_csv) serializes the rows deterministically.
//!
//! Cells that a pipeline stage cannot define (reference temperature at zero
//! energy, effective temperature at an energy turning point, corrected
//! temperature for an inverted probe) are carried as `None` and serialized
//! as the literal token `NA`; a run never aborts on them.

mod config;
mod csv;
mod presets;

pub use config::{parse_config, ConfigError, ConfigViolation};
pub use csv::emit_csv;
pub use presets::{preset, preset_names, presets};

use crate::dynamics::rates_from_bath;
use crate::error::{Error, Result};
use crate::inference::{
    classify_regime, corrected_readout, covariance_identity_residual, effective_beta_e, error_e1,
    error_e2, infer_beta_r, worst_case_errors, ErrorPair, ReferenceReadout, Regime,
};
use crate::metrology::{qfi_bloch, qfi_closed_form, temperature_derivative_analytic};
use crate::qubit::{
    mean_energy, relative_entropy, von_neumann_entropy, BathSpec, BlochVector, GibbsState,
    QubitHamiltonian,
};

/// Uniform time grid with `n_points >= 2` samples on `[t_start, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_points: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite() && t_start >= 0.0 && t_end > t_start)
            || n_points < 2
        {
            return Err(Error::InvalidGrid);
        }
        Ok(Self { t_start, t_end, n_points })
    }

    /// Sample times; the first and last points hit the endpoints exactly.
    pub fn times(&self) -> Vec<f64> {
        let span = self.t_end - self.t_start;
        let last = self.n_points - 1;
        (0..=last)
            .map(|i| {
                if i == last {
                    self.t_end
                } else {
                    self.t_start + span * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// What is known about the sample temperature.
///
/// The error functions need the true temperature; with only an interval,
/// they are evaluated at both boundaries and reported worst-case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TemperatureKnowledge {
    Known(f64),
    Interval { min: f64, max: f64 },
}

/// One complete run description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub initial_state: BlochVector,
    pub bath: BathSpec,
    pub hamiltonian: QubitHamiltonian,
    pub grid: TimeGrid,
    pub temperature: TemperatureKnowledge,
    /// Column selection for CSV output; `None` means all columns.
    pub columns: Option<Vec<Column>>,
}

impl ExperimentConfig {
    /// Columns to emit, in canonical order.
    pub fn output_columns(&self) -> Vec<Column> {
        match &self.columns {
            Some(cols) => cols.clone(),
            None => Column::ALL.to_vec(),
        }
    }
}

/// Output table columns, in their fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    T,
    Rx,
    Ry,
    Rz,
    EP,
    S,
    SR,
    DRel,
    BetaR,
    TR,
    BetaE,
    E1,
    E2,
    TCorr,
    BetaCorr,
    QfiClosed,
    QfiBloch,
    Regime,
}

impl Column {
    pub const ALL: [Column; 18] = [
        Column::T,
        Column::Rx,
        Column::Ry,
        Column::Rz,
        Column::EP,
        Column::S,
        Column::SR,
        Column::DRel,
        Column::BetaR,
        Column::TR,
        Column::BetaE,
        Column::E1,
        Column::E2,
        Column::TCorr,
        Column::BetaCorr,
        Column::QfiClosed,
        Column::QfiBloch,
        Column::Regime,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Column::T => "t",
            Column::Rx => "rx",
            Column::Ry => "ry",
            Column::Rz => "rz",
            Column::EP => "E_p",
            Column::S => "S",
            Column::SR => "S_r",
            Column::DRel => "D_rel",
            Column::BetaR => "beta_r",
            Column::TR => "T_r",
            Column::BetaE => "beta_e",
            Column::E1 => "E1",
            Column::E2 => "E2",
            Column::TCorr => "T_corr",
            Column::BetaCorr => "beta_corr",
            Column::QfiClosed => "qfi_closed",
            Column::QfiBloch => "qfi_bloch",
            Column::Regime => "regime",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Column::ALL.iter().copied().find(|c| c.name() == name)
    }
}

/// One fully evaluated time sample.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRow {
    pub t: f64,
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
    pub e_p: f64,
    pub s: f64,
    pub s_r: Option<f64>,
    pub d_rel: Option<f64>,
    pub beta_r: Option<f64>,
    pub t_r: Option<f64>,
    pub beta_e: Option<f64>,
    pub e1: Option<f64>,
    pub e2: f64,
    pub t_corr: Option<f64>,
    pub beta_corr: Option<f64>,
    pub qfi_closed: Option<f64>,
    pub qfi_bloch: Option<f64>,
    pub regime: Regime,
}

/// Evaluate the full pipeline on every grid point.
///
/// The regime is classified once from the initial energy and held fixed;
/// in interval mode the equilibrium energy at the interval midpoint decides
/// it, and the error functions switch to their worst-case boundary maxima.
pub fn run_experiment(config: &ExperimentConfig) -> Vec<OutputRow> {
    let h = &config.hamiltonian;
    let bath = &config.bath;
    let rates = rates_from_bath(bath, h);
    let initial = config.initial_state;

    let regime_temperature = match config.temperature {
        TemperatureKnowledge::Known(t) => t,
        TemperatureKnowledge::Interval { min, max } => 0.5 * (min + max),
    };
    let thermal_energy = GibbsState::from_temperature(regime_temperature, h)
        .expect("validated temperature")
        .energy();
    let regime = classify_regime(mean_energy(&initial, h), thermal_energy);

    config
        .grid
        .times()
        .into_iter()
        .map(|t| {
            let state = crate::dynamics::propagate_analytic(&initial, &rates, h, t);
            let e_p = mean_energy(&state, h);
            let s = von_neumann_entropy(&state);

            let readout = infer_beta_r(e_p, h);
            let (s_r, d_rel) = match &readout {
                Ok(r) => match GibbsState::new(r.beta_r, h) {
                    Ok(reference) => (
                        Some(von_neumann_entropy(&reference.bloch())),
                        relative_entropy(&state, &reference).ok(),
                    ),
                    Err(_) => (None, None),
                },
                Err(_) => (None, None),
            };
            let beta_e = effective_beta_e(&state, &rates, h).ok().flatten();

            let errors = match (config.temperature, &readout) {
                (TemperatureKnowledge::Known(t_true), readout) => ErrorPair {
                    e1: readout.as_ref().ok().and_then(|r| error_e1(&state, r, t_true, h)),
                    e2: error_e2(e_p, 1.0 / t_true, h),
                },
                (TemperatureKnowledge::Interval { min, max }, _) => {
                    worst_case_errors(&state, e_p, (min, max), h).unwrap_or(ErrorPair {
                        e1: None,
                        e2: error_e2(e_p, 1.0 / min, h).max(error_e2(e_p, 1.0 / max, h)),
                    })
                }
            };

            let corrected = readout.as_ref().ok().map(|r| corrected_readout(r, &errors, regime));

            let qfi_closed = qfi_closed_form(&initial, bath, h, t).ok();
            let derivative = temperature_derivative_analytic(&initial, bath, h, t);
            let qfi_direct = qfi_bloch(&state, &derivative).ok();

            OutputRow {
                t,
                rx: state.rx,
                ry: state.ry,
                rz: state.rz,
                e_p,
                s,
                s_r,
                d_rel,
                beta_r: readout.as_ref().ok().map(|r| r.beta_r),
                t_r: readout.as_ref().ok().and_then(|r| r.t_r),
                beta_e,
                e1: errors.e1,
                e2: errors.e2,
                t_corr: corrected.as_ref().and_then(|c| c.t_corr),
                beta_corr: corrected.as_ref().map(|c| c.beta_corr),
                qfi_closed,
                qfi_bloch: qfi_direct,
                regime,
            }
        })
        .collect()
}

/// Self-check diagnostic: the largest covariance-identity residual over all
/// rows with a defined reference temperature, using `panels` Simpson panels.
///
/// Only meaningful with a known true temperature; returns `None` in interval
/// mode or when no row defines `beta_r`.
pub fn covariance_residual_max(
    config: &ExperimentConfig,
    rows: &[OutputRow],
    panels: usize,
) -> Result<Option<f64>> {
    let true_beta = match config.temperature {
        TemperatureKnowledge::Known(t) => 1.0 / t,
        TemperatureKnowledge::Interval { .. } => return Ok(None),
    };
    let mut worst: Option<f64> = None;
    for row in rows {
        if let Some(beta_r) = row.beta_r {
            let readout = ReferenceReadout::from_beta(beta_r);
            let residual =
                covariance_identity_residual(&readout, true_beta, &config.hamiltonian, panels)?;
            worst = Some(worst.map_or(residual, |w: f64| w.max(residual)));
        }
    }
    Ok(worst)
}
