//! Qubit state algebra: Bloch/density representations, energies, entropies,
//! and closed forms for the Gibbs family of the Hamiltonian `H = omega sigma_z / 2`.
//!
//! Entropies are in nats. Units use `k_B = 1` and `hbar = 1`, so temperatures
//! carry energy units and `beta = 1/T` carries inverse energy units.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Eigenvalues below this are treated as exact zeros in `x ln x`.
const EIGENVALUE_FLOOR: f64 = 1e-300;

/// Probe Hamiltonian `H = omega sigma_z / 2` with energy gap `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitHamiltonian {
    omega: f64,
}

impl QubitHamiltonian {
    /// Build a Hamiltonian with gap `omega > 0`.
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidFrequency(omega));
        }
        Ok(Self { omega })
    }

    /// Energy gap between the two levels.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Operator norm, i.e. the largest absolute eigenvalue `omega / 2`.
    pub fn operator_norm(&self) -> f64 {
        0.5 * self.omega
    }
}

/// Bloch vector `r = (rx, ry, rz)` of a qubit state `rho = (I + r . sigma) / 2`.
///
/// Physical states satisfy `|r| <= 1`; the same struct doubles as a plain
/// 3-vector for time and temperature derivatives, where no such bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

/// Entries of the 2x2 density matrix; `rho12 = (rx - i ry) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEntries {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12_re: f64,
    pub rho12_im: f64,
}

impl BlochVector {
    /// The maximally mixed state `r = 0`.
    pub const MAXIMALLY_MIXED: Self = Self { rx: 0.0, ry: 0.0, rz: 0.0 };

    pub fn new(rx: f64, ry: f64, rz: f64) -> Self {
        Self { rx, ry, rz }
    }

    /// Bloch vector of the state with matrix entries `rho11`, `rho12`.
    ///
    /// Trace one is implied (`rho22 = 1 - rho11`); Hermiticity fixes `rho21`.
    pub fn from_density_entries(rho11: f64, rho12_re: f64, rho12_im: f64) -> Self {
        Self { rx: 2.0 * rho12_re, ry: -2.0 * rho12_im, rz: 2.0 * rho11 - 1.0 }
    }

    /// Density-matrix entries of this state.
    pub fn density_entries(&self) -> DensityEntries {
        DensityEntries {
            rho11: 0.5 * (1.0 + self.rz),
            rho22: 0.5 * (1.0 - self.rz),
            rho12_re: 0.5 * self.rx,
            rho12_im: -0.5 * self.ry,
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.rx * self.rx + self.ry * self.ry + self.rz * self.rz
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.rx * other.rx + self.ry * other.ry + self.rz * other.rz
    }

    /// Eigenvalues `(1 + |r|)/2, (1 - |r|)/2` of the density matrix.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let n = self.norm();
        (0.5 * (1.0 + n), 0.5 * (1.0 - n))
    }

    /// Whether the state lies in the Bloch ball up to `tol` of excess norm.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.norm() <= 1.0 + tol
    }

    /// Rescale onto the unit sphere if the norm exceeds one.
    pub(crate) fn clamped(&self) -> Self {
        let n = self.norm();
        if n > 1.0 {
            Self { rx: self.rx / n, ry: self.ry / n, rz: self.rz / n }
        } else {
            *self
        }
    }
}

impl Add for BlochVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.rx + o.rx, self.ry + o.ry, self.rz + o.rz)
    }
}

impl Sub for BlochVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.rx - o.rx, self.ry - o.ry, self.rz - o.rz)
    }
}

impl Mul<f64> for BlochVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.rx * s, self.ry * s, self.rz * s)
    }
}

/// Gibbs state `exp(-beta H) / Z` of the qubit Hamiltonian.
///
/// Negative `beta` (population inversion) is a first-class member of the
/// family; all closed forms below are analytic in `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsState {
    beta: f64,
    omega: f64,
}

/// Closed-form equilibrium quantities of a [`GibbsState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsProperties {
    pub bloch: BlochVector,
    pub energy: f64,
    pub entropy: f64,
    pub partition_function: f64,
}

impl GibbsState {
    /// Build the Gibbs state at finite inverse temperature `beta`.
    pub fn new(beta: f64, h: &QubitHamiltonian) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidBeta(beta));
        }
        Ok(Self { beta, omega: h.omega() })
    }

    /// Gibbs state at temperature `T = 1/beta > 0`.
    pub fn from_temperature(temperature: f64, h: &QubitHamiltonian) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidBeta(1.0 / temperature));
        }
        Self::new(1.0 / temperature, h)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Bloch form `(0, 0, -tanh(beta omega / 2))`.
    pub fn bloch(&self) -> BlochVector {
        BlochVector::new(0.0, 0.0, -(0.5 * self.beta * self.omega).tanh())
    }

    /// Mean energy `-(omega/2) tanh(beta omega / 2)`.
    pub fn energy(&self) -> f64 {
        -0.5 * self.omega * (0.5 * self.beta * self.omega).tanh()
    }

    /// `ln Z = ln(2 cosh(beta omega / 2))`, computed overflow-free.
    pub fn log_partition(&self) -> f64 {
        let x = 0.5 * self.beta * self.omega;
        x.abs() + (-2.0 * x.abs()).exp().ln_1p()
    }
}

/// Mean energy `Tr[H rho] = (omega/2) rz`.
pub fn mean_energy(state: &BlochVector, h: &QubitHamiltonian) -> f64 {
    0.5 * h.omega() * state.rz
}

/// Von Neumann entropy in nats, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(state: &BlochVector) -> f64 {
    let (lp, lm) = state.eigenvalues();
    -(x_ln_x(lp) + x_ln_x(lm))
}

fn x_ln_x(x: f64) -> f64 {
    if x > EIGENVALUE_FLOOR {
        x * x.ln()
    } else {
        0.0
    }
}

/// Quantum relative entropy `D(rho || rho_ref) = Tr[rho (ln rho - ln rho_ref)]`.
///
/// Both operators are diagonalized: `rho` through its Bloch-norm eigenvalues,
/// the Gibbs reference through its energy eigenbasis, where
/// `ln rho_ref = -(beta omega / 2) sigma_z - ln Z`.
///
/// Fails if the reference is numerically pure (its smaller eigenvalue rounds
/// to zero, i.e. `beta -> +-inf`).
pub fn relative_entropy(state: &BlochVector, reference: &GibbsState) -> Result<f64> {
    let q = reference.bloch();
    if 1.0 - q.rz.abs() <= 0.0 {
        return Err(Error::PureReference);
    }
    let (lp, lm) = state.eigenvalues();
    let tr_rho_ln_rho = x_ln_x(lp) + x_ln_x(lm);
    let tr_rho_ln_ref =
        -reference.log_partition() - 0.5 * reference.beta() * reference.omega() * state.rz;
    let d = tr_rho_ln_rho - tr_rho_ln_ref;
    // Klein's inequality guarantees d >= 0; absorb rounding-level negatives.
    if d < 0.0 && d > -1e-12 {
        Ok(0.0)
    } else {
        Ok(d)
    }
}

/// Bloch form, mean energy, entropy, and partition function of a Gibbs state.
pub fn gibbs_properties(g: &GibbsState) -> GibbsProperties {
    let bloch = g.bloch();
    GibbsProperties {
        bloch,
        energy: g.energy(),
        entropy: von_neumann_entropy(&bloch),
        partition_function: g.log_partition().exp(),
    }
}

/// Heat capacity `C = d<H>/dT = (beta omega / 2)^2 / cosh^2(beta omega / 2)`.
///
/// Defined for `T = 1/beta > 0`.
pub fn heat_capacity(g: &GibbsState) -> Result<f64> {
    if g.beta() <= 0.0 {
        return Err(Error::NonPositiveTemperature(g.beta()));
    }
    let x = 0.5 * g.beta() * g.omega();
    let ratio = x / x.cosh();
    Ok(ratio * ratio)
}

/// Sample-bath description: temperature and the two channel strengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    temperature: f64,
    gamma: f64,
    gamma0: f64,
}

impl BathSpec {
    /// Build a bath with `temperature > 0`, coupling `gamma > 0`, and
    /// dephasing `gamma0 >= 0`.
    pub fn new(temperature: f64, gamma: f64, gamma0: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidBath(format!("temperature = {temperature}")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidBath(format!("gamma = {gamma}")));
        }
        if !(gamma0.is_finite() && gamma0 >= 0.0) {
            return Err(Error::InvalidBath(format!("gamma0 = {gamma0}")));
        }
        Ok(Self { temperature, gamma, gamma0 })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }
}
