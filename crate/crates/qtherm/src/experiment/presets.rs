//! Built-in experiment presets.
//!
//! All presets share the reference parameters `omega = 1`, `T = 0.5`,
//! `gamma = 1` and a 1000-point grid on `t in [0, 10]`, which comfortably
//! covers thermalization at these rates. They differ in the initial state
//! and the dephasing strength:
//!
//! - `fig1*` — Fisher-information dynamics: one coherent probe
//!   (`|rho_12(0)| = 0.4`, populations 0.3/0.7) at increasing dephasing,
//!   plus the incoherent probe with the same populations.
//! - `fig2*` — reference-vs-effective temperature: coherent probe with
//!   `|rho_12(0)| = 0.2`, with and without dephasing.
//! - `fig3a..f` — corrected readout at fixed coherence 0.2 and varying
//!   populations (`a`/`d`: 0.3/0.7, `b`/`e`: 0.2/0.8, `c`/`f`: 0.1/0.9).
//! - `fig4a..d` — corrected readout at fixed populations 0.3/0.7 and
//!   varying coherence (`a`/`c`: 0.3, `b`/`d`: 0.4).

use super::{Column, ExperimentConfig, TemperatureKnowledge, TimeGrid};
use crate::qubit::{BathSpec, BlochVector, QubitHamiltonian};

/// Name/description pairs of every built-in preset, in listing order.
const TABLE: &[(&str, &str)] = &[
    ("fig1", "coherent probe rho12=0.4, pops 0.3/0.7, gamma0=0 (Fisher information)"),
    ("fig1_g02", "fig1 probe with dephasing gamma0=0.2"),
    ("fig1_g05", "fig1 probe with dephasing gamma0=0.5"),
    ("fig1_in", "incoherent probe, pops 0.3/0.7, gamma0=0"),
    ("fig2", "coherent probe rho12=0.2, pops 0.3/0.7, gamma0=0.5 (beta_r vs beta_e)"),
    ("fig2_g00", "fig2 probe without dephasing"),
    ("fig3a", "readout: pops 0.3/0.7, coherence 0.2, gamma0=0"),
    ("fig3b", "readout: pops 0.2/0.8, coherence 0.2, gamma0=0"),
    ("fig3c", "readout: pops 0.1/0.9, coherence 0.2, gamma0=0"),
    ("fig3d", "inverse readout companion of fig3a (same run)"),
    ("fig3e", "inverse readout companion of fig3b (same run)"),
    ("fig3f", "inverse readout companion of fig3c (same run)"),
    ("fig4a", "readout: pops 0.3/0.7, coherence 0.3, gamma0=0"),
    ("fig4b", "readout: pops 0.3/0.7, coherence 0.4, gamma0=0"),
    ("fig4c", "inverse readout companion of fig4a (same run)"),
    ("fig4d", "inverse readout companion of fig4b (same run)"),
];

/// Names of all built-in presets.
pub fn preset_names() -> Vec<&'static str> {
    TABLE.iter().map(|(name, _)| *name).collect()
}

/// Name/description pairs of all built-in presets.
pub fn presets() -> &'static [(&'static str, &'static str)] {
    TABLE
}

/// Build a preset by name.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    // (excited population rho11, |rho12|, gamma0)
    let (rho11, coherence, gamma0) = match name {
        "fig1" => (0.3, 0.4, 0.0),
        "fig1_g02" => (0.3, 0.4, 0.2),
        "fig1_g05" => (0.3, 0.4, 0.5),
        "fig1_in" => (0.3, 0.0, 0.0),
        "fig2" => (0.3, 0.2, 0.5),
        "fig2_g00" => (0.3, 0.2, 0.0),
        "fig3a" | "fig3d" => (0.3, 0.2, 0.0),
        "fig3b" | "fig3e" => (0.2, 0.2, 0.0),
        "fig3c" | "fig3f" => (0.1, 0.2, 0.0),
        "fig4a" | "fig4c" => (0.3, 0.3, 0.0),
        "fig4b" | "fig4d" => (0.3, 0.4, 0.0),
        _ => return None,
    };
    Some(ExperimentConfig {
        initial_state: BlochVector::from_density_entries(rho11, coherence, 0.0),
        bath: BathSpec::new(0.5, 1.0, gamma0).expect("preset bath is valid"),
        hamiltonian: QubitHamiltonian::new(1.0).expect("preset gap is valid"),
        grid: TimeGrid::new(0.0, 10.0, 1000).expect("preset grid is valid"),
        temperature: TemperatureKnowledge::Known(0.5),
        columns: None::<Vec<Column>>,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_preset_builds() {
        for (name, _) in presets() {
            let config = preset(name).unwrap_or_else(|| panic!("preset {name} missing"));
            assert!(config.initial_state.is_physical(0.0));
        }
        assert!(preset("fig9").is_none());
    }

    #[test]
    fn preset_parameters_match_their_captions() {
        // pinned caption constants: omega=1, T=0.5, gamma=1 everywhere
        for (name, _) in presets() {
            let c = preset(name).unwrap();
            assert_eq!(c.hamiltonian.omega(), 1.0);
            assert_eq!(c.bath.temperature(), 0.5);
            assert_eq!(c.bath.gamma(), 1.0);
            assert_eq!(c.temperature, TemperatureKnowledge::Known(0.5));
        }

        // fig1: rho = 0.5 I + 0.4 sigma_x - 0.2 sigma_z, dephasing sweep
        let fig1 = preset("fig1").unwrap();
        assert_eq!(fig1.initial_state, BlochVector::new(0.8, 0.0, -0.4));
        assert_eq!(fig1.bath.gamma0(), 0.0);
        assert_eq!(preset("fig1_g02").unwrap().bath.gamma0(), 0.2);
        assert_eq!(preset("fig1_g05").unwrap().bath.gamma0(), 0.5);
        assert_eq!(preset("fig1_in").unwrap().initial_state, BlochVector::new(0.0, 0.0, -0.4));

        // fig2: rho = 0.5 I + 0.2 sigma_x - 0.2 sigma_z
        let fig2 = preset("fig2").unwrap();
        assert_eq!(fig2.initial_state, BlochVector::new(0.4, 0.0, -0.4));
        assert_eq!(fig2.bath.gamma0(), 0.5);

        // fig3: fixed coherence 0.2, populations 0.3/0.7, 0.2/0.8, 0.1/0.9
        for (name, rho11) in [("fig3a", 0.3), ("fig3b", 0.2), ("fig3c", 0.1)] {
            let c = preset(name).unwrap();
            let d = c.initial_state.density_entries();
            assert!((d.rho11 - rho11).abs() < 1e-15);
            assert!((d.rho12_re - 0.2).abs() < 1e-15);
            assert_eq!(c.bath.gamma0(), 0.0);
        }

        // fig4: fixed populations 0.3/0.7, coherences 0.3 and 0.4
        for (name, coh) in [("fig4a", 0.3), ("fig4b", 0.4)] {
            let c = preset(name).unwrap();
            let d = c.initial_state.density_entries();
            assert!((d.rho11 - 0.3).abs() < 1e-15);
            assert!((d.rho12_re - coh).abs() < 1e-15);
        }

        // companion presets run the same physical configuration
        assert_eq!(preset("fig3d").unwrap(), preset("fig3a").unwrap());
        assert_eq!(preset("fig4c").unwrap(), preset("fig4a").unwrap());
    }
}
