//! Flat sectioned `key = value` config format.
//!
//! ```text
//! # comment
//! [state]
//! rx = 0.4          # either Bloch components (missing ones default to 0)
//! rz = -0.4
//! # ... or density-matrix entries:
//! # rho11 = 0.3
//! # rho12_re = 0.2
//! # rho12_im = 0.0
//!
//! [bath]
//! temperature = 0.5
//! gamma = 1.0
//! gamma0 = 0.0      # optional, defaults to 0
//!
//! [hamiltonian]
//! omega = 1.0
//!
//! [grid]
//! t_start = 0.0
//! t_end = 10.0
//! n_points = 1000
//!
//! [readout]
//! true_temperature = 0.5
//! # or an interval instead:
//! # t_min = 0.45
//! # t_max = 0.55
//!
//! [output]          # optional
//! columns = t,rz,beta_r,T_corr
//! ```
//!
//! Parsing is two-phase: every line is scanned first, then values are
//! validated; all violations are reported together, each with its line
//! number.

use std::collections::BTreeMap;
use std::fmt;

use super::{Column, ExperimentConfig, TemperatureKnowledge, TimeGrid};
use crate::qubit::{BathSpec, BlochVector, QubitHamiltonian};

/// Excess Bloch norm tolerated before a state counts as unphysical.
const STATE_TOL: f64 = 1e-9;

/// A single config problem, anchored to a 1-based line number
/// (line 0 marks file-level problems such as missing sections).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigViolation {
    pub line: usize,
    pub message: String,
}

/// All problems found in a config, reported together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub violations: Vec<ConfigViolation>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid experiment config:")?;
        for v in &self.violations {
            if v.line == 0 {
                writeln!(f, "  {}", v.message)?;
            } else {
                writeln!(f, "  line {}: {}", v.line, v.message)?;
            }
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

const SECTIONS: &[&str] = &["state", "bath", "hamiltonian", "grid", "readout", "output"];

const KEYS: &[(&str, &[&str])] = &[
    ("state", &["rx", "ry", "rz", "rho11", "rho12_re", "rho12_im"]),
    ("bath", &["temperature", "gamma", "gamma0"]),
    ("hamiltonian", &["omega"]),
    ("grid", &["t_start", "t_end", "n_points"]),
    ("readout", &["true_temperature", "t_min", "t_max"]),
    ("output", &["columns"]),
];

struct RawConfig {
    /// `(section, key) -> (line, value)`
    values: BTreeMap<(String, String), (usize, String)>,
    /// line of each section header, for anchoring missing-key messages
    section_lines: BTreeMap<String, usize>,
    violations: Vec<ConfigViolation>,
}

impl RawConfig {
    fn scan(text: &str) -> Self {
        let mut raw = RawConfig {
            values: BTreeMap::new(),
            section_lines: BTreeMap::new(),
            violations: Vec::new(),
        };
        let mut section: Option<String> = None;
        for (idx, line) in text.lines().enumerate() {
            let number = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                if SECTIONS.contains(&name) {
                    raw.section_lines.entry(name.to_string()).or_insert(number);
                    section = Some(name.to_string());
                } else {
                    raw.report(number, format!("unknown section [{name}]"));
                    section = None;
                }
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                raw.report(number, format!("expected `key = value`, got `{line}`"));
                continue;
            };
            let key = key.trim();
            let value = value.trim();
            let Some(section) = section.as_deref() else {
                raw.report(number, format!("key `{key}` appears before any [section]"));
                continue;
            };
            let allowed = KEYS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k).unwrap_or(&[]);
            if !allowed.contains(&key) {
                raw.report(number, format!("unknown key `{key}` in section [{section}]"));
                continue;
            }
            let slot = (section.to_string(), key.to_string());
            if raw.values.contains_key(&slot) {
                raw.report(number, format!("duplicate key `{key}` in section [{section}]"));
                continue;
            }
            raw.values.insert(slot, (number, value.to_string()));
        }
        raw
    }

    fn report(&mut self, line: usize, message: String) {
        self.violations.push(ConfigViolation { line, message });
    }

    fn entry(&self, section: &str, key: &str) -> Option<(usize, &str)> {
        self.values
            .get(&(section.to_string(), key.to_string()))
            .map(|(line, value)| (*line, value.as_str()))
    }

    fn number(&mut self, section: &str, key: &str) -> Option<(usize, f64)> {
        let (line, value) = self.entry(section, key)?;
        match value.parse::<f64>() {
            Ok(x) if x.is_finite() => Some((line, x)),
            _ => {
                let value = value.to_string();
                self.report(line, format!("`{key}` is not a finite number: `{value}`"));
                None
            }
        }
    }

    fn integer(&mut self, section: &str, key: &str) -> Option<(usize, usize)> {
        let (line, value) = self.entry(section, key)?;
        match value.parse::<usize>() {
            Ok(n) => Some((line, n)),
            Err(_) => {
                let value = value.to_string();
                self.report(line, format!("`{key}` is not a non-negative integer: `{value}`"));
                None
            }
        }
    }

    fn section_anchor(&self, section: &str) -> usize {
        self.section_lines.get(section).copied().unwrap_or(0)
    }

    fn require(&mut self, section: &str, key: &str) -> Option<(usize, f64)> {
        if self.entry(section, key).is_none() {
            let anchor = self.section_anchor(section);
            self.report(anchor, format!("section [{section}] is missing key `{key}`"));
            return None;
        }
        self.number(section, key)
    }
}

/// Parse and validate an experiment config, reporting every violation.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut raw = RawConfig::scan(text);

    let initial_state = parse_state(&mut raw);
    let bath = parse_bath(&mut raw);
    let hamiltonian = parse_hamiltonian(&mut raw);
    let grid = parse_grid(&mut raw);
    let temperature = parse_readout(&mut raw);
    let columns = parse_columns(&mut raw);

    if raw.violations.is_empty() {
        Ok(ExperimentConfig {
            initial_state: initial_state.expect("no violations"),
            bath: bath.expect("no violations"),
            hamiltonian: hamiltonian.expect("no violations"),
            grid: grid.expect("no violations"),
            temperature: temperature.expect("no violations"),
            columns,
        })
    } else {
        raw.violations.sort_by_key(|v| v.line);
        Err(ConfigError { violations: raw.violations })
    }
}

fn parse_state(raw: &mut RawConfig) -> Option<BlochVector> {
    let has_bloch = ["rx", "ry", "rz"].iter().any(|k| raw.entry("state", k).is_some());
    let has_density =
        ["rho11", "rho12_re", "rho12_im"].iter().any(|k| raw.entry("state", k).is_some());
    let anchor = raw.section_anchor("state");
    let state = match (has_bloch, has_density) {
        (true, true) => {
            raw.report(anchor, "give either Bloch components or density entries, not both".into());
            return None;
        }
        (false, false) => {
            raw.report(anchor, "section [state] must define an initial state".into());
            return None;
        }
        (true, false) => {
            let rx = raw.number("state", "rx").map(|(_, x)| x).unwrap_or(0.0);
            let ry = raw.number("state", "ry").map(|(_, x)| x).unwrap_or(0.0);
            let rz = raw.number("state", "rz").map(|(_, x)| x).unwrap_or(0.0);
            BlochVector::new(rx, ry, rz)
        }
        (false, true) => {
            let rho11 = raw.require("state", "rho11").map(|(_, x)| x)?;
            let re = raw.number("state", "rho12_re").map(|(_, x)| x).unwrap_or(0.0);
            let im = raw.number("state", "rho12_im").map(|(_, x)| x).unwrap_or(0.0);
            if !(0.0..=1.0).contains(&rho11) {
                raw.report(anchor, format!("rho11 = {rho11} is not a probability"));
                return None;
            }
            BlochVector::from_density_entries(rho11, re, im)
        }
    };
    if !state.is_physical(STATE_TOL) {
        let (_, smallest) = state.eigenvalues();
        raw.report(
            anchor,
            format!(
                "state is not positive semidefinite: |r| = {:.6} gives eigenvalue {:.3e}",
                state.norm(),
                smallest
            ),
        );
        return None;
    }
    Some(state)
}

fn parse_bath(raw: &mut RawConfig) -> Option<BathSpec> {
    let temperature = raw.require("bath", "temperature");
    let gamma = raw.require("bath", "gamma");
    let gamma0 = raw.number("bath", "gamma0").unwrap_or((raw.section_anchor("bath"), 0.0));
    let (t_line, temperature) = temperature?;
    let (g_line, gamma) = gamma?;
    let (g0_line, gamma0) = gamma0;
    let mut ok = true;
    if temperature <= 0.0 {
        raw.report(t_line, format!("temperature must be positive, got {temperature}"));
        ok = false;
    }
    if gamma <= 0.0 {
        raw.report(g_line, format!("gamma must be positive, got {gamma}"));
        ok = false;
    }
    if gamma0 < 0.0 {
        raw.report(g0_line, format!("gamma0 must be non-negative, got {gamma0}"));
        ok = false;
    }
    if ok {
        BathSpec::new(temperature, gamma, gamma0).ok()
    } else {
        None
    }
}

fn parse_hamiltonian(raw: &mut RawConfig) -> Option<QubitHamiltonian> {
    let (line, omega) = raw.require("hamiltonian", "omega")?;
    match QubitHamiltonian::new(omega) {
        Ok(h) => Some(h),
        Err(_) => {
            raw.report(line, format!("omega must be positive, got {omega}"));
            None
        }
    }
}

fn parse_grid(raw: &mut RawConfig) -> Option<TimeGrid> {
    let t_start = raw.require("grid", "t_start");
    let t_end = raw.require("grid", "t_end");
    let anchor = raw.section_anchor("grid");
    let n_points = if raw.entry("grid", "n_points").is_none() {
        raw.report(anchor, "section [grid] is missing key `n_points`".into());
        None
    } else {
        raw.integer("grid", "n_points")
    };
    let (s_line, t_start) = t_start?;
    let (e_line, t_end) = t_end?;
    let (n_line, n_points) = n_points?;
    if t_start < 0.0 {
        raw.report(s_line, format!("t_start must be >= 0, got {t_start}"));
        return None;
    }
    if t_end <= t_start {
        raw.report(e_line, format!("t_end must exceed t_start, got {t_end} <= {t_start}"));
        return None;
    }
    if n_points < 2 {
        raw.report(n_line, format!("n_points must be at least 2, got {n_points}"));
        return None;
    }
    TimeGrid::new(t_start, t_end, n_points).ok()
}

fn parse_readout(raw: &mut RawConfig) -> Option<TemperatureKnowledge> {
    let anchor = raw.section_anchor("readout");
    let has_known = raw.entry("readout", "true_temperature").is_some();
    let has_min = raw.entry("readout", "t_min").is_some();
    let has_max = raw.entry("readout", "t_max").is_some();
    match (has_known, has_min || has_max) {
        (true, true) => {
            raw.report(anchor, "give either true_temperature or a t_min/t_max interval".into());
            None
        }
        (false, false) => {
            raw.report(
                anchor,
                "section [readout] needs true_temperature or a t_min/t_max interval".into(),
            );
            None
        }
        (true, false) => {
            let (line, t) = raw.number("readout", "true_temperature")?;
            if t <= 0.0 {
                raw.report(line, format!("true_temperature must be positive, got {t}"));
                return None;
            }
            Some(TemperatureKnowledge::Known(t))
        }
        (false, true) => {
            let min = raw.require("readout", "t_min");
            let max = raw.require("readout", "t_max");
            let (min_line, min) = min?;
            let (_, max) = max?;
            if !(0.0 < min && min <= max) {
                raw.report(min_line, format!("interval needs 0 < t_min <= t_max, got [{min}, {max}]"));
                return None;
            }
            Some(TemperatureKnowledge::Interval { min, max })
        }
    }
}

fn parse_columns(raw: &mut RawConfig) -> Option<Vec<Column>> {
    let (line, value) = raw.entry("output", "columns")?;
    let value = value.to_string();
    let mut requested = Vec::new();
    let mut bad = Vec::new();
    for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match Column::from_name(name) {
            Some(column) => requested.push(column),
            None => bad.push(name.to_string()),
        }
    }
    if !bad.is_empty() {
        raw.report(line, format!("unknown column(s): {}", bad.join(", ")));
        return None;
    }
    // emitted columns keep the canonical order regardless of listing order
    Some(Column::ALL.iter().copied().filter(|c| requested.contains(c)).collect())
}
