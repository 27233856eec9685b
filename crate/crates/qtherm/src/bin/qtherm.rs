//! Thin command-line front end: resolve a config or preset, run the
//! pipeline, write the CSV table.
//!
//! Exit codes: 0 on success (possibly with NA cells), 1 on config or usage
//! errors, 2 on I/O errors.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qtherm::experiment::{
    covariance_residual_max, emit_csv, parse_config, preset, presets, run_experiment,
    ExperimentConfig, TemperatureKnowledge,
};

#[derive(Parser)]
#[command(name = "qtherm", version, about = "Dissipative single-qubit thermometer simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV table
    Run {
        /// Path to a sectioned key=value config file
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,

        /// Name of a built-in preset (see `list-presets`)
        #[arg(long)]
        preset: Option<String>,

        /// Output CSV path
        #[arg(long)]
        out: PathBuf,

        /// Simpson panels for the covariance-identity self-check
        #[arg(long, default_value_t = 256)]
        quadrature_points: usize,

        /// Evaluate the error functions worst-case over [T_MIN, T_MAX]
        /// instead of at the configured true temperature
        #[arg(long, num_args = 2, value_names = ["T_MIN", "T_MAX"])]
        interval: Option<Vec<f64>>,
    },
    /// List the built-in presets
    ListPresets,
}

const EXIT_CONFIG: u8 = 1;
const EXIT_IO: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are not errors
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_CONFIG,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    match cli.command {
        Command::ListPresets => {
            for (name, description) in presets() {
                println!("{name:<10} {description}");
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, preset, out, quadrature_points, interval } => {
            run(config, preset, out, quadrature_points, interval)
        }
    }
}

fn run(
    config_path: Option<PathBuf>,
    preset_name: Option<String>,
    out: PathBuf,
    quadrature_points: usize,
    interval: Option<Vec<f64>>,
) -> ExitCode {
    let mut config = match load_config(config_path, preset_name) {
        Ok(config) => config,
        Err(code) => return code,
    };

    if quadrature_points < 16 {
        eprintln!("error: --quadrature-points must be at least 16, got {quadrature_points}");
        return ExitCode::from(EXIT_CONFIG);
    }

    if let Some(bounds) = interval {
        let (min, max) = (bounds[0], bounds[1]);
        if !(min.is_finite() && max.is_finite() && 0.0 < min && min <= max) {
            eprintln!("error: --interval needs 0 < T_MIN <= T_MAX, got [{min}, {max}]");
            return ExitCode::from(EXIT_CONFIG);
        }
        config.temperature = TemperatureKnowledge::Interval { min, max };
    }

    let rows = run_experiment(&config);

    let file = match fs::File::create(&out) {
        Ok(file) => file,
        Err(err) => {
            eprintln!("error: cannot create {}: {err}", out.display());
            return ExitCode::from(EXIT_IO);
        }
    };
    let mut writer = BufWriter::new(file);
    let columns = config.output_columns();
    if let Err(err) = emit_csv(&rows, &columns, &mut writer).and_then(|()| writer.flush()) {
        eprintln!("error: cannot write {}: {err}", out.display());
        return ExitCode::from(EXIT_IO);
    }

    // quadrature self-check on the exact readout identity; known-T runs only
    match covariance_residual_max(&config, &rows, quadrature_points) {
        Ok(Some(residual)) => eprintln!(
            "covariance-identity self-check: max residual {residual:.3e} ({quadrature_points} panels)"
        ),
        Ok(None) => {}
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    ExitCode::SUCCESS
}

fn load_config(
    config_path: Option<PathBuf>,
    preset_name: Option<String>,
) -> Result<ExperimentConfig, ExitCode> {
    match (config_path, preset_name) {
        (Some(path), None) => {
            let text = fs::read_to_string(&path).map_err(|err| {
                eprintln!("error: cannot read {}: {err}", path.display());
                ExitCode::from(EXIT_IO)
            })?;
            parse_config(&text).map_err(|err| {
                eprint!("error: {err}");
                ExitCode::from(EXIT_CONFIG)
            })
        }
        (None, Some(name)) => preset(&name).ok_or_else(|| {
            eprintln!("error: unknown preset `{name}`; see `qtherm list-presets`");
            ExitCode::from(EXIT_CONFIG)
        }),
        _ => {
            eprintln!("error: give exactly one of --config or --preset");
            Err(ExitCode::from(EXIT_CONFIG))
        }
    }
}
