//! Run configuration: command-line flags layered over an optional flat JSON
//! file.

use crate::CliError;
use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Eigenfunctions and eigenvalue pairs for one coupling.
    Modes,
    /// Field propagation from an entrance waveform.
    Dynamics,
    /// One write/readout cycle report.
    Cycle,
    /// Efficiency table over coupling lists.
    Sweep,
    /// Transverse-mode capacity of a sample geometry.
    Capacity,
    /// Built-in consistency suite.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Characteristics,
    Greens,
}

#[derive(Debug, Parser)]
#[command(
    name = "holovolume",
    version,
    about = "Quantum volume hologram memory simulator"
)]
pub struct Cli {
    pub command: Command,
    /// Flat JSON file with default values for any of the options below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Comma-separated list for `sweep`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub kappa_write: Option<Vec<f64>>,
    /// Comma-separated list for `sweep`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub kappa_read: Option<Vec<f64>>,
    /// Grid nodes: Gauss-Legendre for modes/cycle/sweep, uniform for dynamics.
    #[arg(long)]
    pub grid_n: Option<usize>,
    #[arg(long)]
    pub n_modes: Option<usize>,
    /// One-based mode indices (cycle uses the first).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub mode: Option<Vec<usize>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output formats; defaults to every format the command supports.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub format: Option<Vec<Format>>,
    /// Entrance light for `dynamics`: eigenmode:I, gaussian:CENTER,WIDTH,
    /// flat, or file:PATH (CSV with columns tau,re,im on the grid nodes).
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long, value_enum)]
    pub solver: Option<Solver>,
    /// Wavelength in m.
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Sample length L in m.
    #[arg(long)]
    pub cell_length: Option<f64>,
    /// Cross-section S in m^2.
    #[arg(long)]
    pub cross_section: Option<f64>,
    /// Paraxial parameter in (0, 0.5].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Transverse wavevector qx,qy in rad/m.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub q: Option<Vec<f64>>,
    /// Multiplier on the error tolerances of `verify`.
    #[arg(long)]
    pub tolerance_scale: Option<f64>,
}

/// Values a config file may supply. Lists accept a bare number.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub kappa: Option<f64>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub kappa_write: Option<Vec<f64>>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub kappa_read: Option<Vec<f64>>,
    pub grid_n: Option<usize>,
    pub n_modes: Option<usize>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub mode: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub format: Option<Vec<Format>>,
    pub input: Option<String>,
    pub solver: Option<Solver>,
    pub wavelength: Option<f64>,
    pub cell_length: Option<f64>,
    pub cross_section: Option<f64>,
    pub epsilon: Option<f64>,
    pub q: Option<[f64; 2]>,
    pub tolerance_scale: Option<f64>,
}

fn one_or_many<'de, D, T>(d: D) -> Result<Option<Vec<T>>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        One(T),
        Many(Vec<T>),
    }
    Ok(Option::<OneOrMany<T>>::deserialize(d)?.map(|v| match v {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(xs) => xs,
    }))
}

/// Merged settings; flags win over the file.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub kappa: Option<f64>,
    pub kappa_write: Option<Vec<f64>>,
    pub kappa_read: Option<Vec<f64>>,
    pub grid_n: Option<usize>,
    pub n_modes: Option<usize>,
    pub mode: Option<Vec<usize>>,
    pub out: PathBuf,
    pub format: Option<Vec<Format>>,
    pub input: Option<String>,
    pub solver: Option<Solver>,
    pub wavelength: Option<f64>,
    pub cell_length: Option<f64>,
    pub cross_section: Option<f64>,
    pub epsilon: Option<f64>,
    pub q: Option<[f64; 2]>,
    pub tolerance_scale: Option<f64>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| {
                    CliError::Usage(format!("invalid config {}: {e}", path.display()))
                })?
            }
            None => FileConfig::default(),
        };
        let q = match cli.q.as_deref() {
            Some(&[x, y]) => Some([x, y]),
            Some(_) => return Err(CliError::Usage("--q takes two values: QX,QY".into())),
            None => file.q,
        };
        Ok(Self {
            command: cli.command,
            kappa: cli.kappa.or(file.kappa),
            kappa_write: cli.kappa_write.or(file.kappa_write),
            kappa_read: cli.kappa_read.or(file.kappa_read),
            grid_n: cli.grid_n.or(file.grid_n),
            n_modes: cli.n_modes.or(file.n_modes),
            mode: cli.mode.or(file.mode),
            out: cli.out.or(file.out).unwrap_or_else(|| PathBuf::from(".")),
            format: cli.format.or(file.format),
            input: cli.input.or(file.input),
            solver: cli.solver.or(file.solver),
            wavelength: cli.wavelength.or(file.wavelength),
            cell_length: cli.cell_length.or(file.cell_length),
            cross_section: cli.cross_section.or(file.cross_section),
            epsilon: cli.epsilon.or(file.epsilon),
            q,
            tolerance_scale: cli.tolerance_scale.or(file.tolerance_scale),
        })
    }

    /// Requested formats restricted to those the command supports.
    pub fn formats(&self, supported: &[Format]) -> Result<Vec<Format>, CliError> {
        let Some(req) = &self.format else {
            return Ok(supported.to_vec());
        };
        if let Some(f) = req.iter().find(|f| !supported.contains(f)) {
            return Err(CliError::Usage(format!(
                "format {f:?} is not available for this command"
            )));
        }
        let mut v = req.clone();
        v.sort();
        v.dedup();
        Ok(v)
    }

    pub fn grid_n(&self, default: usize) -> Result<usize, CliError> {
        let n = self.grid_n.unwrap_or(default);
        if n < 32 {
            return Err(CliError::Usage(format!(
                "--grid-n must be at least 32, got {n}"
            )));
        }
        Ok(n)
    }
}
