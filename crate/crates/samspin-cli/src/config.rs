//! Run configuration: defaults, config-file parsing, and flag merging.

use std::path::PathBuf;

use samspin::constants::mhz_to_angular;
use samspin::dipole::classical_coupling_at;
use samspin::{AdiabaticParams, SystemParams};

/// Errors surfaced to the user, split by exit code: validation failures
/// exit with 1, usage problems with 2.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Usage(String),
}

impl From<samspin::Error> for CliError {
    fn from(err: samspin::Error) -> Self {
        Self::Validation(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self::Validation(err.to_string())
    }
}

/// Output format of every command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Fully resolved run configuration in display units (tesla, nm, MHz, kHz).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Static field at the second spin, T.
    pub b0: f64,
    /// Field gradient magnitude, T/m.
    pub gradient: f64,
    /// Spin separation, nm.
    pub separation_nm: f64,
    /// g-tensor zz component.
    pub g_zz: f64,
    /// Dipolar coupling, MHz; derived from the separation when absent.
    pub coupling_mhz: Option<f64>,
    /// rf amplitude, T.
    pub b1: f64,
    /// Peak effective-field sweep amplitude, T.
    pub delta_b: f64,
    /// Cantilever frequency, kHz.
    pub fc_khz: f64,
    /// Adiabaticity threshold.
    pub eta_max: f64,
    /// Spin-density file.
    pub density_file: Option<PathBuf>,
    /// Seed for stochastic commands.
    pub seed: u64,
    pub format: Format,
    /// Output path; stdout when absent.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    /// Illustrative defaults: a 0.35 T field with a 1e5 T/m gradient and a
    /// 1 nm separation keep all four transitions resolvable; these are
    /// working values, not measurements.
    fn default() -> Self {
        Self {
            b0: 0.35,
            gradient: 1e5,
            separation_nm: 1.0,
            g_zz: samspin::constants::FREE_ELECTRON_G,
            coupling_mhz: None,
            b1: 1e-3,
            delta_b: 0.01,
            fc_khz: 5.0,
            eta_max: 0.1,
            density_file: None,
            seed: 42,
            format: Format::Csv,
            output: None,
        }
    }
}

impl RunConfig {
    /// Spin separation in meters.
    pub fn separation_m(&self) -> f64 {
        self.separation_nm * 1e-9
    }

    /// Coupling in rad/s actually used: the configured value, or the
    /// classical point-dipole value at the configured separation.
    pub fn coupling_angular(&self) -> Result<f64, CliError> {
        match self.coupling_mhz {
            Some(mhz) => Ok(mhz_to_angular(mhz)),
            None => Ok(classical_coupling_at(self.separation_m())?),
        }
    }

    pub fn system_params(&self) -> Result<SystemParams, CliError> {
        let coupling = self.coupling_angular()?;
        Ok(SystemParams::new(
            self.b0,
            self.gradient,
            self.separation_m(),
            self.g_zz,
            coupling,
        )?)
    }

    pub fn adiabatic_params(&self) -> Result<AdiabaticParams, CliError> {
        let omega_c = std::f64::consts::TAU * self.fc_khz * 1e3;
        Ok(AdiabaticParams::new(
            self.b1,
            self.delta_b,
            omega_c,
            self.eta_max,
        )?)
    }
}

/// Values from one configuration source; `None` leaves the lower-precedence
/// value in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub b0: Option<f64>,
    pub gradient: Option<f64>,
    pub separation_nm: Option<f64>,
    pub g_zz: Option<f64>,
    pub coupling_mhz: Option<f64>,
    pub b1: Option<f64>,
    pub delta_b: Option<f64>,
    pub fc_khz: Option<f64>,
    pub eta_max: Option<f64>,
    pub density_file: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl Overrides {
    /// Applies these values on top of `config`.
    pub fn apply_to(&self, config: &mut RunConfig) {
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = &self.$field {
                    config.$field = v.clone();
                }
            };
            (opt $field:ident) => {
                if let Some(v) = &self.$field {
                    config.$field = Some(v.clone());
                }
            };
        }
        set!(b0);
        set!(gradient);
        set!(separation_nm);
        set!(g_zz);
        set!(opt coupling_mhz);
        set!(b1);
        set!(delta_b);
        set!(fc_khz);
        set!(eta_max);
        set!(opt density_file);
        set!(seed);
        set!(format);
        set!(opt output);
    }
}

/// Parses the flat `key = value` configuration format. `#` starts a comment
/// (whole-line or trailing); unknown keys are rejected.
pub fn parse_config_file(text: &str) -> Result<Overrides, CliError> {
    let mut values = Overrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Validation(format!(
                "config line {line_no}: expected 'key = value', got '{line}'"
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let parse_f64 = || -> Result<f64, CliError> {
            value.parse().map_err(|_| {
                CliError::Validation(format!(
                    "config line {line_no}: invalid number '{value}' for key '{key}'"
                ))
            })
        };
        match key {
            "b0" => values.b0 = Some(parse_f64()?),
            "gradient" => values.gradient = Some(parse_f64()?),
            "separation_nm" => values.separation_nm = Some(parse_f64()?),
            "g_zz" => values.g_zz = Some(parse_f64()?),
            "coupling_mhz" => values.coupling_mhz = Some(parse_f64()?),
            "b1" => values.b1 = Some(parse_f64()?),
            "delta_b" => values.delta_b = Some(parse_f64()?),
            "fc_khz" => values.fc_khz = Some(parse_f64()?),
            "eta_max" => values.eta_max = Some(parse_f64()?),
            "density_file" => values.density_file = Some(PathBuf::from(value)),
            "seed" => {
                values.seed = Some(value.parse().map_err(|_| {
                    CliError::Validation(format!(
                        "config line {line_no}: invalid seed '{value}'"
                    ))
                })?)
            }
            "format" => {
                values.format = Some(match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    other => {
                        return Err(CliError::Validation(format!(
                            "config line {line_no}: format must be csv or json, got '{other}'"
                        )))
                    }
                })
            }
            "output" => values.output = Some(PathBuf::from(value)),
            other => {
                return Err(CliError::Validation(format!(
                    "config line {line_no}: unknown key '{other}'"
                )))
            }
        }
    }
    Ok(values)
}
