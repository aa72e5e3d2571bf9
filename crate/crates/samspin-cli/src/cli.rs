//! Argument definitions and command implementations.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use samspin::constants::{angular_to_mhz, PhysicalConstants};
use samspin::dipole::{
    classical_tensor, parse_spin_density, spin_density_tensor, sweep_distance, write_sweep_csv,
    SweepMethod, SweepRow, Vec3,
};
use samspin::dynamics::DEFAULT_MATCH_TOLERANCE;
use samspin::oscar::{adiabaticity, monte_carlo};
use samspin::spin_system::{energy_levels, g_from_shift, transition_frequencies, BasisState};
use samspin::{prepare_bell, DipoleTensor, SpinDensity};

use crate::config::{parse_config_file, CliError, Format, Overrides, RunConfig};
use crate::output::{emit, sig4, ADIABATIC_CSV_HEADER, DTENSOR_CSV_HEADER, GSHIFT_CSV_HEADER, LEVELS_CSV_HEADER};

impl From<std::fmt::Error> for CliError {
    fn from(err: std::fmt::Error) -> Self {
        CliError::Validation(err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "samspin",
    version,
    about = "Two-spin-qubit simulator: level structure, dipolar coupling, \
             entangled-state preparation, and cantilever-readout statistics"
)]
pub struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write results here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for stochastic commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

/// System-parameter flags shared by the physics commands.
#[derive(Args, Clone, Default)]
pub struct SystemArgs {
    /// Static field at the second spin [T].
    #[arg(long, allow_negative_numbers = true)]
    pub b0: Option<f64>,

    /// Field gradient magnitude [T/m].
    #[arg(long, allow_negative_numbers = true)]
    pub gradient: Option<f64>,

    /// Spin separation [nm].
    #[arg(long, allow_negative_numbers = true)]
    pub separation_nm: Option<f64>,

    /// g-tensor zz component.
    #[arg(long, allow_negative_numbers = true)]
    pub g_zz: Option<f64>,

    /// Dipolar coupling [MHz]; classical value at the separation when
    /// omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub coupling_mhz: Option<f64>,
}

impl SystemArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            b0: self.b0,
            gradient: self.gradient,
            separation_nm: self.separation_nm,
            g_zz: self.g_zz,
            coupling_mhz: self.coupling_mhz,
            ..Default::default()
        }
    }
}

/// Adiabaticity flags.
#[derive(Args, Clone, Default)]
pub struct AdiabaticArgs {
    /// rf amplitude [T].
    #[arg(long, allow_negative_numbers = true)]
    pub b1: Option<f64>,

    /// Peak effective-field sweep amplitude [T].
    #[arg(long, allow_negative_numbers = true)]
    pub delta_b: Option<f64>,

    /// Cantilever frequency [kHz].
    #[arg(long, allow_negative_numbers = true)]
    pub fc_khz: Option<f64>,

    /// Threshold on the sweep-rate ratio.
    #[arg(long, allow_negative_numbers = true)]
    pub eta_max: Option<f64>,
}

impl AdiabaticArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            b1: self.b1,
            delta_b: self.delta_b,
            fc_khz: self.fc_khz,
            eta_max: self.eta_max,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TensorMethodArg {
    Classical,
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMethodArg {
    Classical,
    Density,
    Both,
}

fn parse_axis(s: &str) -> Result<Vec3, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("axis must be 'x,y,z', got '{s}'"));
    }
    let mut v = [0.0f64; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid axis component '{part}'"))?;
    }
    let axis = Vec3::new(v[0], v[1], v[2]);
    if !(axis.norm() > 0.0 && axis.norm().is_finite()) {
        return Err("axis must be a non-zero vector".to_string());
    }
    Ok(axis)
}

#[derive(Subcommand)]
pub enum Command {
    /// Energy levels and the four transition frequencies.
    #[command(visible_alias = "freqs")]
    Levels {
        #[command(flatten)]
        system: SystemArgs,
    },

    /// Dipole-dipole coupling tensor for one geometry.
    Dtensor {
        #[command(flatten)]
        system: SystemArgs,

        #[arg(long, value_enum, default_value_t = TensorMethodArg::Classical)]
        method: TensorMethodArg,

        /// Spin-density file for the density method.
        #[arg(long, value_name = "PATH")]
        density: Option<PathBuf>,

        /// Separation direction as "x,y,z".
        #[arg(long, default_value = "0,1,0", value_parser = parse_axis)]
        axis: Vec3,
    },

    /// Sweep |D_zz|/h over the spin separation.
    Sweep {
        #[arg(long, value_enum, default_value_t = SweepMethodArg::Classical)]
        method: SweepMethodArg,

        /// Smallest separation [nm].
        #[arg(long, default_value_t = 1.0)]
        a_min_nm: f64,

        /// Largest separation [nm].
        #[arg(long, default_value_t = 2.0)]
        a_max_nm: f64,

        /// Number of rows.
        #[arg(long, default_value_t = 11, value_parser = clap::value_parser!(u32).range(2..))]
        points: u32,

        /// Separation direction as "x,y,z".
        #[arg(long, default_value = "0,1,0", value_parser = parse_axis)]
        axis: Vec3,

        /// Spin-density file for the density method.
        #[arg(long, value_name = "PATH")]
        density: Option<PathBuf>,
    },

    /// Prepare the entangled state and tally verification outcomes.
    Entangle {
        #[command(flatten)]
        system: SystemArgs,

        /// Number of prepare-and-measure trials.
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },

    /// Check the adiabatic-reversal condition.
    Adiabatic {
        #[command(flatten)]
        adiabatic: AdiabaticArgs,
    },

    /// Convert g-tensor shifts in ppm to absolute g values.
    Gshift {
        /// Shifts in ppm.
        #[arg(required = true, allow_negative_numbers = true)]
        ppm: Vec<f64>,
    },
}

/// Resolves configuration (defaults, then file, then flags) and runs the
/// selected command.
pub fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        parse_config_file(&text)?.apply_to(&mut config);
    }
    Overrides {
        seed: cli.seed,
        format: cli.format,
        output: cli.output.clone(),
        ..Default::default()
    }
    .apply_to(&mut config);

    let (content, code) = match cli.command {
        Command::Levels { system } => {
            system.overrides().apply_to(&mut config);
            (cmd_levels(&config)?, ExitCode::SUCCESS)
        }
        Command::Dtensor {
            system,
            method,
            density,
            axis,
        } => {
            system.overrides().apply_to(&mut config);
            if let Some(path) = density {
                config.density_file = Some(path);
            }
            (cmd_dtensor(&config, method, axis)?, ExitCode::SUCCESS)
        }
        Command::Sweep {
            method,
            a_min_nm,
            a_max_nm,
            points,
            axis,
            density,
        } => {
            if let Some(path) = density {
                config.density_file = Some(path);
            }
            (
                cmd_sweep(&config, method, a_min_nm, a_max_nm, points as usize, axis)?,
                ExitCode::SUCCESS,
            )
        }
        Command::Entangle { system, trials } => {
            system.overrides().apply_to(&mut config);
            (cmd_entangle(&config, trials)?, ExitCode::SUCCESS)
        }
        Command::Adiabatic { adiabatic } => {
            adiabatic.overrides().apply_to(&mut config);
            cmd_adiabatic(&config)?
        }
        Command::Gshift { ppm } => (cmd_gshift(&config, &ppm)?, ExitCode::SUCCESS),
    };
    emit(&content, config.output.as_deref())?;
    Ok(code)
}

fn cmd_levels(config: &RunConfig) -> Result<String, CliError> {
    let params = config.system_params()?;
    let levels = energy_levels(&params);
    let freqs = transition_frequencies(&params);
    let splitting_mhz = angular_to_mhz(freqs.coupling_splitting());
    match config.format {
        Format::Csv => {
            let mut out = String::new();
            writeln!(
                out,
                "# coupling check: w2_1 - w2_0 = w1_1 - w1_0 = {} MHz (coupling D)",
                sig4(splitting_mhz)
            )?;
            writeln!(out, "{LEVELS_CSV_HEADER}")?;
            for (state, e) in levels.iter() {
                writeln!(out, "level,{},{}", state.label(), sig4(angular_to_mhz(e)))?;
            }
            for (t, f) in freqs.all() {
                writeln!(out, "transition,{},{}", t.label(), sig4(angular_to_mhz(f)))?;
            }
            Ok(out)
        }
        Format::Json => {
            let value = serde_json::json!({
                "params": {
                    "b0_t": config.b0,
                    "gradient_t_per_m": config.gradient,
                    "separation_nm": config.separation_nm,
                    "g_zz": config.g_zz,
                    "coupling_mhz": config
                        .coupling_mhz
                        .unwrap_or_else(|| angular_to_mhz(params.coupling())),
                },
                "levels_mhz": {
                    "S00": angular_to_mhz(levels.level(BasisState::S00)),
                    "S01": angular_to_mhz(levels.level(BasisState::S01)),
                    "S10": angular_to_mhz(levels.level(BasisState::S10)),
                    "S11": angular_to_mhz(levels.level(BasisState::S11)),
                },
                "transitions_mhz": {
                    "w2_0": angular_to_mhz(freqs.spin2_neighbor_ground()),
                    "w1_0": angular_to_mhz(freqs.spin1_neighbor_ground()),
                    "w2_1": angular_to_mhz(freqs.spin2_neighbor_excited()),
                    "w1_1": angular_to_mhz(freqs.spin1_neighbor_excited()),
                },
                "coupling_check_mhz": {
                    "splitting": splitting_mhz,
                    "coupling": angular_to_mhz(params.coupling()),
                },
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&value)?))
        }
    }
}

fn load_density(config: &RunConfig) -> Result<SpinDensity, CliError> {
    let path = config.density_file.as_ref().ok_or_else(|| {
        CliError::Validation(
            "density method requires a spin-density file (--density or density_file)".into(),
        )
    })?;
    let file = std::fs::File::open(path).map_err(|e| {
        CliError::Validation(format!("cannot open density file {}: {e}", path.display()))
    })?;
    let mut density = parse_spin_density(std::io::BufReader::new(file))?;
    if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
        density.relabel(stem);
    }
    Ok(density)
}

fn cmd_dtensor(
    config: &RunConfig,
    method: TensorMethodArg,
    axis: Vec3,
) -> Result<String, CliError> {
    let direction = axis / axis.norm();
    let position = direction * config.separation_m();
    let tensor: DipoleTensor = match method {
        TensorMethodArg::Classical => classical_tensor(position)?,
        TensorMethodArg::Density => {
            let density = load_density(config)?;
            spin_density_tensor(&density, position)?
        }
    };
    match config.format {
        Format::Csv => {
            let mut out = String::new();
            writeln!(
                out,
                "# method: {}, a = {} nm, |D_zz|/h = {} MHz",
                tensor.method(),
                config.separation_nm,
                sig4(tensor.d_zz_mhz())
            )?;
            writeln!(out, "{DTENSOR_CSV_HEADER}")?;
            let names = ["x", "y", "z"];
            for i in 0..3 {
                for j in 0..3 {
                    writeln!(out, "{}{},{}", names[i], names[j], tensor.component(i, j))?;
                }
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<Vec<f64>> = (0..3)
                .map(|i| (0..3).map(|j| tensor.component(i, j)).collect())
                .collect();
            let value = serde_json::json!({
                "method": tensor.method().label(),
                "separation_nm": config.separation_nm,
                "components_j": rows,
                "d_zz_mhz": tensor.d_zz_mhz(),
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&value)?))
        }
    }
}

fn cmd_sweep(
    config: &RunConfig,
    method: SweepMethodArg,
    a_min_nm: f64,
    a_max_nm: f64,
    points: usize,
    axis: Vec3,
) -> Result<String, CliError> {
    let (a_min, a_max) = (a_min_nm * 1e-9, a_max_nm * 1e-9);
    let rows: Vec<SweepRow> = match method {
        SweepMethodArg::Classical => {
            sweep_distance(SweepMethod::Classical, a_min, a_max, points, axis)?
        }
        SweepMethodArg::Density => {
            let density = load_density(config)?;
            sweep_distance(SweepMethod::Density(&density), a_min, a_max, points, axis)?
        }
        SweepMethodArg::Both => {
            let classical = sweep_distance(SweepMethod::Classical, a_min, a_max, points, axis)?;
            let density = load_density(config)?;
            let delocalized =
                sweep_distance(SweepMethod::Density(&density), a_min, a_max, points, axis)?;
            // interleave by separation, classical first at each a
            classical
                .into_iter()
                .zip(delocalized)
                .flat_map(|(c, d)| [c, d])
                .collect()
        }
    };
    match config.format {
        Format::Csv => {
            let mut buffer = Vec::new();
            write_sweep_csv(&rows, &mut buffer)?;
            Ok(String::from_utf8(buffer).expect("sweep csv is utf-8"))
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "a_nm": r.a_nm,
                        "d_mhz": r.d_mhz,
                        "method": r.method.label(),
                        "label": r.label,
                    })
                })
                .collect();
            let value = serde_json::json!({ "rows": rows });
            Ok(format!("{}\n", serde_json::to_string_pretty(&value)?))
        }
    }
}

fn cmd_entangle(config: &RunConfig, trials: u64) -> Result<String, CliError> {
    let params = config.system_params()?;
    let bell = prepare_bell(&params, DEFAULT_MATCH_TOLERANCE)?;
    let populations = bell.populations();
    let concurrence = samspin::concurrence(&bell);
    let histogram = monte_carlo(|| bell.clone(), &params, trials, config.seed)?;
    match config.format {
        Format::Csv => {
            let mut out = String::new();
            writeln!(
                out,
                "# populations: S00={:.6},S01={:.6},S10={:.6},S11={:.6}",
                populations[0], populations[1], populations[2], populations[3]
            )?;
            writeln!(out, "# concurrence: {concurrence:.6}")?;
            writeln!(out, "# trials: {trials} seed: {}", config.seed)?;
            let mut buffer = Vec::new();
            histogram.write_csv(&mut buffer)?;
            out.push_str(&String::from_utf8(buffer).expect("histogram csv is utf-8"));
            Ok(out)
        }
        Format::Json => {
            let hist: serde_json::Value = histogram
                .counts()
                .iter()
                .map(|(o, c)| {
                    (
                        o.label().to_string(),
                        serde_json::json!({
                            "count": c,
                            "fraction": histogram.fraction(*o),
                        }),
                    )
                })
                .collect::<serde_json::Map<_, _>>()
                .into();
            let value = serde_json::json!({
                "populations": {
                    "S00": populations[0],
                    "S01": populations[1],
                    "S10": populations[2],
                    "S11": populations[3],
                },
                "concurrence": concurrence,
                "trials": trials,
                "seed": config.seed,
                "histogram": hist,
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&value)?))
        }
    }
}

fn cmd_adiabatic(config: &RunConfig) -> Result<(String, ExitCode), CliError> {
    let params = config.adiabatic_params()?;
    let check = adiabaticity(&params, &PhysicalConstants::CODATA_2018);
    let verdict = if check.adiabatic {
        "ADIABATIC"
    } else {
        "VIOLATED"
    };
    let content = match config.format {
        Format::Csv => {
            let mut out = String::new();
            writeln!(
                out,
                "# eta = {} (threshold {}): {verdict}",
                sig4(check.eta),
                sig4(check.eta_max)
            )?;
            writeln!(out, "{ADIABATIC_CSV_HEADER}")?;
            writeln!(out, "{},{},{verdict}", check.eta, check.eta_max)?;
            out
        }
        Format::Json => {
            let value = serde_json::json!({
                "b1_t": config.b1,
                "delta_b_t": config.delta_b,
                "fc_khz": config.fc_khz,
                "eta": check.eta,
                "eta_max": check.eta_max,
                "adiabatic": check.adiabatic,
                "verdict": verdict,
            });
            format!("{}\n", serde_json::to_string_pretty(&value)?)
        }
    };
    let code = if check.adiabatic {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    };
    Ok((content, code))
}

fn cmd_gshift(config: &RunConfig, ppm: &[f64]) -> Result<String, CliError> {
    let constants = PhysicalConstants::CODATA_2018;
    match config.format {
        Format::Csv => {
            let mut out = String::new();
            writeln!(out, "{GSHIFT_CSV_HEADER}")?;
            for &shift in ppm {
                writeln!(out, "{shift},{:.6}", g_from_shift(shift, &constants))?;
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = ppm
                .iter()
                .map(|&shift| {
                    serde_json::json!({
                        "shift_ppm": shift,
                        "g": g_from_shift(shift, &constants),
                    })
                })
                .collect();
            let value = serde_json::json!({ "rows": rows });
            Ok(format!("{}\n", serde_json::to_string_pretty(&value)?))
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Validation(err.to_string())
    }
}
