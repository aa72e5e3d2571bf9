//! Output assembly: significant-figure formatting, emission to stdout or a
//! file, and readers for every CSV layout the CLI emits so outputs stay
//! machine-consumable.

use std::path::Path;

use crate::config::CliError;

/// Formats with 4 significant figures for human-facing frequency output.
/// Data tables keep full shortest-round-trip precision instead.
pub fn sig4(x: f64) -> String {
    if x == 0.0 {
        return "0.000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude.abs() >= 7 {
        format!("{x:.3e}")
    } else {
        let decimals = (3 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

/// Writes `content` to `output` or stdout.
pub fn emit(content: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    field.parse().map_err(|e| {
        CliError::Validation(format!("line {line}: invalid value '{field}': {e}"))
    })
}

/// Header of the `levels` CSV output.
pub const LEVELS_CSV_HEADER: &str = "kind,label,value_mhz";

/// Reads `kind,label,value_mhz` rows emitted by the levels command.
pub fn parse_levels_csv(text: &str) -> Result<Vec<(String, String, f64)>, CliError> {
    let mut rows = Vec::new();
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, line)) if line == LEVELS_CSV_HEADER => {}
        other => {
            return Err(CliError::Validation(format!(
                "expected levels header, got {other:?}"
            )))
        }
    }
    for (n, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::Validation(format!(
                "line {n}: expected 3 fields"
            )));
        }
        rows.push((
            fields[0].to_string(),
            fields[1].to_string(),
            parse_field(fields[2], n)?,
        ));
    }
    Ok(rows)
}

/// Header of the `dtensor` CSV output.
pub const DTENSOR_CSV_HEADER: &str = "component,value_j";

/// Reads `component,value_j` rows emitted by the dtensor command.
pub fn parse_dtensor_csv(text: &str) -> Result<Vec<(String, f64)>, CliError> {
    let mut rows = Vec::new();
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, line)) if line == DTENSOR_CSV_HEADER => {}
        other => {
            return Err(CliError::Validation(format!(
                "expected dtensor header, got {other:?}"
            )))
        }
    }
    for (n, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(CliError::Validation(format!(
                "line {n}: expected 2 fields"
            )));
        }
        rows.push((fields[0].to_string(), parse_field(fields[1], n)?));
    }
    Ok(rows)
}

/// Header of the `adiabatic` CSV output.
pub const ADIABATIC_CSV_HEADER: &str = "eta,eta_max,verdict";

/// Reads the single `eta,eta_max,verdict` row of the adiabatic command.
pub fn parse_adiabatic_csv(text: &str) -> Result<(f64, f64, String), CliError> {
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, line)) if line == ADIABATIC_CSV_HEADER => {}
        other => {
            return Err(CliError::Validation(format!(
                "expected adiabatic header, got {other:?}"
            )))
        }
    }
    let (n, line) = lines
        .next()
        .ok_or_else(|| CliError::Validation("missing adiabatic row".into()))?;
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 3 {
        return Err(CliError::Validation(format!("line {n}: expected 3 fields")));
    }
    Ok((
        parse_field(fields[0], n)?,
        parse_field(fields[1], n)?,
        fields[2].to_string(),
    ))
}

/// Header of the `gshift` CSV output.
pub const GSHIFT_CSV_HEADER: &str = "shift_ppm,g";

/// Reads `shift_ppm,g` rows emitted by the gshift command.
pub fn parse_gshift_csv(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut rows = Vec::new();
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, line)) if line == GSHIFT_CSV_HEADER => {}
        other => {
            return Err(CliError::Validation(format!(
                "expected gshift header, got {other:?}"
            )))
        }
    }
    for (n, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(CliError::Validation(format!(
                "line {n}: expected 2 fields"
            )));
        }
        rows.push((parse_field(fields[0], n)?, parse_field(fields[1], n)?));
    }
    Ok(rows)
}
