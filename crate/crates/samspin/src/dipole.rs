//! Dipole-dipole coupling tensors.
//!
//! Two evaluation routes for the 3×3 interaction tensor **D** (energies in
//! joules): the classical point-dipole formula, and a quadrature over a
//! discrete spin density in which one electron is delocalized while the other
//! stays a point dipole. Both share the kernel
//!
//! ```text
//! D_ij = C · ⟨(3 r_i r_j − δ_ij r²)/r⁵⟩,   C = (μ₀/4π)·g_e²·μB²
//! ```
//!
//! the SI equivalent of the atomic-unit prefactor α²·μB²·g_e². The g-factor
//! in the prefactor is fixed at the free-electron value.

use std::io::{BufRead, Write};

use nalgebra::{Matrix3, Vector3};

use crate::constants::{
    PhysicalConstants, BOHR_MAGNETON, FREE_ELECTRON_G, PLANCK_H,
    VACUUM_PERMEABILITY_OVER_4PI,
};
use crate::error::{Error, Result};

/// 3-vector of f64, SI meters unless stated otherwise.
pub type Vec3 = Vector3<f64>;

/// SI prefactor C = (μ₀/4π)·g_e²·μB², J·m³.
pub const DIPOLE_PREFACTOR: f64 =
    VACUUM_PERMEABILITY_OVER_4PI * FREE_ELECTRON_G * FREE_ELECTRON_G * BOHR_MAGNETON * BOHR_MAGNETON;

/// Minimum dipole-to-density-point distance, m. The kernel diverges as
/// r → 0; geometries closer than this are rejected.
pub const MIN_SEPARATION: f64 = 1e-12;

/// Which route produced a tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorMethod {
    ClassicalPointDipole,
    PointDipoleSpinDensity,
}

impl TensorMethod {
    /// Column value used in sweep CSV output.
    pub fn label(self) -> &'static str {
        match self {
            Self::ClassicalPointDipole => "classical",
            Self::PointDipoleSpinDensity => "density",
        }
    }
}

impl std::fmt::Display for TensorMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Symmetric traceless coupling tensor, components in joules.
#[derive(Debug, Clone, PartialEq)]
pub struct DipoleTensor {
    components: Matrix3<f64>,
    method: TensorMethod,
}

impl DipoleTensor {
    /// Wraps a raw matrix after checking symmetry (1e-12 relative) and
    /// tracelessness (1e-10 relative to the largest component).
    pub fn new(components: Matrix3<f64>, method: TensorMethod) -> Result<Self> {
        let max = components.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if !max.is_finite() {
            return Err(Error::InvalidParams(
                "dipole tensor has non-finite components".into(),
            ));
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                if (components[(i, j)] - components[(j, i)]).abs() > 1e-12 * max {
                    return Err(Error::InvalidParams(format!(
                        "dipole tensor is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        if components.trace().abs() > 1e-10 * max {
            return Err(Error::InvalidParams(format!(
                "dipole tensor has non-zero trace {}",
                components.trace()
            )));
        }
        Ok(Self { components, method })
    }

    pub fn components(&self) -> &Matrix3<f64> {
        &self.components
    }

    pub fn component(&self, i: usize, j: usize) -> f64 {
        self.components[(i, j)]
    }

    /// The zz component, J (signed).
    pub fn d_zz(&self) -> f64 {
        self.components[(2, 2)]
    }

    /// |D_zz|/h, MHz.
    pub fn d_zz_mhz(&self) -> f64 {
        self.d_zz().abs() / PLANCK_H / 1e6
    }

    pub fn trace(&self) -> f64 {
        self.components.trace()
    }

    pub fn method(&self) -> TensorMethod {
        self.method
    }
}

/// One weighted point of a discretized spin density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinPoint {
    /// Position, m.
    pub position: Vec3,
    /// Spin population carried by this point (may be negative).
    pub weight: f64,
}

/// Discrete spin density: weighted points summing to one unpaired electron.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinDensity {
    points: Vec<SpinPoint>,
    label: String,
}

impl SpinDensity {
    /// Tolerance on |Σw − 1| for a valid density.
    pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-6;

    pub fn new(points: Vec<SpinPoint>, label: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParams(
                "spin density must contain at least one point".into(),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.position.iter().all(|c| c.is_finite()) && p.weight.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "spin density point {i} has non-finite entries"
                )));
            }
        }
        let sum: f64 = points.iter().map(|p| p.weight).sum();
        if (sum - 1.0).abs() > Self::WEIGHT_SUM_TOLERANCE {
            return Err(Error::WeightSum { sum });
        }
        Ok(Self {
            points,
            label: label.into(),
        })
    }

    /// A single unit-weight point, equivalent to a point dipole.
    pub fn point(position: Vec3, label: impl Into<String>) -> Self {
        Self {
            points: vec![SpinPoint {
                position,
                weight: 1.0,
            }],
            label: label.into(),
        }
    }

    pub fn points(&self) -> &[SpinPoint] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    /// Density translated by `shift` (positions only).
    pub fn translated(&self, shift: Vec3) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| SpinPoint {
                    position: p.position + shift,
                    weight: p.weight,
                })
                .collect(),
            label: self.label.clone(),
        }
    }
}

/// Kernel matrix (3 r_i r_j − δ_ij r²)/r⁵ for one separation vector.
fn point_kernel(r: Vec3) -> Matrix3<f64> {
    let r2 = r.norm_squared();
    let r5 = r2 * r2 * r2.sqrt();
    let mut m = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let num = if i == j {
                3.0 * r[i] * r[j] - r2
            } else {
                3.0 * r[i] * r[j]
            };
            m[(i, j)] = num / r5;
        }
    }
    m
}

/// Classical point-dipole tensor for separation vector `r_vec` (m).
///
/// For r = (0, a, 0) this reduces to D_zz = D_xx = −C/a³, D_yy = +2C/a³ with
/// vanishing off-diagonal components.
pub fn classical_tensor(r_vec: Vec3) -> Result<DipoleTensor> {
    let r = r_vec.norm();
    if !(r > MIN_SEPARATION && r.is_finite()) {
        return Err(Error::SingularGeometry(format!(
            "separation |r| = {r} m must exceed {MIN_SEPARATION} m"
        )));
    }
    DipoleTensor::new(
        point_kernel(r_vec) * DIPOLE_PREFACTOR,
        TensorMethod::ClassicalPointDipole,
    )
}

/// Point-dipole–spin-density tensor: the kernel averaged over the density,
/// with r = r_e − r_M the electron position relative to the point dipole at
/// `dipole_position` (m).
pub fn spin_density_tensor(density: &SpinDensity, dipole_position: Vec3) -> Result<DipoleTensor> {
    let mut sum = Matrix3::zeros();
    for (i, p) in density.points().iter().enumerate() {
        let r = p.position - dipole_position;
        let dist = r.norm();
        if !(dist > MIN_SEPARATION && dist.is_finite()) {
            return Err(Error::SingularGeometry(format!(
                "dipole position within {MIN_SEPARATION} m of density point {i} (distance {dist} m)"
            )));
        }
        sum += point_kernel(r) * p.weight;
    }
    DipoleTensor::new(
        sum * DIPOLE_PREFACTOR,
        TensorMethod::PointDipoleSpinDensity,
    )
}

/// |D_zz|/ħ as angular frequency (rad/s), the coupling magnitude D entering
/// the level scheme.
pub fn coupling_frequency(tensor: &DipoleTensor, constants: &PhysicalConstants) -> f64 {
    tensor.d_zz().abs() / constants.reduced_planck
}

/// Default coupling for a separation `a` along y: |D_zz|/ħ of the classical
/// tensor, rad/s.
pub fn classical_coupling_at(separation: f64) -> Result<f64> {
    let tensor = classical_tensor(Vec3::new(0.0, separation, 0.0))?;
    Ok(coupling_frequency(&tensor, &PhysicalConstants::CODATA_2018))
}

/// Evaluation route for a distance sweep.
#[derive(Debug, Clone, Copy)]
pub enum SweepMethod<'a> {
    Classical,
    Density(&'a SpinDensity),
}

/// One row of a distance sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Separation, nm.
    pub a_nm: f64,
    /// |D_zz|/h, MHz.
    pub d_mhz: f64,
    pub method: TensorMethod,
    pub label: String,
}

/// |D_zz|/h over `n_points` separations evenly spaced in [a_min, a_max] (m),
/// with the point dipole placed at a·axis. Rows are ordered by increasing a.
pub fn sweep_distance(
    method: SweepMethod<'_>,
    a_min: f64,
    a_max: f64,
    n_points: usize,
    axis: Vec3,
) -> Result<Vec<SweepRow>> {
    if !(a_min > 0.0 && a_min < a_max && a_max.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "sweep range must satisfy 0 < a_min < a_max (got {a_min}..{a_max})"
        )));
    }
    if n_points < 2 {
        return Err(Error::InvalidParams(format!(
            "sweep needs at least 2 points (got {n_points})"
        )));
    }
    let norm = axis.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidParams("sweep axis must be non-zero".into()));
    }
    let axis = axis / norm;

    let step = (a_max - a_min) / (n_points - 1) as f64;
    let mut rows = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let a = a_min + i as f64 * step;
        let position = axis * a;
        let (tensor, label) = match method {
            SweepMethod::Classical => (classical_tensor(position)?, "point".to_string()),
            SweepMethod::Density(density) => (
                spin_density_tensor(density, position)?,
                density.label().to_string(),
            ),
        };
        rows.push(SweepRow {
            a_nm: a * 1e9,
            d_mhz: tensor.d_zz_mhz(),
            method: tensor.method(),
            label,
        });
    }
    Ok(rows)
}

/// CSV header for sweep tables.
pub const SWEEP_CSV_HEADER: &str = "a_nm,D_MHz,method,label";

/// Writes a sweep table as CSV. Values use shortest round-trip formatting so
/// a re-parse recovers them exactly.
pub fn write_sweep_csv(rows: &[SweepRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{}",
            row.a_nm,
            row.d_mhz,
            row.method.label(),
            row.label
        )?;
    }
    Ok(())
}

/// Reads a sweep table written by [`write_sweep_csv`]. Lines starting with
/// '#' are ignored.
pub fn parse_sweep_csv(reader: impl BufRead) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            if trimmed != SWEEP_CSV_HEADER {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected header '{SWEEP_CSV_HEADER}', got '{trimmed}'"),
                });
            }
            saw_header = true;
            continue;
        }
        // label is free text: split off the first three fields only
        let mut fields = trimmed.splitn(4, ',');
        let parse_f64 = |s: Option<&str>, name: &str| -> Result<f64> {
            s.ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("missing field '{name}'"),
            })?
            .parse()
            .map_err(|e| Error::Parse {
                line: line_no,
                message: format!("invalid {name}: {e}"),
            })
        };
        let a_nm = parse_f64(fields.next(), "a_nm")?;
        let d_mhz = parse_f64(fields.next(), "D_MHz")?;
        let method = match fields.next() {
            Some("classical") => TensorMethod::ClassicalPointDipole,
            Some("density") => TensorMethod::PointDipoleSpinDensity,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown method {other:?}"),
                })
            }
        };
        let label = fields.next().unwrap_or("").to_string();
        rows.push(SweepRow {
            a_nm,
            d_mhz,
            method,
            label,
        });
    }
    if !saw_header {
        return Err(Error::Parse {
            line: 0,
            message: "empty sweep table".into(),
        });
    }
    Ok(rows)
}

/// Meters per ångström. The density file format stores positions in Å; the
/// parser multiplies by this constant and the writer divides by the same
/// constant so an emit/re-parse cycle is bit-exact.
pub const ANGSTROM: f64 = 1e-10;

/// Parses the spin-density file format: '#' comment lines, and data lines of
/// exactly four whitespace-separated fields `x y z w` with x,y,z in Å and w a
/// dimensionless population. Weights must sum to 1 within 1e-6.
pub fn parse_spin_density(reader: impl BufRead) -> Result<SpinDensity> {
    let mut points = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 4 numeric fields, got {}", fields.len()),
            });
        }
        let mut values = [0.0f64; 4];
        for (v, field) in values.iter_mut().zip(&fields) {
            *v = field.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid number '{field}'"),
            })?;
        }
        points.push(SpinPoint {
            position: Vec3::new(values[0] * ANGSTROM, values[1] * ANGSTROM, values[2] * ANGSTROM),
            weight: values[3],
        });
    }
    if points.is_empty() {
        return Err(Error::InvalidParams(
            "spin density file contains no data lines".into(),
        ));
    }
    SpinDensity::new(points, "density")
}

/// Writes a density in the file format read by [`parse_spin_density`].
pub fn write_spin_density(density: &SpinDensity, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "# spin density ({} points): x y z w, positions in angstrom", density.points().len())?;
    for p in density.points() {
        writeln!(
            w,
            "{} {} {} {}",
            p.position[0] / ANGSTROM,
            p.position[1] / ANGSTROM,
            p.position[2] / ANGSTROM,
            p.weight
        )?;
    }
    Ok(())
}
