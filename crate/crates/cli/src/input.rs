//! Input documents: JSON for states, measurements and Bell tables, CSV for
//! disjunction datasets. Complex numbers are `[re, im]` pairs.

use std::fs;
use std::path::Path;

use conceptua::bell::{counts_to_table, JointProbabilityTable};
use conceptua::hilbert::{density_from_amplitudes, DensityState, ProjectiveMeasurement};
use conceptua::interference::DisjunctionDataset;
use conceptua::linalg::ComplexMatrix;
use conceptua::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Normalization tolerance for dataset columns read from files.
pub const COLUMN_TOL: f64 = 1e-6;

pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// Pure state; normalized on load.
    Amplitudes(Vec<ComplexPair>),
    /// Density matrix rows.
    Density(Vec<Vec<ComplexPair>>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSpec {
    /// Orthogonal basis vectors; the computational basis when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<ComplexPair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EbrInput {
    pub state: StateSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementSpec>,
    /// Second state for the perceptual-warp comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare_state: Option<StateSpec>,
}

fn complex(p: &ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl StateSpec {
    pub fn to_state(&self) -> Result<DensityState, CliError> {
        let state = match self {
            StateSpec::Amplitudes(a) => density_from_amplitudes(&a.iter().map(complex).collect::<Vec<_>>())?,
            StateSpec::Density(rows) => {
                let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(complex).collect()).collect();
                DensityState::new(ComplexMatrix::from_rows(&rows)?)?
            }
        };
        Ok(state)
    }
}

impl MeasurementSpec {
    pub fn to_measurement(&self, dim: usize) -> Result<ProjectiveMeasurement, CliError> {
        let m = match &self.basis {
            Some(basis) => {
                let vectors: Vec<Vec<Complex64>> = basis.iter().map(|v| v.iter().map(complex).collect()).collect();
                ProjectiveMeasurement::from_basis(&vectors)?
            }
            None => ProjectiveMeasurement::computational(dim)?,
        };
        if m.dim() != dim {
            return Err(CliError::Validation(format!(
                "measurement has {} outcomes but the state has dimension {dim}",
                m.dim()
            )));
        }
        Ok(match &self.groups {
            Some(groups) => m.with_groups(groups.clone())?,
            None => m,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TableSpec {
    Counts([u64; 4]),
    Probabilities([f64; 4]),
}

impl TableSpec {
    pub fn to_table(&self) -> Result<JointProbabilityTable, CliError> {
        Ok(match self {
            TableSpec::Counts(c) => counts_to_table(*c)?,
            TableSpec::Probabilities(p) => JointProbabilityTable::new(*p)?,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellTables {
    #[serde(rename = "AB", default, skip_serializing_if = "Option::is_none")]
    pub ab: Option<TableSpec>,
    #[serde(rename = "ABp", default, skip_serializing_if = "Option::is_none")]
    pub abp: Option<TableSpec>,
    #[serde(rename = "ApB", default, skip_serializing_if = "Option::is_none")]
    pub apb: Option<TableSpec>,
    #[serde(rename = "ApBp", default, skip_serializing_if = "Option::is_none")]
    pub apbp: Option<TableSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellInput {
    pub tables: BellTables,
}

impl BellInput {
    /// Tables in the order `AB, AB', A'B, A'B'`.
    pub fn to_tables(&self) -> Result<[JointProbabilityTable; 4], CliError> {
        let t = &self.tables;
        let get = |spec: &Option<TableSpec>, label: &str| match spec {
            Some(s) => s.to_table().map_err(|e| CliError::Validation(format!("table {label}: {e}"))),
            None => Err(CliError::Validation(format!("missing table {label}"))),
        };
        Ok([get(&t.ab, "AB")?, get(&t.abp, "ABp")?, get(&t.apb, "ApB")?, get(&t.apbp, "ApBp")?])
    }
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let bytes = read_bytes(path)?;
    serde_json::from_slice(&bytes).map_err(|e| CliError::parse(path.display().to_string(), e))
}

#[derive(Debug, Deserialize)]
struct DisjunctionRow {
    exemplar: String,
    mu_a: f64,
    mu_b: f64,
    mu_obs: f64,
}

/// Comma-separated `exemplar,mu_a,mu_b,mu_obs` with a header; `#` lines are
/// comments.
pub fn parse_disjunction_csv(bytes: &[u8], context: &str) -> Result<DisjunctionDataset, CliError> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(bytes);
    let mut exemplars = Vec::new();
    let (mut mu_a, mut mu_b, mut mu_obs) = (Vec::new(), Vec::new(), Vec::new());
    for row in reader.deserialize() {
        let row: DisjunctionRow = row.map_err(|e| CliError::parse(context, e))?;
        exemplars.push(row.exemplar);
        mu_a.push(row.mu_a);
        mu_b.push(row.mu_b);
        mu_obs.push(row.mu_obs);
    }
    Ok(DisjunctionDataset::with_tolerance(exemplars, mu_a, mu_b, mu_obs, COLUMN_TOL)?)
}

/// Parses `a,a',b,b'`. Each angle is a decimal number or a multiple of pi
/// such as `pi/4`, `-pi/2`, `3pi/4`, `0.5*pi`.
pub fn parse_angles(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated angles, got {}", parts.len()));
    }
    let mut out = [0.0; 4];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = parse_angle(p).ok_or_else(|| format!("cannot parse angle {p:?}"))?;
    }
    Ok(out)
}

fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(x) = s.parse::<f64>() {
        return x.is_finite().then_some(x);
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.trim().parse::<f64>().ok().filter(|d| *d != 0.0)?),
        None => (body, 1.0),
    };
    let coef = num.trim().strip_suffix("pi")?.trim().trim_end_matches('*').trim();
    let coef = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().ok()? };
    Some(sign * coef * std::f64::consts::PI / den)
}
