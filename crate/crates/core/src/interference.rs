//! Disjunction interference: exemplar-selection probabilities for a concept
//! disjunction "A or B" modeled as an equal-weight superposition of the two
//! concept states,
//!
//! `mu_obs(k) = (mu_a(k) + mu_b(k)) / 2 + sqrt(mu_a(k) mu_b(k)) cos(theta_k)`.
//!
//! Values above the classical average are overextension, below it
//! underextension.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Allowed `|sum_k sqrt(mu_a mu_b) cos theta_k|` for a normalizable prediction.
pub const CONSISTENCY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DisjunctionDataset {
    exemplars: Vec<String>,
    mu_a: Vec<f64>,
    mu_b: Vec<f64>,
    mu_obs: Vec<f64>,
}

impl DisjunctionDataset {
    pub fn new(exemplars: Vec<String>, mu_a: Vec<f64>, mu_b: Vec<f64>, mu_obs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(exemplars, mu_a, mu_b, mu_obs, NORMALIZATION_TOL)
    }

    /// Like [`DisjunctionDataset::new`] with a custom normalization tolerance.
    pub fn with_tolerance(
        exemplars: Vec<String>,
        mu_a: Vec<f64>,
        mu_b: Vec<f64>,
        mu_obs: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self> {
        let n = exemplars.len();
        if n == 0 {
            return Err(Error::invalid("dataset needs at least one exemplar"));
        }
        for (name, col) in [("mu_a", &mu_a), ("mu_b", &mu_b), ("mu_obs", &mu_obs)] {
            if col.len() != n {
                return Err(Error::invalid(format!("column {name} has {} entries, expected {n}", col.len())));
            }
            if let Some(k) = col.iter().position(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::invalid(format!("column {name} has a negative or non-finite entry at row {k}")));
            }
            let sum: f64 = col.iter().sum();
            if (sum - 1.0).abs() > tolerance {
                return Err(Error::invalid(format!("column {name} sums to {sum}, expected 1")));
            }
        }
        Ok(Self { exemplars, mu_a, mu_b, mu_obs })
    }

    pub fn exemplars(&self) -> &[String] {
        &self.exemplars
    }

    pub fn mu_a(&self) -> &[f64] {
        &self.mu_a
    }

    pub fn mu_b(&self) -> &[f64] {
        &self.mu_b
    }

    pub fn mu_obs(&self) -> &[f64] {
        &self.mu_obs
    }

    pub fn len(&self) -> usize {
        self.exemplars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exemplars.is_empty()
    }
}

/// `(mu_a + mu_b) / 2`, element-wise.
pub fn classical_mixture(mu_a: &[f64], mu_b: &[f64]) -> Result<Vec<f64>> {
    if mu_a.len() != mu_b.len() {
        return Err(Error::DimensionMismatch { expected: mu_a.len(), found: mu_b.len() });
    }
    Ok(mu_a.iter().zip(mu_b).map(|(a, b)| 0.5 * (a + b)).collect())
}

/// `mu_obs - (mu_a + mu_b) / 2`.
pub fn interference_deviation(dataset: &DisjunctionDataset) -> Vec<f64> {
    dataset
        .mu_obs
        .iter()
        .zip(dataset.mu_a.iter().zip(&dataset.mu_b))
        .map(|(o, (a, b))| o - 0.5 * (a + b))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSolution {
    pub cos_theta: Vec<f64>,
    /// The raw ratio left `[-1, 1]` and was clamped.
    pub clamped: Vec<bool>,
    /// `mu_a(k) mu_b(k) = 0` while the deviation is nonzero.
    pub unfittable: Vec<bool>,
    /// Deviation the model cannot reproduce at each exemplar.
    pub residuals: Vec<f64>,
    /// `sum_k sqrt(mu_a(k) mu_b(k)) cos theta_k`.
    pub consistency: f64,
}

impl PhaseSolution {
    pub fn any_clamped(&self) -> bool {
        self.clamped.iter().any(|&c| c)
    }
}

/// Per-exemplar closed-form phases `cos theta_k = d_k / sqrt(mu_a mu_b)`.
pub fn solve_phases(dataset: &DisjunctionDataset) -> PhaseSolution {
    let deviation = interference_deviation(dataset);
    let n = dataset.len();
    let mut cos_theta = Vec::with_capacity(n);
    let mut clamped = Vec::with_capacity(n);
    let mut unfittable = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let mut consistency = 0.0;
    for k in 0..n {
        let d = deviation[k];
        let amp = math::sqrt(dataset.mu_a[k] * dataset.mu_b[k]);
        if amp > 0.0 {
            let raw = d / amp;
            if raw.abs() > 1.0 {
                cos_theta.push(raw.signum());
                clamped.push(true);
                residuals.push(d.abs() - amp);
            } else {
                cos_theta.push(raw);
                clamped.push(false);
                residuals.push(0.0);
            }
            unfittable.push(false);
        } else {
            cos_theta.push(0.0);
            clamped.push(false);
            unfittable.push(d != 0.0);
            residuals.push(d.abs());
        }
        consistency += amp * cos_theta[k];
    }
    PhaseSolution { cos_theta, clamped, unfittable, residuals, consistency }
}

/// Forward model. Requires the phases to keep the prediction normalized.
pub fn predict_disjunction(mu_a: &[f64], mu_b: &[f64], cos_theta: &[f64]) -> Result<Vec<f64>> {
    let n = mu_a.len();
    if mu_b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: mu_b.len() });
    }
    if cos_theta.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: cos_theta.len() });
    }
    if let Some(k) = cos_theta.iter().position(|c| !(c.abs() <= 1.0)) {
        return Err(Error::invalid(format!("cos theta at exemplar {k} is outside [-1, 1]")));
    }
    let amps: Vec<f64> = mu_a.iter().zip(mu_b).map(|(a, b)| math::sqrt(a * b)).collect();
    let consistency: f64 = amps.iter().zip(cos_theta).map(|(w, c)| w * c).sum();
    if consistency.abs() > CONSISTENCY_TOL {
        return Err(Error::NonNormalizablePhases(consistency));
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let value = 0.5 * (mu_a[k] + mu_b[k]) + amps[k] * cos_theta[k];
        if value < -1e-9 {
            return Err(Error::ModelViolation { index: k, value });
        }
        out.push(value);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    Overextended,
    Underextended,
    Classical,
}

impl Extension {
    pub fn as_str(self) -> &'static str {
        match self {
            Extension::Overextended => "overextended",
            Extension::Underextended => "underextended",
            Extension::Classical => "classical",
        }
    }
}

pub fn classify_extension(dataset: &DisjunctionDataset, tolerance: f64) -> Result<Vec<Extension>> {
    if !(tolerance >= 0.0) {
        return Err(Error::invalid("tolerance must be nonnegative"));
    }
    Ok(interference_deviation(dataset)
        .into_iter()
        .map(|d| {
            if d > tolerance {
                Extension::Overextended
            } else if d < -tolerance {
                Extension::Underextended
            } else {
                Extension::Classical
            }
        })
        .collect())
}

/// Small synthetic eight-exemplar dataset ("Fruit" / "Vegetable" style),
/// built from consistent phases. It is not experimental data.
pub fn synthetic_demo() -> DisjunctionDataset {
    let exemplars = ["apple", "banana", "tomato", "olive", "pumpkin", "carrot", "broccoli", "lentil"];
    let mu_a = [0.30, 0.25, 0.12, 0.08, 0.07, 0.06, 0.06, 0.06];
    let mu_b = [0.04, 0.04, 0.14, 0.10, 0.16, 0.20, 0.22, 0.10];
    let raw = [0.6, -0.4, 0.9, 0.3, -0.5, -0.7, 0.2, -0.1];
    let amps: Vec<f64> = mu_a.iter().zip(&mu_b).map(|(a, b)| math::sqrt(a * b)).collect();
    let cos = project_consistent(&raw, &amps);
    let mu_obs: Vec<f64> = (0..exemplars.len())
        .map(|k| 0.5 * (mu_a[k] + mu_b[k]) + amps[k] * cos[k])
        .collect();
    DisjunctionDataset::new(
        exemplars.iter().map(|s| String::from(*s)).collect(),
        mu_a.to_vec(),
        mu_b.to_vec(),
        mu_obs,
    )
    .expect("synthetic demo dataset is valid")
}

/// Removes the component of `raw` along `amps` and rescales into `[-1, 1]`,
/// so that `sum amps * cos = 0`.
pub fn project_consistent(raw: &[f64], amps: &[f64]) -> Vec<f64> {
    let ww: f64 = amps.iter().map(|w| w * w).sum();
    let wc: f64 = amps.iter().zip(raw).map(|(w, c)| w * c).sum();
    let mut cos: Vec<f64> = raw.iter().zip(amps).map(|(c, w)| c - wc / ww * w).collect();
    let peak = cos.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if peak > 1.0 {
        for c in &mut cos {
            *c /= peak;
        }
    }
    cos
}
