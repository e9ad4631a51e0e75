//! Density states, projective measurements, generalized Gell-Mann generators
//! and the trace-formula Born rule.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::math;
use crate::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const PROJECTOR_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: ComplexMatrix,
}

impl DensityState {
    /// Validates `matrix` against the density-operator invariants.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.dim();
        if n < 2 {
            return Err(Error::invalid("density state needs dimension >= 2"));
        }
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {} + {}i, expected 1", tr.re, tr.im)));
        }
        let min_eig = matrix.hermitian_eigenvalues()[0];
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { matrix })
    }

    /// `I / n`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(n).scale_real(1.0 / n as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `tr(rho^2)`; 1 for pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }
}

/// Rank-1 projector onto the normalized `amps`.
pub fn density_from_amplitudes(amps: &[Complex64]) -> Result<DensityState> {
    let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
        return Err(Error::invalid("amplitude vector must have nonzero finite norm"));
    }
    let norm = math::sqrt(norm_sqr);
    let unit: Vec<Complex64> = amps.iter().map(|z| z / norm).collect();
    DensityState::new(ComplexMatrix::outer(&unit))
}

/// Complete set of orthogonal rank-1 projectors, optionally partitioned into
/// outcome groups for degenerate measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    projectors: Vec<ComplexMatrix>,
    groups: Option<Vec<Vec<usize>>>,
}

impl ProjectiveMeasurement {
    pub fn new(projectors: Vec<ComplexMatrix>, groups: Option<Vec<Vec<usize>>>) -> Result<Self> {
        let n = projectors.len();
        if n < 2 {
            return Err(Error::invalid("measurement needs at least two outcomes"));
        }
        for (i, p) in projectors.iter().enumerate() {
            if p.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
            }
            if p.hermiticity_error() > PROJECTOR_TOL {
                return Err(Error::invalid(format!("projector {i} is not Hermitian")));
            }
            if (p * p).max_abs_diff(p) > PROJECTOR_TOL {
                return Err(Error::invalid(format!("projector {i} is not idempotent")));
            }
            if (p.trace().re - 1.0).abs() > PROJECTOR_TOL {
                return Err(Error::invalid(format!("projector {i} is not rank one")));
            }
        }
        let zero = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if (&projectors[i] * &projectors[j]).max_abs_diff(&zero) > PROJECTOR_TOL {
                    return Err(Error::invalid(format!("projectors {i} and {j} are not orthogonal")));
                }
            }
        }
        let sum = projectors.iter().fold(zero, |acc, p| &acc + p);
        if sum.max_abs_diff(&ComplexMatrix::identity(n)) > PROJECTOR_TOL {
            return Err(Error::invalid("projectors do not sum to the identity"));
        }
        if let Some(groups) = &groups {
            validate_groups(groups, n)?;
        }
        Ok(Self { projectors, groups })
    }

    /// Projectors onto the (normalized) basis vectors.
    pub fn from_basis(vectors: &[Vec<Complex64>]) -> Result<Self> {
        let n = vectors.len();
        let mut projectors = Vec::with_capacity(n);
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
            let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if !(norm_sqr > 0.0) {
                return Err(Error::invalid(format!("basis vector {i} is zero")));
            }
            let norm = math::sqrt(norm_sqr);
            let unit: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
            projectors.push(ComplexMatrix::outer(&unit));
        }
        Self::new(projectors, None)
    }

    /// Measurement in the computational basis of `C^n`.
    pub fn computational(n: usize) -> Result<Self> {
        let basis: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                let mut v = vec![Complex64::new(0.0, 0.0); n];
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        Self::from_basis(&basis)
    }

    pub fn with_groups(self, groups: Vec<Vec<usize>>) -> Result<Self> {
        validate_groups(&groups, self.projectors.len())?;
        Ok(Self { groups: Some(groups), ..self })
    }

    pub fn dim(&self) -> usize {
        self.projectors.len()
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn groups(&self) -> Option<&[Vec<usize>]> {
        self.groups.as_deref()
    }

    /// Index of the group containing `outcome`, if groups are defined.
    pub fn group_of(&self, outcome: usize) -> Option<usize> {
        self.groups.as_ref()?.iter().position(|g| g.contains(&outcome))
    }

    /// `sum_{i in group} P_i`.
    pub fn group_projector(&self, group: &[usize]) -> Result<ComplexMatrix> {
        let n = self.dim();
        let mut acc = ComplexMatrix::zeros(n);
        for &i in group {
            let p = self.projectors.get(i).ok_or_else(|| Error::invalid(format!("outcome {i} out of range")))?;
            acc = &acc + p;
        }
        Ok(acc)
    }
}

fn validate_groups(groups: &[Vec<usize>], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for g in groups {
        if g.is_empty() {
            return Err(Error::invalid("outcome groups must be nonempty"));
        }
        for &i in g {
            if i >= n {
                return Err(Error::invalid(format!("outcome {i} out of range in groups")));
            }
            if seen[i] {
                return Err(Error::invalid(format!("outcome {i} appears in more than one group")));
            }
            seen[i] = true;
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::invalid(format!("outcome {i} is not covered by any group")));
    }
    Ok(())
}

/// Traceless Hermitian generators with `tr(L_i L_j) = 2 delta_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Generalized Gell-Mann matrices for SU(n).
///
/// Order: symmetric off-diagonal pairs `(j, k)`, `j < k`, lexicographic;
/// then the antisymmetric pairs in the same order; then the `n - 1` diagonal
/// generators.
pub fn gell_mann_basis(n: usize) -> Result<GeneratorBasis> {
    if n < 2 {
        return Err(Error::invalid("generator basis needs n >= 2"));
    }
    let one = Complex64::new(1.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| ((j + 1)..n).map(move |k| (j, k))).collect();
    let mut generators = Vec::with_capacity(n * n - 1);
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(n);
        m[(j, k)] = one;
        m[(k, j)] = one;
        generators.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(n);
        m[(j, k)] = -i_unit;
        m[(k, j)] = i_unit;
        generators.push(m);
    }
    for l in 1..n {
        let norm = math::sqrt(2.0 / (l * (l + 1)) as f64);
        let mut m = ComplexMatrix::zeros(n);
        for d in 0..l {
            m[(d, d)] = Complex64::new(norm, 0.0);
        }
        m[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        generators.push(m);
    }
    Ok(GeneratorBasis { dim: n, generators })
}

/// `p_i = tr(rho P_i)`.
pub fn born_probability(rho: &DensityState, measurement: &ProjectiveMeasurement) -> Result<Vec<f64>> {
    if rho.dim() != measurement.dim() {
        return Err(Error::DimensionMismatch { expected: measurement.dim(), found: rho.dim() });
    }
    Ok(measurement.projectors().iter().map(|p| rho.matrix().trace_product(p).re).collect())
}

/// Probability of each outcome group (or of each outcome when ungrouped).
pub fn group_probabilities(rho: &DensityState, measurement: &ProjectiveMeasurement) -> Result<Vec<f64>> {
    let fine = born_probability(rho, measurement)?;
    Ok(match measurement.groups() {
        Some(groups) => groups.iter().map(|g| g.iter().map(|&i| fine[i]).sum()).collect(),
        None => fine,
    })
}

/// Lüders post-measurement state `P rho P / tr(P rho)` for the outcome group.
pub fn lueders_update(
    rho: &DensityState,
    group: &[usize],
    measurement: &ProjectiveMeasurement,
) -> Result<DensityState> {
    if rho.dim() != measurement.dim() {
        return Err(Error::DimensionMismatch { expected: measurement.dim(), found: rho.dim() });
    }
    if group.is_empty() {
        return Err(Error::invalid("outcome group must be nonempty"));
    }
    let proj = measurement.group_projector(group)?;
    let projected = &(&proj * rho.matrix()) * &proj;
    let prob = projected.trace().re;
    if prob <= 1e-14 {
        return Err(Error::ZeroProbability(prob));
    }
    let mut out = projected.scale_real(1.0 / prob);
    // restore exact Hermiticity lost to roundoff
    out = (&out + &out.adjoint()).scale_real(0.5);
    DensityState::new(out)
}
