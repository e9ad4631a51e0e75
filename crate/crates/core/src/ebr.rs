//! Extended Bloch representation.
//!
//! A state of an `N`-level system maps to a real vector of length `N^2 - 1`;
//! the eigenstates of a non-degenerate measurement map to the vertices of an
//! `(N-1)`-simplex. Orthogonal projection of the state onto that simplex gives
//! the equilibrium point, whose barycentric coordinates are the outcome
//! probabilities. Collapse is modeled by a uniform fluctuation on the simplex
//! landing in one of `N` convex subregions `A_i = conv({r_e} ∪ {v_j : j != i})`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::hilbert::{
    born_probability, density_from_amplitudes, lueders_update, DensityState, GeneratorBasis,
    ProjectiveMeasurement,
};
use crate::linalg::{self, ComplexMatrix, RealMatrix};
use crate::math;
use crate::sampling::{seeded_rng, uniform_simplex_point, SeededRng};
use crate::{Error, Result};

/// Tolerance for the affine least-squares residual.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Barycentric coordinates below `-OUTSIDE_TOL` mean the point is off the simplex.
pub const OUTSIDE_TOL: f64 = 1e-8;
/// Tolerance for fluctuation points handed to [`subregion_of`].
pub const INSIDE_TOL: f64 = 1e-12;

/// `c_N = sqrt(N (N - 1) / 2)`, so that `rho = (I + c_N r·Λ) / N`.
pub fn bloch_scale(n: usize) -> f64 {
    let n = n as f64;
    math::sqrt(n * (n - 1.0) / 2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    dim_hilbert: usize,
    coords: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim_hilbert: usize, coords: Vec<f64>) -> Result<Self> {
        if dim_hilbert < 2 {
            return Err(Error::invalid("Hilbert dimension must be >= 2"));
        }
        let expected = dim_hilbert * dim_hilbert - 1;
        if coords.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: coords.len() });
        }
        Ok(Self { dim_hilbert, coords })
    }

    pub fn dim_hilbert(&self) -> usize {
        self.dim_hilbert
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.coords)
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        linalg::distance(&self.coords, &other.coords)
    }
}

/// `r_i = sqrt(N / (2 (N - 1))) tr(rho Λ_i)`.
pub fn to_bloch(rho: &DensityState, basis: &GeneratorBasis) -> Result<BlochVector> {
    let n = rho.dim();
    if basis.dim() != n {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: n });
    }
    let k = math::sqrt(n as f64 / (2.0 * (n as f64 - 1.0)));
    let coords = basis.generators().iter().map(|g| k * rho.matrix().trace_product(g).re).collect();
    BlochVector::new(n, coords)
}

/// `rho = I/N + sqrt((N - 1) / (2N)) sum_i r_i Λ_i`, rejected when not
/// positive semidefinite.
pub fn from_bloch(v: &BlochVector, basis: &GeneratorBasis) -> Result<DensityState> {
    let n = v.dim_hilbert();
    if basis.dim() != n {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: n });
    }
    let k = math::sqrt((n as f64 - 1.0) / (2.0 * n as f64));
    let mut m = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
    for (r, g) in v.coords().iter().zip(basis.generators()) {
        m = &m + &g.scale_real(k * r);
    }
    let min_eig = m.hermitian_eigenvalues()[0];
    if min_eig < -crate::hilbert::POSITIVITY_TOL {
        return Err(Error::OutsideStateSpace(min_eig));
    }
    DensityState::new(m)
}

/// The outcome simplex of a measurement together with an orthonormal frame
/// of its affine hull.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSimplex {
    vertices: Vec<BlochVector>,
    /// Orthonormal directions spanning `v_j - v_0`, `j = 1..N`.
    frame: Vec<Vec<f64>>,
    /// Upper-triangular Gram-Schmidt coefficients: `edge_j = sum_k r[k][j] frame_k`.
    r: Vec<Vec<f64>>,
}

impl MeasurementSimplex {
    pub fn from_vertices(vertices: Vec<BlochVector>) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(Error::invalid("simplex needs at least two vertices"));
        }
        let d = vertices[0].coords().len();
        for (i, v) in vertices.iter().enumerate() {
            if v.coords().len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: v.coords().len() });
            }
            if (v.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::invalid(format!("vertex {i} is not a unit vector")));
            }
        }
        let edges: Vec<Vec<f64>> = vertices[1..]
            .iter()
            .map(|v| v.coords().iter().zip(vertices[0].coords()).map(|(a, b)| a - b).collect())
            .collect();

        let m = n - 1;
        let mut gram = RealMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                gram[(i, j)] = linalg::dot(&edges[i], &edges[j]);
            }
        }
        let sigma_min = math::sqrt(linalg::symmetric_eigenvalues(&gram)[0].max(0.0));
        if sigma_min <= 1e-10 {
            return Err(Error::invalid("simplex vertices are affinely dependent"));
        }

        // modified Gram-Schmidt
        let mut frame: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut r = vec![vec![0.0; m]; m];
        for (j, edge) in edges.iter().enumerate() {
            let mut w = edge.clone();
            for (k, q) in frame.iter().enumerate() {
                let proj = linalg::dot(q, &w);
                r[k][j] = proj;
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= proj * qi;
                }
            }
            let len = linalg::norm(&w);
            r[j][j] = len;
            for wi in &mut w {
                *wi /= len;
            }
            frame.push(w);
        }
        Ok(Self { vertices, frame, r })
    }

    pub fn vertices(&self) -> &[BlochVector] {
        &self.vertices
    }

    pub fn frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Ambient point with the given barycentric weights.
    pub fn point_at(&self, barycentric: &[f64]) -> Vec<f64> {
        let d = self.vertices[0].coords().len();
        let mut p = vec![0.0; d];
        for (w, v) in barycentric.iter().zip(&self.vertices) {
            for (pi, vi) in p.iter_mut().zip(v.coords()) {
                *pi += w * vi;
            }
        }
        p
    }

    /// Orthogonal projection onto the affine hull, returned with its
    /// barycentric coordinates.
    pub fn project(&self, point: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let origin = self.vertices[0].coords();
        if point.len() != origin.len() {
            return Err(Error::DimensionMismatch { expected: origin.len(), found: point.len() });
        }
        let rel: Vec<f64> = point.iter().zip(origin).map(|(a, b)| a - b).collect();
        let qt: Vec<f64> = self.frame.iter().map(|q| linalg::dot(q, &rel)).collect();

        let m = self.frame.len();
        let mut edge_coeffs = vec![0.0; m];
        for i in (0..m).rev() {
            let tail: f64 = ((i + 1)..m).map(|k| self.r[i][k] * edge_coeffs[k]).sum();
            edge_coeffs[i] = (qt[i] - tail) / self.r[i][i];
        }

        let mut projected = origin.to_vec();
        for (c, q) in qt.iter().zip(&self.frame) {
            for (pi, qi) in projected.iter_mut().zip(q) {
                *pi += c * qi;
            }
        }

        let mut bary = Vec::with_capacity(m + 1);
        bary.push(1.0 - edge_coeffs.iter().sum::<f64>());
        bary.extend_from_slice(&edge_coeffs);

        let reconstructed = self.point_at(&bary);
        let residual = linalg::distance(&reconstructed, &projected);
        if residual > RESIDUAL_TOL {
            return Err(Error::InvalidState(format!("barycentric solve residual {residual:e}")));
        }
        Ok((projected, bary))
    }
}

/// Vertices are the Bloch vectors of the measurement's eigenprojectors.
pub fn outcome_simplex(measurement: &ProjectiveMeasurement, basis: &GeneratorBasis) -> Result<MeasurementSimplex> {
    let vertices = measurement
        .projectors()
        .iter()
        .map(|p| DensityState::new(p.clone()).and_then(|rho| to_bloch(&rho, basis)))
        .collect::<Result<Vec<_>>>()?;
    MeasurementSimplex::from_vertices(vertices)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumPoint {
    pub ambient: Vec<f64>,
    pub barycentric: Vec<f64>,
}

pub fn equilibrium_point(v: &BlochVector, simplex: &MeasurementSimplex) -> Result<EquilibriumPoint> {
    let (ambient, barycentric) = simplex.project(v.coords())?;
    if let Some((i, b)) = barycentric.iter().enumerate().find(|(_, &b)| b < -OUTSIDE_TOL) {
        return Err(Error::InvalidState(format!("equilibrium point outside simplex (coordinate {i} = {b:e})")));
    }
    Ok(EquilibriumPoint { ambient, barycentric })
}

/// Outcome probabilities read off the equilibrium point.
pub fn born_from_ebr(
    rho: &DensityState,
    measurement: &ProjectiveMeasurement,
    basis: &GeneratorBasis,
) -> Result<Vec<f64>> {
    if rho.dim() != measurement.dim() {
        return Err(Error::DimensionMismatch { expected: measurement.dim(), found: rho.dim() });
    }
    let simplex = outcome_simplex(measurement, basis)?;
    let v = to_bloch(rho, basis)?;
    Ok(equilibrium_point(&v, &simplex)?.barycentric)
}

/// Index `i` of the subregion `A_i` containing the simplex point `lambda`
/// (given in barycentric coordinates of the outcome simplex).
///
/// Membership uses barycentric coordinates with respect to the sub-simplex
/// obtained by replacing vertex `i` with the equilibrium point. Ties go to the
/// lowest index. When the equilibrium point sits on a vertex that vertex's
/// index is returned directly.
pub fn subregion_of(lambda: &[f64], eq: &EquilibriumPoint, simplex: &MeasurementSimplex) -> Result<usize> {
    let n = simplex.n_vertices();
    if lambda.len() != n || eq.barycentric.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: lambda.len() });
    }
    if lambda.iter().any(|&b| b < -INSIDE_TOL) || (lambda.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("fluctuation point is not inside the simplex"));
    }
    let p = &eq.barycentric;
    if let Some(k) = p.iter().position(|&pk| pk >= 1.0 - 1e-12) {
        return Ok(k);
    }

    // In sub-simplex i the weight on r_e is t = lambda_i / p_i and the
    // remaining weights are lambda_j - t p_j for j != i.
    let mut best = 0;
    let mut best_ratio = f64::INFINITY;
    for i in 0..n {
        if p[i] <= 0.0 {
            continue;
        }
        let t = lambda[i] / p[i];
        let inside = (0..n).filter(|&j| j != i).all(|j| lambda[j] - t * p[j] >= -INSIDE_TOL);
        if inside {
            return Ok(i);
        }
        if t < best_ratio {
            best_ratio = t;
            best = i;
        }
    }
    // only reachable through roundoff; the minimal ratio is the exact answer
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseSample {
    /// Fine (non-degenerate) outcome index.
    pub outcome: usize,
    /// Group id when the measurement carries outcome groups.
    pub group: Option<usize>,
    /// The sampled fluctuation, as barycentric weights.
    pub fluctuation: Vec<f64>,
    pub post_state: DensityState,
}

/// Seeded hidden-measurement sampler for one (state, measurement) pair.
#[derive(Debug, Clone)]
pub struct CollapseSampler {
    simplex: MeasurementSimplex,
    eq: EquilibriumPoint,
    measurement: ProjectiveMeasurement,
    rho: DensityState,
    rng: SeededRng,
}

impl CollapseSampler {
    pub fn new(
        rho: &DensityState,
        measurement: &ProjectiveMeasurement,
        basis: &GeneratorBasis,
        seed: u64,
    ) -> Result<Self> {
        if rho.dim() != measurement.dim() {
            return Err(Error::DimensionMismatch { expected: measurement.dim(), found: rho.dim() });
        }
        let simplex = outcome_simplex(measurement, basis)?;
        let eq = equilibrium_point(&to_bloch(rho, basis)?, &simplex)?;
        Ok(Self { simplex, eq, measurement: measurement.clone(), rho: rho.clone(), rng: seeded_rng(seed) })
    }

    pub fn equilibrium(&self) -> &EquilibriumPoint {
        &self.eq
    }

    pub fn simplex(&self) -> &MeasurementSimplex {
        &self.simplex
    }

    /// Draws a fluctuation and returns `(fine outcome, fluctuation)`.
    pub fn sample_outcome(&mut self) -> Result<(usize, Vec<f64>)> {
        let lambda = uniform_simplex_point(&mut self.rng, self.simplex.n_vertices());
        let outcome = subregion_of(&lambda, &self.eq, &self.simplex)?;
        Ok((outcome, lambda))
    }

    pub fn sample(&mut self) -> Result<CollapseSample> {
        let (outcome, fluctuation) = self.sample_outcome()?;
        let group = self.measurement.group_of(outcome);
        let post_state = match group.map(|g| &self.measurement.groups().unwrap()[g]) {
            Some(members) if members.len() > 1 => lueders_update(&self.rho, members, &self.measurement)?,
            _ => DensityState::new(self.measurement.projectors()[outcome].clone())?,
        };
        Ok(CollapseSample { outcome, group, fluctuation, post_state })
    }
}

pub fn sample_collapse(
    rho: &DensityState,
    measurement: &ProjectiveMeasurement,
    basis: &GeneratorBasis,
    seed: u64,
) -> Result<CollapseSample> {
    CollapseSampler::new(rho, measurement, basis, seed)?.sample()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeStatistics {
    /// Fine outcomes making up this row (one entry unless grouped).
    pub members: Vec<usize>,
    pub count: u64,
    pub frequency: f64,
    /// Trace-formula probability.
    pub born_probability: f64,
    /// Equilibrium-point probability.
    pub ebr_probability: f64,
    /// Binomial standard deviation of the frequency under the Born rule.
    pub sigma: f64,
    /// `(frequency - born) / sigma`; `None` when `sigma == 0`.
    pub z_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementStatistics {
    pub n_samples: u64,
    pub seed: u64,
    pub grouped: bool,
    pub outcomes: Vec<OutcomeStatistics>,
    /// `max_i |born_i - ebr_i|` over fine outcomes.
    pub max_oracle_deviation: f64,
}

pub fn run_measurement_statistics(
    rho: &DensityState,
    measurement: &ProjectiveMeasurement,
    basis: &GeneratorBasis,
    n_samples: u64,
    seed: u64,
) -> Result<MeasurementStatistics> {
    if n_samples == 0 {
        return Err(Error::invalid("n_samples must be >= 1"));
    }
    let born = born_probability(rho, measurement)?;
    let mut sampler = CollapseSampler::new(rho, measurement, basis, seed)?;
    let ebr = sampler.equilibrium().barycentric.clone();
    let mut counts = vec![0u64; measurement.dim()];
    for _ in 0..n_samples {
        let (outcome, _) = sampler.sample_outcome()?;
        counts[outcome] += 1;
    }
    let max_oracle_deviation = born.iter().zip(&ebr).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let rows: Vec<Vec<usize>> = match measurement.groups() {
        Some(groups) => groups.to_vec(),
        None => (0..measurement.dim()).map(|i| vec![i]).collect(),
    };
    let n = n_samples as f64;
    let outcomes = rows
        .into_iter()
        .map(|members| {
            let count: u64 = members.iter().map(|&i| counts[i]).sum();
            let born_p: f64 = members.iter().map(|&i| born[i]).sum();
            let ebr_p: f64 = members.iter().map(|&i| ebr[i]).sum();
            let frequency = count as f64 / n;
            let sigma = math::sqrt((born_p * (1.0 - born_p)).max(0.0) / n);
            let z_score = if sigma > 0.0 { Some((frequency - born_p) / sigma) } else { None };
            OutcomeStatistics { members, count, frequency, born_probability: born_p, ebr_probability: ebr_p, sigma, z_score }
        })
        .collect();

    Ok(MeasurementStatistics { n_samples, seed, grouped: measurement.groups().is_some(), outcomes, max_oracle_deviation })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpReport {
    /// Distance between the two Bloch vectors (stimuli).
    pub surface_distance: f64,
    /// Distance between their equilibrium points (percepts).
    pub equilibrium_distance: f64,
    /// `equilibrium / surface`; `None` when the surface distance is below 1e-12.
    pub ratio: Option<f64>,
}

pub fn perceptual_warp(
    rho1: &DensityState,
    rho2: &DensityState,
    measurement: &ProjectiveMeasurement,
    basis: &GeneratorBasis,
) -> Result<WarpReport> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch { expected: rho1.dim(), found: rho2.dim() });
    }
    if rho1.dim() != measurement.dim() {
        return Err(Error::DimensionMismatch { expected: measurement.dim(), found: rho1.dim() });
    }
    let simplex = outcome_simplex(measurement, basis)?;
    let v1 = to_bloch(rho1, basis)?;
    let v2 = to_bloch(rho2, basis)?;
    let e1 = equilibrium_point(&v1, &simplex)?;
    let e2 = equilibrium_point(&v2, &simplex)?;
    let surface_distance = v1.distance(&v2);
    let equilibrium_distance = linalg::distance(&e1.ambient, &e2.ambient);
    let ratio = if surface_distance < 1e-12 { None } else { Some(equilibrium_distance / surface_distance) };
    Ok(WarpReport { surface_distance, equilibrium_distance, ratio })
}

/// Qubit pure state at polar angle `theta` (azimuth 0): `(cos θ/2, sin θ/2)`.
pub fn qubit_state(theta: f64) -> Result<DensityState> {
    density_from_amplitudes(&[
        Complex64::new(math::cos(theta / 2.0), 0.0),
        Complex64::new(math::sin(theta / 2.0), 0.0),
    ])
}
