//! Seeded random draws used by the collapse sampler and by the randomized
//! test suites.
//!
//! All generators are `ChaCha8Rng` seeded from a `u64`, so a seed fully
//! determines every stream.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::hilbert::{density_from_amplitudes, DensityState, ProjectiveMeasurement};
use crate::math;
use crate::Result;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on `[0, 1)` with 53 bits of resolution.
pub fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Unit-rate exponential draw.
pub fn exponential<R: RngCore>(rng: &mut R) -> f64 {
    // 1 - u lies in (0, 1], so the log is finite
    -math::ln(1.0 - uniform(rng))
}

/// Standard normal draw (Box-Muller, one value per call).
pub fn standard_normal<R: RngCore>(rng: &mut R) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    math::sqrt(-2.0 * math::ln(u1)) * math::cos(core::f64::consts::TAU * u2)
}

/// Point drawn uniformly from the probability simplex with `n` vertices,
/// returned as barycentric weights.
pub fn uniform_simplex_point<R: RngCore>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| exponential(rng)).collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    w
}

/// Complex vector with independent standard-normal real and imaginary parts.
pub fn gaussian_vector<R: RngCore>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re = standard_normal(rng);
            let im = standard_normal(rng);
            Complex64::new(re, im)
        })
        .collect()
}

/// Haar-distributed pure state of dimension `n`.
pub fn random_pure_state<R: RngCore>(rng: &mut R, n: usize) -> Result<DensityState> {
    density_from_amplitudes(&gaussian_vector(rng, n))
}

/// Random orthonormal basis of `C^n` from Gram-Schmidt on Gaussian vectors.
pub fn random_orthonormal_basis<R: RngCore>(rng: &mut R, n: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v = gaussian_vector(rng, n);
        for b in &basis {
            let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= overlap * bi;
            }
        }
        let norm = math::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
        if norm < 1e-8 {
            continue;
        }
        for z in &mut v {
            *z /= norm;
        }
        basis.push(v);
    }
    basis
}

/// Random non-degenerate projective measurement of dimension `n`.
pub fn random_measurement<R: RngCore>(rng: &mut R, n: usize) -> Result<ProjectiveMeasurement> {
    ProjectiveMeasurement::from_basis(&random_orthonormal_basis(rng, n))
}

/// Random mixed state: a convex mixture of `n` random pure states with
/// exponential weights.
pub fn random_mixed_state<R: RngCore>(rng: &mut R, n: usize) -> Result<DensityState> {
    let weights = uniform_simplex_point(rng, n);
    let mut acc = crate::linalg::ComplexMatrix::zeros(n);
    for w in weights {
        let pure = random_pure_state(rng, n)?;
        acc = &acc + &pure.matrix().scale_real(w);
    }
    DensityState::new(acc)
}
