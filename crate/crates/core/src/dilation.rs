//! Step-counting time dilation.
//!
//! Two processes of `n_a` and `n_b` equal-length steps are placed in the
//! frame of A. Requiring every step to have the same Minkowski length forces
//! B to move at `v = c sqrt(1 - (n_b/n_a)^2)` along an outward and return path.

use alloc::format;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConceptualProcess {
    pub n_steps: usize,
    pub step_length: f64,
    pub speed: f64,
}

impl ConceptualProcess {
    pub fn new(n_steps: usize, step_length: f64, speed: f64) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::invalid("a process needs at least one step"));
        }
        check_positive("step length", step_length)?;
        check_positive("speed", speed)?;
        Ok(Self { n_steps, step_length, speed })
    }

    /// `tau = L / c`.
    pub fn step_duration(&self) -> f64 {
        self.step_length / self.speed
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("{name} must be positive and finite, got {x}")));
    }
    Ok(())
}

/// Vertices `(t, x)` in A's frame, `t` strictly increasing from `(0, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeTrajectory {
    vertices: Vec<(f64, f64)>,
}

impl SpacetimeTrajectory {
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self> {
        match vertices.first() {
            None => return Err(Error::invalid("trajectory has no vertices")),
            Some(&(t, x)) if t != 0.0 || x != 0.0 => {
                return Err(Error::invalid("trajectory must start at (0, 0)"));
            }
            _ => {}
        }
        if vertices.iter().any(|&(t, x)| !t.is_finite() || !x.is_finite()) {
            return Err(Error::invalid("trajectory has a non-finite vertex"));
        }
        if let Some(i) = vertices.windows(2).position(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::invalid(format!("time not strictly increasing at vertex {}", i + 1)));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn n_segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn end(&self) -> (f64, f64) {
        self.vertices[self.vertices.len() - 1]
    }

    fn segments(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.vertices.windows(2).map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinationResult {
    pub velocity: f64,
    /// `n_a / n_b`.
    pub gamma: f64,
    pub trajectory_a: SpacetimeTrajectory,
    pub trajectory_b: SpacetimeTrajectory,
    /// Minkowski length of each step of B.
    pub step_lengths_b: Vec<f64>,
}

/// Places B's `n_b` steps inside A's `n_a` steps.
///
/// A rests at `x = 0` with one vertex per step boundary. B steps take
/// `(n_a/n_b) tau` each, the first half at `+v`, the second at `-v`.
pub fn coordinate(n_a: usize, n_b: usize, step_length: f64, c: f64) -> Result<CoordinationResult> {
    if n_b < 2 {
        return Err(Error::invalid(format!("n_b must be at least 2, got {n_b}")));
    }
    if n_b > n_a {
        return Err(Error::invalid(format!("n_b = {n_b} exceeds n_a = {n_a}")));
    }
    if !n_b.is_multiple_of(2) {
        return Err(Error::UnsupportedGeometry(format!(
            "n_b = {n_b} is odd; a single turnaround needs equal outward and return legs"
        )));
    }
    let process = ConceptualProcess::new(n_a, step_length, c)?;
    let tau = process.step_duration();
    let ratio = n_b as f64 / n_a as f64;
    let velocity = c * math::sqrt(1.0 - ratio * ratio);
    let gamma = n_a as f64 / n_b as f64;

    let trajectory_a = SpacetimeTrajectory::new((0..=n_a).map(|k| (k as f64 * tau, 0.0)).collect())?;

    let dt = gamma * tau;
    let half = n_b / 2;
    let vertices = (0..=n_b)
        .map(|k| {
            let t = (k * n_a) as f64 / n_b as f64 * tau;
            let legs = if k <= half { k } else { n_b - k };
            (t, legs as f64 * velocity * dt)
        })
        .collect();
    let trajectory_b = SpacetimeTrajectory::new(vertices)?;
    let step_lengths_b = segment_minkowski_lengths(&trajectory_b, c)?;

    Ok(CoordinationResult { velocity, gamma, trajectory_a, trajectory_b, step_lengths_b })
}

fn segment_minkowski_lengths(trajectory: &SpacetimeTrajectory, c: f64) -> Result<Vec<f64>> {
    trajectory
        .segments()
        .enumerate()
        .map(|(index, (dt, dx))| {
            let ct = c * dt;
            if !(ct > dx.abs()) {
                return Err(Error::NonTimelike { index });
            }
            Ok(math::sqrt((ct - dx) * (ct + dx)))
        })
        .collect()
}

/// Sum of `sqrt(c^2 dt^2 - dx^2)` over segments.
pub fn minkowski_length(trajectory: &SpacetimeTrajectory, c: f64) -> Result<f64> {
    check_positive("speed", c)?;
    Ok(segment_minkowski_lengths(trajectory, c)?.iter().sum())
}

/// Sum of `sqrt(c^2 dt^2 + dx^2)` over segments.
pub fn euclidean_length(trajectory: &SpacetimeTrajectory, c: f64) -> f64 {
    trajectory.segments().map(|(dt, dx)| math::sqrt(c * c * dt * dt + dx * dx)).sum()
}

/// `1 / sqrt(1 - v^2/c^2)`.
pub fn dilation_factor(v: f64, c: f64) -> Result<f64> {
    check_positive("speed", c)?;
    if !v.is_finite() || v.abs() >= c {
        return Err(Error::invalid(format!("|v| = {} must be below c = {c}", v.abs())));
    }
    let beta = v / c;
    Ok(1.0 / math::sqrt(1.0 - beta * beta))
}
