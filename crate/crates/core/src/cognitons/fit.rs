//! Occupation-law fits in log-log space.
//!
//! Maxwell-Boltzmann `N(E) = C e^{-E/B}` is linear in `ln N` and is solved by
//! ordinary least squares. Bose-Einstein `N(E) = A / (e^{(E - mu)/B} - 1)` is
//! fitted by a damped Gauss-Newton (Levenberg-Marquardt) iteration over
//! `(ln A, ln B, s)` with `mu = 1 - e^s`, which keeps `mu` below the lowest
//! level and every predicted count positive.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

pub const MAX_ITERATIONS: usize = 200;
pub const STEP_TOL: f64 = 1e-10;
/// Fits whose sse_log differ by no more than this are a tie.
pub const TIE_TOL: f64 = 1e-12;

/// Energy levels with their occupation numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelOccupancy {
    energies: Vec<f64>,
    counts: Vec<f64>,
}

impl LevelOccupancy {
    pub fn new(energies: Vec<f64>, counts: Vec<f64>) -> Result<Self> {
        if energies.len() != counts.len() {
            return Err(Error::DimensionMismatch { expected: energies.len(), found: counts.len() });
        }
        if let Some(i) = energies.iter().position(|&e| !(e > 0.0) || !e.is_finite()) {
            return Err(Error::invalid(format!("energy level {i} must be positive and finite")));
        }
        if let Some(i) = counts.iter().position(|&c| !(c > 0.0) || !c.is_finite()) {
            return Err(Error::invalid(format!("occupation {i} must be positive and finite")));
        }
        Ok(Self { energies, counts })
    }

    /// Levels `E_i = i` (starting at 1) for the given occupations.
    pub fn from_counts(counts: Vec<f64>) -> Result<Self> {
        let energies = (1..=counts.len()).map(|i| i as f64).collect();
        Self::new(energies, counts)
    }

    pub(crate) fn from_sorted_unchecked(energies: Vec<f64>, counts: Vec<f64>) -> Self {
        Self { energies, counts }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    fn distinct_energies(&self) -> usize {
        let mut e = self.energies.clone();
        e.sort_by(f64::total_cmp);
        e.dedup();
        e.len()
    }

    /// True when occupations never increase with energy.
    pub fn is_ranked(&self) -> bool {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.energies[a].total_cmp(&self.energies[b]));
        idx.windows(2).all(|w| self.counts[w[0]] >= self.counts[w[1]])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitKind {
    BoseEinstein { a: f64, b: f64, mu: f64 },
    MaxwellBoltzmann { c: f64, b: f64 },
}

impl FitKind {
    pub fn predict(&self, energy: f64) -> f64 {
        math::exp(self.ln_predict(energy))
    }

    pub fn ln_predict(&self, energy: f64) -> f64 {
        match *self {
            FitKind::BoseEinstein { a, b, mu } => math::ln(a) - math::ln_expm1((energy - mu) / b),
            FitKind::MaxwellBoltzmann { c, b } => math::ln(c) - energy / b,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FitKind::BoseEinstein { .. } => "bose_einstein",
            FitKind::MaxwellBoltzmann { .. } => "maxwell_boltzmann",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionFit {
    pub kind: FitKind,
    /// `sum_i (ln N_i - ln N_hat(E_i))^2`.
    pub sse_log: f64,
    pub n_points: usize,
    pub iterations: usize,
    pub converged: bool,
}

fn sse_log(kind: &FitKind, data: &LevelOccupancy) -> f64 {
    data.energies
        .iter()
        .zip(&data.counts)
        .map(|(&e, &n)| {
            let r = math::ln(n) - kind.ln_predict(e);
            r * r
        })
        .sum()
}

/// Ordinary least squares of `ln N` on `E`.
pub fn fit_maxwell_boltzmann(data: &LevelOccupancy) -> Result<DistributionFit> {
    if data.distinct_energies() < 3 {
        if data.len() >= 3 {
            return Err(Error::Fit(format!("degenerate design: only {} distinct energies", data.distinct_energies())));
        }
        return Err(Error::invalid(format!("Maxwell-Boltzmann fit needs >= 3 levels, got {}", data.len())));
    }
    let n = data.len() as f64;
    let ys: Vec<f64> = data.counts.iter().map(|&c| math::ln(c)).collect();
    let mean_x = data.energies.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in data.energies.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    if !(slope < 0.0) {
        return Err(Error::Fit(format!("occupations do not decay with energy (slope {slope:e})")));
    }
    let kind = FitKind::MaxwellBoltzmann { c: math::exp(intercept), b: -1.0 / slope };
    Ok(DistributionFit { sse_log: sse_log(&kind, data), kind, n_points: data.len(), iterations: 1, converged: true })
}

/// Parameters `(ln A, ln B, s)` with `mu = 1 - e^s`.
#[derive(Debug, Clone, Copy)]
struct BeParams([f64; 3]);

impl BeParams {
    fn from_physical(a: f64, b: f64, mu: f64) -> Self {
        BeParams([math::ln(a), math::ln(b), math::ln(1.0 - mu)])
    }

    fn kind(self) -> FitKind {
        let [ln_a, ln_b, s] = self.0;
        FitKind::BoseEinstein { a: math::exp(ln_a), b: math::exp(ln_b), mu: 1.0 - math::exp(s) }
    }
}

/// Residuals `ln N - f` and the Jacobian of `f` for the BE model.
fn be_residuals(p: BeParams, data: &LevelOccupancy, jac: Option<&mut Vec<[f64; 3]>>) -> (Vec<f64>, f64) {
    let [ln_a, ln_b, s] = p.0;
    let b = math::exp(ln_b);
    let es = math::exp(s);
    let mu = 1.0 - es;
    let mut res = Vec::with_capacity(data.len());
    let mut rows = Vec::with_capacity(data.len());
    let mut sse = 0.0;
    for (&e, &n) in data.energies.iter().zip(&data.counts) {
        let x = (e - mu) / b;
        let f = ln_a - math::ln_expm1(x);
        let r = math::ln(n) - f;
        sse += r * r;
        res.push(r);
        let g = math::ln_expm1_slope(x);
        rows.push([1.0, g * x, -g * es / b]);
    }
    if let Some(j) = jac {
        *j = rows;
    }
    (res, sse)
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let mut a = [[0.0; 4]; 3];
    for i in 0..3 {
        a[i][..3].copy_from_slice(&m[i]);
        a[i][3] = rhs[i];
    }
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (v, p) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *v -= f * p;
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let tail: f64 = ((i + 1)..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (a[i][3] - tail) / a[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

struct LmOutcome {
    params: BeParams,
    sse: f64,
    iterations: usize,
    /// Stopped by the step or gradient test rather than the iteration cap.
    converged: bool,
}

impl LmOutcome {
    /// Finite objective and finite physical parameters. The iteration cap is
    /// a normal stop: for exact Maxwell-Boltzmann or Zipf data the optimum
    /// lies at infinity and the step norm never shrinks.
    fn usable(&self) -> bool {
        let FitKind::BoseEinstein { a, b, mu } = self.params.kind() else { unreachable!() };
        self.sse.is_finite() && a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0 && mu.is_finite()
    }
}

fn levenberg_marquardt(start: BeParams, data: &LevelOccupancy) -> LmOutcome {
    let mut p = start;
    let mut jac = Vec::new();
    let (_, mut sse) = be_residuals(p, data, None);
    let mut damping = 1e-3;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (res, _) = be_residuals(p, data, Some(&mut jac));
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for (row, r) in jac.iter().zip(&res) {
            for i in 0..3 {
                jtr[i] += row[i] * r;
                for k in 0..3 {
                    jtj[i][k] += row[i] * row[k];
                }
            }
        }
        let grad = math::sqrt(jtr.iter().map(|g| g * g).sum());
        if grad < 1e-14 * (1.0 + sse) {
            converged = true;
            break;
        }
        // increase damping until a step lowers the objective
        let mut accepted = None;
        while damping < 1e16 {
            let mut m = jtj;
            for i in 0..3 {
                m[i][i] += damping * jtj[i][i].max(1e-12);
            }
            if let Some(step) = solve3(m, jtr) {
                let trial = BeParams([p.0[0] + step[0], p.0[1] + step[1], p.0[2] + step[2]]);
                let (_, trial_sse) = be_residuals(trial, data, None);
                if trial_sse.is_finite() && trial_sse <= sse {
                    accepted = Some((trial, trial_sse, step));
                    break;
                }
            }
            damping *= 10.0;
        }
        match accepted {
            Some((trial, trial_sse, step)) => {
                let step_norm = math::sqrt(step.iter().map(|s| s * s).sum());
                p = trial;
                sse = trial_sse;
                damping = (damping / 10.0).max(1e-12);
                if step_norm < STEP_TOL {
                    converged = true;
                    break;
                }
            }
            None => {
                // no descent direction left at working precision
                converged = true;
                break;
            }
        }
    }
    LmOutcome { params: p, sse, iterations, converged }
}

/// Multi-start damped Gauss-Newton fit of the Bose-Einstein law.
///
/// Starts: `s in {-2, 0, 2}` times `B in {1, E_max/4, E_max}`, with `A`
/// chosen so the first level is reproduced exactly. Each start runs until the
/// step norm drops below [`STEP_TOL`] or [`MAX_ITERATIONS`] is reached; the
/// best usable start wins. [`Error::FitFailure`] is returned when no start
/// ends with finite parameters.
pub fn fit_bose_einstein(data: &LevelOccupancy) -> Result<DistributionFit> {
    if data.distinct_energies() < 4 {
        return Err(Error::invalid(format!("Bose-Einstein fit needs >= 4 distinct levels, got {}", data.distinct_energies())));
    }
    if !data.is_ranked() {
        return Err(Error::invalid("occupations must be non-increasing in energy"));
    }
    let e_min = data.energies.iter().cloned().fold(f64::INFINITY, f64::min);
    if e_min < 1.0 {
        return Err(Error::invalid("Bose-Einstein fit expects energy levels >= 1"));
    }
    let e_max = data.energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let first = data.energies.iter().position(|&e| e == e_min).unwrap();
    let n_first = data.counts[first];

    let mut best: Option<LmOutcome> = None;
    let mut best_usable: Option<LmOutcome> = None;
    for &s in &[-2.0, 0.0, 2.0] {
        for &b in &[1.0, e_max / 4.0, e_max] {
            let mu = 1.0 - math::exp(s);
            let a = n_first * math::expm1((e_min - mu) / b);
            let start = BeParams::from_physical(a, b, mu);
            let out = levenberg_marquardt(start, data);
            if !out.sse.is_finite() {
                continue;
            }
            let slot = if out.usable() { &mut best_usable } else { &mut best };
            if slot.as_ref().is_none_or(|cur| out.sse < cur.sse) {
                *slot = Some(out);
            }
        }
    }
    let to_fit = |o: &LmOutcome| DistributionFit {
        kind: o.params.kind(),
        sse_log: o.sse,
        n_points: data.len(),
        iterations: o.iterations,
        converged: o.converged,
    };
    match (best_usable, best) {
        (Some(c), _) => Ok(to_fit(&c)),
        (None, Some(b)) => Err(Error::FitFailure { best: Box::new(to_fit(&b)) }),
        (None, None) => Err(Error::Fit("no start produced a finite objective".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    BoseEinstein,
    MaxwellBoltzmann,
}

impl Winner {
    pub fn as_str(self) -> &'static str {
        match self {
            Winner::BoseEinstein => "bose_einstein",
            Winner::MaxwellBoltzmann => "maxwell_boltzmann",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitComparison {
    pub be: DistributionFit,
    pub mb: DistributionFit,
    pub winner: Winner,
    /// The two objectives agree within [`TIE_TOL`]; BE wins ties.
    pub tie: bool,
}

pub fn compare_fits(data: &LevelOccupancy) -> Result<FitComparison> {
    let be = fit_bose_einstein(data)?;
    let mb = fit_maxwell_boltzmann(data)?;
    Ok(decide(be, mb))
}

pub(crate) fn decide(be: DistributionFit, mb: DistributionFit) -> FitComparison {
    let tie = (be.sse_log - mb.sse_log).abs() <= TIE_TOL;
    let winner = if tie || be.sse_log < mb.sse_log { Winner::BoseEinstein } else { Winner::MaxwellBoltzmann };
    FitComparison { be, mb, winner, tie }
}
