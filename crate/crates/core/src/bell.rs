//! Bell-CHSH analysis of 2x2 joint outcome tables.
//!
//! `S = E(A', B') + E(A', B) + E(A, B') - E(A, B)`, bounded by 2 for
//! classical correlations and by `2 sqrt 2` (Tsirelson) for quantum ones.

use alloc::format;

use crate::math;
use crate::{Error, Result};

pub const TSIRELSON_BOUND: f64 = 2.0 * core::f64::consts::SQRT_2;

/// Joint probabilities `(p11, p12, p21, p22)` for outcomes `(A_i, B_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointProbabilityTable {
    p: [f64; 4],
}

impl JointProbabilityTable {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if let Some(i) = p.iter().position(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::invalid(format!("table entry {i} is negative or not finite")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("table sums to {sum}, expected 1")));
        }
        Ok(Self { p })
    }

    pub fn uniform() -> Self {
        Self { p: [0.25; 4] }
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.p
    }

    /// Swaps both outcome labels of both parties.
    pub fn relabeled(&self) -> Self {
        let [p11, p12, p21, p22] = self.p;
        Self { p: [p22, p21, p12, p11] }
    }
}

/// `E = p11 - p12 - p21 + p22`.
pub fn expectation(table: &JointProbabilityTable) -> f64 {
    let [p11, p12, p21, p22] = table.p;
    p11 - p12 - p21 + p22
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshReport {
    pub e_ab: f64,
    pub e_abp: f64,
    pub e_apb: f64,
    pub e_apbp: f64,
    /// `E(A',B') + E(A',B) + E(A,B') - E(A,B)`.
    pub s_value: f64,
    pub violates_classical: bool,
    pub exceeds_tsirelson: bool,
    /// Largest value over the eight sign placements with an odd number of
    /// minus signs. Convenience field; `s_value` is the fixed combination.
    pub s_max: f64,
}

pub fn chsh(
    ab: &JointProbabilityTable,
    abp: &JointProbabilityTable,
    apb: &JointProbabilityTable,
    apbp: &JointProbabilityTable,
) -> ChshReport {
    let e_ab = expectation(ab);
    let e_abp = expectation(abp);
    let e_apb = expectation(apb);
    let e_apbp = expectation(apbp);
    let s_value = e_apbp + e_apb + e_abp - e_ab;
    let total = e_ab + e_abp + e_apb + e_apbp;
    let s_max = [e_ab, e_abp, e_apb, e_apbp]
        .iter()
        .map(|&e| (total - 2.0 * e).abs())
        .fold(f64::NEG_INFINITY, f64::max);
    ChshReport {
        e_ab,
        e_abp,
        e_apb,
        e_apbp,
        s_value,
        violates_classical: s_value > 2.0 + 1e-12,
        exceeds_tsirelson: s_value > TSIRELSON_BOUND + 1e-9,
        s_max,
    }
}

/// Singlet statistics for analyzer angles `a`, `b`: `E = -cos(a - b)`.
pub fn singlet_tables(angle_a: f64, angle_b: f64) -> JointProbabilityTable {
    let e = -math::cos(angle_a - angle_b);
    let same = (1.0 + e) / 4.0;
    let diff = (1.0 - e) / 4.0;
    JointProbabilityTable { p: [same, diff, diff, same] }
}

pub fn counts_to_table(counts: [u64; 4]) -> Result<JointProbabilityTable> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::invalid("count table is all zero"));
    }
    let t = total as f64;
    JointProbabilityTable::new(counts.map(|c| c as f64 / t))
}
