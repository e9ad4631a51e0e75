//! Word rank-frequency analysis.
//!
//! Words are treated as bosons occupying energy levels: the most frequent
//! word fills the lowest level `E_1 = 1`, the next one `E_2 = 2`, and so on.
//! [`fit`] compares Bose-Einstein and Maxwell-Boltzmann occupation laws on
//! the resulting table in log-log space.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

pub mod fit;
mod tokenize;

pub use fit::{
    compare_fits, fit_bose_einstein, fit_maxwell_boltzmann, DistributionFit, FitComparison, FitKind, LevelOccupancy,
    Winner,
};
pub use tokenize::{tokenize, Strip, TokenizerConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    pub word: String,
    pub count: u64,
    pub rank: usize,
    /// Energy level assigned to the row, equal to its rank.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankFrequencyTable {
    rows: Vec<RankRow>,
    total_tokens: u64,
}

impl RankFrequencyTable {
    pub fn rows(&self) -> &[RankRow] {
        &self.rows
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn count_of(&self, word: &str) -> Option<u64> {
        self.rows.iter().find(|r| r.word == word).map(|r| r.count)
    }

    pub fn rank_of(&self, word: &str) -> Option<usize> {
        self.rows.iter().find(|r| r.word == word).map(|r| r.rank)
    }

    /// `(E_i, N(E_i))` pairs for the distribution fits.
    pub fn occupancy(&self) -> LevelOccupancy {
        LevelOccupancy::from_sorted_unchecked(
            self.rows.iter().map(|r| r.energy).collect(),
            self.rows.iter().map(|r| r.count as f64).collect(),
        )
    }
}

/// Counts tokens and ranks them by count (descending), ties alphabetically.
pub fn rank_table<S: AsRef<str>>(tokens: &[S]) -> Result<RankFrequencyTable> {
    if tokens.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for t in tokens {
        *counts.entry(t.as_ref()).or_insert(0) += 1;
    }
    let mut entries: Vec<(&str, u64)> = counts.into_iter().collect();
    // BTreeMap iteration is alphabetical and the sort is stable
    entries.sort_by_key(|e| core::cmp::Reverse(e.1));
    let rows = entries
        .into_iter()
        .enumerate()
        .map(|(i, (word, count))| RankRow { word: String::from(word), count, rank: i + 1, energy: (i + 1) as f64 })
        .collect();
    Ok(RankFrequencyTable { rows, total_tokens: tokens.len() as u64 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZipfReport {
    /// `rank * count` for every row.
    pub products: Vec<u64>,
    /// Number of leading rows the constancy ratio covers.
    pub top_k: usize,
    /// `max / min` of the products over the first `top_k` rows.
    pub max_min_ratio: f64,
}

impl ZipfReport {
    pub fn top(&self) -> &[u64] {
        &self.products[..self.top_k]
    }
}

pub const DEFAULT_TOP_K: usize = 3;

pub fn zipf_products(table: &RankFrequencyTable, top_k: usize) -> Result<ZipfReport> {
    if table.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if top_k == 0 {
        return Err(Error::invalid("top_k must be >= 1"));
    }
    let products: Vec<u64> = table.rows.iter().map(|r| r.rank as u64 * r.count).collect();
    let top_k = top_k.min(products.len());
    let head = &products[..top_k];
    let max = *head.iter().max().unwrap() as f64;
    let min = *head.iter().min().unwrap() as f64;
    Ok(ZipfReport { products, top_k, max_min_ratio: max / min })
}
