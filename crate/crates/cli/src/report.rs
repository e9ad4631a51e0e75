use serde::{Deserialize, Serialize};

/// Bumped whenever a report schema changes.
pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub format_version: String,
    pub tool_version: String,
    pub subcommand: String,
    pub seed: u64,
    /// Echo of the flags and input document the run used.
    pub input: serde_json::Value,
    pub result: T,
}

impl<T> Report<T> {
    pub fn new(subcommand: &str, seed: u64, input: serde_json::Value, result: T) -> Self {
        Self {
            format_version: FORMAT_VERSION.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            seed,
            input,
            result,
        }
    }
}
