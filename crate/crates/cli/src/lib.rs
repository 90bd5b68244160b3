//! Command implementations behind the `cluster` binary.
//!
//! Every command returns a [`Report`]: one table whose rows start with the
//! run parameters `n, theta, seed, trials`, plus an overall verdict. Trial
//! `i` of a command seeded with `s` uses `ChaCha8Rng::seed_from_u64(s)` on
//! stream `i`.

mod commands;
mod error;
mod table;
mod verify;

pub use commands::{
    grow, pipeline13, protocol_stats, retry, sequences, GrowMode, RunConfig, DEFAULT_THETA_SWEEP,
};
pub use error::{Error, Result};
pub use table::{format_float, round_significant, Cell, RunHeader, Table, SIGNIFICANT_DIGITS};
pub use verify::verify;

use std::io::Write;

/// Serialization format of a report table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub passed: bool,
    /// Human-readable lines for standard error.
    pub notes: Vec<String>,
}

impl Report {
    pub fn write(&self, format: Format, out: impl Write) -> Result<()> {
        match format {
            Format::Csv => self.table.write_csv(out),
            Format::Json => self.table.write_json(out),
        }
    }

    pub fn to_bytes(&self, format: Format) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(buf)
    }
}
