//! Logical error rate sweeps over a list of flip probabilities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qec::{analytic_failure_rate, logical_error_rate};
use crate::runner::FORMAT_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub analytic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub format: u32,
    pub seed: u64,
    pub trials: u64,
    pub rows: Vec<SweepRow>,
}

/// Every row uses the same `seed`, so rows share their random streams.
pub fn qec_sweep(p_values: &[f64], trials: u64, seed: u64) -> Result<SweepTable> {
    if let Some(&p) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidProbability(p));
    }
    let rows = p_values
        .iter()
        .map(|&p| {
            let e = logical_error_rate(p, trials, seed)?;
            Ok(SweepRow {
                p,
                trials,
                failures: e.failures,
                estimate: e.estimate,
                ci_low: e.ci_low,
                ci_high: e.ci_high,
                analytic: analytic_failure_rate(p),
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepTable {
        format: FORMAT_VERSION,
        seed,
        trials,
        rows,
    })
}

impl SweepTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// One header line, then one line per row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }
}
