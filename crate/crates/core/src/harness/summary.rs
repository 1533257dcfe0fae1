use std::io::Write;

use serde::{Deserialize, Serialize};

use super::experiment::RealizationRow;
use crate::error::Result;
use crate::turbulence::mean_stderr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupKeys {
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "N_out")]
    pub n_out: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub metric: String,
    pub mean: Option<f64>,
    /// Sample standard deviation over `√count`; absent below two samples.
    pub stderr: Option<f64>,
    pub count: usize,
    pub group_keys: GroupKeys,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SummaryTable {
    pub entries: Vec<SummaryEntry>,
}

pub const METRICS: [&str; 6] = ["F_corr", "F_unc", "D_corr", "D_unc", "Neg_corr", "Neg_unc"];

fn metric(row: &RealizationRow, name: &str) -> Option<f64> {
    match name {
        "F_corr" => row.f_corr,
        "F_unc" => row.f_unc,
        "D_corr" => row.d_corr,
        "D_unc" => row.d_unc,
        "Neg_corr" => row.neg_corr,
        "Neg_unc" => row.neg_unc,
        _ => None,
    }
}

impl SummaryTable {
    /// Groups successful rows by `(W, N_out)` in first-seen order.
    pub fn from_rows(rows: &[RealizationRow]) -> Self {
        let mut groups: Vec<GroupKeys> = Vec::new();
        for r in rows {
            let key = GroupKeys { w: r.w, n_out: r.n_out };
            if !groups.contains(&key) {
                groups.push(key);
            }
        }
        let mut entries = Vec::new();
        for key in groups {
            for name in METRICS {
                let samples: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.is_ok() && r.w == key.w && r.n_out == key.n_out)
                    .filter_map(|r| metric(r, name))
                    .collect();
                let (mean, stderr) = if samples.is_empty() {
                    (None, None)
                } else {
                    let (m, s) = mean_stderr(&samples);
                    (Some(m), s.is_finite().then_some(s))
                };
                entries.push(SummaryEntry {
                    metric: name.to_string(),
                    mean,
                    stderr,
                    count: samples.len(),
                    group_keys: key,
                });
            }
        }
        Self { entries }
    }

    pub fn get(&self, metric: &str, w: f64, n_out: usize) -> Option<&SummaryEntry> {
        self.entries
            .iter()
            .find(|e| e.metric == metric && e.group_keys.w == w && e.group_keys.n_out == n_out)
    }

    /// First entry for `metric` regardless of group.
    pub fn metric(&self, metric: &str) -> Option<&SummaryEntry> {
        self.entries.iter().find(|e| e.metric == metric)
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }
}
