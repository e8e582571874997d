//! Trial records, per-n summaries and their CSV / JSON encodings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::write_json;

pub const CSV_HEADER: [&str; 8] = [
    "theorem",
    "n",
    "trial",
    "p",
    "schatten",
    "mixednorm",
    "ratio",
    "seed",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    /// Operator side: the Schatten norm, or `||f g||` for multiplication runs.
    pub schatten: f64,
    /// Function side: the theorem's mixed (modulation) norm.
    pub mixed_norm: f64,
    pub ratio: f64,
    #[serde(skip_serializing_if = "TrialMetadata::is_empty")]
    pub metadata: TrialMetadata,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TrialMetadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_class: Option<String>,
    /// Determinants of the second-order phase blocks, keyed by block name.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub det: BTreeMap<String, f64>,
    /// Sharpness runs: the ratio under the compliant exponents.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub control_ratio: Option<f64>,
}

impl TrialMetadata {
    fn is_empty(&self) -> bool {
        self == &Self::default()
    }
}

/// `schatten / mixed`, with `0 / 0 = 0`.
pub fn ratio(schatten: f64, mixed: f64) -> f64 {
    if mixed > 0.0 {
        schatten / mixed
    } else if schatten == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

impl TrialRecord {
    pub fn new(
        n: usize,
        trial: usize,
        schatten: f64,
        mixed_norm: f64,
        metadata: TrialMetadata,
    ) -> Self {
        Self {
            n,
            trial,
            schatten,
            mixed_norm,
            ratio: ratio(schatten, mixed_norm),
            metadata,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.schatten.is_finite() && self.mixed_norm.is_finite() && self.ratio.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NSummary {
    pub n: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_control_ratio: Option<f64>,
}

/// Outcome of the acceptance knob attached to a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendCheck {
    /// `"ceiling"` for compliant runs, `"floor"` for sharpness runs.
    pub kind: &'static str,
    pub threshold: f64,
    pub growth_factor: f64,
    pub non_decreasing: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub control_growth_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub theorem: String,
    pub p: f64,
    pub seed: u64,
    pub trials: usize,
    pub permutation: String,
    pub exponents: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violated_exponents: Option<String>,
    pub window_kind: String,
    /// Wiener amalgam norm of the window per `n` (blocks of length 2, or 1
    /// for odd `n`).
    pub window_wiener_norms: BTreeMap<usize, f64>,
    pub per_n: Vec<NSummary>,
    pub growth_factor: f64,
    pub check: TrendCheck,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub records: Vec<TrialRecord>,
}

/// `max / min` over a sequence of per-n maxima; `1` for an all-zero sequence.
pub fn growth_factor(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(0.0, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        1.0
    } else {
        max / min
    }
}

/// Relative slack for trend comparisons, so exact ties survive round-off.
pub const TREND_RTOL: f64 = 1e-9;

pub fn is_non_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] >= w[0] * (1.0 - TREND_RTOL))
}

/// Per-n maxima and minima, in the order `n_values` first appear.
pub fn summarize(records: &[TrialRecord]) -> Vec<NSummary> {
    let mut out: Vec<NSummary> = Vec::new();
    for r in records {
        let control = r.metadata.control_ratio;
        match out.iter_mut().find(|s| s.n == r.n) {
            Some(s) => {
                s.max_ratio = s.max_ratio.max(r.ratio);
                s.min_ratio = s.min_ratio.min(r.ratio);
                if let Some(c) = control {
                    s.max_control_ratio = Some(s.max_control_ratio.map_or(c, |m| m.max(c)));
                }
            }
            None => out.push(NSummary {
                n: r.n,
                max_ratio: r.ratio,
                min_ratio: r.ratio,
                max_control_ratio: control,
            }),
        }
    }
    out
}

impl Report {
    pub fn max_ratios(&self) -> Vec<f64> {
        self.per_n.iter().map(|s| s.max_ratio).collect()
    }

    pub fn all_finite(&self) -> bool {
        self.records.iter().all(TrialRecord::is_finite)
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        self.write_rows(&mut w)?;
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn write_rows<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> Result<()> {
        w.write_record(CSV_HEADER)?;
        for r in &self.records {
            w.write_record([
                self.theorem.clone(),
                r.n.to_string(),
                r.trial.to_string(),
                self.p.to_string(),
                r.schatten.to_string(),
                r.mixed_norm.to_string(),
                r.ratio.to_string(),
                self.seed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes the CSV to `path` and the summary to `path` with a `.json`
    /// extension appended.
    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        let mut w = csv::Writer::from_path(path)?;
        self.write_rows(&mut w)?;
        let mut summary = path.as_os_str().to_owned();
        summary.push(".json");
        let summary = PathBuf::from(summary);
        write_json(&summary, self)?;
        Ok(summary)
    }
}
