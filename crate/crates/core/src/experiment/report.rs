//! Report layout and serialization.
//!
//! JSON keys appear in declaration order of the structs below; optional
//! sections are omitted when empty. CSV output is one of three tables:
//!
//! | report kind          | columns                           |
//! |----------------------|-----------------------------------|
//! | discrimination runs  | `hidden,pattern,value`            |
//! | `hom_scan`           | `m,coincidence_probability`       |
//! | `plan`               | `term,weight,phase,factors`       |
//!
//! `value` is a probability in exact mode and a relative frequency in
//! sample mode. Plan factors are space-separated eigenvector indices.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::{ExperimentConfig, OutputFormat, RunMode};
use crate::error::{Error, Result};
use crate::protocols::Resources;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub pattern: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionBin {
    pub decision: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub hidden: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    pub histogram: Vec<HistogramBin>,
    pub decisions: Vec<DecisionBin>,
    pub confidence: f64,
    pub std_error: f64,
}

impl HypothesisReport {
    pub fn histogram_value(&self, pattern: &str) -> f64 {
        self.histogram
            .iter()
            .find(|b| b.pattern == pattern)
            .map_or(0.0, |b| b.value)
    }

    pub fn decision_value(&self, decision: &str) -> f64 {
        self.decisions
            .iter()
            .find(|b| b.decision == decision)
            .map_or(0.0, |b| b.value)
    }
}

/// Equal priors over the hidden values that were run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub confidence: f64,
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomPoint {
    pub m: f64,
    pub coincidence_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coincidences: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanTerm {
    pub weight: f64,
    pub phase: f64,
    pub factors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanReport {
    pub a: String,
    pub b: String,
    pub uses: usize,
    pub arc: f64,
    pub phases: Vec<f64>,
    pub eigenvectors: Vec<Vec<[f64; 2]>>,
    pub terms: Vec<PlanTerm>,
    pub achieved_overlap: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub mode: RunMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resources: Option<Resources>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<HypothesisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hom_scan: Option<Vec<HomPoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanReport>,
}

impl ResultReport {
    pub fn hypothesis(&self, hidden: &str) -> Option<&HypothesisReport> {
        self.hypotheses.iter().find(|h| h.hidden == hidden)
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(points) = &self.hom_scan {
            w.write_record(["m", "coincidence_probability"])?;
            for p in points {
                w.write_record([p.m.to_string(), p.coincidence_probability.to_string()])?;
            }
        } else if let Some(plan) = &self.plan {
            w.write_record(["term", "weight", "phase", "factors"])?;
            for (i, t) in plan.terms.iter().enumerate() {
                let factors: Vec<String> = t.factors.iter().map(usize::to_string).collect();
                w.write_record([
                    i.to_string(),
                    t.weight.to_string(),
                    t.phase.to_string(),
                    factors.join(" "),
                ])?;
            }
        } else {
            w.write_record(["hidden", "pattern", "value"])?;
            for h in &self.hypotheses {
                for bin in &h.histogram {
                    w.write_record([
                        h.hidden.as_str(),
                        bin.pattern.as_str(),
                        &bin.value.to_string(),
                    ])?;
                }
            }
        }
        w.into_inner().map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn render(&self, format: OutputFormat) -> Result<Vec<u8>> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
/// Returns the number of bytes written.
pub fn emit(report: &ResultReport, format: OutputFormat, path: Option<&Path>) -> Result<usize> {
    let bytes = report.render(format)?;
    match path {
        Some(p) => std::fs::write(p, &bytes).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    Ok(bytes.len())
}
