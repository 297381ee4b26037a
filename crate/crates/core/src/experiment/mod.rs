//! Config-driven experiment runner.
//!
//! Exact mode evaluates the full outcome distribution of each hidden
//! process. Sample mode draws `trials` independent trials; trial `t` runs
//! hidden value `t mod k` with the random stream `(seed, t)`, so results do
//! not depend on thread count or scheduling.

mod catalog;
mod config;
mod report;

use std::collections::BTreeMap;

use rayon::prelude::*;

pub use catalog::{ProtocolInfo, list_protocols};
pub use config::{
    DEFAULT_TRIALS, ExperimentConfig, HomGrid, Hypothesis, MAX_QUBITS, OperatorRef, OutputFormat,
    ProtocolKind, RunMode,
};
pub use report::{
    DecisionBin, HistogramBin, HomPoint, HypothesisReport, PlanReport, PlanTerm, ResultReport,
    Summary, emit,
};

use crate::error::{Error, Result};
use crate::fock;
use crate::linalg::{Ensemble, Tolerances};
use crate::noise::{binomial_std_error, noisy_bell_ensemble, noisy_w_ensemble};
use crate::protocols::{self, Decision, ExactRun, Resources, Trial, TrialSampler};
use crate::rng::RandomStream;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Probabilities below this are left out of exact histograms.
const HISTOGRAM_FLOOR: f64 = 1e-15;
/// Trials evaluated per parallel batch.
const BATCH: u64 = 1 << 16;

pub fn run(config: &ExperimentConfig) -> Result<ResultReport> {
    run_with_threads(config, None)
}

/// Runs on a dedicated pool of `threads` workers, or on the global pool.
pub fn run_with_threads(config: &ExperimentConfig, threads: Option<usize>) -> Result<ResultReport> {
    config.validate()?;
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("threads: {e}")))?;
            pool.install(|| execute(config))
        }
        None => execute(config),
    }
}

fn execute(config: &ExperimentConfig) -> Result<ResultReport> {
    let sampled = config.mode == RunMode::Sample;
    let mut report = ResultReport {
        tool: "qpd",
        version: VERSION,
        config: config.clone(),
        mode: config.mode,
        seed: sampled.then(|| config.seed_or_default()),
        resources: None,
        hypotheses: Vec::new(),
        summary: None,
        hom_scan: None,
        plan: None,
    };
    match config.protocol {
        ProtocolKind::HomScan => report.hom_scan = Some(hom_scan(config)?),
        ProtocolKind::Plan => report.plan = Some(plan(config)?),
        _ => {
            report.resources = Some(resources(config));
            let prepared: Vec<Prepared> = config
                .hypotheses()?
                .into_iter()
                .map(|h| Prepared::new(config, h))
                .collect::<Result<_>>()?;
            let (hypotheses, summary) = if sampled {
                sample_all(config, &prepared)?
            } else {
                exact_all(&prepared)?
            };
            report.hypotheses = hypotheses;
            report.summary = Some(summary);
        }
    }
    Ok(report)
}

fn resources(config: &ExperimentConfig) -> Resources {
    match config.protocol {
        ProtocolKind::MeasurementQpd => protocols::measurement_qpd_resources(config.qubits()),
        ProtocolKind::UnitaryQpdEntangled => protocols::unitary_entangled_resources(),
        ProtocolKind::UnitaryQpdUnentangled => protocols::unitary_unentangled_resources(),
        ProtocolKind::PauliUnentangled => protocols::pauli_unentangled_resources(),
        ProtocolKind::PauliEntangled => protocols::pauli_entangled_resources(),
        ProtocolKind::LoccFock => protocols::locc_resources(),
        ProtocolKind::HomScan | ProtocolKind::Plan => {
            unreachable!("no resources for {}", config.protocol)
        }
    }
}

/// A hypothesis with its noisy source built once.
struct Prepared {
    hypothesis: Hypothesis,
    n: usize,
    visibility: f64,
    flip_probability: f64,
    source: Option<Ensemble>,
}

impl Prepared {
    fn new(config: &ExperimentConfig, hypothesis: Hypothesis) -> Result<Self> {
        let n = config.qubits();
        let visibility = config.visibility_or_ideal();
        let source = match hypothesis {
            Hypothesis::Measurement(_) => Some(noisy_w_ensemble(n, visibility)?),
            Hypothesis::UnitaryEntangled(_) => Some(noisy_bell_ensemble(visibility)?),
            _ => None,
        };
        Ok(Prepared {
            hypothesis,
            n,
            visibility,
            flip_probability: config.flip_probability.unwrap_or(0.0),
            source,
        })
    }

    fn source(&self) -> &Ensemble {
        self.source
            .as_ref()
            .expect("source prepared for entangled schemes")
    }

    fn exact(&self) -> Result<ExactRun> {
        match self.hypothesis {
            Hypothesis::Measurement(b) => {
                protocols::measurement_qpd_exact(self.n, b, self.source())
            }
            Hypothesis::UnitaryEntangled(b) => protocols::unitary_entangled_exact(b, self.source()),
            Hypothesis::UnitaryUnentangled(b) => {
                protocols::unitary_unentangled_exact(b, self.flip_probability)
            }
            Hypothesis::PauliUnentangled(p) => protocols::pauli_unentangled_exact(p),
            Hypothesis::PauliEntangled(p) => protocols::pauli_entangled_exact(p),
            Hypothesis::Locc(b) => protocols::locc_exact(b, self.visibility),
        }
    }

    fn sampler(&self) -> Result<TrialSampler> {
        match self.hypothesis {
            Hypothesis::Measurement(b) => TrialSampler::measurement_qpd(self.n, b, self.source()),
            Hypothesis::UnitaryEntangled(b) => TrialSampler::unitary_entangled(b, self.source()),
            Hypothesis::UnitaryUnentangled(b) => {
                TrialSampler::unitary_unentangled(b, self.flip_probability)
            }
            Hypothesis::PauliUnentangled(p) => TrialSampler::pauli_unentangled(p),
            Hypothesis::PauliEntangled(p) => TrialSampler::pauli_entangled(p),
            Hypothesis::Locc(b) => TrialSampler::locc(b, self.visibility),
        }
    }
}

fn exact_all(prepared: &[Prepared]) -> Result<(Vec<HypothesisReport>, Summary)> {
    let mut reports = Vec::with_capacity(prepared.len());
    for p in prepared {
        let run = p.exact()?;
        let truth = p.hypothesis.truth();
        reports.push(HypothesisReport {
            hidden: p.hypothesis.label(),
            trials: None,
            histogram: run
                .histogram
                .iter()
                .filter(|(_, v)| *v >= HISTOGRAM_FLOOR)
                .map(|(pattern, value)| HistogramBin {
                    pattern: pattern.clone(),
                    value: *value,
                    count: None,
                })
                .collect(),
            decisions: run
                .decisions
                .iter()
                .filter(|(_, v)| **v >= HISTOGRAM_FLOOR)
                .map(|(d, v)| DecisionBin {
                    decision: d.to_string(),
                    value: *v,
                    count: None,
                })
                .collect(),
            confidence: run.probability_of(truth),
            std_error: 0.0,
        });
    }
    let confidence = reports.iter().map(|r| r.confidence).sum::<f64>() / reports.len() as f64;
    Ok((
        reports,
        Summary {
            confidence,
            std_error: 0.0,
            trials: None,
        },
    ))
}

#[derive(Default)]
struct Counts {
    trials: u64,
    patterns: BTreeMap<String, u64>,
    decisions: BTreeMap<Decision, u64>,
}

fn sample_all(
    config: &ExperimentConfig,
    prepared: &[Prepared],
) -> Result<(Vec<HypothesisReport>, Summary)> {
    let seed = config.seed_or_default();
    let total = config.trial_count();
    let k = prepared.len() as u64;
    let samplers: Vec<TrialSampler> = prepared
        .iter()
        .map(Prepared::sampler)
        .collect::<Result<_>>()?;
    let mut counts: Vec<Counts> = prepared.iter().map(|_| Counts::default()).collect();

    let mut start = 0;
    while start < total {
        let end = total.min(start + BATCH);
        let batch: Vec<Trial> = (start..end)
            .into_par_iter()
            .map(|t| samplers[(t % k) as usize].draw(&mut RandomStream::new(seed, t)))
            .collect();
        for (t, trial) in (start..end).zip(batch) {
            let c = &mut counts[(t % k) as usize];
            c.trials += 1;
            *c.patterns.entry(trial.pattern).or_insert(0) += 1;
            *c.decisions.entry(trial.decision).or_insert(0) += 1;
        }
        start = end;
    }

    let mut reports = Vec::with_capacity(prepared.len());
    let mut correct_total = 0;
    let mut trials_total = 0;
    for (p, c) in prepared.iter().zip(counts) {
        let n = c.trials;
        let frequency = |count: u64| if n == 0 { 0.0 } else { count as f64 / n as f64 };
        let correct = c.decisions.get(&p.hypothesis.truth()).copied().unwrap_or(0);
        correct_total += correct;
        trials_total += n;
        let confidence = frequency(correct);
        reports.push(HypothesisReport {
            hidden: p.hypothesis.label(),
            trials: Some(n),
            histogram: c
                .patterns
                .into_iter()
                .map(|(pattern, count)| HistogramBin {
                    pattern,
                    value: frequency(count),
                    count: Some(count),
                })
                .collect(),
            decisions: c
                .decisions
                .into_iter()
                .map(|(d, count)| DecisionBin {
                    decision: d.to_string(),
                    value: frequency(count),
                    count: Some(count),
                })
                .collect(),
            confidence,
            std_error: binomial_std_error(confidence, n),
        });
    }
    let confidence = correct_total as f64 / trials_total as f64;
    Ok((
        reports,
        Summary {
            confidence,
            std_error: binomial_std_error(confidence, trials_total),
            trials: Some(trials_total),
        },
    ))
}

fn hom_scan(config: &ExperimentConfig) -> Result<Vec<HomPoint>> {
    let grid = config.hom.expect("validated");
    let sampled = config.mode == RunMode::Sample;
    let seed = config.seed_or_default();
    let trials = config.trial_count();
    grid.values()
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let p = fock::hom_coincidence(m)?;
            if !sampled {
                return Ok(HomPoint {
                    m,
                    coincidence_probability: p,
                    trials: None,
                    coincidences: None,
                });
            }
            let offset = i as u64 * trials;
            let hits: u64 = (0..trials)
                .into_par_iter()
                .map(|t| u64::from(RandomStream::new(seed, offset + t).bernoulli(p)))
                .sum();
            Ok(HomPoint {
                m,
                coincidence_probability: hits as f64 / trials as f64,
                trials: Some(trials),
                coincidences: Some(hits),
            })
        })
        .collect()
}

fn plan(config: &ExperimentConfig) -> Result<PlanReport> {
    let (a, b) = (
        config.a.as_ref().expect("validated"),
        config.b.as_ref().expect("validated"),
    );
    let base = config.base_dir.as_deref();
    let u = a.resolve(base)?;
    let v = b.resolve(base)?;
    let plan = protocols::plan_parallel_discrimination(&u, &v, &Tolerances::DEFAULT)?;
    Ok(PlanReport {
        a: a.label(),
        b: b.label(),
        uses: plan.uses,
        arc: plan.arc,
        phases: plan.phases.clone(),
        eigenvectors: plan
            .eigenvectors
            .iter()
            .map(|v| v.amplitudes().iter().map(|z| [z.re, z.im]).collect())
            .collect(),
        terms: plan
            .terms
            .iter()
            .map(|t| PlanTerm {
                weight: t.weight,
                phase: t.phase,
                factors: t.factors.clone(),
            })
            .collect(),
        achieved_overlap: plan.achieved_overlap,
        feasible: plan.feasible(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(text).unwrap()
    }

    #[test]
    fn exact_measurement_run_is_certain() {
        let r = run(&config(r#"{"protocol": "measurement_qpd", "n": 2}"#)).unwrap();
        let s = r.summary.as_ref().unwrap();
        assert!((s.confidence - 1.0).abs() < 1e-10);
        assert_eq!(r.hypotheses.len(), 2);
        for h in &r.hypotheses {
            let total: f64 = h.histogram.iter().map(|b| b.value).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn exact_psi_plus_csv() {
        let r = run(&config(
            r#"{"protocol": "unitary_qpd_entangled", "hidden": "Z"}"#,
        ))
        .unwrap();
        let csv = String::from_utf8(r.to_csv().unwrap()).unwrap();
        let lines: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
        assert_eq!(lines[0], ["hidden", "pattern", "value"]);
        assert_eq!(lines.len(), 3);
        for (row, pattern) in lines[1..].iter().zip(["+-", "-+"]) {
            assert_eq!((row[0], row[1]), ("Z", pattern));
            assert!((row[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn sample_mode_is_thread_independent() {
        let c = config(
            r#"{"protocol": "locc_fock", "visibility": 0.9, "mode": "sample", "trials": 5000, "seed": 3}"#,
        );
        let one = run_with_threads(&c, Some(1)).unwrap().to_json().unwrap();
        let many = run_with_threads(&c, Some(4)).unwrap().to_json().unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn hom_scan_exact_and_sampled() {
        let r = run(&config(
            r#"{"protocol": "hom_scan", "hom": {"start": 0, "stop": 1, "points": 3}}"#,
        ))
        .unwrap();
        let points = r.hom_scan.unwrap();
        assert_eq!(points[0].coincidence_probability, 0.5);
        assert_eq!(points[2].coincidence_probability, 0.0);

        let r = run(&config(
            r#"{"protocol": "hom_scan", "hom": {"start": 0, "stop": 0, "points": 1}, "mode": "sample", "trials": 20000}"#,
        ))
        .unwrap();
        let p = r.hom_scan.unwrap()[0].coincidence_probability;
        assert!((p - 0.5).abs() < 3.0 * binomial_std_error(0.5, 20000));
    }

    #[test]
    fn plan_report() {
        let r = run(&config(r#"{"protocol": "plan", "a": "z", "b": "h"}"#)).unwrap();
        let plan = r.plan.unwrap();
        assert_eq!(plan.uses, 2);
        assert!(plan.feasible);
        let err = run(&config(r#"{"protocol": "plan", "a": "h", "b": "h"}"#)).unwrap_err();
        assert!(matches!(err, Error::Indistinguishable));
    }
}
