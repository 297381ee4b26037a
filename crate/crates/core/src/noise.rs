//! Visibility noise for the photon-pair source and binomial confidence
//! bookkeeping.
//!
//! A pair interferes with probability `m` (the HOM visibility). Otherwise
//! the photons are distinguishable and the beamsplitter post-selection
//! yields the dephased mixture of `|01⟩` and `|10⟩` instead of `ψ⁺`.

use std::collections::BTreeMap;

use crate::error::{Error, Result, check_unit_interval};
use crate::linalg::{Ensemble, PureState};
use crate::protocols::Decision;
use crate::qubit;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityModel {
    m: f64,
}

impl VisibilityModel {
    pub fn new(m: f64) -> Result<Self> {
        Ok(VisibilityModel {
            m: check_unit_interval("visibility", m)?,
        })
    }

    pub fn ideal() -> Self {
        VisibilityModel { m: 1.0 }
    }

    pub fn visibility(&self) -> f64 {
        self.m
    }

    /// W(n) with weight `m`, each weight-one basis state with `(1 − m)/n`.
    pub fn w_source(&self, n: usize) -> Result<Ensemble> {
        noisy_w_ensemble(n, self.m)
    }
}

/// `m·ψ⁺ + (1 − m)/2·(|01⟩⟨01| + |10⟩⟨10|)`. The weights are built as
/// `[1 − r, r/2, r/2]` with `r = 1 − m`, which sums to exactly 1.
pub fn noisy_bell_ensemble(m: f64) -> Result<Ensemble> {
    noisy_w_ensemble(2, m)
}

pub fn noisy_w_ensemble(n: usize, m: f64) -> Result<Ensemble> {
    check_unit_interval("visibility", m)?;
    let w = qubit::w_state(n)?;
    if m == 1.0 {
        return Ok(Ensemble::pure(w));
    }
    let r = 1.0 - m;
    let share = r / n as f64;
    let mut components = vec![(1.0 - r, w)];
    // ascending basis index: |0…01⟩, |0…10⟩, …
    components.extend((0..n).map(|q| (share, PureState::basis(1 << n, 1 << q))));
    Ensemble::new(components)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfidenceModel {
    /// Exact average over equiprobable `Ŝ`/`T̂` under the noisy ensemble:
    /// `3/4 + m/4`. The dephased pairs still give anti-correlated `z`
    /// outcomes, so only the `T̂` branch loses.
    PerHypothesis,
    /// Interfering pairs always right, non-interfering pairs right half
    /// the time: `m + (1 − m)/2`.
    HalfCredit,
}

/// Predicted confidence of the two-qubit (`ψ⁺`) measurement scheme.
pub fn predicted_confidence(m: f64, model: ConfidenceModel) -> Result<f64> {
    check_unit_interval("visibility", m)?;
    Ok(match model {
        ConfidenceModel::PerHypothesis => 0.75 + m / 4.0,
        ConfidenceModel::HalfCredit => m + (1.0 - m) / 2.0,
    })
}

/// Binomial standard error `√(p(1 − p)/n)`.
pub fn binomial_std_error(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let p = p.clamp(0.0, 1.0);
    (p * (1.0 - p) / trials as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HypothesisSummary {
    pub trials: u64,
    pub correct: u64,
    pub confidence: f64,
    pub std_error: f64,
    /// Decision label → count.
    pub decisions: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TrialSummary {
    pub trials: u64,
    pub correct: u64,
    pub confidence: f64,
    pub std_error: f64,
    /// Keyed by the hidden process label.
    pub per_hypothesis: BTreeMap<String, HypothesisSummary>,
}

/// Counts `(truth, decision)` pairs. `merge` is associative, so partial
/// tallies can be reduced in any grouping.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    counts: BTreeMap<Decision, BTreeMap<Decision, u64>>,
}

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, truth: Decision, decision: Decision) {
        *self
            .counts
            .entry(truth)
            .or_default()
            .entry(decision)
            .or_insert(0) += 1;
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        for (truth, row) in other.counts {
            let mine = self.counts.entry(truth).or_default();
            for (d, c) in row {
                *mine.entry(d).or_insert(0) += c;
            }
        }
        self
    }

    pub fn trials(&self) -> u64 {
        self.counts.values().flat_map(|r| r.values()).sum()
    }

    pub fn count(&self, truth: Decision, decision: Decision) -> u64 {
        self.counts
            .get(&truth)
            .and_then(|r| r.get(&decision))
            .copied()
            .unwrap_or(0)
    }

    pub fn summary(&self) -> Result<TrialSummary> {
        let trials = self.trials();
        if trials == 0 {
            return Err(Error::EmptyInput);
        }
        let mut correct = 0;
        let mut per_hypothesis = BTreeMap::new();
        for (truth, row) in &self.counts {
            let n: u64 = row.values().sum();
            let c = row.get(truth).copied().unwrap_or(0);
            correct += c;
            let p = c as f64 / n as f64;
            per_hypothesis.insert(
                truth.to_string(),
                HypothesisSummary {
                    trials: n,
                    correct: c,
                    confidence: p,
                    std_error: binomial_std_error(p, n),
                    decisions: row.iter().map(|(d, k)| (d.to_string(), *k)).collect(),
                },
            );
        }
        let confidence = correct as f64 / trials as f64;
        Ok(TrialSummary {
            trials,
            correct,
            confidence,
            std_error: binomial_std_error(confidence, trials),
            per_hypothesis,
        })
    }
}

pub fn summarize(trials: &[(Decision, Decision)]) -> Result<TrialSummary> {
    let mut tally = Tally::new();
    for &(truth, decision) in trials {
        tally.add(truth, decision);
    }
    tally.summary()
}
