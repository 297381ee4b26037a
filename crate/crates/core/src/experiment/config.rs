use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{self, RawMatrix};
use crate::linalg::Operator;
use crate::protocols::{BipartiteBox, Decision, MeasurementBox, PauliId, UnitaryBox};
use crate::qubit::gates;

/// Largest W-state probe the runner accepts.
pub const MAX_QUBITS: usize = 12;
pub const DEFAULT_TRIALS: u64 = 10_000;
pub const MAX_HOM_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    MeasurementQpd,
    UnitaryQpdEntangled,
    UnitaryQpdUnentangled,
    PauliUnentangled,
    PauliEntangled,
    LoccFock,
    HomScan,
    Plan,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 8] = [
        ProtocolKind::MeasurementQpd,
        ProtocolKind::UnitaryQpdEntangled,
        ProtocolKind::UnitaryQpdUnentangled,
        ProtocolKind::PauliUnentangled,
        ProtocolKind::PauliEntangled,
        ProtocolKind::LoccFock,
        ProtocolKind::HomScan,
        ProtocolKind::Plan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::MeasurementQpd => "measurement_qpd",
            ProtocolKind::UnitaryQpdEntangled => "unitary_qpd_entangled",
            ProtocolKind::UnitaryQpdUnentangled => "unitary_qpd_unentangled",
            ProtocolKind::PauliUnentangled => "pauli_unentangled",
            ProtocolKind::PauliEntangled => "pauli_entangled",
            ProtocolKind::LoccFock => "locc_fock",
            ProtocolKind::HomScan => "hom_scan",
            ProtocolKind::Plan => "plan",
        }
    }

    /// Hidden labels a config may name, in report order.
    pub fn hidden_labels(self) -> &'static [&'static str] {
        match self {
            ProtocolKind::MeasurementQpd => &["S", "T"],
            ProtocolKind::UnitaryQpdEntangled | ProtocolKind::UnitaryQpdUnentangled => &["Z", "H"],
            ProtocolKind::PauliUnentangled | ProtocolKind::PauliEntangled => &["I", "X", "Y", "Z"],
            ProtocolKind::LoccFock => &["I", "J"],
            ProtocolKind::HomScan | ProtocolKind::Plan => &[],
        }
    }

    fn uses_visibility(self) -> bool {
        matches!(
            self,
            ProtocolKind::MeasurementQpd
                | ProtocolKind::UnitaryQpdEntangled
                | ProtocolKind::LoccFock
        )
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolKind::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown protocol `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    #[default]
    Exact,
    Sample,
}

impl FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(RunMode::Exact),
            "sample" => Ok(RunMode::Sample),
            _ => Err(Error::Config(format!(
                "mode: expected exact or sample, got `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Config(format!(
                "format: expected json or csv, got `{s}`"
            ))),
        }
    }
}

/// Evenly spaced visibilities, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl HomGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }
}

/// A gate name (`i`, `x`, `y`, `z`, `h`), a path to a matrix file, or an
/// inline matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorRef {
    Reference(String),
    Inline(RawMatrix),
}

impl OperatorRef {
    pub fn resolve(&self, base_dir: Option<&Path>) -> Result<Operator> {
        match self {
            OperatorRef::Inline(rows) => format::operator_from_rows(rows),
            OperatorRef::Reference(s) => {
                if let Some(op) = gates::named(s) {
                    return Ok(op);
                }
                let path = Path::new(s);
                let path = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.to_path_buf(),
                };
                if !path.exists() {
                    return Err(Error::Config(format!(
                        "operator {s:?} is neither a gate (i, x, y, z, h) nor an existing file"
                    )));
                }
                format::read_operator(&path)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            OperatorRef::Reference(s) => s.clone(),
            OperatorRef::Inline(rows) => format!("inline {0}x{0}", rows.len()),
        }
    }
}

/// One experiment. Fields a protocol does not use must be absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    /// A label from [`ProtocolKind::hidden_labels`], or `both`/`all`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub visibility: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flip_probability: Option<f64>,
    #[serde(default)]
    pub mode: RunMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hom: Option<HomGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<OperatorRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<OperatorRef>,
    #[serde(default, skip_serializing)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    /// Directory against which relative matrix paths resolve.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(protocol: ProtocolKind) -> Self {
        ExperimentConfig {
            protocol,
            hidden: None,
            n: None,
            visibility: None,
            flip_probability: None,
            mode: RunMode::Exact,
            trials: None,
            seed: None,
            hom: None,
            a: None,
            b: None,
            format: OutputFormat::Json,
            out: None,
            base_dir: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config file. Relative matrix paths inside it resolve against
    /// the file's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_json(&text)?;
        config.base_dir = path.parent().map(Path::to_path_buf);
        Ok(config)
    }

    pub fn with_hidden(mut self, hidden: &str) -> Self {
        self.hidden = Some(hidden.to_string());
        self
    }

    pub fn with_sampling(mut self, trials: u64, seed: u64) -> Self {
        self.mode = RunMode::Sample;
        self.trials = Some(trials);
        self.seed = Some(seed);
        self
    }

    pub fn qubits(&self) -> usize {
        self.n.unwrap_or(2)
    }

    pub fn visibility_or_ideal(&self) -> f64 {
        self.visibility.unwrap_or(1.0)
    }

    pub fn trial_count(&self) -> u64 {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }

    pub fn seed_or_default(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// Checks every field against the protocol before anything runs.
    pub fn validate(&self) -> Result<()> {
        let p = self.protocol;
        let unused = |field: &str| Err(Error::Config(format!("{field}: not used by protocol {p}")));

        if let Some(n) = self.n {
            if p != ProtocolKind::MeasurementQpd {
                return unused("n");
            }
            if !(2..=MAX_QUBITS).contains(&n) {
                return Err(Error::Config(format!(
                    "n: must be in 2..={MAX_QUBITS}, got {n}"
                )));
            }
        }
        if let Some(m) = self.visibility {
            if !p.uses_visibility() {
                return unused("visibility");
            }
            check_probability("visibility", m)?;
        }
        if let Some(q) = self.flip_probability {
            if p != ProtocolKind::UnitaryQpdUnentangled {
                return unused("flip_probability");
            }
            check_probability("flip_probability", q)?;
        }
        if self.hidden.is_some() && p.hidden_labels().is_empty() {
            return unused("hidden");
        }
        self.hypotheses()?;

        match (p, &self.hom) {
            (ProtocolKind::HomScan, None) => {
                return Err(Error::Config("hom: required by protocol hom_scan".into()));
            }
            (ProtocolKind::HomScan, Some(grid)) => {
                check_probability("hom.start", grid.start)?;
                check_probability("hom.stop", grid.stop)?;
                if grid.points == 0 || grid.points > MAX_HOM_POINTS {
                    return Err(Error::Config(format!(
                        "hom.points: must be in 1..={MAX_HOM_POINTS}, got {}",
                        grid.points
                    )));
                }
            }
            (_, Some(_)) => return unused("hom"),
            (_, None) => {}
        }

        if p == ProtocolKind::Plan {
            if self.a.is_none() || self.b.is_none() {
                return Err(Error::Config("a, b: both required by protocol plan".into()));
            }
            if self.mode == RunMode::Sample {
                return Err(Error::Config("mode: plan has no sampled form".into()));
            }
        } else if self.a.is_some() {
            return unused("a");
        } else if self.b.is_some() {
            return unused("b");
        }

        if self.mode == RunMode::Sample && self.trials == Some(0) {
            return Err(Error::Config(
                "trials: must be positive in sample mode".into(),
            ));
        }
        Ok(())
    }

    /// The hidden processes to run, in report order.
    pub fn hypotheses(&self) -> Result<Vec<Hypothesis>> {
        let labels = self.protocol.hidden_labels();
        let selected: Vec<&str> = match self.hidden.as_deref() {
            None | Some("both") | Some("all") => labels.to_vec(),
            Some(h) => {
                let found = labels
                    .iter()
                    .find(|l| l.eq_ignore_ascii_case(h))
                    .ok_or_else(|| {
                        Error::Config(format!(
                            "hidden: `{h}` is not one of {} for protocol {}",
                            labels.join(", "),
                            self.protocol
                        ))
                    })?;
                vec![*found]
            }
        };
        Ok(selected
            .into_iter()
            .map(|l| Hypothesis::parse(self.protocol, l).expect("label from catalog"))
            .collect())
    }
}

fn check_probability(field: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{field}: must be in [0, 1], got {v}"
        )))
    }
}

/// A hidden process paired with the scheme that probes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    Measurement(MeasurementBox),
    UnitaryEntangled(UnitaryBox),
    UnitaryUnentangled(UnitaryBox),
    PauliUnentangled(PauliId),
    PauliEntangled(PauliId),
    Locc(BipartiteBox),
}

impl Hypothesis {
    fn parse(protocol: ProtocolKind, label: &str) -> Option<Hypothesis> {
        let unitary = || match label {
            "Z" => Some(UnitaryBox::SigmaZ),
            "H" => Some(UnitaryBox::Hadamard),
            _ => None,
        };
        let pauli = || {
            PauliId::ALL
                .into_iter()
                .find(|p| Decision::Pauli(*p).to_string() == label)
        };
        Some(match protocol {
            ProtocolKind::MeasurementQpd => Hypothesis::Measurement(match label {
                "S" => MeasurementBox::S,
                "T" => MeasurementBox::T,
                _ => return None,
            }),
            ProtocolKind::UnitaryQpdEntangled => Hypothesis::UnitaryEntangled(unitary()?),
            ProtocolKind::UnitaryQpdUnentangled => Hypothesis::UnitaryUnentangled(unitary()?),
            ProtocolKind::PauliUnentangled => Hypothesis::PauliUnentangled(pauli()?),
            ProtocolKind::PauliEntangled => Hypothesis::PauliEntangled(pauli()?),
            ProtocolKind::LoccFock => Hypothesis::Locc(match label {
                "I" => BipartiteBox::Identity,
                "J" => BipartiteBox::J,
                _ => return None,
            }),
            ProtocolKind::HomScan | ProtocolKind::Plan => return None,
        })
    }

    pub fn truth(self) -> Decision {
        match self {
            Hypothesis::Measurement(b) => b.truth(),
            Hypothesis::UnitaryEntangled(b) | Hypothesis::UnitaryUnentangled(b) => b.truth(),
            Hypothesis::PauliUnentangled(p) | Hypothesis::PauliEntangled(p) => Decision::Pauli(p),
            Hypothesis::Locc(b) => b.truth(),
        }
    }

    pub fn label(self) -> String {
        self.truth().to_string()
    }
}
