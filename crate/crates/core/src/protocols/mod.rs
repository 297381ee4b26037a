//! Discrimination protocols.
//!
//! Every protocol exists in two forms: `*_exact` returns the full outcome
//! histogram and the induced decision distribution, `*_sample` draws one
//! trial from a caller-supplied [`RandomStream`]. Protocols that consume an
//! entangled source take the prepared [`Ensemble`] so a noise model can be
//! plugged in; the ideal source is a pure state.

mod planner;

use std::collections::BTreeMap;
use std::fmt;

pub use planner::{
    DiscriminationPlan, FEASIBLE_OVERLAP, ProbeTerm, plan_parallel_discrimination,
    tensor_power_apply, zero_in_hull,
};

use crate::error::{Error, Result, check_unit_interval};
use crate::fock::{self, DetectorDistribution, Mode};
use crate::linalg::{Ensemble, Operator, PureState, Tensor, Tolerances};
use crate::qubit::{
    self, BellState, ObservableAxis, OutcomePattern, bell_measure, bell_psi_plus, gates,
    measure_exact,
};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliId {
    I,
    X,
    Y,
    Z,
}

impl PauliId {
    pub const ALL: [PauliId; 4] = [PauliId::I, PauliId::X, PauliId::Y, PauliId::Z];

    pub fn operator(self) -> Operator {
        match self {
            PauliId::I => gates::identity(),
            PauliId::X => gates::pauli_x(),
            PauliId::Y => gates::pauli_y(),
            PauliId::Z => gates::pauli_z(),
        }
    }
}

/// Outcome of a discrimination run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Decision {
    S,
    T,
    SigmaZ,
    Hadamard,
    IdentityOp,
    JOp,
    Pauli(PauliId),
    /// Not produced by any ideal protocol here. Noisy LOCC trials use it
    /// for detector patterns outside the decision rule.
    Inconclusive,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Decision::S => "S",
            Decision::T => "T",
            Decision::SigmaZ => "Z",
            Decision::Hadamard => "H",
            Decision::IdentityOp => "I",
            Decision::JOp => "J",
            Decision::Pauli(PauliId::I) => "I",
            Decision::Pauli(PauliId::X) => "X",
            Decision::Pauli(PauliId::Y) => "Y",
            Decision::Pauli(PauliId::Z) => "Z",
            Decision::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// The unknown box, as handed to a protocol.
#[derive(Debug, Clone)]
pub enum HiddenProcess {
    MeasureAxis(ObservableAxis),
    Unitary(Operator),
    BipartiteFock(Operator),
}

/// Projective measurement along `z` (`Ŝ`) or along the tilted axis `T̂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MeasurementBox {
    S,
    T,
}

impl MeasurementBox {
    pub fn truth(self) -> Decision {
        match self {
            MeasurementBox::S => Decision::S,
            MeasurementBox::T => Decision::T,
        }
    }

    /// The box's axis when the probe is a W state on `n` qubits.
    pub fn axis(self, n: usize) -> Result<ObservableAxis> {
        match self {
            MeasurementBox::S => Ok(ObservableAxis::z()),
            MeasurementBox::T => ObservableAxis::new(qubit::critical_angle(n)?),
        }
    }

    pub fn process(self, n: usize) -> Result<HiddenProcess> {
        Ok(HiddenProcess::MeasureAxis(self.axis(n)?))
    }
}

/// `σz` or `Ĥ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnitaryBox {
    SigmaZ,
    Hadamard,
}

impl UnitaryBox {
    pub fn truth(self) -> Decision {
        match self {
            UnitaryBox::SigmaZ => Decision::SigmaZ,
            UnitaryBox::Hadamard => Decision::Hadamard,
        }
    }

    pub fn operator(self) -> Operator {
        match self {
            UnitaryBox::SigmaZ => gates::pauli_z(),
            UnitaryBox::Hadamard => gates::hadamard(),
        }
    }
}

/// `Î` or `Ĵ` acting on the two-party Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BipartiteBox {
    Identity,
    J,
}

impl BipartiteBox {
    pub fn truth(self) -> Decision {
        match self {
            BipartiteBox::Identity => Decision::IdentityOp,
            BipartiteBox::J => Decision::JOp,
        }
    }

    pub fn operator(self) -> Operator {
        match self {
            BipartiteBox::Identity => fock::build_i(),
            BipartiteBox::J => fock::build_j(),
        }
    }

    /// What a single photon experiences.
    pub fn modes(self) -> Operator {
        match self {
            BipartiteBox::Identity => Operator::identity(fock::MODE_COUNT),
            BipartiteBox::J => fock::j_modes(),
        }
    }
}

/// What a protocol consumes.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Resources {
    pub unknown_uses: u32,
    pub known_unitaries: u32,
    /// Bell pairs consumed; `None` when the entangled resource is not a
    /// whole number of ebits (W states with `n > 2`).
    pub ebits: Option<u32>,
    pub probe: String,
}

pub type DecisionDistribution = BTreeMap<Decision, f64>;

/// Exact outcome histogram (in pattern order) and decision distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRun {
    pub histogram: Vec<(String, f64)>,
    pub decisions: DecisionDistribution,
}

impl ExactRun {
    pub fn probability_of(&self, decision: Decision) -> f64 {
        self.decisions.get(&decision).copied().unwrap_or(0.0)
    }
}

/// One sampled trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub pattern: String,
    pub decision: Decision,
}

fn qubit_readout_exact(
    prepared: &Ensemble,
    axes: &[ObservableAxis],
    decide: impl Fn(&OutcomePattern) -> Result<Decision>,
) -> Result<ExactRun> {
    let mut histogram: BTreeMap<OutcomePattern, f64> = BTreeMap::new();
    for (weight, state) in prepared.components() {
        for (pattern, p) in measure_exact(state, axes)?.iter() {
            *histogram.entry(pattern.clone()).or_insert(0.0) += weight * p;
        }
    }
    let mut decisions = DecisionDistribution::new();
    for (pattern, p) in &histogram {
        *decisions.entry(decide(pattern)?).or_insert(0.0) += p;
    }
    Ok(ExactRun {
        histogram: histogram
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        decisions,
    })
}

/// A trial distribution laid out for repeated draws: a mixture of branches
/// (source components), each a list of outcomes. A draw picks a branch by
/// weight, then an outcome within it.
#[derive(Debug, Clone)]
pub struct TrialSampler {
    weights: Vec<f64>,
    branches: Vec<(Vec<Trial>, Vec<f64>)>,
}

impl TrialSampler {
    fn from_branches(branches: Vec<(f64, Vec<(Trial, f64)>)>) -> Self {
        let weights = branches.iter().map(|(w, _)| *w).collect();
        let branches = branches
            .into_iter()
            .map(|(_, outcomes)| outcomes.into_iter().unzip())
            .collect();
        TrialSampler { weights, branches }
    }

    fn qubit_readout(
        prepared: &Ensemble,
        axes: &[ObservableAxis],
        decide: impl Fn(&OutcomePattern) -> Result<Decision>,
    ) -> Result<Self> {
        let mut branches = Vec::with_capacity(prepared.components().len());
        for (weight, state) in prepared.components() {
            let outcomes = measure_exact(state, axes)?
                .iter()
                .map(|(pattern, p)| {
                    let trial = Trial {
                        pattern: pattern.to_string(),
                        decision: decide(pattern)?,
                    };
                    Ok((trial, p))
                })
                .collect::<Result<_>>()?;
            branches.push((*weight, outcomes));
        }
        Ok(Self::from_branches(branches))
    }

    pub fn measurement_qpd(n: usize, hidden: MeasurementBox, prepared: &Ensemble) -> Result<Self> {
        Self::qubit_readout(prepared, &vec![hidden.axis(n)?; n], decide_measurement_qpd)
    }

    pub fn unitary_entangled(hidden: UnitaryBox, prepared: &Ensemble) -> Result<Self> {
        let evolved = both_qubits(hidden, prepared)?;
        Self::qubit_readout(
            &evolved,
            &[ObservableAxis::z(); 2],
            decide_unitary_entangled,
        )
    }

    /// The readout flip is a second branch holding the flipped outcomes.
    pub fn unitary_unentangled(hidden: UnitaryBox, flip_probability: f64) -> Result<Self> {
        check_unit_interval("flip probability", flip_probability)?;
        let clean = measure_exact(&sandwich(hidden)?, &[ObservableAxis::z()])?;
        let branch = |flipped: bool| -> Result<Vec<(Trial, f64)>> {
            clean
                .iter()
                .map(|(pattern, p)| {
                    let pattern = if flipped {
                        flip(pattern)
                    } else {
                        pattern.clone()
                    };
                    let trial = Trial {
                        decision: decide_unitary_unentangled(&pattern)?,
                        pattern: pattern.to_string(),
                    };
                    Ok((trial, p))
                })
                .collect()
        };
        Ok(Self::from_branches(vec![
            (1.0 - flip_probability, branch(false)?),
            (flip_probability, branch(true)?),
        ]))
    }

    pub fn pauli_unentangled(hidden: PauliId) -> Result<Self> {
        let state = Ensemble::pure(pauli_unentangled_state(hidden)?);
        Self::qubit_readout(&state, &PAULI_AXES, decode_pauli_unentangled)
    }

    pub fn pauli_entangled(hidden: PauliId) -> Result<Self> {
        let dist = bell_measure(&pauli_entangled_state(hidden)?)?;
        let outcomes = dist
            .iter()
            .map(|(bell, p)| {
                let trial = Trial {
                    pattern: bell.label().to_string(),
                    decision: decode_pauli_entangled(*bell),
                };
                (trial, *p)
            })
            .collect();
        Ok(Self::from_branches(vec![(1.0, outcomes)]))
    }

    /// Interfering pairs with weight `visibility`, distinguishable pairs
    /// with the rest.
    pub fn locc(hidden: BipartiteBox, visibility: f64) -> Result<Self> {
        check_unit_interval("visibility", visibility)?;
        let branch = |dist: DetectorDistribution| -> Result<Vec<(Trial, f64)>> {
            dist.into_iter()
                .filter(|(_, p)| *p > 0.0)
                .map(|(pattern, p)| {
                    let trial = Trial {
                        pattern: pattern.to_string(),
                        decision: locc_decision(&pattern, visibility)?,
                    };
                    Ok((trial, p))
                })
                .collect()
        };
        let mut branches = vec![(
            visibility,
            branch(locc_detector_distribution(hidden, 1.0)?)?,
        )];
        if visibility < 1.0 {
            let classical =
                fock::distinguishable_detector_distribution(&hidden.modes(), &LOCC_INPUT_MODES)?;
            branches.push((1.0 - visibility, branch(classical)?));
        }
        Ok(Self::from_branches(branches))
    }

    pub fn draw(&self, stream: &mut RandomStream) -> Trial {
        let (trials, probabilities) = &self.branches[stream.choose_weighted(&self.weights)];
        trials[stream.choose_weighted(probabilities)].clone()
    }
}

// ---------------------------------------------------------------------------
// Entanglement-assisted measurement discrimination

/// Exactly one `−1` means `Ŝ`; anything else means `T̂`.
pub fn decide_measurement_qpd(pattern: &OutcomePattern) -> Result<Decision> {
    if pattern.len() < 2 {
        return Err(Error::BadArity {
            what: "measurement discrimination pattern",
            min: 2,
            got: pattern.len(),
        });
    }
    Ok(if pattern.count_minus() == 1 {
        Decision::S
    } else {
        Decision::T
    })
}

pub fn measurement_qpd_resources(n: usize) -> Resources {
    Resources {
        unknown_uses: n as u32,
        known_unitaries: 0,
        ebits: (n == 2).then_some(1),
        probe: format!("W({n})"),
    }
}

/// Measures every qubit of `prepared` (a W(n) source) with the hidden axis.
pub fn measurement_qpd_exact(
    n: usize,
    hidden: MeasurementBox,
    prepared: &Ensemble,
) -> Result<ExactRun> {
    let axes = vec![hidden.axis(n)?; n];
    qubit_readout_exact(prepared, &axes, decide_measurement_qpd)
}

pub fn measurement_qpd_sample(
    n: usize,
    hidden: MeasurementBox,
    prepared: &Ensemble,
    stream: &mut RandomStream,
) -> Result<Trial> {
    Ok(TrialSampler::measurement_qpd(n, hidden, prepared)?.draw(stream))
}

/// Ideal W(n) probe.
pub fn run_measurement_qpd(n: usize, hidden: MeasurementBox) -> Result<DecisionDistribution> {
    let source = Ensemble::pure(qubit::w_state(n)?);
    Ok(measurement_qpd_exact(n, hidden, &source)?.decisions)
}

// ---------------------------------------------------------------------------
// Entanglement-assisted σz / Ĥ discrimination

/// Anti-correlated `z⊗z` readout means the state was left invariant (`σz`);
/// correlated means `Ĥ⊗Ĥ` rotated it to `φ⁻`.
pub fn decide_unitary_entangled(pattern: &OutcomePattern) -> Result<Decision> {
    if pattern.len() != 2 {
        return Err(Error::BadArity {
            what: "two-qubit pattern",
            min: 2,
            got: pattern.len(),
        });
    }
    Ok(if pattern.count_minus() == 1 {
        Decision::SigmaZ
    } else {
        Decision::Hadamard
    })
}

pub fn unitary_entangled_resources() -> Resources {
    Resources {
        unknown_uses: 2,
        known_unitaries: 0,
        ebits: Some(1),
        probe: "psi+".into(),
    }
}

fn both_qubits(hidden: UnitaryBox, prepared: &Ensemble) -> Result<Ensemble> {
    let u = hidden.operator();
    let uu = u.tensor(&u);
    prepared.map_states(|s| uu.apply(s))
}

pub fn unitary_entangled_exact(hidden: UnitaryBox, prepared: &Ensemble) -> Result<ExactRun> {
    let evolved = both_qubits(hidden, prepared)?;
    qubit_readout_exact(
        &evolved,
        &[ObservableAxis::z(); 2],
        decide_unitary_entangled,
    )
}

pub fn unitary_entangled_sample(
    hidden: UnitaryBox,
    prepared: &Ensemble,
    stream: &mut RandomStream,
) -> Result<Trial> {
    Ok(TrialSampler::unitary_entangled(hidden, prepared)?.draw(stream))
}

pub fn run_unitary_qpd_entangled(hidden: UnitaryBox) -> Result<DecisionDistribution> {
    Ok(unitary_entangled_exact(hidden, &Ensemble::pure(bell_psi_plus()))?.decisions)
}

// ---------------------------------------------------------------------------
// σz / Ĥ discrimination without entanglement: Û σz Û |0⟩

pub fn decide_unitary_unentangled(pattern: &OutcomePattern) -> Result<Decision> {
    if pattern.len() != 1 {
        return Err(Error::BadArity {
            what: "single-qubit pattern",
            min: 1,
            got: pattern.len(),
        });
    }
    Ok(if pattern.count_minus() == 0 {
        Decision::SigmaZ
    } else {
        Decision::Hadamard
    })
}

pub fn unitary_unentangled_resources() -> Resources {
    Resources {
        unknown_uses: 2,
        known_unitaries: 1,
        ebits: Some(0),
        probe: "|0>".into(),
    }
}

fn sandwich(hidden: UnitaryBox) -> Result<PureState> {
    let u = hidden.operator();
    let circuit = &(&u * &gates::pauli_z()) * &u;
    circuit.apply(&qubit::ket(false))
}

fn flip(pattern: &OutcomePattern) -> OutcomePattern {
    use crate::qubit::Outcome;
    OutcomePattern(
        pattern
            .0
            .iter()
            .map(|o| match o {
                Outcome::Plus => Outcome::Minus,
                Outcome::Minus => Outcome::Plus,
            })
            .collect(),
    )
}

/// `flip_probability` flips the recorded outcome (a readout error model).
pub fn unitary_unentangled_exact(hidden: UnitaryBox, flip_probability: f64) -> Result<ExactRun> {
    check_unit_interval("flip probability", flip_probability)?;
    let state = sandwich(hidden)?;
    let clean = measure_exact(&state, &[ObservableAxis::z()])?;
    let mut histogram: BTreeMap<OutcomePattern, f64> = BTreeMap::new();
    for (pattern, p) in clean.iter() {
        *histogram.entry(pattern.clone()).or_insert(0.0) += p * (1.0 - flip_probability);
        *histogram.entry(flip(pattern)).or_insert(0.0) += p * flip_probability;
    }
    let mut decisions = DecisionDistribution::new();
    for (pattern, p) in &histogram {
        *decisions
            .entry(decide_unitary_unentangled(pattern)?)
            .or_insert(0.0) += p;
    }
    Ok(ExactRun {
        histogram: histogram
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        decisions,
    })
}

pub fn unitary_unentangled_sample(
    hidden: UnitaryBox,
    flip_probability: f64,
    stream: &mut RandomStream,
) -> Result<Trial> {
    Ok(TrialSampler::unitary_unentangled(hidden, flip_probability)?.draw(stream))
}

pub fn run_unitary_qpd_unentangled(hidden: UnitaryBox) -> Result<DecisionDistribution> {
    Ok(unitary_unentangled_exact(hidden, 0.0)?.decisions)
}

// ---------------------------------------------------------------------------
// Pauli set {I, X, Y, Z}

/// `(z of U|0⟩, x of U|+⟩)`: `++ → I`, `+- → Z`, `-+ → X`, `-- → Y`.
pub fn decode_pauli_unentangled(pattern: &OutcomePattern) -> Result<Decision> {
    use crate::qubit::Outcome::{Minus, Plus};
    match pattern.0.as_slice() {
        [Plus, Plus] => Ok(Decision::Pauli(PauliId::I)),
        [Plus, Minus] => Ok(Decision::Pauli(PauliId::Z)),
        [Minus, Plus] => Ok(Decision::Pauli(PauliId::X)),
        [Minus, Minus] => Ok(Decision::Pauli(PauliId::Y)),
        _ => Err(Error::BadArity {
            what: "two-qubit pattern",
            min: 2,
            got: pattern.len(),
        }),
    }
}

pub fn pauli_unentangled_resources() -> Resources {
    Resources {
        unknown_uses: 2,
        known_unitaries: 0,
        ebits: Some(0),
        probe: "|0>|+>".into(),
    }
}

fn pauli_unentangled_state(hidden: PauliId) -> Result<PureState> {
    let u = hidden.operator();
    u.tensor(&u)
        .apply(&qubit::ket(false).tensor(&qubit::ket_plus()))
}

const PAULI_AXES: [ObservableAxis; 2] = [ObservableAxis::Z, ObservableAxis::X];

pub fn pauli_unentangled_exact(hidden: PauliId) -> Result<ExactRun> {
    let state = Ensemble::pure(pauli_unentangled_state(hidden)?);
    qubit_readout_exact(&state, &PAULI_AXES, decode_pauli_unentangled)
}

pub fn pauli_unentangled_sample(hidden: PauliId, stream: &mut RandomStream) -> Result<Trial> {
    Ok(TrialSampler::pauli_unentangled(hidden)?.draw(stream))
}

pub fn decode_pauli_entangled(bell: BellState) -> Decision {
    Decision::Pauli(match bell {
        BellState::PsiPlus => PauliId::I,
        BellState::PsiMinus => PauliId::Z,
        BellState::PhiPlus => PauliId::X,
        BellState::PhiMinus => PauliId::Y,
    })
}

pub fn pauli_entangled_resources() -> Resources {
    Resources {
        unknown_uses: 1,
        known_unitaries: 0,
        ebits: Some(1),
        probe: "psi+".into(),
    }
}

fn pauli_entangled_state(hidden: PauliId) -> Result<PureState> {
    hidden
        .operator()
        .tensor(&gates::identity())
        .apply(&bell_psi_plus())
}

pub fn pauli_entangled_exact(hidden: PauliId) -> Result<ExactRun> {
    let dist = bell_measure(&pauli_entangled_state(hidden)?)?;
    let mut decisions = DecisionDistribution::new();
    for (bell, p) in &dist {
        *decisions
            .entry(decode_pauli_entangled(*bell))
            .or_insert(0.0) += p;
    }
    Ok(ExactRun {
        histogram: dist
            .iter()
            .map(|(b, p)| (b.label().to_string(), *p))
            .collect(),
        decisions,
    })
}

pub fn pauli_entangled_sample(hidden: PauliId, stream: &mut RandomStream) -> Result<Trial> {
    Ok(TrialSampler::pauli_entangled(hidden)?.draw(stream))
}

fn point_mass(decisions: &DecisionDistribution) -> Result<Decision> {
    decisions
        .iter()
        .find(|&(_, &p)| p >= 1.0 - Tolerances::DEFAULT.nullity)
        .map(|(d, _)| *d)
        .ok_or_else(|| Error::Malformed("decision distribution is not deterministic".into()))
}

/// Two unentangled qubits, two uses.
pub fn discriminate_pauli_unentangled(hidden: PauliId) -> Result<PauliId> {
    match point_mass(&pauli_unentangled_exact(hidden)?.decisions)? {
        Decision::Pauli(p) => Ok(p),
        other => Err(Error::Malformed(format!("unexpected decision {other}"))),
    }
}

/// One half of `ψ⁺` through the box, then a Bell measurement.
pub fn discriminate_pauli_entangled(hidden: PauliId) -> Result<PauliId> {
    match point_mass(&pauli_entangled_exact(hidden)?.decisions)? {
        Decision::Pauli(p) => Ok(p),
        other => Err(Error::Malformed(format!("unexpected decision {other}"))),
    }
}

// ---------------------------------------------------------------------------
// LOCC discrimination of Î and Ĵ on the two-party Fock space

pub fn locc_resources() -> Resources {
    Resources {
        unknown_uses: 1,
        known_unitaries: 0,
        ebits: Some(0),
        probe: fock::locc_probe().to_string(),
    }
}

const LOCC_INPUT_MODES: [Mode; 2] = [Mode::AliceV, Mode::BobH];

/// Detector statistics for the `|2⟩_A|1⟩_B` probe. A fraction
/// `1 − visibility` of pairs is fully distinguishable and does not
/// interfere.
pub fn locc_detector_distribution(
    hidden: BipartiteBox,
    visibility: f64,
) -> Result<DetectorDistribution> {
    check_unit_interval("visibility", visibility)?;
    let evolved = hidden.operator().apply(&fock::locc_probe().to_state())?;
    let mut dist = fock::detector_distribution(&evolved)?;
    if visibility < 1.0 {
        for p in dist.values_mut() {
            *p *= visibility;
        }
        let classical =
            fock::distinguishable_detector_distribution(&hidden.modes(), &LOCC_INPUT_MODES)?;
        for (pattern, p) in classical {
            *dist.entry(pattern).or_insert(0.0) += (1.0 - visibility) * p;
        }
    }
    Ok(dist)
}

/// With noise, patterns outside the LOCC rule become `Inconclusive`; in the
/// ideal model they are a convention error and propagate.
fn locc_decision(pattern: &fock::DetectorPattern, visibility: f64) -> Result<Decision> {
    match fock::decide_locc(pattern) {
        Err(Error::UnexpectedPattern(_)) if visibility < 1.0 => Ok(Decision::Inconclusive),
        other => other,
    }
}

pub fn locc_exact(hidden: BipartiteBox, visibility: f64) -> Result<ExactRun> {
    let dist = locc_detector_distribution(hidden, visibility)?;
    let mut decisions = DecisionDistribution::new();
    for (pattern, p) in &dist {
        if *p > 0.0 {
            *decisions
                .entry(locc_decision(pattern, visibility)?)
                .or_insert(0.0) += p;
        }
    }
    Ok(ExactRun {
        histogram: dist.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        decisions,
    })
}

pub fn locc_sample(
    hidden: BipartiteBox,
    visibility: f64,
    stream: &mut RandomStream,
) -> Result<Trial> {
    Ok(TrialSampler::locc(hidden, visibility)?.draw(stream))
}

pub fn run_locc(hidden: BipartiteBox) -> Result<DecisionDistribution> {
    Ok(locc_exact(hidden, 1.0)?.decisions)
}

// ---------------------------------------------------------------------------
// Angle of distinguishability

/// Anything with a Bloch axis: an [`ObservableAxis`] or a traceless
/// Hermitian unitary `n̂·σ`.
pub trait BlochAxis {
    fn bloch_vector(&self) -> Result<[f64; 3]>;
}

impl BlochAxis for ObservableAxis {
    fn bloch_vector(&self) -> Result<[f64; 3]> {
        Ok(ObservableAxis::bloch_vector(self))
    }
}

impl BlochAxis for Operator {
    fn bloch_vector(&self) -> Result<[f64; 3]> {
        let tol = Tolerances::DEFAULT.structural;
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        if self.trace().norm() > tol || !self.is_hermitian(tol) || !self.is_unitary(tol) {
            return Err(Error::NoAxis);
        }
        // n_k = tr(σ_k U)/2
        let component = |sigma: Operator| (&sigma * self).trace().re / 2.0;
        Ok([
            component(gates::pauli_x()),
            component(gates::pauli_y()),
            component(gates::pauli_z()),
        ])
    }
}

/// Angle between two Bloch axes, `arccos(n̂_a · n̂_b)`.
pub fn bloch_angle(a: &impl BlochAxis, b: &impl BlochAxis) -> Result<f64> {
    let (na, nb) = (a.bloch_vector()?, b.bloch_vector()?);
    let dot: f64 = na.iter().zip(&nb).map(|(x, y)| x * y).sum();
    Ok(dot.clamp(-1.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn pat(s: &str) -> OutcomePattern {
        s.parse().unwrap()
    }

    #[test]
    fn measurement_rule() {
        assert_eq!(decide_measurement_qpd(&pat("+-")).unwrap(), Decision::S);
        assert_eq!(decide_measurement_qpd(&pat("--")).unwrap(), Decision::T);
        assert_eq!(decide_measurement_qpd(&pat("++")).unwrap(), Decision::T);
        assert_eq!(decide_measurement_qpd(&pat("+-+")).unwrap(), Decision::S);
        assert_eq!(decide_measurement_qpd(&pat("--+")).unwrap(), Decision::T);
        assert!(matches!(
            decide_measurement_qpd(&pat("-")),
            Err(Error::BadArity { .. })
        ));
    }

    #[test]
    fn measurement_qpd_is_deterministic() {
        for n in 2..=6 {
            for hidden in [MeasurementBox::S, MeasurementBox::T] {
                let d = run_measurement_qpd(n, hidden).unwrap();
                let p = d.get(&hidden.truth()).copied().unwrap_or(0.0);
                assert!(p >= 1.0 - 1e-10, "n={n} {hidden:?}: {d:?}");
            }
        }
        assert!(run_measurement_qpd(1, MeasurementBox::S).is_err());
    }

    #[test]
    fn unitary_protocols() {
        for hidden in [UnitaryBox::SigmaZ, UnitaryBox::Hadamard] {
            let d = run_unitary_qpd_entangled(hidden).unwrap();
            assert!(d[&hidden.truth()] >= 1.0 - 1e-10);
            let d = run_unitary_qpd_unentangled(hidden).unwrap();
            assert!(d[&hidden.truth()] >= 1.0 - 1e-10);
        }
        assert_eq!(unitary_entangled_resources().unknown_uses, 2);
        let r = unitary_unentangled_resources();
        assert_eq!(
            (r.unknown_uses, r.known_unitaries, r.ebits),
            (2, 1, Some(0))
        );
    }

    #[test]
    fn hadamard_maps_psi_plus_to_phi_minus() {
        let h = gates::hadamard();
        let out = h.tensor(&h).apply(&bell_psi_plus()).unwrap();
        assert!(out.same_ray(&qubit::bell_phi_minus(), 1e-12));
    }

    #[test]
    fn flip_probability_degrades_unentangled_scheme() {
        let run = unitary_unentangled_exact(UnitaryBox::Hadamard, 0.1).unwrap();
        assert!((run.probability_of(Decision::Hadamard) - 0.9).abs() < 1e-12);
        assert!(unitary_unentangled_exact(UnitaryBox::Hadamard, 1.1).is_err());
    }

    #[test]
    fn pauli_codes() {
        for p in PauliId::ALL {
            assert_eq!(discriminate_pauli_unentangled(p).unwrap(), p);
            assert_eq!(discriminate_pauli_entangled(p).unwrap(), p);
        }
        assert_eq!(
            decode_pauli_unentangled(&pat("+-")).unwrap(),
            Decision::Pauli(PauliId::Z)
        );
        assert_eq!(
            decode_pauli_unentangled(&pat("--")).unwrap(),
            Decision::Pauli(PauliId::Y)
        );
    }

    #[test]
    fn locc_ideal_and_noisy() {
        assert!(run_locc(BipartiteBox::Identity).unwrap()[&Decision::IdentityOp] >= 1.0 - 1e-10);
        assert!(run_locc(BipartiteBox::J).unwrap()[&Decision::JOp] >= 1.0 - 1e-10);
        let noisy = locc_exact(BipartiteBox::J, 0.5).unwrap();
        let total: f64 = noisy.decisions.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(noisy.probability_of(Decision::Inconclusive) > 0.0);
        // identity never interferes, so visibility is irrelevant
        let id = locc_exact(BipartiteBox::Identity, 0.3).unwrap();
        assert!((id.probability_of(Decision::IdentityOp) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bloch_angles() {
        assert!(
            (bloch_angle(&ObservableAxis::z(), &ObservableAxis::x()).unwrap() - PI / 2.0).abs()
                <= 1e-12
        );
        assert!(
            (bloch_angle(&gates::pauli_z(), &gates::hadamard()).unwrap() - PI / 4.0).abs() <= 1e-12
        );
        assert_eq!(
            bloch_angle(&gates::pauli_z(), &gates::pauli_z()).unwrap(),
            0.0
        );
        assert!(matches!(
            bloch_angle(&gates::identity(), &gates::pauli_z()),
            Err(Error::NoAxis)
        ));
    }
}
