//! Qubit registers, named gates, Bloch-axis observables and projective
//! measurement.
//!
//! Qubit 0 is the most significant bit of the basis index, so `|01⟩` is
//! index 1 and `|10⟩` is index 2.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{C64, Ensemble, Operator, PureState, ZERO};
use crate::rng::RandomStream;

pub mod gates {
    use super::*;

    pub fn identity() -> Operator {
        Operator::identity(2)
    }

    pub fn pauli_x() -> Operator {
        Operator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn pauli_y() -> Operator {
        Operator::from_row_major(2, &[ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).unwrap()
    }

    pub fn pauli_z() -> Operator {
        Operator::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    /// `(σz + σx)/√2`.
    pub fn hadamard() -> Operator {
        let s = FRAC_1_SQRT_2;
        Operator::from_real(2, &[s, s, s, -s]).unwrap()
    }

    /// Looks up `i`, `x`, `y`, `z` or `h` (case-insensitive).
    pub fn named(name: &str) -> Option<Operator> {
        match name.to_ascii_lowercase().as_str() {
            "i" | "identity" => Some(identity()),
            "x" | "sigma_x" => Some(pauli_x()),
            "y" | "sigma_y" => Some(pauli_y()),
            "z" | "sigma_z" => Some(pauli_z()),
            "h" | "hadamard" => Some(hadamard()),
            _ => None,
        }
    }
}

/// Applies a single-qubit operator to `qubit` of an `n`-qubit state.
pub fn apply_to_qubit(gate: &Operator, state: &PureState, qubit: usize) -> Result<PureState> {
    let n = qubit_count(state.dim())?;
    if gate.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: gate.dim(),
        });
    }
    if qubit >= n {
        return Err(Error::BadArity {
            what: "qubit index",
            min: qubit + 1,
            got: n,
        });
    }
    let stride = 1usize << (n - 1 - qubit);
    let mut out = state.amplitudes().to_vec();
    for base in 0..state.dim() {
        if base & stride != 0 {
            continue;
        }
        let a0 = state.amplitude(base);
        let a1 = state.amplitude(base | stride);
        out[base] = gate.get(0, 0) * a0 + gate.get(0, 1) * a1;
        out[base | stride] = gate.get(1, 0) * a0 + gate.get(1, 1) * a1;
    }
    Ok(PureState::from_vector_unchecked(
        nalgebra::DVector::from_vec(out),
    ))
}

fn qubit_count(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() && dim >= 2 {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::Malformed(format!(
            "dimension {dim} is not a qubit register"
        )))
    }
}

/// A ±1-valued observable `cos θ σz + sin θ σx` in the x-z plane of the
/// Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableAxis {
    theta: f64,
}

impl ObservableAxis {
    pub fn new(theta: f64) -> Result<Self> {
        if (0.0..=PI).contains(&theta) {
            Ok(ObservableAxis { theta })
        } else {
            Err(Error::out_of_range("axis angle", theta, 0.0, PI))
        }
    }

    pub const Z: ObservableAxis = ObservableAxis { theta: 0.0 };
    pub const X: ObservableAxis = ObservableAxis { theta: PI / 2.0 };

    pub fn z() -> Self {
        Self::Z
    }

    pub fn x() -> Self {
        Self::X
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        [self.theta.sin(), 0.0, self.theta.cos()]
    }

    pub fn observable(&self) -> Operator {
        let (s, c) = self.theta.sin_cos();
        Operator::from_real(2, &[c, s, s, -c]).unwrap()
    }

    /// Eigenvectors `(+1, −1)`. Each has a non-negative `⟨0|` component;
    /// when that component vanishes the `⟨1|` component is positive.
    pub fn eigenvectors(&self) -> [[f64; 2]; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        let plus = [c, s];
        let minus = if s <= 0.0 { [0.0, 1.0] } else { [s, -c] };
        [plus, minus]
    }

    pub fn projector(&self, outcome: Outcome) -> Operator {
        let v = self.eigenvectors()[outcome.index()];
        Operator::from_real(2, &[v[0] * v[0], v[0] * v[1], v[1] * v[0], v[1] * v[1]]).unwrap()
    }

    /// Unitary whose rows are the eigenvectors, mapping the `+1`/`−1`
    /// eigenvectors onto `|0⟩`/`|1⟩`.
    fn to_eigenbasis(self) -> Operator {
        let [p, m] = self.eigenvectors();
        Operator::from_real(2, &[p[0], p[1], m[0], m[1]]).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn eigenvalue(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }
}

/// Per-qubit eigenvalues of one measurement record.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomePattern(pub Vec<Outcome>);

impl OutcomePattern {
    /// Pattern whose bits (qubit 0 most significant) are 1 for `−1`.
    pub fn from_index(index: usize, qubits: usize) -> Self {
        OutcomePattern(
            (0..qubits)
                .map(|q| {
                    if index >> (qubits - 1 - q) & 1 == 1 {
                        Outcome::Minus
                    } else {
                        Outcome::Plus
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count_minus(&self) -> usize {
        self.0.iter().filter(|&&o| o == Outcome::Minus).count()
    }

    pub fn eigenvalues(&self) -> Vec<i8> {
        self.0.iter().map(|o| o.eigenvalue()).collect()
    }
}

impl fmt::Display for OutcomePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.0 {
            f.write_str(match o {
                Outcome::Plus => "+",
                Outcome::Minus => "-",
            })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for OutcomePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Outcome::Plus),
                '-' | '−' => Ok(Outcome::Minus),
                _ => Err(Error::Malformed(format!("bad outcome symbol {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(OutcomePattern)
    }
}

/// Exact probabilities of every outcome pattern, in pattern order
/// (`+` before `−`, qubit 0 first).
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    table: BTreeMap<OutcomePattern, f64>,
}

impl OutcomeDistribution {
    pub fn probability(&self, pattern: &OutcomePattern) -> f64 {
        self.table.get(pattern).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OutcomePattern, f64)> {
        self.table.iter().map(|(k, v)| (k, *v))
    }

    pub fn total(&self) -> f64 {
        self.table.values().sum()
    }

    /// Total probability of patterns matching `pred`.
    pub fn mass_where(&self, pred: impl Fn(&OutcomePattern) -> bool) -> f64 {
        self.iter().filter(|(p, _)| pred(p)).map(|(_, w)| w).sum()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Measures qubit `k` of `state` along `axes[k]`.
pub fn measure_exact(state: &PureState, axes: &[ObservableAxis]) -> Result<OutcomeDistribution> {
    let expected = 1usize
        .checked_shl(axes.len() as u32)
        .ok_or_else(|| Error::Malformed("too many qubits".into()))?;
    if state.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: state.dim(),
        });
    }
    let mut rotated = state.clone();
    for (q, axis) in axes.iter().enumerate() {
        rotated = apply_to_qubit(&axis.to_eigenbasis(), &rotated, q)?;
    }
    let table = (0..rotated.dim())
        .map(|i| {
            (
                OutcomePattern::from_index(i, axes.len()),
                rotated.probability(i),
            )
        })
        .collect();
    Ok(OutcomeDistribution { table })
}

/// Draws one pattern. Ensembles are sampled hierarchically: a component by
/// weight, then an outcome from that component's exact distribution.
pub fn measure_sample(
    source: &Ensemble,
    axes: &[ObservableAxis],
    stream: &mut RandomStream,
) -> Result<OutcomePattern> {
    let weights: Vec<f64> = source.components().iter().map(|(w, _)| *w).collect();
    let component = stream.choose_weighted(&weights);
    let dist = measure_exact(&source.components()[component].1, axes)?;
    let probabilities: Vec<f64> = dist.iter().map(|(_, p)| p).collect();
    let index = stream.choose_weighted(&probabilities);
    Ok(OutcomePattern::from_index(index, axes.len()))
}

fn from_real_unchecked(amps: &[f64]) -> PureState {
    PureState::from_real(amps).expect("normalized constant")
}

/// `(|00⟩ + |11⟩)/√2`
pub fn bell_phi_plus() -> PureState {
    let s = FRAC_1_SQRT_2;
    from_real_unchecked(&[s, 0.0, 0.0, s])
}

/// `(|00⟩ − |11⟩)/√2`
pub fn bell_phi_minus() -> PureState {
    let s = FRAC_1_SQRT_2;
    from_real_unchecked(&[s, 0.0, 0.0, -s])
}

/// `(|01⟩ + |10⟩)/√2`
pub fn bell_psi_plus() -> PureState {
    let s = FRAC_1_SQRT_2;
    from_real_unchecked(&[0.0, s, s, 0.0])
}

/// `(|01⟩ − |10⟩)/√2`
pub fn bell_psi_minus() -> PureState {
    let s = FRAC_1_SQRT_2;
    from_real_unchecked(&[0.0, s, -s, 0.0])
}

/// `|+⟩ = (|0⟩ + |1⟩)/√2`
pub fn ket_plus() -> PureState {
    let s = FRAC_1_SQRT_2;
    from_real_unchecked(&[s, s])
}

/// Equal superposition of the `n` weight-one basis states.
pub fn w_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::BadArity {
            what: "W state",
            min: 2,
            got: n,
        });
    }
    if n > 20 {
        return Err(Error::Malformed(format!(
            "W state with {n} qubits is too large"
        )));
    }
    let amp = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![ZERO; 1 << n];
    for q in 0..n {
        amps[1 << q] = amp;
    }
    PureState::normalized(amps)
}

/// Angle between the two observables that a W(n) probe separates:
/// `2·arctan(1/√(n−1))`.
pub fn critical_angle(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::BadArity {
            what: "critical angle",
            min: 2,
            got: n,
        });
    }
    Ok(2.0 * (1.0 / ((n - 1) as f64).sqrt()).atan())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn state(self) -> PureState {
        match self {
            BellState::PhiPlus => bell_phi_plus(),
            BellState::PhiMinus => bell_phi_minus(),
            BellState::PsiPlus => bell_psi_plus(),
            BellState::PsiMinus => bell_psi_minus(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }
}

/// Projects a two-qubit state onto the Bell basis.
pub fn bell_measure(state: &PureState) -> Result<BTreeMap<BellState, f64>> {
    if state.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: state.dim(),
        });
    }
    Ok(BellState::ALL
        .iter()
        .map(|&b| (b, b.state().fidelity(state)))
        .collect())
}

/// `|0⟩` or `|1⟩`.
pub fn ket(bit: bool) -> PureState {
    PureState::basis(2, usize::from(bit))
}
