//! Two-party linear optics on a truncated Fock space.
//!
//! Four modes: Alice's H and V polarizations and Bob's (`A_H=0, A_V=1,
//! B_H=2, B_V=3`). States carry at most two photons in total, which gives
//! a 15-dimensional space ordered by ascending photon number, then
//! lexicographically by occupation tuple.
//!
//! Each party's local state is also addressable by a label `0..=5`:
//! `|0⟩` vacuum, `|1⟩ = |1_H⟩`, `|2⟩ = |1_V⟩`, `|3⟩ = |2_H⟩`,
//! `|4⟩ = |1_H 1_V⟩`, `|5⟩ = |2_V⟩`.
//!
//! A mode unitary `u` acts on creation operators as
//! `a_j† ↦ Σ_i u[i][j] a_i†` (column `j` is the image of mode `j`); its
//! lift to the Fock space has entries
//! `⟨m|U|n⟩ = perm(u[m, n]) / √(Π m_i! Π n_j!)`, where `u[m, n]` repeats
//! row `i` `m_i` times and column `j` `n_j` times.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{C64, Operator, PureState, Tolerances, ZERO};
use crate::protocols::Decision;

pub const MODE_COUNT: usize = 4;
pub const PHOTON_CUTOFF: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    AliceH = 0,
    AliceV = 1,
    BobH = 2,
    BobV = 3,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::AliceH, Mode::AliceV, Mode::BobH, Mode::BobV];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Occupation-number basis of `modes` bosonic modes holding at most
/// `cutoff` photons.
#[derive(Debug, Clone)]
pub struct FockSpace {
    modes: usize,
    cutoff: usize,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl FockSpace {
    pub fn new(modes: usize, cutoff: usize) -> Self {
        let mut states = Vec::new();
        for total in 0..=cutoff {
            let mut sector = Vec::new();
            compositions(modes, total, &mut Vec::with_capacity(modes), &mut sector);
            sector.sort();
            states.extend(sector);
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        FockSpace {
            modes,
            cutoff,
            states,
            index,
        }
    }

    /// The 15-dimensional two-party space.
    pub fn two_party() -> Self {
        Self::new(MODE_COUNT, PHOTON_CUTOFF)
    }

    /// One party's 6-dimensional space, modes `(H, V)`.
    pub fn single_party() -> Self {
        Self::new(2, PHOTON_CUTOFF)
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn occupations(&self, index: usize) -> &[u8] {
        &self.states[index]
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn index_of(&self, occupations: &[u8]) -> Result<usize> {
        let photons: usize = occupations.iter().map(|&n| n as usize).sum();
        if photons > self.cutoff {
            return Err(Error::ExceedsCutoff {
                photons,
                cutoff: self.cutoff,
            });
        }
        self.index.get(occupations).copied().ok_or_else(|| {
            Error::Malformed(format!("{occupations:?} is not a state of this space"))
        })
    }

    pub fn basis_state(&self, occupations: &[u8]) -> Result<PureState> {
        Ok(PureState::basis(self.dim(), self.index_of(occupations)?))
    }

    /// Lifts a mode unitary to the Fock space. The result is block
    /// diagonal in total photon number.
    pub fn lift(&self, u: &Operator) -> Result<Operator> {
        if u.dim() != self.modes {
            return Err(Error::DimensionMismatch {
                expected: self.modes,
                found: u.dim(),
            });
        }
        u.ensure_unitary(Tolerances::DEFAULT.structural)?;
        let dim = self.dim();
        let mut entries = vec![ZERO; dim * dim];
        for (r, m) in self.states.iter().enumerate() {
            for (c, n) in self.states.iter().enumerate() {
                if photon_count(m) != photon_count(n) {
                    continue;
                }
                let rows = repeated_modes(m);
                let cols = repeated_modes(n);
                let norm = (factorial_product(m) * factorial_product(n)).sqrt();
                entries[r * dim + c] = permanent(u, &rows, &cols) / norm;
            }
        }
        Operator::from_row_major(dim, &entries)
    }
}

fn compositions(modes: usize, remaining: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if prefix.len() + 1 == modes {
        prefix.push(remaining as u8);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for k in 0..=remaining {
        prefix.push(k as u8);
        compositions(modes, remaining - k, prefix, out);
        prefix.pop();
    }
}

fn photon_count(occupations: &[u8]) -> usize {
    occupations.iter().map(|&n| n as usize).sum()
}

fn repeated_modes(occupations: &[u8]) -> Vec<usize> {
    occupations
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| std::iter::repeat_n(i, n as usize))
        .collect()
}

fn factorial_product(occupations: &[u8]) -> f64 {
    occupations
        .iter()
        .map(|&n| (1..=n as u64).product::<u64>() as f64)
        .product()
}

/// Permanent of `u[rows, cols]` by expansion along the first row.
fn permanent(u: &Operator, rows: &[usize], cols: &[usize]) -> C64 {
    match rows.split_first() {
        None => C64::new(1.0, 0.0),
        Some((&r, rest)) => {
            let mut acc = ZERO;
            for (k, &c) in cols.iter().enumerate() {
                let mut remaining = cols.to_vec();
                remaining.remove(k);
                acc += u.get(r, c) * permanent(u, rest, &remaining);
            }
            acc
        }
    }
}

/// One party's local Fock label `0..=5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalLabel(u8);

impl LocalLabel {
    /// `(n_H, n_V)` for each label.
    const OCCUPATIONS: [(u8, u8); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

    pub fn new(label: u8) -> Result<Self> {
        if label < 6 {
            Ok(LocalLabel(label))
        } else {
            Err(Error::Malformed(format!(
                "local Fock label {label} is not in 0..=5"
            )))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn occupations(self) -> (u8, u8) {
        Self::OCCUPATIONS[self.0 as usize]
    }

    pub fn photons(self) -> usize {
        let (h, v) = self.occupations();
        (h + v) as usize
    }

    pub fn from_occupations(h: u8, v: u8) -> Option<Self> {
        Self::OCCUPATIONS
            .iter()
            .position(|&o| o == (h, v))
            .map(|i| LocalLabel(i as u8))
    }

    pub fn all() -> impl Iterator<Item = LocalLabel> {
        (0..6).map(LocalLabel)
    }
}

/// A basis state of the two-party space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    occupations: [u8; MODE_COUNT],
}

impl FockState {
    pub fn new(occupations: [u8; MODE_COUNT]) -> Result<Self> {
        let photons = photon_count(&occupations);
        if photons > PHOTON_CUTOFF {
            return Err(Error::ExceedsCutoff {
                photons,
                cutoff: PHOTON_CUTOFF,
            });
        }
        Ok(FockState { occupations })
    }

    pub fn from_labels(alice: LocalLabel, bob: LocalLabel) -> Result<Self> {
        let (ah, av) = alice.occupations();
        let (bh, bv) = bob.occupations();
        Self::new([ah, av, bh, bv])
    }

    pub fn occupations(&self) -> [u8; MODE_COUNT] {
        self.occupations
    }

    pub fn labels(&self) -> (LocalLabel, LocalLabel) {
        let [ah, av, bh, bv] = self.occupations;
        (
            LocalLabel::from_occupations(ah, av).expect("within cutoff"),
            LocalLabel::from_occupations(bh, bv).expect("within cutoff"),
        )
    }

    pub fn photons(&self) -> usize {
        photon_count(&self.occupations)
    }

    pub fn to_state(&self) -> PureState {
        FockSpace::two_party()
            .basis_state(&self.occupations)
            .expect("within cutoff")
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.labels();
        write!(f, "A:{},B:{}", a.value(), b.value())
    }
}

/// Parses `"A:2,B:1"` (either order, whitespace tolerated).
impl FromStr for FockState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut alice = None;
        let mut bob = None;
        for part in s.split(',') {
            let (party, label) = part
                .split_once(':')
                .ok_or_else(|| Error::Malformed(format!("expected PARTY:LABEL, got {part:?}")))?;
            let label: u8 = label
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("bad Fock label {label:?}")))?;
            let label = LocalLabel::new(label)?;
            let slot = match party.trim() {
                "A" | "a" => &mut alice,
                "B" | "b" => &mut bob,
                other => return Err(Error::Malformed(format!("unknown party {other:?}"))),
            };
            if slot.replace(label).is_some() {
                return Err(Error::Malformed(format!("party given twice in {s:?}")));
            }
        }
        FockState::from_labels(alice.unwrap_or(LocalLabel(0)), bob.unwrap_or(LocalLabel(0)))
    }
}

pub fn two_party_basis() -> Vec<FockState> {
    FockSpace::two_party()
        .states()
        .iter()
        .map(|o| FockState {
            occupations: [o[0], o[1], o[2], o[3]],
        })
        .collect()
}

/// Hadamard on a single polarization qubit, `(σz + σx)/√2`.
fn hadamard_2x2() -> [[f64; 2]; 2] {
    let s = FRAC_1_SQRT_2;
    [[s, s], [s, -s]]
}

/// The two-photon Hadamard block on `{|2_H⟩, |1_H 1_V⟩, |2_V⟩}`.
pub fn build_h3() -> Operator {
    let r = std::f64::consts::SQRT_2;
    Operator::from_real(
        3,
        &[
            0.5,
            r / 2.0,
            0.5,
            r / 2.0,
            0.0,
            -r / 2.0,
            0.5,
            -r / 2.0,
            0.5,
        ],
    )
    .unwrap()
}

/// Per-party Hadamard on labels `0..=5`: 1 on vacuum, `Ĥ` on the
/// one-photon pair, `H⁽³⁾` on the two-photon triple.
pub fn build_h6() -> Operator {
    let h = hadamard_2x2();
    let h3 = build_h3();
    let mut m = [[0.0; 6]; 6];
    m[0][0] = 1.0;
    for i in 0..2 {
        for j in 0..2 {
            m[1 + i][1 + j] = h[i][j];
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            m[3 + i][3 + j] = h3.get(i, j).re;
        }
    }
    let flat: Vec<f64> = m.iter().flatten().copied().collect();
    Operator::from_real(6, &flat).unwrap()
}

/// Re-expresses an operator on [`FockSpace::single_party`] in label order.
pub fn to_label_order(op: &Operator) -> Result<Operator> {
    let local = FockSpace::single_party();
    if op.dim() != local.dim() {
        return Err(Error::DimensionMismatch {
            expected: local.dim(),
            found: op.dim(),
        });
    }
    let perm: Vec<usize> = LocalLabel::all()
        .map(|l| {
            let (h, v) = l.occupations();
            local.index_of(&[h, v]).expect("label within cutoff")
        })
        .collect();
    let mut entries = Vec::with_capacity(36);
    for &r in &perm {
        for &c in &perm {
            entries.push(op.get(r, c));
        }
    }
    Operator::from_row_major(6, &entries)
}

/// `a ⊗ b` for two per-party operators in label order, restricted to the
/// two-party space. Both must conserve local photon number.
pub fn party_product(alice: &Operator, bob: &Operator) -> Result<Operator> {
    for op in [alice, bob] {
        if op.dim() != 6 {
            return Err(Error::DimensionMismatch {
                expected: 6,
                found: op.dim(),
            });
        }
        for r in LocalLabel::all() {
            for c in LocalLabel::all() {
                if r.photons() != c.photons()
                    && op.get(r.0 as usize, c.0 as usize).norm() > Tolerances::DEFAULT.structural
                {
                    return Err(Error::Malformed(
                        "local operator does not conserve photon number".into(),
                    ));
                }
            }
        }
    }
    let basis = two_party_basis();
    let dim = basis.len();
    let mut entries = vec![ZERO; dim * dim];
    for (i, out) in basis.iter().enumerate() {
        let (oa, ob) = out.labels();
        for (j, inp) in basis.iter().enumerate() {
            let (ia, ib) = inp.labels();
            entries[i * dim + j] =
                alice.get(oa.0 as usize, ia.0 as usize) * bob.get(ob.0 as usize, ib.0 as usize);
        }
    }
    Operator::from_row_major(dim, &entries)
}

fn direct_sum_2x2(alice: [[f64; 2]; 2], bob: [[f64; 2]; 2]) -> Operator {
    let mut m = [0.0; 16];
    for i in 0..2 {
        for j in 0..2 {
            m[i * 4 + j] = alice[i][j];
            m[(i + 2) * 4 + j + 2] = bob[i][j];
        }
    }
    Operator::from_real(4, &m).unwrap()
}

/// `Ĥ` on each party's polarization, as a mode unitary.
pub fn hadamard_modes() -> Operator {
    direct_sum_2x2(hadamard_2x2(), hadamard_2x2())
}

/// 50/50 beamsplitter mixing Alice's and Bob's spatial modes, polarization
/// preserving:
///
/// * `A_H ↦ (A_H + B_H)/√2`, `B_H ↦ (A_H − B_H)/√2`
/// * `A_V ↦ (A_V − B_V)/√2`, `B_V ↦ (A_V + B_V)/√2`
///
/// The V-pair sign is the fixed phase convention under which `Ĵ` sends
/// `|2⟩_A|1⟩_B` to `{|0,3⟩, |0,5⟩, |1,1⟩, |2,2⟩, |3,0⟩, |5,0⟩}`. A single
/// real convention for both polarizations cannot place the coincidence
/// terms on `|1,1⟩` and `|2,2⟩`.
pub fn beamsplitter_modes() -> Operator {
    let s = FRAC_1_SQRT_2;
    // rows: output mode, columns: input mode
    Operator::from_real(
        4,
        &[
            s, 0.0, s, 0.0, //
            0.0, s, 0.0, s, //
            s, 0.0, -s, 0.0, //
            0.0, -s, 0.0, s,
        ],
    )
    .unwrap()
}

/// Phase correction on spatial mode 2 (Bob's modes pick up `−1`).
pub fn phase_correction_modes() -> Operator {
    Operator::from_real(
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, -1.0, 0.0, //
            0.0, 0.0, 0.0, -1.0,
        ],
    )
    .unwrap()
}

pub fn lift_mode_unitary(u: &Operator) -> Result<Operator> {
    FockSpace::two_party().lift(u)
}

pub fn build_beamsplitter() -> Operator {
    lift_mode_unitary(&beamsplitter_modes()).expect("beamsplitter is unitary")
}

/// `Ĵ = (H⁽⁶⁾ ⊗ H⁽⁶⁾) · B̂`.
pub fn build_j() -> Operator {
    let local = party_product(&build_h6(), &build_h6()).expect("H6 conserves photon number");
    &local * &build_beamsplitter()
}

pub fn build_i() -> Operator {
    Operator::identity(FockSpace::two_party().dim())
}

/// Mode-level unitary of `Ĵ` (what a single photon experiences).
pub fn j_modes() -> Operator {
    &hadamard_modes() * &beamsplitter_modes()
}

/// `|2⟩_A ⊗ |1⟩_B`: one V photon at Alice, one H photon at Bob.
pub fn locc_probe() -> FockState {
    FockState::new([0, 1, 1, 0]).unwrap()
}

/// Photon counts at the four detectors. `+` counts H photons, `−` counts
/// V photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DetectorPattern {
    pub a_plus: u8,
    pub a_minus: u8,
    pub b_plus: u8,
    pub b_minus: u8,
}

impl DetectorPattern {
    pub fn new(a_plus: u8, a_minus: u8, b_plus: u8, b_minus: u8) -> Self {
        DetectorPattern {
            a_plus,
            a_minus,
            b_plus,
            b_minus,
        }
    }

    pub fn from_occupations(o: [u8; MODE_COUNT]) -> Self {
        Self::new(o[0], o[1], o[2], o[3])
    }

    pub fn total(&self) -> usize {
        (self.a_plus + self.a_minus + self.b_plus + self.b_minus) as usize
    }

    /// Threshold detectors: any count above one reads as a single click.
    pub fn clicks(&self) -> Self {
        Self::new(
            self.a_plus.min(1),
            self.a_minus.min(1),
            self.b_plus.min(1),
            self.b_minus.min(1),
        )
    }
}

impl fmt::Display for DetectorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total() == 0 {
            return f.write_str("vacuum");
        }
        for (name, n) in [
            ("A+", self.a_plus),
            ("A-", self.a_minus),
            ("B+", self.b_plus),
            ("B-", self.b_minus),
        ] {
            if n > 0 {
                write!(f, "{name}{n}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for DetectorPattern {
    type Err = Error;

    /// Parses the display form, e.g. `"A-1B+1"` or `"B-2"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = DetectorPattern::default();
        if s == "vacuum" {
            return Ok(p);
        }
        let s = s.replace('−', "-");
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if i + 2 >= bytes.len() {
                return Err(Error::Malformed(format!("bad detector pattern {s:?}")));
            }
            let slot = match (bytes[i], bytes[i + 1]) {
                (b'A', b'+') => &mut p.a_plus,
                (b'A', b'-') => &mut p.a_minus,
                (b'B', b'+') => &mut p.b_plus,
                (b'B', b'-') => &mut p.b_minus,
                _ => return Err(Error::Malformed(format!("bad detector pattern {s:?}"))),
            };
            let start = i + 2;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            *slot = s[start..end]
                .parse()
                .map_err(|_| Error::Malformed(format!("bad detector pattern {s:?}")))?;
            i = end;
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectorModel {
    /// When false, counts above one collapse to a single click.
    pub photon_resolving: bool,
}

impl Default for DetectorModel {
    fn default() -> Self {
        DetectorModel {
            photon_resolving: true,
        }
    }
}

pub type DetectorDistribution = BTreeMap<DetectorPattern, f64>;

pub fn detector_distribution(state: &PureState) -> Result<DetectorDistribution> {
    detector_distribution_with(state, DetectorModel::default())
}

pub fn detector_distribution_with(
    state: &PureState,
    model: DetectorModel,
) -> Result<DetectorDistribution> {
    let basis = two_party_basis();
    if state.dim() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: state.dim(),
        });
    }
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > Tolerances::DEFAULT.nullity {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let mut dist = DetectorDistribution::new();
    for (i, fs) in basis.iter().enumerate() {
        let p = state.probability(i);
        if p == 0.0 {
            continue;
        }
        let mut pattern = DetectorPattern::from_occupations(fs.occupations());
        if !model.photon_resolving {
            pattern = pattern.clicks();
        }
        *dist.entry(pattern).or_insert(0.0) += p;
    }
    Ok(dist)
}

/// Detector statistics when the input photons are fully distinguishable:
/// each photon scatters through `modes` on its own.
pub fn distinguishable_detector_distribution(
    modes: &Operator,
    inputs: &[Mode],
) -> Result<DetectorDistribution> {
    if modes.dim() != MODE_COUNT {
        return Err(Error::DimensionMismatch {
            expected: MODE_COUNT,
            found: modes.dim(),
        });
    }
    let mut dist = DetectorDistribution::new();
    dist.insert(DetectorPattern::default(), 1.0);
    for input in inputs {
        let mut next = DetectorDistribution::new();
        for (pattern, p) in &dist {
            for out in Mode::ALL {
                let q = modes.get(out.index(), input.index()).norm_sqr();
                if q == 0.0 {
                    continue;
                }
                let mut o = [
                    pattern.a_plus,
                    pattern.a_minus,
                    pattern.b_plus,
                    pattern.b_minus,
                ];
                o[out.index()] += 1;
                *next
                    .entry(DetectorPattern::from_occupations(o))
                    .or_insert(0.0) += p * q;
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// LOCC decision for the `|2⟩_A|1⟩_B` probe: `(A−1, B+1)` means `Î`; two
/// photons on `+` detectors or two on `−` detectors mean `Ĵ`.
pub fn decide_locc(pattern: &DetectorPattern) -> Result<Decision> {
    if pattern.total() != 2 {
        return Err(Error::UnexpectedPattern(pattern.to_string()));
    }
    if *pattern == DetectorPattern::new(0, 1, 1, 0) {
        Ok(Decision::IdentityOp)
    } else if pattern.a_minus + pattern.b_minus == 0 || pattern.a_plus + pattern.b_plus == 0 {
        Ok(Decision::JOp)
    } else {
        Err(Error::UnexpectedPattern(pattern.to_string()))
    }
}

/// Beamsplitter output for V at mode 1 and H at mode 2, after the mode-2
/// phase correction: `(|H₁V₁⟩ + |H₁V₂⟩ + |V₁H₂⟩ + |V₂H₂⟩)/2`.
pub fn bs_output_state() -> PureState {
    let u = &phase_correction_modes() * &beamsplitter_modes();
    lift_mode_unitary(&u)
        .expect("unitary")
        .apply(&locc_probe().to_state())
        .expect("dimensions match")
}

/// Conditions on one photon per spatial mode. Returns the resulting
/// polarization state as two qubits (Alice first, `H = |0⟩`,
/// `V = |1⟩`) and the success probability.
pub fn post_select_coincidence(state: &PureState) -> Result<(PureState, f64)> {
    let basis = two_party_basis();
    if state.dim() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: state.dim(),
        });
    }
    let mut qubits = vec![ZERO; 4];
    for (i, fs) in basis.iter().enumerate() {
        let [ah, av, bh, bv] = fs.occupations();
        if ah + av == 1 && bh + bv == 1 {
            let index = 2 * usize::from(av) + usize::from(bv);
            qubits[index] = state.amplitude(i);
        }
    }
    let success: f64 = qubits.iter().map(|z| z.norm_sqr()).sum();
    if success <= Tolerances::DEFAULT.nullity {
        return Err(Error::ZeroSupport);
    }
    Ok((PureState::normalized(qubits)?, success))
}

/// Coincidence probability behind a 50/50 beamsplitter when a fraction
/// `overlap` of pairs is indistinguishable: `(1 − overlap)/2`.
pub fn hom_coincidence(overlap: f64) -> Result<f64> {
    crate::error::check_unit_interval("HOM overlap", overlap)?;
    Ok((1.0 - overlap) / 2.0)
}

/// HOM visibility `1 − P_cc(m)/P_cc(0)`.
pub fn hom_visibility(overlap: f64) -> Result<f64> {
    Ok(1.0 - hom_coincidence(overlap)? / hom_coincidence(0.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_enumeration() {
        let basis = two_party_basis();
        assert_eq!(basis.len(), 15);
        assert_eq!(basis[0].photons(), 0);
        assert!(basis.contains(&FockState::new([0, 1, 1, 0]).unwrap()));
        assert_eq!(basis[1].occupations(), [0, 0, 0, 1]);
        assert!(basis.windows(2).all(|w| w[0].photons() <= w[1].photons()));
    }

    #[test]
    fn cutoff_is_enforced() {
        assert!(matches!(
            FockState::new([1, 1, 1, 0]),
            Err(Error::ExceedsCutoff { photons: 3, .. })
        ));
        assert!(
            FockState::from_labels(LocalLabel::new(3).unwrap(), LocalLabel::new(1).unwrap())
                .is_err()
        );
        assert!(LocalLabel::new(6).is_err());
    }

    #[test]
    fn label_parsing() {
        assert_eq!("A:2,B:1".parse::<FockState>().unwrap(), locc_probe());
        assert_eq!(" B:1 , A:2".parse::<FockState>().unwrap(), locc_probe());
        assert_eq!(locc_probe().to_string(), "A:2,B:1");
        assert!("A:2,A:1".parse::<FockState>().is_err());
        assert!("C:1".parse::<FockState>().is_err());
        assert!("A:5,B:5".parse::<FockState>().is_err());
    }

    #[test]
    fn lift_of_identity_and_one_photon_block() {
        assert_eq!(
            lift_mode_unitary(&Operator::identity(4)).unwrap(),
            build_i()
        );
        let bs = build_beamsplitter();
        let space = FockSpace::two_party();
        // single photon A_H → (A_H + B_H)/√2
        let ah = space.basis_state(&[1, 0, 0, 0]).unwrap();
        let out = bs.apply(&ah).unwrap();
        let s = FRAC_1_SQRT_2;
        assert!((out.amplitude(space.index_of(&[1, 0, 0, 0]).unwrap()).re - s).abs() < 1e-15);
        assert!((out.amplitude(space.index_of(&[0, 0, 1, 0]).unwrap()).re - s).abs() < 1e-15);
        let vac = space.basis_state(&[0, 0, 0, 0]).unwrap();
        assert_eq!(bs.apply(&vac).unwrap(), vac);
    }

    #[test]
    fn two_photon_lift_of_hadamard_is_h3() {
        let lifted = to_label_order(
            &FockSpace::single_party()
                .lift(
                    &Operator::from_real(
                        2,
                        &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
                    )
                    .unwrap(),
                )
                .unwrap(),
        )
        .unwrap();
        let h6 = build_h6();
        assert!(lifted.max_abs_diff(&h6) <= 1e-12);
        assert_eq!(h6.get(0, 0).re, 1.0);
        assert_eq!(h6.get(4, 4).re, 0.0);
        assert!(h6.is_unitary(1e-12));
    }

    #[test]
    fn party_product_rejects_number_changing_operators() {
        let mut e = vec![0.0; 36];
        e[1] = 1.0; // ⟨0|op|1⟩
        e[6] = 1.0;
        for k in 2..6 {
            e[k * 6 + k] = 1.0;
        }
        let swap = Operator::from_real(6, &e).unwrap();
        assert!(party_product(&swap, &Operator::identity(6)).is_err());
    }

    #[test]
    fn j_matches_mode_level_lift() {
        let via_lift = lift_mode_unitary(&j_modes()).unwrap();
        assert!(via_lift.max_abs_diff(&build_j()) <= 1e-12);
    }

    #[test]
    fn detector_pattern_text() {
        let p = DetectorPattern::new(0, 1, 1, 0);
        assert_eq!(p.to_string(), "A-1B+1");
        assert_eq!("A-1B+1".parse::<DetectorPattern>().unwrap(), p);
        assert_eq!(
            "B−2".parse::<DetectorPattern>().unwrap(),
            DetectorPattern::new(0, 0, 0, 2)
        );
        assert!("A*1".parse::<DetectorPattern>().is_err());
        assert!("A+".parse::<DetectorPattern>().is_err());
        assert_eq!(DetectorPattern::default().to_string(), "vacuum");
    }

    #[test]
    fn identity_signature() {
        let d = detector_distribution(&locc_probe().to_state()).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&DetectorPattern::new(0, 1, 1, 0)], 1.0);
    }

    #[test]
    fn locc_rule() {
        assert_eq!(
            decide_locc(&DetectorPattern::new(0, 1, 1, 0)).unwrap(),
            Decision::IdentityOp
        );
        assert_eq!(
            decide_locc(&DetectorPattern::new(1, 0, 1, 0)).unwrap(),
            Decision::JOp
        );
        assert_eq!(
            decide_locc(&DetectorPattern::new(0, 0, 0, 2)).unwrap(),
            Decision::JOp
        );
        assert_eq!(
            decide_locc(&DetectorPattern::new(0, 1, 0, 1)).unwrap(),
            Decision::JOp
        );
        assert!(matches!(
            decide_locc(&DetectorPattern::new(1, 0, 0, 1)),
            Err(Error::UnexpectedPattern(_))
        ));
        assert!(decide_locc(&DetectorPattern::new(1, 0, 0, 0)).is_err());
    }

    #[test]
    fn threshold_detectors_merge_bunched_counts() {
        let out = build_j().apply(&locc_probe().to_state()).unwrap();
        let d = detector_distribution_with(
            &out,
            DetectorModel {
                photon_resolving: false,
            },
        )
        .unwrap();
        assert!((d[&DetectorPattern::new(1, 0, 0, 0)] - 0.125).abs() < 1e-12);
        assert!((d.values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hom_model() {
        assert_eq!(hom_coincidence(1.0).unwrap(), 0.0);
        assert_eq!(hom_coincidence(0.0).unwrap(), 0.5);
        assert!((hom_coincidence(0.969).unwrap() - 0.0155).abs() < 1e-12);
        assert!((hom_visibility(0.969).unwrap() - 0.969).abs() < 1e-12);
        assert!(hom_coincidence(1.5).is_err());
        assert!(hom_coincidence(f64::NAN).is_err());
    }

    #[test]
    fn hom_dip_from_the_fock_simulation() {
        // Indistinguishable H photons in both input ports bunch.
        let space = FockSpace::two_party();
        let input = space.basis_state(&[1, 0, 1, 0]).unwrap();
        let out = build_beamsplitter().apply(&input).unwrap();
        let coincidence = out.probability(space.index_of(&[1, 0, 1, 0]).unwrap());
        assert!(coincidence < 1e-30);
        // Distinguishable photons split half the time.
        let d = distinguishable_detector_distribution(
            &beamsplitter_modes(),
            &[Mode::AliceH, Mode::BobH],
        )
        .unwrap();
        assert!((d[&DetectorPattern::new(1, 0, 1, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn post_selection_zero_support() {
        let vac = FockSpace::two_party().basis_state(&[0, 0, 0, 0]).unwrap();
        assert!(matches!(
            post_select_coincidence(&vac),
            Err(Error::ZeroSupport)
        ));
    }
}
