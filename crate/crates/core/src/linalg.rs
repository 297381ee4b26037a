//! Dense complex linear algebra for the small Hilbert spaces used by the
//! discrimination protocols.
//!
//! Basis ordering follows the usual Kronecker convention: in `a ⊗ b` the
//! left factor is the most significant digit of the joint index.

use std::f64::consts::PI;
use std::ops::Mul;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Numerical tolerances shared across the crate.
///
/// * `structural` (1e-12): unitarity, Hermiticity, normalization and
///   matrix-identity checks.
/// * `spectral` (1e-9): eigen-decomposition reconstruction and phase
///   clustering.
/// * `nullity` (1e-10): when a probability counts as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub structural: f64,
    pub spectral: f64,
    pub nullity: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        structural: 1e-12,
        spectral: 1e-9,
        nullity: 1e-10,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

fn check_finite<'a>(values: impl IntoIterator<Item = &'a C64>) -> Result<()> {
    if values
        .into_iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
    {
        Ok(())
    } else {
        Err(Error::Malformed("non-finite amplitude".into()))
    }
}

/// A square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(DMatrix<C64>);

impl Operator {
    /// Builds a `dim × dim` operator from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed(
                "operator dimension must be positive".into(),
            ));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        check_finite(entries)?;
        Ok(Operator(DMatrix::from_row_slice(dim, dim, entries)))
    }

    /// Builds an operator from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let entries: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_major(dim, &entries)
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::Malformed(
                "operator dimension must be positive".into(),
            ));
        }
        check_finite(m.iter())?;
        Ok(Operator(m))
    }

    pub fn identity(dim: usize) -> Self {
        Operator(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<C64> {
        self.0.transpose().iter().copied().collect()
    }

    pub fn adjoint(&self) -> Operator {
        Operator(self.0.adjoint())
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator(self.0.map(|z| z * factor))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rhs.dim(),
            });
        }
        Ok(Operator(&self.0 * &rhs.0))
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        Ok(PureState(&self.0 * &state.0))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "operator dimensions differ");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U†U - I|` over entries.
    pub fn unitarity_defect(&self) -> f64 {
        let product = self.0.adjoint() * &self.0;
        Operator(product).max_abs_diff(&Operator::identity(self.dim()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let defect = self.unitarity_defect();
        if defect <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitary { defect })
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// `self^{⊗ power}`.
    pub fn tensor_power(&self, power: usize) -> Operator {
        (1..power).fold(
            if power == 0 {
                Operator::identity(1)
            } else {
                self.clone()
            },
            |acc, _| acc.tensor(self),
        )
    }
}

impl Mul for &Operator {
    type Output = Operator;

    /// Panics on a dimension mismatch; use [`Operator::compose`] for the
    /// fallible form.
    fn mul(self, rhs: &Operator) -> Operator {
        self.compose(rhs).expect("operator dimensions differ")
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(DVector<C64>);

impl PureState {
    /// Accepts amplitudes whose squared norm is within the structural
    /// tolerance of one.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Malformed("state dimension must be positive".into()));
        }
        check_finite(&amplitudes)?;
        let state = PureState(DVector::from_vec(amplitudes));
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > Tolerances::DEFAULT.structural {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        check_finite(&amplitudes)?;
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        Ok(PureState(v.unscale(norm)))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut v = DVector::zeros(dim);
        v[index] = ONE;
        PureState(v)
    }

    pub(crate) fn from_vector_unchecked(v: DVector<C64>) -> Self {
        PureState(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.0[index]
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn vector(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.0[index].norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> C64 {
        assert_eq!(self.dim(), other.dim(), "state dimensions differ");
        self.0.dotc(&other.0)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Equality of physical rays: `|⟨φ|ψ⟩| ≥ 1 - tol`.
    pub fn same_ray(&self, other: &PureState, tol: f64) -> bool {
        self.dim() == other.dim() && self.inner(other).norm() >= 1.0 - tol
    }

    /// Indices whose probability exceeds `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.probability(i) > tol)
            .collect()
    }
}

/// Kronecker product. The left operand indexes the most significant digit.
pub trait Tensor {
    fn tensor(&self, rhs: &Self) -> Self;
}

impl Tensor for Operator {
    fn tensor(&self, rhs: &Self) -> Self {
        Operator(self.0.kronecker(&rhs.0))
    }
}

impl Tensor for PureState {
    fn tensor(&self, rhs: &Self) -> Self {
        PureState(self.0.kronecker(&rhs.0))
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Tensor product of a non-empty list, left to right.
pub fn tensor_all<T: Tensor + Clone>(factors: &[T]) -> Option<T> {
    let (first, rest) = factors.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, f| acc.tensor(f)))
}

/// A finite classical mixture of pure states of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    components: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(components: Vec<(f64, PureState)>) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::EmptyInput);
        };
        let dim = first.dim();
        for (w, s) in &components {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
            if !(0.0..=1.0).contains(w) {
                return Err(Error::out_of_range("ensemble weight", *w, 0.0, 1.0));
            }
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > Tolerances::DEFAULT.structural {
            return Err(Error::Malformed(format!("ensemble weights sum to {total}")));
        }
        Ok(Ensemble { components })
    }

    pub fn pure(state: PureState) -> Self {
        Ensemble {
            components: vec![(1.0, state)],
        }
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components[0].1.dim()
    }

    pub fn map_states(&self, f: impl Fn(&PureState) -> Result<PureState>) -> Result<Ensemble> {
        let components = self
            .components
            .iter()
            .map(|(w, s)| Ok((*w, f(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble { components })
    }
}

impl From<PureState> for Ensemble {
    fn from(state: PureState) -> Self {
        Ensemble::pure(state)
    }
}

/// Eigen-decomposition of a unitary: ascending phases in `(-π, π]` with an
/// orthonormal set of eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    phases: Vec<f64>,
    vectors: Vec<PureState>,
}

impl Spectrum {
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// `Σ e^{iφ_k} |v_k⟩⟨v_k|`.
    pub fn reconstruct(&self) -> Operator {
        let dim = self.vectors.first().map_or(0, PureState::dim);
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for (phase, v) in self.phases.iter().zip(&self.vectors) {
            m += v.vector() * v.vector().adjoint() * C64::from_polar(1.0, *phase);
        }
        Operator(m)
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let mut p = phase % (2.0 * PI);
    if p <= -PI {
        p += 2.0 * PI;
    } else if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// Eigenphases of a unitary operator.
///
/// The decomposition comes from a complex Schur factorization, which is
/// diagonal for normal matrices. Eigenvectors sharing a phase (within the
/// spectral tolerance) are replaced by a canonical orthonormal basis of
/// their eigenspace: pivoted Gram-Schmidt over the columns of the
/// eigenspace projector. Each vector is phased so its first non-negligible
/// component is real and positive; ties are ordered lexicographically.
pub fn eigenphases(u: &Operator, tol: &Tolerances) -> Result<Spectrum> {
    u.ensure_unitary(tol.structural.max(1e-10))?;
    let dim = u.dim();
    let schur = nalgebra::Schur::try_new(u.0.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Malformed("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();

    let mut raw: Vec<(f64, usize)> = (0..dim)
        .map(|k| {
            let mut phase = t[(k, k)].arg();
            // −1 may come out just above −π; fold it onto +π.
            if phase < -PI + tol.spectral {
                phase = PI;
            }
            (phase, k)
        })
        .collect();
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut phases = Vec::with_capacity(dim);
    let mut vectors = Vec::with_capacity(dim);
    let mut start = 0;
    while start < raw.len() {
        let mut end = start + 1;
        while end < raw.len() && raw[end].0 - raw[end - 1].0 <= tol.spectral {
            end += 1;
        }
        let cluster = &raw[start..end];
        let mean = cluster.iter().map(|(p, _)| p).sum::<f64>() / cluster.len() as f64;
        let columns: Vec<DVector<C64>> = cluster
            .iter()
            .map(|&(_, k)| q.column(k).into_owned())
            .collect();
        let mut basis = if columns.len() == 1 {
            vec![canonical_phase(columns[0].clone(), tol)]
        } else {
            canonical_eigenspace_basis(&columns, tol)
        };
        basis.sort_by(lexicographic);
        for v in basis {
            phases.push(mean);
            vectors.push(PureState(v));
        }
        start = end;
    }
    Ok(Spectrum { phases, vectors })
}

fn canonical_phase(v: DVector<C64>, tol: &Tolerances) -> DVector<C64> {
    let v = v.unscale(v.norm());
    let lead = v
        .iter()
        .find(|z| z.norm() > tol.spectral.sqrt())
        .copied()
        .unwrap_or(ONE);
    let rotation = lead.conj() / lead.norm();
    v.map(|z| z * rotation)
}

fn canonical_eigenspace_basis(columns: &[DVector<C64>], tol: &Tolerances) -> Vec<DVector<C64>> {
    let dim = columns[0].len();
    let mut projector = DMatrix::<C64>::zeros(dim, dim);
    for c in columns {
        projector += c * c.adjoint();
    }
    let mut residuals: Vec<DVector<C64>> =
        (0..dim).map(|j| projector.column(j).into_owned()).collect();
    let mut basis: Vec<DVector<C64>> = Vec::with_capacity(columns.len());
    while basis.len() < columns.len() {
        // Pivot on the largest residual, lowest index on ties.
        let (best, _) = residuals
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, bn), (i, r)| {
                let n = r.norm();
                if n > bn + 1e-12 { (i, n) } else { (bi, bn) }
            });
        let v = residuals[best].clone();
        let v = canonical_phase(v, tol);
        for r in residuals.iter_mut() {
            let overlap = v.dotc(r);
            *r -= &v * overlap;
        }
        basis.push(v);
    }
    basis
}

fn lexicographic(a: &DVector<C64>, b: &DVector<C64>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord.is_ne() {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}
