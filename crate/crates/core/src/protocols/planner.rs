//! Minimal number of parallel uses needed to discriminate two unitaries
//! perfectly, with an explicit probe state.
//!
//! With `W = U†V` and `N` parallel uses, a probe `|p⟩` separates the two
//! boxes iff `⟨p|W^{⊗N}|p⟩ = 0`. Taking `|p⟩` as a superposition of
//! product eigenvectors of `W`, the overlap is a convex combination of the
//! eigenvalues of `W^{⊗N}`, so a probe exists iff 0 lies in their convex
//! hull. If the eigenphases of `W` fit in an arc of length `Θ < π`, the
//! eigenvalues of `W^{⊗N}` sweep an arc of length `NΘ` in steps of `Θ`,
//! so the minimal count is `N = ⌈π/Θ⌉` and only the two extremal
//! eigenvectors are needed.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{
    C64, Operator, PureState, Tolerances, ZERO, eigenphases, tensor_all, wrap_phase,
};

/// One branch of the probe: the product of eigenvectors `factors[k]` for
/// use `k`, with probability `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeTerm {
    pub weight: f64,
    pub factors: Vec<usize>,
    /// Eigenphase of `W^{⊗N}` on this branch, wrapped into `(-π, π]`.
    pub phase: f64,
}

#[derive(Debug, Clone)]
pub struct DiscriminationPlan {
    pub uses: usize,
    /// Eigenphases of `U†V`, ascending.
    pub phases: Vec<f64>,
    /// Eigenvectors matching `phases`.
    pub eigenvectors: Vec<PureState>,
    pub terms: Vec<ProbeTerm>,
    /// Smallest arc holding every eigenvalue of `U†V`.
    pub arc: f64,
    /// `|⟨probe|(U†V)^{⊗N}|probe⟩|`, evaluated against the matrix.
    pub achieved_overlap: f64,
}

/// Overlap below which a plan counts as perfect discrimination.
pub const FEASIBLE_OVERLAP: f64 = 1e-8;

impl DiscriminationPlan {
    pub fn feasible(&self) -> bool {
        self.achieved_overlap <= FEASIBLE_OVERLAP
    }

    /// `⟨probe|W^{⊗N}|probe⟩`, evaluated factor by factor.
    pub fn overlap_with(&self, w: &Operator) -> Result<C64> {
        let dim = self.eigenvectors.first().map_or(0, PureState::dim);
        if w.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: w.dim(),
            });
        }
        let images: Vec<PureState> = self
            .eigenvectors
            .iter()
            .map(|v| w.apply(v))
            .collect::<Result<_>>()?;
        let mut total = ZERO;
        for bra in &self.terms {
            for ket in &self.terms {
                let mut product = C64::new((bra.weight * ket.weight).sqrt(), 0.0);
                for (&i, &j) in bra.factors.iter().zip(&ket.factors) {
                    product *= self.eigenvectors[i].inner(&images[j]);
                }
                total += product;
            }
        }
        Ok(total)
    }

    /// The probe as a vector on `d^N` amplitudes, or `None` if that space
    /// has more than `max_dim` entries.
    pub fn probe_state(&self, max_dim: usize) -> Option<PureState> {
        let dim = self.eigenvectors.first()?.dim();
        let total = dim.checked_pow(self.uses as u32)?;
        if total > max_dim {
            return None;
        }
        let mut amps = vec![ZERO; total];
        for term in &self.terms {
            let factors: Vec<PureState> = term
                .factors
                .iter()
                .map(|&i| self.eigenvectors[i].clone())
                .collect();
            let product = tensor_all(&factors)?;
            for (a, b) in amps.iter_mut().zip(product.amplitudes()) {
                *a += b * term.weight.sqrt();
            }
        }
        PureState::normalized(amps).ok()
    }
}

/// Whether 0 lies in the convex hull of `{e^{iφ}}`: true iff no circular
/// gap between consecutive phases exceeds `π`.
pub fn zero_in_hull(phases: &[f64], tol: f64) -> bool {
    max_circular_gap(phases).is_some_and(|g| g <= PI + tol)
}

fn max_circular_gap(phases: &[f64]) -> Option<f64> {
    let mut sorted: Vec<f64> = phases.iter().map(|&p| wrap_phase(p)).collect();
    sorted.sort_by(f64::total_cmp);
    let first = *sorted.first()?;
    let last = *sorted.last()?;
    let inner = sorted.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Some(inner.max(first + 2.0 * PI - last))
}

/// Convex weights over `phases` whose combination of `e^{iφ}` is zero,
/// using an antipodal pair or a triangle. Returns `(index, weight)`.
fn balance_on_circle(phases: &[f64], tol: f64) -> Option<Vec<(usize, f64)>> {
    let anchor = *phases.first()?;
    let offset = |p: f64| (p - anchor).rem_euclid(2.0 * PI);
    let mut below: Option<(usize, f64)> = None;
    let mut above: Option<(usize, f64)> = None;
    for (i, &p) in phases.iter().enumerate().skip(1) {
        let d = offset(p);
        if (d - PI).abs() <= tol {
            return Some(vec![(0, 0.5), (i, 0.5)]);
        }
        if d < PI && below.is_none_or(|(_, b)| d > b) {
            below = Some((i, d));
        }
        if d > PI && above.is_none_or(|(_, a)| d < a) {
            above = Some((i, d));
        }
    }
    let ((i1, d1), (i2, d2)) = (below?, above?);
    if d2 - d1 > PI + tol {
        return None;
    }
    // Barycentric weights: each ∝ the signed area spanned by the other two.
    let raw = [
        (d2 - d1).sin().max(0.0),
        (-d2.sin()).max(0.0),
        d1.sin().max(0.0),
    ];
    let sum: f64 = raw.iter().sum();
    if sum <= 0.0 {
        return None;
    }
    Some(vec![
        (0, raw[0] / sum),
        (i1, raw[1] / sum),
        (i2, raw[2] / sum),
    ])
}

/// Plans perfect discrimination of `u` and `v` from parallel uses.
pub fn plan_parallel_discrimination(
    u: &Operator,
    v: &Operator,
    tol: &Tolerances,
) -> Result<DiscriminationPlan> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    u.ensure_unitary(tol.structural.max(1e-10))?;
    v.ensure_unitary(tol.structural.max(1e-10))?;
    let w = &u.adjoint() * v;
    let spectrum = eigenphases(&w, tol)?;
    let phases = spectrum.phases().to_vec();

    let gap = max_circular_gap(&phases).expect("non-empty spectrum");
    let arc = 2.0 * PI - gap;
    if arc <= tol.spectral {
        return Err(Error::Indistinguishable);
    }

    let (uses, candidates): (usize, Vec<(Vec<usize>, f64)>) = if arc >= PI - tol.spectral {
        let c = (0..phases.len()).map(|k| (vec![k], phases[k])).collect();
        (1, c)
    } else {
        let uses = ((PI / arc) - tol.spectral).ceil() as usize;
        // The arc runs counter-clockwise from `start` to `end`.
        let (start, end) = arc_endpoints(&phases);
        let c = (0..=uses)
            .map(|j| {
                let mut factors = vec![end; j];
                factors.extend(std::iter::repeat_n(start, uses - j));
                let phase = uses as f64 * phases[start] + j as f64 * arc;
                (factors, phase)
            })
            .collect();
        (uses, c)
    };

    let candidate_phases: Vec<f64> = candidates.iter().map(|(_, p)| *p).collect();
    let weights = balance_on_circle(&candidate_phases, tol.spectral)
        .ok_or_else(|| Error::Malformed("no balanced probe found".into()))?;
    let terms: Vec<ProbeTerm> = weights
        .into_iter()
        .filter(|&(_, w)| w > 0.0)
        .map(|(i, weight)| ProbeTerm {
            weight,
            factors: candidates[i].0.clone(),
            phase: wrap_phase(candidates[i].1),
        })
        .collect();

    let mut plan = DiscriminationPlan {
        uses,
        phases,
        eigenvectors: spectrum.vectors().to_vec(),
        terms,
        arc,
        achieved_overlap: f64::NAN,
    };
    plan.achieved_overlap = plan.overlap_with(&w)?.norm();
    Ok(plan)
}

/// Indices of the eigenphases bounding the minimal arc, in
/// counter-clockwise order.
fn arc_endpoints(phases: &[f64]) -> (usize, usize) {
    let n = phases.len();
    // phases are sorted; the largest gap sits between `end` and `start`.
    let mut best = (n - 1, 0, phases[0] + 2.0 * PI - phases[n - 1]);
    for k in 0..n - 1 {
        let g = phases[k + 1] - phases[k];
        if g > best.2 {
            best = (k, k + 1, g);
        }
    }
    (best.1, best.0)
}

/// `U^{⊗N}` applied to a product state, used to check plans on small
/// spaces.
pub fn tensor_power_apply(u: &Operator, uses: usize, state: &PureState) -> Result<PureState> {
    u.tensor_power(uses).apply(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::gates;

    #[test]
    fn hull_criterion() {
        assert!(zero_in_hull(&[-PI / 2.0, PI / 2.0], 1e-12));
        assert!(!zero_in_hull(&[-PI / 4.0, PI / 4.0], 1e-12));
        assert!(zero_in_hull(&[0.0, 2.0, -2.0], 1e-12));
        assert!(!zero_in_hull(&[], 1e-12));
    }

    #[test]
    fn balance_triangle_weights_cancel() {
        let phases = [0.3, 2.1, -2.5];
        let w = balance_on_circle(&phases, 1e-12).unwrap();
        let sum: C64 = w.iter().map(|&(i, x)| C64::from_polar(x, phases[i])).sum();
        assert!(sum.norm() < 1e-14, "{sum}");
        assert!((w.iter().map(|p| p.1).sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn z_vs_h_needs_two_uses() {
        let plan = plan_parallel_discrimination(
            &gates::pauli_z(),
            &gates::hadamard(),
            &Tolerances::DEFAULT,
        )
        .unwrap();
        assert_eq!(plan.uses, 2);
        assert!(plan.feasible());
        let probe = plan.probe_state(1 << 12).unwrap();
        let w = &gates::pauli_z().adjoint() * &gates::hadamard();
        let evolved = tensor_power_apply(&w, 2, &probe).unwrap();
        assert!(probe.inner(&evolved).norm() < 1e-12);
    }

    #[test]
    fn orthogonal_paulis_need_one_use() {
        let plan = plan_parallel_discrimination(
            &gates::pauli_z(),
            &gates::pauli_x(),
            &Tolerances::DEFAULT,
        )
        .unwrap();
        assert_eq!(plan.uses, 1);
        assert!(plan.feasible());
    }

    #[test]
    fn equal_unitaries_are_indistinguishable() {
        let h = gates::hadamard();
        assert!(matches!(
            plan_parallel_discrimination(&h, &h, &Tolerances::DEFAULT),
            Err(Error::Indistinguishable)
        ));
        let phased = h.scale(C64::from_polar(1.0, 0.7));
        assert!(matches!(
            plan_parallel_discrimination(&h, &phased, &Tolerances::DEFAULT),
            Err(Error::Indistinguishable)
        ));
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        assert!(matches!(
            plan_parallel_discrimination(
                &gates::pauli_z(),
                &Operator::identity(4),
                &Tolerances::DEFAULT
            ),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
