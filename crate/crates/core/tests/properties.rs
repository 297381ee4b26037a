mod common;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use qpd_core::fock::FockSpace;
use qpd_core::linalg::{Ensemble, Operator, PureState, Tensor, Tolerances, eigenphases};
use qpd_core::noise::{
    ConfidenceModel, noisy_bell_ensemble, noisy_w_ensemble, predicted_confidence,
};
use qpd_core::protocols::{self, BipartiteBox, MeasurementBox, UnitaryBox};

fn entries(dim: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim)
}

fn unitary(dim: usize, e: &[(f64, f64)]) -> Operator {
    Operator::from_matrix(common::unitary_from_entries(dim, e)).unwrap()
}

fn state(e: &[(f64, f64)]) -> Option<PureState> {
    PureState::normalized(e.iter().map(|&(re, im)| C::new(re, im)).collect()).ok()
}

fn ensemble_weight(e: &Ensemble) -> f64 {
    e.components().iter().map(|(w, _)| w).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_is_associative(a in entries(2), b in entries(2), c in entries(3)) {
        let (a, b, c) = (unitary(2, &a), unitary(2, &b), unitary(3, &c));
        let left = a.tensor(&b).tensor(&c);
        let right = a.tensor(&b.tensor(&c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn tensor_respects_products(a in entries(2), b in entries(2), c in entries(2), d in entries(2)) {
        let (a, b, c, d) = (unitary(2, &a), unitary(2, &b), unitary(2, &c), unitary(2, &d));
        let lhs = &a.tensor(&b) * &c.tensor(&d);
        let rhs = (&a * &c).tensor(&(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn unitaries_preserve_norm(u in entries(4), v in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4)) {
        let Some(psi) = state(&v) else { return Ok(()) };
        let u = unitary(4, &u);
        prop_assert!(u.is_unitary(1e-12));
        let out = u.apply(&psi).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn eigen_decomposition_reconstructs(dim in 2usize..=4, e in entries(4)) {
        let u = unitary(dim, &e[..dim * dim]);
        let spectrum = eigenphases(&u, &Tolerances::DEFAULT).unwrap();
        prop_assert_eq!(spectrum.len(), dim);
        prop_assert!(spectrum.reconstruct().max_abs_diff(&u) <= 1e-9);
        for &phase in spectrum.phases() {
            prop_assert!(phase > -std::f64::consts::PI && phase <= std::f64::consts::PI);
        }
    }

    #[test]
    fn fock_lift_is_a_homomorphism(a in entries(4), b in entries(4)) {
        let space = FockSpace::two_party();
        let (u, v) = (unitary(4, &a), unitary(4, &b));
        let lu = space.lift(&u).unwrap();
        let lv = space.lift(&v).unwrap();
        let luv = space.lift(&(&u * &v)).unwrap();
        prop_assert!((&lu * &lv).max_abs_diff(&luv) <= 1e-10);
        prop_assert!(lu.is_unitary(1e-10));
        let photons = |i: usize| space.occupations(i).iter().map(|&n| n as usize).sum::<usize>();
        for r in 0..space.dim() {
            for c in 0..space.dim() {
                if photons(r) != photons(c) {
                    prop_assert!(lu.get(r, c).norm() <= 1e-14);
                }
            }
        }
    }

    #[test]
    fn noisy_sources_are_normalized(m in 0.0..=1.0f64, n in 2usize..=6) {
        prop_assert!((ensemble_weight(&noisy_bell_ensemble(m).unwrap()) - 1.0).abs() <= 1e-12);
        let w = noisy_w_ensemble(n, m).unwrap();
        prop_assert!((ensemble_weight(&w) - 1.0).abs() <= 1e-12);
        prop_assert_eq!(w.dim(), 1 << n);
    }

    #[test]
    fn confidence_is_monotone(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for model in [ConfidenceModel::PerHypothesis, ConfidenceModel::HalfCredit] {
            let p_lo = predicted_confidence(lo, model).unwrap();
            let p_hi = predicted_confidence(hi, model).unwrap();
            prop_assert!(p_lo <= p_hi);
            prop_assert!((0.5..=1.0).contains(&p_lo));
        }
    }

    #[test]
    fn exact_runs_are_distributions(m in 0.0..=1.0f64, n in 2usize..=5, flip in 0.0..=1.0f64) {
        let runs = [
            protocols::measurement_qpd_exact(n, MeasurementBox::T, &noisy_w_ensemble(n, m).unwrap()).unwrap(),
            protocols::unitary_entangled_exact(UnitaryBox::Hadamard, &noisy_bell_ensemble(m).unwrap()).unwrap(),
            protocols::unitary_unentangled_exact(UnitaryBox::SigmaZ, flip).unwrap(),
            protocols::locc_exact(BipartiteBox::J, m).unwrap(),
        ];
        for run in runs {
            let hist: f64 = run.histogram.iter().map(|(_, p)| p).sum();
            let decided: f64 = run.decisions.values().sum();
            prop_assert!((hist - 1.0).abs() <= 1e-10);
            prop_assert!((decided - 1.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn lift_of_identity_is_identity() {
    let space = FockSpace::two_party();
    let id = space.lift(&Operator::identity(4)).unwrap();
    assert!(id.max_abs_diff(&Operator::identity(space.dim())) <= 1e-14);
}

#[test]
fn oracle_unitaries_are_unitary() {
    let e: Vec<(f64, f64)> = (0..9)
        .map(|k| ((k as f64).sin(), (k as f64 * 0.7).cos()))
        .collect();
    let q = common::unitary_from_entries(3, &e);
    let defect = &q.adjoint() * &q - DMatrix::<C>::identity(3, 3);
    assert!(common::max_abs(&defect) <= 1e-12);
}
