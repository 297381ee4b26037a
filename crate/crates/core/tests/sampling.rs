use qpd_core::experiment::{self, ExperimentConfig, ResultReport};
use qpd_core::noise::{ConfidenceModel, binomial_std_error, predicted_confidence};

const TRIALS: u64 = 100_000;

fn run(json: &str) -> ResultReport {
    experiment::run(&ExperimentConfig::from_json(json).unwrap()).unwrap()
}

fn confidence(report: &ResultReport) -> f64 {
    report.summary.as_ref().unwrap().confidence
}

/// Sampled frequency within 3σ of `target`; agreement to rounding when σ = 0.
fn assert_close(label: &str, sampled: f64, target: f64, trials: u64) {
    let sigma = binomial_std_error(target, trials);
    if sigma < 1e-7 {
        assert!(
            (sampled - target).abs() <= 1e-12,
            "{label}: sampled {sampled}, target {target}"
        );
    } else {
        let z = (sampled - target) / sigma;
        assert!(
            z.abs() <= 3.0,
            "{label}: sampled {sampled}, target {target}, z = {z:.2}"
        );
    }
}

#[test]
fn psi_plus_scheme_converges_to_prediction() {
    for m in [0.0, 0.5, 0.969, 1.0] {
        let exact = run(&format!(
            r#"{{"protocol": "measurement_qpd", "n": 2, "visibility": {m}}}"#
        ));
        let predicted = predicted_confidence(m, ConfidenceModel::PerHypothesis).unwrap();
        assert!((confidence(&exact) - predicted).abs() <= 1e-12, "m = {m}");

        let sampled = run(&format!(
            r#"{{"protocol": "measurement_qpd", "n": 2, "visibility": {m}, "mode": "sample", "trials": {TRIALS}, "seed": 1}}"#
        ));
        assert_close(&format!("m = {m}"), confidence(&sampled), predicted, TRIALS);
    }
}

#[test]
fn every_scheme_samples_its_exact_distribution() {
    let configs = [
        r#""protocol": "measurement_qpd", "n": 4, "visibility": 0.9"#,
        r#""protocol": "unitary_qpd_entangled", "visibility": 0.8"#,
        r#""protocol": "unitary_qpd_unentangled", "flip_probability": 0.05"#,
        r#""protocol": "pauli_unentangled""#,
        r#""protocol": "pauli_entangled""#,
        r#""protocol": "locc_fock", "visibility": 0.7"#,
    ];
    for body in configs {
        let exact = run(&format!("{{{body}}}"));
        let sampled = run(&format!(
            r#"{{{body}, "mode": "sample", "trials": {TRIALS}, "seed": 42}}"#
        ));
        assert_eq!(exact.hypotheses.len(), sampled.hypotheses.len());
        let per = TRIALS / exact.hypotheses.len() as u64;
        for (e, s) in exact.hypotheses.iter().zip(&sampled.hypotheses) {
            assert_eq!(e.hidden, s.hidden);
            assert_close(
                &format!("{body} / {}", e.hidden),
                s.confidence,
                e.confidence,
                per,
            );
            // every sampled pattern has nonzero exact probability
            for bin in &s.histogram {
                let p = e
                    .histogram
                    .iter()
                    .find(|b| b.pattern == bin.pattern)
                    .map_or(0.0, |b| b.value);
                assert!(
                    p > 0.0,
                    "{body}: sampled impossible pattern {}",
                    bin.pattern
                );
                assert_close(&format!("{body} / {}", bin.pattern), bin.value, p, per);
            }
        }
    }
}

#[test]
fn trials_split_evenly_across_hypotheses() {
    let report =
        run(r#"{"protocol": "pauli_entangled", "mode": "sample", "trials": 10, "seed": 3}"#);
    let counts: Vec<u64> = report
        .hypotheses
        .iter()
        .map(|h| h.trials.unwrap())
        .collect();
    assert_eq!(counts, [3, 3, 2, 2]);
    assert_eq!(report.summary.unwrap().trials, Some(10));
}

#[test]
fn seeds_change_samples() {
    let a = run(
        r#"{"protocol": "locc_fock", "visibility": 0.5, "mode": "sample", "trials": 5000, "seed": 1}"#,
    );
    let b = run(
        r#"{"protocol": "locc_fock", "visibility": 0.5, "mode": "sample", "trials": 5000, "seed": 2}"#,
    );
    assert_ne!(a.to_json().unwrap(), b.to_json().unwrap());
}
