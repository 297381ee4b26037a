use serde::Serialize;

use super::config::ProtocolKind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProtocolInfo {
    pub name: &'static str,
    pub hidden: &'static [&'static str],
    /// The experiment the protocol reproduces.
    pub scheme: &'static str,
    pub resources: &'static str,
}

pub fn list_protocols() -> Vec<ProtocolInfo> {
    ProtocolKind::ALL
        .into_iter()
        .map(|p| {
            let (scheme, resources) = match p {
                ProtocolKind::MeasurementQpd => (
                    "entanglement-assisted measurement discrimination: S (z axis) vs T (critical tilt), W(n) probe",
                    "n uses of the measurement, one W(n) state (one ebit for n = 2)",
                ),
                ProtocolKind::UnitaryQpdEntangled => (
                    "entanglement-assisted unitary discrimination: sigma_z vs Hadamard on both halves of psi+",
                    "2 uses, 1 ebit",
                ),
                ProtocolKind::UnitaryQpdUnentangled => (
                    "unitary discrimination without entanglement: U sigma_z U applied to |0>",
                    "2 sequential uses, 1 known unitary, no ebits",
                ),
                ProtocolKind::PauliUnentangled => (
                    "Pauli discrimination without entanglement: U|0> read in z, U|+> read in x",
                    "2 uses, no ebits",
                ),
                ProtocolKind::PauliEntangled => (
                    "Pauli discrimination with one half of psi+ and a Bell measurement",
                    "1 use, 1 ebit",
                ),
                ProtocolKind::LoccFock => (
                    "multipartite discrimination without entanglement: I vs J on |2>_A|1>_B with local detection",
                    "1 use, product two-photon probe, local photon counting",
                ),
                ProtocolKind::HomScan => (
                    "two-photon interference dip: coincidence probability against source visibility",
                    "one photon pair per trial",
                ),
                ProtocolKind::Plan => (
                    "minimal parallel uses for perfect discrimination of two unitaries",
                    "N parallel uses, probe from the eigenvectors of U^dagger V",
                ),
            };
            ProtocolInfo {
                name: p.name(),
                hidden: p.hidden_labels(),
                scheme,
                resources,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_complete() {
        let list = list_protocols();
        assert_eq!(list.len(), 8);
        assert!(list.iter().any(|p| p.name == "measurement_qpd"));
        assert!(list.iter().all(|p| !p.scheme.is_empty()));
    }
}
