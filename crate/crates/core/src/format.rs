//! Text format for operators and states.
//!
//! An operator is a JSON array of rows, each row an array of `[re, im]`
//! pairs:
//!
//! ```json
//! [[[0.7071067811865476, 0], [0.7071067811865476, 0]],
//!  [[0.7071067811865476, 0], [-0.7071067811865476, 0]]]
//! ```
//!
//! A state is a flat array of `[re, im]` pairs.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{C64, Operator, PureState};

pub type RawMatrix = Vec<Vec<[f64; 2]>>;

pub fn operator_from_rows(rows: &RawMatrix) -> Result<Operator> {
    let dim = rows.len();
    if dim == 0 {
        return Err(Error::EmptyInput);
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::Malformed(format!(
                "row {r} has {} entries, expected {dim}",
                row.len()
            )));
        }
        entries.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
    }
    Operator::from_row_major(dim, &entries)
}

pub fn operator_to_rows(op: &Operator) -> RawMatrix {
    (0..op.dim())
        .map(|r| {
            (0..op.dim())
                .map(|c| {
                    let z = op.get(r, c);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

pub fn parse_operator_json(text: &str) -> Result<Operator> {
    let rows: RawMatrix = serde_json::from_str(text)?;
    operator_from_rows(&rows)
}

pub fn operator_to_json(op: &Operator) -> String {
    serde_json::to_string(&operator_to_rows(op)).expect("finite floats serialize")
}

pub fn read_operator(path: &Path) -> Result<Operator> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_operator_json(&text)
}

/// Parses a state; the amplitudes must already be normalized.
pub fn parse_state_json(text: &str) -> Result<PureState> {
    let amps: Vec<[f64; 2]> = serde_json::from_str(text)?;
    if amps.is_empty() {
        return Err(Error::EmptyInput);
    }
    PureState::new(amps.iter().map(|&[re, im]| C64::new(re, im)).collect())
}

pub fn state_to_json(state: &PureState) -> String {
    let amps: Vec<[f64; 2]> = state.amplitudes().iter().map(|z| [z.re, z.im]).collect();
    serde_json::to_string(&amps).expect("finite floats serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{self, gates};

    #[test]
    fn operator_round_trip() {
        for op in [gates::hadamard(), gates::pauli_y()] {
            let back = parse_operator_json(&operator_to_json(&op)).unwrap();
            assert_eq!(back, op);
        }
    }

    #[test]
    fn state_round_trip() {
        let s = qubit::bell_psi_plus();
        assert_eq!(parse_state_json(&state_to_json(&s)).unwrap(), s);
        assert!(parse_state_json("[[1,0],[1,0]]").is_err());
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(matches!(
            parse_operator_json("[[[1,0],[0,0]],[[0,0]]]"),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(parse_operator_json("[]"), Err(Error::EmptyInput)));
        assert!(matches!(
            parse_operator_json("[[1,0]]"),
            Err(Error::Json(_))
        ));
    }
}
