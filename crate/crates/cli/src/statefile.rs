//! JSON state files.
//!
//! ```json
//! {"format_version": "1", "kind": "pure", "num_qubits": 1, "payload": [[1.0, 0.0], [0.0, 0.0]]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. `pure` and `symmetric` payloads are
//! amplitude lists (computational and Dicke basis), `density` is a list of
//! matrix rows, and `mixture` is a list of `{"weight": w, "factors": [...]}`
//! terms with one 2×2 single-qubit density matrix (rows) per qubit.

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use spinsqueeze_core::states::{mix, DensityMatrix, MixtureTerm, PureState, SymmetricState};
use spinsqueeze_core::{QubitMoments, C64};

use crate::error::CliError;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pure,
    Density,
    Symmetric,
    Mixture,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Pure => "pure",
            Kind::Density => "density",
            Kind::Symmetric => "symmetric",
            Kind::Mixture => "mixture",
        }
    }
}

/// A validated state as read from or written to a file.
#[derive(Debug, Clone)]
pub enum State {
    Pure(PureState),
    Density(DensityMatrix),
    Symmetric(SymmetricState),
    /// The terms as given, plus their mixture for analysis.
    Mixture(Vec<MixtureTerm>, DensityMatrix),
}

impl State {
    pub fn kind(&self) -> Kind {
        match self {
            State::Pure(_) => Kind::Pure,
            State::Density(_) => Kind::Density,
            State::Symmetric(_) => Kind::Symmetric,
            State::Mixture(..) => Kind::Mixture,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.moments().num_qubits()
    }

    pub fn moments(&self) -> &dyn QubitMoments {
        match self {
            State::Pure(s) => s,
            State::Density(s) => s,
            State::Symmetric(s) => s,
            State::Mixture(_, rho) => rho,
        }
    }

    pub fn mixture(terms: Vec<MixtureTerm>) -> Result<Self, CliError> {
        let rho = mix(&terms).map_err(|e| CliError::invalid("payload", e))?;
        Ok(State::Mixture(terms, rho))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document<K> {
    format_version: String,
    kind: K,
    num_qubits: usize,
    payload: Value,
}

type Pair = [f64; 2];

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    weight: f64,
    factors: Vec<[[Pair; 2]; 2]>,
}

fn to_pair(z: &C64) -> Pair {
    [z.re, z.im]
}

fn from_pair(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn parse<T: serde::de::DeserializeOwned>(field: &str, value: Value) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Field { field: field.to_string(), reason: e.to_string() })
}

fn check_finite<'a>(field: &str, values: impl IntoIterator<Item = &'a f64>) -> Result<(), CliError> {
    match values.into_iter().position(|x| !x.is_finite()) {
        Some(k) => Err(CliError::Field { field: format!("{field}[{k}]"), reason: "number is not finite".into() }),
        None => Ok(()),
    }
}

fn matrix2_from_rows(rows: &[[Pair; 2]; 2]) -> Matrix2<C64> {
    Matrix2::new(from_pair(&rows[0][0]), from_pair(&rows[0][1]), from_pair(&rows[1][0]), from_pair(&rows[1][1]))
}

fn matrix2_rows(m: &Matrix2<C64>) -> [[Pair; 2]; 2] {
    [[to_pair(&m[(0, 0)]), to_pair(&m[(0, 1)])], [to_pair(&m[(1, 0)]), to_pair(&m[(1, 1)])]]
}

/// Parses and re-validates a state file.
pub fn from_json(text: &str) -> Result<State, CliError> {
    // kind stays raw until here so a bad value is reported against its field
    let doc: Document<Value> =
        serde_json::from_str(text).map_err(|e| CliError::Field { field: "document".into(), reason: e.to_string() })?;
    if doc.format_version != FORMAT_VERSION {
        return Err(CliError::Field {
            field: "format_version".into(),
            reason: format!("unsupported version {:?}, expected {FORMAT_VERSION:?}", doc.format_version),
        });
    }
    let n = doc.num_qubits;
    let kind: Kind = parse("kind", doc.kind)?;
    match kind {
        Kind::Pure => {
            let pairs: Vec<Pair> = parse("payload", doc.payload)?;
            check_finite("payload", pairs.iter().flatten())?;
            let expected = 1usize.checked_shl(n as u32).unwrap_or(usize::MAX);
            if pairs.len() != expected {
                return Err(CliError::Field {
                    field: "payload".into(),
                    reason: format!("expected {expected} amplitudes for {n} qubits, found {}", pairs.len()),
                });
            }
            let amps = pairs.iter().map(from_pair).collect();
            Ok(State::Pure(PureState::new(n, amps).map_err(|e| CliError::invalid("payload", e))?))
        }
        Kind::Symmetric => {
            let pairs: Vec<Pair> = parse("payload", doc.payload)?;
            check_finite("payload", pairs.iter().flatten())?;
            if pairs.len() != n + 1 {
                return Err(CliError::Field {
                    field: "payload".into(),
                    reason: format!("expected {} Dicke amplitudes for {n} qubits, found {}", n + 1, pairs.len()),
                });
            }
            let amps = pairs.iter().map(from_pair).collect();
            Ok(State::Symmetric(SymmetricState::new(n, amps).map_err(|e| CliError::invalid("payload", e))?))
        }
        Kind::Density => {
            let rows: Vec<Vec<Pair>> = parse("payload", doc.payload)?;
            let dim = 1usize.checked_shl(n as u32).unwrap_or(usize::MAX);
            if rows.len() != dim {
                return Err(CliError::Field {
                    field: "payload".into(),
                    reason: format!("expected {dim} rows for {n} qubits, found {}", rows.len()),
                });
            }
            for (r, row) in rows.iter().enumerate() {
                if row.len() != dim {
                    return Err(CliError::Field {
                        field: format!("payload[{r}]"),
                        reason: format!("expected {dim} entries, found {}", row.len()),
                    });
                }
                check_finite(&format!("payload[{r}]"), row.iter().flatten())?;
            }
            let m = DMatrix::from_fn(dim, dim, |i, j| from_pair(&rows[i][j]));
            Ok(State::Density(DensityMatrix::new(n, m).map_err(|e| CliError::invalid("payload", e))?))
        }
        Kind::Mixture => {
            let records: Vec<TermRecord> = parse("payload", doc.payload)?;
            if records.is_empty() {
                return Err(CliError::Field { field: "payload".into(), reason: "mixture has no terms".into() });
            }
            let mut terms = Vec::with_capacity(records.len());
            for (t, rec) in records.iter().enumerate() {
                if rec.factors.len() != n {
                    return Err(CliError::Field {
                        field: format!("payload[{t}].factors"),
                        reason: format!("expected {n} factors, found {}", rec.factors.len()),
                    });
                }
                check_finite(&format!("payload[{t}].weight"), [&rec.weight])?;
                for (q, f) in rec.factors.iter().enumerate() {
                    check_finite(&format!("payload[{t}].factors[{q}]"), f.iter().flatten().flatten())?;
                }
                let factors = rec.factors.iter().map(matrix2_from_rows).collect();
                let term = MixtureTerm::new(rec.weight, factors)
                    .map_err(|e| CliError::invalid(&format!("payload[{t}]"), e))?;
                terms.push(term);
            }
            State::mixture(terms)
        }
    }
}

/// Serializes a state; `to_json(from_json(to_json(s)))` reproduces the same bytes.
pub fn to_json(state: &State) -> String {
    let payload = match state {
        State::Pure(s) => serde_json::to_value(s.amplitudes().iter().map(to_pair).collect::<Vec<_>>()),
        State::Symmetric(s) => serde_json::to_value(s.dicke_amplitudes().iter().map(to_pair).collect::<Vec<_>>()),
        State::Density(rho) => {
            let m = rho.matrix();
            let rows: Vec<Vec<Pair>> =
                (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| to_pair(&m[(i, j)])).collect()).collect();
            serde_json::to_value(rows)
        }
        State::Mixture(terms, _) => serde_json::to_value(
            terms
                .iter()
                .map(|t| TermRecord { weight: t.weight(), factors: t.factors().iter().map(matrix2_rows).collect() })
                .collect::<Vec<_>>(),
        ),
    }
    .expect("finite numbers always serialize");
    let doc = Document {
        format_version: FORMAT_VERSION.to_string(),
        kind: state.kind(),
        num_qubits: state.num_qubits(),
        payload,
    };
    let mut text = serde_json::to_string(&doc).expect("document serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use spinsqueeze_core::states::{coherent_spin_state, random_separable_state};

    fn roundtrip(state: &State) {
        let first = to_json(state);
        let second = to_json(&from_json(&first).unwrap());
        assert_eq!(first, second);
    }

    #[test]
    fn every_kind_round_trips() {
        let css = coherent_spin_state(3, 0.7, 1.9).unwrap();
        roundtrip(&State::Symmetric(css.clone()));
        let pure = spinsqueeze_core::states::embed_symmetric(&css).unwrap();
        roundtrip(&State::Density(pure.to_density().unwrap()));
        roundtrip(&State::Pure(pure));
        let rho = random_separable_state(2, 3, 4).unwrap();
        roundtrip(&State::Density(rho));
        let terms = spinsqueeze_core::states::random_separable_terms(3, 4, 9).unwrap();
        roundtrip(&State::mixture(terms).unwrap());
    }

    #[test]
    fn errors_name_the_field() {
        let bad = r#"{"format_version":"1","kind":"pure","num_qubits":1,"payload":[[1.0,0.0]]}"#;
        let err = from_json(bad).unwrap_err().to_string();
        assert!(err.contains("payload"), "{err}");
        let bad = r#"{"format_version":"2","kind":"pure","num_qubits":1,"payload":[]}"#;
        assert!(from_json(bad).unwrap_err().to_string().contains("format_version"));
        let bad = r#"{"format_version":"1","kind":"pure","num_qubits":1,"payload":[[1.0,0.0],[1.0,0.0]]}"#;
        assert!(from_json(bad).unwrap_err().to_string().contains("norm"));
        let bad = r#"{"format_version":"1","kind":"mixture","num_qubits":1,"payload":[{"weight":1.0,"factors":[]}]}"#;
        assert!(from_json(bad).unwrap_err().to_string().contains("payload[0].factors"));
    }
}
