use spinsqueeze_core::states::{
    coherent_spin_state, one_axis_twisted_state, product_state, random_separable_terms, SymmetricState,
};
use spinsqueeze_core::C64;

use crate::error::CliError;
use crate::statefile::State;

pub fn css(n: usize, theta: f64, phi: f64) -> Result<State, CliError> {
    coherent_spin_state(n, theta, phi).map(State::Symmetric).map_err(|e| CliError::usage("css", e.to_string()))
}

pub fn twisted(n: usize, mu: f64) -> Result<State, CliError> {
    one_axis_twisted_state(n, mu).map(State::Symmetric).map_err(|e| CliError::usage("twisted", e.to_string()))
}

pub fn dicke(n: usize, k: usize) -> Result<State, CliError> {
    SymmetricState::dicke(n, k).map(State::Symmetric).map_err(|e| CliError::usage("dicke", e.to_string()))
}

/// Product of single-qubit states given by Bloch-sphere angles (θ from +z, φ from +x).
pub fn product(angles: &[(f64, f64)]) -> Result<State, CliError> {
    if angles.is_empty() {
        return Err(CliError::usage("--bloch", "give at least one qubit"));
    }
    let spinors: Vec<[C64; 2]> = angles
        .iter()
        .map(|&(theta, phi)| [C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)])
        .collect();
    product_state(&spinors).map(State::Pure).map_err(|e| CliError::usage("product", e.to_string()))
}

pub fn random_separable(n: usize, terms: usize, seed: u64) -> Result<State, CliError> {
    let terms =
        random_separable_terms(n, terms, seed).map_err(|e| CliError::usage("random-separable", e.to_string()))?;
    State::mixture(terms)
}

/// Parses "THETA,PHI".
pub fn parse_angles(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text.split_once(',').ok_or_else(|| format!("expected THETA,PHI, got {text:?}"))?;
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    let (theta, phi) = (parse(a)?, parse(b)?);
    if !theta.is_finite() || !phi.is_finite() {
        return Err("angles must be finite".into());
    }
    Ok((theta, phi))
}
