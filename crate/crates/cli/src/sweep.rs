//! Parameter sweeps written as CSV, one row per parameter value.

use std::io::Write;

use spinsqueeze_core::entanglement::{concurrence_pure, invariant_i};
use spinsqueeze_core::reductions::symmetry_deviation;
use spinsqueeze_core::squeezing::{xi_standard, xi_tilde_general, SYMMETRY_TOL};
use spinsqueeze_core::states::{one_axis_twisted_state, PureState};
use spinsqueeze_core::{Error, QubitMoments, C64};

use crate::error::CliError;

pub const HEADER: [&str; 7] = ["parameter", "xi1", "xi2", "xi1_tilde", "xi2_tilde", "concurrence", "invariant_i"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub parameter: f64,
    pub xi1: Option<f64>,
    pub xi2: Option<f64>,
    pub xi1_tilde: Option<f64>,
    pub xi2_tilde: Option<f64>,
    pub concurrence: Option<f64>,
    pub invariant_i: Option<f64>,
}

/// `points` evenly spaced values from `from` to `to` inclusive.
pub fn grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !from.is_finite() || !to.is_finite() {
        return Err(CliError::usage("--from/--to", "range ends must be finite"));
    }
    match points {
        0 => Err(CliError::usage("--points", "must be at least 1")),
        1 => Ok(vec![from]),
        _ => Ok((0..points).map(|k| from + (to - from) * k as f64 / (points - 1) as f64).collect()),
    }
}

fn row(parameter: f64, state: &dyn QubitMoments, concurrence: Option<f64>) -> Result<Row, CliError> {
    let standard = xi_standard(state)?;
    let tilde = xi_tilde_general(state)?;
    let symmetric = state.num_qubits() >= 2 && symmetry_deviation(state)? <= SYMMETRY_TOL;
    let invariant_i = if symmetric {
        match invariant_i(state, None) {
            Ok(i) => Some(i),
            Err(Error::NotSymmetric { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    Ok(Row {
        parameter,
        xi1: standard.xi1,
        xi2: standard.xi2,
        xi1_tilde: tilde.xi1_tilde,
        xi2_tilde: tilde.xi2_tilde,
        concurrence,
        invariant_i,
    })
}

/// cos θ|00⟩ + sin θ|11⟩ over θ.
pub fn schmidt(thetas: &[f64]) -> Result<Vec<Row>, CliError> {
    thetas
        .iter()
        .map(|&theta| {
            let zero = C64::new(0.0, 0.0);
            let amps = vec![C64::new(theta.cos(), 0.0), zero, zero, C64::new(theta.sin(), 0.0)];
            let psi = PureState::new(2, amps)?;
            let c = concurrence_pure(&psi)?;
            row(theta, &psi, Some(c))
        })
        .collect()
}

/// One-axis twisted states of `n` qubits over the twisting strength μ.
pub fn twisted(n: usize, mus: &[f64]) -> Result<Vec<Row>, CliError> {
    mus.iter()
        .map(|&mu| {
            let s = one_axis_twisted_state(n, mu).map_err(|e| CliError::usage("twisted", e.to_string()))?;
            row(mu, &s, None)
        })
        .collect()
}

fn cell(x: Option<f64>) -> String {
    // Display for f64 is the shortest string that parses back to the same value.
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.parameter.to_string(),
            cell(r.xi1),
            cell(r.xi2),
            cell(r.xi1_tilde),
            cell(r.xi2_tilde),
            cell(r.concurrence),
            cell(r.invariant_i),
        ])?;
    }
    w.flush().map_err(|e| CliError::Io { path: "<csv>".into(), source: e })?;
    Ok(())
}
