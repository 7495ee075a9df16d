//! The analysis report written by `spinsqueeze analyze`.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use spinsqueeze_core::entanglement::{concurrence_pure, invariant_paths, verify_identity_imp1, witness, Verdict};
use spinsqueeze_core::operators::mean_spin;
use spinsqueeze_core::reductions::symmetry_deviation;
use spinsqueeze_core::squeezing::{
    brute_force_min_variance, xi_standard, xi_tilde_general, xi_tilde_symmetric, SqueezingResult, UndefinedReason,
    SYMMETRY_TOL,
};
use spinsqueeze_core::{Direction, Error};

use crate::error::CliError;
use crate::statefile::State;

/// Pair matrices are listed up to this many qubits.
pub const PAIR_LISTING_LIMIT: usize = 8;
/// Bloch vectors are listed up to this many qubits.
pub const BLOCH_LISTING_LIMIT: usize = 64;
/// The independent-angle oracle runs up to this many qubits.
pub const ORACLE_LIMIT: usize = 8;
pub const ORACLE_RESOLUTION: usize = 128;

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: Tool,
    pub input: Input,
    pub mean_spin: [f64; 3],
    pub standard: Standard,
    pub tilde: Tilde,
    /// Symmetric closed form; null unless the state is exchange symmetric.
    pub tilde_symmetric: Option<Tilde>,
    pub witness: WitnessOut,
    pub identity: IdentityOut,
    /// Pure two-qubit states only.
    pub concurrence: Option<f64>,
    pub bloch_vectors: Option<Vec<[f64; 3]>>,
    pub pair_correlations: Option<Vec<PairOut>>,
    pub oracle: Oracle,
}

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Input {
    pub sha256: String,
    pub kind: &'static str,
    pub num_qubits: usize,
    pub exchange_symmetric: bool,
    pub symmetry_deviation: f64,
}

#[derive(Debug, Serialize)]
pub struct Standard {
    pub xi1: Option<f64>,
    pub xi2: Option<f64>,
    pub min_variance: Option<f64>,
    pub optimal_angle: Option<f64>,
    pub mean_j0: f64,
    pub undefined_reason: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct Tilde {
    pub xi1_tilde: Option<f64>,
    pub xi2_tilde: Option<f64>,
    pub min_variance: Option<f64>,
    pub optimal_angle: Option<f64>,
    pub mean_j0: f64,
    pub undefined_reason: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct WitnessOut {
    pub verdict: &'static str,
    pub xi2_tilde: Option<f64>,
    pub invariant_i: Option<f64>,
    pub details: String,
}

#[derive(Debug, Serialize)]
pub struct IdentityOut {
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub residual: Option<f64>,
    pub undefined_reason: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct PairOut {
    pub i: usize,
    pub j: usize,
    pub matrix: [[f64; 3]; 3],
}

/// Cross-checks between independent computations. Residuals should be ~1e-12;
/// the two minimal variances are reported side by side, not compared.
#[derive(Debug, Serialize)]
pub struct Oracle {
    /// |ξ₂ − N ξ₁ / (2|⟨J⟩|)|.
    pub standard_relation: Option<f64>,
    /// |ξ̃₁ general path − ξ̃₁ symmetric closed form|.
    pub symmetric_vs_general: Option<f64>,
    /// |𝓘 by contraction − 𝓘 from aligned eigenvalues|.
    pub invariant_paths: Option<f64>,
    /// |ξ̃₁ − √(1 − C)| for pure two-qubit states.
    pub concurrence_relation: Option<f64>,
    /// Minimal variance over one common perpendicular direction.
    pub common_direction_min_variance: Option<f64>,
    /// Minimal variance over independent per-qubit perpendicular directions.
    pub independent_angle_min_variance: Option<f64>,
}

pub fn reason_name(reason: UndefinedReason) -> &'static str {
    match reason {
        UndefinedReason::MeanSpinZero => "mean_spin_zero",
        UndefinedReason::QubitBlochZero => "qubit_bloch_zero",
    }
}

pub fn verdict_name(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Entangled => "entangled",
        Verdict::PairwiseEntangled => "pairwise_entangled",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn standard(r: &SqueezingResult) -> Standard {
    Standard {
        xi1: r.xi1,
        xi2: r.xi2,
        min_variance: r.min_variance,
        optimal_angle: r.optimal_angle,
        mean_j0: r.mean_j0,
        undefined_reason: r.undefined_reason.map(reason_name),
    }
}

fn tilde(r: &SqueezingResult) -> Tilde {
    Tilde {
        xi1_tilde: r.xi1_tilde,
        xi2_tilde: r.xi2_tilde,
        min_variance: r.min_variance,
        optimal_angle: r.optimal_angle,
        mean_j0: r.mean_j0,
        undefined_reason: r.undefined_reason.map(reason_name),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn rows(m: &nalgebra::Matrix3<f64>) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

pub fn analyze(state: &State, input_bytes: &[u8]) -> Result<Report, CliError> {
    let s = state.moments();
    let n = s.num_qubits();
    let deviation = if n >= 2 { symmetry_deviation(s)? } else { 0.0 };
    let symmetric = n >= 2 && deviation <= SYMMETRY_TOL;

    let std_result = xi_standard(s)?;
    let general = xi_tilde_general(s)?;
    let closed = if symmetric { Some(xi_tilde_symmetric(s)?) } else { None };
    let w = witness(s)?;

    let identity = if !symmetric {
        IdentityOut { lhs: None, rhs: None, residual: None, undefined_reason: Some("not_exchange_symmetric") }
    } else {
        match verify_identity_imp1(s) {
            Ok(c) => {
                IdentityOut { lhs: Some(c.lhs), rhs: Some(c.rhs), residual: Some(c.residual), undefined_reason: None }
            }
            Err(Error::QubitBlochZero) => {
                IdentityOut { lhs: None, rhs: None, residual: None, undefined_reason: Some("qubit_bloch_zero") }
            }
            Err(e) => return Err(e.into()),
        }
    };

    let concurrence = match state {
        State::Pure(p) if n == 2 => Some(concurrence_pure(p)?),
        _ => None,
    };

    let bloch_vectors = if n <= BLOCH_LISTING_LIMIT {
        Some((0..n).map(|q| s.bloch_vector(q).map(|v| [v.x, v.y, v.z])).collect::<Result<Vec<_>, _>>()?)
    } else {
        None
    };
    let pair_correlations = if n <= PAIR_LISTING_LIMIT {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push(PairOut { i, j, matrix: rows(&s.pair_correlation(i, j)?) });
            }
        }
        Some(pairs)
    } else {
        None
    };

    let (common, independent) = match general.min_variance {
        Some(v) if n <= ORACLE_LIMIT => {
            let frames = (0..n).map(|q| Direction::normalize(s.bloch_vector(q)?)).collect::<Result<Vec<_>, _>>()?;
            (Some(v), Some(brute_force_min_variance(s, &frames, ORACLE_RESOLUTION)?))
        }
        _ => (None, None),
    };
    let oracle = Oracle {
        standard_relation: match (std_result.xi1, std_result.xi2) {
            (Some(x1), Some(x2)) => Some((x2 - n as f64 * x1 / (2.0 * std_result.mean_j0)).abs()),
            _ => None,
        },
        symmetric_vs_general: match (&closed, general.xi1_tilde) {
            (Some(c), Some(g)) => c.xi1_tilde.map(|x| (x - g).abs()),
            _ => None,
        },
        invariant_paths: if symmetric {
            let p = invariant_paths(s, None)?;
            Some((p.direct - p.aligned).abs())
        } else {
            None
        },
        concurrence_relation: match (concurrence, general.xi1_tilde) {
            (Some(c), Some(x)) => Some((x - (1.0 - c).sqrt()).abs()),
            _ => None,
        },
        common_direction_min_variance: common,
        independent_angle_min_variance: independent,
    };

    let j = mean_spin(s)?;
    Ok(Report {
        tool: Tool { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") },
        input: Input {
            sha256: sha256_hex(input_bytes),
            kind: state.kind().as_str(),
            num_qubits: n,
            exchange_symmetric: symmetric,
            symmetry_deviation: deviation,
        },
        mean_spin: [j.x, j.y, j.z],
        standard: standard(&std_result),
        tilde: tilde(&general),
        tilde_symmetric: closed.as_ref().map(tilde),
        witness: WitnessOut {
            verdict: verdict_name(w.verdict),
            xi2_tilde: w.xi2_tilde,
            invariant_i: w.invariant_i,
            details: w.details,
        },
        identity,
        concurrence,
        bloch_vectors,
        pair_correlations,
        oracle,
    })
}

fn value(x: Option<f64>, reason: Option<&str>) -> String {
    match (x, reason) {
        (Some(v), _) => format!("{v:.12}"),
        (None, Some(r)) => format!("undefined ({r})"),
        (None, None) => "n/a".to_string(),
    }
}

/// Human-readable rendering.
pub fn to_text(r: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "{} {}", r.tool.name, r.tool.version);
    let _ =
        writeln!(w, "input        {} state, {} qubits, sha256 {}", r.input.kind, r.input.num_qubits, r.input.sha256);
    let _ = writeln!(
        w,
        "symmetric    {} (pair deviation {:.3e})",
        if r.input.exchange_symmetric { "yes" } else { "no" },
        r.input.symmetry_deviation
    );
    let m = r.mean_spin;
    let _ = writeln!(w, "<J>          ({:.12}, {:.12}, {:.12})", m[0], m[1], m[2]);
    let sr = r.standard.undefined_reason;
    let _ = writeln!(w, "xi1          {}", value(r.standard.xi1, sr));
    let _ = writeln!(w, "xi2          {}", value(r.standard.xi2, sr));
    let _ = writeln!(w, "var_min      {}", value(r.standard.min_variance, sr));
    let tr = r.tilde.undefined_reason;
    let _ = writeln!(w, "xi1_tilde    {}", value(r.tilde.xi1_tilde, tr));
    let _ = writeln!(w, "xi2_tilde    {}", value(r.tilde.xi2_tilde, tr));
    let _ = writeln!(w, "var_min~     {}", value(r.tilde.min_variance, tr));
    let _ = writeln!(w, "<J0>~        {:.12}", r.tilde.mean_j0);
    if let Some(c) = r.concurrence {
        let _ = writeln!(w, "concurrence  {c:.12}");
    }
    let _ = writeln!(w, "invariant I  {}", value(r.witness.invariant_i, Some("not_exchange_symmetric")));
    let _ = writeln!(w, "identity     residual {}", value(r.identity.residual, r.identity.undefined_reason));
    let _ = writeln!(w, "verdict      {} ({})", r.witness.verdict, r.witness.details);
    if let (Some(c), Some(i)) = (r.oracle.common_direction_min_variance, r.oracle.independent_angle_min_variance) {
        let _ = writeln!(w, "oracle       common-direction var {c:.12}, independent-angle var {i:.12}");
    }
    out
}

pub fn to_machine(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}
