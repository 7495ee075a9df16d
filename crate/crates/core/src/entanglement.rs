//! Two-qubit Schmidt data, the local invariant 𝓘 and entanglement witnesses.

use alloc::format;
use alloc::string::String;

use nalgebra::{Matrix3, Vector3};
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{rotation_to_z, sym2_eigenvalues};
use crate::operators::BLOCH_ZERO_TOL;
use crate::reductions::{symmetry_deviation, QubitMoments};
use crate::squeezing::{xi_tilde_general, xi_tilde_symmetric, UndefinedReason, SYMMETRY_TOL};
use crate::states::PureState;

/// The two computations of 𝓘 must agree to this.
pub const PATH_TOL: f64 = 1e-9;
/// Margin below 1 (for ξ̃₂) or 0 (for 𝓘) required before a witness fires.
pub const WITNESS_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtPair {
    pub lambda1: f64,
    pub lambda2: f64,
}

fn two_qubit_determinant(state: &PureState) -> Result<f64> {
    if state.num_qubits() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: state.num_qubits() });
    }
    let a = state.amplitudes();
    Ok((a[1] * a[2] - a[0] * a[3]).norm())
}

/// λ₁,₂² = (1 ± √(1 − 4|βγ − αδ|²))/2.
pub fn schmidt(state: &PureState) -> Result<SchmidtPair> {
    let det = two_qubit_determinant(state)?;
    let root = (1.0 - 4.0 * det * det).max(0.0).sqrt();
    Ok(SchmidtPair { lambda1: (0.5 * (1.0 + root)).sqrt(), lambda2: (0.5 * (1.0 - root)).max(0.0).sqrt() })
}

/// C = 2|βγ − αδ| for a pure two-qubit state.
pub fn concurrence_pure(state: &PureState) -> Result<f64> {
    Ok((2.0 * two_qubit_determinant(state)?).min(1.0))
}

/// (ξ̃₁, ξ̃₂) = (√(1 − C), 1/√(1 + C)) for a pure two-qubit state of concurrence C.
pub fn xi_from_concurrence(concurrence: f64) -> Result<(f64, f64)> {
    if !(-1e-12..=1.0 + 1e-12).contains(&concurrence) {
        return Err(Error::InvalidParameter { name: "concurrence", reason: "must lie in [0, 1]" });
    }
    let c = concurrence.clamp(0.0, 1.0);
    Ok(((1.0 - c).sqrt(), 1.0 / (1.0 + c).sqrt()))
}

/// Bloch vector and symmetrized pair matrix of a pair, rejecting non-symmetric states.
fn symmetric_pair<S: QubitMoments + ?Sized>(
    state: &S,
    pair: Option<(usize, usize)>,
) -> Result<(Vector3<f64>, Matrix3<f64>)> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { required: 2, found: n });
    }
    let deviation = symmetry_deviation(state)?;
    if deviation > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { deviation });
    }
    let (i, j) = pair.unwrap_or((0, 1));
    let t = state.pair_correlation(i, j)?;
    Ok((state.bloch_vector(i)?, (t + t.transpose()) * 0.5))
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn invariant_direct(s: &Vector3<f64>, t: &Matrix3<f64>) -> f64 {
    let mut total = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let e1 = levi_civita(i, j, k);
                if e1 == 0.0 {
                    continue;
                }
                for l in 0..3 {
                    for m in 0..3 {
                        for n in 0..3 {
                            let e2 = levi_civita(l, m, n);
                            if e2 != 0.0 {
                                total += e1 * e2 * s[i] * s[l] * t[(j, m)] * t[(k, n)];
                            }
                        }
                    }
                }
            }
        }
    }
    total
}

/// Eigenvalues (t⊥⁺, t⊥⁻) of the pair-matrix block perpendicular to the Bloch vector.
fn perp_eigenvalues_of(s: &Vector3<f64>, t: &Matrix3<f64>) -> (f64, f64) {
    let s0 = s.norm();
    let o = if s0 <= BLOCH_ZERO_TOL { Matrix3::identity() } else { rotation_to_z(&(s / s0)) };
    let r = o * t * o.transpose();
    sym2_eigenvalues(r[(0, 0)], 0.5 * (r[(0, 1)] + r[(1, 0)]), r[(1, 1)])
}

/// The two evaluations of 𝓘: the double Levi-Civita contraction in the
/// original frame, and 2s₀²t⊥⁺t⊥⁻ after aligning s with ẑ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantPaths {
    pub direct: f64,
    pub aligned: f64,
    pub t_plus: f64,
    pub t_minus: f64,
}

pub fn invariant_paths<S: QubitMoments + ?Sized>(state: &S, pair: Option<(usize, usize)>) -> Result<InvariantPaths> {
    let (s, t) = symmetric_pair(state, pair)?;
    let (t_plus, t_minus) = perp_eigenvalues_of(&s, &t);
    let s0 = s.norm();
    Ok(InvariantPaths { direct: invariant_direct(&s, &t), aligned: 2.0 * s0 * s0 * t_plus * t_minus, t_plus, t_minus })
}

/// 𝓘 = ε_ijk ε_lmn s_i s_l t_jm t_kn, checked against the aligned form.
pub fn invariant_i<S: QubitMoments + ?Sized>(state: &S, pair: Option<(usize, usize)>) -> Result<f64> {
    let paths = invariant_paths(state, pair)?;
    if (paths.direct - paths.aligned).abs() > PATH_TOL {
        return Err(Error::PathMismatch { first: paths.direct, second: paths.aligned });
    }
    Ok(paths.direct)
}

/// (t⊥⁺, t⊥⁻) of a symmetric state.
pub fn perp_eigenvalues<S: QubitMoments + ?Sized>(state: &S) -> Result<(f64, f64)> {
    let (s, t) = symmetric_pair(state, None)?;
    Ok(perp_eigenvalues_of(&s, &t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// 𝓘 against 2s₀²t⊥⁺(ξ̃₁² − 1)/(N − 1).
pub fn verify_identity_imp1<S: QubitMoments + ?Sized>(state: &S) -> Result<IdentityCheck> {
    let paths = invariant_paths(state, None)?;
    if (paths.direct - paths.aligned).abs() > PATH_TOL {
        return Err(Error::PathMismatch { first: paths.direct, second: paths.aligned });
    }
    let s0 = state.bloch_vector(0)?.norm();
    if s0 <= BLOCH_ZERO_TOL {
        return Err(Error::QubitBlochZero);
    }
    let xi1 = xi_tilde_symmetric(state)?.xi1_tilde.ok_or(Error::QubitBlochZero)?;
    let n = state.num_qubits() as f64;
    let lhs = paths.direct;
    let rhs = 2.0 * s0 * s0 * paths.t_plus * (xi1 * xi1 - 1.0) / (n - 1.0);
    Ok(IdentityCheck { lhs, rhs, residual: (lhs - rhs).abs() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// ξ̃₂ < 1: the state is not separable.
    Entangled,
    /// 𝓘 < 0 on an exchange-symmetric state: some pair is entangled.
    PairwiseEntangled,
    /// Neither witness fired. This never certifies separability.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub xi2_tilde: Option<f64>,
    pub invariant_i: Option<f64>,
    pub verdict: Verdict,
    pub details: String,
}

impl WitnessReport {
    pub fn is_entangled(&self) -> bool {
        self.verdict != Verdict::Inconclusive
    }
}

/// Runs the ξ̃₂ witness and, for exchange-symmetric states, the 𝓘 witness.
///
/// The pairwise verdict is the stronger statement and wins when both fire.
pub fn witness<S: QubitMoments + ?Sized>(state: &S) -> Result<WitnessReport> {
    let tilde = xi_tilde_general(state)?;
    let xi2_tilde = tilde.xi2_tilde;
    let symmetric = state.num_qubits() >= 2 && symmetry_deviation(state)? <= SYMMETRY_TOL;
    let invariant = if symmetric { Some(invariant_i(state, None)?) } else { None };

    let squeezed = xi2_tilde.is_some_and(|x| x < 1.0 - WITNESS_MARGIN);
    let pairwise = invariant.is_some_and(|i| i < -WITNESS_MARGIN);
    let verdict = match (pairwise, squeezed) {
        (true, _) => Verdict::PairwiseEntangled,
        (false, true) => Verdict::Entangled,
        (false, false) => Verdict::Inconclusive,
    };

    let xi_part = match (xi2_tilde, tilde.undefined_reason) {
        (Some(x), _) => format!("xi2_tilde = {x:.12}"),
        (None, Some(UndefinedReason::QubitBlochZero)) => {
            String::from("xi2_tilde undefined: a qubit has zero Bloch vector")
        }
        (None, _) => String::from("xi2_tilde undefined"),
    };
    let i_part = match invariant {
        Some(i) => format!("invariant I = {i:.12}"),
        None => String::from("invariant I not evaluated: state is not exchange symmetric"),
    };
    let details = format!("{xi_part}; {i_part}");
    Ok(WitnessReport { xi2_tilde, invariant_i: invariant, verdict, details })
}
