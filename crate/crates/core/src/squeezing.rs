//! Spin-squeezing parameters.
//!
//! ξ₁ and ξ₂ are taken in the frame of the collective mean spin. The tilde
//! parameters use one frame per qubit, aligned with that qubit's own Bloch
//! vector, which makes them invariant under local unitaries.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{rotation_to_z, rotation_z};
use crate::operators::{complete_frame, mean_spin, Direction, BLOCH_ZERO_TOL, MEAN_SPIN_ZERO_TOL};
use crate::reductions::{aggregate_s, symmetry_deviation, MomentTable, QubitMoments};

/// Pair reductions must agree this closely for a state to count as exchange symmetric.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Below this spread of the 2×2 block the two perpendicular eigenvalues are treated as equal.
const DEGENERATE_TOL: f64 = 1e-14;

/// Why a squeezing parameter could not be defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UndefinedReason {
    /// ⟨J⟩ vanishes, so there is no mean-spin direction.
    MeanSpinZero,
    /// Some qubit has a zero Bloch vector, so its frame does not exist.
    QubitBlochZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SqueezingResult {
    pub xi1: Option<f64>,
    pub xi2: Option<f64>,
    pub xi1_tilde: Option<f64>,
    pub xi2_tilde: Option<f64>,
    /// Minimal perpendicular variance found by the computation that produced this result.
    pub min_variance: Option<f64>,
    /// Angle of the minimizing direction from n⊥ towards n'⊥, in [0, π).
    pub optimal_angle: Option<f64>,
    /// |⟨J⟩| for the standard parameters, ⟨𝒥0⟩ = ½ Σ |s_i| for the tilde ones.
    pub mean_j0: f64,
    pub undefined_reason: Option<UndefinedReason>,
}

impl SqueezingResult {
    fn undefined(reason: UndefinedReason, mean_j0: f64) -> Self {
        Self { mean_j0, undefined_reason: Some(reason), ..Self::default() }
    }
}

/// Minimum of a quadratic form over the unit circle perpendicular to some n0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerpendicularMinimum {
    pub value: f64,
    /// Angle from n⊥ towards n'⊥ of `complete_frame(n0)`; 0 when degenerate.
    pub angle: f64,
    pub direction: Direction,
}

/// Minimizes n̂ᵀ M n̂ over unit n̂ ⟂ n0. Only the symmetric part of `m` matters.
pub fn perpendicular_minimum(m: &Matrix3<f64>, n0: &Direction) -> PerpendicularMinimum {
    let frame = complete_frame(n0);
    let p = frame.perp_basis();
    let sym = (m + m.transpose()) * 0.5;
    let b = p.transpose() * sym * p;
    let (b00, b01, b11) = (b[(0, 0)], b[(0, 1)], b[(1, 1)]);
    let half_diff = 0.5 * (b00 - b11);
    let radius = (half_diff * half_diff + b01 * b01).sqrt();
    let value = 0.5 * (b00 + b11) - radius;
    let scale = b00.abs().max(b11.abs()).max(b01.abs()).max(1.0);
    let angle = if radius <= DEGENERATE_TOL * scale {
        0.0
    } else {
        // n̂ᵀBn̂ = mean + r cos(2θ − δ), smallest at 2θ = δ + π
        let delta = b01.atan2(half_diff);
        let mut theta = 0.5 * (delta + core::f64::consts::PI);
        if theta >= core::f64::consts::PI {
            theta -= core::f64::consts::PI;
        }
        theta
    };
    let direction = Direction::normalize(frame.perp_direction(angle)).expect("frame vectors are unit");
    PerpendicularMinimum { value, angle, direction }
}

/// (value, direction) of min n̂ᵀ M n̂ over unit n̂ ⟂ n0.
pub fn quadratic_form_min(m: &Matrix3<f64>, n0: &Direction) -> (f64, Direction) {
    let min = perpendicular_minimum(m, n0);
    (min.value, min.direction)
}

/// Full 3×3 covariance of (Jx, Jy, Jz), symmetrized.
pub fn collective_covariance<S: QubitMoments + ?Sized>(state: &S) -> Result<Matrix3<f64>> {
    let n = state.num_qubits();
    let mean = mean_spin(state)?;
    let mut pairs = Matrix3::zeros();
    if n >= 2 {
        if state.is_exchange_symmetric() {
            pairs = state.pair_correlation(0, 1)? * (n * (n - 1)) as f64;
        } else {
            for i in 0..n {
                for j in i + 1..n {
                    pairs += state.pair_correlation(i, j)? * 2.0;
                }
            }
        }
    }
    let second = (Matrix3::identity() * n as f64 + (pairs + pairs.transpose()) * 0.5) * 0.25;
    Ok(second - mean * mean.transpose())
}

/// ξ₁ (Kitagawa–Ueda) and ξ₂ (Wineland) in the mean-spin frame.
pub fn xi_standard<S: QubitMoments + ?Sized>(state: &S) -> Result<SqueezingResult> {
    let n = state.num_qubits() as f64;
    let mean = mean_spin(state)?;
    let length = mean.norm();
    if length <= MEAN_SPIN_ZERO_TOL {
        return Ok(SqueezingResult::undefined(UndefinedReason::MeanSpinZero, length));
    }
    let n0 = Direction::normalize(mean)?;
    let cov = collective_covariance(state)?;
    let min = perpendicular_minimum(&cov, &n0);
    let variance = min.value.max(0.0);
    let delta = variance.sqrt();
    Ok(SqueezingResult {
        xi1: Some(2.0 * delta / n.sqrt()),
        xi2: Some(n.sqrt() * delta / length),
        min_variance: Some(variance),
        optimal_angle: Some(min.angle),
        mean_j0: length,
        ..SqueezingResult::default()
    })
}

fn symmetric_tilde(num_qubits: usize, s: Vector3<f64>, t: Matrix3<f64>) -> Result<SqueezingResult> {
    let n = num_qubits as f64;
    let s0 = s.norm();
    if s0 <= BLOCH_ZERO_TOL {
        return Ok(SqueezingResult::undefined(UndefinedReason::QubitBlochZero, 0.5 * n * s0));
    }
    let n0 = Direction::normalize(s)?;
    let min = perpendicular_minimum(&t, &n0);
    let xi1_sq = (1.0 + (n - 1.0) * min.value).max(0.0);
    let xi1 = xi1_sq.sqrt();
    Ok(SqueezingResult {
        xi1_tilde: Some(xi1),
        xi2_tilde: Some(xi1 / s0),
        min_variance: Some(0.25 * n * xi1_sq),
        optimal_angle: Some(min.angle),
        mean_j0: 0.5 * n * s0,
        ..SqueezingResult::default()
    })
}

/// ξ̃₁ = √(1 + (N−1) min n̂ᵀTn̂) and ξ̃₂ = ξ̃₁/s₀ for an exchange-symmetric state.
///
/// Both are left undefined when the common Bloch vector vanishes, since the
/// perpendicular plane is then not fixed.
pub fn xi_tilde_symmetric<S: QubitMoments + ?Sized>(state: &S) -> Result<SqueezingResult> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { required: 2, found: n });
    }
    let deviation = symmetry_deviation(state)?;
    if deviation > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { deviation });
    }
    symmetric_tilde(n, state.bloch_vector(0)?, state.pair_correlation(0, 1)?)
}

/// Moments of a state seen through one SO(3) rotation per qubit.
struct Rotated<'a> {
    base: &'a MomentTable,
    rotations: &'a [Matrix3<f64>],
}

impl QubitMoments for Rotated<'_> {
    fn num_qubits(&self) -> usize {
        self.base.num_qubits()
    }

    fn bloch_vector(&self, qubit: usize) -> Result<Vector3<f64>> {
        Ok(self.rotations[qubit] * self.base.bloch_vector(qubit)?)
    }

    fn pair_correlation(&self, i: usize, j: usize) -> Result<Matrix3<f64>> {
        Ok(self.rotations[i] * self.base.pair_correlation(i, j)? * self.rotations[j].transpose())
    }
}

/// Strength and gauge angle of the perpendicular block A of a rotated pair
/// matrix: rotating the second qubit by Rz(φ) makes A symmetric with trace ≥ 0.
fn pair_gauge(t: &Matrix3<f64>) -> (f64, f64) {
    let (a, b, c, d) = (t[(0, 0)], t[(0, 1)], t[(1, 0)], t[(1, 1)]);
    let (u, v) = (a + d, c - b);
    let weight = (u * u + v * v).sqrt();
    let angle = if weight <= 1e-12 { 0.0 } else { v.atan2(u) };
    (weight, angle)
}

/// Per-qubit rotations taking every Bloch vector to +ẑ, with the residual
/// rotations about ẑ fixed along a maximum-weight spanning tree of pair blocks.
///
/// The plain alignment leaves each qubit's perpendicular axes arbitrary up to a
/// rotation about ẑ, and a common n̂⊥ only means something once those are tied
/// together. The tree fixes them relative to qubit 0 using only quantities that
/// transform covariantly, so the result does not depend on local unitaries.
/// For exchange-symmetric states every rotation is the same and the tree is a
/// no-op.
pub fn common_orientation(table: &MomentTable) -> Result<Vec<Matrix3<f64>>> {
    let n = table.num_qubits();
    let mut rotations = Vec::with_capacity(n);
    for q in 0..n {
        let s = table.bloch_vector(q)?;
        let norm = s.norm();
        if norm <= BLOCH_ZERO_TOL {
            return Err(Error::QubitBlochZero);
        }
        rotations.push(rotation_to_z(&(s / norm)));
    }
    if n < 2 {
        return Ok(rotations);
    }

    let mut weight = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let t = rotations[i] * table.pair_correlation(i, j)? * rotations[j].transpose();
            let (w, _) = pair_gauge(&t);
            weight[i][j] = w;
            weight[j][i] = w;
        }
    }

    // Prim from qubit 0; ties go to the lowest index so the tree is deterministic.
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::NEG_INFINITY, 0usize); n];
    in_tree[0] = true;
    for j in 1..n {
        best[j] = (weight[0][j], 0);
    }
    for _ in 1..n {
        let mut pick = None;
        for j in 0..n {
            if !in_tree[j] && pick.is_none_or(|p: usize| best[j].0 > best[p].0) {
                pick = Some(j);
            }
        }
        let child = pick.expect("a qubit remains outside the tree");
        let parent = best[child].1;
        let t = rotations[parent] * table.pair_correlation(parent, child)? * rotations[child].transpose();
        let (_, angle) = pair_gauge(&t);
        rotations[child] = rotation_z(angle) * rotations[child];
        in_tree[child] = true;
        for j in 0..n {
            if !in_tree[j] && weight[child][j] > best[j].0 {
                best[j] = (weight[child][j], child);
            }
        }
    }
    Ok(rotations)
}

/// ξ̃₁ and ξ̃₂ for an arbitrary state through the aggregate S matrix:
/// (Δ𝒥⊥)²min = ¼[N + 2 min n̂ᵀSn̂], ξ̃₁ = 2(Δ𝒥⊥)min/√N, ξ̃₂ = √N(Δ𝒥⊥)min/⟨𝒥0⟩.
pub fn xi_tilde_general<S: QubitMoments + ?Sized>(state: &S) -> Result<SqueezingResult> {
    let n = state.num_qubits();
    if state.is_exchange_symmetric() && n >= 2 {
        return symmetric_tilde(n, state.bloch_vector(0)?, state.pair_correlation(0, 1)?);
    }
    let table = MomentTable::new(state)?;
    let mut mean_j0 = 0.0;
    for q in 0..n {
        mean_j0 += 0.5 * table.bloch_vector(q)?.norm();
    }
    let rotations = match common_orientation(&table) {
        Ok(r) => r,
        Err(Error::QubitBlochZero) => {
            return Ok(SqueezingResult::undefined(UndefinedReason::QubitBlochZero, mean_j0));
        }
        Err(e) => return Err(e),
    };
    let (s_min, angle) = if n >= 2 {
        let rotated = Rotated { base: &table, rotations: &rotations };
        let s = aggregate_s(&rotated)?;
        let min = perpendicular_minimum(s.entries(), &Direction::z());
        (min.value, min.angle)
    } else {
        (0.0, 0.0)
    };
    let nf = n as f64;
    let variance = (0.25 * (nf + 2.0 * s_min)).max(0.0);
    let delta = variance.sqrt();
    Ok(SqueezingResult {
        xi1_tilde: Some(2.0 * delta / nf.sqrt()),
        xi2_tilde: Some(nf.sqrt() * delta / mean_j0),
        min_variance: Some(variance),
        optimal_angle: Some(angle),
        mean_j0,
        ..SqueezingResult::default()
    })
}

/// Independent-angle oracle: minimizes Var(𝒥⊥) with 𝒥⊥ = ½ Σ σ_i · n̂_i⊥(θ_i),
/// each θ_i measured in `complete_frame(frames_n0[i])`.
///
/// Coordinate descent from a set of deterministic starts; each coordinate step
/// scans `angular_resolution` points and refines the best by golden section.
pub fn brute_force_min_variance<S: QubitMoments + ?Sized>(
    state: &S,
    frames_n0: &[Direction],
    angular_resolution: usize,
) -> Result<f64> {
    let n = state.num_qubits();
    if frames_n0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: frames_n0.len() });
    }
    if angular_resolution < 64 {
        return Err(Error::InvalidParameter { name: "angular_resolution", reason: "must be at least 64" });
    }
    let bases: Vec<_> = frames_n0.iter().map(|d| complete_frame(d).perp_basis()).collect();
    let mut mean = Vec::with_capacity(n);
    for (q, p) in bases.iter().enumerate() {
        mean.push(p.transpose() * state.bloch_vector(q)?);
    }
    let mut blocks = vec![Matrix2::zeros(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let b = bases[i].transpose() * state.pair_correlation(i, j)? * bases[j];
            blocks[i * n + j] = b;
            blocks[j * n + i] = b.transpose();
        }
    }
    let oracle = VarianceLandscape { n, mean, blocks, resolution: angular_resolution };

    let mut best = f64::INFINITY;
    for start in starts(n) {
        best = best.min(oracle.descend(start));
    }
    Ok(best.max(0.0))
}

fn starts(n: usize) -> Vec<Vec<f64>> {
    use core::f64::consts::{PI, TAU};
    let mut out = Vec::new();
    for k in 0..8 {
        let base = k as f64 * PI / 8.0;
        out.push(vec![base; n]);
        out.push((0..n).map(|i| base + TAU * i as f64 / n as f64).collect());
        out.push((0..n).map(|i| base + if i % 2 == 0 { 0.0 } else { PI / 2.0 }).collect());
    }
    out
}

struct VarianceLandscape {
    n: usize,
    mean: Vec<Vector2<f64>>,
    blocks: Vec<Matrix2<f64>>,
    resolution: usize,
}

fn unit(theta: f64) -> Vector2<f64> {
    let (s, c) = theta.sin_cos();
    Vector2::new(c, s)
}

impl VarianceLandscape {
    fn variance(&self, angles: &[f64]) -> f64 {
        let u: Vec<_> = angles.iter().map(|&a| unit(a)).collect();
        let mut second = self.n as f64;
        let mut first = 0.0;
        for i in 0..self.n {
            first += u[i].dot(&self.mean[i]);
            for j in i + 1..self.n {
                second += 2.0 * u[i].dot(&(self.blocks[i * self.n + j] * u[j]));
            }
        }
        0.25 * second - 0.25 * first * first
    }

    /// Variance as a function of one angle with the others held fixed.
    fn coordinate(&self, angles: &[f64], q: usize) -> impl Fn(f64) -> f64 {
        let mut field = Vector2::zeros();
        let mut offset = 0.0;
        let mut rest = self.n as f64;
        for (j, &aj) in angles.iter().enumerate() {
            if j == q {
                continue;
            }
            let uj = unit(aj);
            field += self.blocks[q * self.n + j] * uj;
            offset += uj.dot(&self.mean[j]);
            for (k, &ak) in angles.iter().enumerate().skip(j + 1) {
                if k != q {
                    rest += 2.0 * uj.dot(&(self.blocks[j * self.n + k] * unit(ak)));
                }
            }
        }
        let mean_q = self.mean[q];
        move |theta| {
            let u = unit(theta);
            let first = offset + u.dot(&mean_q);
            0.25 * (rest + 2.0 * u.dot(&field)) - 0.25 * first * first
        }
    }

    fn descend(&self, mut angles: Vec<f64>) -> f64 {
        let mut current = self.variance(&angles);
        for _ in 0..500 {
            let before = current;
            for q in 0..self.n {
                let f = self.coordinate(&angles, q);
                let (theta, value) = minimize_periodic(&f, self.resolution);
                if value < current {
                    angles[q] = theta;
                    current = value;
                }
            }
            if before - current <= 1e-15 * before.abs().max(1.0) {
                break;
            }
        }
        self.variance(&angles).min(current)
    }
}

/// Global minimum of a π-periodic-or-2π-periodic smooth function on [0, 2π).
fn minimize_periodic(f: &impl Fn(f64) -> f64, resolution: usize) -> (f64, f64) {
    let step = core::f64::consts::TAU / resolution as f64;
    let mut best = (0.0, f(0.0));
    for k in 1..resolution {
        let theta = k as f64 * step;
        let v = f(theta);
        if v < best.1 {
            best = (theta, v);
        }
    }
    golden_section(f, best.0 - step, best.0 + step)
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
