//! Pauli and collective spin expectations, per-qubit frames and local unitaries.

use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2, Matrix3, Vector3};
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{pauli, unitarity_deviation, C64};
use crate::reductions::QubitMoments;
use crate::states::{DensityMatrix, PureState};

pub const UNIT_TOL: f64 = 1e-12;
pub const ORTHOGONAL_TOL: f64 = 1e-12;
pub const HANDEDNESS_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-12;
/// |⟨J⟩| at or below this counts as a vanishing mean spin.
pub const MEAN_SPIN_ZERO_TOL: f64 = 1e-10;
/// |⟨σ_i⟩| at or below this leaves qubit i without a frame.
pub const BLOCH_ZERO_TOL: f64 = 1e-10;

/// Unit vector in R³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction(Vector3<f64>);

impl Direction {
    pub fn new(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_TOL || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(v))
    }

    /// Normalizes `v`; fails on the zero vector.
    pub fn normalize(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(v / norm))
    }

    pub fn x() -> Self {
        Self(Vector3::x())
    }

    pub fn y() -> Self {
        Self(Vector3::y())
    }

    pub fn z() -> Self {
        Self(Vector3::z())
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn into_vector(self) -> Vector3<f64> {
        self.0
    }
}

/// Right-handed orthonormal triad (n⊥, n'⊥, n0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    n_perp: Direction,
    n_perp_prime: Direction,
    n0: Direction,
}

impl Frame {
    pub fn new(n_perp: Direction, n_perp_prime: Direction, n0: Direction) -> Result<Self> {
        let (a, b, c) = (n_perp.0, n_perp_prime.0, n0.0);
        let overlap = a.dot(&b).abs().max(a.dot(&c).abs()).max(b.dot(&c).abs());
        if overlap > ORTHOGONAL_TOL {
            return Err(Error::InvalidParameter { name: "frame", reason: "axes are not orthogonal" });
        }
        if (a.cross(&b) - c).norm() > HANDEDNESS_TOL {
            return Err(Error::InvalidParameter { name: "frame", reason: "axes are not right-handed" });
        }
        Ok(Self { n_perp, n_perp_prime, n0 })
    }

    pub fn n_perp(&self) -> &Direction {
        &self.n_perp
    }

    pub fn n_perp_prime(&self) -> &Direction {
        &self.n_perp_prime
    }

    pub fn n0(&self) -> &Direction {
        &self.n0
    }

    /// 3×2 matrix whose columns are n⊥ and n'⊥.
    pub fn perp_basis(&self) -> nalgebra::Matrix3x2<f64> {
        nalgebra::Matrix3x2::from_columns(&[self.n_perp.0, self.n_perp_prime.0])
    }

    /// cos(angle) n⊥ + sin(angle) n'⊥.
    pub fn perp_direction(&self, angle: f64) -> Vector3<f64> {
        let (s, c) = angle.sin_cos();
        self.n_perp.0 * c + self.n_perp_prime.0 * s
    }
}

/// Deterministic frame around `n0`: n⊥ = normalize(ẑ × n0), or x̂ when n0 ∥ ẑ.
pub fn complete_frame(n0: &Direction) -> Frame {
    let cross = Vector3::z().cross(&n0.0);
    let n_perp = if cross.norm() < 1e-8 { Vector3::x() } else { cross.normalize() };
    // Gram-Schmidt against n0 keeps the degenerate branch exactly orthogonal.
    let n_perp = (n_perp - n0.0 * n0.0.dot(&n_perp)).normalize();
    let n_perp_prime = n0.0.cross(&n_perp);
    Frame { n_perp: Direction(n_perp), n_perp_prime: Direction(n_perp_prime), n0: *n0 }
}

/// U_1 ⊗ U_2 ⊗ … ⊗ U_N.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    per_qubit: Vec<Matrix2<C64>>,
}

impl LocalUnitary {
    pub fn new(per_qubit: Vec<Matrix2<C64>>) -> Result<Self> {
        for u in &per_qubit {
            let deviation = unitarity_deviation(u);
            if deviation > UNITARY_TOL || !deviation.is_finite() {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self { per_qubit })
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self { per_qubit: alloc::vec![Matrix2::identity(); num_qubits] }
    }

    /// `u` on qubit `qubit`, identity elsewhere.
    pub fn single(num_qubits: usize, qubit: usize, u: Matrix2<C64>) -> Result<Self> {
        if qubit >= num_qubits {
            return Err(Error::QubitIndex { index: qubit, num_qubits });
        }
        let mut per_qubit = alloc::vec![Matrix2::identity(); num_qubits];
        per_qubit[qubit] = u;
        Self::new(per_qubit)
    }

    pub fn num_qubits(&self) -> usize {
        self.per_qubit.len()
    }

    pub fn per_qubit(&self) -> &[Matrix2<C64>] {
        &self.per_qubit
    }

    pub fn adjoint(&self) -> Self {
        Self { per_qubit: self.per_qubit.iter().map(|u| u.adjoint()).collect() }
    }

    /// The SO(3) image of every factor.
    pub fn rotations(&self) -> Vec<Matrix3<f64>> {
        self.per_qubit.iter().map(so3_unchecked).collect()
    }
}

/// States that can be acted on qubit-wise.
pub trait LocallyTransformable: Sized {
    fn apply_local(&self, u: &LocalUnitary) -> Result<Self>;
}

fn check_length(u: &LocalUnitary, num_qubits: usize) -> Result<()> {
    if u.num_qubits() != num_qubits {
        return Err(Error::DimensionMismatch { expected: num_qubits, found: u.num_qubits() });
    }
    Ok(())
}

// Applies a 2×2 gate on `qubit` to a full amplitude vector.
fn gate_on_vector(v: &mut [C64], num_qubits: usize, qubit: usize, u: &Matrix2<C64>) {
    let stride = 1usize << (num_qubits - 1 - qubit);
    for base in (0..v.len()).step_by(2 * stride) {
        for i in base..base + stride {
            let (a, b) = (v[i], v[i + stride]);
            v[i] = u[(0, 0)] * a + u[(0, 1)] * b;
            v[i + stride] = u[(1, 0)] * a + u[(1, 1)] * b;
        }
    }
}

impl LocallyTransformable for PureState {
    fn apply_local(&self, u: &LocalUnitary) -> Result<Self> {
        let n = self.num_qubits();
        check_length(u, n)?;
        let mut amps = self.amplitudes().to_vec();
        for (q, gate) in u.per_qubit.iter().enumerate() {
            gate_on_vector(&mut amps, n, q, gate);
        }
        Ok(PureState::from_trusted(n, amps))
    }
}

impl LocallyTransformable for DensityMatrix {
    fn apply_local(&self, u: &LocalUnitary) -> Result<Self> {
        let n = self.num_qubits();
        check_length(u, n)?;
        let dim = 1usize << n;
        let mut m: DMatrix<C64> = self.matrix().clone();
        // U ρ: act on every column
        for mut col in m.column_iter_mut() {
            let slice = col.as_mut_slice();
            for (q, gate) in u.per_qubit.iter().enumerate() {
                gate_on_vector(slice, n, q, gate);
            }
        }
        // (U ρ) U†: rows transform with conj(U)
        let conj: Vec<Matrix2<C64>> = u.per_qubit.iter().map(|g| g.map(|z| z.conj())).collect();
        let mut row = alloc::vec![C64::new(0.0, 0.0); dim];
        for r in 0..dim {
            for (c, slot) in row.iter_mut().enumerate() {
                *slot = m[(r, c)];
            }
            for (q, gate) in conj.iter().enumerate() {
                gate_on_vector(&mut row, n, q, gate);
            }
            for (c, value) in row.iter().enumerate() {
                m[(r, c)] = *value;
            }
        }
        Ok(DensityMatrix::from_trusted(n, m))
    }
}

pub fn apply_local_unitaries<S: LocallyTransformable>(state: &S, u: &LocalUnitary) -> Result<S> {
    state.apply_local(u)
}

/// O_ab = ½ Tr(σ_a u σ_b u†).
pub fn su2_to_so3(u: &Matrix2<C64>) -> Result<Matrix3<f64>> {
    let deviation = unitarity_deviation(u);
    if deviation > UNITARY_TOL || !deviation.is_finite() {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(so3_unchecked(u))
}

fn so3_unchecked(u: &Matrix2<C64>) -> Matrix3<f64> {
    let sigma = pauli();
    let ud = u.adjoint();
    Matrix3::from_fn(|a, b| 0.5 * (sigma[a] * u * sigma[b] * ud).trace().re)
}

/// (⟨σx⟩, ⟨σy⟩, ⟨σz⟩) of one qubit.
pub fn bloch_expectations<S: QubitMoments + ?Sized>(state: &S, qubit: usize) -> Result<Vector3<f64>> {
    state.bloch_vector(qubit)
}

/// ⟨J⟩ with J = ½ Σ σ_i.
pub fn mean_spin<S: QubitMoments + ?Sized>(state: &S) -> Result<Vector3<f64>> {
    let mut total = Vector3::zeros();
    for q in 0..state.num_qubits() {
        total += state.bloch_vector(q)?;
    }
    Ok(total * 0.5)
}

/// ⟨J⟩ / |⟨J⟩|.
pub fn mean_spin_direction<S: QubitMoments + ?Sized>(state: &S) -> Result<Direction> {
    let j = mean_spin(state)?;
    if j.norm() <= MEAN_SPIN_ZERO_TOL {
        return Err(Error::MeanSpinZero);
    }
    Direction::normalize(j)
}

/// First and second moments of (𝒥⊥, 𝒥'⊥, 𝒥0) for per-qubit frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveMoment {
    /// ⟨𝒥0⟩ = ½ Σ ⟨σ_i · n_i0⟩.
    pub mean_j0: f64,
    /// (⟨𝒥⊥⟩, ⟨𝒥'⊥⟩).
    pub mean_perp: [f64; 2],
    /// Covariance of (𝒥⊥, 𝒥'⊥), symmetrized cross term included.
    pub var_perp: Matrix2<f64>,
}

pub fn collective_moment<S: QubitMoments + ?Sized>(state: &S, frames: &[Frame]) -> Result<CollectiveMoment> {
    let n = state.num_qubits();
    if frames.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: frames.len() });
    }
    let bases: Vec<_> = frames.iter().map(Frame::perp_basis).collect();
    let mut mean_j0 = 0.0;
    let mut mean = nalgebra::Vector2::zeros();
    for (q, frame) in frames.iter().enumerate() {
        let s = state.bloch_vector(q)?;
        mean_j0 += 0.5 * s.dot(frame.n0.as_vector());
        mean += bases[q].transpose() * s * 0.5;
    }
    // ⟨A_a A_b⟩_sym = ¼ [ Σ_i P_iᵀP_i + Σ_{i≠j} P_iᵀ T_ij P_j ]; P_iᵀP_i = 1 for orthonormal frames
    let mut second = Matrix2::identity() * n as f64;
    for i in 0..n {
        for j in i + 1..n {
            let t = state.pair_correlation(i, j)?;
            let block = bases[i].transpose() * t * bases[j];
            second += block + block.transpose();
        }
    }
    second *= 0.25;
    let var_perp = second - mean * mean.transpose();
    Ok(CollectiveMoment { mean_j0, mean_perp: [mean[0], mean[1]], var_perp })
}
