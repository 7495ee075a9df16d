//! Seeded samplers for property suites: Haar unitaries, random pure, mixed and
//! symmetric states.

use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2, Matrix3};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::C64;
use crate::operators::LocalUnitary;
use crate::states::{embed_symmetric, DensityMatrix, PureState, SymmetricState};

pub use crate::states::{dirichlet_uniform, haar_spinor, random_separable_state_with};

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random U(2) element: uniform unit quaternion times a uniform phase.
pub fn haar_qubit_unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<C64> {
    let q: [f64; 4] = core::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = C64::new(q[0], q[1]) / norm;
    let b = C64::new(q[2], q[3]) / norm;
    let phase = C64::from_polar(1.0, rng.random_range(0.0..core::f64::consts::TAU));
    Matrix2::new(a, -b.conj(), b, a.conj()) * phase
}

pub fn random_local_unitary<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> LocalUnitary {
    let per_qubit = (0..num_qubits).map(|_| haar_qubit_unitary(rng)).collect();
    LocalUnitary::new(per_qubit).expect("Haar sample is unitary")
}

/// Haar-random pure state on `num_qubits` qubits.
pub fn haar_pure_state<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<PureState> {
    let amps = (0..1usize << num_qubits).map(|_| gaussian_complex(rng)).collect();
    PureState::normalized(num_qubits, amps)
}

/// Unitarily invariant random state of the symmetric subspace.
pub fn random_symmetric_state<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<SymmetricState> {
    let amps = (0..=num_qubits).map(|_| gaussian_complex(rng)).collect();
    SymmetricState::normalized(num_qubits, amps)
}

fn mixture_of(num_qubits: usize, pure: Vec<PureState>, weights: &[f64]) -> Result<DensityMatrix> {
    let dim = 1usize << num_qubits;
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for (psi, &w) in pure.iter().zip(weights) {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        rho += (&v * v.adjoint()) * C64::new(w, 0.0);
    }
    let herm = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(num_qubits, herm)
}

/// Mixture of `rank` Haar-random pure states with Dirichlet-uniform weights.
pub fn random_mixed_state<R: Rng + ?Sized>(num_qubits: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let weights = dirichlet_uniform(rng, rank.max(1));
    let pure = (0..weights.len()).map(|_| haar_pure_state(num_qubits, rng)).collect::<Result<Vec<_>>>()?;
    mixture_of(num_qubits, pure, &weights)
}

/// Mixture of `terms` random symmetric pure states, embedded in the full space.
pub fn random_symmetric_mixed_state<R: Rng + ?Sized>(
    num_qubits: usize,
    terms: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let weights = dirichlet_uniform(rng, terms.max(1));
    let pure = (0..weights.len())
        .map(|_| embed_symmetric(&random_symmetric_state(num_qubits, rng)?))
        .collect::<Result<Vec<_>>>()?;
    mixture_of(num_qubits, pure, &weights)
}

/// Symmetric 3×3 matrix with standard normal entries.
pub fn random_symmetric_matrix3<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let m = Matrix3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
    (m + m.transpose()) * 0.5
}
