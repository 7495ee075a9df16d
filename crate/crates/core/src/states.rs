//! Multiqubit state representations and constructors.
//!
//! Computational basis ordering puts qubit 0 in the most significant bit, and
//! σz|0⟩ = +|0⟩. Dicke amplitudes are indexed by the number of qubits in |0⟩,
//! so index `k` carries J_z = k − N/2 and index 0 is |1⟩^⊗N.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2, Matrix3, Vector3};
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{binomial_row, ln_binomial_row, max_abs_deviation, vec_norm, C64, ONE, ZERO};

/// Largest N stored as a full 2^N amplitude vector.
pub const FULL_VECTOR_LIMIT: usize = 20;
/// Largest N stored as a 2^N × 2^N density matrix.
pub const DENSITY_LIMIT: usize = 10;
/// Largest N stored in the Dicke basis.
pub const SYMMETRIC_LIMIT: usize = 2000;

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const EIGEN_TOL: f64 = 1e-10;
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

fn check_qubits(num_qubits: usize, limit: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::TooFewQubits { required: 1, found: 0 });
    }
    if num_qubits > limit {
        return Err(Error::Capacity { num_qubits, limit });
    }
    Ok(())
}

fn check_norm(amplitudes: &[C64]) -> Result<()> {
    let norm = vec_norm(amplitudes);
    if (norm - 1.0).abs() > NORM_TOL || !norm.is_finite() {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// A normalized pure state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(num_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_qubits(num_qubits, FULL_VECTOR_LIMIT)?;
        let expected = 1usize << num_qubits;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: amplitudes.len() });
        }
        check_norm(&amplitudes)?;
        Ok(Self { num_qubits, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm before validating.
    pub fn normalized(num_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(num_qubits, amplitudes)
    }

    pub(crate) fn from_trusted(num_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self { num_qubits, amplitudes }
    }

    /// Computational basis state |index⟩.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(num_qubits, FULL_VECTOR_LIMIT)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index + 1 });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// True when the states agree up to a global phase.
    pub fn approx_eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        if self.num_qubits != other.num_qubits {
            return false;
        }
        let overlap = self.inner(other);
        if overlap.norm() < 1e-300 {
            return false;
        }
        let phase = overlap / overlap.norm();
        self.amplitudes.iter().zip(&other.amplitudes).all(|(a, b)| (a * phase - b).norm() <= tol)
    }

    /// |ψ⟩⟨ψ|, limited to the density-matrix capacity.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        check_qubits(self.num_qubits, DENSITY_LIMIT)?;
        let v = nalgebra::DVector::from_column_slice(&self.amplitudes);
        Ok(DensityMatrix::from_trusted(self.num_qubits, &v * v.adjoint()))
    }
}

/// A density matrix of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(num_qubits: usize, matrix: DMatrix<C64>) -> Result<Self> {
        check_qubits(num_qubits, DENSITY_LIMIT)?;
        let dim = 1usize << num_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows().max(matrix.ncols()) });
        }
        let state = Self { num_qubits, matrix };
        state.validate()?;
        Ok(state)
    }

    pub(crate) fn from_trusted(num_qubits: usize, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), 1 << num_qubits);
        Self { num_qubits, matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let deviation = max_abs_deviation(&self.matrix, &self.matrix.adjoint());
        if deviation > HERMITIAN_TOL || !deviation.is_finite() {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let min = self.min_eigenvalue();
        if min < -EIGEN_TOL {
            return Err(Error::NegativeEigenvalue { value: min });
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

impl TryFrom<&PureState> for DensityMatrix {
    type Error = Error;

    fn try_from(value: &PureState) -> Result<Self> {
        value.to_density()
    }
}

/// Pure state in the (N+1)-dimensional exchange-symmetric subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
    moments: CollectiveMoments,
}

/// ⟨J⟩ and the symmetrized second moments ½⟨{J_a, J_b}⟩ of a symmetric state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveMoments {
    pub mean: Vector3<f64>,
    pub second: Matrix3<f64>,
}

impl SymmetricState {
    pub fn new(num_qubits: usize, dicke_amplitudes: Vec<C64>) -> Result<Self> {
        check_qubits(num_qubits, SYMMETRIC_LIMIT)?;
        if dicke_amplitudes.len() != num_qubits + 1 {
            return Err(Error::DimensionMismatch { expected: num_qubits + 1, found: dicke_amplitudes.len() });
        }
        check_norm(&dicke_amplitudes)?;
        Ok(Self::from_trusted(num_qubits, dicke_amplitudes))
    }

    pub fn normalized(num_qubits: usize, mut dicke_amplitudes: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&dicke_amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        dicke_amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(num_qubits, dicke_amplitudes)
    }

    /// Dicke state with `k` qubits in |0⟩.
    pub fn dicke(num_qubits: usize, k: usize) -> Result<Self> {
        check_qubits(num_qubits, SYMMETRIC_LIMIT)?;
        if k > num_qubits {
            return Err(Error::InvalidParameter { name: "k", reason: "must not exceed N" });
        }
        let mut amplitudes = vec![ZERO; num_qubits + 1];
        amplitudes[k] = ONE;
        Ok(Self::from_trusted(num_qubits, amplitudes))
    }

    fn from_trusted(num_qubits: usize, amplitudes: Vec<C64>) -> Self {
        let moments = dicke_moments(num_qubits, &amplitudes);
        Self { num_qubits, amplitudes, moments }
    }

    /// Collective moments, computed once in the Dicke basis.
    pub fn collective_moments(&self) -> &CollectiveMoments {
        &self.moments
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dicke_amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }
}

// (J_x ψ, J_y ψ, J_z ψ) in the Dicke basis, J_+|k⟩ = sqrt((k+1)(N−k)) |k+1⟩.
fn apply_collective(n: usize, c: &[C64]) -> [Vec<C64>; 3] {
    let j = n as f64 / 2.0;
    let ladder = |k: usize| (((k + 1) * (n - k)) as f64).sqrt();
    let mut plus = vec![ZERO; n + 1];
    let mut minus = vec![ZERO; n + 1];
    for k in 0..n {
        plus[k + 1] += c[k] * ladder(k);
        minus[k] += c[k + 1] * ladder(k);
    }
    let half = C64::new(0.5, 0.0);
    let minus_half_i = C64::new(0.0, -0.5);
    let jx = plus.iter().zip(&minus).map(|(p, m)| (p + m) * half).collect();
    let jy = plus.iter().zip(&minus).map(|(p, m)| (p - m) * minus_half_i).collect();
    let jz = c.iter().enumerate().map(|(k, a)| a * (k as f64 - j)).collect();
    [jx, jy, jz]
}

fn dicke_moments(n: usize, c: &[C64]) -> CollectiveMoments {
    let applied = apply_collective(n, c);
    let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    let mean = Vector3::from_fn(|a, _| dot(c, &applied[a]).re);
    // ½⟨{J_a, J_b}⟩ = Re⟨J_a ψ | J_b ψ⟩
    let second = Matrix3::from_fn(|a, b| dot(&applied[a], &applied[b]).re);
    CollectiveMoments { mean, second: (second + second.transpose()) * 0.5 }
}

/// One product term of a separable mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureTerm {
    weight: f64,
    factors: Vec<Matrix2<C64>>,
}

impl MixtureTerm {
    pub fn new(weight: f64, factors: Vec<Matrix2<C64>>) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidWeight { weight });
        }
        if factors.is_empty() {
            return Err(Error::TooFewQubits { required: 1, found: 0 });
        }
        for f in &factors {
            validate_qubit_density(f)?;
        }
        Ok(Self { weight, factors })
    }

    /// Term whose factors are the projectors onto the given spinors.
    pub fn from_spinors(weight: f64, spinors: &[[C64; 2]]) -> Result<Self> {
        let factors = spinors
            .iter()
            .map(|s| {
                check_norm(s)?;
                Ok(projector(s))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(weight, factors)
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn factors(&self) -> &[Matrix2<C64>] {
        &self.factors
    }
}

fn projector(s: &[C64; 2]) -> Matrix2<C64> {
    Matrix2::new(s[0] * s[0].conj(), s[0] * s[1].conj(), s[1] * s[0].conj(), s[1] * s[1].conj())
}

fn validate_qubit_density(m: &Matrix2<C64>) -> Result<()> {
    let deviation = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = m[(0, 0)].re + m[(1, 1)].re;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceNotOne { trace });
    }
    // eigenvalues of a unit-trace 2×2 Hermitian matrix: (1 ± sqrt(1 − 4 det)) / 2
    let det = m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr();
    let min = 0.5 * (1.0 - (1.0 - 4.0 * det).max(0.0).sqrt());
    if min < -EIGEN_TOL {
        return Err(Error::NegativeEigenvalue { value: min });
    }
    Ok(())
}

/// Coherent spin state |θ, φ⟩ built on |1⟩^⊗N.
pub fn coherent_spin_state(num_qubits: usize, theta: f64, phi: f64) -> Result<SymmetricState> {
    check_qubits(num_qubits, SYMMETRIC_LIMIT)?;
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::InvalidParameter { name: "theta/phi", reason: "must be finite" });
    }
    let n = num_qubits;
    let (s, c) = (0.5 * theta).sin_cos();
    let ln_binom = ln_binomial_row(n);
    let amplitudes = (0..=n)
        .map(|k| {
            let magnitude = power_term(c, n - k) * power_term(s, k) * (0.5 * ln_binom[k]).exp();
            C64::from_polar(magnitude, k as f64 * phi)
        })
        .collect();
    SymmetricState::normalized(n, amplitudes)
}

// base^exp with 0^0 = 1, computed stably for large exponents
fn power_term(base: f64, exp: usize) -> f64 {
    if exp == 0 {
        1.0
    } else if base == 0.0 {
        0.0
    } else {
        let sign = if base < 0.0 && exp % 2 == 1 { -1.0 } else { 1.0 };
        sign * (exp as f64 * base.abs().ln()).exp()
    }
}

/// Tensor product of normalized single-qubit spinors.
pub fn product_state(factors: &[[C64; 2]]) -> Result<PureState> {
    check_qubits(factors.len(), FULL_VECTOR_LIMIT)?;
    for f in factors {
        check_norm(f)?;
    }
    let mut amplitudes = vec![ONE];
    for f in factors {
        amplitudes = amplitudes.iter().flat_map(|a| [a * f[0], a * f[1]]).collect();
    }
    PureState::new(factors.len(), amplitudes)
}

/// x-polarized coherent state twisted by exp(−iμ J_z²).
pub fn one_axis_twisted_state(num_qubits: usize, mu: f64) -> Result<SymmetricState> {
    if num_qubits < 2 {
        return Err(Error::TooFewQubits { required: 2, found: num_qubits });
    }
    if !mu.is_finite() {
        return Err(Error::InvalidParameter { name: "mu", reason: "must be finite" });
    }
    let css = coherent_spin_state(num_qubits, core::f64::consts::FRAC_PI_2, 0.0)?;
    if mu == 0.0 {
        return Ok(css);
    }
    let j = num_qubits as f64 / 2.0;
    let amplitudes = css
        .amplitudes
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let m = k as f64 - j;
            a * C64::from_polar(1.0, -mu * m * m)
        })
        .collect();
    SymmetricState::normalized(num_qubits, amplitudes)
}

/// Spreads each Dicke amplitude uniformly over the basis states with `k` zeros.
pub fn embed_symmetric(state: &SymmetricState) -> Result<PureState> {
    let n = state.num_qubits;
    if n > FULL_VECTOR_LIMIT {
        return Err(Error::Capacity { num_qubits: n, limit: FULL_VECTOR_LIMIT });
    }
    let binom = binomial_row(n);
    let scale: Vec<C64> = state.amplitudes.iter().enumerate().map(|(k, a)| a / binom[k].sqrt()).collect();
    let amplitudes = (0..1usize << n).map(|b| scale[n - b.count_ones() as usize]).collect();
    Ok(PureState::from_trusted(n, amplitudes))
}

/// ρ = Σ_k p_k ⊗_i ρ_i^(k).
pub fn mix(terms: &[MixtureTerm]) -> Result<DensityMatrix> {
    let first = terms.first().ok_or(Error::WeightSum { sum: 0.0 })?;
    let n = first.factors.len();
    check_qubits(n, DENSITY_LIMIT)?;
    let sum: f64 = terms.iter().map(|t| t.weight).sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::WeightSum { sum });
    }
    let dim = 1usize << n;
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for term in terms {
        if term.factors.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: term.factors.len() });
        }
        if term.weight == 0.0 {
            continue;
        }
        let mut product = DMatrix::<C64>::from_element(1, 1, C64::new(term.weight, 0.0));
        for f in &term.factors {
            let f = DMatrix::from_iterator(2, 2, f.iter().copied());
            product = product.kronecker(&f);
        }
        rho += product;
    }
    DensityMatrix::new(n, rho)
}

/// Haar-random single-qubit spinor (uniform on the Bloch sphere).
pub fn haar_spinor<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    let mut v = [ZERO; 2];
    for z in &mut v {
        *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    let norm = vec_norm(&v);
    [v[0] / norm, v[1] / norm]
}

/// Uniform point on the probability simplex with `len` entries.
pub fn dirichlet_uniform<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Mixture of `num_terms` products of Haar-random pure qubit states with
/// Dirichlet-uniform weights, reproducible from `seed`.
pub fn random_separable_state(num_qubits: usize, num_terms: usize, seed: u64) -> Result<DensityMatrix> {
    mix(&random_separable_terms(num_qubits, num_terms, seed)?)
}

/// The terms behind [`random_separable_state`] for the same arguments.
pub fn random_separable_terms(num_qubits: usize, num_terms: usize, seed: u64) -> Result<Vec<MixtureTerm>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_separable_terms_with(num_qubits, num_terms, &mut rng)
}

pub fn random_separable_state_with<R: Rng + ?Sized>(
    num_qubits: usize,
    num_terms: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    mix(&random_separable_terms_with(num_qubits, num_terms, rng)?)
}

pub fn random_separable_terms_with<R: Rng + ?Sized>(
    num_qubits: usize,
    num_terms: usize,
    rng: &mut R,
) -> Result<Vec<MixtureTerm>> {
    if num_qubits < 2 {
        return Err(Error::TooFewQubits { required: 2, found: num_qubits });
    }
    if num_terms == 0 {
        return Err(Error::InvalidParameter { name: "num_terms", reason: "must be positive" });
    }
    let weights = dirichlet_uniform(rng, num_terms);
    weights
        .into_iter()
        .map(|w| {
            let spinors: Vec<[C64; 2]> = (0..num_qubits).map(|_| haar_spinor(rng)).collect();
            MixtureTerm::from_spinors(w.min(1.0), &spinors)
        })
        .collect()
}
