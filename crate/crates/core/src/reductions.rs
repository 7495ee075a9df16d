//! Reduced density matrices, Bloch vectors and pair correlation matrices.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::linalg::{pauli, C64, ZERO};
use crate::states::{DensityMatrix, PureState, SymmetricState};

/// Single-qubit and pair expectations of a multiqubit state.
///
/// Everything the squeezing and entanglement modules compute is a function of
/// the Bloch vectors ⟨σ_i⟩ and the pair correlations T_ij = ⟨σ_iα σ_jβ⟩.
pub trait QubitMoments {
    fn num_qubits(&self) -> usize;

    fn bloch_vector(&self, qubit: usize) -> Result<Vector3<f64>>;

    /// T_ab = ⟨σ_{i,a} σ_{j,b}⟩ for i ≠ j.
    fn pair_correlation(&self, i: usize, j: usize) -> Result<Matrix3<f64>>;

    /// True when the representation guarantees exchange symmetry.
    fn is_exchange_symmetric(&self) -> bool {
        false
    }
}

impl<T: QubitMoments + ?Sized> QubitMoments for &T {
    fn num_qubits(&self) -> usize {
        (**self).num_qubits()
    }

    fn bloch_vector(&self, qubit: usize) -> Result<Vector3<f64>> {
        (**self).bloch_vector(qubit)
    }

    fn pair_correlation(&self, i: usize, j: usize) -> Result<Matrix3<f64>> {
        (**self).pair_correlation(i, j)
    }

    fn is_exchange_symmetric(&self) -> bool {
        (**self).is_exchange_symmetric()
    }
}

fn check_index(index: usize, num_qubits: usize) -> Result<()> {
    if index >= num_qubits {
        return Err(Error::QubitIndex { index, num_qubits });
    }
    Ok(())
}

fn check_pair(i: usize, j: usize, num_qubits: usize) -> Result<()> {
    check_index(i, num_qubits)?;
    check_index(j, num_qubits)?;
    if i == j {
        return Err(Error::SameQubit { index: i });
    }
    Ok(())
}

fn check_subset(subset: &[usize], num_qubits: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset);
    }
    for (k, &q) in subset.iter().enumerate() {
        check_index(q, num_qubits)?;
        if subset[..k].contains(&q) {
            return Err(Error::InvalidSubset);
        }
    }
    Ok(())
}

// Bit masks placing subset bits (in subset order, first = most significant)
// and complement bits into a full basis index.
fn index_maps(subset: &[usize], num_qubits: usize) -> (Vec<usize>, Vec<usize>) {
    let bit = |q: usize| 1usize << (num_qubits - 1 - q);
    let complement: Vec<usize> = (0..num_qubits).filter(|q| !subset.contains(q)).collect();
    let spread = |qubits: &[usize]| -> Vec<usize> {
        let m = qubits.len();
        (0..1usize << m)
            .map(|s| {
                qubits
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| s >> (m - 1 - k) & 1 == 1)
                    .fold(0, |acc, (_, &q)| acc | bit(q))
            })
            .collect()
    };
    (spread(subset), spread(&complement))
}

/// States that admit a partial trace.
pub trait Reducible {
    fn reduce(&self, subset: &[usize]) -> Result<DensityMatrix>;
}

impl Reducible for PureState {
    fn reduce(&self, subset: &[usize]) -> Result<DensityMatrix> {
        let n = self.num_qubits();
        check_subset(subset, n)?;
        let (sub, comp) = index_maps(subset, n);
        let amps = self.amplitudes();
        let dim = sub.len();
        let mut rho = DMatrix::<C64>::zeros(dim, dim);
        let mut v = vec![ZERO; dim];
        for &c in &comp {
            for (s, slot) in v.iter_mut().enumerate() {
                *slot = amps[sub[s] | c];
            }
            for col in 0..dim {
                let b = v[col].conj();
                if b == ZERO {
                    continue;
                }
                for row in 0..dim {
                    rho[(row, col)] += v[row] * b;
                }
            }
        }
        Ok(DensityMatrix::from_trusted(subset.len(), rho))
    }
}

impl Reducible for DensityMatrix {
    fn reduce(&self, subset: &[usize]) -> Result<DensityMatrix> {
        let n = self.num_qubits();
        check_subset(subset, n)?;
        let (sub, comp) = index_maps(subset, n);
        let m = self.matrix();
        let dim = sub.len();
        let rho = DMatrix::from_fn(dim, dim, |r, c| comp.iter().map(|&k| m[(sub[r] | k, sub[c] | k)]).sum());
        Ok(DensityMatrix::from_trusted(subset.len(), rho))
    }
}

/// Partial trace over every qubit outside `subset`; the output keeps subset order.
pub fn reduce<S: Reducible + ?Sized>(state: &S, subset: &[usize]) -> Result<DensityMatrix> {
    state.reduce(subset)
}

fn bloch_of(rho: &DensityMatrix) -> Vector3<f64> {
    let m = rho.matrix();
    Vector3::new(2.0 * m[(1, 0)].re, 2.0 * m[(1, 0)].im, m[(0, 0)].re - m[(1, 1)].re)
}

fn correlation_of(rho: &DensityMatrix) -> Matrix3<f64> {
    let sigma = pauli();
    let m = rho.matrix();
    Matrix3::from_fn(|a, b| {
        // Tr(ρ (σ_a ⊗ σ_b))
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..4 {
            for c in 0..4 {
                let op = sigma[a][(c >> 1, r >> 1)] * sigma[b][(c & 1, r & 1)];
                acc += m[(r, c)] * op;
            }
        }
        acc.re
    })
}

macro_rules! moments_via_reduction {
    ($ty:ty) => {
        impl QubitMoments for $ty {
            fn num_qubits(&self) -> usize {
                <$ty>::num_qubits(self)
            }

            fn bloch_vector(&self, qubit: usize) -> Result<Vector3<f64>> {
                check_index(qubit, <$ty>::num_qubits(self))?;
                Ok(bloch_of(&self.reduce(&[qubit])?))
            }

            fn pair_correlation(&self, i: usize, j: usize) -> Result<Matrix3<f64>> {
                check_pair(i, j, <$ty>::num_qubits(self))?;
                Ok(correlation_of(&self.reduce(&[i, j])?))
            }
        }
    };
}

moments_via_reduction!(PureState);
moments_via_reduction!(DensityMatrix);

impl QubitMoments for SymmetricState {
    fn num_qubits(&self) -> usize {
        SymmetricState::num_qubits(self)
    }

    fn bloch_vector(&self, qubit: usize) -> Result<Vector3<f64>> {
        let n = SymmetricState::num_qubits(self);
        check_index(qubit, n)?;
        Ok(self.collective_moments().mean * (2.0 / n as f64))
    }

    fn pair_correlation(&self, i: usize, j: usize) -> Result<Matrix3<f64>> {
        check_pair(i, j, SymmetricState::num_qubits(self))?;
        Ok(symmetric_pair_matrix(self))
    }

    fn is_exchange_symmetric(&self) -> bool {
        true
    }
}

/// 3×3 matrix of pair correlations ⟨σ_{iα} σ_{jβ}⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix(Matrix3<f64>);

impl CorrelationMatrix {
    pub const ENTRY_TOL: f64 = 1e-10;

    pub fn new(entries: Matrix3<f64>) -> Result<Self> {
        if entries.iter().any(|x| !x.is_finite() || x.abs() > 1.0 + Self::ENTRY_TOL) {
            return Err(Error::InvalidParameter { name: "correlation matrix", reason: "entries must lie in [-1, 1]" });
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Matrix3<f64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }
}

pub fn correlation_matrix<S: QubitMoments + ?Sized>(state: &S, i: usize, j: usize) -> Result<CorrelationMatrix> {
    CorrelationMatrix::new(state.pair_correlation(i, j)?)
}

/// Symmetrized sum of pair correlation matrices, S = (𝚃 + 𝚃ᵀ)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateS(Matrix3<f64>);

impl AggregateS {
    pub fn new(entries: Matrix3<f64>) -> Result<Self> {
        let deviation = (entries - entries.transpose()).abs().max();
        if deviation > 1e-12 * entries.abs().max().max(1.0) {
            return Err(Error::InvalidParameter { name: "S", reason: "must be symmetric" });
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &Matrix3<f64> {
        &self.0
    }
}

/// S = sym(Σ_{i<j} T_ij), pairs visited in lexicographic order.
///
/// The state is taken as given; any common-orientation rotation must already
/// have been applied.
pub fn aggregate_s<S: QubitMoments + ?Sized>(state: &S) -> Result<AggregateS> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { required: 2, found: n });
    }
    let mut total = Matrix3::zeros();
    if state.is_exchange_symmetric() {
        total = state.pair_correlation(0, 1)? * ((n * (n - 1) / 2) as f64);
    } else {
        for i in 0..n {
            for j in i + 1..n {
                total += state.pair_correlation(i, j)?;
            }
        }
    }
    Ok(AggregateS((total + total.transpose()) * 0.5))
}

fn symmetric_pair_matrix(s: &SymmetricState) -> Matrix3<f64> {
    let n = s.num_qubits() as f64;
    let anticommutator = s.collective_moments().second * 2.0;
    (anticommutator * 2.0 - Matrix3::identity() * n) / (n * (n - 1.0))
}

/// Pair correlations of a symmetric state from its collective second moments:
/// T_αβ = (2⟨{J_α, J_β}⟩ − N δ_αβ) / (N(N−1)).
pub fn collective_to_pair_correlations(s: &SymmetricState) -> Result<CorrelationMatrix> {
    let n = s.num_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { required: 2, found: n });
    }
    CorrelationMatrix::new(symmetric_pair_matrix(s))
}

/// Bloch vectors and pair correlations computed once and stored.
///
/// Pure and density-matrix states recompute a partial trace on every query;
/// analyses that touch all pairs several times should go through this table.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    num_qubits: usize,
    bloch: Vec<Vector3<f64>>,
    // lexicographic i < j
    pairs: Vec<Matrix3<f64>>,
    symmetric: bool,
}

impl MomentTable {
    pub fn new<S: QubitMoments + ?Sized>(state: &S) -> Result<Self> {
        let n = state.num_qubits();
        let bloch = (0..n).map(|q| state.bloch_vector(q)).collect::<Result<Vec<_>>>()?;
        let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                pairs.push(state.pair_correlation(i, j)?);
            }
        }
        Ok(Self { num_qubits: n, bloch, pairs, symmetric: state.is_exchange_symmetric() })
    }

    /// Builds a table directly from per-qubit Bloch vectors and pair matrices (i < j order).
    pub fn from_parts(bloch: Vec<Vector3<f64>>, pairs: Vec<Matrix3<f64>>) -> Result<Self> {
        let n = bloch.len();
        let expected = n * n.saturating_sub(1) / 2;
        if pairs.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: pairs.len() });
        }
        Ok(Self { num_qubits: n, bloch, pairs, symmetric: false })
    }

    fn pair_slot(&self, i: usize, j: usize) -> usize {
        let n = self.num_qubits;
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }
}

impl QubitMoments for MomentTable {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn bloch_vector(&self, qubit: usize) -> Result<Vector3<f64>> {
        check_index(qubit, self.num_qubits)?;
        Ok(self.bloch[qubit])
    }

    fn pair_correlation(&self, i: usize, j: usize) -> Result<Matrix3<f64>> {
        check_pair(i, j, self.num_qubits)?;
        if i < j {
            Ok(self.pairs[self.pair_slot(i, j)])
        } else {
            Ok(self.pairs[self.pair_slot(j, i)].transpose())
        }
    }

    fn is_exchange_symmetric(&self) -> bool {
        self.symmetric
    }
}

/// Largest discrepancy between the pair statistics of a state and those of an
/// exchange-symmetric state: Bloch vectors that differ, pair matrices that
/// differ from T_01, or T_01 ≠ T_01ᵀ.
pub fn symmetry_deviation<S: QubitMoments + ?Sized>(state: &S) -> Result<f64> {
    if state.is_exchange_symmetric() {
        return Ok(0.0);
    }
    let n = state.num_qubits();
    let s0 = state.bloch_vector(0)?;
    let mut deviation: f64 = 0.0;
    for q in 1..n {
        deviation = deviation.max((state.bloch_vector(q)? - s0).abs().max());
    }
    if n >= 2 {
        let t01 = state.pair_correlation(0, 1)?;
        deviation = deviation.max((t01 - t01.transpose()).abs().max());
        for i in 0..n {
            for j in i + 1..n {
                deviation = deviation.max((state.pair_correlation(i, j)? - t01).abs().max());
            }
        }
    }
    Ok(deviation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::states::{coherent_spin_state, embed_symmetric, product_state};
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn ghz(n: usize) -> PureState {
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = c(FRAC_1_SQRT_2);
        amps[(1 << n) - 1] = c(FRAC_1_SQRT_2);
        PureState::new(n, amps).unwrap()
    }

    fn close(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) -> bool {
        crate::linalg::max_abs_deviation(a, b) <= tol
    }

    #[test]
    fn reduce_examples() {
        let r3 = 3f64.sqrt() / 2.0;
        let p = product_state(&[[c(r3), c(0.5)], [c(0.6), c(-0.8)]]).unwrap();
        let r = reduce(&p, &[1]).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[c(0.36), c(-0.48), c(-0.48), c(0.64)]);
        assert!(close(r.matrix(), &expected, 1e-15));

        let bell = ghz(2);
        let r = reduce(&bell, &[0]).unwrap();
        assert!(close(r.matrix(), &(DMatrix::identity(2, 2) * c(0.5)), 1e-15));

        let r = reduce(&ghz(3), &[0, 1]).unwrap();
        let mut expected = DMatrix::zeros(4, 4);
        expected[(0, 0)] = c(0.5);
        expected[(3, 3)] = c(0.5);
        assert!(close(r.matrix(), &expected, 1e-15));

        let rho = ghz(3).to_density().unwrap();
        assert!(close(reduce(&rho, &[0, 1]).unwrap().matrix(), &expected, 1e-15));
    }

    #[test]
    fn reduce_preserves_subset_order() {
        let p = PureState::basis(3, 0b011).unwrap();
        let r = reduce(&p, &[2, 0]).unwrap();
        // qubit 2 is |1⟩, qubit 0 is |0⟩ → |10⟩ in subset order
        assert_eq!(r.matrix()[(2, 2)], ONE);
    }

    #[test]
    fn reduce_rejects_bad_subsets() {
        let p = ghz(3);
        assert_eq!(reduce(&p, &[]), Err(Error::InvalidSubset));
        assert_eq!(reduce(&p, &[1, 1]), Err(Error::InvalidSubset));
        assert!(matches!(reduce(&p, &[3]), Err(Error::QubitIndex { .. })));
    }

    #[test]
    fn schmidt_correlation_matrix() {
        let theta = FRAC_PI_8;
        let (s, co) = theta.sin_cos();
        let psi = PureState::new(2, vec![c(co), ZERO, ZERO, c(s)]).unwrap();
        let t = correlation_matrix(&psi, 0, 1).unwrap();
        let s2 = (2.0 * theta).sin();
        let expected = Matrix3::from_diagonal(&Vector3::new(s2, -s2, 1.0));
        assert!((t.entries() - expected).norm() < 1e-15);
        assert!((t.trace() - 1.0).abs() < 1e-15);
        assert!(matches!(correlation_matrix(&psi, 1, 1), Err(Error::SameQubit { .. })));
    }

    #[test]
    fn product_correlation_is_outer_product() {
        let p = product_state(&[[c(0.6), C64::new(0.0, 0.8)], [c(FRAC_1_SQRT_2), C64::new(0.5, -0.5)]]).unwrap();
        let s1 = p.bloch_vector(0).unwrap();
        let s2 = p.bloch_vector(1).unwrap();
        let t = correlation_matrix(&p, 0, 1).unwrap();
        assert!((t.entries() - s1 * s2.transpose()).norm() < 1e-14);
    }

    #[test]
    fn aggregate_examples() {
        let theta = 0.4f64;
        let (s, co) = theta.sin_cos();
        let psi = PureState::new(2, vec![c(co), ZERO, ZERO, c(s)]).unwrap();
        let agg = aggregate_s(&psi).unwrap();
        assert!((agg.entries()[(0, 0)] - (2.0 * theta).sin()).abs() < 1e-15);
        assert!((agg.entries()[(1, 1)] + (2.0 * theta).sin()).abs() < 1e-15);

        let css = embed_symmetric(&coherent_spin_state(4, 0.7, 1.9).unwrap()).unwrap();
        let spin = css.bloch_vector(0).unwrap();
        let agg = aggregate_s(&css).unwrap();
        assert!((agg.entries() - spin * spin.transpose() * 6.0).norm() < 1e-12);
        let t = correlation_matrix(&css, 2, 3).unwrap();
        assert!((agg.entries() - t.entries() * 6.0).norm() < 1e-12);

        assert!(matches!(aggregate_s(&PureState::basis(1, 0).unwrap()), Err(Error::TooFewQubits { .. })));
    }

    #[test]
    fn dicke_path_matches_full_vector() {
        for n in 2..=6 {
            for (theta, phi) in [(0.0, 0.0), (0.9, 0.3), (2.5, 4.0)] {
                let s = coherent_spin_state(n, theta, phi).unwrap();
                let full = embed_symmetric(&s).unwrap();
                let fast = collective_to_pair_correlations(&s).unwrap();
                let slow = correlation_matrix(&full, 0, 1).unwrap();
                assert!((fast.entries() - slow.entries()).norm() < 1e-10);
                assert!((s.bloch_vector(1).unwrap() - full.bloch_vector(1).unwrap()).norm() < 1e-12);
            }
        }
        let w = SymmetricState::dicke(3, 1).unwrap();
        let full = embed_symmetric(&w).unwrap();
        let fast = collective_to_pair_correlations(&w).unwrap();
        assert!((fast.entries() - correlation_matrix(&full, 0, 2).unwrap().entries()).norm() < 1e-10);
    }

    #[test]
    fn moment_table_matches_source() {
        let p = ghz(4);
        let table = MomentTable::new(&p).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(table.pair_correlation(i, j).unwrap(), p.pair_correlation(i, j).unwrap());
                }
            }
        }
        assert!(symmetry_deviation(&table).unwrap() < 1e-15);
        let asym = product_state(&[[ONE, ZERO], [ZERO, ONE]]).unwrap();
        assert!(symmetry_deviation(&asym).unwrap() > 1.0);
    }
}
