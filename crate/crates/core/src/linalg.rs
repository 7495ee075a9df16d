//! Small dense helpers shared by the state and operator modules.

use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2, Matrix3, Vector3};
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Pauli matrices (σx, σy, σz) with σz|0⟩ = +|0⟩.
pub fn pauli() -> [Matrix2<C64>; 3] {
    [Matrix2::new(ZERO, ONE, ONE, ZERO), Matrix2::new(ZERO, -I, I, ZERO), Matrix2::new(ONE, ZERO, ZERO, -ONE)]
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

pub fn max_abs_deviation(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest |(U†U − 1)_ij|.
pub fn unitarity_deviation(u: &Matrix2<C64>) -> f64 {
    let prod = u.adjoint() * u;
    let id = Matrix2::<C64>::identity();
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Rotation matrix about `axis` (unit) by `angle`.
pub fn axis_angle(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    let k = axis.cross_matrix();
    Matrix3::identity() + k * s + k * k * (1.0 - c)
}

/// Rotation about ẑ by `angle`.
pub fn rotation_z(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Smallest-angle rotation taking the unit vector `v` onto +ẑ.
///
/// Antiparallel input is turned over by a half turn about x̂.
pub fn rotation_to_z(v: &Vector3<f64>) -> Matrix3<f64> {
    let z = Vector3::z();
    let c = v.dot(&z);
    if c <= -1.0 + 1e-12 {
        return Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0);
    }
    let k = v.cross(&z).cross_matrix();
    Matrix3::identity() + k + k * k / (1.0 + c)
}

/// Eigenvalues (larger, smaller) of the symmetric 2×2 matrix [[a, b], [b, d]].
pub fn sym2_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let radius = 0.5 * ((a - d) * (a - d) + 4.0 * b * b).sqrt();
    (mean + radius, mean - radius)
}

/// Binomial coefficients C(n, k) for k = 0..=n as f64 (exact up to n ≈ 50, rounded beyond).
pub fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = 1.0f64;
    row.push(c);
    for k in 1..=n {
        c = c * (n + 1 - k) as f64 / k as f64;
        row.push(c);
    }
    row
}

/// ln C(n, k) for k = 0..=n.
pub fn ln_binomial_row(n: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    row.push(acc);
    for k in 1..=n {
        acc += ((n + 1 - k) as f64).ln() - (k as f64).ln();
        row.push(acc);
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_to_z_maps_onto_z() {
        for v in [
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 0.0, 1.0),
            Vector3::new(0.0, 0.0, -1.0),
            Vector3::new(0.3, -0.4, -0.5).normalize(),
            Vector3::new(1e-14, 0.0, -1.0).normalize(),
        ] {
            let r = rotation_to_z(&v);
            assert!((r * v - Vector3::z()).norm() < 1e-12, "{v:?}");
            assert!((r.transpose() * r - Matrix3::identity()).norm() < 1e-12);
            assert!((r.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_row(4), alloc::vec![1.0, 4.0, 6.0, 4.0, 1.0]);
        let ln = ln_binomial_row(10);
        assert!((ln[5] - 252f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sym2() {
        let (p, m) = sym2_eigenvalues(2.0, 0.0, -1.0);
        assert_eq!((p, m), (2.0, -1.0));
        let (p, m) = sym2_eigenvalues(1.0, 1.0, 1.0);
        assert!((p - 2.0).abs() < 1e-15 && m.abs() < 1e-15);
    }
}
