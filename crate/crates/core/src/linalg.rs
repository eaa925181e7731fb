//! Small dense complex linear algebra shared by the numerical modules.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense complex matrix.
pub type CMat = DMatrix<Complex64>;

/// Complex number shorthand.
pub type C64 = Complex64;

/// `re + i·im`.
pub fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// The imaginary unit.
pub const I: C64 = Complex64 { re: 0.0, im: 1.0 };

/// `n × n` identity.
pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `n × n` zero matrix.
pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

/// Kronecker product `a ⊗ b` (row index `i_a · rows(b) + i_b`).
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Frobenius norm.
pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest absolute entry.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values in decreasing order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Smallest singular value.
pub fn min_singular_value(a: &CMat) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

/// Inverse of a square matrix, `None` if numerically singular.
pub fn inverse(a: &CMat) -> Option<CMat> {
    a.clone().try_inverse()
}

/// Matrix trace.
pub fn trace(a: &CMat) -> C64 {
    a.trace()
}

/// Sum of a slice in a fixed pairwise-tree order (reproducible across runs and thread counts).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Complex version of [`pairwise_sum`].
pub fn pairwise_sum_c(values: &[C64]) -> C64 {
    match values.len() {
        0 => C64::new(0.0, 0.0),
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum_c(a) + pairwise_sum_c(b)
        }
    }
}

/// Eigenvalues of a Hermitian matrix in increasing order.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let mut e: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|x, y| x.total_cmp(y));
    e
}
