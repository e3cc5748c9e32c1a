//! Small dense helpers shared across modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Row-major construction of a square complex matrix.
pub fn mat(n: usize, rows: &[C64]) -> CMat {
    assert_eq!(rows.len(), n * n, "expected {} entries", n * n);
    CMat::from_row_slice(n, n, rows)
}

pub fn real_mat(n: usize, rows: &[f64]) -> CMat {
    let v: Vec<C64> = rows.iter().map(|&x| c(x, 0.0)).collect();
    mat(n, &v)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_residual(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

/// Eigen-decomposition of a Hermitian matrix with ascending eigenvalues.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    (values, vectors)
}

pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let herm = (m + m.adjoint()).scale(0.5);
    let mut values: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Pauli matrices in the order (1, x, y, z).
pub fn paulis() -> [CMat; 4] {
    [identity(2), real_mat(2, &[0.0, 1.0, 1.0, 0.0]), mat(2, &[ZERO, -I, I, ZERO]), real_mat(2, &[1.0, 0.0, 0.0, -1.0])]
}

pub fn sigma_plus() -> CMat {
    real_mat(2, &[0.0, 1.0, 0.0, 0.0])
}

pub fn sigma_minus() -> CMat {
    real_mat(2, &[0.0, 0.0, 1.0, 0.0])
}

/// Coefficients of a 2x2 matrix on (1, x, y, z).
pub fn pauli_decompose(m: &CMat) -> [C64; 4] {
    let p = paulis();
    let mut out = [ZERO; 4];
    for (k, s) in p.iter().enumerate() {
        out[k] = (s * m).trace() * 0.5;
    }
    out
}

pub fn pauli_compose(coeffs: &[C64; 4]) -> CMat {
    let p = paulis();
    let mut m = CMat::zeros(2, 2);
    for (k, s) in p.iter().enumerate() {
        m += s * coeffs[k];
    }
    m
}

/// Principal inverse square root of a Hermitian positive-definite matrix.
pub fn inv_sqrt_psd(m: &CMat) -> CMat {
    let (w, v) = eigh(m);
    let d = CMat::from_diagonal(&CVec::from_iterator(w.len(), w.iter().map(|&x| c(1.0 / x.sqrt(), 0.0))));
    &v * d * v.adjoint()
}

/// Least-squares slope and intercept of y against x, plus the RMS residual.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum::<f64>() / n).sqrt();
    (slope, intercept, rms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_roundtrip() {
        let coeffs = [c(0.3, 0.0), c(-1.0, 0.5), c(0.0, 2.0), c(1.5, -0.25)];
        let back = pauli_decompose(&pauli_compose(&coeffs));
        for k in 0..4 {
            assert!((back[k] - coeffs[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn eigh_sorted_and_orthonormal() {
        let m = mat(3, &[c(2.0, 0.0), c(0.0, 1.0), ZERO, c(0.0, -1.0), c(-1.0, 0.0), c(0.5, 0.0), ZERO, c(0.5, 0.0), c(0.0, 0.0)]);
        let (w, v) = eigh(&m);
        assert!(w.windows(2).all(|p| p[0] <= p[1]));
        assert!(max_abs(&(v.adjoint() * &v - identity(3))) < 1e-12);
        let d = CMat::from_diagonal(&CVec::from_iterator(3, w.iter().map(|&x| c(x, 0.0))));
        assert!(max_abs(&(&v * d * v.adjoint() - &m)) < 1e-12);
    }

    #[test]
    fn fit_recovers_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| -1.5 * v + 0.25).collect();
        let (s, b, r) = linear_fit(&x, &y);
        assert!((s + 1.5).abs() < 1e-14 && (b - 0.25).abs() < 1e-14 && r < 1e-14);
    }
}
