//! Restarted block Rayleigh-Ritz iteration for the low end of a sparse
//! Hermitian matrix. Residual vectors extend the search space, so between
//! restarts this spans a block Krylov space; restarts keep the current
//! Ritz vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, CMat, C64, ZERO};
use crate::sparse::CsrMatrix;

/// Residual bound `|H v - E v|` for accepted pairs.
pub const RESIDUAL_TOL: f64 = 1e-10;
const MAX_MATVECS: usize = 200_000;
const SEED: u64 = 0x1515_f0e6;

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [C64], alpha: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn combine(basis: &[Vec<C64>], coeffs: impl Iterator<Item = C64>, n: usize) -> Vec<C64> {
    let mut out = vec![ZERO; n];
    for (v, a) in basis.iter().zip(coeffs) {
        axpy(&mut out, a, v);
    }
    out
}

/// Lowest `k` eigenpairs, ascending.
pub fn lowest_pairs(a: &CsrMatrix, k: usize) -> Result<(Vec<f64>, Vec<Vec<C64>>)> {
    let n = a.dim();
    let block = (k + 2).min(n);
    let max_basis = (6 * block).max(48).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut images: Vec<Vec<C64>> = Vec::new();
    let mut candidates: Vec<Vec<C64>> = (0..block).map(|_| (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).collect();
    let mut matvecs = 0;
    let mut worst = f64::INFINITY;
    loop {
        for mut x in candidates.drain(..) {
            for _ in 0..2 {
                for v in &basis {
                    let ov = dot(v, &x);
                    axpy(&mut x, -ov, v);
                }
            }
            let nx = norm(&x);
            if nx < 1e-10 {
                continue;
            }
            for z in x.iter_mut() {
                *z /= nx;
            }
            let mut ax = vec![ZERO; n];
            a.matvec(&x, &mut ax);
            matvecs += 1;
            basis.push(x);
            images.push(ax);
        }
        let m = basis.len();
        if m < k {
            // The search space collapsed; reseed with fresh random directions.
            candidates = (0..block).map(|_| (0..n).map(|_| c(rng.gen_range(-1.0..1.0), 0.0)).collect()).collect();
            if matvecs > MAX_MATVECS {
                return Err(Error::NoConvergence { iterations: matvecs, residual: worst });
            }
            continue;
        }
        let mut h = CMat::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = dot(&basis[i], &images[j]);
                h[(i, j)] = v;
                h[(j, i)] = v.conj();
            }
        }
        let (theta, y) = eigh(&h);
        let keep = block.min(m);
        let mut ritz = Vec::with_capacity(keep);
        let mut ritz_images = Vec::with_capacity(keep);
        let mut residuals = Vec::with_capacity(keep);
        worst = 0.0;
        for (i, &th) in theta.iter().enumerate().take(keep) {
            let x = combine(&basis, y.column(i).iter().copied(), n);
            let ax = combine(&images, y.column(i).iter().copied(), n);
            let mut r = ax.clone();
            axpy(&mut r, c(-th, 0.0), &x);
            let rn = norm(&r);
            if i < k {
                worst = worst.max(rn);
            }
            ritz.push(x);
            ritz_images.push(ax);
            residuals.push((r, rn));
        }
        if worst <= RESIDUAL_TOL {
            return Ok((theta[..k].to_vec(), ritz.into_iter().take(k).collect()));
        }
        if matvecs > MAX_MATVECS {
            return Err(Error::NoConvergence { iterations: matvecs, residual: worst });
        }
        candidates = residuals.into_iter().filter(|(_, rn)| *rn > 0.1 * RESIDUAL_TOL).map(|(r, _)| r).collect();
        if m + candidates.len() > max_basis {
            basis = ritz;
            images = ritz_images;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_laplacian() {
        // Open-chain hopping matrix: eigenvalues 2 cos(pi j / (n + 1)).
        let n = 300;
        let mut t = Vec::new();
        for i in 0..n - 1 {
            t.push((i, i + 1, c(1.0, 0.0)));
            t.push((i + 1, i, c(1.0, 0.0)));
        }
        let a = CsrMatrix::from_triplets(n, t);
        let (vals, vecs) = lowest_pairs(&a, 3).unwrap();
        for (j, v) in vals.iter().enumerate() {
            let want = 2.0 * (std::f64::consts::PI * (n - j) as f64 / (n + 1) as f64).cos();
            assert!((v - want).abs() < 1e-9, "{v} vs {want}");
        }
        let mut r = vec![ZERO; n];
        a.matvec(&vecs[0], &mut r);
        axpy(&mut r, c(-vals[0], 0.0), &vecs[0]);
        assert!(norm(&r) <= 1e-9);
    }

    #[test]
    fn degenerate_levels_resolved() {
        let n = 64;
        let mut t: Vec<(usize, usize, C64)> = (0..n).map(|i| (i, i, c((i / 3) as f64, 0.0))).collect();
        t.push((10, 20, c(0.0, 0.1)));
        t.push((20, 10, c(0.0, -0.1)));
        let a = CsrMatrix::from_triplets(n, t);
        let (vals, _) = lowest_pairs(&a, 4).unwrap();
        assert!(vals[..3].iter().all(|v| v.abs() < 1e-10));
        assert!((vals[3] - 1.0).abs() < 1e-10);
    }
}
