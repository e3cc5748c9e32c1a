//! Compressed-row complex matrices over a tensor-product Hilbert space.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64, ZERO};
use crate::qudit::QuditOperator;

/// Square CSR matrix with sorted, duplicate-free column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, row_ptr: vec![0; dim + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, row_ptr: (0..=dim).collect(), col_idx: (0..dim).collect(), values: vec![C64::new(1.0, 0.0); dim] }
    }

    /// Sums duplicate entries and drops exact zeros.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, col, _)| (r, col));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, col, v) in triplets {
            if let (Some(&lr), Some(&lc)) = (rows.last(), col_idx.last()) {
                if lr == r && lc == col {
                    *values.last_mut().unwrap() += v;
                    continue;
                }
            }
            rows.push(r);
            col_idx.push(col);
            values.push(v);
        }
        let mut keep_rows = Vec::with_capacity(rows.len());
        let mut keep_cols = Vec::with_capacity(rows.len());
        let mut keep_vals = Vec::with_capacity(rows.len());
        for ((r, col), v) in rows.into_iter().zip(col_idx).zip(values) {
            if v != ZERO {
                keep_rows.push(r);
                keep_cols.push(col);
                keep_vals.push(v);
            }
        }
        for &r in &keep_rows {
            row_ptr[r + 1] += 1;
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { dim, row_ptr, col_idx: keep_cols, values: keep_vals }
    }

    pub fn from_dense(m: &CMat) -> Self {
        let mut t = Vec::new();
        for r in 0..m.nrows() {
            for col in 0..m.ncols() {
                if m[(r, col)] != ZERO {
                    t.push((r, col, m[(r, col)]));
                }
            }
        }
        Self::from_triplets(m.nrows(), t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, col: usize) -> C64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&col) {
            Ok(k) => self.values[span.start + k],
            Err(_) => ZERO,
        }
    }

    pub fn triplets(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for r in 0..self.dim {
            out.extend(self.row(r).map(|(col, v)| (r, col, v)));
        }
        out
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (r, col, v) in self.triplets() {
            m[(r, col)] = v;
        }
        m
    }

    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        for (r, out) in y.iter_mut().enumerate().take(self.dim) {
            let mut acc = ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *out = acc;
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut t = self.triplets();
        t.extend(other.triplets());
        Ok(Self::from_triplets(self.dim, t))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut t = Vec::new();
        let mut acc: BTreeMap<usize, C64> = BTreeMap::new();
        for r in 0..self.dim {
            acc.clear();
            for (k, a) in self.row(r) {
                for (col, b) in other.row(k) {
                    *acc.entry(col).or_insert(ZERO) += a * b;
                }
            }
            t.extend(acc.iter().map(|(&col, &v)| (r, col, v)));
        }
        Ok(Self::from_triplets(self.dim, t))
    }

    pub fn adjoint(&self) -> Self {
        let t = self.triplets().into_iter().map(|(r, col, v)| (col, r, v.conj())).collect();
        Self::from_triplets(self.dim, t)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.adjoint()).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| self.row(r).all(|(col, _)| col == r))
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|r| self.get(r, r)).collect()
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a, right: b })
    }
}

/// Operator on `nsites` qudits of dimension `site_dim`; site 0 is the most
/// significant digit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyOperator {
    pub nsites: usize,
    pub site_dim: usize,
    pub matrix: CsrMatrix,
}

impl ManyBodyOperator {
    pub fn new(nsites: usize, site_dim: usize, matrix: CsrMatrix) -> Result<Self> {
        let dim = hilbert_dim(site_dim, nsites)?;
        check_dims(dim, matrix.dim())?;
        Ok(Self { nsites, site_dim, matrix })
    }

    pub fn zeros(nsites: usize, site_dim: usize) -> Result<Self> {
        let dim = hilbert_dim(site_dim, nsites)?;
        Ok(Self { nsites, site_dim, matrix: CsrMatrix::zeros(dim) })
    }

    pub fn identity(nsites: usize, site_dim: usize) -> Result<Self> {
        let dim = hilbert_dim(site_dim, nsites)?;
        Ok(Self { nsites, site_dim, matrix: CsrMatrix::identity(dim) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn to_dense(&self) -> CMat {
        self.matrix.to_dense()
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        check_dims(self.dim(), other.dim())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self { matrix: self.matrix.add(&other.matrix)?, ..*self })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self { matrix: self.matrix.mul(&other.matrix)?, ..*self })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { matrix: self.matrix.scale(s), ..*self }
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), ..*self }
    }
}

/// `site_dim^nsites`, guarding against overflow.
pub fn hilbert_dim(site_dim: usize, nsites: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..nsites {
        dim = dim.checked_mul(site_dim).ok_or_else(|| Error::OutOfRange(format!("{site_dim}^{nsites} overflows")))?;
    }
    Ok(dim)
}

/// Product of single-site operators on distinct sites, identity elsewhere.
pub fn embed_product(factors: &[(usize, &CMat)], nsites: usize, site_dim: usize) -> Result<ManyBodyOperator> {
    let dim = hilbert_dim(site_dim, nsites)?;
    let mut triplets = Vec::new();
    push_product_triplets(&mut triplets, C64::new(1.0, 0.0), factors, nsites, site_dim)?;
    ManyBodyOperator::new(nsites, site_dim, CsrMatrix::from_triplets(dim, triplets))
}

/// Append the entries of `coeff * prod factors` to a triplet list.
pub fn push_product_triplets(triplets: &mut Vec<(usize, usize, C64)>, coeff: C64, factors: &[(usize, &CMat)], nsites: usize, site_dim: usize) -> Result<()> {
    let dim = hilbert_dim(site_dim, nsites)?;
    let mut seen = vec![false; nsites];
    for &(site, m) in factors {
        if site >= nsites {
            return Err(Error::SiteOutOfRange { site, nsites });
        }
        if seen[site] {
            return Err(Error::OutOfRange(format!("site {site} repeated in a product")));
        }
        seen[site] = true;
        check_dims(m.nrows(), site_dim)?;
    }
    let strides: Vec<usize> = (0..nsites).map(|s| site_dim.pow((nsites - 1 - s) as u32)).collect();
    // For each column (input basis state) enumerate the images.
    let mut images: Vec<(usize, C64)> = Vec::new();
    let mut next: Vec<(usize, C64)> = Vec::new();
    for col in 0..dim {
        images.clear();
        images.push((col, coeff));
        for &(site, m) in factors {
            let digit = (col / strides[site]) % site_dim;
            next.clear();
            for &(row, amp) in &images {
                let base = row - digit * strides[site];
                for out in 0..site_dim {
                    let v = m[(out, digit)];
                    if v != ZERO {
                        next.push((base + out * strides[site], amp * v));
                    }
                }
            }
            std::mem::swap(&mut images, &mut next);
        }
        triplets.extend(images.iter().map(|&(row, v)| (row, col, v)));
    }
    Ok(())
}

/// Single-site operator tensored with identities.
pub fn embed(op: &QuditOperator, site: usize, nsites: usize) -> Result<ManyBodyOperator> {
    embed_product(&[(site, &op.entries)], nsites, op.dim())
}

/// `ab - ba`.
pub fn commutator(a: &ManyBodyOperator, b: &ManyBodyOperator) -> Result<ManyBodyOperator> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    Ok(ManyBodyOperator { matrix: ab.matrix.sub(&ba.matrix)?, ..*a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity, kron, max_abs, paulis, I, ONE};
    use crate::qudit::{make_fixed_matrix, FixedMatrix};

    #[test]
    fn embed_orders_site_zero_first() {
        let z = QuditOperator { entries: paulis()[3].clone() };
        let m = embed(&z, 0, 2).unwrap().to_dense();
        let diag: Vec<f64> = (0..4).map(|k| m[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn embed_identity() {
        let one = QuditOperator::identity(3);
        let m = embed(&one, 1, 3).unwrap();
        assert_eq!(m.to_dense(), identity(27));
    }

    #[test]
    fn embed_clock_on_second_site() {
        let z = make_fixed_matrix(FixedMatrix::Z4, 0.0);
        let m = embed(&z, 1, 2).unwrap().to_dense();
        assert_eq!(m, kron(&identity(4), &z.entries));
    }

    #[test]
    fn embed_rejects_bad_site() {
        let z = QuditOperator { entries: paulis()[3].clone() };
        assert!(matches!(embed(&z, 2, 2), Err(Error::SiteOutOfRange { site: 2, nsites: 2 })));
    }

    #[test]
    fn product_matches_kron() {
        let p = paulis();
        let x = make_fixed_matrix(FixedMatrix::X3, 0.0).entries;
        let z = make_fixed_matrix(FixedMatrix::Z3, 0.4).entries;
        let m = embed_product(&[(2, &x), (0, &z)], 3, 3).unwrap().to_dense();
        let want = kron(&kron(&z, &identity(3)), &x);
        assert!(max_abs(&(m - want)) < 1e-15);
        let xy = embed_product(&[(0, &p[1]), (1, &p[2])], 2, 2).unwrap().to_dense();
        assert_eq!(xy, kron(&p[1], &p[2]));
    }

    #[test]
    fn pauli_commutator() {
        let p = paulis();
        let sx = ManyBodyOperator::new(1, 2, CsrMatrix::from_dense(&p[1])).unwrap();
        let sy = ManyBodyOperator::new(1, 2, CsrMatrix::from_dense(&p[2])).unwrap();
        let comm = commutator(&sx, &sy).unwrap().to_dense();
        assert!(max_abs(&(comm - &p[3] * c(0.0, 2.0))) < 1e-15);
    }

    #[test]
    fn diagonal_commutator_vanishes() {
        let zx = make_fixed_matrix(FixedMatrix::Zx, 0.3);
        let zy = make_fixed_matrix(FixedMatrix::Zy, 0.3);
        let a = embed(&zx, 0, 1).unwrap();
        let b = embed(&zy, 0, 1).unwrap();
        assert_eq!(commutator(&a, &b).unwrap().matrix.max_abs(), 0.0);
    }

    #[test]
    fn anticommuting_u_commutator() {
        let uy = embed(&make_fixed_matrix(FixedMatrix::Uy, 0.0), 0, 1).unwrap();
        let uz = embed(&make_fixed_matrix(FixedMatrix::Uz, 0.0), 0, 1).unwrap();
        let comm = commutator(&uy, &uz).unwrap().to_dense();
        let twice = uy.mul(&uz).unwrap().to_dense() * c(2.0, 0.0);
        assert!(max_abs(&(comm - twice)) < 1e-15);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let a = ManyBodyOperator::identity(1, 2).unwrap();
        let b = ManyBodyOperator::identity(2, 2).unwrap();
        assert!(matches!(commutator(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn csr_basics() {
        let m = crate::linalg::mat(2, &[ONE, I, -I, c(2.0, 0.0)]);
        let s = CsrMatrix::from_dense(&m);
        assert_eq!(s.to_dense(), m);
        assert_eq!(s.hermiticity_residual(), 0.0);
        let mut y = vec![ZERO; 2];
        s.matvec(&[ONE, ONE], &mut y);
        assert_eq!(y, vec![ONE + I, c(2.0, -1.0)]);
        let dup = CsrMatrix::from_triplets(2, vec![(0, 1, ONE), (0, 1, -ONE), (1, 1, ONE)]);
        assert_eq!(dup.nnz(), 1);
        assert!(dup.is_diagonal());
    }
}
