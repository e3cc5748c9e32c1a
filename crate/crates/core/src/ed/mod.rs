//! Exact diagonalisation of qubit and q-state models.

mod entanglement;
pub mod solver;

use rayon::prelude::*;

pub use entanglement::{entanglement, EntanglementReport};

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, linear_fit, CVec, C64, ONE, ZERO};
use crate::model::{build_lattice, potts_model, Boundary, Geometry, IsingModel, QubitModel};
use crate::qudit::{make_fixed_matrix, FixedMatrix};
use crate::sparse::{hilbert_dim, push_product_triplets, CsrMatrix, ManyBodyOperator};
use crate::transmute::FieldSpec;

/// Default cap on the assembled Hilbert-space dimension (4^10).
pub const DEFAULT_DIM_CAP: usize = 1 << 20;
/// Below this dimension the dense solver is used.
pub const DENSE_LIMIT: usize = 4096;
/// Relative spacing under which two levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Anything that can be written as a sparse matrix on a qudit register.
pub trait Hamiltonian {
    fn nsites(&self) -> usize;
    fn site_dim(&self) -> usize;
    fn push_triplets(&self, out: &mut Vec<(usize, usize, C64)>) -> Result<()>;
}

impl Hamiltonian for QubitModel {
    fn nsites(&self) -> usize {
        self.lattice.nsites
    }

    fn site_dim(&self) -> usize {
        2
    }

    fn push_triplets(&self, out: &mut Vec<(usize, usize, C64)>) -> Result<()> {
        let n = self.nsites();
        for t in &self.terms {
            let mats: Vec<_> = t.factors.iter().map(|&(s, o)| (s, o.matrix())).collect();
            let refs: Vec<_> = mats.iter().map(|(s, m)| (*s, m)).collect();
            push_product_triplets(out, t.coeff, &refs, n, 2)?;
        }
        if self.constant != 0.0 {
            push_product_triplets(out, c(self.constant, 0.0), &[], n, 2)?;
        }
        Ok(())
    }
}

impl Hamiltonian for IsingModel {
    fn nsites(&self) -> usize {
        self.lattice.nsites
    }

    fn site_dim(&self) -> usize {
        self.site_dim
    }

    fn push_triplets(&self, out: &mut Vec<(usize, usize, C64)>) -> Result<()> {
        let lambda = self.lambda.ok_or_else(|| Error::OutOfRange("field strength lambda is unset".into()))?;
        let n = self.nsites();
        let d = self.site_dim;
        let dim = hilbert_dim(d, n)?;
        // Diagonal part evaluated configuration by configuration.
        let strides: Vec<usize> = (0..n).map(|s| d.pow((n - 1 - s) as u32)).collect();
        let mut diag = vec![c(self.constant, 0.0); dim];
        for t in &self.diag_terms {
            let values: Vec<(usize, Vec<C64>)> = t.factors.iter().map(|(s, op)| (*s, (0..d).map(|k| op.entries[(k, k)]).collect())).collect();
            for (idx, slot) in diag.iter_mut().enumerate() {
                let mut v = t.coeff;
                for (s, vals) in &values {
                    v *= vals[(idx / strides[*s]) % d];
                }
                *slot += v;
            }
        }
        out.extend(diag.into_iter().enumerate().filter(|(_, v)| *v != ZERO).map(|(i, v)| (i, i, v)));
        for o in &self.onsite {
            push_product_triplets(out, c(o.coeff, 0.0), &[(o.site, &o.op.entries)], n, d)?;
        }
        if lambda != 0.0 {
            for site in 0..n {
                push_product_triplets(out, c(lambda, 0.0), &[(site, &self.field.matrix.entries)], n, d)?;
            }
        }
        Ok(())
    }
}

pub fn assemble<H: Hamiltonian + ?Sized>(model: &H) -> Result<ManyBodyOperator> {
    assemble_with_cap(model, DEFAULT_DIM_CAP)
}

pub fn assemble_with_cap<H: Hamiltonian + ?Sized>(model: &H, cap: usize) -> Result<ManyBodyOperator> {
    let dim = hilbert_dim(model.site_dim(), model.nsites())?;
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let mut triplets = Vec::new();
    model.push_triplets(&mut triplets)?;
    let op = ManyBodyOperator::new(model.nsites(), model.site_dim(), CsrMatrix::from_triplets(dim, triplets))?;
    let residual = op.matrix.hermiticity_residual();
    if residual > 1e-12 * op.matrix.max_abs().max(1.0) {
        return Err(Error::NotHermitian(residual));
    }
    Ok(op)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<CVec>>,
    /// Levels within the degeneracy tolerance of the lowest one.
    pub ground_degeneracy: usize,
}

impl Spectrum {
    fn new(eigenvalues: Vec<f64>, eigenvectors: Option<Vec<CVec>>) -> Self {
        let e0 = eigenvalues[0];
        let tol = DEGENERACY_TOL * e0.abs().max(1.0);
        let ground_degeneracy = eigenvalues.iter().take_while(|&&e| e - e0 <= tol).count();
        Self { eigenvalues, eigenvectors, ground_degeneracy }
    }

    pub fn excitations(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e - self.eigenvalues[0]).collect()
    }

    /// First gap above the (possibly degenerate) ground level.
    pub fn gap(&self) -> Option<f64> {
        self.eigenvalues.get(self.ground_degeneracy).map(|e| e - self.eigenvalues[0])
    }

    pub fn ground_state(&self) -> Option<&CVec> {
        self.eigenvectors.as_ref().and_then(|v| v.first())
    }
}

/// Lowest `k` eigenpairs.
pub fn lowest_k(op: &ManyBodyOperator, k: usize) -> Result<Spectrum> {
    solve(op, k, true)
}

/// Lowest `k` eigenvalues without eigenvectors.
pub fn lowest_k_values(op: &ManyBodyOperator, k: usize) -> Result<Spectrum> {
    solve(op, k, false)
}

fn solve(op: &ManyBodyOperator, k: usize, vectors: bool) -> Result<Spectrum> {
    let dim = op.dim();
    if k == 0 || k > dim {
        return Err(Error::OutOfRange(format!("k = {k} for dimension {dim}")));
    }
    let m = &op.matrix;
    if m.is_diagonal() {
        let diag = m.diagonal();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| diag[a].re.total_cmp(&diag[b].re));
        order.truncate(k);
        let values = order.iter().map(|&i| diag[i].re).collect();
        let vecs = vectors.then(|| {
            order
                .iter()
                .map(|&i| {
                    let mut v = CVec::zeros(dim);
                    v[i] = ONE;
                    v
                })
                .collect()
        });
        return Ok(Spectrum::new(values, vecs));
    }
    if dim < DENSE_LIMIT {
        let (w, v) = eigh(&m.to_dense());
        let vecs = vectors.then(|| (0..k).map(|i| v.column(i).into_owned()).collect());
        return Ok(Spectrum::new(w[..k].to_vec(), vecs));
    }
    let (w, v) = solver::lowest_pairs(m, k)?;
    let vecs = vectors.then(|| v.into_iter().map(CVec::from_vec).collect());
    Ok(Spectrum::new(w, vecs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub spectral_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub k: usize,
    /// `p` in `error ~ lambda^(-p)`, fitted on the positive-lambda rows.
    pub exponent: Option<f64>,
    /// RMS residual of the log-log fit.
    pub fit_residual: Option<f64>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda,spectral_error,k\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{}\n", fmt12(r.lambda), fmt12(r.spectral_error), self.k));
        }
        s
    }
}

/// Twelve significant digits in scientific notation.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Max deviation between the lowest `k` excitation energies of the q-state
/// model (at each field strength) and of the target qubit model.
pub fn convergence_sweep(ising: &IsingModel, target: &QubitModel, lambdas: &[f64], k: usize) -> Result<SweepTable> {
    if ising.nsites() != target.nsites() {
        return Err(Error::DimensionMismatch { left: ising.nsites(), right: target.nsites() });
    }
    let qubit_dim = hilbert_dim(2, target.nsites())?;
    if k == 0 || k > qubit_dim {
        return Err(Error::OutOfRange(format!("k = {k} exceeds 2^{}", target.nsites())));
    }
    let reference = lowest_k_values(&assemble(target)?, k)?.excitations();
    let rows = lambdas
        .par_iter()
        .map(|&lambda| {
            let spec = lowest_k_values(&assemble(&ising.with_lambda(lambda))?, k)?;
            let err = spec.excitations().iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            Ok(SweepRow { lambda, spectral_error: err })
        })
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.lambda > 0.0 && r.spectral_error > 0.0).map(|r| (r.lambda.ln(), r.spectral_error.ln())).collect();
    let (exponent, fit_residual) = if pts.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        let (slope, _, rms) = linear_fit(&x, &y);
        (Some(-slope), Some(rms))
    } else {
        (None, None)
    };
    Ok(SweepTable { rows, k, exponent, fit_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SptResult {
    pub gap: f64,
    /// All sixteen levels, ascending.
    pub spectrum: Vec<f64>,
    pub ground_state: CVec,
    pub report: EntanglementReport,
}

/// Two four-state sites with `3 J delta + lambda (X_1 + X_2)`.
pub fn two_site_spt(j: f64, lambda: f64) -> Result<SptResult> {
    if !(j > 0.0) || !(lambda >= 0.0) {
        return Err(Error::OutOfRange(format!("need J > 0 and lambda >= 0, got J = {j}, lambda = {lambda}")));
    }
    let lat = build_lattice(Geometry::Chain, &[2], Boundary::Open, 0.0)?;
    let model = potts_model(&lat, FieldSpec::four_state_x(0.0), 3.0 * j, lambda)?;
    let (w, v) = eigh(&assemble(&model)?.to_dense());
    let ground_state = v.column(0).into_owned();
    let report = entanglement(&ground_state, 2, 4, 1)?;
    Ok(SptResult { gap: w[1] - w[0], spectrum: w, ground_state, report })
}

/// Four-state chain `3 J sum_n (1 + b (-1)^n) delta + lambda sum X`.
pub fn staggered_potts_chain(l: usize, boundary: Boundary, b: f64, j: f64, lambda: f64) -> Result<IsingModel> {
    let lat = build_lattice(Geometry::Chain, &[l], boundary, b)?;
    potts_model(&lat, FieldSpec::four_state_x(0.0), 3.0 * j, lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StringKind {
    /// Product of `U^z` over whole cells.
    Trivial,
    /// Same string with `Z^2` attached at both ends.
    Spt,
}

/// `<psi| prod_{n in [start, end)} U^z_n |psi>` on a four-state chain,
/// dressed with `Z^2` endpoints for [`StringKind::Spt`]. The interval must
/// cover whole two-site cells `(2m, 2m + 1)`.
pub fn string_order(state: &CVec, nsites: usize, kind: StringKind, start: usize, end: usize) -> Result<f64> {
    if !start.is_multiple_of(2) || !end.is_multiple_of(2) || start >= end || end > nsites {
        return Err(Error::MisalignedInterval { start, end });
    }
    let dim = hilbert_dim(4, nsites)?;
    if state.len() != dim {
        return Err(Error::DimensionMismatch { left: state.len(), right: dim });
    }
    let uz = make_fixed_matrix(FixedMatrix::Uz, 0.0).entries;
    let z2 = make_fixed_matrix(FixedMatrix::Zz, 0.0).entries;
    let first = match kind {
        StringKind::Trivial => uz.clone(),
        StringKind::Spt => &z2 * &uz,
    };
    let last = match kind {
        StringKind::Trivial => uz.clone(),
        StringKind::Spt => &uz * &z2,
    };
    let mut mats = Vec::new();
    for n in start..end {
        let m = if n == start {
            first.clone()
        } else if n == end - 1 {
            last.clone()
        } else {
            uz.clone()
        };
        mats.push((n, m));
    }
    let refs: Vec<_> = mats.iter().map(|(s, m)| (*s, m)).collect();
    let op = crate::sparse::embed_product(&refs, nsites, 4)?;
    let psi: Vec<C64> = state.iter().copied().collect();
    let mut out = vec![ZERO; dim];
    op.matrix.matvec(&psi, &mut out);
    let num: C64 = psi.iter().zip(&out).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    Ok(num.re / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{standard_model, StandardModel};
    use crate::transmute::{transmute_qubit_model, TransmutePath};

    fn chain(l: usize, b: Boundary) -> crate::model::Lattice {
        build_lattice(Geometry::Chain, &[l], b, 0.0).unwrap()
    }

    #[test]
    fn heisenberg_dimer_levels() {
        let m = standard_model(StandardModel::Heisenberg { j: 2.0 }, &chain(2, Boundary::Open)).unwrap();
        let s = lowest_k(&assemble(&m).unwrap(), 4).unwrap();
        let want = [-1.5, 0.5, 0.5, 0.5];
        for (a, b) in s.eigenvalues.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(s.ground_degeneracy, 1);
        assert!((s.gap().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_site_field_only_is_the_field() {
        let lat = crate::model::Lattice::custom(1, vec![]).unwrap();
        let m =
            IsingModel { lattice: lat, site_dim: 4, diag_terms: vec![], onsite: vec![], constant: 0.0, field: FieldSpec::four_state_x(0.0), lambda: Some(1.0) };
        let op = assemble(&m).unwrap();
        let x = make_fixed_matrix(FixedMatrix::X4, 0.0).entries;
        assert!(crate::linalg::max_abs(&(op.to_dense() - x)) < 1e-15);
    }

    #[test]
    fn unset_lambda_is_an_error() {
        let xy = standard_model(StandardModel::Xy { j: 1.0 }, &chain(2, Boundary::Open)).unwrap();
        let ising = transmute_qubit_model(&xy, 0.0, TransmutePath::ThreeState).unwrap();
        assert!(assemble(&ising).is_err());
    }

    #[test]
    fn two_site_potts_classical_limit() {
        let lat = chain(2, Boundary::Open);
        let m = potts_model(&lat, FieldSpec::four_state_x(0.0), 3.0, 0.0).unwrap();
        let s = lowest_k_values(&assemble(&m).unwrap(), 16).unwrap();
        assert_eq!(s.ground_degeneracy, 12);
        assert!(s.eigenvalues[..12].iter().all(|e| e.abs() < 1e-14));
        assert!(s.eigenvalues[12..].iter().all(|e| (e - 3.0).abs() < 1e-14));
    }

    #[test]
    fn dimension_cap_enforced() {
        let m = standard_model(StandardModel::Xy { j: 1.0 }, &chain(8, Boundary::Open)).unwrap();
        assert!(matches!(assemble_with_cap(&m, 100), Err(Error::DimensionCap { dim: 256, cap: 100 })));
    }

    /// Many-body levels of the open XY chain from free-fermion occupations.
    fn free_fermion_levels(l: usize, j: f64) -> Vec<f64> {
        let eps: Vec<f64> = (1..=l).map(|k| 2.0 * j * (std::f64::consts::PI * k as f64 / (l + 1) as f64).cos()).collect();
        let mut levels: Vec<f64> = (0u32..(1 << l)).map(|mask| (0..l).filter(|b| mask >> b & 1 == 1).map(|b| eps[b]).sum()).collect();
        levels.sort_by(f64::total_cmp);
        levels
    }

    #[test]
    fn xy_chain_matches_free_fermions_dense() {
        let m = standard_model(StandardModel::Xy { j: 0.8 }, &chain(4, Boundary::Open)).unwrap();
        let s = lowest_k_values(&assemble(&m).unwrap(), 16).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(free_fermion_levels(4, 0.8)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn xy_chain_matches_free_fermions_iterative() {
        let m = standard_model(StandardModel::Xy { j: 1.0 }, &chain(12, Boundary::Open)).unwrap();
        let op = assemble(&m).unwrap();
        assert!(op.dim() >= DENSE_LIMIT);
        let s = lowest_k(&op, 4).unwrap();
        let oracle = free_fermion_levels(12, 1.0);
        for (a, b) in s.eigenvalues.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        let psi: Vec<C64> = s.ground_state().unwrap().iter().copied().collect();
        let mut hv = vec![ZERO; psi.len()];
        op.matrix.matvec(&psi, &mut hv);
        let r: f64 = hv.iter().zip(&psi).map(|(h, p)| (h - p * s.eigenvalues[0]).norm_sqr()).sum::<f64>().sqrt();
        assert!(r <= 1e-9);
    }

    #[test]
    fn spt_pair_gap_and_entanglement() {
        for lambda in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let r = two_site_spt(1.0, lambda).unwrap();
            assert!(r.gap > 0.0);
            assert!((r.report.entropy - 2f64.ln()).abs() < 1e-10, "lambda={lambda}");
            assert_eq!(r.report.degeneracy_pattern, vec![2]);
            assert!((r.report.spectrum[0] - 0.5).abs() < 1e-10 && (r.report.spectrum[1] - 0.5).abs() < 1e-10);
        }
        let big = two_site_spt(1.0, 100.0).unwrap();
        assert!((big.gap - 1.0).abs() < 0.01);
        assert!(matches!(two_site_spt(0.0, 1.0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn string_orders_on_decoupled_dimers() {
        // b = -1: cells coincide with dimers.
        let triv = staggered_potts_chain(4, Boundary::Open, -1.0, 1.0, 1.0).unwrap();
        let s = lowest_k(&assemble(&triv).unwrap(), 2).unwrap();
        assert_eq!(s.ground_degeneracy, 1);
        let g = s.ground_state().unwrap();
        let t = string_order(g, 4, StringKind::Trivial, 0, 4).unwrap();
        assert!(t.abs() > 0.1);
        // b = +1 on a ring: dimers straddle the cells.
        let topo = staggered_potts_chain(4, Boundary::Periodic, 1.0, 1.0, 1.0).unwrap();
        let s = lowest_k(&assemble(&topo).unwrap(), 2).unwrap();
        assert_eq!(s.ground_degeneracy, 1);
        let g = s.ground_state().unwrap();
        assert!(string_order(g, 4, StringKind::Trivial, 0, 2).unwrap().abs() < 1e-10);
        let spt = string_order(g, 4, StringKind::Spt, 0, 2).unwrap();
        assert!((spt - 1.0 / 3.0).abs() < 1e-10, "{spt}");
        assert!(matches!(string_order(g, 4, StringKind::Trivial, 1, 3), Err(Error::MisalignedInterval { .. })));
    }

    #[test]
    fn sweep_ignores_constant_shifts() {
        let lat = chain(3, Boundary::Periodic);
        let xy = standard_model(StandardModel::Xy { j: 1.0 }, &lat).unwrap();
        let ising = transmute_qubit_model(&xy, 0.0, TransmutePath::ThreeState).unwrap();
        let base = convergence_sweep(&ising, &xy, &[40.0, 80.0], 8).unwrap();
        let mut shifted_ising = ising.clone();
        shifted_ising.constant += 3.7;
        let mut shifted_target = xy.clone();
        shifted_target.constant -= 1.1;
        let shifted = convergence_sweep(&shifted_ising, &shifted_target, &[40.0, 80.0], 8).unwrap();
        for (a, b) in base.rows.iter().zip(&shifted.rows) {
            assert!((a.spectral_error - b.spectral_error).abs() < 1e-10);
        }
    }

    #[test]
    fn sweep_three_state_decays_like_inverse_lambda() {
        let lat = chain(3, Boundary::Periodic);
        let xy = standard_model(StandardModel::Xy { j: 1.0 }, &lat).unwrap();
        let ising = transmute_qubit_model(&xy, 0.0, TransmutePath::ThreeState).unwrap();
        let t = convergence_sweep(&ising, &xy, &[50.0, 100.0, 200.0, 400.0], 8).unwrap();
        let p = t.exponent.unwrap();
        assert!((0.8..=1.2).contains(&p), "p = {p}");
        assert!(t.rows.windows(2).all(|w| w[1].spectral_error < w[0].spectral_error));
        let zero = convergence_sweep(&ising, &xy, &[0.0], 8).unwrap();
        assert!(zero.rows[0].spectral_error > 0.1);
        assert!(zero.exponent.is_none());
    }
}
