//! Large-field expansion of the three-state Potts model
//! `3J sum delta + lambda sum (X + X^dag)` to second order, and checks of it
//! against exact diagonalization.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::ed::{assemble, fmt12, lowest_k_values};
use crate::error::{Error, Result};
use crate::linalg::c;
use crate::model::{build_lattice, potts_model, Boundary, Geometry, IsingModel, PauliOp, PauliTerm, QubitModel};
use crate::transmute::FieldSpec;

/// Second-order couplings. The XXZ part is `J_eff/2 (xx + yy + delta zz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationResult {
    pub j: f64,
    pub lambda: f64,
    pub j_eff: f64,
    pub delta: f64,
    /// Coefficient of `s+_i s-_k + h.c.` for next-nearest neighbours.
    pub nnn_flip: f64,
    /// Coefficient of `s+ s+ s+ + h.c.` per ordered pair of neighbours
    /// around a centre site.
    pub triple_term: f64,
}

pub fn effective_xxz(j: f64, lambda: f64) -> Result<PerturbationResult> {
    if !(lambda > 0.0) || !j.is_finite() || !lambda.is_finite() {
        return Err(Error::OutOfRange(format!("need lambda > 0 and finite J, got J = {j}, lambda = {lambda}")));
    }
    let denom = 2.0 * lambda - j / 3.0;
    if denom.abs() <= 1e-12 * lambda {
        return Err(Error::Singularity(format!("anisotropy pole at lambda = J/6 (J = {j})")));
    }
    let c2 = -j * j / (3.0 * lambda);
    Ok(PerturbationResult { j, lambda, j_eff: j - j * j / (6.0 * lambda), delta: -j / denom, nnn_flip: c2, triple_term: c2 })
}

/// `K = 1 / (2 - (2/pi) arccos(delta_tilde))`.
pub fn luttinger_k(delta_tilde: f64) -> Result<f64> {
    if delta_tilde <= -1.0 {
        return Err(Error::LuttingerDivergence(delta_tilde));
    }
    if delta_tilde > 1.0 || delta_tilde.is_nan() {
        return Err(Error::OutOfRange(format!("delta_tilde = {delta_tilde} exceeds 1")));
    }
    Ok(1.0 / (2.0 - 2.0 / PI * delta_tilde.acos()))
}

/// Anisotropy at which a charge-3 operator turns relevant (K = 9/8).
pub fn threshold_delta() -> f64 {
    (5.0 * PI / 9.0).cos()
}

/// Field at which `sgn(J_eff) delta = -|delta|` reaches the threshold.
pub fn threshold_lambda(j: f64) -> Result<f64> {
    if j == 0.0 || !j.is_finite() {
        return Err(Error::OutOfRange("threshold needs J != 0".into()));
    }
    let a = threshold_delta().abs();
    // |delta| = |J| / |2 lambda - J/3| with 2 lambda > J/3 on the large-field side.
    let lambda = (j.abs() / a + j / 3.0) / 2.0;
    if lambda <= 0.0 {
        return Err(Error::OutOfRange(format!("no large-field threshold for J = {j}")));
    }
    Ok(lambda)
}

/// Lowest-order model: the XY chain `J (s+ s- + h.c.)`.
pub fn first_order_chain(j: f64, l: usize, boundary: Boundary) -> Result<QubitModel> {
    let lattice = build_lattice(Geometry::Chain, &[l], boundary, 0.0)?;
    let mut terms = Vec::new();
    for b in &lattice.bonds {
        terms.push(PauliTerm::real(j, &[(b.i, PauliOp::Plus), (b.j, PauliOp::Minus)]));
        terms.push(PauliTerm::real(j, &[(b.i, PauliOp::Minus), (b.j, PauliOp::Plus)]));
    }
    QubitModel::new(lattice, terms)
}

/// Second-order chain. Each centre site with two neighbours contributes
/// one next-nearest flip-flop and one triple term; the triple carries twice
/// `triple_term` since both orderings of the neighbour pair give it.
pub fn effective_model_chain(j: f64, lambda: f64, l: usize, boundary: Boundary) -> Result<QubitModel> {
    if l < 3 {
        return Err(Error::OutOfRange(format!("second-order chain needs L >= 3, got {l}")));
    }
    let pr = effective_xxz(j, lambda)?;
    let lattice = build_lattice(Geometry::Chain, &[l], boundary, 0.0)?;
    let mut terms = Vec::new();
    for b in &lattice.bonds {
        terms.push(PauliTerm::real(pr.j_eff, &[(b.i, PauliOp::Plus), (b.j, PauliOp::Minus)]));
        terms.push(PauliTerm::real(pr.j_eff, &[(b.i, PauliOp::Minus), (b.j, PauliOp::Plus)]));
        terms.push(PauliTerm::real(pr.j_eff * pr.delta / 2.0, &[(b.i, PauliOp::Z), (b.j, PauliOp::Z)]));
    }
    let centres: Vec<usize> = match boundary {
        Boundary::Periodic => (0..l).collect(),
        Boundary::Open => (1..l - 1).collect(),
    };
    for &m in &centres {
        let (a, b) = ((m + l - 1) % l, (m + 1) % l);
        terms.push(PauliTerm::real(pr.nnn_flip, &[(a, PauliOp::Plus), (b, PauliOp::Minus)]));
        terms.push(PauliTerm::real(pr.nnn_flip, &[(a, PauliOp::Minus), (b, PauliOp::Plus)]));
    }
    for &m in &centres {
        let (a, b) = ((m + l - 1) % l, (m + 1) % l);
        let t = 2.0 * pr.triple_term;
        terms.push(PauliTerm::new(c(t, 0.0), vec![(a, PauliOp::Plus), (m, PauliOp::Plus), (b, PauliOp::Plus)])?);
        terms.push(PauliTerm::new(c(t, 0.0), vec![(a, PauliOp::Minus), (m, PauliOp::Minus), (b, PauliOp::Minus)])?);
    }
    QubitModel::new(lattice, terms)
}

/// The Potts chain itself, `3J sum delta + lambda sum (X + X^dag)`.
pub fn potts_chain(j: f64, lambda: f64, l: usize, boundary: Boundary) -> Result<IsingModel> {
    let lattice = build_lattice(Geometry::Chain, &[l], boundary, 0.0)?;
    potts_model(&lattice, FieldSpec::three_state_sym(0.0), 3.0 * j, lambda)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationRow {
    pub lambda: f64,
    pub err_first_order: f64,
    pub err_second_order: f64,
}

fn low_excitations<H: crate::ed::Hamiltonian>(m: &H, k: usize) -> Result<Vec<f64>> {
    Ok(lowest_k_values(&assemble(m)?, k)?.excitations())
}

/// Largest mismatch over the lowest `min(8, 2^L)` excitation energies.
pub fn validate_against_ed(j: f64, lambdas: &[f64], l: usize, boundary: Boundary) -> Result<Vec<ValidationRow>> {
    let k = 8.min(1 << l);
    lambdas
        .par_iter()
        .map(|&lambda| {
            let exact = low_excitations(&potts_chain(j, lambda, l, boundary)?, k)?;
            let e1 = low_excitations(&first_order_chain(j, l, boundary)?, k)?;
            let e2 = low_excitations(&effective_model_chain(j, lambda, l, boundary)?, k)?;
            let diff = |a: &[f64]| exact.iter().zip(a).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            Ok(ValidationRow { lambda, err_first_order: diff(&e1), err_second_order: diff(&e2) })
        })
        .collect()
}

pub fn validation_csv(rows: &[ValidationRow]) -> String {
    let mut s = String::from("lambda,err1,err2\n");
    for r in rows {
        s.push_str(&format!("{},{},{}\n", fmt12(r.lambda), fmt12(r.err_first_order), fmt12(r.err_second_order)));
    }
    s
}
