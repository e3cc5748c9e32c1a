//! Field doublets, operator projection, and rewriting of qubit models as
//! q-state models with diagonal interactions.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use nalgebra::{Matrix3, Rotation3, UnitQuaternion};

use crate::error::{Error, Result};
use crate::linalg::{
    c, cis, eigh, hermiticity_residual, identity, inv_sqrt_psd, max_abs, pauli_compose, pauli_decompose, paulis, CMat, CVec, C64, I, ONE, ZERO,
};
use crate::model::{Axis, DiagTerm, IsingModel, OnsiteTerm, PauliOp, PauliStrings, QubitModel};
use crate::qudit::{make_fixed_matrix, omega, theta_field, tilde_x, x_of_q, FixedMatrix, QuditOperator};
use crate::sparse::{CsrMatrix, ManyBodyOperator};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// `q` at which each projected density carries a single Pauli axis.
pub fn special_q() -> f64 {
    2.0 - SQRT3
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind {
    FourStateX,
    ThreeStateSym,
    XofQ(f64),
    TildeX,
    ThetaField(f64),
    Custom,
}

impl FieldKind {
    pub fn name(&self) -> &'static str {
        match self {
            FieldKind::FourStateX => "four_state_x",
            FieldKind::ThreeStateSym => "three_state_sym",
            FieldKind::XofQ(_) => "x_of_q",
            FieldKind::TildeX => "tilde_x",
            FieldKind::ThetaField(_) => "theta",
            FieldKind::Custom => "custom",
        }
    }
}

/// Which end of the field spectrum survives `lambda -> +inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowSide {
    Bottom,
    Top,
}

/// A single-site field matrix together with its doublet convention.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    /// Phase attached to the raising operator; only the four- and
    /// three-state printed bases use it.
    pub phi: f64,
    pub matrix: QuditOperator,
    pub low: LowSide,
}

impl FieldSpec {
    pub fn four_state_x(phi: f64) -> Self {
        Self { kind: FieldKind::FourStateX, phi, matrix: make_fixed_matrix(FixedMatrix::X4, 0.0), low: LowSide::Bottom }
    }

    pub fn three_state_sym(phi: f64) -> Self {
        let x = make_fixed_matrix(FixedMatrix::X3, 0.0);
        let m = QuditOperator { entries: &x.entries + x.entries.adjoint() };
        Self { kind: FieldKind::ThreeStateSym, phi, matrix: m, low: LowSide::Bottom }
    }

    pub fn x_of_q(q: f64) -> Result<Self> {
        Ok(Self { kind: FieldKind::XofQ(q), phi: 0.0, matrix: x_of_q(q)?, low: LowSide::Bottom })
    }

    pub fn tilde_x() -> Self {
        Self { kind: FieldKind::TildeX, phi: 0.0, matrix: tilde_x(), low: LowSide::Bottom }
    }

    pub fn theta(theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::OutOfRange(format!("theta = {theta} outside [0, pi/2]")));
        }
        Ok(Self { kind: FieldKind::ThetaField(theta), phi: 0.0, matrix: theta_field(theta), low: LowSide::Bottom })
    }

    pub fn custom(matrix: QuditOperator, low: LowSide) -> Result<Self> {
        let r = hermiticity_residual(&matrix.entries);
        if r > 1e-14 {
            return Err(Error::NotHermitian(r));
        }
        Ok(Self { kind: FieldKind::Custom, phi: 0.0, matrix, low })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Projector, gauge-fixed basis and energies of the surviving doublet.
    pub fn doublet(&self) -> Result<Doublet> {
        let (vals, vecs) = eigh(&self.matrix.entries);
        let n = vals.len();
        if n < 2 {
            return Err(Error::Degeneracy("field acts on fewer than two states".into()));
        }
        let order: Vec<usize> = match self.low {
            LowSide::Bottom => (0..n).collect(),
            LowSide::Top => (0..n).rev().collect(),
        };
        let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let (e0, e1) = (vals[order[0]], vals[order[1]]);
        if (e1 - e0).abs() > 1e-10 * scale {
            return Err(Error::Degeneracy(format!("lowest levels {e0} and {e1} are split")));
        }
        let gap = if n > 2 { (vals[order[2]] - e1).abs() } else { f64::INFINITY };
        if gap <= 1e-10 * scale {
            return Err(Error::Degeneracy("low space is more than two-dimensional".into()));
        }
        let mut low = CMat::zeros(n, 2);
        low.set_column(0, &vecs.column(order[0]));
        low.set_column(1, &vecs.column(order[1]));
        let projector = &low * low.adjoint();
        let basis = self.basis_for(&projector)?;
        Ok(Doublet { projector, basis, low_energy: 0.5 * (e0 + e1), excitation_gap: gap })
    }

    fn basis_for(&self, projector: &CMat) -> Result<DoubletBasis> {
        match self.kind {
            FieldKind::FourStateX => Ok(four_state_printed_basis(self.phi)),
            FieldKind::ThreeStateSym => Ok(three_state_printed_basis(self.phi)),
            FieldKind::XofQ(q) => density_basis(q, DensityBranch::Rebased),
            FieldKind::TildeX => density_basis(special_q(), DensityBranch::Rebased),
            FieldKind::ThetaField(_) => {
                let reference = three_state_printed_basis(0.0).matrix();
                DoubletBasis::from_matrix(&lowdin(projector, &reference)?)
            }
            FieldKind::Custom => Ok(generic_gauge(projector)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubletBasis {
    pub up: CVec,
    pub down: CVec,
}

impl DoubletBasis {
    /// Columns (up, down).
    pub fn matrix(&self) -> CMat {
        let mut m = CMat::zeros(self.up.len(), 2);
        m.set_column(0, &self.up);
        m.set_column(1, &self.down);
        m
    }

    pub fn from_matrix(m: &CMat) -> Result<Self> {
        if m.ncols() != 2 {
            return Err(Error::DimensionMismatch { left: m.ncols(), right: 2 });
        }
        Ok(Self { up: m.column(0).into_owned(), down: m.column(1).into_owned() })
    }

    pub fn orthonormality_residual(&self) -> f64 {
        let b = self.matrix();
        max_abs(&(b.adjoint() * &b - identity(2)))
    }

    /// `<b|op|b'>` as a 2x2 matrix with index 0 = up.
    pub fn project(&self, op: &CMat) -> Result<CMat> {
        if op.nrows() != self.up.len() {
            return Err(Error::DimensionMismatch { left: op.nrows(), right: self.up.len() });
        }
        let b = self.matrix();
        Ok(b.adjoint() * op * b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Doublet {
    pub projector: CMat,
    pub basis: DoubletBasis,
    /// Field eigenvalue on the doublet.
    pub low_energy: f64,
    /// Distance from the doublet to the next field level.
    pub excitation_gap: f64,
}

/// Coefficients on (1, x, y, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCouplings {
    pub coeffs: [C64; 4],
}

impl EffectiveCouplings {
    pub fn from_matrix(m: &CMat) -> Self {
        Self { coeffs: pauli_decompose(m) }
    }

    pub fn real(identity: f64, x: f64, y: f64, z: f64) -> Self {
        Self { coeffs: [c(identity, 0.0), c(x, 0.0), c(y, 0.0), c(z, 0.0)] }
    }

    pub fn matrix(&self) -> CMat {
        pauli_compose(&self.coeffs)
    }

    pub fn identity_part(&self) -> C64 {
        self.coeffs[0]
    }

    pub fn vector(&self) -> [C64; 3] {
        [self.coeffs[1], self.coeffs[2], self.coeffs[3]]
    }

    pub fn real_vector(&self) -> [f64; 3] {
        [self.coeffs[1].re, self.coeffs[2].re, self.coeffs[3].re]
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).fold(0.0, |a, (x, y)| a.max((x - y).norm()))
    }
}

/// Single-site projector and gauge-fixed doublet basis.
pub fn build_projector(field: &FieldSpec) -> Result<(ManyBodyOperator, DoubletBasis)> {
    let d = field.doublet()?;
    let op = ManyBodyOperator::new(1, field.dim(), CsrMatrix::from_dense(&d.projector))?;
    Ok((op, d.basis))
}

pub fn project_operator(field: &FieldSpec, op: &QuditOperator) -> Result<EffectiveCouplings> {
    if op.dim() != field.dim() {
        return Err(Error::DimensionMismatch { left: op.dim(), right: field.dim() });
    }
    let d = field.doublet()?;
    Ok(EffectiveCouplings::from_matrix(&d.basis.project(&op.entries)?))
}

fn four_state_printed_basis(phi: f64) -> DoubletBasis {
    let a = (2.0 + SQRT3).sqrt();
    let b = (2.0 - SQRT3).sqrt();
    let nu = cis(phi) / (2f64.sqrt() * (3.0 + SQRT3).sqrt());
    let nd = c(1.0 / (2f64.sqrt() * (3.0 - SQRT3).sqrt()), 0.0);
    let up = CVec::from_vec(vec![c(-a, 0.0), cis(FRAC_PI_4), c(a, 0.0), cis(-FRAC_PI_4)]) * nu;
    let down = CVec::from_vec(vec![c(-b, 0.0), cis(-FRAC_PI_4), c(-b, 0.0), cis(FRAC_PI_4)]) * nd;
    DoubletBasis { up, down }
}

fn three_state_printed_basis(phi: f64) -> DoubletBasis {
    let w = omega();
    let s = c(1.0 / SQRT3, 0.0);
    let up = CVec::from_vec(vec![ONE, w.conj(), w]) * (s * cis(phi));
    let down = CVec::from_vec(vec![ONE, w, w.conj()]) * s;
    DoubletBasis { up, down }
}

/// Orthonormalise the projector's columns in order, then make the first
/// component above 1e-12 of each vector real and positive.
fn generic_gauge(projector: &CMat) -> DoubletBasis {
    let mut found: Vec<CVec> = Vec::new();
    for j in 0..projector.ncols() {
        if found.len() == 2 {
            break;
        }
        let mut v: CVec = projector.column(j).into_owned();
        for _ in 0..2 {
            for u in &found {
                let ov = u.dotc(&v);
                v -= u * ov;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= c(norm, 0.0);
            if let Some(z) = v.iter().find(|z| z.norm() > 1e-12).copied() {
                v *= z.conj() / z.norm();
            }
            found.push(v);
        }
    }
    let down = found.pop().expect("rank-2 projector");
    let up = found.pop().expect("rank-2 projector");
    DoubletBasis { up, down }
}

/// `P R (R^dag P R)^(-1/2)`: the orthonormal basis of range(P) closest to `R`.
fn lowdin(projector: &CMat, reference: &CMat) -> Result<CMat> {
    let pr = projector * reference;
    let gram = reference.adjoint() * &pr;
    let (w, _) = eigh(&gram);
    if w[0] < 1e-8 {
        return Err(Error::Degeneracy("reference basis is orthogonal to the doublet".into()));
    }
    Ok(pr * inv_sqrt_psd(&gram))
}

/// Branches of the `n^a` curves along the `X(q)` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityBranch {
    /// Connected to the `q = 0` form with equal-magnitude components.
    Continuous,
    /// Fixed SU(2) rebasing so that `q = 2 - sqrt(3)` gives `(1 - s^a)/(3 + sqrt(3))`.
    Rebased,
}

fn density(axis: Axis) -> CMat {
    let mut m = CMat::zeros(4, 4);
    m[(1 + axis.index(), 1 + axis.index())] = ONE;
    m
}

fn density_vectors(basis: &CMat) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for a in Axis::ALL {
        let m = basis.adjoint() * density(a) * basis;
        let k = EffectiveCouplings::from_matrix(&m);
        out[a.index()] = k.real_vector();
    }
    out
}

/// SU(2) matrix `U` with `U^dag (v.s) U ~ (t.s)` for each pair, from the
/// best proper rotation taking the `v` frame onto the `t` frame.
fn fit_su2(v: &[[f64; 3]; 3], t: &[[f64; 3]; 3]) -> CMat {
    let mut h = Matrix3::<f64>::zeros();
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                h[(i, j)] += v[k][i] * t[k][j];
            }
        }
    }
    let svd = h.svd(true, true);
    let (u, vt): (Matrix3<f64>, Matrix3<f64>) = (svd.u.unwrap(), svd.v_t.unwrap());
    let d = (vt.transpose() * u.transpose()).determinant().signum();
    let r = vt.transpose() * Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, d)) * u.transpose();
    let quat = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(r));
    let p = paulis();
    let candidate = &p[0] * c(quat.w, 0.0) - (&p[1] * c(quat.i, 0.0) + &p[2] * c(quat.j, 0.0) + &p[3] * c(quat.k, 0.0)) * I;
    let residual = |m: &CMat| {
        (0..3)
            .map(|k| {
                let src = &p[1] * c(v[k][0], 0.0) + &p[2] * c(v[k][1], 0.0) + &p[3] * c(v[k][2], 0.0);
                let dst = &p[1] * c(t[k][0], 0.0) + &p[2] * c(t[k][1], 0.0) + &p[3] * c(t[k][2], 0.0);
                max_abs(&(m.adjoint() * src * m - dst))
            })
            .fold(0.0, f64::max)
    };
    let adj = candidate.adjoint();
    if residual(&candidate) <= residual(&adj) {
        candidate
    } else {
        adj
    }
}

fn continuous_reference() -> CMat {
    let b0 = four_state_printed_basis(0.0).matrix();
    let k = 1.0 / (4.0 * SQRT3);
    let targets = [[k, -k, -k], [-k, k, -k], [-k, -k, k]];
    let u = fit_su2(&density_vectors(&b0), &targets);
    b0 * u
}

fn low_projector(q: f64) -> Result<CMat> {
    let x = x_of_q(q)?;
    Ok((identity(4) - x.entries * c(1.0 / SQRT3, 0.0)) * c(0.5, 0.0))
}

/// Doublet basis of `X(q)` in one of the two density gauges.
pub fn density_basis(q: f64, branch: DensityBranch) -> Result<DoubletBasis> {
    let reference = continuous_reference();
    let cont = lowdin(&low_projector(q)?, &reference)?;
    let basis = match branch {
        DensityBranch::Continuous => cont,
        DensityBranch::Rebased => {
            let qs = special_q();
            let at_special = lowdin(&low_projector(qs)?, &reference)?;
            let k = 1.0 / (3.0 + SQRT3);
            let targets = [[-k, 0.0, 0.0], [0.0, -k, 0.0], [0.0, 0.0, -k]];
            cont * fit_su2(&density_vectors(&at_special), &targets)
        }
    };
    DoubletBasis::from_matrix(&basis)
}

/// `P n^a P` along the `X(q)` family in the requested gauge.
pub fn projected_density_curve(q: f64, alpha: Axis, branch: DensityBranch) -> Result<EffectiveCouplings> {
    let basis = density_basis(q, branch)?;
    Ok(EffectiveCouplings::from_matrix(&basis.project(&density(alpha))?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransmutePath {
    FourState,
    ThreeState,
}

/// Single-site diagonal image of a Pauli factor.
fn substitute(op: PauliOp, phi: f64, path: TransmutePath) -> QuditOperator {
    match path {
        TransmutePath::FourState => {
            let r = c((1.5f64).sqrt(), 0.0);
            let z = make_fixed_matrix(FixedMatrix::Z4, 0.0);
            match op {
                PauliOp::Plus => z.scale(r * cis(phi)),
                PauliOp::Minus => z.dagger().scale(r * cis(-phi)),
                PauliOp::Z => make_fixed_matrix(FixedMatrix::Zz, phi).scale(c(SQRT3, 0.0)),
                PauliOp::X => make_fixed_matrix(FixedMatrix::Zx, phi).scale(c(SQRT3, 0.0)),
                PauliOp::Y => make_fixed_matrix(FixedMatrix::Zy, phi).scale(c(SQRT3, 0.0)),
            }
        }
        TransmutePath::ThreeState => {
            let z = make_fixed_matrix(FixedMatrix::Z3, phi);
            let zd = z.dagger();
            match op {
                PauliOp::Plus => z,
                PauliOp::Minus => zd,
                PauliOp::X => QuditOperator { entries: &z.entries + &zd.entries },
                PauliOp::Y => QuditOperator { entries: (&z.entries - &zd.entries) * (-I) },
                PauliOp::Z => unreachable!("handled separately"),
            }
        }
    }
}

/// The on-site operator whose doublet image is sigma^z on the three-state path.
pub fn three_state_sz() -> QuditOperator {
    let x = make_fixed_matrix(FixedMatrix::X3, 0.0);
    QuditOperator { entries: (&x.entries - x.entries.adjoint()) * c(0.0, 1.0 / SQRT3) }
}

/// Replace every Pauli factor by a diagonal clock operator. The field
/// strength is left unset.
pub fn transmute_qubit_model(model: &QubitModel, phi: f64, path: TransmutePath) -> Result<IsingModel> {
    model.validate()?;
    let mut diag_terms = Vec::new();
    let mut fields: BTreeMap<usize, C64> = BTreeMap::new();
    for t in &model.terms {
        let has_z = t.factors.iter().any(|f| f.1 == PauliOp::Z);
        if path == TransmutePath::ThreeState && has_z {
            if t.factors.len() > 1 {
                return Err(Error::PathMismatch("sigma^z appears inside an interaction".into()));
            }
            *fields.entry(t.factors[0].0).or_insert(ZERO) += t.coeff;
            continue;
        }
        let factors = t.factors.iter().map(|&(s, o)| (s, substitute(o, phi, path))).collect();
        diag_terms.push(DiagTerm { coeff: t.coeff, factors });
    }
    let onsite = fields.into_iter().filter(|(_, h)| *h != ZERO).map(|(site, h)| OnsiteTerm { site, coeff: h.re, op: three_state_sz() }).collect();
    let (site_dim, field) = match path {
        TransmutePath::FourState => (4, FieldSpec::four_state_x(phi)),
        TransmutePath::ThreeState => (3, FieldSpec::three_state_sym(phi)),
    };
    let out = IsingModel { lattice: model.lattice.clone(), site_dim, diag_terms, onsite, constant: model.constant, field, lambda: None };
    out.validate()?;
    Ok(out)
}

fn push_projected(acc: &mut PauliStrings, coeff: C64, factors: &[(usize, [C64; 4])]) {
    let mut partial: Vec<(Vec<(usize, Axis)>, C64)> = vec![(Vec::new(), coeff)];
    for (site, k) in factors {
        let mut next = Vec::with_capacity(partial.len() * 4);
        for (key, v) in &partial {
            if k[0] != ZERO {
                next.push((key.clone(), v * k[0]));
            }
            for a in Axis::ALL {
                let w = k[1 + a.index()];
                if w != ZERO {
                    let mut kk = key.clone();
                    kk.push((*site, a));
                    next.push((kk, v * w));
                }
            }
        }
        partial = next;
    }
    for (mut key, v) in partial {
        key.sort_unstable();
        *acc.entry(key).or_insert(ZERO) += v;
    }
}

/// Leading-order model on the doublets: every factor is projected site by
/// site. The field's own energy `lambda * low_energy * N` is a constant
/// reference and is not included.
pub fn effective_qubit_model(model: &IsingModel) -> Result<QubitModel> {
    let doublet = model.field.doublet()?;
    let mut acc = PauliStrings::new();
    if model.constant != 0.0 {
        acc.insert(Vec::new(), c(model.constant, 0.0));
    }
    for t in &model.diag_terms {
        let mut projected = Vec::with_capacity(t.factors.len());
        for (site, op) in &t.factors {
            projected.push((*site, pauli_decompose(&doublet.basis.project(&op.entries)?)));
        }
        push_projected(&mut acc, t.coeff, &projected);
    }
    for o in &model.onsite {
        let k = pauli_decompose(&doublet.basis.project(&o.op.entries)?);
        push_projected(&mut acc, c(o.coeff, 0.0), &[(o.site, k)]);
    }
    let scale = acc.values().fold(0.0f64, |a, v| a.max(v.norm()));
    Ok(QubitModel::from_strings(model.lattice.clone(), &acc, 1e-15 * scale.max(1.0)))
}
