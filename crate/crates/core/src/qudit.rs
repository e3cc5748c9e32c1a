//! Fixed single-site matrices and small operator-algebra checks.
//!
//! Every matrix is built from exact literals; the only trigonometry is the
//! phase `e^{i phi}` where a definition carries one, plus the real
//! parameters of the `X(q)`, tilde-X and theta families.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, cis, conj, identity, kron, mat, max_abs, real_mat, CMat, C64, I, ONE, ZERO};

/// Dense single-site operator.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditOperator {
    pub entries: CMat,
}

impl QuditOperator {
    pub fn new(entries: CMat) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch { left: entries.nrows(), right: entries.ncols() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::OutOfRange("matrix has non-finite entries".into()));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: identity(dim) }
    }

    pub fn diagonal(values: &[C64]) -> Self {
        Self { entries: CMat::from_diagonal(&nalgebra::DVector::from_column_slice(values)) }
    }

    pub fn dagger(&self) -> Self {
        Self { entries: self.entries.adjoint() }
    }

    pub fn conj(&self) -> Self {
        Self { entries: conj(&self.entries) }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        max_abs(&(&self.entries - self.entries.adjoint())) <= tol
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.entries[(i, j)] == ZERO))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        max_abs(&(self.entries.adjoint() * &self.entries - identity(self.dim()))) <= tol
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self { entries: &self.entries * &other.entries })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { entries: &self.entries * s }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self { entries: &self.entries + &other.entries })
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { entries: kron(&self.entries, &other.entries) }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = identity(self.dim());
        for _ in 0..k {
            out = &out * &self.entries;
        }
        Self { entries: out }
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a, right: b })
    }
}

/// Identifiers of the catalogued fixed matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedMatrix {
    /// 4-state clock matrix diag(1, i, -1, -i).
    Z4,
    /// 4-state complex field.
    X4,
    /// Diagonal x-type operator built from Z4 and the phase.
    Zx,
    Zy,
    Zz,
    /// 3-state clock matrix e^{i phi} diag(1, w, w-bar).
    Z3,
    /// 3-state cyclic shift.
    X3,
    Ux,
    Uy,
    Uz,
    /// Unitary parts of the transposition symmetries.
    S12,
    S13,
    S14,
    S23,
    S24,
    S34,
    U123,
    U12_34,
    U13_24,
    U14_23,
    /// Majorana pairing operators i c^a c^b.
    IcXY,
    IcYZ,
    IcZX,
    Nx,
    Ny,
    Nz,
    /// Unitary part of the anti-unitary symmetry of the real-coupling case.
    T,
}

impl FixedMatrix {
    pub const ALL: [FixedMatrix; 27] = [
        FixedMatrix::Z4,
        FixedMatrix::X4,
        FixedMatrix::Zx,
        FixedMatrix::Zy,
        FixedMatrix::Zz,
        FixedMatrix::Z3,
        FixedMatrix::X3,
        FixedMatrix::Ux,
        FixedMatrix::Uy,
        FixedMatrix::Uz,
        FixedMatrix::S12,
        FixedMatrix::S13,
        FixedMatrix::S14,
        FixedMatrix::S23,
        FixedMatrix::S24,
        FixedMatrix::S34,
        FixedMatrix::U123,
        FixedMatrix::U12_34,
        FixedMatrix::U13_24,
        FixedMatrix::U14_23,
        FixedMatrix::IcXY,
        FixedMatrix::IcYZ,
        FixedMatrix::IcZX,
        FixedMatrix::Nx,
        FixedMatrix::Ny,
        FixedMatrix::Nz,
        FixedMatrix::T,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixedMatrix::Z4 => "Z4",
            FixedMatrix::X4 => "X4",
            FixedMatrix::Zx => "Zx",
            FixedMatrix::Zy => "Zy",
            FixedMatrix::Zz => "Zz",
            FixedMatrix::Z3 => "Z3",
            FixedMatrix::X3 => "X3",
            FixedMatrix::Ux => "Ux",
            FixedMatrix::Uy => "Uy",
            FixedMatrix::Uz => "Uz",
            FixedMatrix::S12 => "S12",
            FixedMatrix::S13 => "S13",
            FixedMatrix::S14 => "S14",
            FixedMatrix::S23 => "S23",
            FixedMatrix::S24 => "S24",
            FixedMatrix::S34 => "S34",
            FixedMatrix::U123 => "U123",
            FixedMatrix::U12_34 => "U12_34",
            FixedMatrix::U13_24 => "U13_24",
            FixedMatrix::U14_23 => "U14_23",
            FixedMatrix::IcXY => "icxy",
            FixedMatrix::IcYZ => "icyz",
            FixedMatrix::IcZX => "iczx",
            FixedMatrix::Nx => "nx",
            FixedMatrix::Ny => "ny",
            FixedMatrix::Nz => "nz",
            FixedMatrix::T => "T",
        }
    }

    /// Whether the matrix depends on the phase argument.
    pub fn uses_phi(self) -> bool {
        matches!(self, FixedMatrix::Zx | FixedMatrix::Zy | FixedMatrix::Z3)
    }
}

impl fmt::Display for FixedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixedMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim();
        Self::ALL.iter().copied().find(|m| m.name().eq_ignore_ascii_case(key)).ok_or_else(|| Error::UnknownMatrix(s.to_string()))
    }
}

/// Primitive cube root of unity e^{2 pi i / 3}.
pub fn omega() -> C64 {
    c(-0.5, 3f64.sqrt() / 2.0)
}

fn z4() -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_column_slice(&[ONE, I, -ONE, -I]))
}

fn x4() -> CMat {
    mat(
        4,
        &[
            ZERO, ONE, ONE, ONE, //
            ONE, ZERO, -I, I, //
            ONE, I, ZERO, -I, //
            ONE, -I, I, ZERO,
        ],
    )
}

fn transposition(name: FixedMatrix) -> CMat {
    let m1 = -ONE;
    match name {
        FixedMatrix::S12 => mat(4, &[ZERO, -I, ZERO, ZERO, -I, ZERO, ZERO, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, m1]),
        FixedMatrix::S13 => mat(4, &[ZERO, ZERO, -I, ZERO, ZERO, m1, ZERO, ZERO, -I, ZERO, ZERO, ZERO, ZERO, ZERO, ZERO, ONE]),
        FixedMatrix::S14 => mat(4, &[ZERO, ZERO, ZERO, -I, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, m1, ZERO, -I, ZERO, ZERO, ZERO]),
        FixedMatrix::S23 => real_mat(4, &[1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.]),
        FixedMatrix::S24 => real_mat(4, &[1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 1., 0., 0.]),
        FixedMatrix::S34 => real_mat(4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.]),
        _ => unreachable!("not a transposition"),
    }
}

/// Build a catalogued matrix. `phi` is ignored by phase-free entries.
pub fn make_fixed_matrix(name: FixedMatrix, phi: f64) -> QuditOperator {
    let e = cis(phi);
    let entries = match name {
        FixedMatrix::Z4 => z4(),
        FixedMatrix::X4 => x4(),
        FixedMatrix::Zx => {
            let z = z4();
            (&z * e + z.adjoint() * e.conj()) * c(FRAC_1_SQRT_2, 0.0)
        }
        FixedMatrix::Zy => {
            let z = z4();
            (&z * e - z.adjoint() * e.conj()) * (c(FRAC_1_SQRT_2, 0.0) / I)
        }
        FixedMatrix::Zz => {
            let z = z4();
            &z * &z
        }
        FixedMatrix::Z3 => {
            let w = omega();
            CMat::from_diagonal(&nalgebra::DVector::from_column_slice(&[e, e * w, e * w.conj()]))
        }
        FixedMatrix::X3 => real_mat(3, &[0., 1., 0., 0., 0., 1., 1., 0., 0.]),
        FixedMatrix::Ux => mat(4, &[ZERO, ZERO, ZERO, ONE, ZERO, ZERO, I, ZERO, ZERO, -I, ZERO, ZERO, ONE, ZERO, ZERO, ZERO]),
        FixedMatrix::Uy => mat(4, &[ZERO, ONE, ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, ZERO, ZERO, I, ZERO, ZERO, -I, ZERO]),
        FixedMatrix::Uz => mat(4, &[ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, -I, ONE, ZERO, ZERO, ZERO, ZERO, I, ZERO, ZERO]),
        FixedMatrix::S12 | FixedMatrix::S13 | FixedMatrix::S14 | FixedMatrix::S23 | FixedMatrix::S24 | FixedMatrix::S34 => transposition(name),
        FixedMatrix::U123 => transposition(FixedMatrix::S12) * conj(&transposition(FixedMatrix::S23)),
        FixedMatrix::U12_34 => transposition(FixedMatrix::S12) * conj(&transposition(FixedMatrix::S34)),
        FixedMatrix::U13_24 => transposition(FixedMatrix::S13) * conj(&transposition(FixedMatrix::S24)),
        FixedMatrix::U14_23 => transposition(FixedMatrix::S14) * conj(&transposition(FixedMatrix::S23)),
        FixedMatrix::IcXY => real_mat(4, &[0., 0., 1., 0., 0., 0., 0., 1., 1., 0., 0., 0., 0., 1., 0., 0.]),
        FixedMatrix::IcYZ => real_mat(4, &[0., 0., 0., 1., 0., 0., -1., 0., 0., -1., 0., 0., 1., 0., 0., 0.]),
        FixedMatrix::IcZX => mat(4, &[ZERO, -I, ZERO, ZERO, I, ZERO, ZERO, ZERO, ZERO, ZERO, ZERO, I, ZERO, ZERO, -I, ZERO]),
        FixedMatrix::Nx => density(1),
        FixedMatrix::Ny => density(2),
        FixedMatrix::Nz => density(3),
        FixedMatrix::T => real_mat(4, &[1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 1., 0., 0.]),
    };
    QuditOperator { entries }
}

/// Parse-and-build convenience for textual identifiers.
pub fn make_fixed_matrix_by_name(name: &str, phi: f64) -> Result<QuditOperator> {
    Ok(make_fixed_matrix(name.parse()?, phi))
}

fn density(level: usize) -> CMat {
    let mut m = CMat::zeros(4, 4);
    m[(level, level)] = ONE;
    m
}

/// The one-parameter family of 4-state fields, defined for q^2 < 1/3.
pub fn x_of_q(q: f64) -> Result<QuditOperator> {
    if !(q.is_finite() && 3.0 * q * q < 1.0) {
        return Err(Error::OutOfRange(format!("q = {q} needs q^2 < 1/3")));
    }
    let r = c((1.0 - 3.0 * q * q).sqrt(), 0.0);
    let d = c(q, 0.0);
    let entries = mat(
        4,
        &[
            c(-3.0 * q, 0.0),
            r,
            r,
            r, //
            r,
            d,
            d - I,
            d + I, //
            r,
            d + I,
            d,
            d - I, //
            r,
            d - I,
            d + I,
            d,
        ],
    );
    Ok(QuditOperator { entries })
}

/// The special field direction whose `X(q)` image sits at q = 2 - sqrt(3).
pub fn tilde_x() -> QuditOperator {
    let a = c((1.0 + 3f64.sqrt()).sqrt(), 0.0);
    let b = C64::from_polar((2.0 + 3f64.sqrt()).sqrt(), 5.0 * PI / 12.0);
    let two = c(2.0, 0.0);
    let entries = mat(
        4,
        &[
            ZERO,
            a,
            a,
            a, //
            a,
            two,
            b.conj(),
            b, //
            a,
            b,
            two,
            b.conj(), //
            a,
            b.conj(),
            b,
            two,
        ],
    );
    QuditOperator { entries }
}

/// The tunable 3-state field interpolating between X + X^dag and a field
/// that freezes out the last level.
pub fn theta_field(theta: f64) -> QuditOperator {
    let (s, co) = theta.sin_cos();
    let entries = real_mat(
        3,
        &[
            -s * s,
            co * co,
            co, //
            co * co,
            -s * s,
            co, //
            co,
            co,
            0.0,
        ],
    );
    QuditOperator { entries }
}

/// Unitary operator optionally followed by complex conjugation.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiUnitaryOp {
    pub unitary_part: QuditOperator,
    pub conjugates: bool,
}

impl AntiUnitaryOp {
    pub fn new(unitary_part: QuditOperator, conjugates: bool) -> Result<Self> {
        let residual = max_abs(&(unitary_part.entries.adjoint() * &unitary_part.entries - identity(unitary_part.dim())));
        if residual > 1e-14 {
            return Err(Error::OutOfRange(format!("not unitary (residual {residual:.3e})")));
        }
        Ok(Self { unitary_part, conjugates })
    }

    pub fn unitary(u: QuditOperator) -> Result<Self> {
        Self::new(u, false)
    }

    /// Transposition symmetry `U_ij K`.
    pub fn transposition(name: FixedMatrix) -> Result<Self> {
        match name {
            FixedMatrix::S12 | FixedMatrix::S13 | FixedMatrix::S14 | FixedMatrix::S23 | FixedMatrix::S24 | FixedMatrix::S34 | FixedMatrix::T => {
                Self::new(make_fixed_matrix(name, 0.0), true)
            }
            other => Err(Error::UnknownMatrix(format!("{other} is not an anti-unitary generator"))),
        }
    }

    /// (U1 K^a)(U2 K^b) = U1 (U2 or U2*) K^(a xor b).
    pub fn compose(&self, right: &Self) -> Result<Self> {
        let r = if self.conjugates { right.unitary_part.conj() } else { right.unitary_part.clone() };
        Ok(Self { unitary_part: self.unitary_part.mul(&r)?, conjugates: self.conjugates ^ right.conjugates })
    }

    /// Image of an operator under conjugation by this symmetry.
    pub fn act(&self, target: &QuditOperator) -> Result<QuditOperator> {
        same_dim(self.unitary_part.dim(), target.dim())?;
        let t = if self.conjugates { conj(&target.entries) } else { target.entries.clone() };
        let u = &self.unitary_part.entries;
        Ok(QuditOperator { entries: u * t * u.adjoint() })
    }
}

/// `max |U A U^dag - A|`, with `A` conjugated first for anti-unitary symmetries.
pub fn check_symmetry(sym: &AntiUnitaryOp, target: &QuditOperator) -> Result<f64> {
    let image = sym.act(target)?;
    Ok(max_abs(&(image.entries - &target.entries)))
}

/// The scalar `c` with `a b a^dag b^dag = c 1`.
pub fn projective_phase(a: &QuditOperator, b: &QuditOperator) -> Result<C64> {
    same_dim(a.dim(), b.dim())?;
    let m = &a.entries * &b.entries * a.entries.adjoint() * b.entries.adjoint();
    let scalar = m.trace() / c(a.dim() as f64, 0.0);
    let deviation = max_abs(&(&m - identity(a.dim()) * scalar));
    if deviation > 1e-10 {
        return Err(Error::NotProjective(deviation));
    }
    Ok(scalar)
}

/// Largest defect of the Pauli relations `[s_a, s_b] = 2i eps s_c` and `s_a^2 = 1`.
pub fn pauli_algebra_residual(sx: &QuditOperator, sy: &QuditOperator, sz: &QuditOperator) -> Result<f64> {
    same_dim(sx.dim(), sy.dim())?;
    same_dim(sx.dim(), sz.dim())?;
    let one = identity(sx.dim());
    let s = [&sx.entries, &sy.entries, &sz.entries];
    let mut worst: f64 = 0.0;
    for (a, b, g) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let comm = s[a] * s[b] - s[b] * s[a];
        worst = worst.max(max_abs(&(comm - s[g] * c(0.0, 2.0))));
    }
    for m in s {
        worst = worst.max(max_abs(&(m * m - &one)));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigvalsh, paulis};
    use std::f64::consts::FRAC_PI_4;

    fn fm(name: FixedMatrix) -> QuditOperator {
        make_fixed_matrix(name, 0.0)
    }

    #[test]
    fn x4_printed_entries() {
        let x = fm(FixedMatrix::X4);
        for j in 0..4 {
            assert_eq!(x.entries[(0, j)], if j == 0 { ZERO } else { ONE });
        }
        assert_eq!(x.entries[(1, 2)], -I);
        assert!(x.is_hermitian(1e-14));
    }

    #[test]
    fn zz_is_z_squared_for_any_phase() {
        for phi in [0.0, FRAC_PI_4, 1.3] {
            let zz = make_fixed_matrix(FixedMatrix::Zz, phi);
            assert!(zz.is_diagonal());
            let diag: Vec<f64> = (0..4).map(|k| zz.entries[(k, k)].re).collect();
            assert_eq!(diag, vec![1.0, -1.0, 1.0, -1.0]);
        }
    }

    #[test]
    fn z3_at_zero_phase() {
        let z = fm(FixedMatrix::Z3);
        let w = omega();
        assert!((z.entries[(1, 1)] - w).norm() < 1e-15);
        assert!((z.entries[(2, 2)] - w.conj()).norm() < 1e-15);
        assert!((w * w * w - ONE).norm() < 1e-15);
    }

    #[test]
    fn unknown_identifier_is_rejected() {
        assert!(matches!("Q7".parse::<FixedMatrix>(), Err(Error::UnknownMatrix(_))));
        assert_eq!("icxy".parse::<FixedMatrix>().unwrap(), FixedMatrix::IcXY);
    }

    #[test]
    fn field_spectrum() {
        let w = eigvalsh(&fm(FixedMatrix::X4).entries);
        let s = 3f64.sqrt();
        for (got, want) in w.iter().zip([-s, -s, s, s]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_ops_from_u_products() {
        // Z^a of the phi = pi/4 family equals U^a (U^a)^*.
        for (u, z) in [(FixedMatrix::Ux, FixedMatrix::Zx), (FixedMatrix::Uy, FixedMatrix::Zy), (FixedMatrix::Uz, FixedMatrix::Zz)] {
            let uu = fm(u);
            let prod = &uu.entries * conj(&uu.entries);
            let zm = make_fixed_matrix(z, FRAC_PI_4);
            assert!(max_abs(&(prod - zm.entries)) < 1e-15, "{u}");
        }
    }

    #[test]
    fn field_is_sum_of_conjugated_u() {
        let s = conj(&fm(FixedMatrix::Ux).entries) + conj(&fm(FixedMatrix::Uy).entries) + conj(&fm(FixedMatrix::Uz).entries);
        assert_eq!(s, fm(FixedMatrix::X4).entries);
    }

    #[test]
    fn u_matrices_anticommute() {
        let (uy, uz) = (fm(FixedMatrix::Uy), fm(FixedMatrix::Uz));
        let anti = &uy.entries * &uz.entries + &uz.entries * &uy.entries;
        assert!(max_abs(&anti) < 1e-15);
        let phase = projective_phase(&uy, &uz).unwrap();
        assert!((phase + ONE).norm() < 1e-14);
    }

    #[test]
    fn transpositions_preserve_field() {
        let x = fm(FixedMatrix::X4);
        for name in [FixedMatrix::S12, FixedMatrix::S13, FixedMatrix::S14, FixedMatrix::S23, FixedMatrix::S24, FixedMatrix::S34] {
            let s = AntiUnitaryOp::transposition(name).unwrap();
            assert!(check_symmetry(&s, &x).unwrap() <= 1e-14, "{name}");
        }
    }

    #[test]
    fn even_permutations_are_unitary_and_preserve_field() {
        let x = fm(FixedMatrix::X4);
        let s12 = AntiUnitaryOp::transposition(FixedMatrix::S12).unwrap();
        let s23 = AntiUnitaryOp::transposition(FixedMatrix::S23).unwrap();
        let composed = s12.compose(&s23).unwrap();
        assert!(!composed.conjugates);
        assert_eq!(composed.unitary_part, fm(FixedMatrix::U123));
        for name in [FixedMatrix::U123, FixedMatrix::U12_34, FixedMatrix::U13_24, FixedMatrix::U14_23] {
            let u = AntiUnitaryOp::unitary(fm(name)).unwrap();
            assert!(check_symmetry(&u, &x).unwrap() <= 1e-14, "{name}");
        }
    }

    #[test]
    fn u123_printed_form() {
        let m1 = -ONE;
        let printed = mat(4, &[ZERO, ZERO, -I, ZERO, -I, ZERO, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, ZERO, m1]);
        assert_eq!(fm(FixedMatrix::U123).entries, printed);
    }

    #[test]
    fn pair_permutations_relate_to_u() {
        // U^a = i U_(pair) for all three axes.
        for (u, pair) in [(FixedMatrix::Ux, FixedMatrix::U14_23), (FixedMatrix::Uy, FixedMatrix::U12_34), (FixedMatrix::Uz, FixedMatrix::U13_24)] {
            assert!(max_abs(&(fm(u).entries - fm(pair).entries * I)) < 1e-15, "{u}");
        }
    }

    #[test]
    fn klein_pair_is_projective() {
        let phase = projective_phase(&fm(FixedMatrix::U12_34), &fm(FixedMatrix::U13_24)).unwrap();
        assert!((phase + ONE).norm() < 1e-14);
    }

    #[test]
    fn commuting_global_flips_have_trivial_phase() {
        let p = paulis();
        let xx = QuditOperator { entries: kron(&p[1], &p[1]) };
        let zz = QuditOperator { entries: kron(&p[3], &p[3]) };
        let phase = projective_phase(&xx, &zz).unwrap();
        assert!((phase - ONE).norm() < 1e-15);
    }

    #[test]
    fn non_projective_pair_errors() {
        let p = paulis();
        let a = QuditOperator { entries: kron(&p[1], &identity(2)) };
        let b = QuditOperator { entries: kron(&p[3], &p[3]) + kron(&identity(2), &p[1]) };
        assert!(matches!(projective_phase(&a, &b), Err(Error::NotProjective(_))));
    }

    #[test]
    fn time_reversal_commutes_at_zero_phase() {
        let t = AntiUnitaryOp::transposition(FixedMatrix::T).unwrap();
        assert_eq!(check_symmetry(&t, &fm(FixedMatrix::Z4)).unwrap(), 0.0);
        assert_eq!(check_symmetry(&t, &fm(FixedMatrix::X4)).unwrap(), 0.0);
    }

    #[test]
    fn majorana_pairings_give_minus_field() {
        let sum = fm(FixedMatrix::IcXY).entries + fm(FixedMatrix::IcYZ).entries + fm(FixedMatrix::IcZX).entries;
        let third = fm(FixedMatrix::IcXY).entries * fm(FixedMatrix::IcYZ).entries * I;
        assert_eq!(third, fm(FixedMatrix::IcZX).entries);
        // Rebasing |1,1>, -i|1,-1>, -|-1,1>, -|-1,-1>.
        let w = QuditOperator::diagonal(&[ONE, -I, -ONE, -ONE]).entries;
        let rebased = w.adjoint() * sum * &w;
        assert!(max_abs(&(rebased + fm(FixedMatrix::X4).entries)) < 1e-15);
    }

    #[test]
    fn pauli_residual_cases() {
        let p = paulis();
        let q = |m: &CMat| QuditOperator { entries: m.clone() };
        assert_eq!(pauli_algebra_residual(&q(&p[1]), &q(&p[2]), &q(&p[3])).unwrap(), 0.0);
        assert!(pauli_algebra_residual(&q(&p[1]), &q(&p[2]), &q(&p[1])).unwrap() > 1.0);
        let three = QuditOperator::identity(3);
        assert!(pauli_algebra_residual(&q(&p[1]), &q(&p[2]), &three).is_err());
    }

    #[test]
    fn x_of_q_range() {
        assert!(x_of_q(0.6).is_err());
        assert_eq!(x_of_q(0.0).unwrap().entries, fm(FixedMatrix::X4).entries);
    }

    #[test]
    fn theta_field_endpoints() {
        let f0 = theta_field(0.0);
        let x3 = fm(FixedMatrix::X3);
        assert!(max_abs(&(f0.entries - (&x3.entries + x3.entries.adjoint()))) < 1e-15);
        let f = theta_field(std::f64::consts::FRAC_PI_2);
        assert!(f.entries[(2, 2)].norm() < 1e-15 && f.entries[(0, 2)].norm() < 1e-15);
    }

    #[test]
    fn anti_unitary_requires_unitary() {
        assert!(AntiUnitaryOp::new(QuditOperator::diagonal(&[ONE, c(2.0, 0.0)]), false).is_err());
    }
}
