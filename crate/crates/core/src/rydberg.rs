//! Couplings for a qutrit {ground, nS, n~S} with diagonal van der Waals
//! pair energies, and the spin-1/2 model they become under a strong field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, C64, ZERO};
use crate::model::{DiagTerm, IsingModel, Lattice, PauliOp, PauliTerm, QubitModel};
use crate::qudit::{make_fixed_matrix, omega, FixedMatrix, QuditOperator};
use crate::transmute::{project_operator, EffectiveCouplings, FieldSpec};

/// C6 inputs in GHz um^6 with the separation in um.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C6Triple {
    #[serde(rename = "C6_nn")]
    pub c6_nn: f64,
    #[serde(rename = "C6_tt")]
    pub c6_tt: f64,
    #[serde(rename = "C6_nt")]
    pub c6_nt: f64,
    #[serde(rename = "R_um")]
    pub r_um: f64,
}

/// Diagonal pair energies (GHz) of two atoms in the two Rydberg levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEnergies {
    pub u_nn: f64,
    pub u_tt: f64,
    pub u_nt: f64,
    pub provenance: Option<C6Triple>,
}

impl PairEnergies {
    pub fn new(u_nn: f64, u_tt: f64, u_nt: f64) -> Result<Self> {
        if ![u_nn, u_tt, u_nt].iter().all(|u| u.is_finite()) {
            return Err(Error::OutOfRange("pair energies must be finite".into()));
        }
        Ok(Self { u_nn, u_tt, u_nt, provenance: None })
    }

    /// `U = -C6 / R^6`; positive C6 is attractive.
    pub fn from_c6(t: C6Triple) -> Result<Self> {
        if !(t.r_um > 0.0) || !t.r_um.is_finite() {
            return Err(Error::OutOfRange(format!("separation must be positive, got {}", t.r_um)));
        }
        let r6 = t.r_um.powi(6);
        let mut pe = Self::new(-t.c6_nn / r6, -t.c6_tt / r6, -t.c6_nt / r6)?;
        pe.provenance = Some(t);
        Ok(pe)
    }
}

/// Input accepted on the command line or in files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairInput {
    C6(C6Triple),
    Energies {
        #[serde(rename = "U_nn")]
        u_nn: f64,
        #[serde(rename = "U_tt")]
        u_tt: f64,
        #[serde(rename = "U_nt")]
        u_nt: f64,
    },
}

impl PairInput {
    pub fn energies(self) -> Result<PairEnergies> {
        match self {
            PairInput::C6(t) => PairEnergies::from_c6(t),
            PairInput::Energies { u_nn, u_tt, u_nt } => PairEnergies::new(u_nn, u_tt, u_nt),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinCouplings {
    #[serde(rename = "J_pm")]
    pub j_pm: f64,
    #[serde(rename = "J_pp")]
    pub j_pp: f64,
    /// `arg(w U_nn + conj(w) U_tt + 2 U_nt)` in (-pi, pi].
    pub phase: f64,
}

impl SpinCouplings {
    /// `|J_pm| / J_pp`; infinite when `J_pp` vanishes.
    pub fn ratio(&self) -> f64 {
        if self.j_pp == 0.0 {
            f64::INFINITY
        } else {
            self.j_pm.abs() / self.j_pp
        }
    }

    /// Clock phase that makes the pair-creation amplitude real and positive.
    pub fn clock_phi(&self) -> f64 {
        self.phase / 2.0
    }
}

fn pair_amplitude(pe: &PairEnergies) -> C64 {
    let w = omega();
    w * pe.u_nn + w.conj() * pe.u_tt + c(2.0 * pe.u_nt, 0.0)
}

pub fn couplings(pe: &PairEnergies) -> SpinCouplings {
    let z = pair_amplitude(pe);
    let mut phase = z.arg();
    if phase <= -std::f64::consts::PI {
        phase += std::f64::consts::TAU;
    }
    // A pair amplitude at the rounding level of the inputs is zero.
    let scale = pe.u_nn.abs().max(pe.u_tt.abs()).max(pe.u_nt.abs());
    let (j_pp, phase) = if z.norm() <= 8.0 * f64::EPSILON * scale { (0.0, 0.0) } else { (z.norm() / 9.0, phase) };
    SpinCouplings { j_pm: (pe.u_nn + pe.u_tt - pe.u_nt) / 9.0, j_pp, phase }
}

/// `sum_bonds w (J_pm s+ s- + J_pp s+ s+) + h.c.`
pub fn effective_spin_model(pe: &PairEnergies, lattice: &Lattice) -> Result<QubitModel> {
    let k = couplings(pe);
    let mut terms = Vec::new();
    for b in &lattice.bonds {
        let (jpm, jpp) = (k.j_pm * b.weight, k.j_pp * b.weight);
        if jpm != 0.0 {
            terms.push(PauliTerm::real(jpm, &[(b.i, PauliOp::Plus), (b.j, PauliOp::Minus)]));
            terms.push(PauliTerm::real(jpm, &[(b.i, PauliOp::Minus), (b.j, PauliOp::Plus)]));
        }
        if jpp != 0.0 {
            terms.push(PauliTerm::real(jpp, &[(b.i, PauliOp::Plus), (b.j, PauliOp::Plus)]));
            terms.push(PauliTerm::real(jpp, &[(b.i, PauliOp::Minus), (b.j, PauliOp::Minus)]));
        }
    }
    QubitModel::new(lattice.clone(), terms)
}

/// Bare qutrit model: `U_ab` whenever two bonded atoms sit in Rydberg
/// levels a and b, plus `lambda (X + X^dag)` with the clock phase chosen by
/// [`SpinCouplings::clock_phi`].
pub fn qutrit_model(pe: &PairEnergies, lattice: &Lattice, lambda: f64) -> Result<IsingModel> {
    let proj = |k: usize| {
        let mut d = vec![ZERO; 3];
        d[k] = c(1.0, 0.0);
        QuditOperator::diagonal(&d)
    };
    let mut diag_terms = Vec::new();
    for b in &lattice.bonds {
        for (x, y, u) in [(1, 1, pe.u_nn), (2, 2, pe.u_tt), (1, 2, pe.u_nt), (2, 1, pe.u_nt)] {
            if u != 0.0 {
                diag_terms.push(DiagTerm { coeff: c(u * b.weight, 0.0), factors: vec![(b.i, proj(x)), (b.j, proj(y))] });
            }
        }
    }
    let field = FieldSpec::three_state_sym(couplings(pe).clock_phi());
    let m = IsingModel { lattice: lattice.clone(), site_dim: 3, diag_terms, onsite: Vec::new(), constant: 0.0, field, lambda: Some(lambda) };
    m.validate()?;
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InteractionKind {
    /// Clock operator projects to a raising operator.
    XY,
    /// Clock operator projects to a diagonal operator.
    Ising,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaAnalysis {
    pub theta: f64,
    pub field: FieldSpec,
    /// Image of the clock operator on the low doublet.
    pub clock_image: EffectiveCouplings,
    /// `|c x conj(c)| / |c|^2` of the vector part: 1 for a raising
    /// operator, 0 when it is proportional to a real axis.
    pub circularity: f64,
    pub kind: InteractionKind,
}

const KIND_TOL: f64 = 1e-9;

/// Project the clock operator through the low doublet of the tunable
/// three-level field and classify the resulting bond interaction.
pub fn theta_field_analysis(theta: f64) -> Result<ThetaAnalysis> {
    let field = FieldSpec::theta(theta)?;
    let clock = make_fixed_matrix(FixedMatrix::Z3, 0.0);
    let image = project_operator(&field, &clock).map_err(|e| match e {
        Error::Degeneracy(m) => Error::Degeneracy(format!("theta = {theta}: {m}")),
        other => other,
    })?;
    let v = image.vector();
    let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let circularity = if norm2 == 0.0 {
        0.0
    } else {
        let cross = [v[1] * v[2].conj() - v[2] * v[1].conj(), v[2] * v[0].conj() - v[0] * v[2].conj(), v[0] * v[1].conj() - v[1] * v[0].conj()];
        cross.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / norm2
    };
    let kind = if circularity >= 1.0 - KIND_TOL && image.identity_part().norm() <= KIND_TOL {
        InteractionKind::XY
    } else if circularity <= KIND_TOL {
        InteractionKind::Ising
    } else {
        InteractionKind::Mixed
    };
    Ok(ThetaAnalysis { theta, field, clock_image: image, circularity, kind })
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct C6Case {
    pub name: String,
    pub atom: String,
    pub n: u32,
    pub n_tilde: u32,
    pub sigma: i32,
    /// Angle between the quantization axis and the interatomic vector.
    pub angle: f64,
    #[serde(rename = "C6_nn")]
    pub c6_nn: f64,
    #[serde(rename = "C6_tt")]
    pub c6_tt: f64,
    #[serde(rename = "C6_nt")]
    pub c6_nt: f64,
}

impl C6Case {
    pub fn at(&self, r_um: f64) -> C6Triple {
        C6Triple { c6_nn: self.c6_nn, c6_tt: self.c6_tt, c6_nt: self.c6_nt, r_um }
    }
}

#[derive(Debug, Deserialize)]
struct C6Data {
    cases: Vec<C6Case>,
}

pub const C6_DATA: &str = include_str!("../data/c6_cases.json");

/// Bundled C6 values for the atom choices discussed with this construction.
pub fn c6_cases() -> Vec<C6Case> {
    serde_json::from_str::<C6Data>(C6_DATA).expect("bundled C6 data parses").cases
}

pub fn c6_case(name: &str) -> Result<C6Case> {
    c6_cases().into_iter().find(|c| c.name == name).ok_or_else(|| Error::OutOfRange(format!("no bundled C6 case `{name}`")))
}
