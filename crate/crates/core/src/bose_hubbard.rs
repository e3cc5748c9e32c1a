//! Bosons on triangles (a centre plus x, y, z corners) arranged on a
//! honeycomb, tuned so that each triangle's low doublet is an effective
//! spin-1/2 with density images `(1 - s^a)/(3 + sqrt 3)`. Two couplings
//! between triangles are covered: a density-density repulsion on corner
//! bonds, and plain hopping with alternating one-boson / three-boson
//! filling, where the density coupling arises at second order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, eigvalsh, CMat, C64};
use crate::model::{sublattice_coloring, Axis, BondLabel, Lattice, PauliOp, PauliTerm, QubitModel};
use crate::qudit::{x_of_q, QuditOperator};
use crate::sparse::CsrMatrix;
use crate::transmute::{project_operator, special_q, EffectiveCouplings, FieldSpec};

const SQRT3: f64 = 1.732_050_807_568_877_2;
/// `3 + sqrt 3`, the inverse weight of a density image.
pub const DENSITY_SCALE: f64 = 3.0 + SQRT3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BhVersion {
    /// One boson per triangle, corner-corner density repulsion `V_a`.
    Interaction,
    /// Hardcore bosons, inter-triangle hopping `t'_a`; up triangles hold
    /// one boson and down triangles three.
    Hopping,
}

impl BhVersion {
    pub fn name(self) -> &'static str {
        match self {
            BhVersion::Interaction => "interaction",
            BhVersion::Hopping => "hopping",
        }
    }
}

impl std::str::FromStr for BhVersion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interaction" => Ok(BhVersion::Interaction),
            "hopping" => Ok(BhVersion::Hopping),
            other => Err(Error::OutOfRange(format!("unknown Bose-Hubbard version `{other}`"))),
        }
    }
}

/// Preset inputs; per-axis arrays are ordered (x, y, z).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetParams {
    pub version: BhVersion,
    pub lambda: f64,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub v: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_prime: Option<[f64; 3]>,
}

pub const INTERACTION_PRESET: &str = include_str!("../presets/bh_interaction.json");
pub const HOPPING_PRESET: &str = include_str!("../presets/bh_hopping.json");

impl PresetParams {
    pub fn interaction(lambda: f64, v: [f64; 3], nu: [f64; 3]) -> Self {
        Self { version: BhVersion::Interaction, lambda, v: Some(v), nu: Some(nu), w: None, t_prime: None }
    }

    pub fn hopping(lambda: f64, w: f64, t_prime: [f64; 3], nu: [f64; 3]) -> Self {
        Self { version: BhVersion::Hopping, lambda, v: None, nu: Some(nu), w: Some(w), t_prime: Some(t_prime) }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema { path: format!("line {} column {}", e.line(), e.column()), message: e.to_string() })
    }

    pub fn bundled(version: BhVersion) -> Self {
        let text = match version {
            BhVersion::Interaction => INTERACTION_PRESET,
            BhVersion::Hopping => HOPPING_PRESET,
        };
        Self::from_json(text).expect("bundled preset parses")
    }

    /// Checks that the fields the version needs are present.
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::OutOfRange(format!("lambda must be finite and >= 0, got {}", self.lambda)));
        }
        match self.version {
            BhVersion::Interaction => {
                self.v.ok_or_else(|| Error::MissingParameter("V".into()))?;
                self.nu.ok_or_else(|| Error::MissingParameter("nu".into()))?;
            }
            BhVersion::Hopping => {
                self.w.ok_or_else(|| Error::MissingParameter("w".into()))?;
                self.t_prime.ok_or_else(|| Error::MissingParameter("t_prime".into()))?;
            }
        }
        Ok(())
    }

    fn nu_or_zero(&self) -> [f64; 3] {
        self.nu.unwrap_or([0.0; 3])
    }
}

/// Centre-corner hopping `2 lambda sqrt(3 sqrt3 - 5)`.
pub fn centre_hopping(lambda: f64) -> f64 {
    2.0 * lambda * (3.0 * SQRT3 - 5.0).sqrt()
}

/// Corner-to-next-corner hopping `lambda (2 - sqrt3 + i)`.
pub fn corner_hopping(lambda: f64) -> C64 {
    c(lambda * special_q(), lambda)
}

/// Single-triangle couplings in site order (c, x, y, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleParams {
    pub t_c: f64,
    pub t: C64,
    pub mu: [f64; 4],
}

impl TriangleParams {
    /// The tuned triangle; `down` conjugates the hopping and flips every
    /// chemical potential. `mu_c` is the centre potential before flipping.
    pub fn tuned(lambda: f64, nu: [f64; 3], mu_c: f64, down: bool) -> Self {
        let corner = |a: usize| mu_c + 4.0 * lambda * special_q() + nu[a];
        let mut mu = [mu_c, corner(0), corner(1), corner(2)];
        let mut t = corner_hopping(lambda);
        if down {
            t = t.conj();
            mu.iter_mut().for_each(|m| *m = -*m);
        }
        Self { t_c: centre_hopping(lambda), t, mu }
    }

    /// One-boson matrix: `t_c` between centre and corners, `t` for a hop
    /// from corner a to corner a+1.
    pub fn matrix(&self) -> CMat {
        let mut h = CMat::zeros(4, 4);
        for a in 1..4 {
            let next = a % 3 + 1;
            h[(a, 0)] = c(self.t_c, 0.0);
            h[(0, a)] = c(self.t_c, 0.0);
            h[(next, a)] += self.t;
            h[(a, next)] += self.t.conj();
        }
        for (s, m) in self.mu.iter().enumerate() {
            h[(s, s)] += c(*m, 0.0);
        }
        h
    }
}

/// Centre potential of the up triangles in the hopping version.
pub fn hopping_centre_potential(lambda: f64, w: f64) -> f64 {
    2.0 * lambda * (2.0 * SQRT3 - 3.0) - w
}

/// Particle statistics. With one particle confined to each triangle no
/// exchange ever occurs, so fermions give the same matrix as bosons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Statistics {
    #[default]
    Boson,
    Fermion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BhModel {
    pub version: BhVersion,
    pub params: PresetParams,
    /// Triangle connectivity with axis-labelled bonds.
    pub triangles: Lattice,
    /// Triangles hosting three bosons (hopping version only).
    pub down: Vec<bool>,
    /// `(i, j, h)` for `h b_i^dag b_j`; closed under Hermitian conjugation.
    pub hoppings: Vec<(usize, usize, C64)>,
    pub mu: Vec<f64>,
    /// `(i, j, V)` density-density couplings.
    pub density_couplings: Vec<(usize, usize, f64)>,
    /// Finite on-site repulsion; `None` means hardcore.
    pub onsite_u: Option<f64>,
    pub statistics: Statistics,
}

/// Site index of corner `corner` (0 = centre, 1..=3 = x, y, z).
pub fn site(triangle: usize, corner: usize) -> usize {
    4 * triangle + corner
}

/// Two triangles joined by one bond of the given axis.
pub fn two_triangles(axis: Axis) -> Result<Lattice> {
    Lattice::custom(2, vec![crate::model::Bond { i: 0, j: 1, label: BondLabel::Axis(axis), weight: 1.0 }])
}

/// Every bond carries an axis label and each corner joins at most one bond.
fn check_corner_bonds(triangles: &Lattice) -> Result<()> {
    let mut used = vec![[false; 3]; triangles.nsites];
    for b in &triangles.bonds {
        let BondLabel::Axis(axis) = b.label else {
            return Err(Error::LabelMismatch("triangle bonds need axis labels".into()));
        };
        for s in [b.i, b.j] {
            if std::mem::replace(&mut used[s][axis.index()], true) {
                return Err(Error::LabelMismatch(format!("triangle {s} has two {}-bonds", axis.name())));
            }
        }
    }
    Ok(())
}

pub fn build_preset(triangles: &Lattice, params: &PresetParams) -> Result<BhModel> {
    build_preset_with(triangles, params, Statistics::Boson)
}

pub fn build_preset_with(triangles: &Lattice, params: &PresetParams, statistics: Statistics) -> Result<BhModel> {
    params.validate()?;
    check_corner_bonds(triangles)?;
    let lambda = params.lambda;
    let nu = params.nu_or_zero();
    let n = triangles.nsites;
    let down = match params.version {
        BhVersion::Interaction => vec![false; n],
        BhVersion::Hopping => {
            if statistics == Statistics::Fermion {
                return Err(Error::OutOfRange("fermion signs are not modelled with three particles per triangle".into()));
            }
            sublattice_coloring(triangles).ok_or_else(|| Error::Lattice("hopping version needs a bipartite triangle graph".into()))?
        }
    };
    let mut hoppings = Vec::new();
    let mut mu = vec![0.0; 4 * n];
    for tri in 0..n {
        let mu_c = match params.version {
            BhVersion::Interaction => 0.0,
            BhVersion::Hopping => hopping_centre_potential(lambda, params.w.unwrap()),
        };
        let tp = TriangleParams::tuned(lambda, nu, mu_c, down[tri]);
        let m = tp.matrix();
        for a in 0..4 {
            mu[site(tri, a)] = m[(a, a)].re;
            for b in 0..4 {
                if a != b && m[(a, b)] != c(0.0, 0.0) {
                    hoppings.push((site(tri, a), site(tri, b), m[(a, b)]));
                }
            }
        }
    }
    let mut density_couplings = Vec::new();
    for b in &triangles.bonds {
        let BondLabel::Axis(axis) = b.label else {
            return Err(Error::LabelMismatch("triangle bonds need axis labels".into()));
        };
        let corner = 1 + axis.index();
        let (i, j) = (site(b.i, corner), site(b.j, corner));
        match params.version {
            BhVersion::Interaction => density_couplings.push((i, j, params.v.unwrap()[axis.index()] * b.weight)),
            BhVersion::Hopping => {
                let tp = params.t_prime.unwrap()[axis.index()] * b.weight;
                hoppings.push((i, j, c(tp, 0.0)));
                hoppings.push((j, i, c(tp, 0.0)));
            }
        }
    }
    Ok(BhModel {
        version: params.version,
        params: params.clone(),
        triangles: triangles.clone(),
        down,
        hoppings,
        mu,
        density_couplings,
        onsite_u: None,
        statistics,
    })
}

/// Occupation basis of a boson-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    pub nsites: usize,
    /// Bitmasks, ascending; bit s is the occupation of site s.
    pub states: Vec<u64>,
}

impl FockBasis {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index(&self, state: u64) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }
}

const MAX_FOCK_SITES: usize = 24;

impl BhModel {
    pub fn nsites(&self) -> usize {
        self.mu.len()
    }

    /// Interaction version: one boson on every triangle. Hopping version:
    /// total number `sum_up 1 + sum_down 3`, with intermediate
    /// configurations of other per-triangle fillings included.
    pub fn sector(&self) -> Result<FockBasis> {
        let ns = self.nsites();
        if ns > MAX_FOCK_SITES {
            return Err(Error::DimensionCap { dim: ns, cap: MAX_FOCK_SITES });
        }
        let ntri = ns / 4;
        let per_triangle = |s: u64, t: usize| ((s >> (4 * t)) & 0xf).count_ones() as usize;
        let states: Vec<u64> = match self.version {
            BhVersion::Interaction => (0u64..1 << ns).filter(|&s| (0..ntri).all(|t| per_triangle(s, t) == 1)).collect(),
            BhVersion::Hopping => {
                let total: u32 = self.down.iter().map(|&d| if d { 3 } else { 1 }).sum();
                (0u64..1 << ns).filter(|s| s.count_ones() == total).collect()
            }
        };
        Ok(FockBasis { nsites: ns, states })
    }

    pub fn hamiltonian(&self, basis: &FockBasis) -> CsrMatrix {
        let mut triplets = Vec::new();
        for (col, &s) in basis.states.iter().enumerate() {
            let occ = |k: usize| (s >> k) & 1 == 1;
            let mut diag: f64 = (0..self.nsites()).filter(|&k| occ(k)).map(|k| self.mu[k]).sum();
            for &(i, j, v) in &self.density_couplings {
                if occ(i) && occ(j) {
                    diag += v;
                }
            }
            triplets.push((col, col, c(diag, 0.0)));
            for &(i, j, h) in &self.hoppings {
                if occ(j) && !occ(i) {
                    let moved = s ^ (1 << j) ^ (1 << i);
                    if let Some(row) = basis.index(moved) {
                        triplets.push((row, col, h));
                    }
                }
            }
        }
        CsrMatrix::from_triplets(basis.dim(), triplets)
    }

    /// Lowest `k` levels of the sector.
    pub fn lowest_levels(&self, k: usize) -> Result<Vec<f64>> {
        let basis = self.sector()?;
        let h = self.hamiltonian(&basis);
        if basis.dim() <= crate::ed::DENSE_LIMIT {
            let mut w = eigvalsh(&h.to_dense());
            w.truncate(k);
            Ok(w)
        } else {
            Ok(crate::ed::solver::lowest_pairs(&h, k)?.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KitaevEffective {
    pub j: [f64; 3],
    /// Bulk fields, each site touching one bond of every axis.
    pub h: [f64; 3],
}

/// Chemical-potential offsets that cancel the effective field.
pub fn zero_field_nu(params: &PresetParams) -> Result<[f64; 3]> {
    params.validate()?;
    match params.version {
        BhVersion::Interaction => Ok(params.v.unwrap().map(|v| -v / DENSITY_SCALE)),
        BhVersion::Hopping => {
            let w = nonzero_w(params)?;
            Ok(params.t_prime.unwrap().map(|t| t * t / (2.0 * DENSITY_SCALE * w)))
        }
    }
}

fn nonzero_w(params: &PresetParams) -> Result<f64> {
    let w = params.w.unwrap();
    if w == 0.0 {
        return Err(Error::Singularity("w = 0 in the hopping version".into()));
    }
    Ok(w)
}

/// Second-order density coupling generated by inter-triangle hopping.
pub fn induced_density_coupling(t_prime: f64, w: f64) -> Result<f64> {
    if w == 0.0 {
        return Err(Error::Singularity("w = 0 in the hopping version".into()));
    }
    Ok(-t_prime * t_prime / (2.0 * w))
}

pub fn effective_kitaev(params: &PresetParams) -> Result<KitaevEffective> {
    params.validate()?;
    let nu = params.nu_or_zero();
    let v = match params.version {
        BhVersion::Interaction => params.v.unwrap(),
        BhVersion::Hopping => {
            let w = nonzero_w(params)?;
            let tp = params.t_prime.unwrap();
            [induced_density_coupling(tp[0], w)?, induced_density_coupling(tp[1], w)?, induced_density_coupling(tp[2], w)?]
        }
    };
    let j = v.map(|v| v / (DENSITY_SCALE * DENSITY_SCALE));
    let h = [0, 1, 2].map(|a| j[a] + nu[a] / DENSITY_SCALE);
    Ok(KitaevEffective { j, h })
}

/// Effective spin model on the triangle graph: `J_a s^a s^a` per a-bond,
/// `-J_a` on both ends of every a-bond, and `-nu_a/(3+sqrt3) s^a` on every
/// site. Constants are dropped.
pub fn effective_cluster_model(triangles: &Lattice, params: &PresetParams) -> Result<QubitModel> {
    let eff = effective_kitaev(params)?;
    let nu = params.nu_or_zero();
    let ops = [PauliOp::X, PauliOp::Y, PauliOp::Z];
    let mut fields = vec![[0.0f64; 3]; triangles.nsites];
    let mut terms = Vec::new();
    for b in &triangles.bonds {
        let BondLabel::Axis(axis) = b.label else {
            return Err(Error::LabelMismatch("triangle bonds need axis labels".into()));
        };
        let (a, j) = (axis.index(), eff.j[axis.index()] * b.weight);
        terms.push(PauliTerm::real(j, &[(b.i, ops[a]), (b.j, ops[a])]));
        fields[b.i][a] += j;
        fields[b.j][a] += j;
    }
    for (s, f) in fields.iter().enumerate() {
        for a in 0..3 {
            let h = f[a] + nu[a] / DENSITY_SCALE;
            if h != 0.0 {
                terms.push(PauliTerm::real(-h, &[(s, ops[a])]));
            }
        }
    }
    QubitModel::new(triangles.clone(), terms)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleSpectrum {
    /// Ascending one-boson levels.
    pub levels: [f64; 4],
    /// Whether the two lowest levels were required to coincide.
    pub doublet_checked: bool,
    pub splitting: f64,
    /// Images of `n^x, n^y, n^z` on the doublet, when it was checked.
    pub projected_density: Option<[EffectiveCouplings; 3]>,
}

const DOUBLET_TOL: f64 = 1e-12;

/// Spectrum of one tuned (up) triangle. With `lambda > 0` and vanishing
/// offsets the doublet is enforced and the corner densities projected.
pub fn triangle_spectrum(version: BhVersion, lambda: f64, nu: [f64; 3], w: f64) -> Result<TriangleSpectrum> {
    if !(lambda >= 0.0) {
        return Err(Error::OutOfRange(format!("lambda must be >= 0, got {lambda}")));
    }
    let mu_c = match version {
        BhVersion::Interaction => 0.0,
        BhVersion::Hopping => hopping_centre_potential(lambda, w),
    };
    let m = TriangleParams::tuned(lambda, nu, mu_c, false).matrix();
    let w4 = eigvalsh(&m);
    let levels = [w4[0], w4[1], w4[2], w4[3]];
    let splitting = levels[1] - levels[0];
    let check = lambda > 0.0 && nu == [0.0; 3];
    if !check {
        return Ok(TriangleSpectrum { levels, doublet_checked: false, splitting, projected_density: None });
    }
    let scale = levels.iter().fold(1.0f64, |a, e| a.max(e.abs()));
    if splitting > DOUBLET_TOL * scale || levels[2] - levels[1] <= DOUBLET_TOL * scale {
        return Err(Error::PresetDegeneracy(format!("lowest triangle levels {:?} do not form an isolated doublet", &levels[..3])));
    }
    // The tuned triangle is lambda X(q*) up to a shift.
    let field = x_of_q(special_q())?;
    let shifted = &m - field.entries.scale(lambda) * c(1.0, 0.0);
    let shift = shifted[(0, 0)];
    let residual = (shifted - CMat::identity(4, 4) * shift).iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if residual > 1e-12 * scale {
        return Err(Error::PresetDegeneracy(format!("triangle deviates from the tuned field by {residual:.3e}")));
    }
    let spec = FieldSpec::x_of_q(special_q())?;
    let density = |k: usize| {
        let mut d = vec![c(0.0, 0.0); 4];
        d[k] = c(1.0, 0.0);
        project_operator(&spec, &QuditOperator::diagonal(&d))
    };
    let projected = [density(1)?, density(2)?, density(3)?];
    Ok(TriangleSpectrum { levels, doublet_checked: true, splitting, projected_density: Some(projected) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterCheck {
    pub version: BhVersion,
    pub lambda_ratio: f64,
    /// Largest excitation mismatch divided by the largest effective
    /// excitation (absolute when that vanishes).
    pub mismatch: f64,
    pub absolute: f64,
    pub bh_excitations: Vec<f64>,
    pub effective_excitations: Vec<f64>,
    /// Set when the scale hierarchy is not respected.
    pub warning: Option<String>,
}

/// Parameters on the hierarchy with a common ratio between adjacent scales:
/// interaction `V = 1, lambda = r`; hopping `t' = 1, w = r, lambda = r^2`.
pub fn hierarchy_params(version: BhVersion, ratio: f64, nu: [f64; 3]) -> PresetParams {
    match version {
        BhVersion::Interaction => PresetParams::interaction(ratio, [1.0; 3], nu),
        BhVersion::Hopping => PresetParams::hopping(ratio * ratio, ratio, [1.0; 3], nu),
    }
}

fn hierarchy_warning(params: &PresetParams) -> Option<String> {
    const MIN_RATIO: f64 = 10.0;
    let nu = params.nu_or_zero().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let chain: Vec<(&str, f64)> = match params.version {
        BhVersion::Interaction => {
            let v = params.v.unwrap_or([0.0; 3]).iter().fold(0.0f64, |a, v| a.max(v.abs()));
            vec![("nu", nu), ("V", v), ("lambda", params.lambda)]
        }
        BhVersion::Hopping => {
            let t = params.t_prime.unwrap_or([0.0; 3]).iter().fold(0.0f64, |a, v| a.max(v.abs()));
            vec![("nu", nu), ("t'", t), ("w", params.w.unwrap_or(0.0).abs()), ("lambda", params.lambda)]
        }
    };
    let bad: Vec<String> =
        chain.windows(2).filter(|p| p[0].1 != 0.0 && p[1].1 < MIN_RATIO * p[0].1).map(|p| format!("{}/{} = {:.3}", p[1].0, p[0].0, p[1].1 / p[0].1)).collect();
    (!bad.is_empty()).then(|| format!("scale hierarchy below {MIN_RATIO}: {}", bad.join(", ")))
}

/// Compare the lowest `k` excitations of a two-triangle cluster (bond
/// along `axis`) with the effective two-spin model.
pub fn cluster_mismatch(params: &PresetParams, axis: Axis, k: usize) -> Result<ClusterCheck> {
    if !(1..=4).contains(&k) {
        return Err(Error::OutOfRange(format!("k must be in 1..=4, got {k}")));
    }
    let tri = two_triangles(axis)?;
    let bh = build_preset(&tri, params)?;
    let e_bh = bh.lowest_levels(k)?;
    let eff = effective_cluster_model(&tri, params)?;
    let dense = crate::ed::assemble(&eff)?.matrix.to_dense();
    let (e_eff, _) = eigh(&dense);
    let rel = |e: &[f64]| e.iter().take(k).map(|x| x - e[0]).collect::<Vec<f64>>();
    let (a, b) = (rel(&e_bh), rel(&e_eff));
    let absolute = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let top = b.iter().cloned().fold(0.0, f64::max);
    let mismatch = if top > 0.0 { absolute / top } else { absolute };
    let lambda_ratio = match params.version {
        BhVersion::Interaction => params.lambda / params.v.unwrap().iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE),
        BhVersion::Hopping => params.lambda / params.w.unwrap().abs().max(f64::MIN_POSITIVE),
    };
    Ok(ClusterCheck {
        version: params.version,
        lambda_ratio,
        mismatch,
        absolute,
        bh_excitations: a,
        effective_excitations: b,
        warning: hierarchy_warning(params),
    })
}

/// Cluster check on the default hierarchy with the given ratio.
pub fn verify_small_cluster(version: BhVersion, ratio: f64, k: usize) -> Result<ClusterCheck> {
    let mut check = cluster_mismatch(&hierarchy_params(version, ratio, [0.0; 3]), Axis::Z, k)?;
    check.lambda_ratio = ratio;
    Ok(check)
}

pub fn cluster_csv(rows: &[ClusterCheck]) -> String {
    let mut s = String::from("lambda_ratio,mismatch\n");
    for r in rows {
        s.push_str(&format!("{},{}\n", crate::ed::fmt12(r.lambda_ratio), crate::ed::fmt12(r.mismatch)));
    }
    s
}
