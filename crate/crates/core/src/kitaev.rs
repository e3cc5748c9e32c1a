//! Free-Majorana solution of the four-state clock model whose strong-field
//! limit is the Kitaev honeycomb model (raising-operator phase pi/4), in the
//! flux-free sector with bond variables +1 from sublattice A to B.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, eigvalsh, CMat, C64, ZERO};
use crate::model::{standard_model, Axis, IsingModel, Lattice, StandardModel};
use crate::transmute::{transmute_qubit_model, TransmutePath};

/// Raising-operator phase of the clock model solved here.
pub const PHI: f64 = PI / 4.0;
/// Default momentum mesh for gaps.
pub const DEFAULT_GAP_GRID: usize = 201;
/// Default momentum mesh for Chern numbers.
pub const DEFAULT_CHERN_GRID: usize = 101;

/// Couplings of the clock model. The free-fermion problem uses `3 J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KitaevParams {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub lambda: f64,
}

impl KitaevParams {
    pub fn new(jx: f64, jy: f64, jz: f64, lambda: f64) -> Result<Self> {
        if jx == 0.0 && jy == 0.0 && jz == 0.0 {
            return Err(Error::OutOfRange("all couplings vanish".into()));
        }
        if !(lambda >= 0.0) || ![jx, jy, jz, lambda].iter().all(|x| x.is_finite()) {
            return Err(Error::OutOfRange(format!("need finite couplings and lambda >= 0, got lambda = {lambda}")));
        }
        Ok(Self { jx, jy, jz, lambda })
    }

    /// From the rescaled couplings `J~ = 3 J`.
    pub fn from_scaled(jx: f64, jy: f64, jz: f64, lambda: f64) -> Result<Self> {
        Self::new(jx / 3.0, jy / 3.0, jz / 3.0, lambda)
    }

    pub fn scaled(&self) -> [f64; 3] {
        [3.0 * self.jx, 3.0 * self.jy, 3.0 * self.jz]
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..*self }
    }

    pub fn flipped(&self, signs: [f64; 3]) -> Self {
        Self { jx: self.jx * signs[0], jy: self.jy * signs[1], jz: self.jz * signs[2], ..*self }
    }
}

/// The four-state clock model itself on an axis-labelled lattice, for
/// exact diagonalization of small clusters.
pub fn kitaev_ising_model(lattice: &Lattice, p: &KitaevParams) -> Result<IsingModel> {
    let qubit = standard_model(StandardModel::Kitaev { jx: p.jx, jy: p.jy, jz: p.jz }, lattice)?;
    Ok(transmute_qubit_model(&qubit, PHI, TransmutePath::FourState)?.with_lambda(p.lambda))
}

/// Six-band Bloch Hamiltonian; rows 0-2 are the A-site Majoranas
/// (c^x, c^y, c^z), rows 3-5 the B-site ones.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochMatrix {
    pub kx: f64,
    pub ky: f64,
    pub entries: CMat,
}

pub fn bloch(p: &KitaevParams, kx: f64, ky: f64) -> BlochMatrix {
    let [tx, ty, tz] = p.scaled();
    let l = p.lambda;
    let i = |x: f64| c(0.0, x);
    let ex = C64::from_polar(1.0, kx);
    let ey = C64::from_polar(1.0, ky);
    let mut h = CMat::zeros(6, 6);
    // On-site field couplings within each sublattice.
    for base in [0, 3] {
        h[(base, base + 1)] = i(l);
        h[(base + 1, base + 2)] = i(l);
        h[(base + 2, base)] = i(l);
    }
    h[(0, 4)] = i(tx) / ex;
    h[(1, 5)] = i(ty) / ey;
    h[(2, 3)] = i(tz);
    for r in 0..6 {
        for col in 0..r {
            if h[(col, r)] != ZERO {
                h[(r, col)] = h[(col, r)].conj();
            } else {
                h[(col, r)] = h[(r, col)].conj();
            }
        }
    }
    BlochMatrix { kx, ky, entries: h }
}

/// `sqrt|det H(k)|` against its closed form at the four zone corners.
pub fn corner_det_check(p: &KitaevParams) -> f64 {
    let [tx, ty, tz] = p.scaled();
    let l2 = p.lambda * p.lambda;
    let mut worst: f64 = 0.0;
    for kx in [0.0, PI] {
        for ky in [0.0, PI] {
            let numeric = bloch(p, kx, ky).entries.determinant().norm().sqrt();
            let ex = C64::from_polar(1.0, kx);
            let ey = C64::from_polar(1.0, ky);
            let analytic = (ex * tx * ey * ty * tz - (ex * tx + ey * ty + c(tz, 0.0)) * l2).norm();
            worst = worst.max((numeric - analytic).abs());
        }
    }
    worst
}

fn min_abs_eig(p: &KitaevParams, kx: f64, ky: f64) -> f64 {
    eigvalsh(&bloch(p, kx, ky).entries).iter().fold(f64::INFINITY, |a, e| a.min(e.abs()))
}

/// Many-body gap: twice the smallest single-particle |energy| over a
/// `grid_n^2` mesh plus the zone corners, refined once around the minimum.
pub fn gap(p: &KitaevParams, grid_n: usize) -> Result<f64> {
    if grid_n < 3 {
        return Err(Error::OutOfRange("grid_n must be at least 3".into()));
    }
    let h = 2.0 * PI / grid_n as f64;
    let (mut best, mut at) = (0..grid_n)
        .into_par_iter()
        .map(|a| {
            let kx = a as f64 * h;
            (0..grid_n).map(|b| (min_abs_eig(p, kx, b as f64 * h), (kx, b as f64 * h))).fold((f64::INFINITY, (0.0, 0.0)), |x, y| if y.0 < x.0 { y } else { x })
        })
        .reduce(|| (f64::INFINITY, (0.0, 0.0)), |x, y| if y.0 < x.0 { y } else { x });
    for kx in [0.0, PI] {
        for ky in [0.0, PI] {
            let v = min_abs_eig(p, kx, ky);
            if v < best {
                best = v;
                at = (kx, ky);
            }
        }
    }
    let fine = h / 5.0;
    for a in -5i32..=5 {
        for b in -5i32..=5 {
            let v = min_abs_eig(p, at.0 + a as f64 * fine, at.1 + b as f64 * fine);
            best = best.min(v);
        }
    }
    Ok(2.0 * best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalFields {
    /// Closing at k = 0; the lower transition inside an A region.
    pub lambda_c: f64,
    /// Upper transition of an A region; infinite on its border, `None` outside.
    pub lambda_c1: Option<f64>,
    /// Equal to `lambda_c` inside an A region, `None` outside.
    pub lambda_c2: Option<f64>,
    /// Dominant axis when one |J~| exceeds the sum of the other two.
    pub dominant: Option<Axis>,
}

const TIE_TOL: f64 = 1e-12;

pub fn critical_fields(p: &KitaevParams) -> CriticalFields {
    let t = p.scaled().map(f64::abs);
    let prod = t[0] * t[1] * t[2];
    let sum = t[0] + t[1] + t[2];
    let lambda_c = (prod / sum).sqrt();
    let d = (0..3).max_by(|&a, &b| t[a].total_cmp(&t[b])).unwrap();
    let others = sum - t[d];
    let excess = t[d] - others;
    if excess > TIE_TOL * sum {
        CriticalFields { lambda_c, lambda_c1: Some((prod / excess).sqrt()), lambda_c2: Some(lambda_c), dominant: Some(Axis::ALL[d]) }
    } else if excess.abs() <= TIE_TOL * sum {
        CriticalFields { lambda_c, lambda_c1: Some(f64::INFINITY), lambda_c2: Some(lambda_c), dominant: Some(Axis::ALL[d]) }
    } else {
        CriticalFields { lambda_c, lambda_c1: None, lambda_c2: None, dominant: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseLabel {
    LowFieldZ2,
    Chiral,
    A(Axis),
    /// On a transition line or a region border.
    Boundary,
}

impl PhaseLabel {
    pub fn name(self) -> &'static str {
        match self {
            PhaseLabel::LowFieldZ2 => "LowFieldZ2",
            PhaseLabel::Chiral => "Chiral",
            PhaseLabel::A(Axis::X) => "A_x",
            PhaseLabel::A(Axis::Y) => "A_y",
            PhaseLabel::A(Axis::Z) => "A_z",
            PhaseLabel::Boundary => "boundary",
        }
    }
}

pub fn phase_label(p: &KitaevParams) -> PhaseLabel {
    let cf = critical_fields(p);
    let l = p.lambda;
    let near = |x: f64| (l - x).abs() <= TIE_TOL * x.max(1.0);
    match (cf.lambda_c1, cf.dominant) {
        (Some(c1), Some(_)) if c1.is_infinite() => {
            if near(cf.lambda_c) {
                PhaseLabel::Boundary
            } else if l < cf.lambda_c {
                PhaseLabel::LowFieldZ2
            } else {
                // The A region border itself.
                PhaseLabel::Boundary
            }
        }
        (Some(c1), Some(axis)) => {
            if near(cf.lambda_c) || near(c1) {
                PhaseLabel::Boundary
            } else if l > c1 {
                PhaseLabel::A(axis)
            } else if l > cf.lambda_c {
                PhaseLabel::Chiral
            } else {
                PhaseLabel::LowFieldZ2
            }
        }
        _ => {
            if near(cf.lambda_c) {
                PhaseLabel::Boundary
            } else if l > cf.lambda_c {
                PhaseLabel::Chiral
            } else {
                PhaseLabel::LowFieldZ2
            }
        }
    }
}

/// Gap below which the Chern number is refused.
pub const CHERN_GAP_THRESHOLD: f64 = 1e-4;

/// Total Chern number of the three negative bands from gauge-invariant
/// plaquette phases on a `grid_n^2` mesh.
pub fn chern_number(p: &KitaevParams, grid_n: usize) -> Result<i32> {
    let g = gap(p, grid_n)?;
    if g <= CHERN_GAP_THRESHOLD {
        return Err(Error::Gapless(g));
    }
    let h = 2.0 * PI / grid_n as f64;
    let frames: Vec<Vec<CMat>> = (0..grid_n)
        .into_par_iter()
        .map(|a| {
            (0..grid_n)
                .map(|b| {
                    let (_, v) = eigh(&bloch(p, a as f64 * h, b as f64 * h).entries);
                    v.columns(0, 3).into_owned()
                })
                .collect()
        })
        .collect();
    let link = |u: &CMat, v: &CMat| {
        let d = (u.adjoint() * v).determinant();
        d / d.norm()
    };
    let total: f64 = (0..grid_n)
        .into_par_iter()
        .map(|a| {
            let an = (a + 1) % grid_n;
            (0..grid_n)
                .map(|b| {
                    let bn = (b + 1) % grid_n;
                    let w = link(&frames[a][b], &frames[an][b])
                        * link(&frames[an][b], &frames[an][bn])
                        * link(&frames[an][bn], &frames[a][bn])
                        * link(&frames[a][bn], &frames[a][b]);
                    w.arg()
                })
                .sum::<f64>()
        })
        .sum();
    let chern = total / (2.0 * PI);
    let rounded = chern.round();
    if (chern - rounded).abs() > 1e-6 {
        return Err(Error::NoConvergence { iterations: grid_n, residual: (chern - rounded).abs() });
    }
    Ok(rounded as i32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    /// Integer barycentric indices, `i + j + k = resolution`.
    pub index: (usize, usize, usize),
    pub params: KitaevParams,
    pub label: PhaseLabel,
    pub gap: Option<f64>,
    pub chern: Option<i32>,
}

impl ScanPoint {
    /// Cartesian position inside the unit-side triangle with corners
    /// x = (0, 0), y = (1, 0), z = (1/2, sqrt(3)/2).
    pub fn ternary(&self) -> (f64, f64) {
        let r = (self.index.0 + self.index.1 + self.index.2) as f64;
        let (b, cc) = (self.index.1 as f64 / r, self.index.2 as f64 / r);
        (b + 0.5 * cc, 0.5 * 3f64.sqrt() * cc)
    }
}

/// Optional per-point numerics for a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScanNumerics {
    pub gap_grid: Option<usize>,
    pub chern_grid: Option<usize>,
}

/// Labels over the simplex `|Jx| + |Jy| + |Jz| = 1`, all couplings carrying
/// the common `sign`. Points are ordered by (i, j).
pub fn phase_scan(lambda: f64, resolution: usize, sign: f64, numerics: ScanNumerics) -> Result<Vec<ScanPoint>> {
    if resolution < 2 {
        return Err(Error::OutOfRange("resolution must be at least 2".into()));
    }
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::OutOfRange("sign must be +1 or -1".into()));
    }
    let r = resolution as f64;
    let mut idx = Vec::new();
    for i in 0..=resolution {
        for j in 0..=resolution - i {
            idx.push((i, j, resolution - i - j));
        }
    }
    idx.into_par_iter()
        .map(|(i, j, k)| {
            let params = KitaevParams::new(sign * i as f64 / r, sign * j as f64 / r, sign * k as f64 / r, lambda)?;
            let label = phase_label(&params);
            let gap = numerics.gap_grid.map(|n| gap(&params, n)).transpose()?;
            let chern = match numerics.chern_grid {
                Some(n) => match chern_number(&params, n) {
                    Ok(v) => Some(v),
                    Err(Error::Gapless(_)) => None,
                    Err(e) => return Err(e),
                },
                None => None,
            };
            Ok(ScanPoint { index: (i, j, k), params, label, gap, chern })
        })
        .collect()
}

pub fn scan_csv(points: &[ScanPoint]) -> String {
    let mut s = String::from("Jx,Jy,Jz,lambda,gap,chern,label\n");
    for p in points {
        let g = p.gap.map(crate::ed::fmt12).unwrap_or_else(|| "NA".into());
        let ch = p.chern.map(|v| v.to_string()).unwrap_or_else(|| "NA".into());
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            crate::ed::fmt12(p.params.jx),
            crate::ed::fmt12(p.params.jy),
            crate::ed::fmt12(p.params.jz),
            crate::ed::fmt12(p.params.lambda),
            g,
            ch,
            p.label.name()
        ));
    }
    s
}

pub fn ternary_csv(points: &[ScanPoint]) -> String {
    let mut s = String::from("u,v,label\n");
    for p in points {
        let (u, v) = p.ternary();
        s.push_str(&format!("{},{},{}\n", crate::ed::fmt12(u), crate::ed::fmt12(v), p.label.name()));
    }
    s
}
