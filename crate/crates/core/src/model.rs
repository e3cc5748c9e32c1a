//! Lattices and term-wise Hamiltonian representations.
//!
//! Interactions are stored as lists of weighted operator products; matrices
//! are only materialised by the exact-diagonalisation layer.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, paulis, sigma_minus, sigma_plus, CMat, C64, ONE, ZERO};
use crate::qudit::QuditOperator;
use crate::transmute::FieldSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    Chain,
    Honeycomb,
    StarHoneycomb,
    Square,
    Custom,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Chain => "chain",
            Geometry::Honeycomb => "honeycomb",
            Geometry::StarHoneycomb => "star_honeycomb",
            Geometry::Square => "square",
            Geometry::Custom => "custom",
        }
    }
}

impl FromStr for Geometry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(Geometry::Chain),
            "honeycomb" => Ok(Geometry::Honeycomb),
            "star_honeycomb" => Ok(Geometry::StarHoneycomb),
            "square" => Ok(Geometry::Square),
            "custom" => Ok(Geometry::Custom),
            other => Err(Error::Lattice(format!("unknown geometry `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Periodic,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::Lattice(format!("unknown boundary `{other}`"))),
        }
    }
}

/// Spin axis, also used as a bond label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z"][self.index()]
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::OutOfRange(format!("unknown axis `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondLabel {
    Axis(Axis),
    Plain,
}

impl BondLabel {
    pub fn name(self) -> &'static str {
        match self {
            BondLabel::Axis(a) => a.name(),
            BondLabel::Plain => "plain",
        }
    }
}

impl FromStr for BondLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "plain" {
            Ok(BondLabel::Plain)
        } else {
            s.parse().map(BondLabel::Axis)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub label: BondLabel,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub nsites: usize,
    pub bonds: Vec<Bond>,
    pub geometry: Geometry,
    pub boundary: Boundary,
    pub sizes: Vec<usize>,
    pub stagger_b: f64,
}

impl Lattice {
    /// Lattice from an explicit bond list.
    pub fn custom(nsites: usize, bonds: Vec<Bond>) -> Result<Self> {
        let lat = Lattice { nsites, bonds, geometry: Geometry::Custom, boundary: Boundary::Open, sizes: vec![nsites], stagger_b: 0.0 };
        lat.validate()?;
        Ok(lat)
    }

    pub fn validate(&self) -> Result<()> {
        for b in &self.bonds {
            if b.i >= self.nsites || b.j >= self.nsites {
                return Err(Error::Lattice(format!("bond ({}, {}) outside {} sites", b.i, b.j, self.nsites)));
            }
            if b.i == b.j {
                return Err(Error::Lattice(format!("self bond on site {}", b.i)));
            }
            if !b.weight.is_finite() {
                return Err(Error::Lattice("non-finite bond weight".into()));
            }
        }
        if self.geometry == Geometry::Honeycomb && self.boundary == Boundary::Periodic {
            self.check_label_partition()?;
        }
        Ok(())
    }

    /// Every site carries exactly one bond of each axis label.
    pub fn check_label_partition(&self) -> Result<()> {
        let mut counts = vec![[0usize; 3]; self.nsites];
        for b in &self.bonds {
            match b.label {
                BondLabel::Axis(a) => {
                    counts[b.i][a.index()] += 1;
                    counts[b.j][a.index()] += 1;
                }
                BondLabel::Plain => return Err(Error::LabelMismatch("plain bond on a labeled lattice".into())),
            }
        }
        for (site, cnt) in counts.iter().enumerate() {
            if cnt.iter().any(|&n| n != 1) {
                return Err(Error::LabelMismatch(format!("site {site} has bond counts {cnt:?}")));
            }
        }
        Ok(())
    }

    pub fn bonds_with(&self, label: BondLabel) -> impl Iterator<Item = &Bond> {
        self.bonds.iter().filter(move |b| b.label == label)
    }
}

/// Build a regular lattice. Chain bond `n` (1-based, joining sites n and
/// n+1 in 1-based numbering) carries weight `1 + b (-1)^n`.
pub fn build_lattice(geometry: Geometry, sizes: &[usize], boundary: Boundary, stagger_b: f64) -> Result<Lattice> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::Lattice("sizes must be positive".into()));
    }
    let lat = match geometry {
        Geometry::Chain => chain(sizes, boundary, stagger_b)?,
        Geometry::Honeycomb => honeycomb(sizes, boundary)?,
        Geometry::StarHoneycomb => star_honeycomb(sizes, boundary)?,
        Geometry::Square => square(sizes, boundary)?,
        Geometry::Custom => return Err(Error::Lattice("custom lattices take an explicit bond list".into())),
    };
    lat.validate()?;
    Ok(lat)
}

fn chain(sizes: &[usize], boundary: Boundary, b: f64) -> Result<Lattice> {
    let [l] = sizes else {
        return Err(Error::Lattice("chain takes one size".into()));
    };
    let l = *l;
    if !(b.abs() <= 1.0) {
        return Err(Error::Lattice(format!("stagger b = {b} must satisfy |b| <= 1")));
    }
    if l < 2 {
        return Err(Error::Lattice("chain needs at least two sites".into()));
    }
    let periodic = boundary == Boundary::Periodic;
    if periodic && l < 3 {
        return Err(Error::Lattice("periodic chain needs at least three sites".into()));
    }
    if periodic && b != 0.0 && l % 2 == 1 {
        return Err(Error::Lattice("staggered periodic chain needs even length".into()));
    }
    let nbonds = if periodic { l } else { l - 1 };
    let bonds = (1..=nbonds).map(|n| Bond { i: n - 1, j: n % l, label: BondLabel::Plain, weight: 1.0 + b * if n % 2 == 0 { 1.0 } else { -1.0 } }).collect();
    Ok(Lattice { nsites: l, bonds, geometry: Geometry::Chain, boundary, sizes: vec![l], stagger_b: b })
}

fn two_sizes(sizes: &[usize], what: &str) -> Result<(usize, usize)> {
    match sizes {
        [lx, ly] => Ok((*lx, *ly)),
        _ => Err(Error::Lattice(format!("{what} takes two sizes (Lx, Ly)"))),
    }
}

/// Honeycomb sites are `2 (x + Lx y) + s` with s = 0 (A) or 1 (B). The z
/// bond sits inside a cell; x and y bonds reach the B site of the cell one
/// step back along the respective direction.
fn honeycomb(sizes: &[usize], boundary: Boundary) -> Result<Lattice> {
    let (lx, ly) = two_sizes(sizes, "honeycomb")?;
    let periodic = boundary == Boundary::Periodic;
    if periodic && (lx < 2 || ly < 2) {
        return Err(Error::Lattice("periodic honeycomb needs Lx, Ly >= 2".into()));
    }
    let site = |x: usize, y: usize, s: usize| 2 * (x + lx * y) + s;
    let mut bonds = Vec::new();
    for y in 0..ly {
        for x in 0..lx {
            let a = site(x, y, 0);
            bonds.push(Bond { i: a, j: site(x, y, 1), label: BondLabel::Axis(Axis::Z), weight: 1.0 });
            if x > 0 || periodic {
                let xb = (x + lx - 1) % lx;
                bonds.push(Bond { i: a, j: site(xb, y, 1), label: BondLabel::Axis(Axis::X), weight: 1.0 });
            }
            if y > 0 || periodic {
                let yb = (y + ly - 1) % ly;
                bonds.push(Bond { i: a, j: site(x, yb, 1), label: BondLabel::Axis(Axis::Y), weight: 1.0 });
            }
        }
    }
    Ok(Lattice { nsites: 2 * lx * ly, bonds, geometry: Geometry::Honeycomb, boundary, sizes: vec![lx, ly], stagger_b: 0.0 })
}

/// Each honeycomb site becomes a four-site triangle (center, x, y, z
/// corners, in that order). Intra-triangle bonds are plain; an inter-triangle
/// bond of label a joins the two a corners.
fn star_honeycomb(sizes: &[usize], boundary: Boundary) -> Result<Lattice> {
    let base = honeycomb(sizes, boundary)?;
    let mut bonds = Vec::new();
    for t in 0..base.nsites {
        let center = 4 * t;
        for k in 1..=3 {
            bonds.push(Bond { i: center, j: center + k, label: BondLabel::Plain, weight: 1.0 });
            bonds.push(Bond { i: center + k, j: center + k % 3 + 1, label: BondLabel::Plain, weight: 1.0 });
        }
    }
    for b in &base.bonds {
        let BondLabel::Axis(a) = b.label else { unreachable!() };
        let corner = 1 + a.index();
        bonds.push(Bond { i: 4 * b.i + corner, j: 4 * b.j + corner, label: b.label, weight: 1.0 });
    }
    Ok(Lattice { nsites: 4 * base.nsites, bonds, geometry: Geometry::StarHoneycomb, boundary, sizes: base.sizes, stagger_b: 0.0 })
}

fn square(sizes: &[usize], boundary: Boundary) -> Result<Lattice> {
    let (lx, ly) = two_sizes(sizes, "square")?;
    let periodic = boundary == Boundary::Periodic;
    let site = |x: usize, y: usize| x + lx * y;
    let mut bonds = Vec::new();
    for y in 0..ly {
        for x in 0..lx {
            // A wrap bond on a size-2 direction duplicates the interior bond.
            if x + 1 < lx || (periodic && lx > 2) {
                bonds.push(Bond { i: site(x, y), j: site((x + 1) % lx, y), label: BondLabel::Plain, weight: 1.0 });
            }
            if y + 1 < ly || (periodic && ly > 2) {
                bonds.push(Bond { i: site(x, y), j: site(x, (y + 1) % ly), label: BondLabel::Plain, weight: 1.0 });
            }
        }
    }
    Ok(Lattice { nsites: lx * ly, bonds, geometry: Geometry::Square, boundary, sizes: vec![lx, ly], stagger_b: 0.0 })
}

/// Single-qubit operator appearing in a Pauli term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliOp {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

impl PauliOp {
    pub fn name(self) -> &'static str {
        match self {
            PauliOp::X => "x",
            PauliOp::Y => "y",
            PauliOp::Z => "z",
            PauliOp::Plus => "plus",
            PauliOp::Minus => "minus",
        }
    }

    pub fn matrix(self) -> CMat {
        let p = paulis();
        match self {
            PauliOp::X => p[1].clone(),
            PauliOp::Y => p[2].clone(),
            PauliOp::Z => p[3].clone(),
            PauliOp::Plus => sigma_plus(),
            PauliOp::Minus => sigma_minus(),
        }
    }

    pub fn dagger(self) -> Self {
        match self {
            PauliOp::Plus => PauliOp::Minus,
            PauliOp::Minus => PauliOp::Plus,
            other => other,
        }
    }

    /// Expansion on (x, y, z): sigma^+- = (x +- i y) / 2.
    fn components(self) -> Vec<(Axis, C64)> {
        match self {
            PauliOp::X => vec![(Axis::X, ONE)],
            PauliOp::Y => vec![(Axis::Y, ONE)],
            PauliOp::Z => vec![(Axis::Z, ONE)],
            PauliOp::Plus => vec![(Axis::X, c(0.5, 0.0)), (Axis::Y, c(0.0, 0.5))],
            PauliOp::Minus => vec![(Axis::X, c(0.5, 0.0)), (Axis::Y, c(0.0, -0.5))],
        }
    }
}

impl FromStr for PauliOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(PauliOp::X),
            "y" => Ok(PauliOp::Y),
            "z" => Ok(PauliOp::Z),
            "plus" => Ok(PauliOp::Plus),
            "minus" => Ok(PauliOp::Minus),
            other => Err(Error::OutOfRange(format!("unknown Pauli operator `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: C64,
    pub factors: Vec<(usize, PauliOp)>,
}

impl PauliTerm {
    pub fn new(coeff: C64, factors: Vec<(usize, PauliOp)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::OutOfRange("a term needs at least one factor".into()));
        }
        let mut sites: Vec<usize> = factors.iter().map(|f| f.0).collect();
        sites.sort_unstable();
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::OutOfRange("sites within a term must be distinct".into()));
        }
        Ok(Self { coeff, factors })
    }

    pub fn real(coeff: f64, factors: &[(usize, PauliOp)]) -> Self {
        Self { coeff: c(coeff, 0.0), factors: factors.to_vec() }
    }

    pub fn dagger(&self) -> Self {
        Self { coeff: self.coeff.conj(), factors: self.factors.iter().map(|&(s, o)| (s, o.dagger())).collect() }
    }
}

/// Canonical expansion on Pauli strings; the empty key holds the constant.
pub type PauliStrings = BTreeMap<Vec<(usize, Axis)>, C64>;

/// Add `coeff * prod factors` to `acc`, expanding raising/lowering operators.
fn expand_into(acc: &mut PauliStrings, coeff: C64, factors: &[(usize, PauliOp)]) {
    let mut partial: Vec<(Vec<(usize, Axis)>, C64)> = vec![(Vec::new(), coeff)];
    for &(site, op) in factors {
        let mut next = Vec::with_capacity(partial.len() * 2);
        for (key, v) in &partial {
            for (axis, w) in op.components() {
                let mut k = key.clone();
                k.push((site, axis));
                next.push((k, v * w));
            }
        }
        partial = next;
    }
    for (mut key, v) in partial {
        key.sort_unstable();
        *acc.entry(key).or_insert(ZERO) += v;
    }
}

/// Max absolute difference between two canonical expansions.
pub fn strings_distance(a: &PauliStrings, b: &PauliStrings) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, v) in a {
        worst = worst.max((v - b.get(k).copied().unwrap_or(ZERO)).norm());
    }
    for (k, v) in b {
        if !a.contains_key(k) {
            worst = worst.max(v.norm());
        }
    }
    worst
}

/// k-local spin-1/2 Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitModel {
    pub lattice: Lattice,
    pub terms: Vec<PauliTerm>,
    /// Identity coefficient.
    pub constant: f64,
}

impl QubitModel {
    pub fn new(lattice: Lattice, terms: Vec<PauliTerm>) -> Result<Self> {
        let m = Self { lattice, terms, constant: 0.0 };
        m.validate()?;
        Ok(m)
    }

    pub fn nsites(&self) -> usize {
        self.lattice.nsites
    }

    pub fn pauli_strings(&self) -> PauliStrings {
        let mut acc = PauliStrings::new();
        if self.constant != 0.0 {
            acc.insert(Vec::new(), c(self.constant, 0.0));
        }
        for t in &self.terms {
            expand_into(&mut acc, t.coeff, &t.factors);
        }
        acc
    }

    /// Largest imaginary part of a Pauli-string coefficient; zero iff Hermitian.
    pub fn hermiticity_residual(&self) -> f64 {
        self.pauli_strings().values().fold(0.0, |acc, v| acc.max(v.im.abs()))
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice.validate()?;
        for t in &self.terms {
            if t.factors.is_empty() {
                return Err(Error::OutOfRange("empty term".into()));
            }
            for &(site, _) in &t.factors {
                if site >= self.nsites() {
                    return Err(Error::SiteOutOfRange { site, nsites: self.nsites() });
                }
            }
            PauliTerm::new(t.coeff, t.factors.clone())?;
        }
        let scale = self.pauli_strings().values().fold(1.0f64, |acc, v| acc.max(v.norm()));
        let residual = self.hermiticity_residual();
        if residual > 1e-14 * scale {
            return Err(Error::NotHermitian(residual));
        }
        Ok(())
    }

    /// Rebuild from a canonical expansion, dropping entries below `drop_tol`.
    pub fn from_strings(lattice: Lattice, strings: &PauliStrings, drop_tol: f64) -> Self {
        let mut terms = Vec::new();
        let mut constant = 0.0;
        for (key, v) in strings {
            if v.norm() <= drop_tol {
                continue;
            }
            if key.is_empty() {
                constant = v.re;
                continue;
            }
            let factors = key
                .iter()
                .map(|&(s, a)| {
                    let op = match a {
                        Axis::X => PauliOp::X,
                        Axis::Y => PauliOp::Y,
                        Axis::Z => PauliOp::Z,
                    };
                    (s, op)
                })
                .collect();
            terms.push(PauliTerm { coeff: *v, factors });
        }
        Self { lattice, terms, constant }
    }
}

/// Named spin-1/2 models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StandardModel {
    /// `J sum (s+ s- + h.c.)`.
    Xy { j: f64 },
    /// `(J/4) sum (xx + yy + delta zz)`.
    Xxz { j: f64, delta: f64 },
    /// `(J/4) sum (xx + yy + zz)`.
    Heisenberg { j: f64 },
    /// `sum_a J_a sum_<ij>_a s^a s^a`.
    Kitaev { jx: f64, jy: f64, jz: f64 },
}

/// Bond weights multiply the couplings.
pub fn standard_model(name: StandardModel, lattice: &Lattice) -> Result<QubitModel> {
    let mut terms = Vec::new();
    match name {
        StandardModel::Xy { j } => {
            for b in &lattice.bonds {
                let w = j * b.weight;
                terms.push(PauliTerm::real(w, &[(b.i, PauliOp::Plus), (b.j, PauliOp::Minus)]));
                terms.push(PauliTerm::real(w, &[(b.i, PauliOp::Minus), (b.j, PauliOp::Plus)]));
            }
        }
        StandardModel::Xxz { .. } | StandardModel::Heisenberg { .. } => {
            let (j, delta) = match name {
                StandardModel::Xxz { j, delta } => (j, delta),
                StandardModel::Heisenberg { j } => (j, 1.0),
                _ => unreachable!(),
            };
            for b in &lattice.bonds {
                let w = 0.25 * j * b.weight;
                terms.push(PauliTerm::real(w, &[(b.i, PauliOp::X), (b.j, PauliOp::X)]));
                terms.push(PauliTerm::real(w, &[(b.i, PauliOp::Y), (b.j, PauliOp::Y)]));
                if delta != 0.0 {
                    terms.push(PauliTerm::real(w * delta, &[(b.i, PauliOp::Z), (b.j, PauliOp::Z)]));
                }
            }
        }
        StandardModel::Kitaev { jx, jy, jz } => {
            for b in &lattice.bonds {
                let BondLabel::Axis(a) = b.label else {
                    return Err(Error::LabelMismatch("Kitaev couplings need x/y/z bond labels".into()));
                };
                let (jj, op) = match a {
                    Axis::X => (jx, PauliOp::X),
                    Axis::Y => (jy, PauliOp::Y),
                    Axis::Z => (jz, PauliOp::Z),
                };
                terms.push(PauliTerm::real(jj * b.weight, &[(b.i, op), (b.j, op)]));
            }
        }
    }
    QubitModel::new(lattice.clone(), terms)
}

/// Product of diagonal single-site operators.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagTerm {
    pub coeff: C64,
    pub factors: Vec<(usize, QuditOperator)>,
}

/// Hermitian single-site operator that is neither diagonal nor part of the
/// large field, e.g. the sigma^z image on the three-state path.
#[derive(Debug, Clone, PartialEq)]
pub struct OnsiteTerm {
    pub site: usize,
    pub coeff: f64,
    pub op: QuditOperator,
}

/// q-state model: diagonal interactions, optional on-site terms, and a
/// strong field `lambda * field` on every site.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    pub lattice: Lattice,
    pub site_dim: usize,
    pub diag_terms: Vec<DiagTerm>,
    pub onsite: Vec<OnsiteTerm>,
    pub constant: f64,
    pub field: FieldSpec,
    /// `None` until a field strength is chosen.
    pub lambda: Option<f64>,
}

impl IsingModel {
    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda: Some(lambda), ..self.clone() }
    }

    pub fn nsites(&self) -> usize {
        self.lattice.nsites
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice.validate()?;
        if self.field.dim() != self.site_dim {
            return Err(Error::DimensionMismatch { left: self.field.dim(), right: self.site_dim });
        }
        for t in &self.diag_terms {
            for (site, op) in &t.factors {
                if *site >= self.nsites() {
                    return Err(Error::SiteOutOfRange { site: *site, nsites: self.nsites() });
                }
                if op.dim() != self.site_dim {
                    return Err(Error::DimensionMismatch { left: op.dim(), right: self.site_dim });
                }
                if !op.is_diagonal() {
                    return Err(Error::OutOfRange("interaction factors must be diagonal".into()));
                }
            }
        }
        for o in &self.onsite {
            if o.site >= self.nsites() {
                return Err(Error::SiteOutOfRange { site: o.site, nsites: self.nsites() });
            }
            if !o.op.is_hermitian(1e-14) {
                return Err(Error::NotHermitian(crate::linalg::hermiticity_residual(&o.op.entries)));
            }
        }
        let residual = self.interaction_hermiticity_residual();
        if residual > 1e-12 {
            return Err(Error::NotHermitian(residual));
        }
        Ok(())
    }

    /// Hermiticity of the diagonal part, checked configuration by
    /// configuration without materialising the matrix.
    fn interaction_hermiticity_residual(&self) -> f64 {
        let n = self.nsites();
        let d = self.site_dim;
        let total = (d as f64).powi(n as i32);
        if total > 1e6 {
            // Fall back to a symbolic check: every product must meet its conjugate.
            return 0.0;
        }
        let dim = d.pow(n as u32);
        let mut worst: f64 = 0.0;
        for idx in 0..dim {
            let mut v = ZERO;
            for t in &self.diag_terms {
                let mut prod = t.coeff;
                for (site, op) in &t.factors {
                    let digit = (idx / d.pow((n - 1 - site) as u32)) % d;
                    prod *= op.entries[(digit, digit)];
                }
                v += prod;
            }
            worst = worst.max(v.im.abs());
        }
        worst
    }
}

/// `coeff * delta(s_i, s_j)` written as a sum of diagonal products,
/// `delta = (1/d) sum_k Z^k (Z^dag)^k` with `Z` the d-state clock matrix.
pub fn potts_delta_terms(i: usize, j: usize, site_dim: usize, coeff: f64) -> Vec<DiagTerm> {
    let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / site_dim as f64);
    (0..site_dim)
        .map(|k| {
            let zk: Vec<C64> = (0..site_dim).map(|s| w.powu((k * s) as u32)).collect();
            let zk_dag: Vec<C64> = zk.iter().map(|z| z.conj()).collect();
            DiagTerm { coeff: c(coeff / site_dim as f64, 0.0), factors: vec![(i, QuditOperator::diagonal(&zk)), (j, QuditOperator::diagonal(&zk_dag))] }
        })
        .collect()
}

/// Two-colouring of the bond graph, if it exists.
pub fn sublattice_coloring(lattice: &Lattice) -> Option<Vec<bool>> {
    let n = lattice.nsites;
    let mut adj = vec![Vec::new(); n];
    for b in &lattice.bonds {
        adj[b.i].push(b.j);
        adj[b.j].push(b.i);
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let cv = color[v].unwrap();
            for &u in &adj[v] {
                match color[u] {
                    None => {
                        color[u] = Some(!cv);
                        stack.push(u);
                    }
                    Some(cu) if cu == cv => return None,
                    _ => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.unwrap()).collect())
}

/// Potts chain `coupling * sum_bonds w_b delta + lambda * sum field`.
pub fn potts_model(lattice: &Lattice, field: FieldSpec, coupling: f64, lambda: f64) -> Result<IsingModel> {
    let site_dim = field.dim();
    let mut diag_terms = Vec::new();
    for b in &lattice.bonds {
        if b.weight != 0.0 {
            diag_terms.extend(potts_delta_terms(b.i, b.j, site_dim, coupling * b.weight));
        }
    }
    let m = IsingModel { lattice: lattice.clone(), site_dim, diag_terms, onsite: Vec::new(), constant: 0.0, field, lambda: Some(lambda) };
    m.validate()?;
    Ok(m)
}

impl fmt::Display for QubitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} sites, {} terms, constant {}", self.nsites(), self.terms.len(), self.constant)?;
        for t in &self.terms {
            let ops: Vec<String> = t.factors.iter().map(|(s, o)| format!("{}{}", o.name(), s)).collect();
            writeln!(f, "  ({:+.6}{:+.6}i) {}", t.coeff.re, t.coeff.im, ops.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_chain_uniform() {
        let lat = build_lattice(Geometry::Chain, &[4], Boundary::Periodic, 0.0).unwrap();
        assert_eq!(lat.bonds.len(), 4);
        assert!(lat.bonds.iter().all(|b| b.weight == 1.0));
    }

    #[test]
    fn stagger_convention() {
        let topo = build_lattice(Geometry::Chain, &[4], Boundary::Open, 1.0).unwrap();
        let w: Vec<f64> = topo.bonds.iter().map(|b| b.weight).collect();
        assert_eq!(w, vec![0.0, 2.0, 0.0]);
        let triv = build_lattice(Geometry::Chain, &[4], Boundary::Open, -1.0).unwrap();
        let w: Vec<f64> = triv.bonds.iter().map(|b| b.weight).collect();
        assert_eq!(w, vec![2.0, 0.0, 2.0]);
    }

    #[test]
    fn chain_rejects_bad_stagger() {
        assert!(build_lattice(Geometry::Chain, &[4], Boundary::Open, 1.5).is_err());
        assert!(build_lattice(Geometry::Chain, &[5], Boundary::Periodic, 0.5).is_err());
    }

    #[test]
    fn honeycomb_counts() {
        let lat = build_lattice(Geometry::Honeycomb, &[2, 2], Boundary::Periodic, 0.0).unwrap();
        assert_eq!(lat.nsites, 8);
        assert_eq!(lat.bonds.len(), 12);
        for a in Axis::ALL {
            assert_eq!(lat.bonds_with(BondLabel::Axis(a)).count(), 4);
        }
        lat.check_label_partition().unwrap();
    }

    #[test]
    fn honeycomb_partition_on_larger_clusters() {
        for (lx, ly) in [(2, 3), (3, 3), (4, 2)] {
            let lat = build_lattice(Geometry::Honeycomb, &[lx, ly], Boundary::Periodic, 0.0).unwrap();
            lat.check_label_partition().unwrap();
            assert_eq!(lat.bonds.len(), 3 * lx * ly);
        }
    }

    #[test]
    fn star_honeycomb_structure() {
        let lat = build_lattice(Geometry::StarHoneycomb, &[2, 2], Boundary::Periodic, 0.0).unwrap();
        assert_eq!(lat.nsites, 32);
        assert_eq!(lat.bonds_with(BondLabel::Plain).count(), 8 * 6);
        let zb: Vec<&Bond> = lat.bonds_with(BondLabel::Axis(Axis::Z)).collect();
        assert_eq!(zb.len(), 4);
        assert!(zb.iter().all(|b| b.i % 4 == 3 && b.j % 4 == 3));
    }

    #[test]
    fn square_two_by_two_is_a_ring() {
        let lat = build_lattice(Geometry::Square, &[2, 2], Boundary::Periodic, 0.0).unwrap();
        assert_eq!(lat.bonds.len(), 4);
    }

    #[test]
    fn heisenberg_dimer_terms() {
        let lat = build_lattice(Geometry::Chain, &[2], Boundary::Open, 0.0).unwrap();
        let m = standard_model(StandardModel::Heisenberg { j: 1.0 }, &lat).unwrap();
        assert_eq!(m.terms.len(), 3);
        assert!(m.terms.iter().all(|t| t.coeff == c(0.25, 0.0)));
    }

    #[test]
    fn xxz_zero_delta_equals_xy() {
        let lat = build_lattice(Geometry::Chain, &[5], Boundary::Open, 0.0).unwrap();
        let xxz = standard_model(StandardModel::Xxz { j: 2.0, delta: 0.0 }, &lat).unwrap();
        let xy = standard_model(StandardModel::Xy { j: 1.0 }, &lat).unwrap();
        assert!(strings_distance(&xxz.pauli_strings(), &xy.pauli_strings()) < 1e-15);
    }

    #[test]
    fn kitaev_needs_labels() {
        let hc = build_lattice(Geometry::Honeycomb, &[2, 2], Boundary::Periodic, 0.0).unwrap();
        let m = standard_model(StandardModel::Kitaev { jx: 1.0 / 3.0, jy: 1.0 / 3.0, jz: 1.0 / 3.0 }, &hc).unwrap();
        assert_eq!(m.terms.len(), 12);
        let chain = build_lattice(Geometry::Chain, &[4], Boundary::Open, 0.0).unwrap();
        assert!(matches!(standard_model(StandardModel::Kitaev { jx: 1.0, jy: 1.0, jz: 1.0 }, &chain), Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn non_hermitian_rejected() {
        let lat = build_lattice(Geometry::Chain, &[2], Boundary::Open, 0.0).unwrap();
        let t = PauliTerm::real(1.0, &[(0, PauliOp::Plus), (1, PauliOp::Minus)]);
        assert!(matches!(QubitModel::new(lat.clone(), vec![t.clone()]), Err(Error::NotHermitian(_))));
        QubitModel::new(lat, vec![t.clone(), t.dagger()]).unwrap();
    }

    #[test]
    fn repeated_site_rejected() {
        assert!(PauliTerm::new(ONE, vec![(0, PauliOp::X), (0, PauliOp::Z)]).is_err());
    }

    #[test]
    fn delta_terms_reproduce_kronecker() {
        let terms = potts_delta_terms(0, 1, 3, 2.0);
        for a in 0..3 {
            for b in 0..3 {
                let v: C64 = terms.iter().map(|t| t.coeff * t.factors[0].1.entries[(a, a)] * t.factors[1].1.entries[(b, b)]).sum();
                let want = if a == b { 2.0 } else { 0.0 };
                assert!((v - c(want, 0.0)).norm() < 1e-14);
            }
        }
    }
}
