//! The invariant battery: eleven numbered checks, each with a wall-time
//! budget. Shared by the `--selftest` flag and the acceptance test target.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bose_hubbard::{self, BhVersion, PresetParams, DENSITY_SCALE};
use crate::ed::{convergence_sweep, two_site_spt};
use crate::error::Result;
use crate::kitaev::{self, KitaevParams, PhaseLabel, ScanNumerics};
use crate::linalg::{c, eigvalsh, max_abs, ONE};
use crate::model::{build_lattice, standard_model, strings_distance, Axis, Boundary, Geometry, Lattice, PauliOp, PauliTerm, QubitModel, StandardModel};
use crate::potts;
use crate::qudit::{check_symmetry, make_fixed_matrix, pauli_algebra_residual, projective_phase, x_of_q, AntiUnitaryOp, FixedMatrix, QuditOperator};
use crate::rydberg;
use crate::transmute::{effective_qubit_model, special_q, three_state_sz, transmute_qubit_model, FieldSpec, TransmutePath};

const SQRT3: f64 = 1.732_050_807_568_877_2;

pub const CRITERIA: usize = 11;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionReport {
    /// Outcome without timings, stable across runs.
    pub fn verdict(&self) -> String {
        format!("[{}] {:>2} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }

    pub fn line(&self) -> String {
        format!("{} ({:.2}s of {}s)", self.verdict(), self.elapsed.as_secs_f64(), self.budget.as_secs())
    }
}

/// Result of the numeric body: overall verdict plus a one-line summary.
type Outcome = Result<(bool, String)>;

fn meta(id: usize) -> (&'static str, u64, fn() -> Outcome) {
    match id {
        1 => ("field-spectra", 1, field_spectra),
        2 => ("pauli-algebra", 1, pauli_algebra),
        3 => ("roundtrip", 10, roundtrip),
        4 => ("large-lambda-convergence", 120, convergence),
        5 => ("kitaev-solvable-line", 120, kitaev_line),
        6 => ("phase-scan", 60, phase_scan),
        7 => ("two-site-spt", 1, spt),
        8 => ("potts-perturbation", 60, potts_check),
        9 => ("rydberg-ratios", 1, rydberg_ratios),
        10 => ("bose-hubbard", 60, bose_hubbard_check),
        11 => ("symmetry-ledger", 1, symmetry_ledger),
        _ => unreachable!("criterion ids run from 1 to {CRITERIA}"),
    }
}

/// Run one criterion; `id` must lie in `1..=CRITERIA`.
pub fn run_criterion(id: usize) -> CriterionReport {
    let (name, budget, body) = meta(id);
    let budget = Duration::from_secs(budget);
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let within = elapsed <= budget;
    let detail = if within { detail } else { format!("{detail}; over time budget") };
    CriterionReport { id, name, passed: ok && within, detail, elapsed, budget }
}

pub fn run_all() -> Vec<CriterionReport> {
    (1..=CRITERIA).map(run_criterion).collect()
}

fn spectrum_is_pm_sqrt3(m: &QuditOperator) -> f64 {
    let w = eigvalsh(&m.entries);
    w.iter().zip([-SQRT3, -SQRT3, SQRT3, SQRT3]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn field_spectra() -> Outcome {
    let mut worst = spectrum_is_pm_sqrt3(&make_fixed_matrix(FixedMatrix::X4, 0.0));
    for q in [0.0, 0.1, special_q(), 0.5] {
        worst = worst.max(spectrum_is_pm_sqrt3(&x_of_q(q)?));
    }
    Ok((worst <= 1e-10, format!("max eigenvalue deviation {worst:.3e}")))
}

fn pauli_algebra() -> Outcome {
    let mut worst: f64 = 0.0;
    for phi in [0.0, FRAC_PI_4, 1.0] {
        let basis = FieldSpec::four_state_x(phi).doublet()?.basis;
        let mut imgs = Vec::with_capacity(3);
        for m in [FixedMatrix::Zx, FixedMatrix::Zy, FixedMatrix::Zz] {
            imgs.push(QuditOperator { entries: basis.project(&make_fixed_matrix(m, phi).entries)? * c(SQRT3, 0.0) });
        }
        worst = worst.max(pauli_algebra_residual(&imgs[0], &imgs[1], &imgs[2])?);
    }
    // Three-state: sigma^+ from Z3, sigma^z from the chiral field partner.
    let basis = FieldSpec::three_state_sym(0.0).doublet()?.basis;
    let plus = basis.project(&make_fixed_matrix(FixedMatrix::Z3, 0.0).entries)?;
    let sx = QuditOperator { entries: &plus + plus.adjoint() };
    let sy = QuditOperator { entries: (&plus - plus.adjoint()) * c(0.0, -1.0) };
    let sz = QuditOperator { entries: basis.project(&three_state_sz().entries)? };
    worst = worst.max(pauli_algebra_residual(&sx, &sy, &sz)?);
    Ok((worst <= 1e-12, format!("max residual {worst:.3e}")))
}

fn random_term(rng: &mut ChaCha8Rng, nsites: usize, ops: &[PauliOp]) -> Result<PauliTerm> {
    let k = rng.gen_range(1..=3.min(nsites));
    let mut sites: Vec<usize> = (0..nsites).collect();
    for i in 0..k {
        let j = rng.gen_range(i..nsites);
        sites.swap(i, j);
    }
    let factors = sites[..k].iter().map(|&s| (s, ops[rng.gen_range(0..ops.len())])).collect();
    PauliTerm::new(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), factors)
}

/// Hermitian random model; the three-state path gets sigma^z only as fields.
fn random_model(rng: &mut ChaCha8Rng, path: TransmutePath) -> Result<QubitModel> {
    let n = rng.gen_range(1..=4);
    let ops: &[PauliOp] = match path {
        TransmutePath::FourState => &[PauliOp::X, PauliOp::Y, PauliOp::Z, PauliOp::Plus, PauliOp::Minus],
        TransmutePath::ThreeState => &[PauliOp::X, PauliOp::Y, PauliOp::Plus, PauliOp::Minus],
    };
    let mut terms = Vec::new();
    for _ in 0..4 {
        let t = random_term(rng, n, ops)?;
        terms.push(t.dagger());
        terms.push(t);
    }
    if path == TransmutePath::ThreeState {
        terms.push(PauliTerm::real(rng.gen_range(-1.0..1.0), &[(rng.gen_range(0..n), PauliOp::Z)]));
    }
    QubitModel::new(Lattice::custom(n, vec![])?, terms)
}

/// Largest coefficient error over `count` random transmute-and-project
/// round trips, alternating the two paths.
pub fn roundtrip_battery(seed: u64, count: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for trial in 0..count {
        let path = if trial % 2 == 0 { TransmutePath::FourState } else { TransmutePath::ThreeState };
        let m = random_model(&mut rng, path)?;
        let phi = rng.gen_range(-PI..PI);
        let back = effective_qubit_model(&transmute_qubit_model(&m, phi, path)?)?;
        worst = worst.max(strings_distance(&back.pauli_strings(), &m.pauli_strings()));
    }
    Ok(worst)
}

fn roundtrip() -> Outcome {
    let worst = roundtrip_battery(2024, 50)?;
    Ok((worst <= 1e-12, format!("50 models, max coefficient error {worst:.3e}")))
}

fn convergence() -> Outcome {
    let lat = build_lattice(Geometry::Chain, &[3], Boundary::Periodic, 0.0)?;
    let lambdas = [50.0, 100.0, 200.0, 400.0];
    let heis = standard_model(StandardModel::Heisenberg { j: 1.0 }, &lat)?;
    let xy = standard_model(StandardModel::Xy { j: 1.0 }, &lat)?;
    let cases = [
        ("heisenberg", transmute_qubit_model(&heis, 0.0, TransmutePath::FourState)?, heis),
        ("xy", transmute_qubit_model(&xy, 0.0, TransmutePath::ThreeState)?, xy),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, ising, target) in &cases {
        let t = convergence_sweep(ising, target, &lambdas, 8)?;
        let monotone = t.rows.windows(2).all(|w| w[1].spectral_error < w[0].spectral_error);
        let p = t.exponent.unwrap_or(f64::NAN);
        ok &= monotone && (0.8..=1.2).contains(&p);
        parts.push(format!("{name} p={p:.4} monotone={monotone}"));
    }
    Ok((ok, parts.join(", ")))
}

fn kitaev_line() -> Outcome {
    let iso = |l: f64| KitaevParams::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, l);
    let lc = kitaev::critical_fields(&iso(0.0)?).lambda_c;
    let lc_ok = (lc - 1.0 / SQRT3).abs() < 1e-14;
    let at = kitaev::gap(&iso(lc)?, kitaev::DEFAULT_GAP_GRID)?;
    let mut away = f64::INFINITY;
    for m in [0.9, 0.95, 1.05, 1.1] {
        away = away.min(kitaev::gap(&iso(m * lc)?, kitaev::DEFAULT_GAP_GRID)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut det: f64 = 0.0;
    for _ in 0..100 {
        let p = KitaevParams::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0))?;
        det = det.max(kitaev::corner_det_check(&p));
    }
    let grid = kitaev::DEFAULT_CHERN_GRID;
    let odd = kitaev::chern_number(&iso(1.0)?, grid)?.rem_euclid(2) == 1;
    let even_low = kitaev::chern_number(&iso(0.3)?, grid)?.rem_euclid(2) == 0;
    let even_a = kitaev::chern_number(&KitaevParams::from_scaled(1.0, 1.0, 6.0, 10.0)?, grid)?.rem_euclid(2) == 0;
    let ok = lc_ok && at <= 1e-6 && away >= 1e-3 && det <= 1e-10 && odd && even_low && even_a;
    Ok((
        ok,
        format!(
            "lambda_c={lc:.12}, gap at lambda_c {at:.3e}, min gap nearby {away:.3e}, corner det {det:.3e}, parities odd/even/even={odd}/{even_low}/{even_a}"
        ),
    ))
}

fn phase_scan() -> Outcome {
    let res = 60;
    let third = res / 3;
    let find = |pts: &[kitaev::ScanPoint], idx| pts.iter().find(|p| p.index == idx).map(|p| p.label);
    let high = kitaev::phase_scan(2.31, res, 1.0, ScanNumerics::default())?;
    let centre = find(&high, (third, third, third));
    let corners = [find(&high, (res, 0, 0)), find(&high, (0, res, 0)), find(&high, (0, 0, res))];
    let low = kitaev::phase_scan(0.23, res, 1.0, ScanNumerics::default())?;
    let low_centre = find(&low, (third, third, third));
    let ok = centre == Some(PhaseLabel::Chiral)
        && corners == [Some(PhaseLabel::A(Axis::X)), Some(PhaseLabel::A(Axis::Y)), Some(PhaseLabel::A(Axis::Z))]
        && low_centre == Some(PhaseLabel::LowFieldZ2);
    let name = |l: Option<PhaseLabel>| l.map(|l| l.name()).unwrap_or("missing");
    Ok((
        ok,
        format!(
            "lambda=2.31 centre {} corners {}/{}/{}; lambda=0.23 centre {}",
            name(centre),
            name(corners[0]),
            name(corners[1]),
            name(corners[2]),
            name(low_centre)
        ),
    ))
}

fn spt() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut pattern_ok = true;
    for lambda in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let r = two_site_spt(1.0, lambda)?;
        worst = worst.max((r.report.entropy - 2f64.ln()).abs());
        min_gap = min_gap.min(r.gap);
        pattern_ok &= r.report.degeneracy_pattern == [2];
    }
    Ok((worst <= 1e-10 && min_gap > 0.0 && pattern_ok, format!("max |S - ln 2| {worst:.3e}, min gap {min_gap:.6}, twofold Schmidt {pattern_ok}")))
}

fn potts_check() -> Outcome {
    let root = potts::threshold_lambda(1.0)?;
    let k = potts::luttinger_k(potts::threshold_delta())?;
    let rows = potts::validate_against_ed(1.0, &[20.0, 40.0, 80.0], 3, Boundary::Open)?;
    let better = rows.iter().all(|r| r.err_second_order < r.err_first_order);
    let worst_ratio = rows.windows(2).map(|w| w[1].err_second_order / w[0].err_second_order).fold(0.0, f64::max);
    let ok = (3.0..=3.1).contains(&root) && (k - 9.0 / 8.0).abs() <= 1e-12 && better && worst_ratio <= 0.3;
    Ok((ok, format!("threshold lambda/J {root:.6}, K {k:.15}, err2<err1 {better}, err2 doubling ratio {worst_ratio:.4}")))
}

fn rydberg_ratios() -> Outcome {
    let ratio = |name: &str| -> Result<f64> {
        let case = rydberg::c6_case(name)?;
        Ok(rydberg::couplings(&rydberg::PairEnergies::from_c6(case.at(1.0))?).ratio())
    };
    let k56 = ratio("K-56-58-s+1")?;
    let k89 = ratio("K-89-92-s-1")?;
    let rb = ratio("Rb-82-85-s-1")?;
    let ok = k56 < 0.003 && (k89 - 0.0009).abs() <= 0.0002 && rb < 2e-5;
    Ok((ok, format!("K56/58 {k56:.6}, K89/92 {k89:.6}, Rb82/85 {rb:.3e}")))
}

fn bose_hubbard_check() -> Outcome {
    let inter = PresetParams::interaction(100.0, [1.0; 3], [0.0; 3]);
    let j_over_v = bose_hubbard::effective_kitaev(&inter)?.j[0];
    let nu = bose_hubbard::zero_field_nu(&inter)?[0];
    let hop = PresetParams::hopping(1e4, 100.0, [1.0; 3], [0.0; 3]);
    let jw = bose_hubbard::effective_kitaev(&hop)?.j[0] * 100.0;
    let e1 = (j_over_v - (2.0 - SQRT3) / 6.0).abs();
    let e2 = (nu + 1.0 / DENSITY_SCALE).abs();
    let e3 = (jw + (2.0 - SQRT3) / 12.0).abs();
    let mut mismatches = Vec::new();
    for ratio in [10.0, 30.0, 100.0] {
        mismatches.push(bose_hubbard::verify_small_cluster(BhVersion::Interaction, ratio, 4)?.mismatch);
    }
    let decreasing = mismatches.windows(2).all(|w| w[1] < w[0]);
    let ok = e1 <= 1e-14 && e2 <= 1e-14 && e3 <= 1e-14 && mismatches[0] <= 0.05 && decreasing;
    Ok((
        ok,
        format!(
            "constant errors {e1:.1e}/{e2:.1e}/{e3:.1e}, cluster mismatch at ratios 10/30/100: {:.4}/{:.4}/{:.4}",
            mismatches[0], mismatches[1], mismatches[2]
        ),
    ))
}

fn symmetry_ledger() -> Outcome {
    let x = make_fixed_matrix(FixedMatrix::X4, 0.0);
    let mut worst: f64 = 0.0;
    for t in [FixedMatrix::S12, FixedMatrix::S13, FixedMatrix::S14, FixedMatrix::S23, FixedMatrix::S24, FixedMatrix::S34, FixedMatrix::T] {
        worst = worst.max(check_symmetry(&AntiUnitaryOp::transposition(t)?, &x)?);
    }
    for u in [FixedMatrix::U123, FixedMatrix::U12_34, FixedMatrix::U13_24, FixedMatrix::U14_23] {
        worst = worst.max(check_symmetry(&AntiUnitaryOp::unitary(make_fixed_matrix(u, 0.0))?, &x)?);
    }
    let phase = projective_phase(&make_fixed_matrix(FixedMatrix::U12_34, 0.0), &make_fixed_matrix(FixedMatrix::U13_24, 0.0))?;
    let pair_sum =
        [FixedMatrix::IcXY, FixedMatrix::IcYZ, FixedMatrix::IcZX].iter().map(|&m| make_fixed_matrix(m, 0.0).entries).fold(x.entries.scale(0.0), |a, b| a + b);
    let rebase = QuditOperator::diagonal(&[ONE, c(0.0, -1.0), -ONE, -ONE]).entries;
    let majorana = max_abs(&(rebase.adjoint() * pair_sum * &rebase + &x.entries));
    let ok = worst <= 1e-14 && (phase + ONE).norm() <= 1e-14 && majorana <= 1e-14;
    Ok((ok, format!("max generator residual {worst:.1e}, Klein phase {:.3}{:+.3}i, Majorana residual {majorana:.1e}", phase.re, phase.im)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        for id in [1, 2, 3, 7, 9, 11] {
            let r = run_criterion(id);
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn roundtrip_battery_is_seeded() {
        assert_eq!(roundtrip_battery(3, 6).unwrap(), roundtrip_battery(3, 6).unwrap());
    }

    #[test]
    fn report_line_shape() {
        let r = run_criterion(1);
        assert!(r.line().starts_with("[PASS]  1 field-spectra:"));
        assert!(!r.verdict().contains("s of"));
    }
}
