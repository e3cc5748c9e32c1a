//! Cross-module checks through the public API only.

use ising_forge::ed::{assemble, lowest_k_values};
use ising_forge::kitaev::{self, KitaevParams};
use ising_forge::model::{build_lattice, standard_model, strings_distance, Boundary, Geometry, StandardModel};
use ising_forge::model_io::{self, ModelFile};
use ising_forge::transmute::{effective_qubit_model, transmute_qubit_model, TransmutePath};
use ising_forge::{bose_hubbard, potts, rydberg};

#[test]
fn file_roundtrip_preserves_the_effective_model() {
    let lat = build_lattice(Geometry::Square, &[2, 2], Boundary::Open, 0.0).unwrap();
    let xxz = standard_model(StandardModel::Xxz { j: 0.8, delta: -0.4 }, &lat).unwrap();
    let ising = transmute_qubit_model(&xxz, 0.3, TransmutePath::FourState).unwrap().with_lambda(7.0);
    let text = model_io::to_string(&ModelFile::Ising(ising.clone()));
    let ModelFile::Ising(back) = model_io::from_str(&text).unwrap() else { panic!("kind changed") };
    assert_eq!(back.lambda, Some(7.0));
    let eff = effective_qubit_model(&back).unwrap();
    assert!(strings_distance(&eff.pauli_strings(), &xxz.pauli_strings()) < 1e-12);
}

#[test]
fn kitaev_clock_model_projects_to_kitaev_couplings() {
    let lat = build_lattice(Geometry::Honeycomb, &[2, 1], Boundary::Open, 0.0).unwrap();
    let p = KitaevParams::new(0.2, -0.5, 0.3, 1.0).unwrap();
    let clock = kitaev::kitaev_ising_model(&lat, &p).unwrap();
    let target = standard_model(StandardModel::Kitaev { jx: 0.2, jy: -0.5, jz: 0.3 }, &lat).unwrap();
    let eff = effective_qubit_model(&clock).unwrap();
    assert!(strings_distance(&eff.pauli_strings(), &target.pauli_strings()) < 1e-12);
}

#[test]
fn potts_second_order_beats_first_order_on_a_ring() {
    let rows = potts::validate_against_ed(1.0, &[30.0, 60.0], 4, Boundary::Periodic).unwrap();
    for r in &rows {
        assert!(r.err_second_order < r.err_first_order, "{r:?}");
    }
    assert!(rows[1].err_second_order / rows[0].err_second_order < 0.3);
}

#[test]
fn rydberg_qutrit_model_converges_to_its_projection() {
    let lat = build_lattice(Geometry::Chain, &[3], Boundary::Open, 0.0).unwrap();
    let pe = rydberg::PairEnergies::new(-1.0, -0.6, 0.4).unwrap();
    let projected = effective_qubit_model(&rydberg::qutrit_model(&pe, &lat, 1.0).unwrap()).unwrap();
    // Two-site strings are the pair-creation / flip-flop model; bare pair
    // energies also leave single-site terms behind.
    let spin = rydberg::effective_spin_model(&pe, &lat).unwrap().pauli_strings();
    let two_site: std::collections::BTreeMap<_, _> = projected.pauli_strings().into_iter().filter(|(k, _)| k.len() == 2).collect();
    assert!(strings_distance(&two_site, &spin) < 1e-12);
    let k = 8;
    let e_eff = lowest_k_values(&assemble(&projected).unwrap(), k).unwrap().excitations();
    let err = |lambda: f64| {
        let q = rydberg::qutrit_model(&pe, &lat, lambda).unwrap();
        let e = lowest_k_values(&assemble(&q).unwrap(), k).unwrap().excitations();
        e.iter().zip(&e_eff).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    let (a, b) = (err(100.0), err(200.0));
    assert!(b < a && b < 0.05, "{a} {b}");
}

#[test]
fn bose_hubbard_presets_from_disk_match_bundled() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("presets");
    for (file, version) in [("bh_interaction.json", bose_hubbard::BhVersion::Interaction), ("bh_hopping.json", bose_hubbard::BhVersion::Hopping)] {
        let text = std::fs::read_to_string(dir.join(file)).unwrap();
        assert_eq!(bose_hubbard::PresetParams::from_json(&text).unwrap(), bose_hubbard::PresetParams::bundled(version));
    }
}
