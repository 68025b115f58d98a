mod common;

use num_complex::Complex64;
use xychain::circuits::{bog_layer, bog_sort_network, fft_circuit, jw_layer, u_dis};
use xychain::observables::{
    energy_exact, estimate_energy_diagonal, estimate_energy_grouped, estimate_mz_shots,
    mz_per_site, pauli_expectation,
};
use xychain::statevector::StateVector;
use xychain::xymodel::{
    all_eigen_energies, dense_hamiltonian, first_excited_bitstring, ground_bitstring,
    gs_mz_closed_form, ModelParams, PauliString,
};

fn params(n: usize, j: f64, g: f64, l: f64) -> ModelParams {
    ModelParams::new(n, j, g, l).unwrap()
}

#[test]
fn dense_hamiltonian_matches_kronecker_reference() {
    for &(n, j, g, l) in &[(4, 1.0, 0.0, 0.5), (4, -0.7, 0.3, 1.9), (8, 1.0, 1.0, 0.25)] {
        let ours = dense_hamiltonian(&params(n, j, g, l)).unwrap();
        let reference = common::hamiltonian(n, j, g, l);
        let diff = (ours.matrix() - &reference)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-14, "n={n}: {diff}");
    }
}

#[test]
fn ground_and_excited_match_brute_force() {
    for n in [4usize, 8] {
        for &j in &[1.0, -1.0] {
            for &g in &[0.0, 0.5, 1.0] {
                for &l in &[0.0, 0.3, 0.5, 0.8, 1.0, 1.4, 2.0] {
                    let p = params(n, j, g, l);
                    let mut all: Vec<(f64, usize)> = (0..1usize << n)
                        .map(|i| (common::diag_energy(i, n, j, g, l), i))
                        .collect();
                    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                    let gs = ground_bitstring(&p).unwrap();
                    let ex = first_excited_bitstring(&p).unwrap();
                    assert!(
                        (gs.energy - all[0].0).abs() < 1e-10,
                        "gs n={n} j={j} γ={g} λ={l}"
                    );
                    assert!(
                        (ex.energy - all[1].0).abs() < 1e-10,
                        "excited n={n} j={j} γ={g} λ={l}"
                    );
                    let tied = all.iter().take_while(|e| e.0 - all[0].0 < 1e-10).count();
                    assert_eq!(gs.degenerate, tied > 1);
                    // lexicographically smallest bitstring is the smallest index
                    let smallest = all.iter().take(tied).map(|e| e.1).min().unwrap();
                    assert_eq!(
                        gs.bits,
                        common::bits_of(smallest, n),
                        "n={n} j={j} γ={g} λ={l}"
                    );
                }
            }
        }
    }
}

#[test]
fn eight_site_symmetric_ground_states() {
    // modes ±3 have ε < 0 until λ = cos(π/4)
    assert_eq!(
        ground_bitstring(&params(8, 1., 0., 0.5)).unwrap().bits,
        "01000011"
    );
    assert_eq!(
        ground_bitstring(&params(8, 1., 0., 0.8)).unwrap().bits,
        "01000000"
    );
    assert_eq!(
        ground_bitstring(&params(8, 1., 0., 1.5)).unwrap().bits,
        "00000000"
    );
    assert_eq!(
        ground_bitstring(&params(4, 1., 0., 0.5)).unwrap().bits,
        "0100"
    );
}

#[test]
fn particle_hole_symmetry() {
    for n in [4usize, 8] {
        let mut e = all_eigen_energies(&params(n, 1., 0., 0.)).unwrap();
        e.sort_by(f64::total_cmp);
        for i in 0..e.len() {
            assert!((e[i] + e[e.len() - 1 - i]).abs() < 1e-10);
        }
    }
}

#[test]
fn symmetric_model_skips_bogoliubov() {
    for &l in &[0.2, 0.5, 1.7] {
        let p = params(4, 1., 0., l);
        let layer = bog_layer(&p).unwrap();
        assert!(
            layer
                .to_unitary()
                .unwrap()
                .max_abs_diff(&xychain::dense::DenseOperator::identity(4).unwrap())
                < 1e-15
        );
        let mut partial = jw_layer(4).unwrap();
        partial.append(&fft_circuit(4).unwrap()).unwrap();
        partial.append(&bog_sort_network(4).unwrap()).unwrap();
        let full = u_dis(&p).unwrap();
        for idx in 0..16 {
            let b = StateVector::basis_index(4, idx).unwrap();
            let d = full
                .apply_to(&b)
                .unwrap()
                .max_abs_diff(&partial.apply_to(&b).unwrap());
            assert!(d < 1e-12);
        }
    }
    let theta = bog_layer(&params(4, 1., 1., 0.5)).unwrap().ops()[1]
        .gate
        .params()[0];
    assert!((theta - 2f64.atan()).abs() < 1e-15);
}

fn oracle_ground_state(p: &ModelParams) -> StateVector {
    dense_hamiltonian(p).unwrap().eigh().unwrap().vectors[0].clone()
}

#[test]
fn magnetization_limits() {
    let gs = oracle_ground_state(&params(4, 1., 1., 50.));
    assert!((mz_per_site(&gs) + 1.0).abs() < 1e-3);
    let gs = oracle_ground_state(&params(4, 1., 1., 0.5));
    let mz: f64 = (0..4)
        .map(|i| {
            let mut letters = ['I'; 4];
            letters[i] = 'Z';
            pauli_expectation(
                &gs,
                &PauliString::parse(1.0, &letters.iter().collect::<String>()).unwrap(),
            )
            .unwrap()
        })
        .sum::<f64>()
        / 4.0;
    assert!((mz - gs_mz_closed_form(0.5)).abs() < 1e-8);
}

#[test]
fn exact_energy_examples() {
    let p = params(4, 1., 0., 2.);
    let psi = u_dis(&p)
        .unwrap()
        .dagger()
        .apply_to(&StateVector::basis("0000").unwrap())
        .unwrap();
    assert!((energy_exact(&psi, &p).unwrap() + 8.0).abs() < 1e-8);
    // maximally mixed state: the basis-state average is tr(H)/2^n = 0
    let q = params(4, 1., 0.4, 1.2);
    let avg: f64 = (0..16)
        .map(|i| energy_exact(&StateVector::basis_index(4, i).unwrap(), &q).unwrap())
        .sum::<f64>()
        / 16.0;
    assert!(avg.abs() < 1e-12);
    // |+⟩^n only sees the neighbour XX terms
    let uniform = StateVector::from_amplitudes(vec![Complex64::new(0.25, 0.); 16]).unwrap();
    assert!((energy_exact(&uniform, &q).unwrap() - 0.7 * 3.0).abs() < 1e-12);
    assert!(energy_exact(&StateVector::zero(13).unwrap(), &params(4, 1., 0., 0.)).is_err());
}

#[test]
fn estimators_on_eigenstates() {
    let p = params(4, 1., 1., 0.5);
    let gs = ground_bitstring(&p).unwrap();
    let psi = u_dis(&p)
        .unwrap()
        .dagger()
        .apply_to(&StateVector::basis(&gs.bits).unwrap())
        .unwrap();
    for seed in 0..5 {
        let est = estimate_energy_grouped(&psi, &p, 1000, seed).unwrap();
        assert!((est.mean - gs.energy).abs() < 5.0 * est.std_error);
        assert_eq!(est.basis_groups, 3);
    }
    let diag = estimate_energy_diagonal(&psi, &p, 1000, 1).unwrap();
    assert!((diag.mean - gs.energy).abs() < 1e-12);
    assert!(diag.std_error < 1e-12);
    let est = estimate_mz_shots(&psi, 1000, 2).unwrap();
    assert!((est.mean - gs_mz_closed_form(0.5)).abs() < 5.0 * est.std_error);
}

#[test]
fn estimators_converge_in_almost_all_trials() {
    let p = params(4, 0.8, 0.4, 0.9);
    let psi = StateVector::random(4, 77).unwrap();
    let exact_e = energy_exact(&psi, &p).unwrap();
    let exact_m = mz_per_site(&psi);
    let trials = 100;
    let mut inside = 0;
    for seed in 0..trials {
        let e = estimate_energy_grouped(&psi, &p, 10_000, seed).unwrap();
        let m = estimate_mz_shots(&psi, 10_000, seed + 1000).unwrap();
        if (e.mean - exact_e).abs() < 5.0 * e.std_error
            && (m.mean - exact_m).abs() < 5.0 * m.std_error
        {
            inside += 1;
        }
    }
    assert!(inside >= 99, "{inside} of {trials}");
}
