use xychain::circuits::u_dis;
use xychain::xymodel::{all_eigen_energies, dense_hamiltonian, ModelParams};

#[test]
fn u_dis_diagonalizes_small_chains() {
    for &(n, j, g, l) in &[
        (4, 1.0, 1.0, 0.5),
        (4, -1.0, 0.5, 1.25),
        (8, 1.0, 0.5, 0.3),
        (8, -1.0, 1.0, 1.7),
    ] {
        let params = ModelParams::new(n, j, g, l).unwrap();
        let h = dense_hamiltonian(&params).unwrap();
        let u = u_dis(&params).unwrap().to_unitary().unwrap();
        let d = h.conjugate_by(&u).unwrap();
        assert!(
            d.off_diagonal_norm() < 1e-8 * h.frobenius_norm(),
            "{n} {j} {g} {l}"
        );
        let want = all_eigen_energies(&params).unwrap();
        for (a, b) in d.diagonal().iter().zip(&want) {
            assert!((a.re - b).abs() < 1e-8);
        }
    }
}
