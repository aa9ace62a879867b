use lil_core::nest::{self, Atoms};
use lil_core::random;
use num_complex::Complex64;
use proptest::prelude::*;

fn atoms() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1usize..=4, 1..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn path_is_multiplicative(sizes in atoms(), seed in any::<u64>(), r in 0.0f64..=1.0, phi in 0.0f64..6.3) {
        let atoms = Atoms::new(&sizes).unwrap();
        let mut rng = random::rng(seed);
        let a = nest::random_block_upper(&mut rng, &atoms);
        let b = nest::random_block_upper(&mut rng, &atoms);
        let z = Complex64::from_polar(r, phi);
        let lhs = nest::path(&atoms, &(&a * &b), z).unwrap();
        let rhs = nest::path(&atoms, &a, z).unwrap() * nest::path(&atoms, &b, z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (&a * &b).norm().max(1.0));
    }

    #[test]
    fn boundary_conjugation_and_norms(sizes in atoms(), seed in any::<u64>(), theta in 0.0f64..6.3) {
        let atoms = Atoms::new(&sizes).unwrap();
        let a = nest::random_block_upper(&mut random::rng(seed), &atoms);
        let res = nest::boundary_conjugation_residual(&atoms, &a, theta).unwrap();
        prop_assert!(res <= nest::BOUNDARY_TOL * a.norm());
        let report = nest::norm_bound_check(&atoms, &a, &nest::disk_samples(24, seed)).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn unitary_columns_are_orthonormal(sizes in atoms(), theta in -7.0f64..7.0) {
        let atoms = Atoms::new(&sizes).unwrap();
        let u = nest::u_theta(&atoms, theta);
        let n = atoms.n();
        prop_assert!((u.adjoint() * &u - nest::CMatrix::identity(n, n)).norm() < 1e-12);
    }
}

#[test]
fn outside_disk_is_rejected() {
    let atoms = Atoms::new(&[1, 1]).unwrap();
    let a = nest::CMatrix::identity(2, 2);
    assert!(nest::path(&atoms, &a, Complex64::new(1.0 + 1e-13, 0.0)).is_ok());
    assert!(nest::path(&atoms, &a, Complex64::new(0.0, 1.0001)).is_err());
}
