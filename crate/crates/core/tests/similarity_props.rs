use lil_core::corpus;
use lil_core::exact::Mat;
use lil_core::lie;
use lil_core::oracle;
use lil_core::random;
use lil_core::similarity::{self, SimError};
use proptest::prelude::*;

fn alg_from(seed: u64, n: usize) -> lil_core::DigraphAlgebra {
    let mut rng = random::rng(seed);
    random::pattern(&mut rng, n, 0.4).validate().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_reconstructs(seed in any::<u64>(), n in 1usize..=6) {
        let alg = alg_from(seed, n);
        let (t, _, _) = random::invertible(&mut random::rng(seed ^ 3), &alg);
        let f = similarity::factor_dn(&alg, &t).unwrap();
        prop_assert_eq!(&f.d * &(&Mat::identity(n) + &f.n), t.clone());
        prop_assert_eq!(alg.pi(&f.n), Mat::zeros(n, n));
        prop_assert!(f.n.pow(f.nilpotence_order + 1).is_zero());
        if f.nilpotence_order > 0 {
            prop_assert!(!f.n.pow(f.nilpotence_order).is_zero());
        }
        let inv = similarity::invert_in_algebra(&alg, &t).unwrap();
        prop_assert_eq!(Some(inv.clone()), t.inverse());
        prop_assert!(alg.supports(&inv));
    }

    #[test]
    fn telescoping_equals_direct_conjugation(seed in any::<u64>(), n in 1usize..=6) {
        let alg = alg_from(seed, n);
        let mut rng = random::rng(seed ^ 4);
        let nil = random::nilpotent(&mut rng, &alg);
        let x = random::element(&mut rng, &alg, 0.6);
        let direct = oracle::conjugate(&(&Mat::identity(n) + &nil), &x).unwrap();
        prop_assert_eq!(similarity::telescoping_conjugation(&alg, &nil, &x).unwrap(), direct);
    }

    #[test]
    fn generated_ideals_are_invariant(seed in any::<u64>(), n in 1usize..=5) {
        let alg = alg_from(seed, n);
        let mut rng = random::rng(seed ^ 5);
        let l = lie::lie_generate(&alg, &corpus::generator_set(&mut rng, &alg)).unwrap();
        let r = similarity::check_similarity_invariance(&alg, &l, 12, seed).unwrap();
        prop_assert!(r.invariant());
    }

    #[test]
    fn exp_series_matches_for_nilpotents(seed in any::<u64>(), n in 1usize..=5) {
        let alg = alg_from(seed, n);
        let mut rng = random::rng(seed ^ 6);
        let a = random::nilpotent(&mut rng, &alg);
        let x = random::element(&mut rng, &alg, 0.6);
        let r = similarity::exp_conjugation_check(&alg, &a, &x, 2 * n + 1, true).unwrap();
        prop_assert!(r.passed());
    }
}

#[test]
fn reports_are_reproducible() {
    let alg = alg_from(11, 4);
    let l = alg.subspace();
    let a = similarity::check_similarity_invariance(&alg, &l, 10, 99).unwrap();
    let b = similarity::check_similarity_invariance(&alg, &l, 10, 99).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.seed, 99);
}

#[test]
fn singular_blocks_are_reported() {
    let alg = lil_core::Pattern::full(2).validate().unwrap();
    assert_eq!(
        similarity::invert_in_algebra(&alg, &Mat::from_ints(&[[1, 2], [2, 4]])),
        Err(SimError::Singular { block: 0 })
    );
}
