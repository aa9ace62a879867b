use lil_core::algebra::Pattern;
use lil_core::corpus;
use lil_core::exact::{nullspace, Mat, Rational, Subspace};
use lil_core::ideals;
use lil_core::lie::{self, addend, AddendKind};
use lil_core::oracle;
use lil_core::random;
use proptest::prelude::*;

fn alg_from(seed: u64, n: usize) -> lil_core::DigraphAlgebra {
    let mut rng = random::rng(seed);
    random::pattern(&mut rng, n, 0.35).validate().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generation_agrees_with_sweeping_oracle(seed in any::<u64>(), n in 1usize..=4) {
        let alg = alg_from(seed, n);
        let mut rng = random::rng(seed ^ 1);
        let gens = corpus::generator_set(&mut rng, &alg);
        let l = lie::lie_generate(&alg, &gens).unwrap();
        prop_assert_eq!(&l, &oracle::lie_closure(&alg, &gens));
        prop_assert!(oracle::is_lie_ideal(&alg, &l));
        prop_assert_eq!(lie::lie_generate_subspace(&alg, &l).unwrap(), l);
    }

    #[test]
    fn decomposition_round_trips(seed in any::<u64>(), n in 1usize..=5) {
        let alg = alg_from(seed, n);
        let mut rng = random::rng(seed ^ 2);
        let gens = corpus::generator_set(&mut rng, &alg);
        let l = lie::lie_generate(&alg, &gens).unwrap();
        let dec = lie::decompose(&alg, &l).unwrap();
        prop_assert_eq!(dec.g.sum(&dec.k).unwrap(), l.clone());
        let desc = addend::classify_addend(&alg, &dec.ideal, &dec.g).unwrap();
        prop_assert_eq!(desc.to_subspace(&alg), l);
    }

    #[test]
    fn maximal_addend_is_a_lie_addend_and_largest(seed in any::<u64>(), n in 1usize..=5) {
        let alg = alg_from(seed, n);
        for k in ideals::enumerate_offdiag_ideals(&alg, 24).unwrap().into_iter().take(6) {
            let (f, _) = lie::maximal_addend(&alg, &k).unwrap();
            let ks = ideals::to_subspace(&alg, &k);
            prop_assert!(oracle::is_lie_ideal(&alg, &f.sum(&ks).unwrap()));
            if let Ok(descs) = addend::enumerate_descriptors(&alg, &k, 6) {
                for d in descs {
                    let s = d.to_subspace(&alg);
                    prop_assert!(oracle::is_lie_ideal(&alg, &s));
                    let g = lie::decompose(&alg, &s).unwrap().g;
                    prop_assert!(g.is_subspace_of(&f).unwrap());
                }
            }
            // Enlarging F by any diagonal unit outside it breaks the Lie property.
            let (e, _) = alg.diag_offdiag_split();
            for b in e.basis() {
                if !f.contains(b).unwrap() {
                    let mut bigger = f.sum(&ks).unwrap();
                    bigger.insert(b).unwrap();
                    prop_assert!(!oracle::is_lie_ideal(&alg, &bigger));
                }
            }
        }
    }

    #[test]
    fn triangular_formula_matches(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = random::rng(seed);
        let mut p = random::pattern(&mut rng, n, 0.4);
        for i in 0..n {
            for j in 0..i {
                p.set(i, j, false);
            }
        }
        let alg = p.closure().validate().unwrap();
        prop_assume!(alg.blocks().is_triangular());
        for k in ideals::enumerate_offdiag_ideals(&alg, 24).unwrap() {
            let (f, _) = lie::maximal_addend(&alg, &k).unwrap();
            prop_assert_eq!(Some(f), lie::triangular_constraint_space(&alg, &k));
        }
    }

    /// Block-diagonal x commuting with every unit from the first summand to
    /// the second is a scalar.
    #[test]
    fn two_summand_commutant_is_scalar(s1 in 1usize..=3, s2 in 1usize..=3) {
        let n = s1 + s2;
        let mut vars = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if (i < s1) == (j < s1) {
                    vars.push((i, j));
                }
            }
        }
        let mut rows = Vec::new();
        for a in 0..s1 {
            for b in s1..n {
                let d = Mat::unit(n, a, b);
                for r in 0..n {
                    for c in 0..n {
                        let row: Vec<Rational> = vars
                            .iter()
                            .map(|&(i, j)| {
                                let x = Mat::unit(n, i, j);
                                x.bracket(&d).unwrap().get(r, c).clone()
                            })
                            .collect();
                        rows.push(row);
                    }
                }
            }
        }
        let kernel = nullspace(&Mat::from_rows(rows).unwrap());
        let sols: Vec<Vec<Rational>> = kernel
            .iter()
            .map(|v| {
                let mut m = Mat::zeros(n, n);
                for (&(i, j), x) in vars.iter().zip(v) {
                    m.set(i, j, x.clone());
                }
                m.into_coords()
            })
            .collect();
        let s = Subspace::span(&sols, n * n).unwrap();
        prop_assert_eq!(s, Subspace::span_mats(&[Mat::identity(n)], n).unwrap());
    }
}

#[test]
fn full_matrix_descriptors_are_the_four() {
    for n in 1..=4 {
        let alg = Pattern::full(n).validate().unwrap();
        let descs = addend::enumerate_descriptors(&alg, &ideals::BlockIdeal::empty(), 4).unwrap();
        let expected = if n == 1 { 2 } else { 4 };
        assert_eq!(descs.len(), expected);
        let kinds: Vec<AddendKind> = descs.iter().map(|d| d.kinds[0]).collect();
        assert!(kinds.contains(&AddendKind::Zero) && kinds.contains(&AddendKind::Scalar));
    }
}
