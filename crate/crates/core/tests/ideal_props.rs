use std::collections::BTreeSet;

use lil_core::algebra::Pattern;
use lil_core::corpus;
use lil_core::ideals::{self, BlockIdeal};
use lil_core::oracle;
use lil_core::random;
use proptest::prelude::*;

/// Naive up-set count over all subsets of strict block pairs, using only the
/// block order.
fn upsets_by_subsets(alg: &lil_core::DigraphAlgebra) -> usize {
    let bs = alg.blocks();
    let pairs = bs.strict_pairs();
    (0u32..(1 << pairs.len()))
        .filter(|mask| {
            let chosen: BTreeSet<(usize, usize)> =
                (0..pairs.len()).filter(|b| mask >> b & 1 == 1).map(|b| pairs[b]).collect();
            chosen.iter().all(|&(u, v)| {
                pairs.iter().all(|&(t, s)| !(bs.leq(t, u) && bs.leq(v, s)) || chosen.contains(&(t, s)))
            })
        })
        .count()
}

#[test]
fn enumeration_matches_both_oracles_on_every_small_pattern() {
    for alg in corpus::exhaustive(4) {
        let found = ideals::enumerate_offdiag_ideals(&alg, 24).unwrap();
        let distinct: BTreeSet<_> = found.iter().cloned().collect();
        assert_eq!(distinct.len(), found.len());
        assert_eq!(found.len(), upsets_by_subsets(&alg), "{:?}", alg.pattern());
        assert_eq!(found.len(), oracle::count_offdiag_ideals(&alg), "{:?}", alg.pattern());
    }
}

#[test]
fn triangular_counts_are_catalan() {
    let counts: Vec<usize> = (1..=6)
        .map(|n| ideals::enumerate_offdiag_ideals(&Pattern::upper_triangular(n).validate().unwrap(), 24).unwrap().len())
        .collect();
    assert_eq!(counts, vec![1, 2, 5, 14, 42, 132]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_a_closure_operator(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = random::rng(seed);
        let alg = random::pattern(&mut rng, n, 0.35).validate().unwrap();
        let pairs = alg.blocks().strict_pairs();
        prop_assume!(!pairs.is_empty());
        let pick = |mask: u64| -> Vec<(usize, usize)> {
            pairs.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, p)| *p).collect()
        };
        let a = pick(seed);
        let b: Vec<_> = a.iter().copied().chain(pick(seed.rotate_left(17))).collect();
        let ca = ideals::ideal_closure(&alg, &a).unwrap();
        let cb = ideals::ideal_closure(&alg, &b).unwrap();
        prop_assert!(a.iter().all(|&(u, v)| ca.contains(u, v)));
        prop_assert!(ca.pairs().is_subset(cb.pairs()));
        let again: Vec<_> = ca.pairs().iter().copied().collect();
        prop_assert_eq!(ideals::ideal_closure(&alg, &again).unwrap(), ca.clone());
        prop_assert!(ca.is_up_closed(&alg));
        prop_assert!(oracle::is_ideal(&alg, &ideals::to_subspace(&alg, &ca)));
    }

    #[test]
    fn subspace_round_trip(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = random::rng(seed);
        let alg = random::pattern(&mut rng, n, 0.4).validate().unwrap();
        for k in ideals::enumerate_offdiag_ideals(&alg, 24).unwrap() {
            let s = ideals::to_subspace(&alg, &k);
            prop_assert_eq!(ideals::from_subspace(&alg, &s), Some(k.clone()));
            let parsed: ideals::PairList = k.to_string().parse().unwrap();
            prop_assert_eq!(BlockIdeal::from_pairs(parsed.0), k);
        }
    }

    #[test]
    fn pattern_text_round_trip(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = random::rng(seed);
        let p = random::pattern(&mut rng, n, 0.3);
        let text = p.to_string();
        prop_assert_eq!(text.parse::<Pattern>().unwrap(), p);
    }
}
