use lil_core::exact::Mat;
use lil_core::oracle;
use lil_core::random;
use lil_core::tower::{self, Embedding, TargetShape, Tower, TowerSpec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn standard_embeddings_are_homomorphisms(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=3, ordered in any::<bool>()) {
        let mut rng = random::rng(seed);
        let src = random::pattern(&mut rng, n, 0.4).validate().unwrap();
        let shape = if ordered { TargetShape::Ordered } else { TargetShape::Image };
        let e = Embedding::standard_shaped(&src, m, shape, 12).unwrap();
        prop_assert_eq!(oracle::unit_map_residual(&src, |x| e.apply(x).unwrap()), 0);
        for _ in 0..5 {
            let x = random::element(&mut rng, &src, 0.7);
            let y = random::element(&mut rng, &src, 0.7);
            prop_assert_eq!(e.apply(&(&x * &y)).unwrap(), &e.apply(&x).unwrap() * &e.apply(&y).unwrap());
            prop_assert_eq!(e.target().pi(&e.apply(&x).unwrap()), e.apply(&src.pi(&x)).unwrap());
        }
        prop_assert_eq!(e.apply(&Mat::identity(n)).unwrap(), Mat::identity(n * m));
        if src.blocks().is_triangular() && ordered {
            prop_assert!(e.target().blocks().is_triangular());
        }
    }

    #[test]
    fn pi_levels_are_idempotent_and_nested(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let src = random::pattern(&mut rng, 2, 0.5).validate().unwrap();
        let tw = Tower::standard(&src, &[2, 2], TargetShape::Ordered).unwrap();
        let x = random::element(&mut rng, tw.top(), 0.8);
        for q in 0..=tw.top_index() {
            let p = tw.pi_n(q, &x).unwrap();
            prop_assert_eq!(tw.pi_n(q, &p).unwrap(), p.clone());
            prop_assert_eq!(tw.pi_n(tw.top_index(), &p).unwrap(), tw.top().pi(&x));
        }
    }
}

#[test]
fn lieform_pipeline_on_small_towers() {
    let mut rng = random::rng(5);
    let t2 = lil_core::Pattern::upper_triangular(2).validate().unwrap();
    let tw = Tower::standard(&t2, &[2, 2], TargetShape::Ordered).unwrap();
    for _ in 0..10 {
        let gens = lil_core::corpus::generator_set(&mut rng, tw.top());
        let r = tower::theorem_lieform_check(&tw, &gens).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn explicit_towers_reject_bad_shapes() {
    let json = r#"{"levels": [{"pattern": "n 2\n**\n.*\n"}, {"pattern": "n 2\n**\n.*\n"}], "embeddings": []}"#;
    let spec: TowerSpec = serde_json::from_str(json).unwrap();
    assert!(matches!(spec.build(|_| unreachable!()), Err(tower::TowerError::Shape { .. })));
}
