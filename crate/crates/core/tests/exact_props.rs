use lil_core::exact::{nullspace, rank, rref, Mat, Rational, Subspace};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rational::new(p, q))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(rational(), rows * cols).prop_map(move |d| Mat::from_vec(rows, cols, d).unwrap())
}

fn vectors(count: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    proptest::collection::vec(proptest::collection::vec(rational(), dim), 0..=count)
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in matrix(5, 5)) {
        let r = rref(&m);
        prop_assert_eq!(rref(&r), r);
    }

    #[test]
    fn rref_preserves_row_space(m in matrix(4, 6)) {
        let a = Subspace::span(&m.row_vecs(), 6).unwrap();
        let b = Subspace::span(&rref(&m).row_vecs(), 6).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rank_nullity(m in matrix(4, 6)) {
        let kernel = nullspace(&m);
        prop_assert_eq!(rank(&m) + kernel.len(), 6);
        for v in kernel {
            for row in m.row_vecs() {
                let dot: Rational = row.iter().zip(&v).map(|(a, b)| a * b).sum();
                prop_assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a - &a, Rational::zero());
        if let Some(inv) = b.recip() {
            prop_assert!((&b * &inv).is_one());
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn dimension_formula(u in vectors(4, 5), w in vectors(4, 5)) {
        let u = Subspace::span(&u, 5).unwrap();
        let w = Subspace::span(&w, 5).unwrap();
        let sum = u.sum(&w).unwrap();
        let meet = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(meet.is_subspace_of(&u).unwrap() && meet.is_subspace_of(&w).unwrap());
        prop_assert!(u.is_subspace_of(&sum).unwrap() && w.is_subspace_of(&sum).unwrap());
    }

    #[test]
    fn membership_is_rank_stable(vs in vectors(5, 4), coeffs in proptest::collection::vec(rational(), 5)) {
        let s = Subspace::span(&vs, 4).unwrap();
        let mut combo = vec![Rational::zero(); 4];
        for (v, c) in vs.iter().zip(&coeffs) {
            for (x, y) in combo.iter_mut().zip(v) {
                *x += &(c * y);
            }
        }
        prop_assert!(s.contains(&combo).unwrap());
        let mut grown = s.clone();
        prop_assert!(!grown.insert(&combo).unwrap());
        prop_assert_eq!(grown, s);
    }

    #[test]
    fn subspace_json_round_trip(vs in vectors(4, 6)) {
        let s = Subspace::span(&vs, 6).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<Subspace>(&text).unwrap(), s);
    }

    #[test]
    fn inverse_is_two_sided(m in matrix(4, 4)) {
        if let Some(inv) = m.inverse() {
            prop_assert_eq!(&m * &inv, Mat::identity(4));
            prop_assert_eq!(&inv * &m, Mat::identity(4));
        } else {
            prop_assert!(rank(&m) < 4);
        }
    }
}

#[test]
fn rref_examples() {
    assert_eq!(rref(&Mat::from_ints(&[[0, 1], [1, 0]])), Mat::identity(2));
    assert_eq!(rref(&Mat::from_ints(&[[2, 4], [1, 2]])), Mat::from_ints(&[[1, 2], [0, 0]]));
}

#[test]
fn big_values_spill_and_come_back() {
    let big = Rational::from_int(i64::MAX);
    let sq = &big * &big;
    assert_eq!(&sq / &big, big);
    assert_eq!(&sq - &sq, Rational::zero());
}
