use proptest::prelude::*;

use commwidth::exact::{frac, Rational, Subspace};
use commwidth::nilpotent::LieAlgebra;

fn vector(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-6i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d)), len)
}

fn vectors(len: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(vector(len), 0..=len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bch_product_is_a_group_law(u in vector(6), v in vector(6), w in vector(6)) {
        let g = LieAlgebra::strictly_upper_triangular(4);
        prop_assert_eq!(g.mul(&g.mul(&u, &v), &w), g.mul(&u, &g.mul(&v, &w)));
        prop_assert_eq!(g.mul(&u, &g.inv(&u)), g.zero());
        // commutators lie in the derived algebra
        let c = g.commutator(&u, &v);
        prop_assert!(g.bracket_spaces(&g.whole(), &g.whole()).contains(&c));
    }

    #[test]
    fn powers_are_one_parameter(u in vector(6), p in -3i64..=3, q in 1i64..=3) {
        let g = LieAlgebra::strictly_upper_triangular(4);
        let r = frac(p, q);
        let root = g.power(&u, &frac(1, q));
        prop_assert_eq!(g.power(&root, &Rational::from_integer(q.into())), u.clone());
        prop_assert_eq!(g.power(&u, &r), g.power(&g.power(&u, &frac(1, q)), &Rational::from_integer(p.into())));
    }

    #[test]
    fn subspace_dimension_formula(a in vectors(5), b in vectors(5)) {
        let (a, b) = (Subspace::span(5, a), Subspace::span(5, b));
        let (s, i) = (a.sum(&b).unwrap(), a.intersect(&b).unwrap());
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(s.contains_space(&a) && s.contains_space(&b));
        prop_assert!(a.contains_space(&i) && b.contains_space(&i));
    }
}
