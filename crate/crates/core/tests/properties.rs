mod common;

use carnot::algebra::{AlgebraVector, GradedLieAlgebra};
use carnot::catalog;
use carnot::lattice::{multiply, GroupElement};
use carnot::rational::{self, Rational};
use carnot::subspace::{curvature_form, is_isotropic, is_regular, solve_regularity, Subspace};
use proptest::prelude::*;

fn algebra_ids() -> Vec<&'static str> {
    vec![
        "heisenberg_c:2",
        "heisenberg_h:1",
        "heisenberg_h:2",
        "heisenberg_o:1",
        "unipotent:4",
        "unipotent:5",
        "abelian:3",
    ]
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rational::frac(n, d))
}

fn vector_for(dim: usize) -> impl Strategy<Value = AlgebraVector> {
    prop::collection::vec(small_rational(), dim).prop_map(AlgebraVector)
}

fn algebra_and_vectors(
    count: usize,
) -> impl Strategy<Value = (GradedLieAlgebra, Vec<AlgebraVector>)> {
    prop::sample::select(algebra_ids()).prop_flat_map(move |id| {
        let g = catalog::build(id).unwrap().algebra;
        let dim = g.dim();
        (Just(g), prop::collection::vec(vector_for(dim), count))
    })
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| r != &rational::zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric((g, v) in algebra_and_vectors(2)) {
        let xy = g.bracket(&v[0], &v[1]).unwrap();
        let yx = g.bracket(&v[1], &v[0]).unwrap();
        prop_assert_eq!(xy, -&yx);
    }

    #[test]
    fn bracket_satisfies_jacobi((g, v) in algebra_and_vectors(3)) {
        let b = |x: &AlgebraVector, y: &AlgebraVector| g.bracket(x, y).unwrap();
        let sum = &(&b(&v[0], &b(&v[1], &v[2])) + &b(&v[1], &b(&v[2], &v[0])))
            + &b(&v[2], &b(&v[0], &v[1]));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn dilations_compose_and_respect_brackets(
        (g, v) in algebra_and_vectors(2),
        s in nonzero_rational(),
        t in nonzero_rational(),
    ) {
        let ds = g.dilation(s.clone()).unwrap();
        let dt = g.dilation(t.clone()).unwrap();
        let dst = g.dilation(&s * &t).unwrap();
        prop_assert_eq!(ds.compose(&dt).factors(), dst.factors());
        prop_assert_eq!(ds.apply(&dt.apply(&v[0]).unwrap()).unwrap(), dst.apply(&v[0]).unwrap());
        let lhs = dt.apply(&g.bracket(&v[0], &v[1]).unwrap()).unwrap();
        let rhs = g.bracket(&dt.apply(&v[0]).unwrap(), &dt.apply(&v[1]).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let back = dt.inverse().apply(&dt.apply(&v[1]).unwrap()).unwrap();
        prop_assert_eq!(back, v[1].clone());
    }

    #[test]
    fn bch_product_is_associative((g, v) in algebra_and_vectors(3)) {
        prop_assume!(g.depth() <= 2);
        let [a, b, c] = [0, 1, 2].map(|i| GroupElement(v[i].clone()));
        let left = multiply(&g, &multiply(&g, &a, &b).unwrap(), &c).unwrap();
        let right = multiply(&g, &a, &multiply(&g, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn isotropy_and_regularity_ignore_spanning_set(
        n in 1usize..=3,
        coeffs in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 3),
    ) {
        let entry = catalog::heisenberg_h(n).unwrap();
        let g = entry.algebra;
        let s = entry.designated_subspace.unwrap();
        // Random combinations of the canonical rows, plus the rows themselves.
        let mut spanning: Vec<AlgebraVector> = coeffs
            .iter()
            .map(|c| {
                s.rows().iter().zip(c).fold(AlgebraVector::zero(g.dim()), |acc, (r, &k)| {
                    &acc + &r.scaled(&rational::int(k))
                })
            })
            .collect();
        spanning.extend(s.rows().iter().rev().cloned());
        let t = Subspace::new(&g, &spanning).unwrap();
        prop_assert_eq!(&t, &s);
        prop_assert_eq!(is_isotropic(&g, &t).unwrap().isotropic, true);
        prop_assert_eq!(is_regular(&g, &t).unwrap(), is_regular(&g, &s).unwrap());
    }

    #[test]
    fn solve_regularity_round_trip(
        n in 1usize..=2,
        seed in prop::collection::vec(small_rational(), 21),
    ) {
        let entry = catalog::heisenberg_o(n).unwrap();
        let g = entry.algebra;
        let s = entry.designated_subspace.unwrap();
        let sigma: Vec<Vec<Rational>> = (0..g.vertical().len())
            .map(|i| (0..s.dim()).map(|q| seed[(i * s.dim() + q) % seed.len()].clone()).collect())
            .collect();
        let xi = solve_regularity(&g, &s, &sigma).unwrap();
        prop_assert!(g.is_horizontal(&xi));
        let omega = curvature_form(&g);
        for (i, row) in sigma.iter().enumerate() {
            for (q, target) in row.iter().enumerate() {
                // Half the coefficient of the i-th vertical vector in [ξ, X_q].
                let br = g.bracket(&xi, &s.rows()[q]).unwrap();
                let value = &br.0[omega.component_basis(i)] * &rational::frac(1, 2);
                prop_assert_eq!(&value, target);
            }
        }
    }
}
