mod common;

use carnot::algebra::AlgebraVector;
use carnot::catalog;
use carnot::curvature::{sectional_curvature, two_step_closed_forms};
use carnot::forms::{differential, pittet_kernel};
use carnot::rational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

#[test]
fn unipotent_brackets_match_matrix_commutators() {
    for n in 3..=6 {
        let g = catalog::unipotent(n).unwrap().algebra;
        let units: Vec<(usize, usize)> = (1..n)
            .flat_map(|s| (1..=n - s).map(move |u| (u, u + s)))
            .collect();
        let label = |(u, v): (usize, usize)| format!("E{u}{v}");
        for &a in &units {
            for &b in &units {
                let ia = g.index_of(&label(a)).unwrap();
                let ib = g.index_of(&label(b)).unwrap();
                let got = g.bracket_basis(ia, ib);
                let mut expected = AlgebraVector::zero(g.dim());
                for (u, v, c) in matrix_commutator(n, a, b) {
                    expected.0[g.index_of(&label((u, v))).unwrap()] = rational::int(c);
                }
                assert_eq!(got, expected, "N_{n}: [{}, {}]", label(a), label(b));
            }
        }
    }
}

#[test]
fn differential_matches_evaluation_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for id in [
        "heisenberg_c:1",
        "heisenberg_c:2",
        "heisenberg_h:1",
        "unipotent:4",
        "unipotent:5",
    ] {
        let g = catalog::build(id).unwrap().algebra;
        let n = g.dim();
        for p in 0..=3 {
            for _ in 0..4 {
                let gamma = random_form(&mut rng, n, p, 3);
                let d = differential(&g, &gamma).unwrap();
                for t in subsets(n, p + 1) {
                    let vs: Vec<AlgebraVector> =
                        t.iter().map(|&i| AlgebraVector::basis(n, i)).collect();
                    assert_eq!(
                        d.coefficient(&t),
                        brute_differential_value(&g, &gamma, &vs),
                        "{id}: degree {p}, monomial {t:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn differential_of_top_horizontal_covector_in_h3() {
    // [k1, j1] = K, so d(K*)(k1, j1) = K*([k1, j1]) / 2.
    let g = catalog::heisenberg_c(1).unwrap().algebra;
    let k = carnot::forms::InvariantForm::covector(3, 2).unwrap();
    let d = differential(&g, &k).unwrap();
    let value = d
        .evaluate(&[AlgebraVector::basis(3, 1), AlgebraVector::basis(3, 0)])
        .unwrap();
    assert_eq!(value, rational::frac(1, 2));
}

#[test]
fn evaluation_matches_leibniz_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in 1..=4 {
        let gamma = random_form(&mut rng, 7, p, 5);
        let vs: Vec<AlgebraVector> = (0..p).map(|_| random_vector(&mut rng, 7)).collect();
        assert_eq!(gamma.evaluate(&vs).unwrap(), naive_evaluate(&gamma, &vs));
    }
}

#[test]
fn milnor_formula_matches_levi_civita_connection() {
    for id in [
        "heisenberg_c:1",
        "heisenberg_h:1",
        "unipotent:4",
        "unipotent:5",
    ] {
        let g = catalog::build(id).unwrap().algebra;
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                if i != j {
                    assert_eq!(
                        sectional_curvature(&g, i, j).unwrap(),
                        koszul_curvature(&g, i, j),
                        "{id}: K({}, {})",
                        g.label(i),
                        g.label(j)
                    );
                }
            }
        }
    }
}

#[test]
fn closed_forms_match_levi_civita_connection() {
    let g = catalog::heisenberg_o(1).unwrap().algebra;
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            assert_eq!(
                two_step_closed_forms(&g, i, j).unwrap(),
                koszul_curvature(&g, i, j)
            );
        }
    }
}

#[test]
fn pittet_kernel_matches_brute_force() {
    for id in [
        "heisenberg_c:1",
        "heisenberg_c:2",
        "heisenberg_h:1",
        "heisenberg_o:1",
    ] {
        let g = catalog::build(id).unwrap().algebra;
        let k = pittet_kernel(&g).unwrap();
        assert_eq!(k.dim(), naive_pittet_kernel_dim(&g), "{id}");
        // Every reported kernel vector really is closed.
        for v in &k.basis {
            let terms = k
                .variables
                .iter()
                .zip(v)
                .map(|(&(y, x), c)| (vec![y, x], c.clone()));
            let omega = carnot::forms::InvariantForm::from_terms(g.dim(), 2, terms).unwrap();
            assert!(differential(&g, &omega).unwrap().is_zero());
        }
    }
}

#[test]
fn pittet_kernel_of_h3_is_everything() {
    // d(K* ^ x*) = dK* ^ x* vanishes since dK* is a multiple of j1* ^ k1*.
    let g = catalog::heisenberg_c(1).unwrap().algebra;
    let k = pittet_kernel(&g).unwrap();
    assert_eq!(k.variables.len(), 2);
    assert_eq!(k.dim(), 2);
}
