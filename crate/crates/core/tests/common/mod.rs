//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use carnot::algebra::{AlgebraVector, GradedLieAlgebra};
use carnot::catalog::{self, CatalogEntry};
use carnot::forms::InvariantForm;
use carnot::rational::{self, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Every catalog entry named in the structural checks.
pub fn catalog_ids() -> Vec<String> {
    let mut ids = Vec::new();
    for n in 1..=3 {
        ids.push(format!("heisenberg_c:{n}"));
        ids.push(format!("heisenberg_h:{n}"));
        ids.push(format!("heisenberg_o:{n}"));
    }
    for n in 3..=6 {
        ids.push(format!("unipotent:{n}"));
    }
    for n in 1..=8 {
        ids.push(format!("abelian:{n}"));
    }
    ids
}

pub fn entries() -> Vec<CatalogEntry> {
    catalog_ids()
        .iter()
        .map(|id| catalog::build(id).unwrap())
        .collect()
}

pub fn two_step_entries() -> Vec<CatalogEntry> {
    entries()
        .into_iter()
        .filter(|e| e.algebra.depth() <= 2)
        .collect()
}

/// `[E_uv, E_xy]` computed as a commutator of dense `n x n` integer matrices,
/// returned as `(u, v, coefficient)` entries of the result.
pub fn matrix_commutator(
    n: usize,
    a: (usize, usize),
    b: (usize, usize),
) -> Vec<(usize, usize, i64)> {
    let unit = |(u, v): (usize, usize)| {
        let mut m = vec![vec![0i64; n + 1]; n + 1];
        m[u][v] = 1;
        m
    };
    let mul = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>| {
        let mut out = vec![vec![0i64; n + 1]; n + 1];
        for i in 1..=n {
            for k in 1..=n {
                if x[i][k] != 0 {
                    for j in 1..=n {
                        out[i][j] += x[i][k] * y[k][j];
                    }
                }
            }
        }
        out
    };
    let (ma, mb) = (unit(a), unit(b));
    let ab = mul(&ma, &mb);
    let ba = mul(&mb, &ma);
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let c = ab[i][j] - ba[i][j];
            if c != 0 {
                out.push((i, j, c));
            }
        }
    }
    out
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Leibniz expansion of `det(covector_s(v_r))` summed over the monomials.
pub fn naive_evaluate(gamma: &InvariantForm, vectors: &[AlgebraVector]) -> Rational {
    let perms = permutations(vectors.len());
    let mut total = Rational::zero();
    for (idx, c) in gamma.terms() {
        let mut det = Rational::zero();
        for p in &perms {
            let mut prod = Rational::from_integer(permutation_sign(p).into());
            for (r, &s) in p.iter().enumerate() {
                prod *= &vectors[r].0[idx[s]];
                if prod.is_zero() {
                    break;
                }
            }
            det += prod;
        }
        total += c * det;
    }
    total
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rational::int(k))
}

/// `dγ(e_t0, ..., e_tp)` from the evaluation formula
/// `(p+1)! dγ(X_0..X_p) = Σ_{a<b} (-1)^{a+b+1} γ([X_a, X_b], X_0, ..., X̂_a, ..., X̂_b, ...)`.
pub fn brute_differential_value(
    algebra: &GradedLieAlgebra,
    gamma: &InvariantForm,
    vectors: &[AlgebraVector],
) -> Rational {
    let mut sum = Rational::zero();
    for a in 0..vectors.len() {
        for b in a + 1..vectors.len() {
            let mut args = vec![algebra.bracket(&vectors[a], &vectors[b]).unwrap()];
            for (r, v) in vectors.iter().enumerate() {
                if r != a && r != b {
                    args.push(v.clone());
                }
            }
            let value = naive_evaluate(gamma, &args);
            if (a + b + 1) % 2 == 1 {
                sum -= value;
            } else {
                sum += value;
            }
        }
    }
    sum / factorial(vectors.len())
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A form with `terms` random monomials of degree `p` and small coefficients.
pub fn random_form(rng: &mut impl Rng, dim: usize, p: usize, terms: usize) -> InvariantForm {
    let mut list = Vec::new();
    for _ in 0..terms {
        let mut idx: Vec<usize> = Vec::new();
        while idx.len() < p.min(dim) {
            let i = rng.gen_range(0..dim);
            if !idx.contains(&i) {
                idx.push(i);
            }
        }
        let c = rational::frac(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        list.push((idx, c));
    }
    InvariantForm::from_terms(dim, p.min(dim), list).unwrap()
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> AlgebraVector {
    AlgebraVector(
        (0..dim)
            .map(|_| rational::frac(rng.gen_range(-4..=4), rng.gen_range(1..=2)))
            .collect(),
    )
}

/// Sectional curvature of `(e_i, e_j)` from the Levi-Civita connection of
/// the orthonormal left-invariant metric, via the Koszul formula.
pub fn koszul_curvature(algebra: &GradedLieAlgebra, i: usize, j: usize) -> Rational {
    let n = algebra.dim();
    let c = |a: usize, b: usize, k: usize| algebra.bracket_basis(a, b).0[k].clone();
    let half = rational::frac(1, 2);
    // gamma[a][b] = ∇_{e_a} e_b
    let gamma: Vec<Vec<Vec<Rational>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    (0..n)
                        .map(|k| &half * (c(a, b, k) - c(b, k, a) + c(k, a, b)))
                        .collect()
                })
                .collect()
        })
        .collect();
    let nabla = |a: usize, y: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (b, yb) in y.iter().enumerate() {
            if yb.is_zero() {
                continue;
            }
            for k in 0..n {
                out[k] += yb * &gamma[a][b][k];
            }
        }
        out
    };
    let nabla_vec = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (k, v) in nabla(a, y).into_iter().enumerate() {
                out[k] += xa * v;
            }
        }
        out
    };
    let ej: Vec<Rational> = AlgebraVector::basis(n, j).0;
    let t1 = nabla(i, &nabla(j, &ej));
    let t2 = nabla(j, &nabla(i, &ej));
    let t3 = nabla_vec(&algebra.bracket_basis(i, j).0, &ej);
    &t1[i] - &t2[i] - &t3[i]
}

const PRIME: i64 = 2_305_843_009_213_693_951; // 2^61 - 1

fn mod_p(r: &Rational) -> i128 {
    let p = BigInt::from(PRIME);
    let num = ((r.numer() % &p) + &p) % &p;
    let den = ((r.denom() % &p) + &p) % &p;
    let inv = den.modpow(&(&p - 2), &p);
    ((num * inv) % &p).to_i128().unwrap()
}

/// Rank of a rational matrix reduced modulo `2^61 - 1`.
pub fn rank_mod_p(rows: &[Vec<Rational>]) -> usize {
    let p = PRIME as i128;
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(mod_p).collect()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col] * inv % p;
                let pivot_row = m[rank].clone();
                for (x, y) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = ((*x - f * y % p) % p + p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i128, mut e: i128, p: i128) -> i128 {
    let mut acc = 1i128;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Kernel dimension of `d` on `span{Y* ∧ x* : Y ∈ V_2, x ∈ V_1}`, by evaluating
/// each `d(Y* ∧ x*)` on every basis triple.
pub fn naive_pittet_kernel_dim(algebra: &GradedLieAlgebra) -> usize {
    let n = algebra.dim();
    let second = algebra.layers()[1].clone();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    let triples = subsets(n, 3);
    for &y in &second {
        for &x in algebra.horizontal() {
            let omega = InvariantForm::monomial(n, &[y, x], Rational::one()).unwrap();
            columns.push(
                triples
                    .iter()
                    .map(|t| {
                        let vs: Vec<AlgebraVector> =
                            t.iter().map(|&i| AlgebraVector::basis(n, i)).collect();
                        brute_differential_value(algebra, &omega, &vs)
                    })
                    .collect(),
            );
        }
    }
    // Transpose so that rows are equations.
    let rows: Vec<Vec<Rational>> = (0..triples.len())
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .filter(|row: &Vec<Rational>| row.iter().any(|x| !x.is_zero()))
        .collect();
    columns.len() - rank_mod_p(&rows)
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

use carnot::catalog::Builder;
use carnot::predictor::{
    coverage_table, BundleOptions, CoverageTable, HypothesisBundle, Relation, Target,
};

/// One known exponent claim: `target^m relation x^exponent`.
#[derive(Debug, Clone)]
pub struct Claim {
    pub label: String,
    pub target: Target,
    pub m: usize,
    pub relation: Relation,
    pub exponent: Rational,
}

fn claim(
    label: &str,
    target: Target,
    m: usize,
    relation: Relation,
    num: usize,
    den: usize,
) -> Claim {
    Claim {
        label: label.to_string(),
        target,
        m,
        relation,
        exponent: rational::frac(num as i64, den as i64),
    }
}

/// Known filling and divergence exponents of the Heisenberg groups over C, H
/// and O, written out from their closed forms.
pub fn known_claims(builder: Builder, n: usize) -> Vec<Claim> {
    use Relation::*;
    use Target::*;
    let mut out = Vec::new();
    match builder {
        Builder::HeisenbergH | Builder::HeisenbergO => {
            let (c, tag_f, tag_d) = if builder == Builder::HeisenbergH {
                (3, "H filling", "H divergence")
            } else {
                (7, "O filling", "O divergence")
            };
            let top = (c + 1) * n + c; // topological dimension
            for j in 1..n {
                out.push(claim(
                    &format!("{tag_f} low j={j}"),
                    Filling,
                    j + 1,
                    Equivalent,
                    j + 1,
                    j,
                ));
                out.push(claim(
                    &format!("{tag_d} low j={j}"),
                    Divergence,
                    j,
                    AtLeast,
                    j + 1,
                    1,
                ));
            }
            out.push(claim(
                &format!("{tag_f} upper"),
                Filling,
                n + 1,
                AtMost,
                n + 2,
                n,
            ));
            for m in (c * n + c + 1)..top {
                out.push(claim(
                    &format!("{tag_f} top m={m}"),
                    Filling,
                    m + 1,
                    Equivalent,
                    m + c + 1,
                    m + c,
                ));
            }
            for m in (c * n + c + 1)..(top - 1) {
                out.push(claim(
                    &format!("{tag_d} top m={m}"),
                    Divergence,
                    m,
                    Equivalent,
                    (m + c + 1) * m,
                    m + c,
                ));
            }
            if builder == Builder::HeisenbergO {
                out.push(claim(
                    "O filling strict",
                    Filling,
                    n + 1,
                    StrictlyAbove,
                    n + 1,
                    n,
                ));
            }
        }
        Builder::HeisenbergC => {
            for j in 1..n {
                out.push(claim(
                    &format!("C divergence low j={j}"),
                    Divergence,
                    j,
                    AtLeast,
                    j + 1,
                    1,
                ));
            }
            out.push(claim(
                "C divergence middle",
                Divergence,
                n,
                AtLeast,
                n + 2,
                1,
            ));
            for m in n + 1..2 * n {
                out.push(claim(
                    &format!("C divergence top m={m}"),
                    Divergence,
                    m,
                    Equivalent,
                    (m + 2) * m,
                    m + 1,
                ));
            }
        }
        _ => {}
    }
    out
}

/// Coverage table for a catalog entry with its designated or searched subspace
/// and the entry's recorded facts.
pub fn entry_table(entry: &CatalogEntry) -> CoverageTable {
    let g = &entry.algebra;
    let s = match &entry.designated_subspace {
        Some(s) => s.clone(),
        None => {
            let k = (1..=g.n1())
                .rev()
                .find(|&k| {
                    carnot::subspace::gromov_dimension_bound(g, k)
                        .unwrap()
                        .satisfied()
                })
                .unwrap();
            match carnot::subspace::search_certified_subspace(g, k, &Default::default()).unwrap() {
                carnot::subspace::SearchOutcome::Found { subspace, .. } => subspace,
                other => panic!("no subspace: {other:?}"),
            }
        }
    };
    let options = BundleOptions {
        assert_lattice: false,
        max_isotropic_dim: entry.max_isotropic_dim,
        literature: entry.literature.clone(),
    };
    coverage_table(&HypothesisBundle::new(g, &s, options).unwrap())
}

/// Checks each claim against the table; a lower bound `>= e` is matched by an
/// `at_least` or `equivalent` bound with exponent `e`.
pub fn check_claims(table: &CoverageTable, claims: &[Claim]) -> Result<(), String> {
    if let Some(row) = table.rows.iter().find(|r| r.conflict) {
        return Err(format!("conflict at {}^{}", row.target.tag(), row.m));
    }
    for c in claims {
        let row = table
            .rows
            .iter()
            .find(|r| r.target == c.target && r.m == c.m)
            .ok_or_else(|| format!("{}: no row {}^{}", c.label, c.target.tag(), c.m))?;
        let ok = row.bounds.iter().any(|b| {
            b.exponent.as_ref() == Some(&c.exponent)
                && match c.relation {
                    Relation::AtLeast => {
                        matches!(b.relation, Relation::AtLeast | Relation::Equivalent)
                    }
                    r => b.relation == r,
                }
        });
        if !ok {
            let got: Vec<String> = row.bounds.iter().map(|b| b.to_string()).collect();
            return Err(format!(
                "{}: expected {} {} {}, table has [{}]",
                c.label,
                c.target.tag(),
                c.relation.tag(),
                rational::format(&c.exponent),
                got.join("; ")
            ));
        }
    }
    Ok(())
}

/// Writes the auxiliary input files used by [`cli_corpus`] into `dir`.
pub fn write_cli_fixtures(dir: &std::path::Path) {
    let g = catalog::heisenberg_h(1).unwrap().algebra;
    catalog::save_algebra(&g, &dir.join("h1.json")).unwrap();
    std::fs::write(
        dir.join("broken.json"),
        r#"{"name":"broken","basis":["a","b","c"],"layers":[["a","b"],["c"]],
"brackets":[{"left":"a","right":"b","result":[{"basis":"a","coeff":"1"}]},
{"left":"b","right":"c","result":[{"basis":"b","coeff":"1"}]}]}"#,
    )
    .unwrap();
    std::fs::write(
        dir.join("line.json"),
        r#"{"rows":[["1","1/2","0","0","0","0","0"]]}"#,
    )
    .unwrap();
    std::fs::write(
        dir.join("form.json"),
        r#"{"degree":2,"terms":[{"indices":[6,0],"coeff":"1"},{"indices":[4,1],"coeff":"-1/3"}]}"#,
    )
    .unwrap();
    std::fs::write(
        dir.join("tripled.json"),
        r#"{"rows":[["1","0","0"],["0","1","0"],["0","0","3/2"]]}"#,
    )
    .unwrap();
}

/// Argument lists (without the program name) exercised by the determinism
/// check; file arguments are resolved in `dir`.
pub fn cli_corpus(dir: &std::path::Path) -> Vec<Vec<String>> {
    let f = |name: &str| dir.join(name).display().to_string();
    let raw: Vec<Vec<String>> = vec![
        vec!["catalog".into()],
        vec!["catalog".into(), "heisenberg_o:2".into()],
        vec!["check".into(), "unipotent:5".into()],
        vec!["check".into(), f("broken.json")],
        vec!["check".into(), f("h1.json")],
        vec!["export".into(), "heisenberg_c:2".into()],
        vec![
            "certify".into(),
            "heisenberg_h:2".into(),
            "--subspace".into(),
            "h1,h2".into(),
        ],
        vec![
            "certify".into(),
            "heisenberg_c:1".into(),
            "--subspace".into(),
            "j1,k1".into(),
        ],
        vec![
            "certify".into(),
            f("h1.json"),
            "--subspace-file".into(),
            f("line.json"),
        ],
        vec![
            "search".into(),
            "heisenberg_o:1".into(),
            "--dim".into(),
            "1".into(),
        ],
        vec![
            "search".into(),
            "heisenberg_o:1".into(),
            "--dim".into(),
            "2".into(),
        ],
        vec![
            "search".into(),
            "heisenberg_c:2".into(),
            "--dim".into(),
            "2".into(),
            "--random".into(),
            "50".into(),
            "--seed".into(),
            "7".into(),
        ],
        vec!["predict".into(), "heisenberg_h:2".into()],
        vec!["predict".into(), "heisenberg_c:3".into()],
        vec!["predict".into(), "heisenberg_o:2".into()],
        vec![
            "predict".into(),
            "unipotent:4".into(),
            "--assert-lattice".into(),
        ],
        vec!["curvature".into(), "heisenberg_c:1".into()],
        vec![
            "curvature".into(),
            "heisenberg_h:2".into(),
            "--subspace".into(),
            "h1,h2".into(),
            "--maximal".into(),
        ],
        vec!["pittet".into(), "heisenberg_o:1".into()],
        vec!["pittet".into(), "heisenberg_c:2".into()],
        vec!["lattice".into(), "heisenberg_o:1".into()],
        vec![
            "lattice".into(),
            "heisenberg_c:1".into(),
            "--generators-file".into(),
            f("tripled.json"),
        ],
        vec![
            "forms-d".into(),
            f("h1.json"),
            "--form-file".into(),
            f("form.json"),
        ],
        vec![
            "forms-d".into(),
            "heisenberg_c:1".into(),
            "--form".into(),
            r#"{"degree":1,"terms":[{"indices":[2],"coeff":"1"}]}"#.into(),
        ],
        vec![
            "cube".into(),
            "heisenberg_h:2".into(),
            "--subspace".into(),
            "h1,h2".into(),
            "--omit".into(),
            "1".into(),
        ],
    ];
    raw
}
