//! Left-invariant exterior forms, their differential and the cube form.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{AlgebraVector, GradedLieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};
use crate::subspace::Subspace;

/// `Σ c_I b*_{i_1} ∧ ... ∧ b*_{i_p}` over strictly increasing index tuples.
///
/// A monomial evaluates on `p` vectors as the determinant of the pairing
/// matrix `(b*_{i_r}(X_s))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantForm {
    ambient_dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Rational>,
}

/// Sorts `indices` in place and returns the permutation sign, or `None` when
/// an index repeats.
fn sort_with_sign(indices: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
        if j > 0 && indices[j - 1] == indices[j] {
            return None;
        }
    }
    Some(negative)
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rational::int(k))
}

impl InvariantForm {
    pub fn zero(ambient_dim: usize, degree: usize) -> Self {
        InvariantForm {
            ambient_dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The constant 0-form `c`.
    pub fn constant(ambient_dim: usize, c: Rational) -> Self {
        let mut f = Self::zero(ambient_dim, 0);
        f.add_term(Vec::new(), c);
        f
    }

    /// The dual covector `b*_i`.
    pub fn covector(ambient_dim: usize, i: usize) -> Result<Self> {
        Self::monomial(ambient_dim, &[i], Rational::one())
    }

    /// Covector with the given coefficients on `b*_0, ..., b*_{n-1}`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let mut f = Self::zero(coeffs.len(), 1);
        for (i, c) in coeffs.iter().enumerate() {
            f.add_term(vec![i], c.clone());
        }
        f
    }

    /// `c · b*_{i_1} ∧ ... ∧ b*_{i_p}` for indices in any order.
    pub fn monomial(ambient_dim: usize, indices: &[usize], c: Rational) -> Result<Self> {
        let mut f = Self::zero(ambient_dim, indices.len());
        f.add_unsorted(indices, c)?;
        Ok(f)
    }

    /// Builds a form from `(indices, coefficient)` pairs; indices may be in
    /// any order and repeated monomials are summed.
    pub fn from_terms<I>(ambient_dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Rational)>,
    {
        let mut f = Self::zero(ambient_dim, degree);
        for (indices, c) in terms {
            if indices.len() != degree {
                return Err(Error::DimensionMismatch {
                    expected: degree,
                    found: indices.len(),
                });
            }
            f.add_unsorted(&indices, c)?;
        }
        Ok(f)
    }

    fn add_unsorted(&mut self, indices: &[usize], c: Rational) -> Result<()> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.ambient_dim) {
            return Err(Error::OutOfRange(format!(
                "covector index {bad} for an algebra of dimension {}",
                self.ambient_dim
            )));
        }
        let mut sorted = indices.to_vec();
        match sort_with_sign(&mut sorted) {
            None => {}
            Some(negative) => self.add_term(sorted, if negative { -c } else { c }),
        }
        Ok(())
    }

    /// Adds `c` to the coefficient of a sorted monomial.
    fn add_term(&mut self, sorted: Vec<usize>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(sorted) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, sorted: &[usize]) -> Rational {
        self.terms
            .get(sorted)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.ambient_dim, self.degree);
        if !c.is_zero() {
            for (k, v) in &self.terms {
                out.terms.insert(k.clone(), v * c);
            }
        }
        out
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        let mut out = Self::zero(self.ambient_dim, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if b.iter().any(|i| a.binary_search(i).is_ok()) {
                    continue;
                }
                // Sign of the shuffle merging a and b: one transposition per
                // pair (x in a, y in b) with x > y.
                let mut inversions = 0usize;
                for y in b {
                    inversions += a.len() - a.partition_point(|x| x < y);
                }
                let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
                merged.sort_unstable();
                let c = ca * cb;
                out.add_term(merged, if inversions % 2 == 1 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Value on `vectors.len() == degree` vectors (determinant convention).
    pub fn evaluate(&self, vectors: &[AlgebraVector]) -> Result<Rational> {
        if vectors.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != self.ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.dim(),
            });
        }
        let mut acc = Rational::zero();
        for (idx, c) in &self.terms {
            let m: Matrix = idx
                .iter()
                .map(|&i| vectors.iter().map(|v| v.0[i].clone()).collect())
                .collect();
            let det = if m.is_empty() {
                Rational::one()
            } else {
                linalg::determinant(&m)
            };
            if !det.is_zero() {
                acc += c * det;
            }
        }
        Ok(acc)
    }

    /// Pullback under the graded dilation with parameter `t`.
    pub fn pullback_dilation(&self, algebra: &GradedLieAlgebra, t: &Rational) -> Result<Self> {
        let dilation = algebra.dilation(t.clone())?;
        let factors = dilation.factors();
        let mut out = Self::zero(self.ambient_dim, self.degree);
        for (k, c) in &self.terms {
            let f = k.iter().fold(c.clone(), |acc, &i| acc * &factors[i]);
            out.terms.insert(k.clone(), f);
        }
        Ok(out)
    }
}

/// The differential
/// `(p+1)! dγ(X_0, ..., X_p) = Σ_{a<b} (-1)^{a+b+1} γ([X_a, X_b], X_0, ..., X̂_a, ..., X̂_b, ..., X_p)`.
pub fn differential(algebra: &GradedLieAlgebra, gamma: &InvariantForm) -> Result<InvariantForm> {
    if gamma.ambient_dim != algebra.dim() {
        return Err(Error::AmbientMismatch {
            left: gamma.ambient_dim,
            right: algebra.dim(),
        });
    }
    let n = algebra.dim();
    let p = gamma.degree;
    // sources[w] lists (u, v, c_{uvw}) with u < v.
    let mut sources: Vec<Vec<(usize, usize, &Rational)>> = vec![Vec::new(); n];
    for (&(u, v), result) in algebra.table().constants() {
        for (w, c) in result {
            sources[*w].push((u, v, c));
        }
    }
    let norm = factorial(p + 1).recip();
    let mut out = InvariantForm::zero(n, p + 1);
    for (idx, coeff) in &gamma.terms {
        for (pos, &w) in idx.iter().enumerate() {
            let rest: Vec<usize> = idx.iter().copied().filter(|&i| i != w).collect();
            for &(u, v, c) in &sources[w] {
                if rest.binary_search(&u).is_ok() || rest.binary_search(&v).is_ok() {
                    continue;
                }
                let mut target = rest.clone();
                target.push(u);
                target.push(v);
                target.sort_unstable();
                let a = target.binary_search(&u).expect("present");
                let b = target.binary_search(&v).expect("present");
                let negative = (a + b + 1 + pos) % 2 == 1;
                let term = coeff * c * &norm;
                out.add_term(target, if negative { -term } else { term });
            }
        }
    }
    Ok(out)
}

/// Homogeneity of a form under the graded dilations: `ŝ_t^* γ = t^w γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalingWeight {
    Uniform(usize),
    /// Per-monomial weights when they differ.
    Mixed(Vec<(Vec<usize>, usize)>),
}

pub fn scaling_weight(algebra: &GradedLieAlgebra, gamma: &InvariantForm) -> Result<ScalingWeight> {
    if gamma.is_zero() {
        return Err(Error::ZeroForm);
    }
    let weights = algebra.weights();
    let per: Vec<(Vec<usize>, usize)> = gamma
        .terms
        .keys()
        .map(|k| (k.clone(), k.iter().map(|&i| weights[i]).sum()))
        .collect();
    let first = per[0].1;
    if per.iter().all(|(_, w)| *w == first) {
        Ok(ScalingWeight::Uniform(first))
    } else {
        Ok(ScalingWeight::Mixed(per))
    }
}

/// Basis adapted to `s`: the canonical rows of `s`, then the first-layer basis
/// vectors not already in their span, then every higher-layer basis vector.
pub fn adapted_basis(algebra: &GradedLieAlgebra, s: &Subspace) -> Result<Vec<AlgebraVector>> {
    if let Some(row) = s.rows().iter().position(|r| !algebra.is_horizontal(r)) {
        return Err(Error::NotHorizontal { row });
    }
    let n = algebra.dim();
    let mut basis: Vec<AlgebraVector> = s.rows().to_vec();
    for &u in algebra.horizontal() {
        let candidate = AlgebraVector::basis(n, u);
        let mut trial: Matrix = basis.iter().map(|v| v.0.clone()).collect();
        trial.push(candidate.0.clone());
        if linalg::rank(&trial, n) == basis.len() + 1 {
            basis.push(candidate);
        }
    }
    for i in algebra.vertical() {
        basis.push(AlgebraVector::basis(n, i));
    }
    Ok(basis)
}

/// Wedge of the dual covectors of the adapted basis, omitting the first `j`
/// (which are dual to rows of `s`). `j = 0` gives the volume form.
pub fn cube_form(algebra: &GradedLieAlgebra, s: &Subspace, j: usize) -> Result<InvariantForm> {
    if j > 0 && j >= s.dim() {
        return Err(Error::OutOfRange(format!(
            "omitted count {j} must be below dim S = {}",
            s.dim()
        )));
    }
    let n = algebra.dim();
    let basis = adapted_basis(algebra, s)?;
    let b: Matrix = basis.into_iter().map(|v| v.0).collect();
    let inv = linalg::inverse(&b).ok_or(Error::Inconsistent)?;
    // Dual covector r has coefficients given by column r of the inverse.
    let mut form = InvariantForm::constant(n, Rational::one());
    for r in j..n {
        let column: Vec<Rational> = inv.iter().map(|row| row[r].clone()).collect();
        form = form.wedge(&InvariantForm::linear(&column))?;
    }
    Ok(form)
}

/// Whether the cube form omitting `j` covectors is closed.
pub fn check_cube_closed(algebra: &GradedLieAlgebra, s: &Subspace, j: usize) -> Result<bool> {
    let gamma = cube_form(algebra, s, j)?;
    Ok(differential(algebra, &gamma)?.is_zero())
}

/// Closed 2-forms of the shape `Σ α_{(Y,x)} Y* ∧ x*` with `Y ∈ V_2`, `x ∈ V_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PittetKernel {
    /// Variable order: `(Y, x)` basis index pairs, `Y` outer, `x` inner.
    pub variables: Vec<(usize, usize)>,
    /// Number of distinct 3-form monomials in the linear system.
    pub equations: usize,
    pub rank: usize,
    pub basis: Vec<Vec<Rational>>,
}

impl PittetKernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn pittet_kernel(algebra: &GradedLieAlgebra) -> Result<PittetKernel> {
    if algebra.depth() > 2 {
        return Err(Error::NilpotencyDegree {
            degree: algebra.depth(),
            max: 2,
        });
    }
    let n = algebra.dim();
    let second: &[usize] = algebra.layers().get(1).map_or(&[], Vec::as_slice);
    let variables: Vec<(usize, usize)> = second
        .iter()
        .flat_map(|&y| algebra.horizontal().iter().map(move |&x| (y, x)))
        .collect();
    let mut monomials: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut columns: Vec<InvariantForm> = Vec::with_capacity(variables.len());
    for &(y, x) in &variables {
        let omega = InvariantForm::monomial(n, &[y, x], Rational::one())?;
        let d = differential(algebra, &omega)?;
        for k in d.terms.keys() {
            let next = monomials.len();
            monomials.entry(k.clone()).or_insert(next);
        }
        columns.push(d);
    }
    let mut matrix = vec![vec![Rational::zero(); variables.len()]; monomials.len()];
    for (col, d) in columns.iter().enumerate() {
        for (k, c) in &d.terms {
            matrix[monomials[k]][col] = c.clone();
        }
    }
    let basis = linalg::nullspace(&matrix, variables.len());
    Ok(PittetKernel {
        rank: variables.len() - basis.len(),
        equations: monomials.len(),
        variables,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::StructureTable;
    use crate::rational::{frac, int};

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn h3() -> GradedLieAlgebra {
        let t = StructureTable::new(3, [((1, 0), vec![(2, int(1))])]).unwrap();
        GradedLieAlgebra::new(
            "h",
            labels(&["j1", "k1", "K"]),
            vec![vec![0, 1], vec![2]],
            t,
        )
        .unwrap()
    }

    #[test]
    fn sort_sign() {
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut v), Some(false));
        assert_eq!(v, vec![0, 1, 2]);
        let mut w = vec![1, 0];
        assert_eq!(sort_with_sign(&mut w), Some(true));
        assert_eq!(sort_with_sign(&mut [1, 2, 1]), None);
    }

    #[test]
    fn wedge_evaluation_is_determinant() {
        let a = InvariantForm::covector(3, 0).unwrap();
        let b = InvariantForm::covector(3, 1).unwrap();
        let ab = a.wedge(&b).unwrap();
        let e0 = AlgebraVector::basis(3, 0);
        let e1 = AlgebraVector::basis(3, 1);
        assert_eq!(ab.evaluate(&[e1.clone(), e0.clone()]).unwrap(), int(-1));
        assert_eq!(ab.evaluate(&[e0, e1]).unwrap(), int(1));
        assert_eq!(b.wedge(&a).unwrap(), ab.scale(&int(-1)));
        assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn wedge_ambient_mismatch() {
        let a = InvariantForm::covector(3, 0).unwrap();
        let b = InvariantForm::covector(4, 0).unwrap();
        assert_eq!(
            a.wedge(&b).unwrap_err(),
            Error::AmbientMismatch { left: 3, right: 4 }
        );
    }

    #[test]
    fn differential_of_center_dual() {
        let g = h3();
        let k_star = InvariantForm::covector(3, 2).unwrap();
        let d = differential(&g, &k_star).unwrap();
        // d(K*) = 1/2 k* ∧ j*, i.e. -1/2 on the sorted monomial j* ∧ k*.
        assert_eq!(d.coefficient(&[0, 1]), frac(-1, 2));
        let k1 = AlgebraVector::basis(3, 1);
        let j1 = AlgebraVector::basis(3, 0);
        assert_eq!(d.evaluate(&[k1, j1]).unwrap(), frac(1, 2));
        for i in 0..2 {
            let f = InvariantForm::covector(3, i).unwrap();
            assert!(differential(&g, &f).unwrap().is_zero());
        }
    }

    #[test]
    fn scaling_weights() {
        let g = h3();
        let f = InvariantForm::monomial(3, &[0, 2], int(1)).unwrap();
        assert_eq!(scaling_weight(&g, &f).unwrap(), ScalingWeight::Uniform(3));
        let mixed = f
            .add(&InvariantForm::monomial(3, &[0, 1], int(1)).unwrap())
            .unwrap();
        assert!(matches!(
            scaling_weight(&g, &mixed).unwrap(),
            ScalingWeight::Mixed(_)
        ));
        assert_eq!(
            scaling_weight(&g, &InvariantForm::zero(3, 2)).unwrap_err(),
            Error::ZeroForm
        );
    }

    #[test]
    fn pullback_matches_weight() {
        let g = h3();
        let f = InvariantForm::monomial(3, &[1, 2], int(5)).unwrap();
        let pulled = f.pullback_dilation(&g, &int(2)).unwrap();
        assert_eq!(pulled, f.scale(&int(8)));
    }

    #[test]
    fn cube_form_volume_and_range() {
        let g = h3();
        let s = Subspace::from_labels(&g, &["k1"]).unwrap();
        let vol = cube_form(&g, &s, 0).unwrap();
        // Adapted basis (k1, j1, K) reverses the first two covectors.
        assert_eq!(vol.coefficient(&[0, 1, 2]), int(-1));
        assert_eq!(vol.terms().len(), 1);
        assert!(cube_form(&g, &s, 1).is_err());
        assert!(check_cube_closed(&g, &s, 0).unwrap());
    }

    #[test]
    fn pittet_on_h3() {
        let g = h3();
        let k = pittet_kernel(&g).unwrap();
        assert_eq!(k.variables, vec![(2, 0), (2, 1)]);
        // d of a 2-form on a 3-dimensional algebra with K*∧x* is zero.
        assert_eq!(k.dim(), 2);
    }
}
