//! Subspaces of the first layer, the curvature form and its certificates.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{AlgebraVector, GradedLieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, Matrix};
use crate::rational::{self, Rational};

/// A linear subspace of the algebra, stored as the reduced row-echelon form of
/// any spanning set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    rows: Vec<AlgebraVector>,
    pivots: Vec<usize>,
    horizontal: bool,
}

impl Subspace {
    /// Canonicalizes a (possibly dependent) spanning set.
    pub fn new(algebra: &GradedLieAlgebra, spanning: &[AlgebraVector]) -> Result<Self> {
        let n = algebra.dim();
        for v in spanning {
            if v.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.dim(),
                });
            }
        }
        let raw: Matrix = spanning.iter().map(|v| v.0.clone()).collect();
        Ok(Self::from_echelon(algebra, linalg::rref(&raw, n)))
    }

    pub fn from_echelon(algebra: &GradedLieAlgebra, e: Echelon) -> Self {
        let rows: Vec<AlgebraVector> = e.rows.into_iter().map(AlgebraVector).collect();
        let horizontal = rows.iter().all(|r| algebra.is_horizontal(r));
        Subspace {
            ambient_dim: algebra.dim(),
            rows,
            pivots: e.pivots,
            horizontal,
        }
    }

    /// Span of the given basis vectors.
    pub fn coordinate(algebra: &GradedLieAlgebra, indices: &[usize]) -> Result<Self> {
        let n = algebra.dim();
        let mut vectors = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= n {
                return Err(Error::OutOfRange(format!(
                    "basis index {i} for an algebra of dimension {n}"
                )));
            }
            vectors.push(AlgebraVector::basis(n, i));
        }
        Self::new(algebra, &vectors)
    }

    /// Span of the basis vectors with the given labels.
    pub fn from_labels<S: AsRef<str>>(algebra: &GradedLieAlgebra, labels: &[S]) -> Result<Self> {
        let indices = labels
            .iter()
            .map(|l| {
                let l = l.as_ref();
                algebra
                    .index_of(l)
                    .ok_or_else(|| Error::Parse(format!("unknown basis label `{l}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::coordinate(algebra, &indices)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[AlgebraVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_horizontal(&self) -> bool {
        self.horizontal
    }

    pub fn contains(&self, v: &AlgebraVector) -> bool {
        let e = Echelon {
            rows: self.rows.iter().map(|r| r.0.clone()).collect(),
            pivots: self.pivots.clone(),
            ncols: self.ambient_dim,
        };
        e.contains(&v.0)
    }

    /// Basis indices when the subspace is spanned by basis vectors.
    pub fn coordinate_indices(&self) -> Option<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| {
                let mut support = r.support();
                let first = support.next()?;
                support.next().is_none().then_some(first)
            })
            .collect()
    }

    fn require_horizontal(&self, algebra: &GradedLieAlgebra) -> Result<()> {
        if self.ambient_dim != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: self.ambient_dim,
            });
        }
        match self.rows.iter().position(|r| !algebra.is_horizontal(r)) {
            Some(row) => Err(Error::NotHorizontal { row }),
            None => Ok(()),
        }
    }
}

/// The vector-valued 2-form `Ω = (ω_1, ..., ω_{n-n_1})` on `V_1`, where
/// `ω_i(x, y)` is half the coefficient of the `i`-th non-horizontal basis
/// vector in `[x, y]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureForm {
    horizontal: Vec<usize>,
    vertical: Vec<usize>,
    /// `matrices[i][a][b] = ω_i(b_{horizontal[a]}, b_{horizontal[b]})`.
    matrices: Vec<Matrix>,
}

impl CurvatureForm {
    pub fn new(algebra: &GradedLieAlgebra) -> Self {
        let horizontal = algebra.horizontal().to_vec();
        let vertical = algebra.vertical();
        let half = rational::frac(1, 2);
        let n1 = horizontal.len();
        let matrices = vertical
            .iter()
            .map(|&w| {
                let mut m = vec![vec![Rational::zero(); n1]; n1];
                for a in 0..n1 {
                    for b in a + 1..n1 {
                        let c = algebra.table().constant(horizontal[a], horizontal[b], w);
                        if !c.is_zero() {
                            let v = &c * &half;
                            m[b][a] = -v.clone();
                            m[a][b] = v;
                        }
                    }
                }
                m
            })
            .collect();
        CurvatureForm {
            horizontal,
            vertical,
            matrices,
        }
    }

    /// Number of components, `n - n_1`.
    pub fn len(&self) -> usize {
        self.vertical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertical.is_empty()
    }

    /// Basis index that component `i` is dual to.
    pub fn component_basis(&self, i: usize) -> usize {
        self.vertical[i]
    }

    pub fn matrix(&self, i: usize) -> &Matrix {
        &self.matrices[i]
    }

    /// `ω_i(x, y)` for horizontal `x`, `y`; vertical components are ignored.
    pub fn evaluate(&self, i: usize, x: &AlgebraVector, y: &AlgebraVector) -> Rational {
        let m = &self.matrices[i];
        let mut acc = Rational::zero();
        for (a, &u) in self.horizontal.iter().enumerate() {
            if x.0[u].is_zero() {
                continue;
            }
            for (b, &v) in self.horizontal.iter().enumerate() {
                if !y.0[v].is_zero() && !m[a][b].is_zero() {
                    acc += &x.0[u] * &y.0[v] * &m[a][b];
                }
            }
        }
        acc
    }
}

pub fn curvature_form(algebra: &GradedLieAlgebra) -> CurvatureForm {
    CurvatureForm::new(algebra)
}

/// Result of [`is_isotropic`]; the witness holds indices of two canonical
/// spanning rows with nonzero bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyReport {
    pub isotropic: bool,
    pub witness: Option<(usize, usize)>,
}

pub fn is_isotropic(algebra: &GradedLieAlgebra, s: &Subspace) -> Result<IsotropyReport> {
    s.require_horizontal(algebra)?;
    let rows = s.rows();
    for p in 0..rows.len() {
        for q in p + 1..rows.len() {
            if !algebra.bracket(&rows[p], &rows[q])?.is_zero() {
                return Ok(IsotropyReport {
                    isotropic: false,
                    witness: Some((p, q)),
                });
            }
        }
    }
    Ok(IsotropyReport {
        isotropic: true,
        witness: None,
    })
}

/// Result of [`is_regular`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub regular: bool,
    pub rank: usize,
    pub required_rank: usize,
}

/// The regularity matrix: rows `(i, q)` in lexicographic order, columns the
/// `V_1` basis, entry `ω_i(b_u, X_q)`.
pub fn regularity_matrix(algebra: &GradedLieAlgebra, s: &Subspace) -> Result<Matrix> {
    s.require_horizontal(algebra)?;
    let horizontal = algebra.horizontal();
    let vertical = algebra.vertical();
    let n = algebra.dim();
    let half = rational::frac(1, 2);
    // brackets[u][q] = [b_u, X_q]
    let brackets: Vec<Vec<AlgebraVector>> = horizontal
        .iter()
        .map(|&u| {
            let bu = AlgebraVector::basis(n, u);
            s.rows()
                .iter()
                .map(|x| algebra.bracket(&bu, x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut m = Vec::with_capacity(vertical.len() * s.dim());
    for &w in &vertical {
        for q in 0..s.dim() {
            m.push(brackets.iter().map(|row| &row[q].0[w] * &half).collect());
        }
    }
    Ok(m)
}

pub fn is_regular(algebra: &GradedLieAlgebra, s: &Subspace) -> Result<RegularityReport> {
    let m = regularity_matrix(algebra, s)?;
    let required_rank = algebra.vertical().len() * s.dim();
    let rank = linalg::rank(&m, algebra.n1());
    Ok(RegularityReport {
        regular: rank == required_rank,
        rank,
        required_rank,
    })
}

/// Finds `ξ ∈ V_1` with `ω_i(ξ, X_q) = σ[i][q]` for every component `i` and
/// canonical row `X_q` of `s`.
pub fn solve_regularity(
    algebra: &GradedLieAlgebra,
    s: &Subspace,
    sigma: &[Vec<Rational>],
) -> Result<AlgebraVector> {
    let m = regularity_matrix(algebra, s)?;
    let vertical = algebra.vertical();
    if sigma.len() != vertical.len() {
        return Err(Error::DimensionMismatch {
            expected: vertical.len(),
            found: sigma.len(),
        });
    }
    let mut rhs = Vec::with_capacity(m.len());
    for row in sigma {
        if row.len() != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                found: row.len(),
            });
        }
        rhs.extend(row.iter().cloned());
    }
    let coords = linalg::solve(&m, &rhs, algebra.n1()).ok_or(Error::Inconsistent)?;
    let mut xi = AlgebraVector::zero(algebra.dim());
    for (&u, c) in algebra.horizontal().iter().zip(coords) {
        xi.0[u] = c;
    }
    let omega = CurvatureForm::new(algebra);
    for (i, row) in sigma.iter().enumerate() {
        for (q, target) in row.iter().enumerate() {
            if &omega.evaluate(i, &xi, &s.rows()[q]) != target {
                return Err(Error::Inconsistent);
            }
        }
    }
    Ok(xi)
}

/// Both sides of `n_1 - k >= k (n - n_1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GromovBound {
    pub k: usize,
    pub lhs: i64,
    pub rhs: i64,
}

impl GromovBound {
    pub fn satisfied(&self) -> bool {
        self.lhs >= self.rhs
    }

    pub fn equality(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn gromov_dimension_bound(algebra: &GradedLieAlgebra, k: usize) -> Result<GromovBound> {
    if k == 0 {
        return Err(Error::OutOfRange(
            "subspace dimension must be at least 1".into(),
        ));
    }
    let n = algebra.dim() as i64;
    let n1 = algebra.n1() as i64;
    let k = k as i64;
    Ok(GromovBound {
        k: k as usize,
        lhs: n1 - k,
        rhs: k * (n - n1),
    })
}

/// Budget for [`search_certified_subspace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Number of random candidates tried after the coordinate subsets.
    pub random_candidates: usize,
    /// Random coefficients are drawn from `-max_coeff..=max_coeff`.
    pub max_coeff: i64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            random_candidates: 0,
            max_coeff: 2,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStage {
    Coordinate,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotFoundReason {
    /// The dimension inequality rules out every regular subspace.
    DimensionBound,
    /// The budget was exhausted; this proves nothing about existence.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        subspace: Subspace,
        stage: SearchStage,
        candidates_checked: usize,
    },
    NotFound {
        reason: NotFoundReason,
        candidates_checked: usize,
    },
}

const CHUNK: usize = 2048;

/// Searches for a `k`-dimensional isotropic and regular horizontal subspace:
/// first every `k`-subset of the `V_1` basis in lexicographic order, then
/// seeded random small-integer combinations. The result is the first hit in
/// that fixed order regardless of thread scheduling.
pub fn search_certified_subspace(
    algebra: &GradedLieAlgebra,
    k: usize,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    let n1 = algebra.n1();
    if k > n1 {
        return Err(Error::OutOfRange(format!(
            "requested dimension {k} exceeds dim V_1 = {n1}"
        )));
    }
    if !gromov_dimension_bound(algebra, k)?.satisfied() {
        return Ok(SearchOutcome::NotFound {
            reason: NotFoundReason::DimensionBound,
            candidates_checked: 0,
        });
    }
    let certified = |s: &Subspace| -> bool {
        s.dim() == k
            && is_isotropic(algebra, s)
                .map(|r| r.isotropic)
                .unwrap_or(false)
            && is_regular(algebra, s).map(|r| r.regular).unwrap_or(false)
    };
    let horizontal = algebra.horizontal();
    let mut checked = 0usize;

    let mut subsets = Combinations::new(n1, k);
    loop {
        let chunk: Vec<Vec<usize>> = subsets.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let hit = chunk
            .par_iter()
            .enumerate()
            .find_map_first(|(pos, subset)| {
                let indices: Vec<usize> = subset.iter().map(|&a| horizontal[a]).collect();
                let s = Subspace::coordinate(algebra, &indices).ok()?;
                certified(&s).then_some((pos, s))
            });
        if let Some((pos, subspace)) = hit {
            return Ok(SearchOutcome::Found {
                subspace,
                stage: SearchStage::Coordinate,
                candidates_checked: checked + pos + 1,
            });
        }
        checked += chunk.len();
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = algebra.dim();
    let bound = config.max_coeff.max(1);
    let mut remaining = config.random_candidates;
    while remaining > 0 {
        let take = remaining.min(CHUNK);
        remaining -= take;
        let chunk: Vec<Vec<AlgebraVector>> = (0..take)
            .map(|_| {
                (0..k)
                    .map(|_| {
                        let mut v = AlgebraVector::zero(n);
                        for &u in horizontal {
                            v.0[u] = rational::int(rng.gen_range(-bound..=bound));
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let hit = chunk
            .par_iter()
            .enumerate()
            .find_map_first(|(pos, vectors)| {
                let s = Subspace::new(algebra, vectors).ok()?;
                certified(&s).then_some((pos, s))
            });
        if let Some((pos, subspace)) = hit {
            return Ok(SearchOutcome::Found {
                subspace,
                stage: SearchStage::Random,
                candidates_checked: checked + pos + 1,
            });
        }
        checked += chunk.len();
    }
    Ok(SearchOutcome::NotFound {
        reason: NotFoundReason::BudgetExhausted,
        candidates_checked: checked,
    })
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
