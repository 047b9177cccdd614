//! Graded nilpotent Lie algebras over the rationals.
//!
//! An algebra is a basis, a sparse table of structure constants stored only
//! for basis pairs `u < v`, and a declared layer partition `V_1, ..., V_d`.
//! Antisymmetry is synthesized on read.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};
use crate::rational::{self, Rational};
use crate::subspace::Subspace;

/// Dense coordinates of an element of the algebra in the fixed basis order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraVector(pub Vec<Rational>);

impl AlgebraVector {
    pub fn zero(dim: usize) -> Self {
        AlgebraVector(vec![Rational::zero(); dim])
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[index] = Rational::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        AlgebraVector(values.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        AlgebraVector(self.0.iter().map(|x| x * c).collect())
    }

    /// Indices of nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| i)
    }
}

impl Add for &AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: &AlgebraVector) -> AlgebraVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        AlgebraVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: &AlgebraVector) -> AlgebraVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        AlgebraVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> AlgebraVector {
        AlgebraVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&AlgebraVector> for &Rational {
    type Output = AlgebraVector;
    fn mul(self, rhs: &AlgebraVector) -> AlgebraVector {
        rhs.scaled(self)
    }
}

/// Sparse linear combination of basis vectors.
pub type SparseVector = Vec<(usize, Rational)>;

/// Structure constants of a (not necessarily graded) Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTable {
    dim: usize,
    constants: BTreeMap<(usize, usize), SparseVector>,
}

/// Outcome of [`StructureTable::jacobi_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JacobiReport {
    Pass,
    Fail {
        triple: (usize, usize, usize),
        residual: AlgebraVector,
    },
}

impl StructureTable {
    /// Builds a table from entries `[b_u, b_v] = sum c_w b_w`. Entries with
    /// `u > v` are stored negated under `(v, u)`; listing both orientations of
    /// a pair, or `u == v`, is rejected.
    pub fn new<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), SparseVector)>,
    {
        let mut constants: BTreeMap<(usize, usize), SparseVector> = BTreeMap::new();
        for ((u, v), result) in entries {
            if u >= dim || v >= dim {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket index ({u}, {v}) out of range for dimension {dim}"
                )));
            }
            if u == v {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket of basis vector {u} with itself must not be listed"
                )));
            }
            let (key, sign) = if u < v {
                ((u, v), Rational::one())
            } else {
                ((v, u), -Rational::one())
            };
            if constants.contains_key(&key) {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket of pair ({}, {}) listed more than once",
                    key.0, key.1
                )));
            }
            let mut dense: BTreeMap<usize, Rational> = BTreeMap::new();
            for (w, c) in result {
                if w >= dim {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket result index {w} out of range"
                    )));
                }
                *dense.entry(w).or_insert_with(Rational::zero) += &c * &sign;
            }
            let sparse: SparseVector = dense.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !sparse.is_empty() {
                constants.insert(key, sparse);
            }
        }
        Ok(StructureTable { dim, constants })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stored constants, keyed by `(u, v)` with `u < v`.
    pub fn constants(&self) -> &BTreeMap<(usize, usize), SparseVector> {
        &self.constants
    }

    /// Coefficient `c_{uvw}` of `b_w` in `[b_u, b_v]`, for any `u, v`.
    pub fn constant(&self, u: usize, v: usize, w: usize) -> Rational {
        let (key, negate) = match u.cmp(&v) {
            std::cmp::Ordering::Equal => return Rational::zero(),
            std::cmp::Ordering::Less => ((u, v), false),
            std::cmp::Ordering::Greater => ((v, u), true),
        };
        let c = self
            .constants
            .get(&key)
            .and_then(|s| s.iter().find(|(i, _)| *i == w))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero);
        if negate {
            -c
        } else {
            c
        }
    }

    pub fn bracket_basis(&self, u: usize, v: usize) -> AlgebraVector {
        let mut out = AlgebraVector::zero(self.dim);
        let (key, negate) = if u < v {
            ((u, v), false)
        } else {
            ((v, u), true)
        };
        if let Some(s) = self.constants.get(&key) {
            for (w, c) in s {
                out.0[*w] = if negate { -c.clone() } else { c.clone() };
            }
        }
        out
    }

    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector> {
        for v in [x, y] {
            if v.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.dim(),
                });
            }
        }
        let mut out = AlgebraVector::zero(self.dim);
        for (&(u, v), result) in &self.constants {
            let c = &x.0[u] * &y.0[v] - &x.0[v] * &y.0[u];
            if c.is_zero() {
                continue;
            }
            for (w, k) in result {
                out.0[*w] += &c * k;
            }
        }
        Ok(out)
    }

    /// Checks the Jacobi identity on every basis triple `u < v < w`.
    pub fn jacobi_check(&self) -> JacobiReport {
        let n = self.dim;
        let basis: Vec<AlgebraVector> = (0..n).map(|i| AlgebraVector::basis(n, i)).collect();
        for u in 0..n {
            for v in u + 1..n {
                let uv = self.bracket_basis(u, v);
                for w in v + 1..n {
                    let vw = self.bracket_basis(v, w);
                    let wu = self.bracket_basis(w, u);
                    let a = self.bracket(&uv, &basis[w]).expect("dims agree");
                    let b = self.bracket(&vw, &basis[u]).expect("dims agree");
                    let c = self.bracket(&wu, &basis[v]).expect("dims agree");
                    let sum = &(&a + &b) + &c;
                    if !sum.is_zero() {
                        return JacobiReport::Fail {
                            triple: (u, v, w),
                            residual: sum,
                        };
                    }
                }
            }
        }
        JacobiReport::Pass
    }

    /// Span of all brackets of basis vectors with the given subspace.
    fn bracket_with(&self, sub: &Echelon) -> Echelon {
        let mut images = Vec::new();
        for u in 0..self.dim {
            let bu = AlgebraVector::basis(self.dim, u);
            for row in &sub.rows {
                let img = self
                    .bracket(&bu, &AlgebraVector(row.clone()))
                    .expect("dims agree");
                if !img.is_zero() {
                    images.push(img.0);
                }
            }
        }
        linalg::rref(&images, self.dim)
    }

    /// Terms `g = g_1 >= g_2 >= ...` of the lower central series, ending with
    /// the zero subspace.
    pub fn lower_central_series(&self) -> Result<Vec<Echelon>> {
        let identity: Vec<Vec<Rational>> = (0..self.dim)
            .map(|i| AlgebraVector::basis(self.dim, i).0)
            .collect();
        let mut series = vec![linalg::rref(&identity, self.dim)];
        loop {
            let last = series.last().expect("nonempty");
            if last.rank() == 0 {
                return Ok(series);
            }
            let next = self.bracket_with(last);
            if next.rank() == last.rank() {
                return Err(Error::NotNilpotent {
                    stable_dim: next.rank(),
                });
            }
            series.push(next);
        }
    }
}

/// A Lie algebra with a declared grading `V_1 + ... + V_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    name: String,
    basis: Vec<String>,
    layers: Vec<Vec<usize>>,
    layer_of: Vec<usize>,
    table: StructureTable,
}

/// Result of [`GradedLieAlgebra::stratification_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StratificationReport {
    Pass,
    Diagnostic {
        /// 1-based index of the layer that is not generated.
        layer: usize,
        /// Label of a declared basis vector missing from `[V_1, V_{layer-1}]`.
        uncovered: Option<String>,
        message: String,
    },
}

impl StratificationReport {
    pub fn passed(&self) -> bool {
        matches!(self, StratificationReport::Pass)
    }
}

impl GradedLieAlgebra {
    /// Validates labels, the layer partition and the graded bracket condition
    /// `[V_s, V_t] ⊂ V_{s+t}`.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        layers: Vec<Vec<usize>>,
        table: StructureTable,
    ) -> Result<Self> {
        let n = basis.len();
        if table.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: table.dim(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for label in &basis {
            if label.is_empty() {
                return Err(Error::InvalidAlgebra("empty basis label".into()));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate basis label `{label}`"
                )));
            }
        }
        if n > 0 && layers.is_empty() {
            return Err(Error::InvalidAlgebra("no layers declared".into()));
        }
        let mut layer_of = vec![0usize; n];
        for (j, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::InvalidAlgebra(format!("layer V_{} is empty", j + 1)));
            }
            for &i in layer {
                if i >= n {
                    return Err(Error::InvalidAlgebra(format!(
                        "layer V_{} references index {i} out of range",
                        j + 1
                    )));
                }
                if layer_of[i] != 0 {
                    return Err(Error::InvalidAlgebra(format!(
                        "basis vector `{}` appears in more than one layer",
                        basis[i]
                    )));
                }
                layer_of[i] = j + 1;
            }
        }
        if let Some(i) = layer_of.iter().position(|&l| l == 0) {
            return Err(Error::InvalidAlgebra(format!(
                "basis vector `{}` is in no layer",
                basis[i]
            )));
        }
        for (&(u, v), result) in table.constants() {
            let target = layer_of[u] + layer_of[v];
            for (w, _) in result {
                if layer_of[*w] != target {
                    return Err(Error::GradingViolation {
                        left: basis[u].clone(),
                        right: basis[v].clone(),
                        target: basis[*w].clone(),
                    });
                }
            }
        }
        Ok(GradedLieAlgebra {
            name: name.into(),
            basis,
            layers,
            layer_of,
            table,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// Number of declared layers `d`.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// 1-based layer index of each basis vector (the dilation exponents).
    pub fn weights(&self) -> &[usize] {
        &self.layer_of
    }

    /// Basis indices spanning `V_1`, in declared order.
    pub fn horizontal(&self) -> &[usize] {
        self.layers.first().map_or(&[], Vec::as_slice)
    }

    /// Basis indices outside `V_1`, in basis order.
    pub fn vertical(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.layer_of[i] != 1).collect()
    }

    pub fn n1(&self) -> usize {
        self.horizontal().len()
    }

    pub fn is_horizontal(&self, v: &AlgebraVector) -> bool {
        v.support().all(|i| self.layer_of[i] == 1)
    }

    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector> {
        self.table.bracket(x, y)
    }

    pub fn bracket_basis(&self, u: usize, v: usize) -> AlgebraVector {
        self.table.bracket_basis(u, v)
    }

    pub fn jacobi_check(&self) -> JacobiReport {
        self.table.jacobi_check()
    }

    pub fn lower_central_series(&self) -> Result<Vec<Subspace>> {
        Ok(self
            .table
            .lower_central_series()?
            .into_iter()
            .map(|e| Subspace::from_echelon(self, e))
            .collect())
    }

    /// Nilpotency degree computed from the lower central series.
    pub fn nilpotency_degree(&self) -> Result<usize> {
        Ok(self.table.lower_central_series()?.len() - 1)
    }

    pub fn is_at_most_two_step(&self) -> bool {
        self.depth() <= 2
    }

    /// Checks `[V_1, V_j] = V_{j+1}` for every `j` and that the declared layer
    /// dimensions are the successive lower-central-series quotients.
    pub fn stratification_check(&self) -> StratificationReport {
        let n = self.dim();
        for j in 0..self.depth() {
            let mut images = Vec::new();
            for &u in self.horizontal() {
                for &v in &self.layers[j] {
                    let b = self.bracket_basis(u, v);
                    if !b.is_zero() {
                        images.push(b.0);
                    }
                }
            }
            let span = linalg::rref(&images, n);
            let expected = self.layers.get(j + 1).map_or(0, Vec::len);
            if span.rank() != expected {
                let uncovered = self.layers.get(j + 1).and_then(|next| {
                    next.iter()
                        .find(|&&w| !span.contains(&AlgebraVector::basis(n, w).0))
                        .map(|&w| self.basis[w].clone())
                });
                let message = match &uncovered {
                    Some(label) => format!(
                        "[V_1, V_{}] has dimension {} but V_{} has dimension {}; `{label}` is not generated",
                        j + 1,
                        span.rank(),
                        j + 2,
                        expected
                    ),
                    None => format!(
                        "[V_1, V_{}] has dimension {} but should be {}",
                        j + 1,
                        span.rank(),
                        expected
                    ),
                };
                return StratificationReport::Diagnostic {
                    layer: j + 2,
                    uncovered,
                    message,
                };
            }
        }
        let series = match self.table.lower_central_series() {
            Ok(s) => s,
            Err(e) => {
                return StratificationReport::Diagnostic {
                    layer: 0,
                    uncovered: None,
                    message: e.to_string(),
                }
            }
        };
        let quotients: Vec<usize> = series
            .windows(2)
            .map(|w| w[0].rank() - w[1].rank())
            .collect();
        if quotients != self.layer_dims() {
            return StratificationReport::Diagnostic {
                layer: 0,
                uncovered: None,
                message: format!(
                    "declared layer dimensions {:?} differ from lower central series quotients {:?}",
                    self.layer_dims(),
                    quotients
                ),
            };
        }
        StratificationReport::Pass
    }

    /// `D = sum_j j * dim V_j`.
    pub fn hausdorff_dimension(&self) -> usize {
        self.layers
            .iter()
            .enumerate()
            .map(|(j, l)| (j + 1) * l.len())
            .sum()
    }

    pub fn dilation(&self, t: Rational) -> Result<Dilation> {
        Dilation::new(self.layer_of.clone(), t)
    }

    /// Renders a vector as a combination of basis labels, e.g. `2*i1 - 1/2*K`.
    pub fn format_vector(&self, v: &AlgebraVector) -> String {
        let mut out = String::new();
        for i in v.support() {
            let c = &v.0[i];
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&rational::format(&mag));
                out.push('*');
            }
            out.push_str(&self.basis[i]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for GradedLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (dim {}, layers {:?})",
            self.name,
            self.dim(),
            self.layer_dims()
        )
    }
}

/// The graded dilation `ŝ_t`, multiplying the `V_j` component by `t^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dilation {
    weights: Vec<usize>,
    t: Rational,
}

impl Dilation {
    pub fn new(weights: Vec<usize>, t: Rational) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::ZeroDilation);
        }
        Ok(Dilation { weights, t })
    }

    pub fn parameter(&self) -> &Rational {
        &self.t
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Diagonal entries `t^{w_i}`.
    pub fn factors(&self) -> Vec<Rational> {
        self.weights
            .iter()
            .map(|&w| rational::pow(&self.t, w as i64))
            .collect()
    }

    pub fn apply(&self, v: &AlgebraVector) -> Result<AlgebraVector> {
        if v.dim() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: v.dim(),
            });
        }
        Ok(AlgebraVector(
            v.0.iter().zip(self.factors()).map(|(x, f)| x * f).collect(),
        ))
    }

    pub fn compose(&self, other: &Dilation) -> Dilation {
        Dilation {
            weights: self.weights.clone(),
            t: &self.t * &other.t,
        }
    }

    pub fn inverse(&self) -> Dilation {
        Dilation {
            weights: self.weights.clone(),
            t: self.t.recip(),
        }
    }
}
