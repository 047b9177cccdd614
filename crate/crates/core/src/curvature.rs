//! Sectional curvature of the left-invariant metric making the declared basis
//! orthonormal.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::algebra::GradedLieAlgebra;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::subspace::{is_isotropic, is_regular, Subspace};

fn check_pair(algebra: &GradedLieAlgebra, i: usize, j: usize) -> Result<()> {
    let n = algebra.dim();
    if i >= n || j >= n {
        return Err(Error::OutOfRange(format!(
            "basis pair ({i}, {j}) for an algebra of dimension {n}"
        )));
    }
    if i == j {
        return Err(Error::OutOfRange(format!(
            "a plane needs two distinct basis vectors, got ({i}, {i})"
        )));
    }
    Ok(())
}

/// Milnor's formula for `K(e_i, e_j)`.
pub fn sectional_curvature(algebra: &GradedLieAlgebra, i: usize, j: usize) -> Result<Rational> {
    check_pair(algebra, i, j)?;
    let a = |u: usize, v: usize, w: usize| algebra.table().constant(u, v, w);
    let half = rational::frac(1, 2);
    let quarter = rational::frac(1, 4);
    let mut sum = Rational::zero();
    for k in 0..algebra.dim() {
        let ijk = a(i, j, k);
        let jki = a(j, k, i);
        let kij = a(k, i, j);
        let first = &half * &ijk * (-&ijk + &jki + &kij);
        let second = &quarter * (&ijk - &jki + &kij) * (&ijk + &jki - &kij);
        let third = a(k, i, i) * a(k, j, j);
        sum += first - second - third;
    }
    Ok(sum)
}

/// `K_{1,1} = -¾ Σ_{k ∈ V_2} α_{ijk}²`, `K_{1,2} = ¼ Σ_{k ∈ V_1} α_{kij}²`, and
/// zero for two second-layer vectors.
pub fn two_step_closed_forms(algebra: &GradedLieAlgebra, i: usize, j: usize) -> Result<Rational> {
    if algebra.depth() > 2 {
        return Err(Error::NilpotencyDegree {
            degree: algebra.depth(),
            max: 2,
        });
    }
    check_pair(algebra, i, j)?;
    let w = algebra.weights();
    let a = |u: usize, v: usize, k: usize| algebra.table().constant(u, v, k);
    let sum_sq = |ks: &[usize], f: &dyn Fn(usize) -> Rational| -> Rational {
        ks.iter()
            .map(|&k| {
                let x = f(k);
                &x * &x
            })
            .fold(Rational::zero(), |acc, x| acc + x)
    };
    let second: Vec<usize> = algebra.layers().get(1).cloned().unwrap_or_default();
    let first = algebra.horizontal();
    Ok(match (w[i], w[j]) {
        (1, 1) => rational::frac(-3, 4) * sum_sq(&second, &|k| a(i, j, k)),
        (1, 2) => rational::frac(1, 4) * sum_sq(first, &|k| a(k, i, j)),
        (2, 1) => rational::frac(1, 4) * sum_sq(first, &|k| a(k, j, i)),
        _ => Rational::zero(),
    })
}

/// `K(e_u, e_v)` for every basis pair `u < v`.
pub fn curvature_table(algebra: &GradedLieAlgebra) -> BTreeMap<(usize, usize), Rational> {
    let n = algebra.dim();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    pairs
        .par_iter()
        .map(|&(u, v)| {
            let k = sectional_curvature(algebra, u, v).expect("valid pair");
            ((u, v), k)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemVerdict {
    /// Witness pairs `(j, i)`: for each checked `e_j`, an `e_i` in `S`.
    Holds(Vec<(usize, usize)>),
    /// The first index with no witness, or the first offending pair.
    Fails {
        index: usize,
        partner: Option<usize>,
    },
    /// Not evaluated because its hypothesis was not supplied.
    Skipped,
}

impl ItemVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ItemVerdict::Holds(_))
    }
}

/// The sign pattern of sectional curvatures around a certified subspace `S`:
/// flat inside `S`, negative towards the rest of `V_1` and positive towards
/// `V_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trichotomy {
    pub subspace: Vec<usize>,
    pub flat: ItemVerdict,
    pub negative: ItemVerdict,
    pub positive: ItemVerdict,
}

/// Evaluates the trichotomy for a coordinate subspace that is isotropic and
/// regular. The negative-curvature item depends on `S` having maximal
/// dimension, which the caller asserts through `maximal`.
pub fn trichotomy_report(
    algebra: &GradedLieAlgebra,
    s: &Subspace,
    maximal: bool,
) -> Result<Trichotomy> {
    if algebra.depth() > 2 {
        return Err(Error::NilpotencyDegree {
            degree: algebra.depth(),
            max: 2,
        });
    }
    let indices = s
        .coordinate_indices()
        .ok_or(Error::Uncertified("spanned by basis vectors"))?;
    if !is_isotropic(algebra, s)?.isotropic {
        return Err(Error::Uncertified("isotropic"));
    }
    if !is_regular(algebra, s)?.regular {
        return Err(Error::Uncertified("regular"));
    }
    let k = |i: usize, j: usize| sectional_curvature(algebra, i, j).expect("valid pair");

    let mut flat = ItemVerdict::Holds(Vec::new());
    'outer: for (p, &i) in indices.iter().enumerate() {
        for &j in &indices[p + 1..] {
            if !k(i, j).is_zero() {
                flat = ItemVerdict::Fails {
                    index: j,
                    partner: Some(i),
                };
                break 'outer;
            }
        }
    }

    let witness_scan = |targets: Vec<usize>, want: fn(&Rational) -> bool| -> ItemVerdict {
        let mut witnesses = Vec::with_capacity(targets.len());
        for j in targets {
            match indices.iter().find(|&&i| want(&k(i, j))) {
                Some(&i) => witnesses.push((j, i)),
                None => {
                    return ItemVerdict::Fails {
                        index: j,
                        partner: None,
                    }
                }
            }
        }
        ItemVerdict::Holds(witnesses)
    };

    let negative = if maximal {
        let rest: Vec<usize> = algebra
            .horizontal()
            .iter()
            .copied()
            .filter(|u| !indices.contains(u))
            .collect();
        witness_scan(rest, |x| x.is_negative())
    } else {
        ItemVerdict::Skipped
    };
    let positive = witness_scan(algebra.vertical(), |x| x.is_positive());

    Ok(Trichotomy {
        subspace: indices,
        flat,
        negative,
        positive,
    })
}
