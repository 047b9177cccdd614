//! Exponential coordinates on 2-step groups and scalable lattices.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{AlgebraVector, GradedLieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};

/// `exp(x)` in a group of nilpotency degree at most 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement(pub AlgebraVector);

impl GroupElement {
    pub fn identity(dim: usize) -> Self {
        GroupElement(AlgebraVector::zero(dim))
    }

    pub fn coords(&self) -> &AlgebraVector {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        GroupElement(-&self.0)
    }
}

fn require_two_step(algebra: &GradedLieAlgebra) -> Result<()> {
    if algebra.depth() > 2 {
        return Err(Error::NilpotencyDegree {
            degree: algebra.depth(),
            max: 2,
        });
    }
    Ok(())
}

/// `exp(x) exp(y) = exp(x + y + ½[x, y])`.
pub fn multiply(
    algebra: &GradedLieAlgebra,
    a: &GroupElement,
    b: &GroupElement,
) -> Result<GroupElement> {
    require_two_step(algebra)?;
    let half = rational::frac(1, 2);
    let br = algebra.bracket(&a.0, &b.0)?;
    Ok(GroupElement(&(&a.0 + &b.0) + &br.scaled(&half)))
}

/// The automorphism `s_t`, acting on exponential coordinates by `ŝ_t`.
pub fn group_scaling(
    algebra: &GradedLieAlgebra,
    t: &Rational,
    g: &GroupElement,
) -> Result<GroupElement> {
    let dilation = algebra.dilation(t.clone())?;
    Ok(GroupElement(dilation.apply(&g.0)?))
}

/// Generators of a ℤ-module `𝒵 ⊂ 𝔤` whose exponential is meant to be a
/// lattice with `s_2(Γ) ⊂ Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    generators: Vec<AlgebraVector>,
    inverse: Matrix,
}

impl LatticeSpec {
    pub fn new(generators: Vec<AlgebraVector>) -> Result<Self> {
        let n = generators.len();
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.dim(),
            });
        }
        let m: Matrix = generators.iter().map(|g| g.0.clone()).collect();
        let inverse = linalg::inverse(&m).ok_or_else(|| {
            Error::SingularBasis(format!("{n} lattice generators are linearly dependent"))
        })?;
        Ok(LatticeSpec {
            generators,
            inverse,
        })
    }

    pub fn generators(&self) -> &[AlgebraVector] {
        &self.generators
    }

    /// Coordinates of `v` in the generator basis.
    pub fn coordinates(&self, v: &AlgebraVector) -> Vec<Rational> {
        linalg::vec_mat(&v.0, &self.inverse)
    }

    /// Whether `v` lies in the ℤ-span of the generators.
    pub fn contains(&self, v: &AlgebraVector) -> bool {
        v.dim() == self.generators.len() && self.coordinates(v).iter().all(rational::is_integer)
    }
}

/// Integral basis from the first-layer basis and ½-brackets of its pairs,
/// completed by halves of second-layer basis vectors when needed.
pub fn build_scalable_lattice(algebra: &GradedLieAlgebra) -> Result<LatticeSpec> {
    require_two_step(algebra)?;
    let n = algebra.dim();
    let half = rational::frac(1, 2);
    let horizontal = algebra.horizontal();
    let mut generators: Vec<AlgebraVector> = horizontal
        .iter()
        .map(|&u| AlgebraVector::basis(n, u))
        .collect();
    let mut picked: Matrix = Vec::new();
    let target = algebra.vertical().len();
    let mut try_push = |v: AlgebraVector, generators: &mut Vec<AlgebraVector>| {
        if picked.len() == target || v.is_zero() {
            return;
        }
        let mut trial = picked.clone();
        trial.push(v.0.clone());
        if linalg::rank(&trial, n) == picked.len() + 1 {
            picked = trial;
            generators.push(v);
        }
    };
    for (a, &u) in horizontal.iter().enumerate() {
        for &v in &horizontal[a + 1..] {
            let mut c = algebra.bracket_basis(u, v).scaled(&half);
            if c.0
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_negative())
            {
                c = -&c;
            }
            try_push(c, &mut generators);
        }
    }
    for w in algebra.vertical() {
        try_push(AlgebraVector::basis(n, w).scaled(&half), &mut generators);
    }
    LatticeSpec::new(generators)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupClosure {
    Pass,
    /// Generator indices whose product leaves the ℤ-span.
    Violation {
        left: usize,
        right: usize,
        product: AlgebraVector,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalingClosure {
    Pass,
    Violation {
        generator: usize,
        image: AlgebraVector,
    },
}

/// Checks that `exp(a) exp(b)` stays in `exp(𝒵)` for every ordered pair of
/// generators.
pub fn check_group_closure(algebra: &GradedLieAlgebra, spec: &LatticeSpec) -> Result<GroupClosure> {
    require_two_step(algebra)?;
    let gens = spec.generators();
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|i| (0..gens.len()).map(move |j| (i, j)))
        .collect();
    let hit = pairs.par_iter().find_map_first(|&(i, j)| {
        let p = multiply(
            algebra,
            &GroupElement(gens[i].clone()),
            &GroupElement(gens[j].clone()),
        )
        .ok()?;
        (!spec.contains(&p.0)).then_some((i, j, p.0))
    });
    Ok(match hit {
        None => GroupClosure::Pass,
        Some((left, right, product)) => GroupClosure::Violation {
            left,
            right,
            product,
        },
    })
}

/// Checks that `s_2` maps every generator into `𝒵`.
pub fn check_scaling_closure(
    algebra: &GradedLieAlgebra,
    spec: &LatticeSpec,
) -> Result<ScalingClosure> {
    let dilation = algebra.dilation(rational::int(2))?;
    for (generator, g) in spec.generators().iter().enumerate() {
        let image = dilation.apply(g)?;
        if !spec.contains(&image) {
            return Ok(ScalingClosure::Violation { generator, image });
        }
    }
    Ok(ScalingClosure::Pass)
}
