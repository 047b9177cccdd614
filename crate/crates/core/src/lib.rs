//! Exact-arithmetic toolkit for stratified nilpotent Lie algebras.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod linalg;
pub mod predictor;
pub mod rational;
pub mod subspace;

pub use algebra::{AlgebraVector, Dilation, GradedLieAlgebra, StructureTable};
pub use error::{Error, Result};
pub use rational::Rational;
pub use subspace::Subspace;
