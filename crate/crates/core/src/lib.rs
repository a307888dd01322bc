//! Exact computations with graded quasi-hereditary algebras and their
//! standard Koszul duals.

pub mod algebra;
pub mod bar;
pub mod delta;
pub mod error;
pub mod ext;
pub mod field;
pub mod gamma;
pub mod fixtures;
pub mod hom;
pub mod linalg;
pub mod matching;
pub mod module;
pub mod oracle;
pub mod pipeline;
pub mod presentation;
pub mod quasi_hereditary;
pub mod resolution;

pub use algebra::{validate_duality, GradedAlgebra, GradingTag};
pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals};
pub use presentation::{parse_presentation, AlgebraPresentation, Arrow, Relation};
