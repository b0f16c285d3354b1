//! Exact verification of BV and BV-infinity structures on finite
//! graded-commutative dg-algebras over the rationals and prime fields.

pub mod algebra;
pub mod bv;
pub mod cli;
pub mod deformation;
pub mod degeneration;
pub mod dglie;
pub mod error;
pub mod field;
pub mod format;
pub mod gallery;
pub mod linalg;
pub mod multivector;
pub mod operator;
pub mod report;
pub mod quasi_abelian;
pub mod transfer;

pub use algebra::{Algebra, AlgebraPresentation, Element, Generator, Monomial};
pub use bv::{BVStructure, VerificationReport};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use multivector::{LieStructure, MultiVector};
pub use operator::GradedOperator;
