//! Exact Rees-algebra computations over Q and F_p: differential
//! saturation, tangent cones and the tau-invariant, and elimination of
//! a distinguished variable.

pub mod algfile;
pub mod diffsat;
pub mod elim;
pub mod error;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rees;
pub mod scalar;
pub mod suites;
pub mod tangent;

pub use error::{Error, Result};
pub use poly::{MultiPoly, Order, Ring};
pub use rees::{PolyIdeal, ReesAlgebra, Saturation, WeightedElem};
pub use scalar::{FieldSpec, Scalar};
