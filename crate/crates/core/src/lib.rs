//! Higher octonions O_{p,q} as twisted group algebras over Z_2^n, their cubic
//! generating forms over GF(2), and machine checks of the equivalence and
//! periodicity statements relating them.
//!
//! Points of Z_2^n are packed into a `u32` with x_1 in bit 0. Bit strings in
//! input and output put x_1 first.

pub mod algebra;
pub mod element;
pub mod equivalence;
pub mod error;
pub mod forms;
pub mod gf2;
pub mod io;
pub mod periodicity;

pub use algebra::{GradedAlgebra, StandardKind, TwistingTable};
pub use element::{Element, Scalar};
pub use equivalence::{Recipe, Verdict};
pub use error::{Error, Result};
pub use forms::CubicForm;
pub use gf2::{GF2Matrix, Z2Vec};

/// Elements with floating-point coefficients.
pub type RealElement = Element<f64>;
/// Elements with integer coefficients; products stay exact.
pub type IntElement = Element<i64>;
pub type RationalElement = Element<num_rational::Ratio<i64>>;
