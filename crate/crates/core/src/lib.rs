//! Exact computations for the linear code of the twisted embedding of the
//! point-hyperplane geometry of `PG(n, q)`.
//!
//! Points of the code's projective system are the matrices `[x^sigma xi]` for incident
//! pairs `([x], [xi])`; codewords are indexed by matrices `M` through `c_M[i] = Tr(X_i M)`.

pub mod code;
pub mod error;
pub mod gamma;
pub mod gf;
pub mod hyperplanes;
pub mod lambda;
pub mod linalg;
pub mod projgeom;
pub mod rng;

pub use error::{Error, Result};
pub use gf::{Elem, Field, Frobenius};
pub use lambda::ProjectiveSystem;
pub use linalg::{ColVec, Mat, RowVec};
