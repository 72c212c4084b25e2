//! Exact verification toolkit for constructions of higher spin curves of low
//! genus: exact linear algebra, forms on `P1xP1`, `P2`, `P3`, Gröbner bases,
//! elliptic curves, linear systems, the symmetry group of three diagonal
//! points, and end-to-end pipelines producing check reports.

pub mod elliptic;
pub mod error;
pub mod field;
pub mod groebner;
pub mod linalg;
pub mod linsys;
pub mod pipelines;
pub mod poly;
pub mod reptheory;
pub mod univariate;

pub use error::{Error, Result};
pub use field::{Field, Scalar, DEFAULT_PRIME};
pub use linalg::ExactMatrix;
pub use poly::{Ambient, MultiDegree, MultiPoly};
