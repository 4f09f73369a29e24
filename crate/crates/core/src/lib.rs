//! Exact-arithmetic toolkit for predictability tradeoffs in prepare-measure
//! theories: state spaces as convex bodies, uncertainty relations,
//! orbit realizability and the noncontextual predictability bounds.

pub mod cli;
pub mod contextuality;
pub mod error;
pub mod fm;
pub mod linalg;
pub mod linsys;
pub mod lp;
pub mod orbit;
pub mod polytope;
pub mod rational;
pub mod report;
pub mod selftest;
pub mod surd;
pub mod theories;
pub mod uncertainty;

pub use error::{Error, Result};
pub use fm::{fm_project, remove_redundant};
pub use linsys::{LinearSystem, Relation, Row};
pub use lp::{farkas_certificate, lp_solve, FarkasCertificate, LpOutcome, LpSolver, LpStatus, Sense};
pub use polytope::{polytope_vertices, support_function, Body, Point, Polytope};
pub use rational::{parse_rational, Rational};
pub use surd::Surd;
