//! Pairs of Hermitian structures on a finite-dimensional complex space.
//!
//! * [`forms`]: validated Hermitian forms and the connecting operator `G`
//!   defined by `h2(x, y) = h1(G x, y)`.
//! * [`genericity`]: three independent tests of generic relative position.
//! * [`biunitary`]: the group preserving both forms.
//! * [`real_structures`]: realification, admissible and compatible triples.
//! * [`direct_integral`]: a grid model of multiplication operators, used for
//!   the particle-in-a-box example.
//! * [`cli`]: the command-line front end and its report formats.
//! * [`selftest`]: the acceptance checks behind `bihermitian selftest`.

pub mod biunitary;
pub mod cli;
pub mod direct_integral;
pub mod error;
pub mod forms;
pub mod genericity;
pub mod linalg;
pub mod real_structures;
pub mod selftest;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
