//! Continued fractions whose approximants diverge in the classical sense but
//! converge along residue classes of the index.
//!
//! The centre of the crate is a three-term recurrence
//! `P(n) = b(n) P(n-1) + a(n) P(n-2)` driven by coefficients of the form
//! `b(n) = w1 + w2 + p(n)`, `a(n) = -w1*w2 + q(n)` with `w1 != w2` roots of
//! unity and absolutely summable perturbations `p`, `q`.  The approximants
//! `P(n)/Q(n)` then cycle between finitely many limit points: `P(mk+i)` and
//! `Q(mk+i)` converge for every residue `i` mod `m`, where `m` is the least
//! common order of the two roots.  The same mechanism is exposed at three
//! levels:
//!
//! * [`cf`] - plain continued fraction plumbing (tables, tails, equivalence
//!   transforms, projective values);
//! * [`matprod`] / [`poincare`] - products of perturbed matrices and linear
//!   recurrences of any order with root-of-unity characteristic roots;
//! * [`multilimit`] - residue-class limit profiles, closed forms for the
//!   limits and their determinant pairings, Stern-Stolz style families;
//! * [`qseries`] - q-series closed forms for the limits of the cycling
//!   Rogers-Ramanujan relative, including the classical three-limit fraction;
//! * [`bernoulli`] - continued fractions built to interpolate a prescribed
//!   sequence of approximants, and analytic three-limit constructions.
//!
//! Everything is plain `f64`/`Complex64` arithmetic; exact cancellation of
//! root-of-unity powers is kept exact by tracking roots as rational turns
//! ([`roots::RootOfUnity`]) instead of floating points on the circle.

pub mod bernoulli;
pub mod cf;
mod error;
pub mod matprod;
pub mod multilimit;
pub mod poincare;
pub mod qseries;
pub mod roots;
pub mod seq;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use cf::{CfSpec, ConvergentTable, ProjectivePoint};
pub use matprod::{MatrixSeq, SquareMatrix};
pub use multilimit::{LimitProfile, MultiLimitCf};
pub use poincare::{LimitVector, PoincareRecurrence};
pub use qseries::QParam;
pub use roots::RootOfUnity;
pub use seq::{PerturbationSeq, Seq};
