//! Exact-arithmetic engine for periodic cluster algebras and the
//! Somos-type / q-discrete Painleve recurrences they generate.
//!
//! The crate is organized around five layers:
//!
//! - [`poly`]: sparse multivariate Laurent polynomials over big integers
//!   with exact division, substitution and multivariate gcd;
//! - [`rational`]: reduced rational functions over the Laurent ring and the
//!   cross-pair co-primeness test;
//! - [`cluster`]: skew-symmetric exchange matrices, seeds, and the three
//!   mutation rules, including the periodic `bk` family;
//! - [`recurrence`]: orbit generators for the bilinear (Somos-k) equation,
//!   its non-autonomous form, the reduced coefficient equations
//!   (q-Painleve I and II at k = 4 and 5) and their conserved quantities;
//! - [`verify`]: mechanized structural checks (periodicity, involution,
//!   Laurent property, co-primeness, irreducibility probes) reported in a
//!   stable JSON shape.
//!
//! All arithmetic is exact; floating point is never used.

pub mod budget;
pub mod cluster;
pub mod error;
mod factored;
pub mod poly;
pub mod rational;
pub mod recurrence;
pub mod verify;

pub use budget::{Budget, DEFAULT_TERM_BUDGET};
pub use cluster::{check_mutation_period, CyclicShift, ExchangeMatrix, Seed};
pub use error::{Error, Result};
pub use poly::{coprime, ExponentVector, LaurentPoly, Monomial, VarTable};
pub use rational::{coprime_rf, ParamAssignment, ParamValue, RationalFunction};
pub use recurrence::{NonAutonomyZ, Orbit, OrbitScalar};
pub use verify::{CheckReport, Verdict};
