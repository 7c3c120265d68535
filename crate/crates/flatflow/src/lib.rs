//! Exact-arithmetic engine for flat-coordinate potentials of the A/B/D
//! families and the dispersionless hierarchies they generate.
//!
//! The crate builds polynomial potentials in flat coordinates, checks the
//! structural identities they must satisfy (associativity of the induced
//! product, quasi-homogeneity), extracts the stabilized coefficient tables
//! that drive the hierarchies, assembles the flow equations, and verifies
//! the generating-function identities (Fay-type and their B/D analogues)
//! at finite truncation — all over `BigRational`, with no floating point.

pub mod biseries;
pub mod book;
pub mod combinatorics;
pub mod error;
pub mod family;
pub mod fay;
pub mod frobenius;
pub mod hierarchy;
pub mod monomial;
pub mod poly;
pub mod potentials;
pub mod rational;

pub use biseries::TruncatedBiseries;
pub use error::{Error, Result};
pub use family::Family;
pub use hierarchy::{assemble_equation, extract_r, HierarchyEquation, RTableRow};
pub use monomial::Monomial;
pub use poly::{euler_integrate, Polynomial};
pub use potentials::{b_via_d_check, potential, CoordinateMap, FlatPotential};
pub use rational::Rat;
