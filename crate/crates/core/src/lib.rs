//! Exact-arithmetic engine for the generalized cluster structure on the
//! Drinfeld double `D(GL_n)` and on the dual Poisson–Lie group `GL_n*`.
//!
//! The crate builds the initial seed (function family, quiver, coefficient
//! strings), evaluates the family exactly at rational points, computes the
//! standard, double and dual Poisson–Lie brackets with exact jet gradients,
//! runs generalized mutations, and checks the determinantal identity behind
//! the special exchange relation.
//!
//! Modules:
//! - [`exact`]: rationals, jets, matrices, determinants, adjugates.
//! - [`family`]: the functions `g`, `h`, `f`, `φ`, `c`, `ψ` and point samplers.
//! - [`poisson`]: gradients, brackets, log-canonicality checks.
//! - [`seedcore`]: quiver `Q_n`, exchange matrix, strings, seeds.
//! - [`mutation`]: matrix/coefficient mutation, exchange relations, regularity.
//! - [`identity`]: the Krylov/adjugate determinantal identity.
//! - [`harness`]: CLI orchestration, JSON reports, DOT/JSON exports.

pub mod error;
pub mod exact;
pub mod family;
pub mod harness;
pub mod identity;
pub mod mutation;
pub mod poisson;
pub mod seedcore;

pub use error::{Error, Result};
pub use exact::{Entry, Jet, Mat, Scalar};
pub use family::{DoublePoint, DualPoint, FamilyFunction, Kind};
pub use poisson::{BracketKind, Evaluator, OmegaMatrix};
pub use seedcore::{Quiver, Seed};
