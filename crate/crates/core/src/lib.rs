//! Exact computer algebra for modular forms on SL2(Z).
//!
//! The crate is organized bottom-up:
//!
//! - [`series`]: truncated Laurent series over big rationals with honest
//!   precision tracking.
//! - [`forms`]: Eisenstein series, the discriminant, `j`, and echelon bases of
//!   holomorphic and cuspidal spaces.
//! - [`hecke`]: the operators `U_m`, `V_m`, `T_m` in arbitrary even weight.
//! - [`whbasis`]: weakly holomorphic forms of bounded pole order, the
//!   principal-part problem and its obstruction, and Bol-image membership.
//! - [`quotient`]: Hecke action on harmonic Maass form classes modulo weakly
//!   holomorphic forms, realized through principal parts.
//! - [`meroforms`]: the named meromorphic forms and exact identity checks.
//! - [`numeval`]: multi-precision evaluation in the upper half-plane and
//!   truncated elliptic Poincare series.

pub mod error;
pub mod forms;
pub mod hecke;
pub mod linalg;
pub mod meroforms;
pub mod numeval;
pub mod poly;
pub mod quotient;
pub mod rational;
pub mod series;
pub mod whbasis;

pub use error::{Error, Result};
pub use forms::{FormBasis, FormKind, ModularFormSeries};
pub use poly::Polynomial;
pub use rational::Rational;
pub use series::LaurentSeries;
pub use whbasis::PrincipalPart;
