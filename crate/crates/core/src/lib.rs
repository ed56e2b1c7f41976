//! Exact computations in the group of formal diffeomorphisms of the line,
//! its Lie algebra of formal vector fields, and the weighted norms that cut
//! out Banach-Lie subgroups of it.
//!
//! All scalars are exact rationals, so group identities are checked as
//! equalities and norm estimates as exact comparisons.

pub mod error;
pub mod freealg;
pub mod json;
pub mod lie;
pub mod norms;
pub mod random;
pub mod rational;
pub mod series;
pub mod triangular;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Coefficient;
pub use series::{FormalDiffeo, FormalVectorField, TruncatedSeries};
pub use triangular::TriangularOperator;
