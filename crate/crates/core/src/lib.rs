//! Finite truncated simplicial sets and the combinatorics of their filling
//! conditions.
//!
//! The crate builds level-wise finite simplicial sets (standard simplices,
//! nerves of finite categories, Duskin nerves of finite 2-categories and
//! `K(M,2)` for commutative monoids) and decides horn filling (`Kan_p[n]`)
//! and rhombus filling (`BC_{p,q}[n]`) on them by exhaustive search.
//! For `K(M,2)` the rhombus conditions are also decided directly on cochain
//! data, and constructive fillers are provided over abelian groups and over
//! the nonnegative integers.

pub mod category;
pub mod error;
pub mod indexing;
pub mod km2;
pub mod monoid;
pub mod report;
pub mod simplicial;
pub mod solvers;
pub mod twocat;

pub use error::{Error, Result};
pub use report::{Budget, CheckReport, Finding, Verdict};
pub use simplicial::TruncatedSimplicialSet;
