//! Exact-arithmetic toolkit for a family of desk-scale verifications in
//! algebraic geometry: pencils of skew forms and their Lagrangian loci,
//! invariant 3-forms on the traceless 3x3 matrices, the variety of complete
//! quadric surfaces, and small Chow-ring and K-theory ledgers.
//!
//! Everything runs over `Q` or a prime field `F_p` chosen at runtime; there
//! is no floating point and no randomness outside explicitly seeded
//! sampling.

pub mod chow;
pub mod complete_quadrics;
pub mod encoding;
pub mod linalg;
pub mod pencils;
pub mod scalars;
pub mod trivectors;

pub use linalg::{Matrix, SkewMatrix, Subspace};
pub use scalars::{BinaryForm, Field, FieldElem, ProjPoint1};
