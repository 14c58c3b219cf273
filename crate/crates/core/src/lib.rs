//! Exact computation of RO(G)-graded equivariant algebraic K-groups of finite
//! fields, for a cyclic Galois group acting by Frobenius.
//!
//! The layers, bottom to top:
//!
//! * [`matrix`], [`abelian`] — integer linear algebra: Smith normal form,
//!   presented abelian groups, kernels and cokernels.
//! * [`gmodule`] — modules over a cyclic group; invariants, coinvariants,
//!   norm maps, and 2-periodic group/Tate cohomology.
//! * [`mackey`], [`lewis`] — Mackey functors, the orbit/fixed-point functors,
//!   axiom validation, and Lewis-diagram serialization.
//! * [`rep`], [`catalog`] — the RO(G) grading, Quillen's K-groups with Galois
//!   action, and the named Mackey functor catalog.
//! * [`ss`], [`chart`] — spectral sequence pages, collapse certification, the
//!   homotopy Mackey functor charts, and chart rendering.
//! * [`ring`] — the RO(C_2)-graded coefficient ring of the K-theory spectrum
//!   of a quadratic extension, with exact monomial normal forms.
//! * [`oracle`], [`verify`] — brute-force cross-checks (resolution cohomology,
//!   exhaustive morphism search, randomized extensions) and the verification
//!   suites exposed on the command line.

pub mod abelian;
pub mod catalog;
pub mod chart;
pub mod error;
pub mod gmodule;
pub mod lewis;
pub mod mackey;
pub mod matrix;
pub mod oracle;
pub mod rep;
pub mod ring;
pub mod serde_util;
pub mod ss;
pub mod verify;

pub use error::{KrogError, Result};
