//! Exact symbolic machinery for almost complex structures on 4-dimensional
//! charts: Nijenhuis tensor, torsion bundle, distinguished field, adapted
//! frames, the associated Lie algebra and the almost-Kähler closedness
//! system.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command line live in the companion `nijenhuis-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod acstructure;
pub mod error;
pub mod expr;
pub mod invariant;
pub mod kaehler;
pub mod liealg;
pub mod linalg;
pub mod torsion;
pub mod vectorfield;

pub use acstructure::{AlmostComplexStructure, ComplexFrameSpec};
pub use error::{Error, ExprError, Result};
pub use expr::{Chart, GenExpr, RatExpr, Rational, SymbolTable, Value};
pub use invariant::{Family, InvariantModel};
pub use liealg::{AlgebraReport, CatalogTag, StructureConstants};
pub use torsion::{Fundamentality, TorsionAnalysis};
pub use vectorfield::VectorField;
