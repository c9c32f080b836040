//! Exact computations with DG-enhanced affine Hecke algebras, DG-enhanced KLR
//! algebras, their completions, and the completed isomorphism between them.

pub mod bkr_iso;
pub mod completion;
pub mod error;
pub mod hecke_core;
pub mod homology;
pub mod klr_core;
pub mod linalg;
pub mod perm;
pub mod report;
pub mod scalars_params;
pub mod superrings;

pub use error::{Error, Result};


pub use hecke_core::{HeckeAlg, HeckeElement, HeckeKey, HeckeLetter, HeckeWord};
pub use klr_core::{BasisKey, KlrAlg, KlrElement, KlrLetter, KlrWord};
pub use perm::Perm;
pub use report::{CheckRecord, Report, Status};
pub use scalars_params::{ParamSet, Quiver, Scalar, Variant};
pub use superrings::{Ring, SuperPoly};
