//! Block-transitive Steiner designs from affine permutation groups.
//!
//! The crate covers finite fields and vector spaces ([`gfspace`]), permutation
//! groups with stabilizer chains and the affine families ([`permgroup`]),
//! design parameters and verification ([`design`]), orbits of groups on
//! `k`-subsets ([`orbits`]), and an arithmetic elimination sieve ([`sieve`]).

pub mod combin;
pub mod design;
pub mod error;
pub mod gfspace;
pub mod guard;
pub mod orbits;
pub mod permgroup;
pub mod sieve;

pub use design::{Design, DesignFile, DesignParams};
pub use error::{Error, Result};
pub use gfspace::{FieldSpec, PointIndex, VectorSpace};
pub use guard::{Guard, DEFAULT_MAX_STATES};
pub use orbits::{OrbitDesign, OrbitReport, StrengthEntry};
pub use permgroup::{FamilyTag, FiniteGroup, GroupFamily, Permutation};
pub use sieve::{EliminationReport, FamilySelector, RuleId, Verdict};
