//! Permutations, generated groups, orbits and stabilizers, and the affine
//! group families.

mod chain;
mod family;
mod group;
pub mod io;
mod perm;

pub use chain::StabChain;
pub use family::{
    build_family, divides_bound, g2_order, gl_order, sp_order, FamilyTag, GroupFamily,
    CASE6_DEGREES,
};
pub use group::{FiniteGroup, TRANSITIVE_CHECK_DEGREE};
pub use perm::Permutation;
