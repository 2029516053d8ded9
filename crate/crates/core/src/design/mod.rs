//! The `t-(v,k,lambda)` data model: parameter arithmetic, exhaustive
//! verification, and the group-design transitivity checks.

mod blocks;
pub mod io;
mod params;
mod transitivity;

pub use blocks::{Design, Flag, Verification};
pub use io::DesignFile;
pub use params::{
    k_max, CameronReport, Comparison, DesignParams, Divisibility, Identity,
    CAMERON_EQUALITY_CASES,
};
pub use transitivity::{
    check_automorphisms, homogeneity_implication_check, is_block_transitive, is_flag_transitive,
    order_equation, HomogeneityReport, OrderEquation,
};
