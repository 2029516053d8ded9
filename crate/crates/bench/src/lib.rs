//! Shared fixtures for the criterion benches.

use affdes_core::{FiniteGroup, GroupFamily};

/// Affine groups used across benches, smallest first.
pub fn affine_fixtures() -> Vec<(String, GroupFamily)> {
    [(3, 2), (4, 2), (2, 5), (5, 2)]
        .into_iter()
        .map(|(d, p)| {
            let fam = GroupFamily::agl(d, p);
            (fam.to_string(), fam)
        })
        .collect()
}

pub fn build(fam: &GroupFamily) -> FiniteGroup {
    fam.build().expect("fixture group builds")
}
