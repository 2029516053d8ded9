//! State budgets for exhaustive enumerations.

use crate::error::{Error, Result};

/// Default cap on the number of states any single closure or count array may hold.
pub const DEFAULT_MAX_STATES: u64 = 100_000_000;

/// Upper bound on the number of states an enumeration may touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_states: u64,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

impl Guard {
    pub fn new(max_states: u64) -> Self {
        Guard { max_states }
    }

    /// Fails with [`Error::Resource`] when `needed` exceeds the budget.
    /// `None` stands for a count too large to represent.
    pub fn check(&self, what: &str, needed: Option<u64>) -> Result<()> {
        match needed {
            Some(n) if n <= self.max_states => Ok(()),
            Some(n) => Err(Error::Resource {
                what: what.to_string(),
                needed: n.to_string(),
                limit: self.max_states,
            }),
            None => Err(Error::Resource {
                what: what.to_string(),
                needed: "> 2^64".to_string(),
                limit: self.max_states,
            }),
        }
    }
}
