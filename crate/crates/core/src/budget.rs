//! Term budget for symbolic orbit generation.
//!
//! Symbolic iterates of the bilinear and q-Painleve recurrences grow
//! polynomially in degree but fast in term count. Every generator that can
//! blow up takes a [`Budget`] and charges the number of stored terms per
//! iterate against it, failing with [`Error::BudgetExceeded`] instead of
//! exhausting memory.

use crate::error::{Error, Result};

/// Default limit: one million stored terms per generation run.
pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

/// A cumulative cap on the number of polynomial terms a run may allocate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    limit: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Budget { limit }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Charge `terms` against the running total, failing once the total
    /// passes the limit.
    pub fn charge(&self, used: &mut usize, terms: usize) -> Result<()> {
        *used = used.saturating_add(terms);
        if *used > self.limit {
            Err(Error::BudgetExceeded {
                used: *used,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_TERM_BUDGET)
    }
}
