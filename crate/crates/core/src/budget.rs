//! Candidate-count budget threaded through enumerative operations.
//! Exceeding the budget is a loud error, never silent truncation.

use core::cell::Cell;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub limit: u64,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "enumeration budget of {} candidates exceeded", self.limit)
    }
}

#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: Cell<u64>,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: Cell::new(0) }
    }

    pub fn unlimited() -> Budget {
        Budget::new(u64::MAX)
    }

    pub fn charge(&self, n: u64) -> Result<(), BudgetExceeded> {
        let used = self.used.get().saturating_add(n);
        self.used.set(used);
        if used > self.limit {
            Err(BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }
}
