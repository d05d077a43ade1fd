use crate::error::{Error, Result};

pub const BUDGET_ENV: &str = "RUNSLAB_BUDGET";

/// Limit on exhaustive enumerations, as a maximum word length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_len: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { max_len: 22 }
    }
}

impl Budget {
    /// The default, overridden by `RUNSLAB_BUDGET` when it holds an integer.
    pub fn from_env() -> Budget {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map_or_else(Budget::default, |max_len| Budget { max_len })
    }

    pub fn check(&self, len: usize) -> Result<()> {
        if len > self.max_len {
            Err(Error::BudgetExceeded { requested: len, limit: self.max_len })
        } else {
            Ok(())
        }
    }
}
