use thiserror::Error;

/// Failure modes shared by every operation in the crate.
///
/// `InvalidInput` carries a short machine-readable code so callers can tell
/// apart e.g. a failed norm equation from a non-squarefree discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input [{code}]: {detail}")]
    InvalidInput { code: &'static str, detail: String },
    #[error("limit exceeded in {what}: limit {limit}")]
    LimitExceeded { what: &'static str, limit: u64 },
}

impl Error {
    pub fn invalid(code: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidInput {
            code,
            detail: detail.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput { code, .. } => code,
            Error::LimitExceeded { .. } => "limit-exceeded",
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self, Error::LimitExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default number of inner-loop steps an operation may take before giving up.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Step counter threaded through long-running loops.
///
/// Each top-level call creates its own meter, so operations stay pure and
/// independent of one another.
#[derive(Debug)]
pub struct Meter {
    what: &'static str,
    limit: u64,
    used: u64,
}

impl Meter {
    pub fn new(what: &'static str, limit: u64) -> Self {
        Meter {
            what,
            limit,
            used: 0,
        }
    }

    #[inline]
    pub fn tick(&mut self, steps: u64) -> Result<()> {
        self.used = self.used.saturating_add(steps);
        if self.used > self.limit {
            Err(Error::LimitExceeded {
                what: self.what,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
