use crate::error::{Error, Result};

/// Default cap on the number of linear systems an enumeration may need.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Largest common denominator for which automatic dispatch tries cloning.
pub const DEFAULT_CLONE_CAP: u64 = 64;

/// Environment variable overriding [`SolverConfig::enumeration_cap`].
pub const BUDGET_ENV: &str = "ENTITLED_CUTS_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub enumeration_cap: u64,
    pub clone_cap: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            clone_cap: DEFAULT_CLONE_CAP,
        }
    }
}

impl SolverConfig {
    /// Defaults, with the enumeration cap taken from `ENTITLED_CUTS_BUDGET`
    /// when set.
    pub fn from_env() -> Result<Self> {
        let mut config = Self::default();
        if let Ok(raw) = std::env::var(BUDGET_ENV) {
            config.enumeration_cap = parse_budget(&raw)?;
        }
        Ok(config)
    }
}

pub fn parse_budget(raw: &str) -> Result<u64> {
    match raw.trim().parse::<u64>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(Error::Parse(format!(
            "{BUDGET_ENV} must be a positive integer, got {raw:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_parsing() {
        assert_eq!(parse_budget("42").unwrap(), 42);
        assert!(parse_budget("0").is_err());
        assert!(parse_budget("-3").is_err());
        assert!(parse_budget("1e6").is_err());
    }
}
