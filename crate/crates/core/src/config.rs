//! Enumeration limits shared by all modules.

use std::env;

/// Environment variable overriding [`Limits::ball_cap`].
pub const BALL_CAP_ENV: &str = "MGS_BALL_CAP";

/// Caps on every exhaustive computation in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of words (free-group balls) or group elements
    /// (Cayley-graph balls) a single enumeration may visit.
    pub ball_cap: u64,
    /// Largest table order for which associativity is verified at load.
    pub associativity_bound: usize,
    /// Skip the associativity check entirely.
    pub skip_associativity: bool,
    /// Largest table order accepted by the automorphism search.
    pub automorphism_bound: usize,
    /// Maximum `|G|^k` for model checking a `k`-variable sentence.
    pub evaluation_budget: u64,
    /// Maximum `|G|^m` for enumerating generating `m`-tuples.
    pub marking_budget: u64,
    /// Largest finite group materialized into a table.
    pub table_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            ball_cap: 2_000_000,
            associativity_bound: 256,
            skip_associativity: false,
            automorphism_bound: 100,
            evaluation_budget: 10_000_000,
            marking_budget: 1_000_000,
            table_cap: 4096,
        }
    }
}

impl Limits {
    /// Defaults, with `MGS_BALL_CAP` applied when set to a valid integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = env::var(BALL_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            limits.ball_cap = cap;
        }
        limits
    }

    pub fn with_ball_cap(mut self, cap: u64) -> Self {
        self.ball_cap = cap;
        self
    }

    pub fn with_evaluation_budget(mut self, budget: u64) -> Self {
        self.evaluation_budget = budget;
        self
    }
}
