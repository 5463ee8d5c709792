//! Process-wide numeric tolerances.
//!
//! Structural checks (Hermiticity, trace, positivity) and norm checks use
//! separate thresholds; monogamy verdicts carry their own tolerance in
//! [`crate::monogamy::ResidualOptions`].

use std::sync::RwLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy {
    /// Hermiticity, unit trace, minimum eigenvalue and Schmidt-sum checks.
    pub structural: f64,
    /// Unit-norm check on pure-state amplitudes.
    pub norm: f64,
    /// Measure values in `[-clamp, 0)` are clamped to zero; lower values are errors.
    pub clamp: f64,
    /// Eigenvalues at or below this count as zero when taking numerical rank.
    pub rank: f64,
}

impl NumericPolicy {
    pub const DEFAULT: NumericPolicy = NumericPolicy {
        structural: 1e-10,
        norm: 1e-12,
        clamp: 1e-10,
        rank: 1e-12,
    };
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::DEFAULT
    }
}

static POLICY: RwLock<NumericPolicy> = RwLock::new(NumericPolicy::DEFAULT);

/// The currently active policy.
pub fn current() -> NumericPolicy {
    *POLICY.read().unwrap_or_else(|e| e.into_inner())
}

/// Replace the active policy, returning the previous one.
pub fn set(policy: NumericPolicy) -> NumericPolicy {
    let mut guard = POLICY.write().unwrap_or_else(|e| e.into_inner());
    std::mem::replace(&mut *guard, policy)
}
