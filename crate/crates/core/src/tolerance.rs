//! Relative-tolerance comparisons used at regime boundaries.

use std::cmp::Ordering;

/// Default relative tolerance for boundary comparisons.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// A relative tolerance `ε`: two values are considered equal when
/// `|x - y| <= ε · max(|x|, |y|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(DEFAULT_EPSILON);

    /// Returns `None` unless `eps` is finite and non-negative.
    pub fn new(eps: f64) -> Option<Self> {
        (eps.is_finite() && eps >= 0.0).then_some(Self(eps))
    }

    pub fn epsilon(self) -> f64 {
        self.0
    }

    /// Three-way comparison that collapses near-ties to `Equal`.
    pub fn compare(self, x: f64, y: f64) -> Ordering {
        if (x - y).abs() <= self.0 * x.abs().max(y.abs()) {
            Ordering::Equal
        } else if x < y {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn is_close(self, x: f64, y: f64) -> bool {
        self.compare(x, y) == Ordering::Equal
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}
