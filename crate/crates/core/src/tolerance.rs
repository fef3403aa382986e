/// Comparison thresholds for identities that hold exactly in exact arithmetic.
///
/// A quantity passes when its relative residual is at most `rel`. The
/// reference scale is clamped below by `abs`, so values near zero are
/// compared absolutely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(rel: f64) -> Self {
        Self { rel, ..Self::default() }
    }

    /// `diff / max(scale, abs)`.
    pub fn relative(&self, diff: f64, scale: f64) -> f64 {
        diff / scale.max(self.abs)
    }

    pub fn passes(&self, residual: f64) -> bool {
        residual <= self.rel
    }

    /// True when a norm is indistinguishable from zero.
    pub fn negligible(&self, norm: f64) -> bool {
        norm <= self.abs
    }
}
