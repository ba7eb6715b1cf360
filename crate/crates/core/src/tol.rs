//! Numerical tolerances shared across the crate.

/// Slack on `|r|^2 <= 1` accepted by [`crate::bloch::make_state`].
pub const BALL: f64 = 1e-9;

/// `1 - r_n^2` at or below this value takes the pole branch of `B_n`.
pub const POLE: f64 = 1e-12;

/// Equality tolerance for monotone comparisons and conversion decisions.
pub const ORDER: f64 = 1e-12;

/// Tolerance for composite constraint residuals (sums of squared terms).
pub const CONSTRAINT: f64 = 1e-10;

/// Tolerance for CPTP and covariance checks of constructed channels.
pub const CHANNEL: f64 = 1e-9;

/// Unit-norm tolerance for axes.
pub const AXIS: f64 = 1e-12;
