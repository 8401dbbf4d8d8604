//! Count formulas and statistical tolerances shared by the constructions.

/// Slack applied before taking ceilings so that formulas whose real value
/// is an exact integer (e.g. `ln 4 / ln 2`) do not round up on noise.
const CEIL_SLACK: f64 = 1e-9;

/// `ceil(x)` for a count that the constructions write as a real, clamped
/// to at least 1.
pub fn ceil_count(x: f64) -> usize {
    assert!(x.is_finite(), "count formula produced {x}");
    ((x - CEIL_SLACK).ceil().max(1.0)) as usize
}

/// Sub-Gaussian scale of a mean of `n` independent `[0,1]` variables,
/// `1 / (2 sqrt(n))`. By Hoeffding, a deviation of `k` of these has
/// probability at most `2 exp(-k^2 / 2)`; at `k = 3` that is `2 e^{-4.5}`.
pub fn hoeffding_sigma(n: usize) -> f64 {
    0.5 / (n as f64).sqrt()
}

/// Hoeffding tail `2 exp(-2 n delta^2)` for the mean of `n` variables in `[0,1]`.
pub fn hoeffding_tail(n: usize, delta: f64) -> f64 {
    2.0 * (-2.0 * n as f64 * delta * delta).exp()
}

/// Deviation that the mean of `n` bounded variables exceeds with
/// probability at most `confidence`: `sqrt(ln(2 / confidence) / (2n))`.
pub fn hoeffding_radius(n: usize, confidence: f64) -> f64 {
    ((2.0 / confidence).ln() / (2.0 * n as f64)).sqrt()
}
