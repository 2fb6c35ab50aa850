//! Shared fixtures for the benchmarks.

/// Deterministic, non-periodic test vector of length `n`.
pub fn signal(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let x = i as f64 / n as f64;
            (7.0 * x).sin() + (31.0 * x * x).cos() * 0.25
        })
        .collect()
}
