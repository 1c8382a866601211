//! Quadrature, extrapolation and ODE integration shared by the physics modules.

pub mod extrapolation;
pub mod ode;
pub mod quadrature;

pub use extrapolation::{richardson, Extrapolation};
pub use ode::{dopri5, OdeOptions, OdeOutcome, Termination};
pub use quadrature::{integrate, integrate_with_breakpoints, QuadOptions, QuadResult};

/// Chebyshev points of the first kind on [a, b], ascending.
pub fn chebyshev_nodes(n: usize, a: f64, b: f64) -> Vec<f64> {
    (0..n)
        .rev()
        .map(|k| {
            let c = ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * c
        })
        .collect()
}
