//! Dormand–Prince 5(4) with adaptive step size, for fixed-size systems.

use std::ops::ControlFlow;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Smallest step magnitude before the run is declared collapsed.
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            min_step: 1e-14,
            max_step: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Reached,
    /// The observer asked to stop.
    Stopped,
    /// The controller wanted a step smaller than `min_step`.
    StepCollapsed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOutcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub termination: Termination,
    pub accepted: usize,
    pub rejected: usize,
    /// Last step size attempted, signed by direction.
    pub last_step: f64,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn error_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], opts: &OdeOptions) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let scale = opts.atol + opts.rtol * y0[i].abs().max(y1[i].abs());
            (err[i] / scale).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

/// Hairer–Wanner starting step heuristic.
fn initial_step<const N: usize, F>(f: &F, t0: f64, y0: &[f64; N], f0: &[f64; N], dir: f64, opts: &OdeOptions) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let scale: Vec<f64> = y0.iter().map(|y| opts.atol + opts.rtol * y.abs()).collect();
    let norm = |v: &[f64; N]| -> f64 {
        ((0..N).map(|i| (v[i] / scale[i]).powi(2)).sum::<f64>() / N as f64).sqrt()
    };
    let d0 = norm(y0);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y0, dir * h0, &[(1.0, f0)]);
    let f1 = f(t0 + dir * h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(opts.max_step)
}

/// Integrates y' = f(t, y) from `t0` to `t_end` (either direction). The
/// observer sees the initial point and every accepted step.
pub fn dopri5<const N: usize, F, O>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
    mut observer: O,
) -> Result<OdeOutcome<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]) -> ControlFlow<()>,
{
    if !(opts.rtol > 0.0 || opts.atol > 0.0) || opts.rtol < 0.0 || opts.atol < 0.0 {
        return Err(Error::InvalidParameter("ODE tolerances must be non-negative and not both zero".into()));
    }
    if !t0.is_finite() || !t_end.is_finite() || y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("ODE initial data must be finite".into()));
    }
    let mut t = t0;
    let mut y = y0;
    let mut outcome = OdeOutcome {
        t,
        y,
        termination: Termination::Reached,
        accepted: 0,
        rejected: 0,
        last_step: 0.0,
    };
    if observer(t, &y).is_break() {
        outcome.termination = Termination::Stopped;
        return Ok(outcome);
    }
    if t_end == t0 {
        return Ok(outcome);
    }
    let dir = (t_end - t0).signum();
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, t, &y, &k1, dir, opts);

    while (t_end - t) * dir > 0.0 {
        if outcome.accepted + outcome.rejected >= opts.max_steps {
            return Err(Error::Convergence {
                what: "Dormand-Prince integration",
                iterations: opts.max_steps,
                lo: t0,
                hi: t,
            });
        }
        let remaining = (t_end - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = dir * h;
        outcome.last_step = hs;

        let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * hs,
            &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + hs,
            &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + hs, &y_new);
        let mut err = [0.0; N];
        for i in 0..N {
            err[i] = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let norm = error_norm(&err, &y, &y_new, opts);
        let finite = norm.is_finite() && y_new.iter().all(|v| v.is_finite());

        if finite && norm <= 1.0 {
            t = if last { t_end } else { t + hs };
            y = y_new;
            k1 = k7;
            outcome.accepted += 1;
            outcome.t = t;
            outcome.y = y;
            if observer(t, &y).is_break() {
                outcome.termination = Termination::Stopped;
                return Ok(outcome);
            }
            let factor = if norm == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * norm.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h = (h * factor).min(opts.max_step);
        } else {
            outcome.rejected += 1;
            let factor = if finite {
                (SAFETY * norm.powf(-0.2)).clamp(MIN_FACTOR, 1.0)
            } else {
                MIN_FACTOR
            };
            h *= factor;
        }
        if h < opts.min_step && (t_end - t) * dir > opts.min_step {
            outcome.termination = Termination::StepCollapsed;
            outcome.last_step = dir * h;
            return Ok(outcome);
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, ..OdeOptions::default() };
        let out = dopri5(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 5.0, &opts, |_, _| ControlFlow::Continue(())).unwrap();
        assert_eq!(out.termination, Termination::Reached);
        assert_eq!(out.t, 5.0);
        assert!((out.y[0] - (-5.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, ..OdeOptions::default() };
        let out = dopri5(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            -3.0,
            &opts,
            |_, _| ControlFlow::Continue(()),
        )
        .unwrap();
        assert!((out.y[0] - (-3.0f64).sin()).abs() < 1e-10);
        assert!((out.y[1] - (-3.0f64).cos()).abs() < 1e-10);
    }

    #[test]
    fn observer_can_stop() {
        let out = dopri5(
            |_, _: &[f64; 1]| [1.0],
            0.0,
            [0.0],
            10.0,
            &OdeOptions::default(),
            |_, y| if y[0] > 2.0 { ControlFlow::Break(()) } else { ControlFlow::Continue(()) },
        )
        .unwrap();
        assert_eq!(out.termination, Termination::Stopped);
        assert!(out.y[0] > 2.0 && out.t < 10.0);
    }

    #[test]
    fn finite_time_blow_up_collapses_the_step() {
        // y' = y², y(0) = 1 blows up at t = 1.
        let out = dopri5(
            |_, y: &[f64; 1]| [y[0] * y[0]],
            0.0,
            [1.0],
            2.0,
            &OdeOptions::default(),
            |_, _| ControlFlow::Continue(()),
        )
        .unwrap();
        assert_eq!(out.termination, Termination::StepCollapsed);
        assert!((out.t - 1.0).abs() < 1e-6);
    }
}
