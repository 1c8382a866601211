//! Classical dynamics of H = x⁴p²/4 + λx², whose mass m(x) = 2/x⁴ is
//! singular at the origin.
//!
//! With first integral C₁ = H and u(t) = C₂ + √C₁·t the closed-form orbit is
//! x(t) = 1/√R(t), R(t) = λ/C₁ + u². For λ ≥ 0 the orbit is localized in
//! time; for λ < 0 it escapes to infinity where R vanishes.

use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{dopri5, OdeOptions, Termination};

/// Radicands at or below this are treated as singular by the closed form.
pub const RADICAND_FLOOR: f64 = 1e-15;
/// |x| beyond which the integrator declares a blow-up.
pub const BLOW_UP_BOUND: f64 = 1e6;
/// Step size below which the integrator declares a blow-up.
pub const MIN_STEP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub lambda: f64,
    pub hbar: f64,
    /// First integral, equal to the total energy.
    pub c1: f64,
    pub c2: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            hbar: 1.0,
            c1: 1.0,
            c2: -5.0,
        }
    }
}

impl ModelParams {
    pub fn new(lambda: f64, hbar: f64, c1: f64, c2: f64) -> Result<Self> {
        let p = Self { lambda, hbar, c1, c2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.c2.is_finite()) {
            return Err(Error::InvalidParameter("lambda and c2 must be finite".into()));
        }
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return Err(Error::InvalidParameter(format!("c1 must be positive, got {}", self.c1)));
        }
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {}", self.hbar)));
        }
        Ok(())
    }

    fn u(&self, t: f64) -> f64 {
        self.c2 + self.c1.sqrt() * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalState {
    pub t: f64,
    pub x: f64,
    pub p: f64,
}

impl ClassicalState {
    pub fn mass(&self) -> f64 {
        2.0 / self.x.powi(4)
    }

    pub fn velocity(&self) -> f64 {
        self.x.powi(4) * self.p / 2.0
    }

    pub fn potential(&self, lambda: f64) -> f64 {
        lambda * self.x * self.x
    }

    pub fn energy(&self, lambda: f64) -> f64 {
        hamiltonian(self.x, self.p, lambda)
    }
}

/// R(t) = λ/C₁ + (C₂ + √C₁ t)².
pub fn radicand(t: f64, params: &ModelParams) -> f64 {
    let u = params.u(t);
    params.lambda / params.c1 + u * u
}

fn checked_radicand(t: f64, params: &ModelParams) -> Result<f64> {
    params.validate()?;
    let r = radicand(t, params);
    if r <= RADICAND_FLOOR {
        return Err(Error::Singular { t, radicand: r });
    }
    Ok(r)
}

pub fn exact_solution(t: f64, params: &ModelParams) -> Result<f64> {
    Ok(1.0 / checked_radicand(t, params)?.sqrt())
}

/// ẋ(t) = −√C₁ u x³.
pub fn exact_velocity(t: f64, params: &ModelParams) -> Result<f64> {
    let x = exact_solution(t, params)?;
    Ok(-params.c1.sqrt() * params.u(t) * x * x * x)
}

/// p(t) = −2√C₁ u √R.
pub fn exact_momentum(t: f64, params: &ModelParams) -> Result<f64> {
    let r = checked_radicand(t, params)?;
    Ok(-2.0 * params.c1.sqrt() * params.u(t) * r.sqrt())
}

pub fn exact_state(t: f64, params: &ModelParams) -> Result<ClassicalState> {
    Ok(ClassicalState {
        t,
        x: exact_solution(t, params)?,
        p: exact_momentum(t, params)?,
    })
}

pub fn hamiltonian(x: f64, p: f64, lambda: f64) -> f64 {
    x.powi(4) * p * p / 4.0 + lambda * x * x
}

/// ẍ − (2/x)ẋ² + λx⁵, zero on solutions of the equation of motion.
pub fn eom_residual(x: f64, xdot: f64, xddot: f64, lambda: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain("equation of motion is singular at x = 0".into()));
    }
    Ok(xddot - 2.0 / x * xdot * xdot + lambda * x.powi(5))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition {
    pub t0: f64,
    pub x0: f64,
    pub xdot0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EomOptions {
    pub rtol: f64,
    pub atol: f64,
    pub blow_up_bound: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl EomOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }
}

impl Default for EomOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            blow_up_bound: BLOW_UP_BOUND,
            min_step: MIN_STEP,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowUp {
    /// Last time reached before stopping.
    pub reached: f64,
    /// Singular time extrapolated from the local x ~ |t − t*|^{-1/2} law.
    pub estimated: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub lambda: f64,
    pub states: Vec<ClassicalState>,
    pub blow_up: Option<BlowUp>,
}

impl Trajectory {
    /// Largest |H − H(0)| along the run.
    pub fn energy_drift(&self) -> f64 {
        let Some(first) = self.states.first() else {
            return 0.0;
        };
        let e0 = first.energy(self.lambda);
        self.states
            .iter()
            .map(|s| (s.energy(self.lambda) - e0).abs())
            .fold(0.0, f64::max)
    }

    /// Converts a blow-up into an error.
    pub fn into_result(self) -> Result<Self> {
        match self.blow_up {
            Some(b) => Err(Error::BlowUp {
                reached: b.reached,
                estimated: b.estimated,
            }),
            None => Ok(self),
        }
    }
}

/// Integrates the equation of motion from t = 0 with local tolerance `tol`.
pub fn integrate_eom(x0: f64, xdot0: f64, lambda: f64, t_end: f64, tol: f64) -> Result<Trajectory> {
    integrate_eom_from(
        InitialCondition { t0: 0.0, x0, xdot0 },
        lambda,
        t_end,
        &EomOptions::with_tol(tol),
    )
}

/// Integrates ẍ = 2ẋ²/x − λx⁵ from `ic.t0` to `t_end` (forwards or
/// backwards). Stops with a blow-up record once |x| exceeds the bound or
/// the step collapses.
pub fn integrate_eom_from(
    ic: InitialCondition,
    lambda: f64,
    t_end: f64,
    opts: &EomOptions,
) -> Result<Trajectory> {
    if ic.x0 == 0.0 || !ic.x0.is_finite() || !ic.xdot0.is_finite() {
        return Err(Error::InvalidParameter("initial position must be finite and non-zero".into()));
    }
    if !lambda.is_finite() || !t_end.is_finite() || !ic.t0.is_finite() {
        return Err(Error::InvalidParameter("lambda and times must be finite".into()));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let rhs = |_t: f64, y: &[f64; 2]| [y[1], 2.0 * y[1] * y[1] / y[0] - lambda * y[0].powi(5)];
    let ode_opts = OdeOptions {
        rtol: opts.rtol,
        atol: opts.atol,
        min_step: opts.min_step,
        max_step: f64::INFINITY,
        max_steps: opts.max_steps,
    };
    let mut states = Vec::new();
    let mut escaped = false;
    let bound = opts.blow_up_bound;
    let outcome = dopri5(rhs, ic.t0, [ic.x0, ic.xdot0], t_end, &ode_opts, |t, y| {
        states.push(ClassicalState {
            t,
            x: y[0],
            p: 2.0 * y[1] / y[0].powi(4),
        });
        if y[0].abs() > bound {
            escaped = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    let blow_up = (escaped || outcome.termination == Termination::StepCollapsed).then(|| {
        let [x, v] = outcome.y;
        BlowUp {
            reached: outcome.t,
            estimated: outcome.t + x / (2.0 * v),
        }
    });
    Ok(Trajectory {
        lambda,
        states,
        blow_up,
    })
}

/// t* = (√(|λ|/C₁) − C₂)/√C₁ for λ < 0, the later root of R(t) = 0.
pub fn singularity_time(params: &ModelParams) -> Option<f64> {
    (params.lambda < 0.0).then(|| {
        let s = params.c1.sqrt();
        ((params.lambda.abs() / params.c1).sqrt() - params.c2) / s
    })
}

/// Both roots t± = (±√(|λ|/C₁) − C₂)/√C₁ of R(t) = 0, when λ < 0.
pub fn radicand_roots(params: &ModelParams) -> Option<(f64, f64)> {
    (params.lambda < 0.0).then(|| {
        let s = params.c1.sqrt();
        let w = (params.lambda.abs() / params.c1).sqrt();
        ((-w - params.c2) / s, (w - params.c2) / s)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub x: f64,
    pub p_plus: f64,
    pub p_minus: f64,
}

/// Samples p = ±(2/x²)√(E − λx²) on a grid inside the turning points ±√(E/λ).
pub fn phase_curve(energy: f64, lambda: f64, x_grid: &[f64]) -> Result<Vec<PhasePoint>> {
    if !(energy > 0.0 && lambda > 0.0) {
        return Err(Error::Domain("phase curve needs E > 0 and lambda > 0".into()));
    }
    let a = (energy / lambda).sqrt();
    x_grid
        .iter()
        .map(|&x| {
            if x == 0.0 || !x.is_finite() {
                return Err(Error::Domain("phase curve excludes x = 0".into()));
            }
            if x.abs() > a * (1.0 + 4.0 * f64::EPSILON) {
                return Err(Error::Domain(format!("x = {x} lies outside the turning points ±{a}")));
            }
            let p = 2.0 / (x * x) * (energy - lambda * x * x).max(0.0).sqrt();
            Ok(PhasePoint {
                x,
                p_plus: p,
                p_minus: -p,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Bounded,
    Singular,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Bounded => "bounded",
            Regime::Singular => "singular",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub regime: Regime,
    /// Minimum of R over the window and where it is attained.
    pub min_radicand: f64,
    pub min_at: f64,
    /// Roots of R inside the window, ascending.
    pub roots_in_window: Vec<f64>,
    /// The root t* given by the closed-form singular-time formula, if λ < 0.
    pub formula_root: Option<f64>,
    pub formula_root_in_window: bool,
}

/// Classifies the orbit on `[t_lo, t_hi]`: singular iff R(t) ≤ 0 somewhere
/// in the window. Both roots of R are examined, not only t*.
pub fn classify_lambda(params: &ModelParams, t_window: (f64, f64)) -> Result<Classification> {
    params.validate()?;
    let (lo, hi) = t_window;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidParameter(format!("invalid time window [{lo}, {hi}]")));
    }
    let vertex = -params.c2 / params.c1.sqrt();
    let min_at = vertex.clamp(lo, hi);
    let min_radicand = radicand(min_at, params);
    let roots_in_window = match radicand_roots(params) {
        Some((a, b)) => [a, b].into_iter().filter(|r| (lo..=hi).contains(r)).collect(),
        None => Vec::new(),
    };
    let formula_root = singularity_time(params);
    Ok(Classification {
        regime: if min_radicand <= 0.0 {
            Regime::Singular
        } else {
            Regime::Bounded
        },
        min_radicand,
        min_at,
        roots_in_window,
        formula_root,
        formula_root_in_window: formula_root.is_some_and(|t| (lo..=hi).contains(&t)),
    })
}
