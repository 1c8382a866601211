use std::f64::consts::PI;

use serde::Serialize;

use super::ordering::SingleTermOrdering;
use super::reduction::{check_energy, ode_coefficients};
use crate::error::{Error, Result};
use crate::special_functions::{bessel_j, bessel_j_derivatives, BesselOrder};

/// Eigenfunctions are replaced by their envelope below this multiple of ħ/√E.
pub const DEFAULT_FLOOR_FACTOR: f64 = 1e-3;
/// Finite-difference step used by [`similarity_check`].
pub const SIMILARITY_STEP: f64 = 2e-3;
/// Largest relative change between steps h and 2h accepted by [`similarity_check`].
pub const SIMILARITY_STABILITY: f64 = 1e-6;

/// Continuum eigenstate C·J_n(2√E/(ħx)) with parity (−1)ⁿ on x < 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuumState {
    pub n: u32,
    pub energy: f64,
    /// Finite amplitude standing in for the delta-normalized constant.
    pub amplitude: f64,
}

impl ContinuumState {
    pub fn new(n: u32, energy: f64, amplitude: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("quantum number n must be at least 1".into()));
        }
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::InvalidParameter(format!("energy must be positive, got {energy}")));
        }
        if !amplitude.is_finite() {
            return Err(Error::InvalidParameter("amplitude must be finite".into()));
        }
        Ok(Self { n, energy, amplitude })
    }

    fn parity(&self) -> f64 {
        if self.n % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn default_floor(&self, hbar: f64) -> f64 {
        DEFAULT_FLOOR_FACTOR * hbar / self.energy.sqrt()
    }

    /// C√(ħ|x|/(π√E)), the bound on |ψ| near the origin.
    pub fn envelope(&self, x: f64, hbar: f64) -> f64 {
        self.amplitude.abs() * (hbar * x.abs() / (PI * self.energy.sqrt())).sqrt()
    }
}

pub fn eigenfunction(x: f64, state: &ContinuumState, hbar: f64) -> Result<f64> {
    eigenfunction_with_floor(x, state, hbar, state.default_floor(hbar))
}

/// Below `floor` the signed envelope is returned instead of the
/// unresolvable oscillation.
pub fn eigenfunction_with_floor(x: f64, state: &ContinuumState, hbar: f64, floor: f64) -> Result<f64> {
    check_energy(state.energy, hbar)?;
    if x == 0.0 || !x.is_finite() {
        return Err(Error::Domain("eigenfunction is not evaluated at the origin".into()));
    }
    let sign = if x < 0.0 { state.parity() } else { 1.0 };
    if x.abs() < floor {
        return Ok(sign * state.envelope(x, hbar));
    }
    let z = 2.0 * state.energy.sqrt() / (hbar * x.abs());
    Ok(sign * state.amplitude * bessel_j(state.n.into(), z)?)
}

/// Max |ψ″ + c₁ψ′/x + (c₄/x⁴ − c₂/x²)ψ| of ψ = C·J_n(k/x), k = 2√E/ħ, with
/// the ordering's coefficients. Derivatives are analytic.
pub fn ode_residual(
    state: &ContinuumState,
    ord: &SingleTermOrdering,
    lambda: f64,
    hbar: f64,
    grid: &[f64],
) -> Result<f64> {
    check_energy(state.energy, hbar)?;
    let coeffs = ode_coefficients(ord, lambda, state.energy, hbar);
    let k = 2.0 * state.energy.sqrt() / hbar;
    let c = state.amplitude;
    let order = BesselOrder::from(state.n);
    let mut worst: f64 = 0.0;
    for &x in grid {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("residual grid must be positive, got {x}")));
        }
        let z = k / x;
        let (j, jp, jpp) = bessel_j_derivatives(order, z)?;
        let psi = c * j;
        let dpsi = -c * k / (x * x) * jp;
        let d2psi = c * (k * k / x.powi(4) * jpp + 2.0 * k / x.powi(3) * jp);
        worst = worst.max(coeffs.residual(x, psi, dpsi, d2psi).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParityRelation {
    /// C̃ = C.
    Even,
    /// C̃ = −C.
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParityMatch {
    pub admissible: bool,
    pub relation: Option<ParityRelation>,
}

/// Matching the two half-line solutions with definite parity requires ν to
/// be a positive integer.
pub fn parity_match(nu: f64) -> ParityMatch {
    let rounded = nu.round();
    if nu.is_finite() && rounded >= 1.0 && (nu - rounded).abs() <= 1e-12 {
        let relation = if rounded % 2.0 == 0.0 {
            ParityRelation::Even
        } else {
            ParityRelation::Odd
        };
        ParityMatch {
            admissible: true,
            relation: Some(relation),
        }
    } else {
        ParityMatch {
            admissible: false,
            relation: None,
        }
    }
}

/// C·x^{−3/2}·J_n(2√E/(ħx)), the state of the Hermitian-ordered form. It
/// equals m^η ψ with η = 3/8, with the constant 2^{3/8} folded into C.
pub fn hermitian_wavefunction(x: f64, n: u32, energy: f64, c: f64, hbar: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("Hermitian wavefunction is defined for x > 0, got {x}")));
    }
    check_energy(energy, hbar)?;
    let z = 2.0 * energy.sqrt() / (hbar * x);
    Ok(c * x.powf(-1.5) * bessel_j(n.into(), z)?)
}

/// Max |φ| on [lo, hi], sampled uniformly in the Bessel argument so every
/// oscillation gets at least ~125 points.
pub fn hermitian_window_max(n: u32, energy: f64, c: f64, hbar: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(0.0 < lo && lo < hi) {
        return Err(Error::InvalidParameter(format!("invalid window [{lo}, {hi}]")));
    }
    check_energy(energy, hbar)?;
    let k = 2.0 * energy.sqrt() / hbar;
    let (z_lo, z_hi) = (k / hi, k / lo);
    let samples = (((z_hi - z_lo) / 0.05).ceil() as usize).max(200);
    let mut best: f64 = 0.0;
    for i in 0..=samples {
        let z = z_lo + (z_hi - z_lo) * i as f64 / samples as f64;
        let x = (k / z).clamp(lo, hi);
        best = best.max(hermitian_wavefunction(x, n, energy, c, hbar)?.abs());
    }
    Ok(best)
}

// Eighth-order central first-derivative weights for offsets −4..4.
const D1: [f64; 9] = [
    1.0 / 280.0,
    -4.0 / 105.0,
    1.0 / 5.0,
    -4.0 / 5.0,
    0.0,
    4.0 / 5.0,
    -1.0 / 5.0,
    4.0 / 105.0,
    -1.0 / 280.0,
];

fn derivative<F: Fn(f64) -> f64>(u: F, x: f64, h: f64) -> f64 {
    let mut acc = 0.0;
    for (i, w) in D1.iter().enumerate() {
        if *w != 0.0 {
            acc += w * u(x + (i as f64 - 4.0) * h);
        }
    }
    acc / h
}

fn mass(x: f64) -> f64 {
    2.0 / x.powi(4)
}

/// ½ m^a p m^b p m^c u at x with p = −iħ d/dx, derivatives by nested
/// eighth-order central differences.
pub fn apply_ordered_kinetic<F: Fn(f64) -> f64>(a: f64, b: f64, c: f64, u: &F, x: f64, h: f64, hbar: f64) -> f64 {
    let inner = |y: f64| mass(y).powf(c) * u(y);
    let middle = |y: f64| mass(y).powf(b) * derivative(inner, y, h);
    -0.5 * hbar * hbar * mass(x).powf(a) * derivative(middle, x, h)
}

/// Max over [0.5, 5] of |Ĥf − m^{−η} Ĥ_her (m^η f)|, where Ĥ is the
/// single-term ordering and Ĥ_her the symmetric one with exponent
/// (α₁ + γ₁)/2 on both sides. The potential commutes with m^η and is left out.
pub fn similarity_check<F: Fn(f64) -> f64>(ord: &SingleTermOrdering, f: F, hbar: f64) -> Result<f64> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    let eta = ord.eta();
    let sym = (ord.alpha1 + ord.gamma1) / 2.0;
    let conjugated = |y: f64| mass(y).powf(eta) * f(y);
    let grid: Vec<f64> = (0..=200).map(|i| 0.5 + 4.5 * i as f64 / 200.0).collect();
    let lhs = |x: f64, h: f64| apply_ordered_kinetic(ord.alpha1, ord.beta1, ord.gamma1, &f, x, h, hbar);
    let rhs = |x: f64, h: f64| mass(x).powf(-eta) * apply_ordered_kinetic(sym, ord.beta1, sym, &conjugated, x, h, hbar);

    let (mut worst, mut change, mut scale) = (0.0f64, 0.0f64, 1.0f64);
    for &x in &grid {
        let fine = lhs(x, SIMILARITY_STEP);
        let coarse = lhs(x, 2.0 * SIMILARITY_STEP);
        change = change.max((fine - coarse).abs());
        scale = scale.max(fine.abs());
        worst = worst.max((fine - rhs(x, SIMILARITY_STEP)).abs());
    }
    if !worst.is_finite() || change / scale > SIMILARITY_STABILITY {
        return Err(Error::StepInstability(change / scale));
    }
    Ok(worst)
}
