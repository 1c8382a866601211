//! Continuum overlaps and the ε-box regularization of the spectrum.
//!
//! Excluding (−ε, ε) and substituting ρ = 1/x turns the normalization
//! integral into a Fourier–Bessel problem on [0, 1/ε]. Its zero condition
//! 2√E/(ħε) = j_{n,N} discretizes the energy.

use rayon::prelude::*;
use serde::Serialize;

use super::reduction::check_energy;
use crate::error::{Error, Result};
use crate::numerics::{integrate_with_breakpoints, QuadOptions};
use crate::special_functions::{bessel_j, bessel_zero};

const OVERLAP_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-11,
    rel_tol: 1e-12,
    max_subdivisions: 20_000,
};

const BOX_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-12,
    rel_tol: 1e-12,
    max_subdivisions: 20_000,
};

/// Breakpoints at spacing ≤ half a period of the fastest oscillation.
fn oscillation_breakpoints(upper: f64, k_max: f64) -> Vec<f64> {
    let pieces = ((upper * k_max / std::f64::consts::PI).ceil() as usize).max(1);
    (0..=pieces).map(|i| upper * i as f64 / pieces as f64).collect()
}

/// 2^{3/4} ∫₀^R ρ J_n(2√E ρ/ħ) J_n(2√E′ ρ/ħ) dρ.
pub fn overlap_kernel(n: u32, energy: f64, energy_prime: f64, r: f64, hbar: f64) -> Result<f64> {
    check_energy(energy, hbar)?;
    check_energy(energy_prime, hbar)?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("cut-off R must be finite and non-negative, got {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let k = 2.0 * energy.sqrt() / hbar;
    let kp = 2.0 * energy_prime.sqrt() / hbar;
    let order = n.into();
    let integrand = |rho: f64| {
        rho * bessel_j(order, k * rho).unwrap_or(f64::NAN) * bessel_j(order, kp * rho).unwrap_or(f64::NAN)
    };
    let q = integrate_with_breakpoints(integrand, &oscillation_breakpoints(r, k.max(kp)), OVERLAP_QUAD)?;
    Ok(2f64.powf(0.75) * q.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxState {
    pub eps: f64,
    pub n: u32,
    /// Index N of the Bessel zero j_{n,N}.
    pub zero_index: u32,
    pub zero: f64,
    pub energy: f64,
    pub norm_const: f64,
}

impl BoxState {
    pub fn new(n: u32, zero_index: u32, eps: f64, hbar: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("box radius must be positive, got {eps}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        let zero = bessel_zero(n, zero_index)?;
        Ok(Self {
            eps,
            n,
            zero_index,
            zero,
            energy: hbar * hbar / 4.0 * zero * zero * eps * eps,
            norm_const: eps / bessel_j((n + 1).into(), zero)?,
        })
    }

    /// The Bessel argument 2√E/(ħε); reproduces j_{n,N}.
    pub fn argument(&self, hbar: f64) -> f64 {
        2.0 * self.energy.sqrt() / (hbar * self.eps)
    }
}

/// Box states N = 1..=n_max with E = (ħ²/4) j_{n,N}² ε² and C = ε/J_{n+1}(j_{n,N}).
pub fn box_spectrum(n: u32, n_max: u32, eps: f64, hbar: f64) -> Result<Vec<BoxState>> {
    if n == 0 || n_max == 0 {
        return Err(Error::InvalidParameter("n and N_max must be at least 1".into()));
    }
    (1..=n_max)
        .into_par_iter()
        .map(|index| BoxState::new(n, index, eps, hbar))
        .collect()
}

/// C^N_n J_n(2√E/(ħ|x|)) for |x| ≥ ε, with parity (−1)ⁿ on x < 0; zero inside the box.
pub fn box_wavefunction(x: f64, state: &BoxState, hbar: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain("position must be finite".into()));
    }
    if x.abs() < state.eps {
        return Ok(0.0);
    }
    let sign = if x < 0.0 && state.n % 2 == 1 { -1.0 } else { 1.0 };
    let z = 2.0 * state.energy.sqrt() / (hbar * x.abs());
    Ok(sign * state.norm_const * bessel_j(state.n.into(), z)?)
}

/// 2 C_N C_M ∫₀^{1/ε} ρ J_n(j_{n,N} ερ) J_n(j_{n,M} ερ) dρ.
pub fn box_orthonormality(n: u32, big_n: u32, big_m: u32, eps: f64, hbar: f64) -> Result<f64> {
    let a = BoxState::new(n, big_n, eps, hbar)?;
    let b = BoxState::new(n, big_m, eps, hbar)?;
    box_overlap(&a, &b)
}

fn box_overlap(a: &BoxState, b: &BoxState) -> Result<f64> {
    if a.n != b.n || a.eps != b.eps {
        return Err(Error::InvalidParameter("box states must share n and eps".into()));
    }
    let upper = 1.0 / a.eps;
    let (ka, kb) = (a.zero * a.eps, b.zero * b.eps);
    let order = a.n.into();
    let integrand =
        |rho: f64| rho * bessel_j(order, ka * rho).unwrap_or(f64::NAN) * bessel_j(order, kb * rho).unwrap_or(f64::NAN);
    let q = integrate_with_breakpoints(integrand, &oscillation_breakpoints(upper, ka.max(kb)), BOX_QUAD)?;
    Ok(2.0 * a.norm_const * b.norm_const * q.value)
}

/// Gram matrix of the first `n_max` box states.
pub fn box_gram(n: u32, n_max: u32, eps: f64, hbar: f64) -> Result<Vec<Vec<f64>>> {
    let states = box_spectrum(n, n_max, eps, hbar)?;
    states
        .par_iter()
        .map(|a| states.iter().map(|b| box_overlap(a, b)).collect::<Result<Vec<_>>>())
        .collect()
}
