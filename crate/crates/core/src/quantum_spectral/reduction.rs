//! Reduction of the ordered Schrödinger equation
//!
//!   ψ″ + [4(1+α₁−γ₁)/x]ψ′ + [4E/(ħ²x⁴) − (16α₁γ₁ + 12γ₁ + 4λ/ħ²)/x²]ψ = 0
//!
//! to Bessel's equation via ψ = x^d φ, g = −1/(2x), τ = (4√E/ħ)g.

use serde::Serialize;

use super::ordering::SingleTermOrdering;
use crate::error::{Error, Result};
use crate::numerics::chebyshev_nodes;
use crate::special_functions::{bessel_j, bessel_j_derivatives, bessel_y, BesselOrder};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeCoefficients {
    /// Coefficient of ψ′/x.
    pub first_order: f64,
    /// Coefficient of −ψ/x².
    pub inv_x2: f64,
    /// Coefficient of ψ/x⁴.
    pub inv_x4: f64,
}

impl OdeCoefficients {
    /// ψ″ + c₁ψ′/x + (c₄/x⁴ − c₂/x²)ψ for given ψ, ψ′, ψ″ at x.
    pub fn residual(&self, x: f64, psi: f64, dpsi: f64, d2psi: f64) -> f64 {
        d2psi + self.first_order * dpsi / x + (self.inv_x4 / x.powi(4) - self.inv_x2 / (x * x)) * psi
    }
}

pub fn ode_coefficients(ord: &SingleTermOrdering, lambda: f64, energy: f64, hbar: f64) -> OdeCoefficients {
    let (a, g) = (ord.alpha1, ord.gamma1);
    let h2 = hbar * hbar;
    OdeCoefficients {
        first_order: 4.0 * (1.0 + a - g),
        inv_x2: 16.0 * a * g + 12.0 * g + 4.0 * lambda / h2,
        inv_x4: 4.0 * energy / h2,
    }
}

/// ν² = s² + 4λ/ħ².
pub fn nu_squared(ord: &SingleTermOrdering, lambda: f64, hbar: f64) -> f64 {
    let s = ord.s();
    s * s + 4.0 * lambda / (hbar * hbar)
}

pub fn nu_from_params(ord: &SingleTermOrdering, lambda: f64, hbar: f64) -> Result<f64> {
    let nu2 = nu_squared(ord, lambda, hbar);
    if !(nu2 >= 0.0) {
        return Err(Error::ComplexOrder(nu2));
    }
    Ok(nu2.sqrt())
}

/// λ = (n² − s²)ħ²/4, the coupling that makes ν = n. May be negative.
pub fn lambda_quantized(n: u32, ord: &SingleTermOrdering, hbar: f64) -> f64 {
    let (n, s) = (n as f64, ord.s());
    (n * n - s * s) * hbar * hbar / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformChain {
    pub d: f64,
    pub d_pct: f64,
    /// τ = tau_scale · g.
    pub tau_scale: f64,
}

impl TransformChain {
    pub fn g(&self, x: f64) -> f64 {
        -1.0 / (2.0 * x)
    }

    /// τ(x) = −2√E/(ħx); negative for x > 0.
    pub fn tau(&self, x: f64) -> f64 {
        self.tau_scale * self.g(x)
    }

    /// The positive argument 2√E/(ħ|x|) at which J is evaluated.
    pub fn bessel_argument(&self, x: f64) -> f64 {
        self.tau(x).abs()
    }
}

pub fn transform_chain(ord: &SingleTermOrdering, energy: f64, hbar: f64) -> Result<TransformChain> {
    check_energy(energy, hbar)?;
    Ok(TransformChain {
        d: ord.d_bessel(),
        d_pct: ord.d_pct(),
        tau_scale: 4.0 * energy.sqrt() / hbar,
    })
}

pub(crate) fn check_energy(energy: f64, hbar: f64) -> Result<()> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::InvalidParameter(format!("energy must be positive, got {energy}")));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    Ok(())
}

/// x^d [C J_ν(2√E/(ħx)) + D Y_ν(2√E/(ħx))] on x > 0.
pub fn general_solution(x: f64, nu: f64, energy: f64, c: f64, d_coef: f64, d: f64, hbar: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("general solution is defined for x > 0, got {x}")));
    }
    check_energy(energy, hbar)?;
    let order = BesselOrder::new(nu)?;
    let z = 2.0 * energy.sqrt() / (hbar * x);
    let mut bracket = c * bessel_j(order, z)?;
    if d_coef != 0.0 {
        bracket += d_coef * bessel_y(order, z)?;
    }
    Ok(x.powf(d) * bracket)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryAnalysis {
    /// (x, ψ(x)) on a geometric tail grid.
    pub tail: Vec<(f64, f64)>,
    /// |ψ| at the last tail point divided by |ψ| at the first.
    pub growth: f64,
    pub bounded_at_infinity: bool,
}

/// Samples the general solution on x = 10, 10², …, 10⁶ and decides whether
/// it stays bounded as x → ∞. A Y component diverges there because its
/// argument tends to 0.
pub fn boundary_analysis(nu: f64, energy: f64, c: f64, d_coef: f64, d: f64, hbar: f64) -> Result<BoundaryAnalysis> {
    let tail = (1..=6)
        .map(|k| {
            let x = 10f64.powi(k);
            Ok((x, general_solution(x, nu, energy, c, d_coef, d, hbar)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let first = tail[0].1.abs();
    let last = tail[tail.len() - 1].1.abs();
    let growth = last / first;
    let non_increasing = tail.windows(2).all(|w| w[1].1.abs() <= w[0].1.abs());
    Ok(BoundaryAnalysis {
        growth,
        bounded_at_infinity: growth.is_finite() && growth < 1.0 && non_increasing,
        tail,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PctReduction {
    pub d_pct: f64,
    /// k² = 16E/ħ².
    pub k_squared: f64,
    /// Strength of the 1/g² potential.
    pub strength: f64,
    /// Max residual of √(2|g|) J_ν(k|g|) in the constant-mass equation on
    /// the default grid; `None` when ν is complex.
    pub residual: Option<f64>,
}

/// Constant-mass form φ_gg + [k² − strength/g²]φ = 0.
pub fn pct_reduce(ord: &SingleTermOrdering, lambda: f64, energy: f64, hbar: f64) -> Result<PctReduction> {
    check_energy(energy, hbar)?;
    let sigma = 2.0 * ord.alpha1 + 2.0 * ord.gamma1;
    let strength = 4.0 * lambda / (hbar * hbar) + (sigma + 2.0) * (sigma + 1.0);
    let residual = match nu_from_params(ord, lambda, hbar) {
        Ok(nu) => Some(pct_residual(nu, strength, energy, hbar, &chebyshev_nodes(400, 0.2, 10.0))?),
        Err(Error::ComplexOrder(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(PctReduction {
        d_pct: ord.d_pct(),
        k_squared: 16.0 * energy / (hbar * hbar),
        strength,
        residual,
    })
}

/// Relative residual of u(G) = √(2G) J_ν(kG), G = |g| = 1/(2x), in
/// u″ + (k² − strength/G²)u = 0 over the x grid.
pub fn pct_residual(nu: f64, strength: f64, energy: f64, hbar: f64, x_grid: &[f64]) -> Result<f64> {
    let order = BesselOrder::new(nu)?;
    let k = 4.0 * energy.sqrt() / hbar;
    let mut worst: f64 = 0.0;
    for &x in x_grid {
        let g = 1.0 / (2.0 * x);
        let (j, jp, jpp) = bessel_j_derivatives(order, k * g)?;
        let r2 = std::f64::consts::SQRT_2;
        let sg = g.sqrt();
        let u = r2 * sg * j;
        let upp = r2 * (-j / (4.0 * g * sg) + k * jp / sg + sg * k * k * jpp);
        let potential = (k * k - strength / (g * g)) * u;
        let scale = upp.abs().max(potential.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max((upp + potential).abs() / scale);
    }
    Ok(worst)
}
