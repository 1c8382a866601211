//! WKB quantization of the coupling λ through the Hadamard finite part of
//! the divergent action integral ∫_{ε≤|x|≤A} √(A² − x²)/x² dx.
//!
//! The raw integral behaves like 2A/ε. After subtracting 2√(A² − ε²)/ε the
//! remainder is −π + 2ε/A + ε³/(3A³) + …, containing only odd powers of ε,
//! so Richardson extrapolation eliminates the ε¹ and ε³ terms.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{integrate, richardson, QuadOptions};
use crate::report::{Provenance, VerificationReport};

/// Cut-offs used for extrapolation, in units of A.
pub const EPS_SEQUENCE: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];
const EPS_RATIO: f64 = 10.0;
const EPS_EXPONENTS: [f64; 2] = [1.0, 3.0];
/// Successive extrapolants must agree to this before the result is trusted.
pub const EXTRAPOLATION_TOLERANCE: f64 = 1e-6;
pub const WKB_TOLERANCE: f64 = 1e-6;

const ACTION_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-10,
    rel_tol: 1e-13,
    max_subdivisions: 500,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionSample {
    pub eps: f64,
    pub raw: f64,
    pub divergent: f64,
}

impl ActionSample {
    pub fn remainder(&self) -> f64 {
        self.raw - self.divergent
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionResult {
    pub turning_point: f64,
    /// Regularized integral at the smallest cut-off.
    pub raw_value_at_eps: f64,
    /// 2√(A² − ε²)/ε at the smallest cut-off.
    pub divergent_part: f64,
    pub finite_part: f64,
    pub error_estimate: f64,
    pub eps_sequence: Vec<f64>,
    pub samples: Vec<ActionSample>,
}

pub fn turning_point(energy: f64, lambda: f64) -> Result<f64> {
    if !(energy > 0.0 && lambda > 0.0 && energy.is_finite() && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "turning point needs E > 0 and lambda > 0, got E = {energy}, lambda = {lambda}"
        )));
    }
    Ok((energy / lambda).sqrt())
}

/// 2√(A² − ε²)/ε, the divergent piece of the regularized action.
pub fn divergent_part(a: f64, eps: f64) -> f64 {
    2.0 * (a * a - eps * eps).sqrt() / eps
}

/// ∫_{ε≤|x|≤A} √(A² − x²)/x² dx by adaptive quadrature.
///
/// With x = A sin θ the half-range integral becomes ∫ cot²θ dθ over
/// [θ_ε, π/2]; the further substitution θ = θ_ε eᵘ turns the 1/θ² spike at
/// the cut-off into a smooth, decaying integrand.
pub fn action_integral_regularized(a: f64, eps: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("turning point must be positive, got {a}")));
    }
    if !(eps > 0.0 && eps <= a) {
        return Err(Error::Domain(format!("cut-off must lie in (0, A], got {eps}")));
    }
    let theta_eps = (eps / a).asin();
    if theta_eps >= FRAC_PI_2 {
        return Ok(0.0);
    }
    let upper = (FRAC_PI_2 / theta_eps).ln();
    let integrand = |u: f64| {
        let theta = theta_eps * u.exp();
        let cot = theta.cos() / theta.sin();
        cot * cot * theta
    };
    let half = integrate(integrand, 0.0, upper, ACTION_QUAD)?;
    Ok(2.0 * half.value)
}

/// Extrapolates the regularized action minus its divergent part to ε → 0.
pub fn finite_part_action(a: f64) -> Result<ActionResult> {
    let samples = EPS_SEQUENCE
        .iter()
        .map(|&scale| {
            let eps = scale * a;
            Ok(ActionSample {
                eps,
                raw: action_integral_regularized(a, eps)?,
                divergent: divergent_part(a, eps),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let remainders: Vec<f64> = samples.iter().map(ActionSample::remainder).collect();
    let ex = richardson(&remainders, EPS_RATIO, &EPS_EXPONENTS)?;
    if ex.error_estimate > EXTRAPOLATION_TOLERANCE {
        return Err(Error::Extrapolation {
            difference: ex.error_estimate,
            tolerance: EXTRAPOLATION_TOLERANCE,
        });
    }
    let last = samples.last().expect("non-empty cut-off sequence");
    Ok(ActionResult {
        turning_point: a,
        raw_value_at_eps: last.raw,
        divergent_part: last.divergent,
        finite_part: ex.value,
        error_estimate: ex.error_estimate,
        eps_sequence: samples.iter().map(|s| s.eps).collect(),
        samples,
    })
}

/// λₙ = (n + ½)²ħ²/4.
pub fn wkb_lambda(n: u32, hbar: f64) -> f64 {
    let m = n as f64 + 0.5;
    m * m * hbar * hbar / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WkbRow {
    pub n: u32,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Assembles 2√λₙ·|I| and (n + ½)ħπ from a numerically extrapolated finite
/// part at turning point `a`.
pub fn wkb_row(n: u32, hbar: f64, a: f64) -> Result<WkbRow> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    let lambda = wkb_lambda(n, hbar);
    let action = finite_part_action(a)?;
    let lhs = 2.0 * lambda.sqrt() * action.finite_part.abs();
    let rhs = (n as f64 + 0.5) * hbar * PI;
    Ok(WkbRow {
        n,
        lambda,
        lhs,
        rhs,
        residual: lhs - rhs,
    })
}

pub fn wkb_condition_check(n: u32, hbar: f64) -> Result<VerificationReport> {
    let row = wkb_row(n, hbar, 1.0)?;
    Ok(VerificationReport::residual(
        "wkb_identity",
        row.residual,
        WKB_TOLERANCE,
        Provenance::Paper,
        format!(
            "n = {n}, hbar = {hbar}: 2*sqrt(lambda)*|I| = {:.12}, (n+1/2)*hbar*pi = {:.12}; magnitude of the negative finite part used",
            row.lhs, row.rhs
        ),
    ))
}

/// Finite-part reading of the closed-contour action: both momentum branches
/// contribute 2√λ·|I|, giving 4π√λ. E enters only through A, which drops out.
pub fn contour_action(energy: f64, lambda: f64) -> Result<f64> {
    let a = turning_point(energy, lambda)?;
    let action = finite_part_action(a)?;
    Ok(2.0 * 2.0 * lambda.sqrt() * action.finite_part.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turning_points() {
        assert_eq!(turning_point(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(turning_point(0.5, 0.5).unwrap(), 1.0);
        assert_eq!(turning_point(4.0, 1.0).unwrap(), 2.0);
        assert!(turning_point(0.0, 1.0).is_err());
        assert!(turning_point(1.0, -1.0).is_err());
    }

    #[test]
    fn divergent_part_example() {
        assert!((divergent_part(1.0, 1e-3) - 2000.0 * (1.0 - 5e-7)).abs() < 1e-9);
    }

    #[test]
    fn empty_domain_limit() {
        assert_eq!(action_integral_regularized(1.0, 1.0).unwrap(), 0.0);
        assert!(action_integral_regularized(1.0, 1.0 - 1e-9).unwrap().abs() < 1e-12);
        assert!(action_integral_regularized(1.0, 0.0).is_err());
        assert!(action_integral_regularized(1.0, 1.5).is_err());
    }

    #[test]
    fn wkb_lambda_values() {
        assert_eq!(wkb_lambda(0, 1.0), 1.0 / 16.0);
        assert_eq!(wkb_lambda(1, 1.0), 9.0 / 16.0);
        assert_eq!(wkb_lambda(2, 2.0), 25.0 / 4.0);
    }

    #[test]
    fn wkb_examples() {
        for (n, hbar, rhs) in [(0, 1.0, PI / 2.0), (3, 1.0, 3.5 * PI), (1, 0.5, 0.75 * PI)] {
            let row = wkb_row(n, hbar, 1.0).unwrap();
            assert!((row.rhs - rhs).abs() < 1e-15);
            assert!(row.residual.abs() < 1e-6);
            assert!(wkb_condition_check(n, hbar).unwrap().passed());
        }
    }

    #[test]
    fn contour_values() {
        assert!((contour_action(1.0, 1.0 / 16.0).unwrap() - PI).abs() < 1e-6);
        assert!((contour_action(2.0, 1.0).unwrap() - 4.0 * PI).abs() < 1e-6);
        assert!((contour_action(0.3, 9.0 / 16.0).unwrap() - 3.0 * PI).abs() < 1e-6);
    }
}
