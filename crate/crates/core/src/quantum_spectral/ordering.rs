use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{Provenance, VerificationReport};

/// Tolerance on Σwᵢ = 1 and αᵢ + βᵢ + γᵢ = −1.
pub const ORDERING_TOLERANCE: f64 = 1e-12;

/// One summand w·m^α p m^β p m^γ of the general ordered kinetic term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderingTerm {
    pub w: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingScheme {
    pub terms: Vec<OrderingTerm>,
}

impl OrderingScheme {
    pub fn new(terms: Vec<OrderingTerm>) -> Self {
        Self { terms }
    }

    /// From (w, α, β, γ) tuples.
    pub fn from_tuples(terms: &[(f64, f64, f64, f64)]) -> Self {
        Self::new(
            terms
                .iter()
                .map(|&(w, alpha, beta, gamma)| OrderingTerm { w, alpha, beta, gamma })
                .collect(),
        )
    }

    pub fn alpha_bar(&self) -> f64 {
        self.terms.iter().map(|t| t.w * t.alpha).sum()
    }

    pub fn gamma_bar(&self) -> f64 {
        self.terms.iter().map(|t| t.w * t.gamma).sum()
    }

    pub fn alphagamma_bar(&self) -> f64 {
        self.terms.iter().map(|t| t.w * t.alpha * t.gamma).sum()
    }
}

/// Checks Σwᵢ = 1 and αᵢ + βᵢ + γᵢ = −1 for every term.
pub fn validate_ordering(scheme: &OrderingScheme) -> VerificationReport {
    const ID: &str = "ordering_constraints";
    if scheme.terms.is_empty() {
        return VerificationReport::predicate(ID, false, f64::NAN, ORDERING_TOLERANCE, Provenance::Trivial, "empty term list");
    }
    let weight_error = (scheme.terms.iter().map(|t| t.w).sum::<f64>() - 1.0).abs();
    let mut worst = weight_error;
    let mut notes = Vec::new();
    if weight_error > ORDERING_TOLERANCE {
        notes.push(format!("weights sum to {}", 1.0 + weight_error));
    }
    for (i, t) in scheme.terms.iter().enumerate() {
        let violation = (t.alpha + t.beta + t.gamma + 1.0).abs();
        worst = worst.max(violation);
        if violation > ORDERING_TOLERANCE || !violation.is_finite() {
            notes.push(format!("term {i}: alpha + beta + gamma = {}", t.alpha + t.beta + t.gamma));
        }
    }
    let holds = worst <= ORDERING_TOLERANCE;
    let notes = if holds {
        "all constraints hold".to_string()
    } else {
        notes.join("; ")
    };
    VerificationReport::predicate(ID, holds, worst, ORDERING_TOLERANCE, Provenance::Trivial, notes)
}

/// Single-term ordering m^α₁ p m^β₁ p m^γ₁ with α₁ + β₁ + γ₁ = −1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleTermOrdering {
    pub alpha1: f64,
    pub beta1: f64,
    pub gamma1: f64,
}

impl SingleTermOrdering {
    /// β₁ is fixed by the constraint.
    pub fn new(alpha1: f64, gamma1: f64) -> Result<Self> {
        Self::from_triple(alpha1, -1.0 - alpha1 - gamma1, gamma1)
    }

    pub fn from_triple(alpha1: f64, beta1: f64, gamma1: f64) -> Result<Self> {
        if !(alpha1.is_finite() && beta1.is_finite() && gamma1.is_finite()) {
            return Err(Error::InvalidParameter("ordering exponents must be finite".into()));
        }
        let sum = alpha1 + beta1 + gamma1;
        if (sum + 1.0).abs() > ORDERING_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "ordering exponents must sum to -1, got {sum}"
            )));
        }
        Ok(Self { alpha1, beta1, gamma1 })
    }

    /// Ordering with γ₁ − α₁ = 3/4 (so d = 0) and α₁ + γ₁ = `sigma`.
    pub fn bounded(sigma: f64) -> Result<Self> {
        Self::new((sigma - 0.75) / 2.0, (sigma + 0.75) / 2.0)
    }

    /// Similarity exponent η with 2η = γ₁ − α₁.
    pub fn eta(&self) -> f64 {
        (self.gamma1 - self.alpha1) / 2.0
    }

    /// Exponent d in ψ = x^d φ that yields Bessel's equation.
    pub fn d_bessel(&self) -> f64 {
        2.0 * self.gamma1 - 2.0 * self.alpha1 - 1.5
    }

    /// Exponent that removes the first-derivative term in the g variable.
    pub fn d_pct(&self) -> f64 {
        2.0 * self.gamma1 - 2.0 * self.alpha1 - 1.0
    }

    /// s = 2α₁ + 2γ₁ + 3/2.
    pub fn s(&self) -> f64 {
        2.0 * self.alpha1 + 2.0 * self.gamma1 + 1.5
    }

    pub fn as_scheme(&self) -> OrderingScheme {
        OrderingScheme::from_tuples(&[(1.0, self.alpha1, self.beta1, self.gamma1)])
    }
}
