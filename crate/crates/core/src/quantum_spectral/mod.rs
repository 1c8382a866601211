//! Quantum analysis of the single-term ordered Hamiltonian
//! ½ m^α₁ p m^β₁ p m^γ₁ + λx² with m(x) = 2/x⁴.
//!
//! Bounded states need d = 2γ₁ − 2α₁ − 3/2 = 0, and matching parity across
//! the origin forces the Bessel order to a positive integer n. Together
//! these quantize the coupling, λ = (n² − s²)ħ²/4 with
//! s = 2α₁ + 2γ₁ + 3/2, while E stays continuous.

pub mod normalization;
pub mod ordering;
pub mod reduction;
pub mod states;

pub use normalization::*;
pub use ordering::*;
pub use reduction::*;
pub use states::*;
