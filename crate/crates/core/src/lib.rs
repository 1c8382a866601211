//! Classical, semiclassical and quantum analysis of the oscillator
//! H = x⁴p²/4 + λx² with position-dependent mass m(x) = 2/x⁴.

pub mod classical_dynamics;
pub mod error;
pub mod numerics;
pub mod quantum_spectral;
pub mod report;
pub mod semiclassical;
pub mod special_functions;
pub mod verification;

pub use error::{Error, Result};
