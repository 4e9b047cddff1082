//! spinlab: exact classical spin algebra on the planar phase space, its
//! operator representation, the precession dynamics, and the internal-energy
//! oscillator spectrum — with an equation-by-equation audit that marks every
//! claimed identity VERIFIED or DISCREPANT next to the computed value.
//!
//! The crate is organized around exact arithmetic: polynomials carry
//! Gaussian-rational coefficients graded by the structure scale `k`,
//! operator matrices carry Gaussian-rational entries graded by powers of the
//! reduced Planck constant, and every identity check is a structural
//! equality. Floating point appears only where it belongs: trajectory
//! integration, the discretized eigenproblem, and evaluation of polynomials
//! at numeric points.

pub mod algebra;
pub mod audit;
pub mod config;
pub mod dynamics;
pub mod operator;
pub mod parser;
pub mod spectrum;
pub mod spin;

pub use algebra::{CanonicalVariable, GaussianRational, PhasePolynomial, Rational};
pub use spin::{CheckResult, CheckStatus, SpinSet};
