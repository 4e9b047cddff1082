//! Exact symbolic arithmetic on phase-space polynomials.
//!
//! Values are multivariate polynomials over the planar canonical variables
//! (`x`, `y`, `p_x`, `p_y` per particle) with Gaussian-rational coefficients,
//! graded by integer powers of the structure scale `k`. The planar constraint
//! `z = p_z = 0` is enforced by the vocabulary: the out-of-plane variables are
//! unrepresentable.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function, so values can be shared freely between threads.

mod bracket;
mod polynomial;

pub use bracket::{anti_bracket, poisson_bracket};
pub use polynomial::{EvalError, Monomial, PhasePolynomial, TermKey};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Complex number with exact rational real and imaginary parts.
pub type GaussianRational = Complex<Rational>;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn gauss_int(n: i64) -> GaussianRational {
    Complex::new(Rational::from_integer(BigInt::from(n)), Rational::zero())
}

pub fn gauss_rational(numer: i64, denom: i64) -> GaussianRational {
    Complex::new(rational(numer, denom), Rational::zero())
}

/// The imaginary unit as an exact coefficient.
pub fn gauss_i() -> GaussianRational {
    Complex::new(Rational::zero(), Rational::one())
}

/// In-plane axis of a canonical variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Whether a canonical variable is a coordinate or its conjugate momentum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    Coordinate,
    Momentum,
}

/// One canonical phase-space variable: x, y, p_x or p_y of some particle.
///
/// The derived ordering — particle, then kind (coordinates before momenta),
/// then axis — fixes the canonical monomial ordering used everywhere,
/// including serialization: `x1 < y1 < px1 < py1 < x2 < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalVariable {
    pub particle: u32,
    pub kind: VarKind,
    pub axis: Axis,
}

impl CanonicalVariable {
    pub fn new(particle: u32, axis: Axis, kind: VarKind) -> Self {
        assert!(particle >= 1, "particle index must be >= 1");
        CanonicalVariable {
            particle,
            kind,
            axis,
        }
    }

    pub fn x(particle: u32) -> Self {
        Self::new(particle, Axis::X, VarKind::Coordinate)
    }

    pub fn y(particle: u32) -> Self {
        Self::new(particle, Axis::Y, VarKind::Coordinate)
    }

    pub fn px(particle: u32) -> Self {
        Self::new(particle, Axis::X, VarKind::Momentum)
    }

    pub fn py(particle: u32) -> Self {
        Self::new(particle, Axis::Y, VarKind::Momentum)
    }

    /// The conjugate partner in the same canonical pair.
    pub fn conjugate(self) -> Self {
        let kind = match self.kind {
            VarKind::Coordinate => VarKind::Momentum,
            VarKind::Momentum => VarKind::Coordinate,
        };
        CanonicalVariable { kind, ..self }
    }

    pub fn is_coordinate(self) -> bool {
        self.kind == VarKind::Coordinate
    }
}

impl fmt::Display for CanonicalVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match (self.kind, self.axis) {
            (VarKind::Coordinate, Axis::X) => "x",
            (VarKind::Coordinate, Axis::Y) => "y",
            (VarKind::Momentum, Axis::X) => "px",
            (VarKind::Momentum, Axis::Y) => "py",
        };
        write!(f, "{}{}", prefix, self.particle)
    }
}
