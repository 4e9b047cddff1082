use super::{CanonicalVariable, GaussianRational, Rational};
use num_complex::Complex64;
use num_traits::{Pow, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Product of canonical variables with positive integer exponents,
/// kept sorted by variable so the representation is unique.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    factors: Vec<(CanonicalVariable, u32)>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial::default()
    }

    pub fn variable(v: CanonicalVariable) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    /// Builds a monomial from arbitrary (variable, exponent) pairs,
    /// merging repeats and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (CanonicalVariable, u32)>) -> Self {
        let mut map: BTreeMap<CanonicalVariable, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial {
            factors: map.into_iter().collect(),
        }
    }

    pub fn exponent(&self, v: CanonicalVariable) -> u32 {
        self.exponent_opt(v).unwrap_or(0)
    }

    fn exponent_opt(&self, v: CanonicalVariable) -> Option<u32> {
        self.factors.iter().find(|(w, _)| *w == v).map(|(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(CanonicalVariable, u32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    fn multiply(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(
            self.factors
                .iter()
                .chain(other.factors.iter())
                .map(|&(v, e)| (v, e)),
        )
    }

    /// Formal derivative: returns (scale, reduced monomial), or None when the
    /// variable is absent.
    fn derivative(&self, v: CanonicalVariable) -> Option<(u32, Monomial)> {
        let e = self.exponent_opt(v)?;
        let reduced = Monomial {
            factors: self
                .factors
                .iter()
                .filter_map(|&(w, ew)| {
                    if w == v {
                        (ew > 1).then_some((w, ew - 1))
                    } else {
                        Some((w, ew))
                    }
                })
                .collect(),
        };
        Some((e, reduced))
    }
}

/// Key of one stored term: the variable part plus the power of the structure
/// scale `k`. Carrying the `k` power in the key keeps sums such as
/// `k*x1 + k^-1*x1` representable without losing exactness.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub monomial: Monomial,
    pub kappa_power: i32,
}

impl TermKey {
    pub fn new(monomial: Monomial, kappa_power: i32) -> Self {
        TermKey {
            monomial,
            kappa_power,
        }
    }

    pub fn unit() -> Self {
        TermKey::new(Monomial::unit(), 0)
    }
}

/// Display/serialization order: higher total degree first, ties broken
/// lexicographically on the canonical variable order (larger exponent on the
/// earliest variable first), then by descending `k` power.
pub(crate) fn display_cmp(a: &TermKey, b: &TermKey) -> Ordering {
    let by_degree = b.monomial.total_degree().cmp(&a.monomial.total_degree());
    if by_degree != Ordering::Equal {
        return by_degree;
    }
    let vars: BTreeSet<CanonicalVariable> = a
        .monomial
        .factors()
        .iter()
        .chain(b.monomial.factors().iter())
        .map(|&(v, _)| v)
        .collect();
    for v in vars {
        let ea = a.monomial.exponent(v);
        let eb = b.monomial.exponent(v);
        if ea != eb {
            return eb.cmp(&ea);
        }
    }
    b.kappa_power.cmp(&a.kappa_power)
}

/// Exact multivariate polynomial over the canonical variables, graded by
/// integer powers of `k`. Stored in canonical form: no zero coefficients.
///
/// Equality is structural equality of the canonical term maps, which is why
/// every identity check in the crate can be exact.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhasePolynomial {
    terms: BTreeMap<TermKey, GaussianRational>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no assignment for variable {0}")]
    MissingVariable(CanonicalVariable),
}

impl PhasePolynomial {
    pub fn zero() -> Self {
        PhasePolynomial::default()
    }

    pub fn one() -> Self {
        PhasePolynomial::constant(super::gauss_int(1))
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut p = PhasePolynomial::zero();
        p.add_term(TermKey::unit(), c);
        p
    }

    pub fn variable(v: CanonicalVariable) -> Self {
        let mut p = PhasePolynomial::zero();
        p.add_term(TermKey::new(Monomial::variable(v), 0), super::gauss_int(1));
        p
    }

    /// The pure power `k^p` of the structure scale.
    pub fn kappa(power: i32) -> Self {
        let mut p = PhasePolynomial::zero();
        p.add_term(TermKey::new(Monomial::unit(), power), super::gauss_int(1));
        p
    }

    /// Adds `coeff * key` into the polynomial, keeping canonical form.
    pub fn add_term(&mut self, key: TermKey, coeff: GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &GaussianRational)> {
        self.terms.iter()
    }

    /// Terms in the canonical display order.
    pub fn sorted_terms(&self) -> Vec<(&TermKey, &GaussianRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| display_cmp(a, b));
        v
    }

    pub fn variables(&self) -> BTreeSet<CanonicalVariable> {
        self.terms
            .keys()
            .flat_map(|k| k.monomial.factors().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.monomial.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    pub fn conjugate(&self) -> Self {
        let mut out = PhasePolynomial::zero();
        for (key, coeff) in &self.terms {
            out.add_term(key.clone(), coeff.conj());
        }
        out
    }

    pub fn scaled(&self, factor: &GaussianRational) -> Self {
        let mut out = PhasePolynomial::zero();
        for (key, coeff) in &self.terms {
            out.add_term(key.clone(), coeff.clone() * factor.clone());
        }
        out
    }

    pub fn times_i(&self) -> Self {
        self.scaled(&super::gauss_i())
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut out = PhasePolynomial::one();
        for _ in 0..exponent {
            out = &out * self;
        }
        out
    }

    /// Exact formal partial derivative.
    pub fn partial_derivative(&self, v: CanonicalVariable) -> Self {
        let mut out = PhasePolynomial::zero();
        for (key, coeff) in &self.terms {
            if let Some((scale, reduced)) = key.monomial.derivative(v) {
                out.add_term(
                    TermKey::new(reduced, key.kappa_power),
                    coeff.clone() * super::gauss_int(scale as i64),
                );
            }
        }
        out
    }

    /// Replaces the symbol `k` by an exact rational value, merging terms.
    pub fn substitute_kappa(&self, value: &Rational) -> Self {
        let mut out = PhasePolynomial::zero();
        for (key, coeff) in &self.terms {
            let factor: Rational = value.clone().pow(key.kappa_power);
            let c = GaussianRational::new(factor, Rational::zero());
            out.add_term(TermKey::new(key.monomial.clone(), 0), coeff.clone() * c);
        }
        out
    }

    /// Numeric substitution. Every variable of the polynomial must be
    /// assigned; `kappa` supplies the value of `k`.
    pub fn evaluate(
        &self,
        point: &BTreeMap<CanonicalVariable, f64>,
        kappa: f64,
    ) -> Result<Complex64, EvalError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (key, coeff) in &self.terms {
            let mut value = kappa.powi(key.kappa_power);
            for &(v, e) in key.monomial.factors() {
                let x = *point.get(&v).ok_or(EvalError::MissingVariable(v))?;
                value *= x.powi(e as i32);
            }
            let c = Complex64::new(
                coeff.re.to_f64().unwrap_or(f64::NAN),
                coeff.im.to_f64().unwrap_or(f64::NAN),
            );
            acc += c * value;
        }
        Ok(acc)
    }
}

impl Add for &PhasePolynomial {
    type Output = PhasePolynomial;

    fn add(self, rhs: &PhasePolynomial) -> PhasePolynomial {
        let mut out = self.clone();
        for (key, coeff) in &rhs.terms {
            out.add_term(key.clone(), coeff.clone());
        }
        out
    }
}

impl Sub for &PhasePolynomial {
    type Output = PhasePolynomial;

    fn sub(self, rhs: &PhasePolynomial) -> PhasePolynomial {
        let mut out = self.clone();
        for (key, coeff) in &rhs.terms {
            out.add_term(key.clone(), -coeff.clone());
        }
        out
    }
}

impl Mul for &PhasePolynomial {
    type Output = PhasePolynomial;

    fn mul(self, rhs: &PhasePolynomial) -> PhasePolynomial {
        let mut out = PhasePolynomial::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(
                    TermKey::new(
                        ka.monomial.multiply(&kb.monomial),
                        ka.kappa_power + kb.kappa_power,
                    ),
                    ca.clone() * cb.clone(),
                );
            }
        }
        out
    }
}

impl Neg for &PhasePolynomial {
    type Output = PhasePolynomial;

    fn neg(self) -> PhasePolynomial {
        let mut out = PhasePolynomial::zero();
        for (key, coeff) in &self.terms {
            out.add_term(key.clone(), -coeff.clone());
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for PhasePolynomial {
            type Output = PhasePolynomial;
            fn $method(self, rhs: PhasePolynomial) -> PhasePolynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&PhasePolynomial> for PhasePolynomial {
            type Output = PhasePolynomial;
            fn $method(self, rhs: &PhasePolynomial) -> PhasePolynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<PhasePolynomial> for &PhasePolynomial {
            type Output = PhasePolynomial;
            fn $method(self, rhs: PhasePolynomial) -> PhasePolynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for PhasePolynomial {
    type Output = PhasePolynomial;
    fn neg(self) -> PhasePolynomial {
        -&self
    }
}
