//! Property tests for the algebra and parser invariants, plus the
//! finite-difference oracle that keeps the symbolic bracket honest.

use num_complex::Complex64;
use proptest::prelude::*;
use spinlab::algebra::{
    anti_bracket, gauss_rational, poisson_bracket, CanonicalVariable, PhasePolynomial,
};
use spinlab::parser::{canonical_text, parse};
use std::collections::BTreeMap;

fn all_variables() -> Vec<CanonicalVariable> {
    vec![
        CanonicalVariable::x(1),
        CanonicalVariable::y(1),
        CanonicalVariable::px(1),
        CanonicalVariable::py(1),
        CanonicalVariable::x(2),
        CanonicalVariable::py(2),
    ]
}

/// One random term: small Gaussian-rational coefficient, kappa power in
/// -2..=2, total degree at most 4.
fn term_strategy() -> impl Strategy<Value = PhasePolynomial> {
    let coeff = (-6i64..=6, 1i64..=4, -6i64..=6).prop_map(|(n, d, m)| {
        gauss_rational(n, d) + gauss_rational(m, d) * spinlab::algebra::gauss_i()
    });
    let kappa = -2i32..=2;
    let exponents = proptest::collection::vec(0u32..=2, all_variables().len());
    (coeff, kappa, exponents).prop_map(|(c, k, exps)| {
        let vars = all_variables();
        let mut poly = PhasePolynomial::kappa(k).scaled(&c);
        let mut degree = 0u32;
        for (v, e) in vars.into_iter().zip(exps) {
            let e = if degree + e > 4 { 0 } else { e };
            degree += e;
            poly = &poly * &PhasePolynomial::variable(v).pow(e);
        }
        poly
    })
}

/// Random polynomial with up to 4 terms, degree at most 4.
fn polynomial_strategy() -> impl Strategy<Value = PhasePolynomial> {
    proptest::collection::vec(term_strategy(), 0..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(PhasePolynomial::zero(), |acc, t| &acc + &t)
    })
}

/// Central-difference numerical bracket at a point, the independent oracle
/// for the symbolic one. Step 1e-5. Returns the value together with the
/// magnitude of the products it summed, which is the scale its own
/// truncation error is relative to.
fn finite_difference_bracket(
    f: &PhasePolynomial,
    g: &PhasePolynomial,
    point: &BTreeMap<CanonicalVariable, f64>,
    kappa: f64,
    momentum_sign: f64,
) -> (Complex64, f64) {
    let h = 1e-5;
    let partial = |p: &PhasePolynomial, v: CanonicalVariable| -> Complex64 {
        let mut plus = point.clone();
        *plus.get_mut(&v).unwrap() += h;
        let mut minus = point.clone();
        *minus.get_mut(&v).unwrap() -= h;
        (p.evaluate(&plus, kappa).unwrap() - p.evaluate(&minus, kappa).unwrap()) / (2.0 * h)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    let mut pairs: Vec<(CanonicalVariable, CanonicalVariable)> = Vec::new();
    for v in f.variables().into_iter().chain(g.variables()) {
        let q = if v.is_coordinate() { v } else { v.conjugate() };
        if !pairs.contains(&(q, q.conjugate())) {
            pairs.push((q, q.conjugate()));
        }
    }
    for (q, p) in pairs {
        let first = partial(f, q) * partial(g, p);
        let second = partial(f, p) * partial(g, q);
        acc += first + momentum_sign * second;
        scale += first.norm() + second.norm();
    }
    (acc, scale)
}

fn full_point(seed: u64) -> BTreeMap<CanonicalVariable, f64> {
    // Deterministic pseudo-random coordinates in [-1, 1].
    let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let mut point = BTreeMap::new();
    for particle in 1..=2 {
        point.insert(CanonicalVariable::x(particle), next());
        point.insert(CanonicalVariable::y(particle), next());
        point.insert(CanonicalVariable::px(particle), next());
        point.insert(CanonicalVariable::py(particle), next());
    }
    point
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poisson_bracket_is_antisymmetric(f in polynomial_strategy(), g in polynomial_strategy()) {
        let fg = poisson_bracket(&f, &g);
        let gf = poisson_bracket(&g, &f);
        prop_assert_eq!(fg, -gf);
    }

    #[test]
    fn anti_bracket_is_symmetric(f in polynomial_strategy(), g in polynomial_strategy()) {
        prop_assert_eq!(anti_bracket(&f, &g), anti_bracket(&g, &f));
    }

    #[test]
    fn leibniz_rule_holds_exactly(
        f in polynomial_strategy(),
        g in polynomial_strategy(),
        h in polynomial_strategy(),
    ) {
        let lhs = poisson_bracket(&f, &(&g * &h));
        let rhs = &(&poisson_bracket(&f, &g) * &h) + &(&g * &poisson_bracket(&f, &h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_identity_holds_exactly(
        f in polynomial_strategy(),
        g in polynomial_strategy(),
        h in polynomial_strategy(),
    ) {
        let cycle = &(&poisson_bracket(&f, &poisson_bracket(&g, &h))
            + &poisson_bracket(&g, &poisson_bracket(&h, &f)))
            + &poisson_bracket(&h, &poisson_bracket(&f, &g));
        prop_assert!(cycle.is_zero());
    }

    #[test]
    fn symbolic_bracket_matches_finite_differences(
        f in polynomial_strategy(),
        g in polynomial_strategy(),
        seed in 0u64..1000,
    ) {
        let point = full_point(seed);
        for kappa in [1.0, 1.3] {
            let symbolic = poisson_bracket(&f, &g).evaluate(&point, kappa).unwrap();
            let (numeric, scale) = finite_difference_bracket(&f, &g, &point, kappa, -1.0);
            let tolerance = 1e-6 * symbolic.norm().max(scale).max(1.0);
            prop_assert!(
                (symbolic - numeric).norm() <= tolerance,
                "kappa {}: symbolic {} vs numeric {}", kappa, symbolic, numeric
            );

            let symbolic = anti_bracket(&f, &g).evaluate(&point, kappa).unwrap();
            let (numeric, scale) = finite_difference_bracket(&f, &g, &point, kappa, 1.0);
            let tolerance = 1e-6 * symbolic.norm().max(scale).max(1.0);
            prop_assert!((symbolic - numeric).norm() <= tolerance);
        }
    }

    #[test]
    fn print_then_parse_is_the_identity(p in polynomial_strategy()) {
        let text = canonical_text(&p);
        let reparsed = parse(&text).unwrap();
        prop_assert_eq!(reparsed, p);
    }

    #[test]
    fn scalar_multiplication_distributes(f in polynomial_strategy(), g in polynomial_strategy()) {
        let c = gauss_rational(3, 7);
        let lhs = (&f + &g).scaled(&c);
        let rhs = &f.scaled(&c) + &g.scaled(&c);
        prop_assert_eq!(lhs, rhs);
    }
}
