use super::{CanonicalVariable, PhasePolynomial};
use std::collections::BTreeSet;

/// Canonical (coordinate, momentum) pairs spanned by the variables of either
/// argument. A pair absent from both polynomials contributes zero to any
/// bracket, so restricting to this set is equivalent to any larger range.
fn canonical_pairs(
    f: &PhasePolynomial,
    g: &PhasePolynomial,
) -> Vec<(CanonicalVariable, CanonicalVariable)> {
    let mut pairs: BTreeSet<(CanonicalVariable, CanonicalVariable)> = BTreeSet::new();
    for v in f.variables().into_iter().chain(g.variables()) {
        let q = if v.is_coordinate() { v } else { v.conjugate() };
        pairs.insert((q, q.conjugate()));
    }
    pairs.into_iter().collect()
}

fn bracket(f: &PhasePolynomial, g: &PhasePolynomial, momentum_sign: i64) -> PhasePolynomial {
    let sign = PhasePolynomial::constant(super::gauss_int(momentum_sign));
    let mut out = PhasePolynomial::zero();
    for (q, p) in canonical_pairs(f, g) {
        let term = &(&f.partial_derivative(q) * &g.partial_derivative(p))
            + &(&sign * &(&f.partial_derivative(p) * &g.partial_derivative(q)));
        out = &out + &term;
    }
    out
}

/// Classical Poisson bracket
/// `{f,g} = sum_k (df/dq_k dg/dp_k - df/dp_k dg/dq_k)`.
pub fn poisson_bracket(f: &PhasePolynomial, g: &PhasePolynomial) -> PhasePolynomial {
    bracket(f, g, -1)
}

/// Symmetric companion of the Poisson bracket
/// `{f,g}_A = sum_k (df/dq_k dg/dp_k + df/dp_k dg/dq_k)`.
pub fn anti_bracket(f: &PhasePolynomial, g: &PhasePolynomial) -> PhasePolynomial {
    bracket(f, g, 1)
}
