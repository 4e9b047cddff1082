use crate::algebra::{PhasePolynomial, Rational, TermKey};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Canonical text of a polynomial. The output is deterministic, uses the
/// same grammar `parse` accepts, and round-trips exactly:
/// `parse(canonical_text(p)) == p`.
///
/// Terms are ordered by total degree (descending), then lexicographically on
/// the canonical variable order, then by descending `k` power. A complex
/// coefficient `a + b*i` is written as two textual terms so no parentheses
/// are ever needed.
pub fn canonical_text(poly: &PhasePolynomial) -> String {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (key, coeff) in poly.sorted_terms() {
        if !coeff.re.is_zero() {
            pieces.push(render_term(&coeff.re, false, key));
        }
        if !coeff.im.is_zero() {
            pieces.push(render_term(&coeff.im, true, key));
        }
    }
    if pieces.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (negative, body)) in pieces.iter().enumerate() {
        if idx == 0 {
            if *negative {
                out.push('-');
            }
        } else if *negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(body);
    }
    out
}

/// One textual term: returns (is_negative, body-without-sign).
fn render_term(coeff: &Rational, imaginary: bool, key: &TermKey) -> (bool, String) {
    let negative = coeff.is_negative();
    let magnitude = coeff.abs();

    let mut factors: Vec<String> = Vec::new();
    if imaginary {
        factors.push("i".to_string());
    }
    match key.kappa_power {
        0 => {}
        1 => factors.push("k".to_string()),
        p => factors.push(format!("k^{}", p)),
    }
    for &(v, e) in key.monomial.factors() {
        if e == 1 {
            factors.push(v.to_string());
        } else {
            factors.push(format!("{}^{}", v, e));
        }
    }

    if factors.is_empty() {
        return (negative, magnitude.to_string());
    }
    if magnitude.is_one() {
        return (negative, factors.join("*"));
    }
    (negative, format!("{}*{}", magnitude, factors.join("*")))
}

impl fmt::Display for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canonical_text(self))
    }
}
