//! The named classical spin functions of one particle and the exact
//! verification suite over them.
//!
//! Construction follows the defining relations: `S3 = Lz/2` with
//! `Lz = x*py - y*px`, `S2 = Q_xy/2`, `S1 = Q_1/2`, the scale carried
//! symbolically as integer powers of `k`. Every check below is an exact
//! polynomial identity; a claim that fails is reported as DISCREPANT with
//! the computed value, never silently corrected.

use crate::algebra::{
    anti_bracket, gauss_int, gauss_rational, poisson_bracket, CanonicalVariable, PhasePolynomial,
};
use crate::parser::canonical_text;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Angular momentum along the symmetry axis, `x*py - y*px`.
pub fn angular_momentum_z(particle: u32) -> PhasePolynomial {
    let x = PhasePolynomial::variable(CanonicalVariable::x(particle));
    let y = PhasePolynomial::variable(CanonicalVariable::y(particle));
    let px = PhasePolynomial::variable(CanonicalVariable::px(particle));
    let py = PhasePolynomial::variable(CanonicalVariable::py(particle));
    &(&x * &py) - &(&y * &px)
}

/// Off-diagonal quadrupole distortion moment, `k*x*y + k^-1*px*py`.
pub fn quadrupole_xy(particle: u32) -> PhasePolynomial {
    let x = PhasePolynomial::variable(CanonicalVariable::x(particle));
    let y = PhasePolynomial::variable(CanonicalVariable::y(particle));
    let px = PhasePolynomial::variable(CanonicalVariable::px(particle));
    let py = PhasePolynomial::variable(CanonicalVariable::py(particle));
    &(&PhasePolynomial::kappa(1) * &(&x * &y)) + &(&PhasePolynomial::kappa(-1) * &(&px * &py))
}

/// Diagonal quadrupole distortion moment,
/// `1/2*(k*(x^2 - y^2) + k^-1*(px^2 - py^2))`.
pub fn quadrupole_diagonal(particle: u32) -> PhasePolynomial {
    let x = PhasePolynomial::variable(CanonicalVariable::x(particle));
    let y = PhasePolynomial::variable(CanonicalVariable::y(particle));
    let px = PhasePolynomial::variable(CanonicalVariable::px(particle));
    let py = PhasePolynomial::variable(CanonicalVariable::py(particle));
    let coords = &(&x * &x) - &(&y * &y);
    let momenta = &(&px * &px) - &(&py * &py);
    (&(&PhasePolynomial::kappa(1) * &coords) + &(&PhasePolynomial::kappa(-1) * &momenta))
        .scaled(&gauss_rational(1, 2))
}

/// The nine named functions of one particle, all with symbolic `k`.
#[derive(Clone, Debug)]
pub struct SpinSet {
    pub particle: u32,
    pub s1: PhasePolynomial,
    pub s2: PhasePolynomial,
    pub s3: PhasePolynomial,
    pub s0: PhasePolynomial,
    pub s_squared: PhasePolynomial,
    pub s_plus: PhasePolynomial,
    pub s_minus: PhasePolynomial,
    pub n: PhasePolynomial,
    pub unit: PhasePolynomial,
}

impl SpinSet {
    pub fn new(particle: u32) -> SpinSet {
        assert!(particle >= 1, "particle index must be >= 1");
        let x = PhasePolynomial::variable(CanonicalVariable::x(particle));
        let y = PhasePolynomial::variable(CanonicalVariable::y(particle));
        let px = PhasePolynomial::variable(CanonicalVariable::px(particle));
        let py = PhasePolynomial::variable(CanonicalVariable::py(particle));

        let half = gauss_rational(1, 2);
        let s3 = angular_momentum_z(particle).scaled(&half);
        let s2 = quadrupole_xy(particle).scaled(&half);
        let s1 = quadrupole_diagonal(particle).scaled(&half);

        let coords = &(&x * &x) + &(&y * &y);
        let momenta = &(&px * &px) + &(&py * &py);
        let s0 = (&(&PhasePolynomial::kappa(1) * &coords)
            + &(&PhasePolynomial::kappa(-1) * &momenta))
            .scaled(&half);

        let s_squared = &(&(&s1 * &s1) + &(&s2 * &s2)) + &(&s3 * &s3);
        let s_plus = &s1 + &s2.times_i();
        let s_minus = &s1 - &s2.times_i();
        let n = &s_plus * &s_minus;
        let unit = &(&x * &px) + &(&y * &py);

        SpinSet {
            particle,
            s1,
            s2,
            s3,
            s0,
            s_squared,
            s_plus,
            s_minus,
            n,
            unit,
        }
    }

    /// Component by index, 1-based.
    pub fn component(&self, i: usize) -> &PhasePolynomial {
        match i {
            1 => &self.s1,
            2 => &self.s2,
            3 => &self.s3,
            _ => panic!("component index must be 1, 2 or 3"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    #[serde(rename = "VERIFIED")]
    Verified,
    #[serde(rename = "DISCREPANT")]
    Discrepant,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Verified => f.write_str("VERIFIED"),
            CheckStatus::Discrepant => f.write_str("DISCREPANT"),
        }
    }
}

/// Outcome of auditing one claimed identity. `claimed` is the asserted
/// right-hand side in canonical text, `computed` what the computation
/// actually produced. A DISCREPANT entry is a result, not an error.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub claim_id: String,
    pub status: CheckStatus,
    pub claimed: String,
    pub computed: String,
}

impl CheckResult {
    /// Compares a computed polynomial against a claimed one exactly.
    pub fn polynomial(
        claim_id: impl Into<String>,
        claimed: &PhasePolynomial,
        computed: &PhasePolynomial,
    ) -> CheckResult {
        CheckResult {
            claim_id: claim_id.into(),
            status: if claimed == computed {
                CheckStatus::Verified
            } else {
                CheckStatus::Discrepant
            },
            claimed: canonical_text(claimed),
            computed: canonical_text(computed),
        }
    }

    pub fn is_verified(&self) -> bool {
        self.status == CheckStatus::Verified
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpinError {
    #[error("two-particle check requires distinct particle indices, got {0} twice")]
    SameParticle(u32),
}

/// Levi-Civita symbol on 1-based indices.
fn epsilon(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

fn closure_claim(set: &SpinSet, i: usize, j: usize) -> PhasePolynomial {
    let mut claim = PhasePolynomial::zero();
    for k in 1..=3 {
        let e = epsilon(i, j, k);
        if e != 0 {
            claim = &claim + &set.component(k).scaled(&gauss_int(e));
        }
    }
    claim
}

fn closure_checks(set: &SpinSet, claim_prefix: &str, symbol: &str) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            let computed = poisson_bracket(set.component(i), set.component(j));
            let claimed = closure_claim(set, i, j);
            out.push(CheckResult::polynomial(
                format!("{claim_prefix}.{symbol}{i}.{symbol}{j}"),
                &claimed,
                &computed,
            ));
        }
    }
    out
}

/// Checks `{S_i, S_j} = eps_ijk S_k` for all nine ordered pairs, exactly and
/// with `k` symbolic.
pub fn verify_su2(set: &SpinSet) -> Vec<CheckResult> {
    closure_checks(set, "eq7", "s")
}

/// Checks the invariants: `S^2 = S0^2/4`, `N = S^2 - S3^2`, and that both
/// `S0` and `S^2` bracket to zero with every component.
pub fn verify_casimir(set: &SpinSet) -> Vec<CheckResult> {
    let mut out = Vec::new();

    let quarter_s0_sq = (&set.s0 * &set.s0).scaled(&gauss_rational(1, 4));
    out.push(CheckResult::polynomial(
        "eq9.casimir-identity",
        &quarter_s0_sq,
        &set.s_squared,
    ));

    let casimir_minus_axis = &set.s_squared - &(&set.s3 * &set.s3);
    out.push(CheckResult::polynomial(
        "eq21b.number-identity",
        &casimir_minus_axis,
        &set.n,
    ));

    let zero = PhasePolynomial::zero();
    for i in 1..=3 {
        out.push(CheckResult::polynomial(
            format!("eq9.invariant.s0.s{i}"),
            &zero,
            &poisson_bracket(&set.s0, set.component(i)),
        ));
    }
    for i in 1..=3 {
        out.push(CheckResult::polynomial(
            format!("eq9.invariant.ssq.s{i}"),
            &zero,
            &poisson_bracket(&set.s_squared, set.component(i)),
        ));
    }
    out
}

/// Audits the ladder-function bracket table: the three Poisson brackets of
/// `S+`/`S-`, the three anti-brackets, and the anti-bracket action of the
/// unit element `u = x*px + y*py`.
///
/// The `eq19a.plus.minus` entry is expected to come back DISCREPANT: the
/// claimed value is `-2*S3` while the bracket computes to `-2i*S3`.
pub fn verify_ladder(set: &SpinSet) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let zero = PhasePolynomial::zero();

    let minus_two_s3 = set.s3.scaled(&gauss_int(-2));
    out.push(CheckResult::polynomial(
        "eq19a.plus.minus",
        &minus_two_s3,
        &poisson_bracket(&set.s_plus, &set.s_minus),
    ));
    out.push(CheckResult::polynomial(
        "eq19a.plus.plus",
        &zero,
        &poisson_bracket(&set.s_plus, &set.s_plus),
    ));
    out.push(CheckResult::polynomial(
        "eq19a.minus.minus",
        &zero,
        &poisson_bracket(&set.s_minus, &set.s_minus),
    ));

    out.push(CheckResult::polynomial(
        "eq20.anti.plus.minus",
        &set.unit,
        &anti_bracket(&set.s_plus, &set.s_minus),
    ));
    out.push(CheckResult::polynomial(
        "eq20.anti.plus.plus",
        &zero,
        &anti_bracket(&set.s_plus, &set.s_plus),
    ));
    out.push(CheckResult::polynomial(
        "eq20.anti.minus.minus",
        &zero,
        &anti_bracket(&set.s_minus, &set.s_minus),
    ));

    out.push(CheckResult::polynomial(
        "eq21.0.anti.plus.unit",
        &set.s_plus.scaled(&gauss_int(2)),
        &anti_bracket(&set.s_plus, &set.unit),
    ));
    out.push(CheckResult::polynomial(
        "eq21.0.anti.minus.unit",
        &set.s_minus.scaled(&gauss_int(2)),
        &anti_bracket(&set.s_minus, &set.unit),
    ));

    // The product identity behind reading u as the anti-bracket unit.
    out.push(CheckResult::polynomial(
        "eq21.1.anti-unit",
        &set.unit,
        &anti_bracket(&set.s_plus, &set.s_minus),
    ));
    out
}

/// Closure of each set plus all nine cross brackets, which must vanish
/// exactly because the variable sets are disjoint.
pub fn verify_two_particle(a: &SpinSet, b: &SpinSet) -> Result<Vec<CheckResult>, SpinError> {
    if a.particle == b.particle {
        return Err(SpinError::SameParticle(a.particle));
    }
    let mut out = Vec::new();
    out.extend(closure_checks(a, "eq37", "s"));
    out.extend(closure_checks(b, "eq37", "r"));
    let zero = PhasePolynomial::zero();
    for i in 1..=3 {
        for j in 1..=3 {
            out.push(CheckResult::polynomial(
                format!("eq38.s{i}.r{j}"),
                &zero,
                &poisson_bracket(a.component(i), b.component(j)),
            ));
        }
    }
    Ok(out)
}

/// The two-particle function listing under audit assigns, verbatim,
/// `A1 = 1/2*(x*y + px*py)`, `A2 = 1/4*(x^2 - y^2 + px^2 - py^2)` and
/// `A3 = 1/2*(x*py + y*px)` (note the plus sign), with no scale symbol.
fn listed_triple(particle: u32) -> [PhasePolynomial; 3] {
    let x = PhasePolynomial::variable(CanonicalVariable::x(particle));
    let y = PhasePolynomial::variable(CanonicalVariable::y(particle));
    let px = PhasePolynomial::variable(CanonicalVariable::px(particle));
    let py = PhasePolynomial::variable(CanonicalVariable::py(particle));
    let a1 = (&(&x * &y) + &(&px * &py)).scaled(&gauss_rational(1, 2));
    let a2 =
        (&(&(&x * &x) - &(&y * &y)) + &(&(&px * &px) - &(&py * &py))).scaled(&gauss_rational(1, 4));
    let a3 = (&(&x * &py) + &(&y * &px)).scaled(&gauss_rational(1, 2));
    [a1, a2, a3]
}

/// Audits the listed two-particle functions as claims: does the verbatim
/// triple itself close under the bracket, and does its third component agree
/// with the defining `S3`? Both questions are answered by computation; no
/// attempt is made to decide which convention was intended.
pub fn verify_eq36_listing() -> Vec<CheckResult> {
    let triple = listed_triple(1);
    let mut out = Vec::new();
    for (i, j, k) in [(1usize, 2usize, 3usize), (2, 3, 1), (3, 1, 2)] {
        let computed = poisson_bracket(&triple[i - 1], &triple[j - 1]);
        out.push(CheckResult::polynomial(
            format!("eq36.closure.s{i}.s{j}"),
            &triple[k - 1],
            &computed,
        ));
    }
    let canonical = SpinSet::new(1);
    out.push(CheckResult::polynomial(
        "eq36.s3-matches-defining-form",
        &triple[2],
        &canonical
            .s3
            .substitute_kappa(&crate::algebra::rational(1, 1)),
    ));
    out
}
