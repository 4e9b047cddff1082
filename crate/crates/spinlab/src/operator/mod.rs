//! Active-view matrix representation: Pauli and ladder matrices with exact
//! Gaussian-rational entries, tensor products, joint diagonalization, and
//! the exchange-antisymmetric singlet selection.
//!
//! The reduced Planck constant is carried as an integer grading
//! (`hbar_power`); entries hold the rational part. Two operators are equal
//! when their entries agree and their gradings agree (a zero matrix at any
//! grading equals zero). The audited source text is internally inconsistent
//! about factors of `i`, 2 and the constant itself, so the constructors
//! expose both the standard convention and the verbatim variants and leave
//! the comparison to the audit.

mod eigen;

use crate::algebra::{gauss_i, gauss_int, gauss_rational, GaussianRational, Rational};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),
    #[error("grading mismatch: hbar^{0} vs hbar^{1}")]
    GradingMismatch(i32, i32),
    #[error("pauli index must be 1, 2 or 3, got {0}")]
    InvalidPauliIndex(u8),
    #[error("operators do not commute: pair ({0}, {1})")]
    NonCommuting(usize, usize),
    #[error("joint eigenproblem needs at least one operator")]
    EmptyProblem,
    #[error("matrix is not diagonal; exact eigenvalue listing unsupported")]
    NotDiagonal,
    #[error("no doubly degenerate eigenvalue in the diagonal spectrum")]
    NoDegeneratePair,
}

/// Dense complex matrix with exact Gaussian-rational entries and an integer
/// power of the reduced Planck constant as grading.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<GaussianRational>,
    hbar_power: i32,
}

impl PartialEq for OperatorMatrix {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        if self.entries != other.entries {
            return false;
        }
        self.hbar_power == other.hbar_power || self.is_zero()
    }
}

impl Eq for OperatorMatrix {}

impl OperatorMatrix {
    pub fn zero(dim: usize) -> Self {
        OperatorMatrix {
            dim,
            entries: vec![GaussianRational::zero(); dim * dim],
            hbar_power: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            *m.at_mut(i, i) = GaussianRational::one();
        }
        m
    }

    /// Row-major construction.
    pub fn from_rows(rows: Vec<Vec<GaussianRational>>, hbar_power: i32) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        OperatorMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
            hbar_power,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar_power(&self) -> i32 {
        self.hbar_power
    }

    pub fn at(&self, row: usize, col: usize) -> &GaussianRational {
        &self.entries[row * self.dim + col]
    }

    fn at_mut(&mut self, row: usize, col: usize) -> &mut GaussianRational {
        &mut self.entries[row * self.dim + col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.at(r, c).is_zero()))
    }

    /// Diagonal entries when the matrix is diagonal.
    pub fn diagonal(&self) -> Result<Vec<GaussianRational>, OperatorError> {
        if !self.is_diagonal() {
            return Err(OperatorError::NotDiagonal);
        }
        Ok((0..self.dim).map(|i| self.at(i, i).clone()).collect())
    }

    pub fn scaled(&self, factor: &GaussianRational) -> Self {
        OperatorMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|z| z.clone() * factor.clone())
                .collect(),
            hbar_power: self.hbar_power,
        }
    }

    /// Shifts the hbar grading, leaving entries untouched.
    pub fn with_hbar_shift(&self, delta: i32) -> Self {
        OperatorMatrix {
            hbar_power: self.hbar_power + delta,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, OperatorError> {
        if self.dim != other.dim {
            return Err(OperatorError::DimensionMismatch(self.dim, other.dim));
        }
        // Zero is the identity of addition at any grading.
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.hbar_power != other.hbar_power {
            return Err(OperatorError::GradingMismatch(
                self.hbar_power,
                other.hbar_power,
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(OperatorMatrix {
            dim: self.dim,
            entries,
            hbar_power: self.hbar_power,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, OperatorError> {
        self.add(&other.negated())
    }

    pub fn negated(&self) -> Self {
        OperatorMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| -z.clone()).collect(),
            hbar_power: self.hbar_power,
        }
    }

    /// Exact matrix product. Gradings add.
    pub fn mul(&self, other: &Self) -> Result<Self, OperatorError> {
        if self.dim != other.dim {
            return Err(OperatorError::DimensionMismatch(self.dim, other.dim));
        }
        let dim = self.dim;
        let mut out = OperatorMatrix::zero(dim);
        out.hbar_power = self.hbar_power + other.hbar_power;
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = GaussianRational::zero();
                for k in 0..dim {
                    acc += self.at(r, k).clone() * other.at(k, c).clone();
                }
                *out.at_mut(r, c) = acc;
            }
        }
        Ok(out)
    }

    /// Conjugate transpose; grading unchanged.
    pub fn adjoint(&self) -> Self {
        let mut out = OperatorMatrix::zero(self.dim);
        out.hbar_power = self.hbar_power;
        for r in 0..self.dim {
            for c in 0..self.dim {
                *out.at_mut(c, r) = self.at(r, c).conj();
            }
        }
        out
    }

    /// Matrix-vector product with exact entries.
    pub fn apply(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(v.len(), self.dim, "vector length must match dimension");
        (0..self.dim)
            .map(|r| {
                (0..self.dim).fold(GaussianRational::zero(), |acc, c| {
                    acc + self.at(r, c).clone() * v[c].clone()
                })
            })
            .collect()
    }

    /// Compact text form: `h^p*[[a, b], [c, d]]` with `a+bi` rational
    /// entries, the prefix omitted at grading zero.
    pub fn to_text(&self) -> String {
        let rows: Vec<String> = (0..self.dim)
            .map(|r| {
                let cols: Vec<String> = (0..self.dim)
                    .map(|c| format_gaussian(self.at(r, c)))
                    .collect();
                format!("[{}]", cols.join(", "))
            })
            .collect();
        let body = format!("[{}]", rows.join(", "));
        match self.hbar_power {
            0 => body,
            1 => format!("h*{}", body),
            p => format!("h^{}*{}", p, body),
        }
    }

    /// JSON value: row-major entry strings plus the grading.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "hbarPower": self.hbar_power,
            "entries": self
                .entries
                .iter()
                .map(format_gaussian)
                .collect::<Vec<String>>(),
        })
    }
}

impl fmt::Display for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `a+bi` with exact rational parts: "0", "1/2", "-i", "1/2-3/4i".
pub fn format_gaussian(z: &GaussianRational) -> String {
    if z.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    if !z.re.is_zero() {
        out.push_str(&z.re.to_string());
    }
    if !z.im.is_zero() {
        let magnitude = z.im.abs();
        if z.im.is_negative() {
            out.push('-');
        } else if !z.re.is_zero() {
            out.push('+');
        }
        if !magnitude.is_one() {
            out.push_str(&magnitude.to_string());
        }
        out.push('i');
    }
    out
}

/// The standard Pauli matrix, grading zero.
pub fn pauli(k: u8) -> Result<OperatorMatrix, OperatorError> {
    let (one, i) = (gauss_int(1), gauss_i());
    let zero = GaussianRational::zero;
    let rows = match k {
        1 => vec![vec![zero(), one.clone()], vec![one, zero()]],
        2 => vec![vec![zero(), -i.clone()], vec![i, zero()]],
        3 => vec![vec![one.clone(), zero()], vec![zero(), -one]],
        other => return Err(OperatorError::InvalidPauliIndex(other)),
    };
    Ok(OperatorMatrix::from_rows(rows, 0))
}

/// Which normalization of the spin matrices to construct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinConvention {
    /// `S_k = (hbar/2) sigma_k` for all three components.
    Standard,
    /// The audited listing, which carries an extra `-i` on the second
    /// component: `S_2 = -i (hbar/2) sigma_2`.
    PaperEq22,
}

/// The three spin matrices under the requested convention, grading one.
pub fn spin_operators(convention: SpinConvention) -> [OperatorMatrix; 3] {
    let half = gauss_rational(1, 2);
    let base = |k: u8| {
        pauli(k)
            .expect("static index")
            .scaled(&half)
            .with_hbar_shift(1)
    };
    let mut ops = [base(1), base(2), base(3)];
    if convention == SpinConvention::PaperEq22 {
        ops[1] = ops[1].scaled(&-gauss_i());
    }
    ops
}

/// Where the ladder matrices come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderSource {
    /// `S+- = S1 +- i S2` computed from the standard spin matrices,
    /// giving `hbar`-scaled off-diagonal raising/lowering matrices.
    FromSpinFunctions,
    /// The verbatim matrices of the audited listing, scaled by `hbar/2`
    /// and with the raising matrix lower-triangular.
    PaperEq24,
}

impl fmt::Display for LadderSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderSource::FromSpinFunctions => f.write_str("from-spin-functions"),
            LadderSource::PaperEq24 => f.write_str("paper-eq24"),
        }
    }
}

/// The ladder pair `(S+, S-)` under the requested source.
pub fn ladder_matrices(source: LadderSource) -> (OperatorMatrix, OperatorMatrix) {
    match source {
        LadderSource::FromSpinFunctions => {
            let [s1, s2, _] = spin_operators(SpinConvention::Standard);
            let i_s2 = s2.scaled(&gauss_i());
            let plus = s1.add(&i_s2).expect("same grading");
            let minus = s1.sub(&i_s2).expect("same grading");
            (plus, minus)
        }
        LadderSource::PaperEq24 => {
            let half = gauss_rational(1, 2);
            let zero = GaussianRational::zero;
            let one = gauss_int(1);
            let plus =
                OperatorMatrix::from_rows(vec![vec![zero(), zero()], vec![one.clone(), zero()]], 1)
                    .scaled(&half);
            let minus = OperatorMatrix::from_rows(vec![vec![zero(), one], vec![zero(), zero()]], 1)
                .scaled(&half);
            (plus, minus)
        }
    }
}

/// `AB - BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix, OperatorError> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// `AB + BA`.
pub fn anti_commutator(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
) -> Result<OperatorMatrix, OperatorError> {
    a.mul(b)?.add(&b.mul(a)?)
}

/// `N = S+ S-`.
pub fn number_operator(
    plus: &OperatorMatrix,
    minus: &OperatorMatrix,
) -> Result<OperatorMatrix, OperatorError> {
    plus.mul(minus)
}

/// Kronecker product; the left factor is the first tensor slot, so basis
/// vector `|s> (x) |r>` maps to index `2s + r` for qubit factors.
pub fn tensor_product(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let dim = a.dim() * b.dim();
    let mut out = OperatorMatrix::zero(dim);
    out.hbar_power = a.hbar_power + b.hbar_power;
    for ar in 0..a.dim() {
        for ac in 0..a.dim() {
            for br in 0..b.dim() {
                for bc in 0..b.dim() {
                    *out.at_mut(ar * b.dim() + br, ac * b.dim() + bc) =
                        a.at(ar, ac).clone() * b.at(br, bc).clone();
                }
            }
        }
    }
    out
}

/// Places `a` in the given 1-based slot of an `n_slots`-fold tensor space,
/// identities (at grading zero) elsewhere.
pub fn embed(a: &OperatorMatrix, slot: usize, n_slots: usize) -> OperatorMatrix {
    assert!(slot >= 1 && slot <= n_slots, "slot out of range");
    let mut out: Option<OperatorMatrix> = None;
    for s in 1..=n_slots {
        let factor = if s == slot {
            a.clone()
        } else {
            OperatorMatrix::identity(a.dim())
        };
        out = Some(match out {
            None => factor,
            Some(acc) => tensor_product(&acc, &factor),
        });
    }
    out.expect("n_slots >= 1")
}

/// Exact vector over Gaussian rationals, used for eigenspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactVector {
    pub entries: Vec<GaussianRational>,
}

impl ExactVector {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.is_zero())
    }

    /// Squared Euclidean norm, an exact nonnegative rational.
    pub fn norm_squared(&self) -> Rational {
        self.entries
            .iter()
            .map(|z| z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone())
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Hermitian inner product `<self, other>`.
    pub fn dot(&self, other: &ExactVector) -> GaussianRational {
        eigen::dot_conjugate(&self.entries, &other.entries)
    }

    /// Unit-norm floating view of the exact direction.
    pub fn unit(&self) -> Vec<Complex64> {
        let norm = self
            .norm_squared()
            .to_f64()
            .map(f64::sqrt)
            .unwrap_or(f64::NAN);
        self.entries
            .iter()
            .map(|z| {
                Complex64::new(
                    z.re.to_f64().unwrap_or(f64::NAN) / norm,
                    z.im.to_f64().unwrap_or(f64::NAN) / norm,
                )
            })
            .collect()
    }

    /// Canonical phase: scaled so the first nonzero entry is 1.
    pub fn canonical(&self) -> ExactVector {
        let Some(first) = self.entries.iter().find(|z| !z.is_zero()) else {
            return self.clone();
        };
        let inv = first.clone();
        ExactVector {
            entries: self
                .entries
                .iter()
                .map(|z| z.clone() / inv.clone())
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(format_gaussian).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for ExactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Simultaneous eigenproblem: one target eigenvalue per operator. Target
/// values are the rational parts; each operator contributes at its own
/// grading (a target `t` for an operator at grading `p` means `t * hbar^p`).
#[derive(Clone, Debug)]
pub struct JointEigenproblem {
    pub operators: Vec<OperatorMatrix>,
    pub targets: Vec<GaussianRational>,
}

/// Orthogonal exact basis of the intersection of the target eigenspaces.
/// Operators must share a dimension and commute pairwise (checked exactly).
/// An empty intersection yields an empty list.
pub fn joint_eigenspace(problem: &JointEigenproblem) -> Result<Vec<ExactVector>, OperatorError> {
    let ops = &problem.operators;
    if ops.is_empty() {
        return Err(OperatorError::EmptyProblem);
    }
    let dim = ops[0].dim();
    for op in ops.iter() {
        if op.dim() != dim {
            return Err(OperatorError::DimensionMismatch(dim, op.dim()));
        }
    }
    for i in 0..ops.len() {
        for j in (i + 1)..ops.len() {
            if !commutator(&ops[i], &ops[j])?.is_zero() {
                return Err(OperatorError::NonCommuting(i, j));
            }
        }
    }
    assert_eq!(
        problem.targets.len(),
        ops.len(),
        "one target per operator required"
    );

    // Stack (A_j - lambda_j I) and take the common nullspace.
    let mut rows: Vec<Vec<GaussianRational>> = Vec::with_capacity(ops.len() * dim);
    for (op, target) in ops.iter().zip(&problem.targets) {
        for r in 0..dim {
            let mut row: Vec<GaussianRational> = (0..dim).map(|c| op.at(r, c).clone()).collect();
            row[r] = row[r].clone() - target.clone();
            rows.push(row);
        }
    }
    let basis = eigen::nullspace(&rows, dim);
    let basis = eigen::orthogonalize(basis);
    Ok(basis
        .into_iter()
        .map(|entries| ExactVector { entries })
        .collect())
}

/// The particle-exchange operator `P |s>|r> = |r>|s>` on the two-qubit space.
pub fn exchange_operator() -> OperatorMatrix {
    let mut p = OperatorMatrix::zero(4);
    let one = gauss_int(1);
    *p.at_mut(0, 0) = one.clone();
    *p.at_mut(1, 2) = one.clone();
    *p.at_mut(2, 1) = one.clone();
    *p.at_mut(3, 3) = one;
    p
}

/// Everything the exclusion derivation produces, for reporting.
#[derive(Clone, Debug)]
pub struct ExclusionOutcome {
    pub source: LadderSource,
    /// Dimension of the joint eigenspace the selection ran in.
    pub joint_dimension: usize,
    /// Exchange-antisymmetric member, canonical phase (0, 1, -1, 0).
    pub singlet: ExactVector,
    /// The rejected exchange-symmetric partner, canonical phase.
    pub rejected_partner: ExactVector,
    pub rejected_reason: &'static str,
    /// Combined axis operator, for eigenvalue checks.
    pub total_s3: OperatorMatrix,
}

/// Runs the full derivation: joint-diagonalize `S3 + R3` at eigenvalue zero
/// together with `N_total` at its doubly degenerate level, then select the
/// exchange-antisymmetric member of the resulting plane.
pub fn exclusion_singlet(source: LadderSource) -> Result<ExclusionOutcome, OperatorError> {
    let s3 = spin_operators(SpinConvention::Standard)[2].clone();
    let total_s3 = embed(&s3, 1, 2).add(&embed(&s3, 2, 2))?;

    let (plus, minus) = ladder_matrices(source);
    let n_single = number_operator(&plus, &minus)?;
    let n_total = embed(&n_single, 1, 2).add(&embed(&n_single, 2, 2))?;

    let middle = doubly_degenerate_eigenvalue(&n_total)?;
    let problem = JointEigenproblem {
        operators: vec![total_s3.clone(), n_total],
        targets: vec![GaussianRational::zero(), middle],
    };
    let basis = joint_eigenspace(&problem)?;
    let joint_dimension = basis.len();

    // Split the joint eigenspace by exchange parity.
    let p = exchange_operator();
    let antisymmetric = parity_member(&basis, &p, -1);
    let symmetric = parity_member(&basis, &p, 1);

    Ok(ExclusionOutcome {
        source,
        joint_dimension,
        singlet: antisymmetric.canonical(),
        rejected_partner: symmetric.canonical(),
        rejected_reason: "exchange-symmetric",
        total_s3,
    })
}

/// The unique (up to scale) member of the span with `P v = sign * v`,
/// found exactly by solving in the coordinates of the basis.
fn parity_member(basis: &[ExactVector], p: &OperatorMatrix, sign: i64) -> ExactVector {
    let dim = basis.len();
    // Matrix of P restricted to the span, in the given orthogonal basis.
    let mut restricted: Vec<Vec<GaussianRational>> = vec![Vec::with_capacity(dim); dim];
    for (col, b) in basis.iter().enumerate() {
        let image = p.apply(&b.entries);
        let image = ExactVector { entries: image };
        for (row, a) in basis.iter().enumerate() {
            let coeff = a.dot(&image) / a.dot(a);
            restricted[row].resize(dim, GaussianRational::zero());
            restricted[row][col] = coeff;
        }
    }
    // (P_restricted - sign I) v = 0
    for (r, row) in restricted.iter_mut().enumerate() {
        row[r] = row[r].clone() - gauss_int(sign);
    }
    let coords = eigen::nullspace(&restricted, dim);
    let coords = coords.first().expect("parity eigenvector exists");

    let total_dim = basis[0].dim();
    let mut entries = vec![GaussianRational::zero(); total_dim];
    for (c, b) in coords.iter().zip(basis) {
        for (e, be) in entries.iter_mut().zip(&b.entries) {
            *e = e.clone() + c.clone() * be.clone();
        }
    }
    ExactVector { entries }
}

/// The eigenvalue of a diagonal matrix that occurs exactly twice.
pub fn doubly_degenerate_eigenvalue(m: &OperatorMatrix) -> Result<GaussianRational, OperatorError> {
    let diag = m.diagonal()?;
    for value in &diag {
        let count = diag.iter().filter(|v| *v == value).count();
        if count == 2 {
            return Ok(value.clone());
        }
    }
    Err(OperatorError::NoDegeneratePair)
}
