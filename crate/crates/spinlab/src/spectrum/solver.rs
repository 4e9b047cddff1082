//! Lowest eigenpairs of a large symmetric operator given only its
//! matrix-vector product: Lanczos with full reorthogonalization, restarted
//! with deflation so degenerate levels are recovered copy by copy. All
//! randomness comes from a fixed-seed generator, so results are
//! deterministic for a fixed problem.

use super::SpectrumError;
use nalgebra::DMatrix;

pub(crate) struct EigenPairs {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Matching unit eigenvectors.
    pub vectors: Vec<Vec<f64>>,
}

/// Splitmix-style deterministic generator for start vectors.
pub(crate) struct DeterministicRng(u64);

impl DeterministicRng {
    pub fn new(seed: u64) -> Self {
        DeterministicRng(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn next_symmetric(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Removes the components of `v` along every vector in `basis` (assumed
/// orthonormal). Run twice for a clean full reorthogonalization.
fn orthogonalize_against(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        axpy(-c, b, v);
    }
}

/// Finds the `want` lowest eigenpairs of the operator defined by `matvec`.
///
/// Each pass runs plain Lanczos on the operator deflated by the already
/// converged eigenvectors, so a fresh pass converges the smallest eigenvalue
/// not yet found; that is what makes degenerate multiplets reachable one
/// copy at a time. Passes continue until one certifies that no eigenvalue
/// below the current `want`-th found value remains.
pub(crate) fn lowest_eigenpairs(
    matvec: &dyn Fn(&[f64], &mut [f64]),
    dim: usize,
    want: usize,
    residual_tol: f64,
) -> Result<EigenPairs, SpectrumError> {
    assert!(want >= 1 && want <= dim);
    let max_basis = dim.min(450.max(8 * want));
    let max_passes = want + 3;

    let mut converged_values: Vec<f64> = Vec::new();
    let mut converged_vectors: Vec<Vec<f64>> = Vec::new();
    let mut certified = false;

    for pass in 0..max_passes {
        if converged_values.len() >= dim {
            certified = true;
            break;
        }
        let pass_lowest = run_pass(
            matvec,
            dim,
            max_basis,
            pass as u64,
            &mut converged_values,
            &mut converged_vectors,
        );
        let Some(pass_lowest) = pass_lowest else {
            // The pass converged nothing new; a further restart cannot do
            // better within the same budget.
            break;
        };
        if converged_values.len() >= want {
            let mut sorted = converged_values.clone();
            sorted.sort_by(f64::total_cmp);
            let cutoff = sorted[want - 1];
            // `pass_lowest` is the smallest eigenvalue that was still
            // missing when the pass started. Once it lies above the cutoff,
            // the `want` lowest are complete (the margin only has to sit
            // below the spectral gaps, far above the roundoff spread of an
            // exactly degenerate pair).
            if pass_lowest > cutoff + 1e-6 * cutoff.abs().max(1.0) {
                certified = true;
                break;
            }
        }
    }

    if converged_values.len() < want || !certified {
        return Err(SpectrumError::NonConvergence {
            found: converged_values.len().min(want),
            wanted: want,
        });
    }

    // Sort ascending and keep the lowest `want`.
    let mut order: Vec<usize> = (0..converged_values.len()).collect();
    order.sort_by(|&a, &b| converged_values[a].total_cmp(&converged_values[b]));
    let mut values = Vec::with_capacity(want);
    let mut vectors = Vec::with_capacity(want);
    for &idx in order.iter().take(want) {
        values.push(converged_values[idx]);
        vectors.push(converged_vectors[idx].clone());
    }

    // Final residual validation against the requested tolerance.
    let mut image = vec![0.0; dim];
    for (value, vector) in values.iter().zip(&vectors) {
        matvec(vector, &mut image);
        let mut residual = image.clone();
        axpy(-value, vector, &mut residual);
        let r = norm(&residual) / norm(vector);
        if r > residual_tol {
            return Err(SpectrumError::ResidualTooLarge {
                eigenvalue: *value,
                residual: r,
                tolerance: residual_tol,
            });
        }
    }

    Ok(EigenPairs { values, vectors })
}

/// One deflated Lanczos pass. Converged Ritz pairs are appended to the
/// deflation set. Returns the smallest Ritz value of the deflated operator
/// when the pass managed to converge it, which certifies that nothing
/// smaller was missing when the pass began.
fn run_pass(
    matvec: &dyn Fn(&[f64], &mut [f64]),
    dim: usize,
    max_basis: usize,
    pass: u64,
    converged_values: &mut Vec<f64>,
    converged_vectors: &mut Vec<Vec<f64>>,
) -> Option<f64> {
    let mut rng = DeterministicRng::new(0x5313_5053_u64 ^ (pass.wrapping_mul(0x1234_5677)));
    let mut v: Vec<f64> = (0..dim).map(|_| rng.next_symmetric()).collect();
    orthogonalize_against(&mut v, converged_vectors);
    orthogonalize_against(&mut v, converged_vectors);
    let n = norm(&v);
    if n < 1e-12 {
        return None;
    }
    for vi in v.iter_mut() {
        *vi /= n;
    }

    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut image = vec![0.0; dim];

    let budget = max_basis.min(dim.saturating_sub(converged_vectors.len()));
    // The residual bound below equals the true residual norm of a Ritz
    // pair, so converging it under 1e-9 leaves headroom against the 1e-8
    // contract even after assembly roundoff.
    let bound_tol = 1e-9;

    loop {
        let j = alphas.len();
        let vj = basis[j].clone();
        matvec(&vj, &mut image);
        let mut w = image.clone();
        if j > 0 {
            axpy(-betas[j - 1], &basis[j - 1], &mut w);
        }
        let alpha = dot(&w, &vj);
        axpy(-alpha, &vj, &mut w);
        alphas.push(alpha);

        // Full reorthogonalization against the pass basis and the deflated
        // eigenvectors, twice.
        for _ in 0..2 {
            orthogonalize_against(&mut w, &basis);
            orthogonalize_against(&mut w, converged_vectors);
        }

        let beta = norm(&w);
        let m = alphas.len();
        let out_of_budget = m >= budget || beta < 1e-12;
        let check_now = out_of_budget || (m >= 20 && m.is_multiple_of(25));

        if check_now {
            let (ritz_values, ritz_coeffs) = tridiagonal_eigen(&alphas, &betas);
            let bound = |idx: usize| {
                if beta < 1e-12 {
                    0.0
                } else {
                    (beta * ritz_coeffs[(m - 1, idx)]).abs()
                }
            };
            // A pass ends when its smallest Ritz value has converged (its
            // job) or the budget ran out; extraction must coincide with the
            // end of the pass because deflating mid-recurrence would break
            // the three-term relation.
            let lowest_converged = bound(0) <= bound_tol;
            if lowest_converged || out_of_budget {
                for (idx, &theta) in ritz_values.iter().enumerate() {
                    if bound(idx) > bound_tol {
                        continue;
                    }
                    let mut y = vec![0.0; dim];
                    for (col, base) in basis.iter().enumerate() {
                        axpy(ritz_coeffs[(col, idx)], base, &mut y);
                    }
                    orthogonalize_against(&mut y, converged_vectors);
                    let n = norm(&y);
                    if n > 1e-6 {
                        for yi in y.iter_mut() {
                            *yi /= n;
                        }
                        converged_values.push(theta);
                        converged_vectors.push(y);
                    }
                }
                return lowest_converged.then(|| ritz_values[0]);
            }
        }
        if out_of_budget {
            return None;
        }

        betas.push(beta);
        for wi in w.iter_mut() {
            *wi /= beta;
        }
        basis.push(w.clone());
    }
}

/// Dense eigendecomposition of the symmetric tridiagonal Lanczos matrix.
/// Returns ascending eigenvalues and the matching eigenvector matrix.
fn tridiagonal_eigen(alphas: &[f64], betas: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for (i, &a) in alphas.iter().enumerate() {
        t[(i, i)] = a;
    }
    for (i, &b) in betas.iter().enumerate().take(m.saturating_sub(1)) {
        t[(i, i + 1)] = b;
        t[(i + 1, i)] = b;
    }
    let eig = t.symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<f64>::zeros(m, m);
    for (new_col, &old_col) in order.iter().enumerate() {
        vectors.set_column(new_col, &eig.eigenvectors.column(old_col));
    }
    (values, vectors)
}
