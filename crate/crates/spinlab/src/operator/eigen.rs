//! Exact linear algebra over Gaussian rationals: reduced row echelon form,
//! nullspaces, and Gram-Schmidt orthogonalization. Sized for the small
//! matrices of the operator representation; everything is exact.

use crate::algebra::{GaussianRational, Rational};
use num_traits::Zero;

pub(crate) type Row = Vec<GaussianRational>;

fn conj(z: &GaussianRational) -> GaussianRational {
    z.conj()
}

/// In-place reduced row echelon form; returns the pivot columns.
pub(crate) fn rref(rows: &mut [Row]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut rank = 0;

    for col in 0..ncols {
        let Some(pivot_row) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);

        let pivot = rows[rank][col].clone();
        for entry in rows[rank].iter_mut() {
            *entry = entry.clone() / pivot.clone();
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (entry, pivot_entry) in row.iter_mut().zip(&pivot_row) {
                    *entry = entry.clone() - factor.clone() * pivot_entry.clone();
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    pivots
}

/// Exact basis of `{ v : M v = 0 }` via back substitution from the reduced
/// form, one basis vector per free column.
pub(crate) fn nullspace(matrix: &[Row], ncols: usize) -> Vec<Row> {
    let mut rows: Vec<Row> = matrix.to_vec();
    let pivots = rref(&mut rows);
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();

    let mut basis = Vec::with_capacity(free_cols.len());
    for &free in &free_cols {
        let mut v: Row = vec![GaussianRational::zero(); ncols];
        v[free] = one();
        for (row_idx, &pivot_col) in pivots.iter().enumerate() {
            // pivot value is 1; the pivot variable balances the free column.
            v[pivot_col] = -rows[row_idx][free].clone();
        }
        basis.push(v);
    }
    basis
}

fn one() -> GaussianRational {
    GaussianRational::new(Rational::from_integer(1.into()), Rational::zero())
}

pub(crate) fn dot_conjugate(a: &[GaussianRational], b: &[GaussianRational]) -> GaussianRational {
    a.iter()
        .zip(b)
        .fold(GaussianRational::zero(), |acc, (x, y)| {
            acc + conj(x) * y.clone()
        })
}

/// Exact Gram-Schmidt without normalization. Zero vectors are dropped, so
/// the output is an orthogonal basis of the same span.
pub(crate) fn orthogonalize(vectors: Vec<Row>) -> Vec<Row> {
    let mut basis: Vec<Row> = Vec::new();
    for mut v in vectors {
        for b in &basis {
            let coeff = dot_conjugate(b, &v) / dot_conjugate(b, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = vi.clone() - coeff.clone() * bi.clone();
            }
        }
        if v.iter().any(|z| !z.is_zero()) {
            basis.push(v);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{gauss_int, gauss_rational};
    use num_traits::Zero;

    fn row(values: &[i64]) -> Row {
        values.iter().map(|&v| gauss_int(v)).collect()
    }

    #[test]
    fn rref_identifies_pivots() {
        let mut rows = vec![row(&[0, 2, 4]), row(&[1, 1, 1])];
        let pivots = rref(&mut rows);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rows[0], row(&[1, 0, -1]));
        assert_eq!(rows[1], row(&[0, 1, 2]));
    }

    #[test]
    fn nullspace_of_rank_one_matrix() {
        // x + y + z = 0 has a two-dimensional solution space.
        let m = vec![row(&[1, 1, 1])];
        let basis = nullspace(&m, 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            let sum = v.iter().cloned().reduce(|a, b| a + b).unwrap();
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn nullspace_of_full_rank_matrix_is_empty() {
        let m = vec![row(&[1, 0]), row(&[0, 1])];
        assert!(nullspace(&m, 2).is_empty());
    }

    #[test]
    fn orthogonalize_produces_pairwise_orthogonal_vectors() {
        let vs = vec![row(&[1, 1, 0]), row(&[1, 0, 1])];
        let basis = orthogonalize(vs);
        assert_eq!(basis.len(), 2);
        assert!(dot_conjugate(&basis[0], &basis[1]).is_zero());
    }

    #[test]
    fn orthogonalize_drops_dependent_vectors() {
        let vs = vec![row(&[1, 2]), vec![gauss_rational(1, 2), gauss_int(1)]];
        assert_eq!(orthogonalize(vs).len(), 1);
    }
}
