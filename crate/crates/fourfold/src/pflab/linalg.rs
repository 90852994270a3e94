//! Dense exact linear algebra over any [`Field`]: elimination-based
//! determinant, rank, kernel, and reduced row echelon form.

use crate::scalar::Field;

pub type Matrix<F> = Vec<Vec<F>>;

/// Determinant by fraction-free-enough Gaussian elimination (the field is
/// exact, so plain elimination is exact).
pub fn det<F: Field>(m: &Matrix<F>) -> F {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a square matrix");
    let mut a = m.clone();
    let mut sign_flip = false;
    let mut acc = F::one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(r) => r,
            None => return F::zero(),
        };
        if pivot_row != col {
            a.swap(pivot_row, col);
            sign_flip = !sign_flip;
        }
        let pivot = a[col][col].clone();
        acc = acc * pivot.clone();
        let pinv = pivot.inv().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() * pinv.clone();
            for c in col..n {
                let sub = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - sub;
            }
        }
    }
    if sign_flip {
        -acc
    } else {
        acc
    }
}

/// Row-reduce in place; returns pivot column indices.
pub fn row_reduce<F: Field>(a: &mut Matrix<F>) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pr, row);
        let pinv = a[row][col].inv().expect("nonzero pivot");
        for c in col..cols {
            a[row][c] = a[row][c].clone() * pinv.clone();
        }
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..cols {
                    let sub = factor.clone() * a[row][c].clone();
                    a[r][c] = a[r][c].clone() - sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut a = m.clone();
    row_reduce(&mut a).len()
}

/// Basis of the right kernel `{v : M v = 0}`.
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut a = m.clone();
    let pivots = row_reduce(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![F::zero(); cols];
        v[fc] = F::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[ri][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Reduced row echelon form of a full-rank matrix of row vectors; canonical
/// representative of the row span.
pub fn rref<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let mut a = m.clone();
    row_reduce(&mut a);
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, F7, Rat};
    use num_traits::{One, Zero};

    #[test]
    fn det_rational() {
        let m: Matrix<Rat> = vec![
            vec![rat(2), rat(1)],
            vec![rat(7), rat(4)],
        ];
        assert_eq!(det(&m), rat(1));
        let singular: Matrix<Rat> = vec![
            vec![rat(1), rat(2)],
            vec![rat(2), rat(4)],
        ];
        assert_eq!(det(&singular), rat(0));
    }

    #[test]
    fn det_sign_under_swap() {
        let m: Matrix<Rat> = vec![
            vec![rat(0), rat(1)],
            vec![rat(1), rat(0)],
        ];
        assert_eq!(det(&m), rat(-1));
    }

    #[test]
    fn kernel_over_f7() {
        // rank-1 matrix: kernel has dimension 2
        let row = [F7::new(1), F7::new(2), F7::new(3)];
        let m: Matrix<F7> = vec![row.to_vec(), row.iter().map(|&x| x + x).collect()];
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = (0..3).fold(F7::new(0), |acc, i| acc + row[i] * v[i]);
            assert_eq!(dot, F7::new(0));
        }
    }

    #[test]
    fn rref_is_canonical() {
        // two bases of the same plane in F_7^3 reduce identically
        let a: Matrix<F7> = vec![
            vec![F7::new(1), F7::new(2), F7::new(3)],
            vec![F7::new(0), F7::new(1), F7::new(5)],
        ];
        let b: Matrix<F7> = vec![
            vec![F7::new(2), F7::new(5), F7::new(4)],
            vec![F7::new(3), F7::new(0), F7::new(1)],
        ];
        // b rows are combinations of a rows iff spans agree; check via rank
        let mut stacked = a.clone();
        stacked.extend(b.clone());
        if rank(&stacked) == 2 {
            assert_eq!(rref(&a), rref(&b));
        }
    }

    #[test]
    fn rank_of_identity() {
        let id: Matrix<F7> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { F7::one() } else { F7::zero() }).collect())
            .collect();
        assert_eq!(rank(&id), 4);
        assert_eq!(det(&id), F7::one());
    }
}
