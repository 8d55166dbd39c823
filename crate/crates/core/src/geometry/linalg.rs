//! Dense linear algebra over the rationals.

use num_traits::{One, Zero};

use super::{sub, QVec, Rational};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[QVec], ncols: usize) -> (Vec<QVec>, Vec<usize>) {
    let mut m: Vec<QVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[QVec], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    let (r, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `rows · x = rhs`, or `None` when inconsistent.
pub fn solve(rows: &[QVec], rhs: &[Rational], ncols: usize) -> Option<QVec> {
    let aug: Vec<QVec> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// The minimum-norm style solution that lies in the row space of `rows`.
pub fn solve_in_row_space(rows: &[QVec], rhs: &[Rational], ncols: usize) -> Option<QVec> {
    // x = rowsᵀ c with (rows rowsᵀ) c = rhs restricted to independent rows.
    let (_, piv_rows) = rref(&transpose(rows, ncols), rows.len());
    let basis: Vec<QVec> = piv_rows.iter().map(|&i| rows[i].clone()).collect();
    let b: Vec<Rational> = piv_rows.iter().map(|&i| rhs[i].clone()).collect();
    let gram: Vec<QVec> = basis
        .iter()
        .map(|u| basis.iter().map(|v| super::dot(u, v)).collect())
        .collect();
    let c = solve(&gram, &b, basis.len())?;
    let mut x = vec![Rational::zero(); ncols];
    for (ci, u) in c.iter().zip(&basis) {
        for (xj, uj) in x.iter_mut().zip(u) {
            *xj += ci * uj;
        }
    }
    // reject inconsistent systems
    for (row, bi) in rows.iter().zip(rhs) {
        if &super::dot(row, &x) != bi {
            return None;
        }
    }
    Some(x)
}

pub fn transpose(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    (0..ncols)
        .map(|c| rows.iter().map(|r| r[c].clone()).collect())
        .collect()
}

pub fn determinant(m: &[QVec]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] * &inv;
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

pub fn inverse(m: &[QVec]) -> Option<Vec<QVec>> {
    let n = m.len();
    let aug: Vec<QVec> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            v
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[QVec], v: &[Rational]) -> QVec {
    m.iter().map(|r| super::dot(r, v)).collect()
}

pub fn mat_mul(a: &[QVec], b: &[QVec]) -> Vec<QVec> {
    let k = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..k)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

/// Dimension of the affine hull; `-1` for the empty set.
pub fn affine_dim(points: &[QVec]) -> isize {
    let Some(p0) = points.first() else {
        return -1;
    };
    let diffs: Vec<QVec> = points[1..].iter().map(|p| sub(p, p0)).collect();
    rank(&diffs, p0.len()) as isize
}

/// Coordinates of `v` in the (linearly independent) `basis`, if `v` lies in
/// its span.
pub fn coordinates(basis: &[QVec], v: &[Rational]) -> Option<QVec> {
    let n = v.len();
    let t = transpose(basis, n);
    solve(&t, v, basis.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{q, qvec};

    #[test]
    fn rank_and_nullspace() {
        let m = vec![qvec(&[1, 2, 3]), qvec(&[2, 4, 6]), qvec(&[0, 1, 1])];
        assert_eq!(rank(&m, 3), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for r in &m {
            assert_eq!(crate::geometry::dot(r, &ns[0]), q(0));
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let m = vec![qvec(&[2, 1]), qvec(&[7, 4])];
        assert_eq!(determinant(&m), q(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![qvec(&[4, -1]), qvec(&[-7, 2])]);
        assert!(inverse(&[qvec(&[1, 2]), qvec(&[2, 4])]).is_none());
    }

    #[test]
    fn row_space_solution_is_unique_choice() {
        let rows = vec![qvec(&[1, 0, 0]), qvec(&[0, 1, 1])];
        let x = solve_in_row_space(&rows, &[q(1), q(2)], 3).unwrap();
        assert_eq!(x, qvec(&[1, 1, 1]));
        assert!(solve_in_row_space(&[qvec(&[1, 1]), qvec(&[2, 2])], &[q(1), q(3)], 2).is_none());
    }

    #[test]
    fn affine_dimension() {
        assert_eq!(affine_dim(&[]), -1);
        assert_eq!(affine_dim(&[qvec(&[1, 1])]), 0);
        assert_eq!(affine_dim(&[qvec(&[0, 0]), qvec(&[1, 1]), qvec(&[2, 2])]), 1);
    }
}
