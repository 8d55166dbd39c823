//! Integer matrices: Hermite and Smith normal forms, saturated kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{primitive, QVec, ZVec};

/// Dense matrix of arbitrary-precision integers, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<ZVec>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(cols: usize, entries: Vec<ZVec>) -> Self {
        debug_assert!(entries.iter().all(|r| r.len() == cols));
        IntegerMatrix { rows: entries.len(), cols, entries }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.entries[i][j].clone()).collect())
            .collect();
        IntegerMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i][j] += a * &other.entries[k][j];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntegerMatrix) -> IntegerMatrix {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        IntegerMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.entries[i][j] == BigInt::from((i == j) as i32)))
    }

    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let q: Vec<QVec> = self.entries.iter().map(|r| super::zvec_to_q(r)).collect();
        super::linalg::determinant(&q).to_integer()
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).ok()).collect())
            .collect()
    }
}

/// Row-style Hermite normal form: nonzero rows first, pivots strictly
/// increasing and positive, entries above each pivot reduced into
/// `[0, pivot)`. Returns the form and the unimodular transform `U` with
/// `U · A = H`.
pub fn hermite_normal_form(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let mut h = a.entries.clone();
    let mut u = IntegerMatrix::identity(a.rows).entries;
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let mut best: Option<usize> = None;
            for i in r..a.rows {
                if !h[i][c].is_zero() && best.is_none_or(|b| h[i][c].abs() < h[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..a.rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let f = h[i][c].div_floor(&h[r][c]);
                row_axpy(&mut h, i, r, &f);
                row_axpy(&mut u, i, r, &f);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let f = h[i][c].div_floor(&h[r][c]);
            if !f.is_zero() {
                row_axpy(&mut h, i, r, &f);
                row_axpy(&mut u, i, r, &f);
            }
        }
        r += 1;
    }
    (
        IntegerMatrix { rows: a.rows, cols: a.cols, entries: h },
        IntegerMatrix { rows: a.rows, cols: a.rows, entries: u },
    )
}

// row[i] -= f * row[j]
fn row_axpy(m: &mut [ZVec], i: usize, j: usize, f: &BigInt) {
    let (src, dst) = if i < j {
        let (a, b) = m.split_at_mut(j);
        (&b[0], &mut a[i])
    } else {
        let (a, b) = m.split_at_mut(i);
        (&a[j], &mut b[0])
    };
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= f * s;
        }
    }
}

/// Basis of the integer kernel `{x ∈ Z^n : A x = 0}` in Hermite form.
pub fn integer_kernel(a: &IntegerMatrix) -> IntegerMatrix {
    let n = a.cols;
    // Row reduce [Aᵀ | I]; rows whose left part vanishes span the kernel.
    let at = a.transpose();
    let aug: Vec<ZVec> = (0..n)
        .map(|i| {
            let mut row = at.entries[i].clone();
            row.extend((0..n).map(|j| BigInt::from((i == j) as i32)));
            row
        })
        .collect();
    let (h, _) = hermite_normal_form(&IntegerMatrix::from_rows(a.rows + n, aug));
    let ker: Vec<ZVec> = h
        .entries
        .into_iter()
        .filter(|row| row[..a.rows].iter().all(|x| x.is_zero()) && row[a.rows..].iter().any(|x| !x.is_zero()))
        .map(|row| row[a.rows..].to_vec())
        .collect();
    let k = IntegerMatrix::from_rows(n, ker);
    let (hk, _) = hermite_normal_form(&k);
    IntegerMatrix::from_rows(n, hk.entries.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect())
}

/// Hermite-reduced basis of the saturated lattice `{x ∈ Z^d : ⟨m,x⟩ = 0 ∀m}`.
pub fn saturated_perp_basis(ms: &[QVec], d: usize) -> IntegerMatrix {
    if ms.is_empty() {
        return IntegerMatrix::identity(d);
    }
    let rows: Vec<ZVec> = ms.iter().map(|m| primitive(m)).collect();
    integer_kernel(&IntegerMatrix::from_rows(d, rows))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero elementary divisors `d₁ | d₂ | …`.
    pub divisors: Vec<BigInt>,
    pub rank: usize,
}

/// Elementary divisors of an integer matrix.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithForm {
    let mut m = a.entries.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let f = m[i][t].div_floor(&m[t][t]);
                row_axpy(&mut m, i, t, &f);
                if !m[i][t].is_zero() {
                    clean = false;
                    m.swap(t, i);
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let f = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut() {
                    let s = row[t].clone();
                    if !s.is_zero() {
                        row[j] -= &f * s;
                    }
                }
                if !m[t][j].is_zero() {
                    clean = false;
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the rest of the block
            let p = m[t][t].clone();
            let bad = (t + 1..rows).find_map(|i| (t + 1..cols).find(|&j| !m[i][j].is_multiple_of(&p)).map(|j| (i, j)));
            match bad {
                Some((i, _)) => {
                    // add row i to row t and redo
                    let (a, b) = m.split_at_mut(i);
                    for (x, y) in a[t].iter_mut().zip(&b[0]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        divisors.push(m[t][t].abs());
        t += 1;
    }
    let rank = divisors.len();
    SmithForm { divisors, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::qvec;

    fn divs(m: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntegerMatrix::from_i64(m))
            .divisors
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn smith_examples() {
        assert_eq!(divs(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), vec![1, 1, 1]);
        assert_eq!(divs(&[vec![2, 0], vec![0, 4]]), vec![2, 4]);
        assert_eq!(divs(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(divs(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(divs(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(divs(&[vec![12, 0, 0], vec![0, 12, 0]]), vec![12, 12]);
    }

    #[test]
    fn perp_basis_examples() {
        let b = saturated_perp_basis(&[qvec(&[1, 0, 0])], 3);
        assert_eq!(b, IntegerMatrix::from_i64(&[vec![0, 1, 0], vec![0, 0, 1]]));
        let b = saturated_perp_basis(&[qvec(&[1, 1])], 2);
        assert_eq!(b, IntegerMatrix::from_i64(&[vec![1, -1]]));
        let b = saturated_perp_basis(&[qvec(&[2, 0, 0]), qvec(&[0, 1, 1])], 3);
        assert_eq!(b, IntegerMatrix::from_i64(&[vec![0, 1, -1]]));
        assert_eq!(saturated_perp_basis(&[], 2), IntegerMatrix::identity(2));
    }

    #[test]
    fn hermite_transform_is_consistent() {
        let a = IntegerMatrix::from_i64(&[vec![4, 6, 2], vec![2, 3, 5], vec![6, 9, 7]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.determinant().abs(), BigInt::one());
    }
}
