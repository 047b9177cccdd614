//! Dense exact linear algebra over the rationals.
//!
//! Matrices are row-major `Vec<Vec<Rational>>`. Every routine is exact; the
//! pivot rule is "first nonzero entry", so results are deterministic.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row-echelon form of a matrix with its pivot columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Echelon {
    /// Nonzero rows of the reduced form, one per pivot.
    pub rows: Matrix,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` lies in
    /// their span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = residual[p].clone();
            if !c.is_zero() {
                for (r, x) in residual.iter_mut().zip(row) {
                    if !x.is_zero() {
                        *r -= &c * x;
                    }
                }
            }
            coords.push(c);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Row-reduces `rows` (each of length `ncols`).
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> Echelon {
    let mut a: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r >= a.len() {
            break;
        }
        let Some(found) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, found);
        let inv = a[r][col].recip();
        if !inv.is_one() {
            for x in a[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    Echelon {
        rows: a,
        pivots,
        ncols,
    }
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows, ncols).rank()
}

/// Basis of `{x : A x = 0}`, one vector per free column, in column order.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Matrix {
    let e = rref(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// One solution of `A x = b` with all free variables set to zero.
pub fn solve(rows: &[Vec<Rational>], rhs: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    let augmented: Matrix = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let e = rref(&augmented, ncols + 1);
    if e.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

pub fn determinant(square: &[Vec<Rational>]) -> Rational {
    let n = square.len();
    let mut a: Matrix = square.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(found) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return Rational::zero();
        };
        if found != col {
            a.swap(col, found);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        let pivot_row = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot;
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
    }
    det
}

pub fn inverse(square: &[Vec<Rational>]) -> Option<Matrix> {
    let n = square.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let augmented: Matrix = square
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let e = rref(&augmented, 2 * n);
    if e.rank() < n || e.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(e.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row vector times matrix.
pub fn vec_mat(v: &[Rational], m: &[Vec<Rational>]) -> Vec<Rational> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut out = vec![Rational::zero(); ncols];
    for (c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                *o += c * x;
            }
        }
    }
    out
}

/// Matrix times column vector.
pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}
