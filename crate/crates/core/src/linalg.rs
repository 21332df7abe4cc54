//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Everything downstream (membership tests, orthogonal complements,
//! canonical forms) reduces to the reduced row echelon form computed here,
//! so this module is deliberately small and heavily tested.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses "p" or "p/q" with a nonzero q. Rejects anything else.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let bad = || Error::BadRational { got: s.to_string() };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

pub fn vec_scale(c: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| c * x).collect()
}

pub fn vec_is_zero(a: &[Rat]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// True iff `u` and `v` are linearly dependent (including either being zero).
pub fn collinear(u: &[Rat], v: &[Rat]) -> bool {
    debug_assert_eq!(u.len(), v.len());
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return false;
            }
        }
    }
    true
}

/// Dense rational matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn empty(cols: usize) -> Self {
        Mat { rows: 0, cols, data: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Mat { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    let cur = &out[(i, j)] + &prod;
                    out[(i, j)] = cur;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let lead = self[(r, c)].clone();
            for j in c..self.cols {
                let v = &self[(r, j)] / &lead;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = &self[(i, j)] - &(&self[(r, j)] * &f);
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Pivot column of each row of an RREF matrix with no zero rows.
    pub fn pivot_cols(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("zero row in canonical basis")
            })
            .collect()
    }

    /// RREF basis of a null space: all x with self * x = 0.
    pub fn kernel(&self) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut rows = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(r, free)].clone();
            }
            rows.push(v);
        }
        canonical_rowspace(rows, self.cols)
    }

    /// Solves self * x = rhs for square invertible self; None when singular.
    pub fn solve_square(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.rows, self.rows);
        let n = self.rows;
        let k = rhs.cols;
        let mut aug = Mat::zeros(n, n + k);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..k {
                aug[(i, n + j)] = rhs[(i, j)].clone();
            }
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        let mut x = Mat::zeros(n, k);
        for i in 0..n {
            for j in 0..k {
                x[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        self.solve_square(&Mat::identity(self.rows))
    }
}

/// Canonical (RREF, zero rows dropped) basis matrix of the row space.
pub fn canonical_rowspace(rows: Vec<Vec<Rat>>, cols: usize) -> Mat {
    let mut m = Mat::from_rows(rows, cols);
    let pivots = m.rref();
    let mut out = Mat::zeros(pivots.len(), cols);
    for i in 0..pivots.len() {
        for j in 0..cols {
            out[(i, j)] = m[(i, j)].clone();
        }
    }
    out
}

/// Remainder of `v` after eliminating against an RREF basis; zero iff `v`
/// lies in the row space.
pub fn reduce_by_rowspace(basis: &Mat, v: &[Rat]) -> Vec<Rat> {
    assert_eq!(basis.cols(), v.len());
    let mut rem = v.to_vec();
    for (i, &pc) in basis.pivot_cols().iter().enumerate() {
        if rem[pc].is_zero() {
            continue;
        }
        let f = rem[pc].clone();
        for j in 0..rem.len() {
            let val = &rem[j] - &(&f * &basis[(i, j)]);
            rem[j] = val;
        }
    }
    rem
}

pub fn in_rowspace(basis: &Mat, v: &[Rat]) -> bool {
    vec_is_zero(&reduce_by_rowspace(basis, v))
}

/// Coefficients expressing `v` over the rows of an independent-row basis,
/// or None when `v` is outside the row space.
pub fn rowspace_coefficients(basis: &Mat, v: &[Rat]) -> Option<Vec<Rat>> {
    let k = basis.rows();
    if k == 0 {
        return if vec_is_zero(v) { Some(Vec::new()) } else { None };
    }
    let mut aug = Mat::zeros(basis.cols(), k + 1);
    for i in 0..basis.cols() {
        for j in 0..k {
            aug[(i, j)] = basis[(j, i)].clone();
        }
        aug[(i, k)] = v[i].clone();
    }
    let pivots = aug.rref();
    if pivots.contains(&k) {
        return None;
    }
    let mut coeffs = vec![Rat::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        coeffs[pc] = aug[(r, k)].clone();
    }
    Some(coeffs)
}
