//! Dense rational matrices and exact rank/kernel computations.
//!
//! Rank is computed by clearing denominators row by row and running a
//! fraction-free echelon reduction on sparse integer rows. The reduction
//! runs on `i64` with checked arithmetic and restarts on `BigInt` if any
//! intermediate value overflows, so the result is always exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Like [`Matrix::from_rows`] but with an explicit column count, so that
    /// `0 x n` matrices keep their shape.
    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols,
            data,
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Matrix product `self * rhs`. Panics on shape mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn kernel_basis(&self) -> Matrix {
        kernel_basis(self)
    }

    /// Rows with denominators cleared, as sparse integer vectors.
    fn integer_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row
                    .iter()
                    .filter(|x| !x.is_zero())
                    .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
                row.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, x.numer() * (&lcm / x.denom())))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Rank over the rationals.
pub fn rank(m: &Matrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let rows = m.integer_rows();
    let small: Option<Vec<Vec<(usize, i64)>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|(j, v)| v.to_i64().filter(|v| *v != i64::MIN).map(|v| (*j, v)))
                .collect()
        })
        .collect();
    if let Some(small) = small {
        if let Some(r) = echelon_rank(small, m.cols) {
            return r;
        }
    }
    echelon_rank(rows, m.cols).expect("bigint elimination cannot overflow")
}

/// Rank of a sparse integer matrix given as rows of `(column, value)` pairs.
///
/// Entries must have column indices `< cols`; duplicate columns within a row
/// are not allowed.
pub fn sparse_rank(rows: Vec<Vec<(usize, i64)>>, cols: usize) -> usize {
    let sorted: Vec<Vec<(usize, i64)>> = rows
        .into_iter()
        .map(|mut r| {
            r.retain(|(_, v)| *v != 0);
            assert!(r.iter().all(|(_, v)| *v != i64::MIN), "entry out of range");
            r.sort_unstable_by_key(|(j, _)| *j);
            r
        })
        .collect();
    if let Some(r) = echelon_rank(sorted.clone(), cols) {
        return r;
    }
    let big = sorted
        .into_iter()
        .map(|r| r.into_iter().map(|(j, v)| (j, BigInt::from(v))).collect())
        .collect();
    echelon_rank(big, cols).expect("bigint elimination cannot overflow")
}

trait ElimInt: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn gcd(&self, other: &Self) -> Self;
    fn abs(&self) -> Self;
    fn is_negative(&self) -> bool;
    fn is_one(&self) -> bool;
    fn div_exact(&self, d: &Self) -> Self;
    fn neg(&self) -> Option<Self>;
    fn mul(a: &Self, b: &Self) -> Option<Self>;
    /// `a * x - b * y`, `None` on overflow.
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
}

impl ElimInt for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn abs(&self) -> Self {
        i64::abs(*self)
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    // i64::MIN is rejected so that abs and gcd never overflow
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b).filter(|v| *v != i64::MIN)
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?
            .checked_sub(b.checked_mul(*y)?)
            .filter(|v| *v != i64::MIN)
    }
}

impl ElimInt for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        Some(a * b)
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
}

/// Divides a row by the gcd of its entries and makes the leading entry positive.
fn normalize<T: ElimInt>(row: &mut [(usize, T)]) -> Option<()> {
    let mut g = row[0].1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    let flip = row[0].1.is_negative();
    if !g.is_one() || flip {
        for (_, v) in row.iter_mut() {
            let mut w = if g.is_one() {
                v.clone()
            } else {
                v.div_exact(&g)
            };
            if flip {
                w = w.neg()?;
            }
            *v = w;
        }
    }
    Some(())
}

/// Incremental fraction-free echelon reduction; `None` on overflow.
fn echelon_rank<T: ElimInt>(rows: Vec<Vec<(usize, T)>>, cols: usize) -> Option<usize> {
    let mut pivots: Vec<Option<Vec<(usize, T)>>> = vec![None; cols];
    let mut rank = 0;
    for mut row in rows {
        loop {
            if row.is_empty() {
                break;
            }
            let lead = row[0].0;
            match &pivots[lead] {
                None => {
                    normalize(&mut row)?;
                    pivots[lead] = Some(row);
                    rank += 1;
                    break;
                }
                Some(p) => {
                    let a = &row[0].1;
                    let b = &p[0].1;
                    let g = a.gcd(b);
                    let (ra, rb) = (a.div_exact(&g), b.div_exact(&g));
                    row = combine(&rb, &row, &ra, p)?;
                    if !row.is_empty() {
                        normalize(&mut row)?;
                    }
                }
            }
        }
    }
    Some(rank)
}

/// `s * x - t * y` on sorted sparse rows, dropping zeros.
fn combine<T: ElimInt>(
    s: &T,
    x: &[(usize, T)],
    t: &T,
    y: &[(usize, T)],
) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (col, val) = if take_x {
            i += 1;
            (x[i - 1].0, T::mul(s, &x[i - 1].1)?)
        } else if take_y {
            j += 1;
            (y[j - 1].0, T::mul(t, &y[j - 1].1)?.neg()?)
        } else {
            i += 1;
            j += 1;
            (x[i - 1].0, T::mul_sub(s, &x[i - 1].1, t, &y[j - 1].1)?)
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    Some(out)
}

/// Basis of the right kernel, returned as the columns of a `cols x k` matrix.
pub fn kernel_basis(m: &Matrix) -> Matrix {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<Rational>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivot_cols = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr >= rows {
            break;
        }
        let Some(found) = (pr..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(found, pr);
        let inv = a[pr][c].recip();
        for v in a[pr].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = a[pr].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == pr || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = &*v - &(&f * p);
                }
            }
        }
        pivot_cols.push(c);
        pr += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Matrix::zeros(cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        basis.set(fc, k, Rational::one());
        for (row, &pc) in pivot_cols.iter().enumerate() {
            basis.set(pc, k, -a[row][fc].clone());
        }
    }
    basis
}

/// Determinant of a square matrix by exact Gaussian elimination.
pub fn determinant(m: &Matrix) -> Rational {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].recip();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for k in c..n {
                let v = &a[r][k] - &(&f * &a[c][k]);
                a[r][k] = v;
            }
        }
    }
    det
}
