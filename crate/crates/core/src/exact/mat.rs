use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::Zero;

use super::{int, ratio, Entry, Jet, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over an [`Entry`] ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<T> Mat<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row_vec(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

impl<T: Entry> Mat<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                op: "Mat::from_vec",
                detail: format!("{} entries for a {rows}x{cols} matrix", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension {
                op: "Mat::from_rows",
                detail: "ragged rows".into(),
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|col| col.len() != r) {
            return Err(Error::Dimension {
                op: "Mat::from_columns",
                detail: "columns of unequal length".into(),
            });
        }
        Ok(Self::from_fn(r, c, |i, j| columns[j][i].clone()))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// Matrix unit `E_ij`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        Self::from_fn(n, n, |a, b| if a == i && b == j { T::one() } else { T::zero() })
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.row_vec(i).to_vec()
    }

    /// Submatrix on the given (ordered) row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.iter().any(|&r| r >= self.rows) || cols.iter().any(|&c| c >= self.cols) {
            return Err(Error::Dimension {
                op: "Mat::submatrix",
                detail: format!("indices out of range for {}x{}", self.rows, self.cols),
            });
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        }))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension {
                op: "Mat::matmul",
                detail: format!(
                    "{}x{} times {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(i, j)], T::zero());
                    out[(i, j)] = cur + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                op: "Mat::mul_vec",
                detail: format!("{}x{} times vector of length {}", self.rows, self.cols, v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * v[k].clone())
            })
            .collect())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.rows {
            return Err(Error::Dimension {
                op: "Mat::vec_mul",
                detail: format!("vector of length {} times {}x{}", v.len(), self.rows, self.cols),
            });
        }
        Ok((0..self.cols)
            .map(|j| {
                (0..self.rows).fold(T::zero(), |acc, k| acc + v[k].clone() * self[(k, j)].clone())
            })
            .collect())
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension {
                op,
                detail: format!(
                    "{}x{} vs {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "Mat::add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "Mat::sub", |a, b| a - b)
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|a| a.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// `tr(self · rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Result<T> {
        if self.cols != rhs.rows || self.rows != rhs.cols {
            return Err(Error::Dimension {
                op: "Mat::trace_product",
                detail: format!(
                    "{}x{} and {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        let mut acc = T::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, i)].clone();
            }
        }
        Ok(acc)
    }

    fn require_square(&self, op: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension {
                op,
                detail: format!("{}x{} is not square", self.rows, self.cols),
            })
        }
    }

    /// Exact determinant.
    ///
    /// Sizes up to 3 use cofactor expansion; larger matrices use
    /// fraction-free (Bareiss) elimination with full pivot search. A pivot
    /// must be a unit of the entry ring; if none remains in a trailing block
    /// of size ≥ 2, every term of that block's determinant is a product of
    /// at least two non-units, which vanishes for both scalars and jets.
    pub fn det(&self) -> Result<T> {
        self.require_square("Mat::det")?;
        let n = self.rows;
        if n <= 3 {
            return Ok(cofactor_det(self));
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n {
            let pivot = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .find(|&(i, j)| m[(i, j)].is_unit());
            let Some((pi, pj)) = pivot else {
                if k == n - 1 {
                    let last = m[(k, k)].clone();
                    return Ok(if negate { -last } else { last });
                }
                return Ok(T::zero());
            };
            if pi != k {
                for j in 0..n {
                    m.data.swap(k * n + j, pi * n + j);
                }
                negate = !negate;
            }
            if pj != k {
                for i in 0..n {
                    m.data.swap(i * n + k, i * n + pj);
                }
                negate = !negate;
            }
            if k == n - 1 {
                break;
            }
            let prev_inv = prev.inv().expect("previous pivot is a unit");
            let pivot = m[(k, k)].clone();
            for i in k + 1..n {
                let mik = m[(i, k)].clone();
                for j in k + 1..n {
                    let v = pivot.clone() * m[(i, j)].clone() - mik.clone() * m[(k, j)].clone();
                    m[(i, j)] = v * prev_inv.clone();
                }
                m[(i, k)] = T::zero();
            }
            prev = pivot;
        }
        let last = m[(n - 1, n - 1)].clone();
        Ok(if negate { -last } else { last })
    }

    /// Characteristic-polynomial coefficients and adjugate via the
    /// Faddeev–LeVerrier recursion. Only divides by positive integers, so it
    /// is valid for singular matrices.
    ///
    /// Returns `(coeffs, adj)` where `det(λI − M) = Σ coeffs[k] λ^k`.
    pub fn charpoly_adjugate(&self) -> Result<(Vec<T>, Self)> {
        self.require_square("Mat::adjugate")?;
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        if n == 0 {
            return Ok((coeffs, Self::zeros(0, 0)));
        }
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self.matmul(&mk)?;
            let c = coeffs[n - k + 1].clone();
            for i in 0..n {
                let cur = std::mem::replace(&mut next[(i, i)], T::zero());
                next[(i, i)] = cur + c.clone();
            }
            let tr = self.trace_product(&next)?;
            coeffs[n - k] = -tr.scale(&ratio(1, k as i64));
            mk = next;
        }
        let adj = if n % 2 == 1 { mk } else { mk.neg() };
        Ok((coeffs, adj))
    }

    /// Classical adjoint: `M · adj(M) = det(M) · I`, also for singular `M`.
    pub fn adjugate(&self) -> Result<Self> {
        self.charpoly_adjugate().map(|(_, adj)| adj)
    }

    /// Inverse by Gauss–Jordan elimination over units.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square("Mat::inverse")?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a[(r, c)].is_unit()) else {
                let det = self.det()?.value();
                return Err(Error::Singular {
                    op: "Mat::inverse",
                    det,
                });
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(c * n + j, p * n + j);
                    inv.data.swap(c * n + j, p * n + j);
                }
            }
            let pinv = a[(c, c)].inv().expect("pivot is a unit");
            for j in 0..n {
                a[(c, j)] = a[(c, j)].clone() * pinv.clone();
                inv[(c, j)] = inv[(c, j)].clone() * pinv.clone();
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(c, j)].clone();
                    inv[(r, j)] = inv[(r, j)].clone() - f.clone() * inv[(c, j)].clone();
                }
            }
        }
        Ok(inv)
    }

    /// `M^k` by repeated multiplication; `M^0 = I`.
    pub fn pow(&self, k: u32) -> Result<Self> {
        self.require_square("Mat::pow")?;
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }
}

fn cofactor_det<T: Entry>(m: &Mat<T>) -> T {
    let e = |i: usize, j: usize| m[(i, j)].clone();
    match m.rows {
        0 => T::one(),
        1 => e(0, 0),
        2 => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
        _ => {
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        }
    }
}

impl Mat<Scalar> {
    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| int(rows[i][j]))
    }

    /// Lifts to jets with the given derivative part (zero when `None`).
    pub fn to_jets(&self, der: Option<&Mat<Scalar>>) -> Mat<Jet> {
        match der {
            Some(d) => Mat::from_fn(self.rows, self.cols, |i, j| {
                Jet::new(self[(i, j)].clone(), d[(i, j)].clone())
            }),
            None => self.map(|v| Jet::constant(v.clone())),
        }
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }
}

impl Mat<Jet> {
    pub fn values(&self) -> Mat<Scalar> {
        self.map(|j| j.val.clone())
    }

    pub fn derivatives(&self) -> Mat<Scalar> {
        self.map(|j| j.der.clone())
    }
}

/// Raw coefficients `a_0..a_n` of `det(X + λY)` in `λ`.
///
/// Evaluates the pencil at `λ = 0, 1, …, n` and interpolates exactly
/// (Newton divided differences on unit-spaced nodes).
pub fn pencil_coefficients<T: Entry>(x: &Mat<T>, y: &Mat<T>) -> Result<Vec<T>> {
    if !x.is_square() || x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(Error::Dimension {
            op: "pencil_coefficients",
            detail: format!(
                "{}x{} and {}x{}",
                x.rows(),
                x.cols(),
                y.rows(),
                y.cols()
            ),
        });
    }
    let n = x.rows();
    let mut table = Vec::with_capacity(n + 1);
    for lam in 0..=n {
        let shifted = x.add(&y.scale(&T::from_scalar(int(lam as i64))))?;
        table.push(shifted.det()?);
    }
    // In-place divided differences: table[k] becomes f[t_0..t_k].
    for k in 1..=n {
        let inv_k = ratio(1, k as i64);
        for j in (k..=n).rev() {
            table[j] = (table[j].clone() - table[j - 1].clone()).scale(&inv_k);
        }
    }
    // Horner back-substitution of the Newton form into monomial coefficients.
    let mut poly: Vec<T> = vec![table[n].clone()];
    for k in (0..n).rev() {
        let node = T::from_scalar(int(k as i64));
        let mut next = vec![T::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] = next[d + 1].clone() + c.clone();
            next[d] = next[d].clone() - c.clone() * node.clone();
        }
        next[0] = next[0].clone() + table[k].clone();
        poly = next;
    }
    poly.truncate(n + 1);
    Ok(poly)
}
