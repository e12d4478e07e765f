//! Dense exact matrices over any [`Field`].

use std::fmt;

use rand::Rng;
use thiserror::Error;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{Field, FieldKind, Scalar};

fn rat(s: &Scalar) -> &BigRational {
    match s {
        Scalar::Rat(x) => x,
        _ => panic!("rational field holds a non-rational scalar"),
    }
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x /= &g;
    }
}

/// Column vectors are plain payload lists; the field travels alongside.
pub type Vector = Vec<Scalar>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(field, rows, cols, |_, _| field.zero())
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        Matrix::scalar(field, n, &field.one())
    }

    pub fn scalar(field: &Field, n: usize, c: &Scalar) -> Matrix {
        Matrix::from_fn(field, n, n, |i, j| if i == j { c.clone() } else { field.zero() })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Scalar>]) -> Result<Matrix, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.concat())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: &Field, rows: usize, cols: &[Vector]) -> Matrix {
        Matrix::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    /// Parses rows of element literals.
    pub fn parse(field: &Field, rows: &[&[&str]]) -> Result<Matrix, crate::FieldError> {
        let mut data = Vec::new();
        for row in rows {
            for t in *row {
                data.push(field.parse(t)?);
            }
        }
        let c = rows.first().map_or(0, |r| r.len());
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols: c,
            data,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    fn check_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(LinalgError::FieldMismatch(self.field.to_string(), other.field.to_string()))
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::Shape("addition of different shapes".into()));
        }
        let f = &self.field;
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.try_add(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.try_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_mul_vec(&self, v: &[Scalar]) -> Result<Vector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !f.is_zero(a) && !f.is_zero(x) {
                        acc = f.add(&acc, &f.mul(a, x));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        self.try_mul_vec(v).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.field.is_zero(a))
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar().is_some_and(|c| self.field.is_one(&c))
    }

    /// `Some(c)` when the matrix is `c * I`.
    pub fn is_scalar(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        let c = if self.rows == 0 { self.field.zero() } else { self.get(0, 0).clone() };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                let ok = if i == j { *v == c } else { self.field.is_zero(v) };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// First cell `(i, j)` where the matrix differs from a scalar matrix.
    pub fn first_non_scalar_cell(&self) -> Option<(usize, usize)> {
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                let ok = if i == j { *v == c } else { self.field.is_zero(v) };
                if !ok {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Reduced row echelon form and pivot columns (Gauss–Jordan, pivot = the
    /// lightest nonzero entry in the column at or below the current row).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        if matches!(self.field.kind(), FieldKind::Rationals) {
            return self.rref_integral();
        }
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows)
                .filter(|&i| !f.is_zero(m.get(i, c)))
                .min_by_key(|&i| f.weight(m.get(i, c)))
            else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let pv = m.get(r, j);
                    if f.is_zero(pv) {
                        continue;
                    }
                    let v = f.sub(m.get(i, j), &f.mul(&factor, pv));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    // Over Q: clear denominators, eliminate on primitive integer rows, divide
    // by the pivots at the end. Same result, far less fraction arithmetic.
    fn rref_integral(&self) -> (Matrix, Vec<usize>) {
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row: Vec<&BigRational> = (0..self.cols).map(|j| rat(self.get(i, j))).collect();
                let den = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&den / x.denom())).collect();
                make_primitive(&mut out);
                out
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i][c].bits())
            else {
                continue;
            };
            rows.swap(r, p);
            let (head, tail) = rows.split_at_mut(r);
            let (pivot_row, tail) = tail.split_first_mut().expect("row r exists");
            let pv = pivot_row[c].clone();
            for row in head.iter_mut().chain(tail.iter_mut()) {
                if row[c].is_zero() {
                    continue;
                }
                let g = pv.gcd(&row[c]);
                let a = &row[c] / &g;
                let b = &pv / &g;
                for j in c..self.cols {
                    if pivot_row[j].is_zero() && row[j].is_zero() {
                        continue;
                    }
                    row[j] = &row[j] * &b - &a * &pivot_row[j];
                }
                for x in row[..c].iter_mut() {
                    *x *= &b;
                }
                make_primitive(row);
            }
            pivots.push(c);
            r += 1;
        }
        let data = rows
            .into_iter()
            .enumerate()
            .flat_map(|(i, row)| {
                let d = if i < pivots.len() { row[pivots[i]].clone() } else { BigInt::one() };
                row.into_iter()
                    .map(move |x| Scalar::Rat(BigRational::new(x, d.clone())))
            })
            .collect();
        (Matrix::new(&self.field, self.rows, self.cols, data).expect("same shape"), pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column (free variable set
    /// to 1, in column order).
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, fc));
                }
                v
            })
            .collect()
    }

    /// One solution of `A x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vector>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Shape(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let aug = Matrix::from_fn(f, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Option<Matrix>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let f = &self.field;
        let aug = Matrix::from_fn(f, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                f.one()
            } else {
                f.zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        Ok(Some(Matrix::from_fn(f, n, n, |i, j| r.get(i, n + j).clone())))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let f = &self.field;
        let n = self.rows;
        if n == 0 {
            return Ok(f.one());
        }
        let mut m = self.clone();
        let mut sign_flip = false;
        let mut prev = f.one();
        for k in 0..n - 1 {
            if f.is_zero(m.get(k, k)) {
                let Some(p) = (k + 1..n).find(|&i| !f.is_zero(m.get(i, k))) else {
                    return Ok(f.zero());
                };
                m.swap_rows(k, p);
                sign_flip = !sign_flip;
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = f.sub(&f.mul(m.get(i, j), &pivot), &f.mul(m.get(i, k), m.get(k, j)));
                    let v = f.div(&num, &prev).expect("Bareiss divisor is nonzero");
                    m.set(i, j, v);
                }
                m.set(i, k, f.zero());
            }
            prev = pivot;
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if sign_flip { f.neg(&d) } else { d })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Matrix::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        Matrix::from_fn(&self.field, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn render(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = (0..self.cols).map(|j| self.field.render(self.get(i, j))).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// `sum_i c_i * basis_i`.
pub fn combine(field: &Field, basis: &[Matrix], coeffs: &[Scalar]) -> Matrix {
    let mut acc = Matrix::zeros(field, basis[0].rows, basis[0].cols);
    for (m, c) in basis.iter().zip(coeffs) {
        if !field.is_zero(c) {
            acc = acc.add(&m.scale(c));
        }
    }
    acc
}

/// Searches the span of `basis` for an invertible matrix.
///
/// Finite fields: every nonzero coefficient tuple in index order when there
/// are at most `budget` of them, otherwise `budget` random tuples. Infinite
/// fields: unit tuples, the all-ones tuple, then random small-height tuples,
/// `budget` trials in total. `None` means nothing was found, not that nothing
/// exists.
pub fn find_invertible_in_span<R: Rng + ?Sized>(
    basis: &[Matrix],
    budget: u64,
    height: u32,
    rng: &mut R,
) -> Result<Option<(Matrix, Vector)>, LinalgError> {
    let Some(first) = basis.first() else {
        return Err(LinalgError::Shape("empty basis".into()));
    };
    if !first.is_square() {
        return Err(LinalgError::NotSquare(first.rows, first.cols));
    }
    if basis.iter().any(|m| (m.rows, m.cols) != (first.rows, first.cols)) {
        return Err(LinalgError::Shape("basis matrices differ in shape".into()));
    }
    let field = first.field().clone();
    for m in basis {
        first.check_field(m)?;
    }
    let k = basis.len();
    let try_coeffs = |c: &Vector| -> Option<(Matrix, Vector)> {
        let m = combine(&field, basis, c);
        m.is_invertible().then(|| (m, c.clone()))
    };
    if let Some(q) = field.order() {
        let total = q.checked_pow(k as u32);
        if let Some(total) = total.filter(|t| t - 1 <= budget as u128) {
            for idx in 1..total {
                let mut r = idx;
                let c: Vector = (0..k)
                    .map(|_| {
                        let d = field.element_at(r % q);
                        r /= q;
                        d
                    })
                    .collect();
                if let Some(hit) = try_coeffs(&c) {
                    return Ok(Some(hit));
                }
            }
            return Ok(None);
        }
        for _ in 0..budget {
            let c: Vector = (0..k).map(|_| field.random(rng, height)).collect();
            if let Some(hit) = try_coeffs(&c) {
                return Ok(Some(hit));
            }
        }
        return Ok(None);
    }
    let mut trials = 0u64;
    let mut structured: Vec<Vector> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect();
    if k > 1 {
        structured.push(vec![field.one(); k]);
    }
    for c in structured {
        if trials >= budget {
            return Ok(None);
        }
        trials += 1;
        if let Some(hit) = try_coeffs(&c) {
            return Ok(Some(hit));
        }
    }
    while trials < budget {
        trials += 1;
        let c: Vector = (0..k).map(|_| field.random(rng, height)).collect();
        if let Some(hit) = try_coeffs(&c) {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

/// Rank of a list of matrices viewed as vectors.
pub fn span_rank(field: &Field, mats: &[Matrix]) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let len = mats[0].entries().len();
    Matrix::from_fn(field, mats.len(), len, |i, j| mats[i].entries()[j].clone()).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn solve_examples() {
        let f = Field::parse_descriptor("F2(t)").unwrap();
        let id = Matrix::identity(&f, 2);
        let b = vec![f.one(), f.parse("t").unwrap()];
        assert_eq!(id.solve(&b).unwrap(), Some(b.clone()));
        let q = q();
        let a = Matrix::parse(&q, &[&["1", "1"], &["1", "1"]]).unwrap();
        assert_eq!(a.solve(&[q.one(), q.zero()]).unwrap(), None);
        let d = Matrix::parse(&q, &[&["2", "0"], &["0", "3"]]).unwrap();
        assert_eq!(
            d.solve(&[q.one(), q.one()]).unwrap(),
            Some(vec![q.parse("1/2").unwrap(), q.parse("1/3").unwrap()])
        );
    }

    #[test]
    fn kernel_examples() {
        let q = q();
        assert!(Matrix::identity(&q, 3).kernel_basis().is_empty());
        let f3 = Field::prime(3).unwrap();
        assert_eq!(Matrix::zeros(&f3, 2, 2).kernel_basis().len(), 2);
        let f2 = Field::prime(2).unwrap();
        let m = Matrix::parse(&f2, &[&["1", "1"], &["1", "1"]]).unwrap();
        assert_eq!(m.kernel_basis(), vec![vec![f2.one(), f2.one()]]);
    }

    #[test]
    fn determinant_inverse_rank() {
        let q = q();
        let m = Matrix::parse(&q, &[&["1", "1"], &["1", "1"]]).unwrap();
        assert!(q.is_zero(&m.determinant().unwrap()));
        assert_eq!(Matrix::identity(&q, 3).inverse().unwrap(), Some(Matrix::identity(&q, 3)));
        assert_eq!(Matrix::parse(&q, &[&["1", "2"], &["2", "4"]]).unwrap().rank(), 1);
        let a = Matrix::parse(&q, &[&["0", "2", "1"], &["1", "0", "0"], &["3", "1", "5"]]).unwrap();
        // cofactor expansion along the first row: -2*(5-0) + 1*(1-0) = -9
        assert_eq!(a.determinant().unwrap(), q.from_i64(-9));
        let inv = a.inverse().unwrap().unwrap();
        assert!(inv.mul(&a).is_identity());
        assert!(matches!(
            Matrix::zeros(&q, 2, 3).determinant(),
            Err(LinalgError::NotSquare(2, 3))
        ));
    }

    #[test]
    fn invertible_in_span_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let q = q();
        let (m, c) = find_invertible_in_span(&[Matrix::identity(&q, 2)], 10, 2, &mut rng)
            .unwrap()
            .unwrap();
        assert!(m.is_identity());
        assert_eq!(c, vec![q.one()]);
        let f2 = Field::prime(2).unwrap();
        let e11 = Matrix::parse(&f2, &[&["1", "0"], &["0", "0"]]).unwrap();
        let e22 = Matrix::parse(&f2, &[&["0", "0"], &["0", "1"]]).unwrap();
        let (m, c) = find_invertible_in_span(&[e11, e22], 10, 2, &mut rng).unwrap().unwrap();
        assert!(m.is_identity());
        assert_eq!(c, vec![f2.one(), f2.one()]);
        let e12 = Matrix::parse(&q, &[&["0", "1"], &["0", "0"]]).unwrap();
        assert!(find_invertible_in_span(&[e12], 100, 2, &mut rng).unwrap().is_none());
    }
}
