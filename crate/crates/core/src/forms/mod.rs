//! Quadratic forms in every characteristic.
//!
//! A form on `K^n` is stored by its upper-triangular coefficients `C` with
//! `q(x) = sum_{i <= j} C[i][j] x_i x_j`, which represents `[a,b]` in
//! characteristic 2 without needing a Gram matrix.

mod aniso;
mod invariants;

use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};
use crate::linalg::{LinalgError, Matrix, Vector};

pub use aniso::{Anisotropy, AnisotropyVerdict, Evidence};
pub use invariants::ArfTriviality;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("operation needs characteristic {needed}, field has characteristic {actual}")]
    Characteristic { needed: &'static str, actual: u64 },
    #[error("form is degenerate")]
    Degenerate,
    #[error("form has odd dimension {0}")]
    OddDimension(usize),
    #[error("reflection axis is isotropic")]
    IsotropicAxis,
    #[error("scale factor is zero")]
    ZeroScale,
    #[error("coefficient below the diagonal at ({0},{1})")]
    NotUpperTriangular(usize, usize),
    #[error("exhaustive check over {count} vectors exceeds budget {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
}

#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    field: Field,
    n: usize,
    /// Full `n x n` row-major matrix, zero below the diagonal.
    c: Vec<Scalar>,
}

impl std::fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuadraticForm({}; {})", self.n, self.render())
    }
}

impl QuadraticForm {
    /// From upper-triangular coefficients in row order
    /// (`c11, c12, ..., c1n, c22, ..., cnn`).
    pub fn from_upper(field: &Field, n: usize, upper: &[Scalar]) -> Result<QuadraticForm, FormError> {
        let expected = n * (n + 1) / 2;
        if upper.len() != expected {
            return Err(FormError::Dimension {
                expected,
                got: upper.len(),
            });
        }
        let mut c = vec![field.zero(); n * n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in i..n {
                c[i * n + j] = it.next().expect("length checked").clone();
            }
        }
        Ok(QuadraticForm {
            field: field.clone(),
            n,
            c,
        })
    }

    /// From a full coefficient matrix that must vanish below the diagonal.
    pub fn from_matrix(m: &Matrix) -> Result<QuadraticForm, FormError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare(m.rows(), m.cols()).into());
        }
        let f = m.field();
        for i in 0..m.rows() {
            for j in 0..i {
                if !f.is_zero(m.get(i, j)) {
                    return Err(FormError::NotUpperTriangular(i, j));
                }
            }
        }
        Ok(QuadraticForm {
            field: f.clone(),
            n: m.rows(),
            c: m.entries().to_vec(),
        })
    }

    /// Diagonal form `<d_1, ..., d_n>`.
    pub fn diagonal(field: &Field, d: &[Scalar]) -> QuadraticForm {
        let n = d.len();
        let mut c = vec![field.zero(); n * n];
        for (i, x) in d.iter().enumerate() {
            c[i * n + i] = x.clone();
        }
        QuadraticForm {
            field: field.clone(),
            n,
            c,
        }
    }

    /// `[a, b] : (x, y) -> a x^2 + x y + b y^2` in characteristic 2.
    pub fn binary_char2(field: &Field, a: &Scalar, b: &Scalar) -> Result<QuadraticForm, FormError> {
        if field.characteristic() != 2 {
            return Err(FormError::Characteristic {
                needed: "2",
                actual: field.characteristic(),
            });
        }
        QuadraticForm::from_upper(field, 2, &[a.clone(), field.one(), b.clone()])
    }

    /// The zero-dimensional form.
    pub fn empty(field: &Field) -> QuadraticForm {
        QuadraticForm::diagonal(field, &[])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Scalar {
        &self.c[i * self.n + j]
    }

    /// Coefficients in upper-triangular row order.
    pub fn upper(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                out.push(self.coeff(i, j).clone());
            }
        }
        out
    }

    pub fn coefficient_matrix(&self) -> Matrix {
        Matrix::new(&self.field, self.n, self.n, self.c.clone()).expect("square")
    }

    pub fn render(&self) -> String {
        let cells: Vec<String> = self.upper().iter().map(|x| self.field.render(x)).collect();
        cells.join(",")
    }

    fn check_len(&self, x: &[Scalar]) -> Result<(), FormError> {
        if x.len() == self.n {
            Ok(())
        } else {
            Err(FormError::Dimension {
                expected: self.n,
                got: x.len(),
            })
        }
    }

    pub fn try_eval(&self, x: &[Scalar]) -> Result<Scalar, FormError> {
        self.check_len(x)?;
        let f = &self.field;
        let mut acc = f.zero();
        for i in 0..self.n {
            if f.is_zero(&x[i]) {
                continue;
            }
            for j in i..self.n {
                let c = self.coeff(i, j);
                if f.is_zero(c) || f.is_zero(&x[j]) {
                    continue;
                }
                acc = f.add(&acc, &f.mul(c, &f.mul(&x[i], &x[j])));
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        self.try_eval(x).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Polar form `b(x, y) = q(x + y) - q(x) - q(y)`.
    pub fn polar(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let b = self.polar_matrix();
        let by = b.mul_vec(y);
        let f = &self.field;
        x.iter().zip(&by).fold(f.zero(), |acc, (a, c)| f.add(&acc, &f.mul(a, c)))
    }

    pub fn polar_matrix(&self) -> Matrix {
        let f = &self.field;
        Matrix::from_fn(f, self.n, self.n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coeff(i, j).clone(),
            std::cmp::Ordering::Greater => self.coeff(j, i).clone(),
            std::cmp::Ordering::Equal => f.add(self.coeff(i, i), self.coeff(i, i)),
        })
    }

    pub fn radical_basis(&self) -> Vec<Vector> {
        self.polar_matrix().kernel_basis()
    }

    pub fn is_totally_degenerate(&self) -> bool {
        self.polar_matrix().is_zero()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.n == 0 || self.polar_matrix().is_invertible()
    }

    /// `q ⊥ other`.
    pub fn ortho_sum(&self, other: &QuadraticForm) -> Result<QuadraticForm, FormError> {
        if self.field != other.field {
            return Err(FieldError::Mismatch(self.field.to_string(), other.field.to_string()).into());
        }
        let n = self.n + other.n;
        let f = &self.field;
        let mut c = vec![f.zero(); n * n];
        for i in 0..self.n {
            for j in i..self.n {
                c[i * n + j] = self.coeff(i, j).clone();
            }
        }
        for i in 0..other.n {
            for j in i..other.n {
                c[(i + self.n) * n + j + self.n] = other.coeff(i, j).clone();
            }
        }
        Ok(QuadraticForm {
            field: f.clone(),
            n,
            c,
        })
    }

    /// `lambda * q`.
    pub fn scale(&self, lambda: &Scalar) -> Result<QuadraticForm, FormError> {
        if self.field.is_zero(lambda) {
            return Err(FormError::ZeroScale);
        }
        Ok(QuadraticForm {
            field: self.field.clone(),
            n: self.n,
            c: self.c.iter().map(|x| self.field.mul(x, lambda)).collect(),
        })
    }

    /// The Pfister form `<1,-a_1> ⊗ ... ⊗ <1,-a_k>`, built by iterating
    /// `q -> q ⊥ (-a) q` from `<1>`.
    pub fn pfister(field: &Field, entries: &[Scalar]) -> Result<QuadraticForm, FormError> {
        let mut q = QuadraticForm::diagonal(field, &[field.one()]);
        for a in entries {
            let scaled = q.scale(&field.neg(a))?;
            q = q.ortho_sum(&scaled)?;
        }
        Ok(q)
    }

    /// The form `x -> q(P x)`.
    pub fn pullback(&self, p: &Matrix) -> Result<QuadraticForm, FormError> {
        if p.rows() != self.n {
            return Err(FormError::Dimension {
                expected: self.n,
                got: p.rows(),
            });
        }
        let m = p.cols();
        let cols = p.columns();
        let f = &self.field;
        let mut c = vec![f.zero(); m * m];
        let b = self.polar_matrix();
        for i in 0..m {
            c[i * m + i] = self.eval(&cols[i]);
            let bi = b.mul_vec(&cols[i]);
            for j in i + 1..m {
                c[i * m + j] = cols[j].iter().zip(&bi).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)));
            }
        }
        Ok(QuadraticForm { field: f.clone(), n: m, c })
    }

    /// Matrix of `s_a(x) = x - (b(x,a)/q(a)) a`.
    pub fn reflection_matrix(&self, a: &[Scalar]) -> Result<Matrix, FormError> {
        let qa = self.try_eval(a)?;
        let f = &self.field;
        if f.is_zero(&qa) {
            return Err(FormError::IsotropicAxis);
        }
        let inv = f.inv(&qa)?;
        let ba = self.polar_matrix().mul_vec(a);
        // column j: e_j - (b(e_j,a)/q(a)) a
        let r = Matrix::from_fn(f, self.n, self.n, |i, j| {
            let coef = f.mul(&ba[j], &inv);
            let v = f.mul(&coef, &a[i]);
            if i == j {
                f.sub(&f.one(), &v)
            } else {
                f.neg(&v)
            }
        });
        debug_assert!(r.mul(&r).is_identity());
        Ok(r)
    }

    /// Diagonalization in characteristic not 2: returns `P` (columns form an
    /// orthogonal basis) and `d` with `q(P x) = sum d_i x_i^2`.
    pub fn diagonalize(&self) -> Result<(Matrix, Vec<Scalar>), FormError> {
        let f = &self.field;
        if f.characteristic() == 2 {
            return Err(FormError::Characteristic {
                needed: "not 2",
                actual: 2,
            });
        }
        let two_inv = f.inv(&f.from_i64(2))?;
        let mut pending: Vec<Vector> = (0..self.n)
            .map(|i| (0..self.n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        let mut chosen: Vec<Vector> = Vec::new();
        let mut diag = Vec::new();
        while !pending.is_empty() {
            let pick = match pending.iter().position(|v| !f.is_zero(&self.eval(v))) {
                Some(i) => Some(pending.remove(i)),
                None => {
                    // All remaining vectors are isotropic: use a sum of a
                    // non-orthogonal pair.
                    let mut found = None;
                    'outer: for i in 0..pending.len() {
                        for j in i + 1..pending.len() {
                            if !f.is_zero(&self.polar(&pending[i], &pending[j])) {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    found.map(|(i, j)| {
                        let v = add_vec(f, &pending[i], &pending[j]);
                        pending.remove(i);
                        v
                    })
                }
            };
            let Some(v) = pick else {
                // q vanishes on the remaining span.
                for w in pending.drain(..) {
                    chosen.push(w);
                    diag.push(f.zero());
                }
                break;
            };
            let qv = self.eval(&v);
            let coef_base = f.mul(&two_inv, &f.inv(&qv)?);
            for w in pending.iter_mut() {
                let c = f.mul(&self.polar(w, &v), &coef_base);
                if !f.is_zero(&c) {
                    *w = sub_vec(f, w, &scale_vec(f, &v, &c));
                }
            }
            chosen.push(v);
            diag.push(qv);
        }
        let p = Matrix::from_columns(f, self.n, &chosen);
        Ok((p, diag))
    }

    /// Symplectic basis of a non-degenerate form in characteristic 2 starting
    /// from the standard basis.
    pub fn symplectic_basis(&self) -> Result<Vec<Vector>, FormError> {
        let f = &self.field;
        let start: Vec<Vector> = (0..self.n)
            .map(|i| (0..self.n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        self.symplectic_basis_from(&start)
    }

    /// Symplectic basis built from an ordered input basis: take the first
    /// vector, pair it with the first non-orthogonal later vector (scaled so
    /// the pairing is 1), project the rest, repeat.
    pub fn symplectic_basis_from(&self, basis: &[Vector]) -> Result<Vec<Vector>, FormError> {
        let f = &self.field;
        if f.characteristic() != 2 {
            return Err(FormError::Characteristic {
                needed: "2",
                actual: f.characteristic(),
            });
        }
        if self.n % 2 == 1 {
            return Err(FormError::OddDimension(self.n));
        }
        if !self.is_nondegenerate() {
            return Err(FormError::Degenerate);
        }
        let mut pending: Vec<Vector> = basis.to_vec();
        let mut out = Vec::with_capacity(self.n);
        while !pending.is_empty() {
            let u = pending.remove(0);
            let Some(k) = pending.iter().position(|w| !f.is_zero(&self.polar(&u, w))) else {
                return Err(FormError::Degenerate);
            };
            let w = pending.remove(k);
            let w = scale_vec(f, &w, &f.inv(&self.polar(&u, &w))?);
            for x in pending.iter_mut() {
                let bxw = self.polar(x, &w);
                let bxu = self.polar(x, &u);
                let y = sub_vec(f, x, &scale_vec(f, &u, &bxw));
                *x = add_vec(f, &y, &scale_vec(f, &w, &bxu));
            }
            out.push(u);
            out.push(w);
        }
        Ok(out)
    }
}

/// True iff `u` is invertible and `q2(u x) = q1(x)` identically.
pub fn isometry_check(q1: &QuadraticForm, q2: &QuadraticForm, u: &Matrix) -> bool {
    if q1.field != q2.field || u.rows() != q2.n || u.cols() != q1.n || q1.n != q2.n {
        return false;
    }
    if !u.is_invertible() {
        return false;
    }
    match q2.pullback(u) {
        Ok(p) => p == *q1,
        Err(_) => false,
    }
}

pub(crate) fn add_vec(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub(crate) fn sub_vec(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub(crate) fn scale_vec(f: &Field, a: &[Scalar], c: &Scalar) -> Vector {
    a.iter().map(|x| f.mul(x, c)).collect()
}

pub(crate) fn unit_vec(f: &Field, n: usize, i: usize) -> Vector {
    (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn ints(f: &Field, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn eval_examples() {
        let f = q();
        let form = QuadraticForm::diagonal(&f, &ints(&f, &[1, 1, 1, 1]));
        assert_eq!(form.eval(&ints(&f, &[1, 1, 1, 1])), f.from_i64(4));
        let f2 = Field::prime(2).unwrap();
        let ab = QuadraticForm::binary_char2(&f2, &f2.one(), &f2.one()).unwrap();
        assert_eq!(ab.eval(&ints(&f2, &[1, 1])), f2.one());
        assert!(f.is_zero(&form.eval(&ints(&f, &[0, 0, 0, 0]))));
    }

    #[test]
    fn polar_and_radical_examples() {
        let f = q();
        let one = QuadraticForm::diagonal(&f, &[f.from_i64(5)]);
        assert_eq!(one.polar_matrix().get(0, 0), &f.from_i64(10));
        let ft = Field::parse_descriptor("F2(t)").unwrap();
        let ab = QuadraticForm::binary_char2(&ft, &ft.one(), &ft.parse("t").unwrap()).unwrap();
        assert_eq!(ab.polar_matrix(), Matrix::parse(&ft, &[&["0", "1"], &["1", "0"]]).unwrap());
        assert_eq!(ab.coefficient_matrix(), Matrix::parse(&ft, &[&["1", "1"], &["0", "t"]]).unwrap());
        let deg = QuadraticForm::diagonal(&ft, &[ft.one(), ft.parse("t").unwrap()]);
        assert!(deg.is_totally_degenerate());
        assert_eq!(deg.radical_basis().len(), 2);
        assert!(QuadraticForm::diagonal(&f, &[f.one(), f.one()]).radical_basis().is_empty());
        let f2 = Field::prime(2).unwrap();
        let mixed = QuadraticForm::binary_char2(&f2, &f2.one(), &f2.one())
            .unwrap()
            .ortho_sum(&QuadraticForm::diagonal(&f2, &[f2.one()]))
            .unwrap();
        assert_eq!(mixed.radical_basis(), vec![ints(&f2, &[0, 0, 1])]);
    }

    #[test]
    fn pfister_example() {
        let f = q();
        let p = QuadraticForm::pfister(&f, &ints(&f, &[-1, -1])).unwrap();
        assert_eq!(p, QuadraticForm::diagonal(&f, &ints(&f, &[1, 1, 1, 1])));
    }

    #[test]
    fn diagonalize_examples() {
        let f = q();
        let xy = QuadraticForm::from_upper(&f, 2, &ints(&f, &[0, 1, 0])).unwrap();
        let (p, d) = xy.diagonalize().unwrap();
        assert_eq!(d, vec![f.one(), f.parse("-1/4").unwrap()]);
        assert!(isometry_check(&QuadraticForm::diagonal(&f, &d), &xy, &p));
        let xy_y2 = QuadraticForm::from_upper(&f, 2, &ints(&f, &[0, 1, 1])).unwrap();
        let (p, d) = xy_y2.diagonalize().unwrap();
        assert_eq!(p.col(0), ints(&f, &[0, 1]));
        assert!(isometry_check(&QuadraticForm::diagonal(&f, &d), &xy_y2, &p));
    }

    #[test]
    fn reflection_examples() {
        let f = q();
        let form = QuadraticForm::diagonal(&f, &ints(&f, &[1, 1]));
        let r = form.reflection_matrix(&ints(&f, &[1, 0])).unwrap();
        assert_eq!(r, Matrix::parse(&f, &[&["-1", "0"], &["0", "1"]]).unwrap());
        let f2 = Field::prime(2).unwrap();
        let ab = QuadraticForm::binary_char2(&f2, &f2.one(), &f2.one()).unwrap();
        let r = ab.reflection_matrix(&ints(&f2, &[1, 0])).unwrap();
        assert_eq!(r.mul_vec(&ints(&f2, &[0, 1])), ints(&f2, &[1, 1]));
        assert_eq!(r.mul_vec(&ints(&f2, &[1, 0])), ints(&f2, &[1, 0]));
        assert!(isometry_check(&ab, &ab, &r));
        let iso = QuadraticForm::diagonal(&f, &ints(&f, &[1, -1]));
        assert_eq!(iso.reflection_matrix(&ints(&f, &[1, 1])), Err(FormError::IsotropicAxis));
    }

    #[test]
    fn symplectic_examples() {
        let f2 = Field::prime(2).unwrap();
        let ab = QuadraticForm::binary_char2(&f2, &f2.one(), &f2.one()).unwrap();
        let swapped = vec![ints(&f2, &[0, 1]), ints(&f2, &[1, 0])];
        assert_eq!(ab.symplectic_basis_from(&swapped).unwrap(), swapped);
        let two = ab.ortho_sum(&ab).unwrap();
        let basis = two.symplectic_basis().unwrap();
        assert_eq!(basis[2], ints(&f2, &[0, 0, 1, 0]));
    }

    #[test]
    fn isometry_examples() {
        let f = q();
        let q11 = QuadraticForm::diagonal(&f, &ints(&f, &[1, 1]));
        let q22 = QuadraticForm::diagonal(&f, &ints(&f, &[2, 2]));
        // (x+y)^2 + (x-y)^2 = 2x^2 + 2y^2
        let u = Matrix::parse(&f, &[&["1", "1"], &["1", "-1"]]).unwrap();
        assert!(isometry_check(&q22, &q11, &u));
        assert!(isometry_check(&q11, &q11, &Matrix::identity(&f, 2)));
        assert!(!isometry_check(&q11, &q11, &Matrix::zeros(&f, 2, 2)));
    }
}
