//! Clifford algebras `C(q)` on the subset-indexed basis `e_S`.
//!
//! Generators need not be orthogonal: products are rewritten with
//! `e_j e_i = b(e_i, e_j) - e_i e_j` and `e_i e_i = q(e_i)`, which keeps
//! characteristic 2 first-class.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::forms::QuadraticForm;
use crate::linalg::Matrix;

/// Largest generator count the center computation accepts.
pub const MAX_CENTER_GENERATORS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("elements come from Clifford algebras with different generator counts ({0} vs {1})")]
    Mismatch(usize, usize),
    #[error("{0} generators exceed the supported scale of {1}")]
    ScaleExceeded(usize, usize),
    #[error("quaternion conjugation needs exactly 2 generators, got {0}")]
    NotQuaternion(usize),
}

/// Sparse element: bitmask of the generator subset -> nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement {
    n: usize,
    terms: BTreeMap<u32, Scalar>,
}

impl CliffordElement {
    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<u32, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, mask: u32) -> Option<&Scalar> {
        self.terms.get(&mask)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }
}

#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    q: QuadraticForm,
    polar: Matrix,
}

impl CliffordAlgebra {
    pub fn new(q: &QuadraticForm) -> CliffordAlgebra {
        CliffordAlgebra {
            q: q.clone(),
            polar: q.polar_matrix(),
        }
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.q
    }

    pub fn field(&self) -> &Field {
        self.q.field()
    }

    pub fn generators(&self) -> usize {
        self.q.dim()
    }

    /// `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.generators()
    }

    fn element(&self, terms: BTreeMap<u32, Scalar>) -> CliffordElement {
        CliffordElement {
            n: self.generators(),
            terms,
        }
    }

    pub fn zero(&self) -> CliffordElement {
        self.element(BTreeMap::new())
    }

    pub fn scalar(&self, c: &Scalar) -> CliffordElement {
        self.monomial(0, c)
    }

    pub fn one(&self) -> CliffordElement {
        self.scalar(&self.field().one())
    }

    pub fn monomial(&self, mask: u32, c: &Scalar) -> CliffordElement {
        let mut terms = BTreeMap::new();
        if !self.field().is_zero(c) {
            terms.insert(mask, c.clone());
        }
        self.element(terms)
    }

    /// Generator `e_i` (0-based).
    pub fn generator(&self, i: usize) -> CliffordElement {
        self.monomial(1 << i, &self.field().one())
    }

    /// Grade-1 element with the given coordinates.
    pub fn vector(&self, v: &[Scalar]) -> CliffordElement {
        let mut out = self.zero();
        for (i, c) in v.iter().enumerate() {
            out = self.add(&out, &self.monomial(1 << i, c));
        }
        out
    }

    /// Dense coordinates in bitmask order.
    pub fn to_coords(&self, u: &CliffordElement) -> Vec<Scalar> {
        (0..self.dim() as u32)
            .map(|m| u.terms.get(&m).cloned().unwrap_or_else(|| self.field().zero()))
            .collect()
    }

    pub fn from_coords(&self, v: &[Scalar]) -> CliffordElement {
        let f = self.field();
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(m, c)| (m as u32, c.clone()))
            .collect();
        self.element(terms)
    }

    fn check(&self, u: &CliffordElement) -> Result<(), CliffordError> {
        if u.n == self.generators() {
            Ok(())
        } else {
            Err(CliffordError::Mismatch(u.n, self.generators()))
        }
    }

    fn accumulate(&self, terms: &mut BTreeMap<u32, Scalar>, mask: u32, c: &Scalar) {
        let f = self.field();
        if f.is_zero(c) {
            return;
        }
        let v = match terms.get(&mask) {
            Some(old) => f.add(old, c),
            None => c.clone(),
        };
        if f.is_zero(&v) {
            terms.remove(&mask);
        } else {
            terms.insert(mask, v);
        }
    }

    pub fn add(&self, u: &CliffordElement, v: &CliffordElement) -> CliffordElement {
        let mut terms = u.terms.clone();
        for (m, c) in &v.terms {
            self.accumulate(&mut terms, *m, c);
        }
        self.element(terms)
    }

    pub fn scale(&self, u: &CliffordElement, c: &Scalar) -> CliffordElement {
        let f = self.field();
        if f.is_zero(c) {
            return self.zero();
        }
        self.element(u.terms.iter().map(|(m, x)| (*m, f.mul(x, c))).collect())
    }

    pub fn neg(&self, u: &CliffordElement) -> CliffordElement {
        self.scale(u, &self.field().neg(&self.field().one()))
    }

    pub fn sub(&self, u: &CliffordElement, v: &CliffordElement) -> CliffordElement {
        self.add(u, &self.neg(v))
    }

    /// `e_S * e_j` as a list of (mask, coefficient).
    fn mul_gen(&self, s: u32, j: usize) -> Vec<(u32, Scalar)> {
        let f = self.field();
        if s == 0 {
            return vec![(1 << j, f.one())];
        }
        let m = 31 - s.leading_zeros() as usize;
        let rest = s & !(1 << m);
        if m < j {
            return vec![(s | 1 << j, f.one())];
        }
        if m == j {
            return vec![(rest, self.q.coeff(m, m).clone())];
        }
        // e_rest e_m e_j = b(e_j, e_m) e_rest - (e_rest e_j) e_m
        let mut out = Vec::new();
        let b = self.polar.get(j, m);
        if !f.is_zero(b) {
            out.push((rest, b.clone()));
        }
        for (t, c) in self.mul_gen(rest, j) {
            debug_assert!(t >> m == 0);
            out.push((t | 1 << m, f.neg(&c)));
        }
        out
    }

    /// `e_S * e_T`.
    fn mul_monomials(&self, s: u32, t: u32) -> BTreeMap<u32, Scalar> {
        let f = self.field();
        let mut cur: BTreeMap<u32, Scalar> = BTreeMap::new();
        cur.insert(s, f.one());
        for j in 0..self.generators() {
            if t >> j & 1 == 0 {
                continue;
            }
            let mut next = BTreeMap::new();
            for (mask, c) in &cur {
                for (m2, c2) in self.mul_gen(*mask, j) {
                    self.accumulate(&mut next, m2, &f.mul(c, &c2));
                }
            }
            cur = next;
        }
        cur
    }

    pub fn try_mul(&self, u: &CliffordElement, v: &CliffordElement) -> Result<CliffordElement, CliffordError> {
        self.check(u)?;
        self.check(v)?;
        let f = self.field();
        let mut terms = BTreeMap::new();
        for (s, a) in &u.terms {
            for (t, b) in &v.terms {
                let ab = f.mul(a, b);
                for (m, c) in self.mul_monomials(*s, *t) {
                    self.accumulate(&mut terms, m, &f.mul(&ab, &c));
                }
            }
        }
        Ok(self.element(terms))
    }

    pub fn mul(&self, u: &CliffordElement, v: &CliffordElement) -> CliffordElement {
        self.try_mul(u, v).unwrap_or_else(|e| panic!("{e}"))
    }

    /// (even part, odd part).
    pub fn grade_decompose(&self, u: &CliffordElement) -> (CliffordElement, CliffordElement) {
        let (even, odd): (BTreeMap<_, _>, BTreeMap<_, _>) =
            u.terms.iter().map(|(m, c)| (*m, c.clone())).partition(|(m, _)| m.count_ones() % 2 == 0);
        (self.element(even), self.element(odd))
    }

    /// Matrix of `x -> u x` on the monomial basis.
    pub fn left_mul_matrix(&self, u: &CliffordElement) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim() as u32)
            .map(|m| self.to_coords(&self.mul(u, &self.monomial(m, &self.field().one()))))
            .collect();
        Matrix::from_columns(self.field(), self.dim(), &cols)
    }

    /// Basis of the center of `C(q)`, or of `C_0(q)` when `even_only`.
    pub fn center_basis(&self, even_only: bool) -> Result<Vec<CliffordElement>, CliffordError> {
        let n = self.generators();
        if n > MAX_CENTER_GENERATORS {
            return Err(CliffordError::ScaleExceeded(n, MAX_CENTER_GENERATORS));
        }
        let f = self.field();
        let masks: Vec<u32> = (0..self.dim() as u32)
            .filter(|m| !even_only || m.count_ones() % 2 == 0)
            .collect();
        // Elements whose commutators must vanish.
        let testers: Vec<CliffordElement> = if even_only {
            let mut v = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    v.push(self.monomial(1 << i | 1 << j, &f.one()));
                }
            }
            v
        } else {
            (0..n).map(|i| self.generator(i)).collect()
        };
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let cols: Vec<Vec<Vec<Scalar>>> = masks
            .iter()
            .map(|m| {
                let e = self.monomial(*m, &f.one());
                testers
                    .iter()
                    .map(|g| self.to_coords(&self.sub(&self.mul(g, &e), &self.mul(&e, g))))
                    .collect()
            })
            .collect();
        for t in 0..testers.len() {
            for r in 0..self.dim() {
                rows.push(cols.iter().map(|c| c[t][r].clone()).collect());
            }
        }
        if rows.is_empty() {
            // no testers: everything in the (sub)algebra is central
            return Ok(masks.iter().map(|m| self.monomial(*m, &f.one())).collect());
        }
        let system = Matrix::from_rows(f, &rows).expect("rectangular");
        Ok(system
            .kernel_basis()
            .into_iter()
            .map(|v| {
                let mut full = vec![f.zero(); self.dim()];
                for (k, m) in masks.iter().enumerate() {
                    full[*m as usize] = v[k].clone();
                }
                self.from_coords(&full)
            })
            .collect())
    }

    /// `u -> Trd(u) - u` with `Trd(a + b e1 + c e2 + d e1e2) = 2a + d b(e1,e2)`.
    pub fn quaternion_conjugate(&self, u: &CliffordElement) -> Result<CliffordElement, CliffordError> {
        if self.generators() != 2 {
            return Err(CliffordError::NotQuaternion(self.generators()));
        }
        self.check(u)?;
        let f = self.field();
        let zero = f.zero();
        let alpha = u.terms.get(&0).unwrap_or(&zero);
        let delta = u.terms.get(&3).unwrap_or(&zero);
        let trd = f.add(&f.add(alpha, alpha), &f.mul(delta, self.polar.get(0, 1)));
        Ok(self.sub(&self.scalar(&trd), u))
    }

    /// The constant coefficient of `u`, when `u` is a scalar.
    pub fn as_scalar(&self, u: &CliffordElement) -> Option<Scalar> {
        match u.terms.len() {
            0 => Some(self.field().zero()),
            1 => u.terms.get(&0).cloned(),
            _ => None,
        }
    }
}

/// Checks `L(x)^2 = q(x) I` on all `e_i` and `e_i + e_j`, which suffices for a
/// quadratic identity in `x`.
pub fn verify_clifford_rep(images: &[Matrix], q: &QuadraticForm) -> bool {
    let n = q.dim();
    if images.len() != n {
        return false;
    }
    if n == 0 {
        return true;
    }
    let f = q.field();
    let size = images[0].rows();
    let check = |m: &Matrix, x: &[Scalar]| -> bool {
        let sq = m.mul(m);
        sq == Matrix::scalar(f, size, &q.eval(x))
    };
    for i in 0..n {
        let ei = crate::forms::unit_vec(f, n, i);
        if !check(&images[i], &ei) {
            return false;
        }
        for j in i + 1..n {
            let mut x = ei.clone();
            x[j] = f.one();
            if !check(&images[i].add(&images[j]), &x) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: &Field, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    fn hamilton() -> CliffordAlgebra {
        let q = Field::rationals();
        CliffordAlgebra::new(&QuadraticForm::diagonal(&q, &ints(&q, &[-1, -1])))
    }

    #[test]
    fn quaternion_relations() {
        let c = hamilton();
        let f = c.field().clone();
        let e1 = c.generator(0);
        assert_eq!(c.mul(&e1, &e1), c.scalar(&f.from_i64(-1)));
        let k = c.monomial(3, &f.one());
        assert_eq!(c.mul(&k, &k), c.scalar(&f.from_i64(-1)));
        assert_eq!(c.center_basis(false).unwrap(), vec![c.one()]);
    }

    #[test]
    fn char2_relation() {
        let f = Field::parse_descriptor("F2(t)").unwrap();
        let a = f.parse("t").unwrap();
        let b = f.parse("t+1").unwrap();
        let c = CliffordAlgebra::new(&QuadraticForm::binary_char2(&f, &a, &b).unwrap());
        let u = c.monomial(3, &f.one());
        let lhs = c.add(&c.mul(&u, &u), &u);
        assert_eq!(lhs, c.scalar(&f.mul(&a, &b)));
        // conj(e1e2) = e1e2 + 1
        assert_eq!(c.quaternion_conjugate(&u).unwrap(), c.add(&u, &c.one()));
    }

    #[test]
    fn three_generators_center() {
        let q = Field::rationals();
        let c = CliffordAlgebra::new(&QuadraticForm::diagonal(&q, &ints(&q, &[-1, -1, -1])));
        let z = c.monomial(7, &q.one());
        assert_eq!(c.center_basis(false).unwrap(), vec![c.one(), z.clone()]);
        // (e1e2e3)^2 = -q1 q2 q3
        assert_eq!(c.mul(&z, &z), c.scalar(&q.from_i64(1)));
    }

    #[test]
    fn grading() {
        let c = hamilton();
        let f = c.field().clone();
        let u = c.add(&c.one(), &c.generator(0));
        assert_eq!(c.grade_decompose(&u), (c.one(), c.generator(0)));
        assert!(c.monomial(3, &f.one()).is_even());
    }

    #[test]
    fn clifford_rep_examples() {
        let q = Field::rationals();
        assert!(verify_clifford_rep(&[], &QuadraticForm::empty(&q)));
        let c = hamilton();
        let l = vec![c.left_mul_matrix(&c.generator(0)), c.left_mul_matrix(&c.generator(1))];
        let form = QuadraticForm::diagonal(&q, &ints(&q, &[-1, -1]));
        assert!(verify_clifford_rep(&l, &form));
        let bad = vec![Matrix::parse(&q, &[&["0", "1"], &["0", "0"]]).unwrap()];
        assert!(!verify_clifford_rep(&bad, &QuadraticForm::diagonal(&q, &[q.one()])));
    }
}
