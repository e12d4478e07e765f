//! The canonical LDB division algebras.

use super::{BilinearLaw, LdbError, LdbTriple};
use crate::clifford::CliffordAlgebra;
use crate::field::{Field, Scalar};
use crate::forms::{unit_vec, QuadraticForm};
use crate::linalg::{Matrix, Vector};
use crate::Policy;

/// Parameters of a canonical construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canonical {
    /// `(K, ., .)`.
    Dim1,
    /// `K[X]/(X^2 + c1 X + c0)`.
    Quadratic { c0: Scalar, c1: Scalar },
    /// `C(q2)` for a regular binary form.
    Quaternion { q2: QuadraticForm },
    /// `C(q2)^2` with the doubled product twisted by `eps`.
    Octonion { q2: QuadraticForm, eps: Scalar },
    /// `K[a_1..a_k]` with `a_i^2 = c_i` in characteristic 2.
    HyperRadicial { gens: Vec<Scalar> },
}

impl Canonical {
    pub fn name(&self) -> &'static str {
        match self {
            Canonical::Dim1 => "dim1",
            Canonical::Quadratic { .. } => "quadratic",
            Canonical::Quaternion { .. } => "quaternion",
            Canonical::Octonion { .. } => "octonion",
            Canonical::HyperRadicial { .. } => "hyper_radicial",
        }
    }
}

pub fn construct_canonical(field: &Field, kind: &Canonical, policy: &Policy) -> Result<LdbTriple, LdbError> {
    let (star, conj) = match kind {
        Canonical::Dim1 => (BilinearLaw::new(field, 1, vec![field.one()], "dim1")?, None),
        Canonical::Quadratic { c0, c1 } => quadratic(field, c0, c1),
        Canonical::Quaternion { q2 } => {
            check_form(field, q2)?;
            quaternion(q2)?
        }
        Canonical::Octonion { q2, eps } => {
            check_form(field, q2)?;
            if field.is_zero(eps) {
                return Err(LdbError::InvalidParameter("eps must be nonzero".into()));
            }
            octonion(q2, eps)?
        }
        Canonical::HyperRadicial { gens } => (hyper_radicial(field, gens)?, None),
    };
    let bullet = match conj {
        Some(c) => {
            let id = Matrix::identity(field, star.dim());
            star.apply_isotopy(&c, &id, &id)?.with_descriptor(&format!("conj {}", star.descriptor()))
        }
        None => star.clone(),
    };
    LdbTriple::new(star, bullet, policy)
}

fn check_form(field: &Field, q2: &QuadraticForm) -> Result<(), LdbError> {
    if q2.field() != field {
        return Err(LdbError::FieldMismatch);
    }
    if q2.dim() != 2 || !q2.is_nondegenerate() {
        return Err(LdbError::InvalidParameter("q2 must be a regular binary form".into()));
    }
    Ok(())
}

/// `(K x K, .)`: not a division algebra.
pub fn split_law(field: &Field) -> BilinearLaw {
    BilinearLaw::from_products(field, 2, "split", |i, j| {
        let mut v = vec![field.zero(); 2];
        if i == j {
            v[i] = field.one();
        }
        v
    })
}

/// Matrix of `x -> -x + b_q(x, e) e`, i.e. `-s_e` when `q(e) = 1`.
pub fn conjugation_map(q: &QuadraticForm, e: &[Scalar]) -> Result<Matrix, LdbError> {
    let f = q.field();
    let qe = q.try_eval(e)?;
    if !f.is_one(&qe) {
        return Err(LdbError::NotUnit(f.render(&qe)));
    }
    let be = q.polar_matrix().mul_vec(e);
    let n = q.dim();
    Ok(Matrix::from_fn(f, n, n, |i, j| {
        let v = f.mul(&be[j], &e[i]);
        if i == j {
            f.sub(&v, &f.one())
        } else {
            v
        }
    }))
}

fn quadratic(field: &Field, c0: &Scalar, c1: &Scalar) -> (BilinearLaw, Option<Matrix>) {
    let f = field;
    // X^2 = -c0 - c1 X
    let star = BilinearLaw::from_products(f, 2, "quadratic", |i, j| match i + j {
        0 => vec![f.one(), f.zero()],
        1 => vec![f.zero(), f.one()],
        _ => vec![f.neg(c0), f.neg(c1)],
    });
    let separable = f.characteristic() != 2 || !f.is_zero(c1);
    // conj(X) = -c1 - X
    let conj = separable.then(|| Matrix::from_fn(f, 2, 2, |i, j| match (i, j) {
        (0, 0) => f.one(),
        (0, 1) => f.neg(c1),
        (1, 1) => f.neg(&f.one()),
        _ => f.zero(),
    }));
    (star, conj)
}

fn clifford_tables(c: &CliffordAlgebra) -> Result<(Vec<Vec<Vector>>, Matrix), LdbError> {
    let f = c.field().clone();
    let basis: Vec<_> = (0..4u32).map(|m| c.monomial(m, &f.one())).collect();
    let table = basis
        .iter()
        .map(|u| basis.iter().map(|v| c.to_coords(&c.mul(u, v))).collect())
        .collect();
    let conj_cols: Vec<Vector> = basis
        .iter()
        .map(|u| c.quaternion_conjugate(u).map(|v| c.to_coords(&v)))
        .collect::<Result<_, _>>()
        .map_err(|e| LdbError::InvalidParameter(e.to_string()))?;
    Ok((table, Matrix::from_columns(&f, 4, &conj_cols)))
}

fn quaternion(q2: &QuadraticForm) -> Result<(BilinearLaw, Option<Matrix>), LdbError> {
    let c = CliffordAlgebra::new(q2);
    let (table, conj) = clifford_tables(&c)?;
    let star = BilinearLaw::from_products(q2.field(), 4, "quaternion", |i, j| table[i][j].clone());
    Ok((star, Some(conj)))
}

/// `(a, b) x (c, d) = (ac - d conj(b), conj(a) d - eps c b)` on `C(q2)^2`,
/// basis `(e_S, 0)` then `(0, e_S)`.
fn octonion(q2: &QuadraticForm, eps: &Scalar) -> Result<(BilinearLaw, Option<Matrix>), LdbError> {
    let f = q2.field().clone();
    let c = CliffordAlgebra::new(q2);
    let (table, conj) = clifford_tables(&c)?;
    let mul = |x: &[Scalar], y: &[Scalar]| -> Vector {
        let mut out = vec![f.zero(); 4];
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if f.is_zero(yj) {
                    continue;
                }
                let w = f.mul(xi, yj);
                for (k, o) in out.iter_mut().enumerate() {
                    *o = f.add(o, &f.mul(&w, &table[i][j][k]));
                }
            }
        }
        out
    };
    let sub = |x: &[Scalar], y: &[Scalar]| -> Vector { x.iter().zip(y).map(|(a, b)| f.sub(a, b)).collect() };
    let halves = |i: usize| -> (Vector, Vector) {
        let v = unit_vec(&f, 8, i);
        (v[..4].to_vec(), v[4..].to_vec())
    };
    let star = BilinearLaw::from_products(&f, 8, "octonion", |i, j| {
        let (a, b) = halves(i);
        let (cc, d) = halves(j);
        let first = sub(&mul(&a, &cc), &mul(&d, &conj.mul_vec(&b)));
        let eps_cb: Vector = mul(&cc, &b).iter().map(|x| f.mul(eps, x)).collect();
        let second = sub(&mul(&conj.mul_vec(&a), &d), &eps_cb);
        first.into_iter().chain(second).collect()
    });
    // conj(a, b) = (conj(a), -b)
    let conj8 = Matrix::from_fn(&f, 8, 8, |i, j| match (i < 4, j < 4) {
        (true, true) => conj.get(i, j).clone(),
        (false, false) if i == j => f.neg(&f.one()),
        _ => f.zero(),
    });
    Ok((star, Some(conj8)))
}

fn hyper_radicial(field: &Field, gens: &[Scalar]) -> Result<BilinearLaw, LdbError> {
    let f = field;
    if f.characteristic() != 2 {
        return Err(LdbError::InvalidParameter(
            "hyper-radicial extensions need characteristic 2".into(),
        ));
    }
    let k = gens.len();
    if k > 6 {
        return Err(LdbError::InvalidParameter(format!("{k} generators exceed the limit 6")));
    }
    let n = 1usize << k;
    // a_S a_T = (prod_{i in S & T} c_i) a_{S ^ T}
    Ok(BilinearLaw::from_products(f, n, "hyper_radicial", |s, t| {
        let mut v = vec![f.zero(); n];
        let coef = (0..k)
            .filter(|i| (s & t) >> i & 1 == 1)
            .fold(f.one(), |acc, i| f.mul(&acc, &gens[i]));
        v[s ^ t] = coef;
        v
    }))
}

/// Interpolates a quadratic form from its values.
fn form_from_values(field: &Field, n: usize, eval: impl Fn(&[Scalar]) -> Scalar) -> Result<QuadraticForm, LdbError> {
    let f = field;
    let diag: Vec<Scalar> = (0..n).map(|i| eval(&unit_vec(f, n, i))).collect();
    let mut upper = Vec::new();
    for i in 0..n {
        for j in i..n {
            if i == j {
                upper.push(diag[i].clone());
            } else {
                let mut v = unit_vec(f, n, i);
                v[j] = f.one();
                upper.push(f.sub(&f.sub(&eval(&v), &diag[i]), &diag[j]));
            }
        }
    }
    Ok(QuadraticForm::from_upper(f, n, &upper)?)
}

/// The norm `x conj(x)` of `C(q2)` on the basis `1, e1, e2, e1e2`.
pub fn quaternion_norm(q2: &QuadraticForm) -> Result<QuadraticForm, LdbError> {
    let c = CliffordAlgebra::new(q2);
    if q2.dim() != 2 {
        return Err(LdbError::InvalidParameter("q2 must be binary".into()));
    }
    form_from_values(q2.field(), 4, |x| {
        let u = c.from_coords(x);
        let n = c.mul(&u, &c.quaternion_conjugate(&u).expect("binary"));
        c.as_scalar(&n).expect("norm is scalar")
    })
}

/// `N(a, b) = N(a) - eps N(b)`.
pub fn octonion_norm(q2: &QuadraticForm, eps: &Scalar) -> Result<QuadraticForm, LdbError> {
    let n = quaternion_norm(q2)?;
    Ok(n.ortho_sum(&n.scale(&q2.field().neg(eps))?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: &Field, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn hamilton_norm_and_conjugation() {
        let q = Field::rationals();
        let q2 = QuadraticForm::diagonal(&q, &ints(&q, &[-1, -1]));
        let t = construct_canonical(&q, &Canonical::Quaternion { q2: q2.clone() }, &Policy::default()).unwrap();
        assert_eq!(t.form(), &QuadraticForm::diagonal(&q, &ints(&q, &[1, 1, 1, 1])));
        assert_eq!(t.form(), &quaternion_norm(&q2).unwrap());
        let conj = conjugation_map(t.form(), &unit_vec(&q, 4, 0)).unwrap();
        assert!(conj.mul(&conj).is_identity());
        // i -> matrix sending 1->i, i->-1, j->k, k->-j
        let li = t.star().left_mul_matrix(&unit_vec(&q, 4, 1)).unwrap();
        let expected = Matrix::parse(
            &q,
            &[&["0", "-1", "0", "0"], &["1", "0", "0", "0"], &["0", "0", "0", "-1"], &["0", "0", "1", "0"]],
        )
        .unwrap();
        assert_eq!(li, expected);
    }

    #[test]
    fn quaternion_norm_is_pfister() {
        let q = Field::rationals();
        let q2 = QuadraticForm::diagonal(&q, &ints(&q, &[2, -3]));
        let n = quaternion_norm(&q2).unwrap();
        assert_eq!(n, QuadraticForm::pfister(&q, &ints(&q, &[2, -3])).unwrap());
    }

    #[test]
    fn octonion_has_unity_and_norm() {
        let q = Field::rationals();
        let q2 = QuadraticForm::diagonal(&q, &ints(&q, &[-1, -1]));
        let eps = q.from_i64(-1);
        let t = construct_canonical(&q, &Canonical::Octonion { q2: q2.clone(), eps: eps.clone() }, &Policy::default())
            .unwrap();
        assert!(t.star().left_mul_matrix(&unit_vec(&q, 8, 0)).unwrap().is_identity());
        assert_eq!(t.form(), &QuadraticForm::diagonal(&q, &vec![q.one(); 8]));
        assert_eq!(t.form(), &octonion_norm(&q2, &eps).unwrap());
    }

    #[test]
    fn char2_constructions() {
        let f = Field::parse_descriptor("F2(t)").unwrap();
        let tt = f.parse("t").unwrap();
        let p = Policy::default();
        let sep = construct_canonical(&f, &Canonical::Quadratic { c0: tt.clone(), c1: f.one() }, &p).unwrap();
        assert_eq!(sep.form(), &QuadraticForm::binary_char2(&f, &f.one(), &tt).unwrap());
        let hr = construct_canonical(&f, &Canonical::HyperRadicial { gens: vec![tt.clone()] }, &p).unwrap();
        assert_eq!(hr.form(), &QuadraticForm::diagonal(&f, &[f.one(), tt.clone()]));
        assert!(hr.form().is_totally_degenerate());
        let bad = construct_canonical(&f, &Canonical::HyperRadicial { gens: vec![tt.clone(), f.parse("t^3").unwrap()] }, &p);
        assert!(matches!(bad, Err(LdbError::Isotropic { .. })));
    }

    #[test]
    fn split_quadratic_is_rejected() {
        let q = Field::rationals();
        // X^2 - 1 = (X - 1)(X + 1)
        let r = construct_canonical(&q, &Canonical::Quadratic { c0: q.from_i64(-1), c1: q.zero() }, &Policy::default());
        assert!(matches!(r, Err(LdbError::Isotropic { .. })));
    }
}
