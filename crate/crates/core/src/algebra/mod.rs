//! Bilinear laws as structure tensors, LDB triples and isotopies.

mod attach;
mod canonical;
mod classify;
mod standard;

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};
use crate::forms::{Evidence, FormError, QuadraticForm};
use crate::linalg::{LinalgError, Matrix, Vector};
use crate::Policy;

pub use attach::{attach_form, quasi_left_inverse_space};
pub use canonical::{
    conjugation_map, construct_canonical, octonion_norm, quaternion_norm, split_law, Canonical,
};
pub use classify::{classify, ClassificationReport, Degeneracy, Invariants, TypeTag, WitnessStatus};
pub use standard::{equivalence_witness, find_unit_vector, is_standard, opposite_ldb, standardize};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LdbError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("objects live over different fields")]
    FieldMismatch,
    #[error("tensor has {got} entries, expected {expected}")]
    TensorSize { expected: usize, got: usize },
    #[error("L*(x) L.(x) is not scalar at x = {at}: cell ({row},{col})")]
    NotScalar { at: String, row: usize, col: usize },
    #[error("identity fails for the x_{a} x_{b} coefficient: cell ({row},{col})")]
    Mismatch { a: usize, b: usize, row: usize, col: usize },
    #[error("attached form is isotropic: q({rendered}) = 0")]
    Isotropic { witness: Vector, rendered: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("q(e) = {0}, expected 1")]
    NotUnit(String),
    #[error("{0} is singular")]
    Singular(&'static str),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("exhaustive check over {count} vectors exceeds budget {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
}

/// A bilinear map `A x A -> A` given by `e_i * e_j = sum_k c[i][j][k] e_k`.
#[derive(Clone)]
pub struct BilinearLaw {
    field: Field,
    n: usize,
    c: Vec<Scalar>,
    descriptor: String,
}

impl PartialEq for BilinearLaw {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.c == other.c
    }
}

impl Eq for BilinearLaw {}

impl fmt::Debug for BilinearLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.c.iter().map(|x| self.field.render(x)).collect();
        write!(f, "BilinearLaw({}, dim {}, [{}])", self.descriptor, self.n, entries.join(","))
    }
}

impl BilinearLaw {
    pub fn new(field: &Field, n: usize, tensor: Vec<Scalar>, descriptor: &str) -> Result<BilinearLaw, LdbError> {
        if n == 0 {
            return Err(LdbError::InvalidParameter("dimension must be at least 1".into()));
        }
        if tensor.len() != n * n * n {
            return Err(LdbError::TensorSize {
                expected: n * n * n,
                got: tensor.len(),
            });
        }
        Ok(BilinearLaw {
            field: field.clone(),
            n,
            c: tensor,
            descriptor: descriptor.to_string(),
        })
    }

    /// Builds the law from the products of basis vectors.
    pub fn from_products(
        field: &Field,
        n: usize,
        descriptor: &str,
        mut product: impl FnMut(usize, usize) -> Vector,
    ) -> BilinearLaw {
        let mut c = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let v = product(i, j);
                assert_eq!(v.len(), n, "product has wrong length");
                c.extend(v);
            }
        }
        BilinearLaw {
            field: field.clone(),
            n,
            c,
            descriptor: descriptor.to_string(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.n + j) * self.n + k]
    }

    /// Entries in lexicographic `(i, j, k)` order.
    pub fn tensor(&self) -> &[Scalar] {
        &self.c
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn with_descriptor(mut self, descriptor: &str) -> BilinearLaw {
        self.descriptor = descriptor.to_string();
        self
    }

    fn check_vec(&self, x: &[Scalar]) -> Result<(), LdbError> {
        if x.len() != self.n {
            return Err(LdbError::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `L(e_i)`: column `j` is `e_i * e_j`.
    pub fn basis_left(&self, i: usize) -> Matrix {
        let n = self.n;
        Matrix::from_fn(&self.field, n, n, |k, j| self.entry(i, j, k).clone())
    }

    /// Matrix of `y -> x * y`.
    pub fn left_mul_matrix(&self, x: &[Scalar]) -> Result<Matrix, LdbError> {
        self.check_vec(x)?;
        let f = &self.field;
        let n = self.n;
        let mut m = Matrix::zeros(f, n, n);
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    let c = self.entry(i, j, k);
                    if !f.is_zero(c) {
                        let v = f.add(m.get(k, j), &f.mul(xi, c));
                        m.set(k, j, v);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector, LdbError> {
        self.check_vec(y)?;
        Ok(self.left_mul_matrix(x)?.mul_vec(y))
    }

    /// The law `(x, y) -> h(f(x) * g(y))`.
    pub fn apply_isotopy(&self, f: &Matrix, g: &Matrix, h: &Matrix) -> Result<BilinearLaw, LdbError> {
        let n = self.n;
        for (m, name) in [(f, "f"), (g, "g"), (h, "h")] {
            if m.rows() != n || m.cols() != n {
                return Err(LdbError::Dimension {
                    expected: n,
                    got: m.rows().max(m.cols()),
                });
            }
            if m.field() != &self.field {
                return Err(LdbError::FieldMismatch);
            }
            if !m.is_invertible() {
                return Err(LdbError::Singular(name));
            }
        }
        let mut c = Vec::with_capacity(n * n * n);
        for i in 0..n {
            let m = h.mul(&self.left_mul_matrix(&f.col(i))?).mul(g);
            for j in 0..n {
                c.extend(m.col(j));
            }
        }
        Ok(BilinearLaw {
            field: self.field.clone(),
            n,
            c,
            descriptor: format!("isotope({})", self.descriptor),
        })
    }

    /// `(x, y) -> y * x`.
    pub fn opposite(&self) -> BilinearLaw {
        let n = self.n;
        BilinearLaw::from_products(&self.field, n, &format!("op({})", self.descriptor), |i, j| {
            (0..n).map(|k| self.entry(j, i, k).clone()).collect()
        })
    }

    /// `(x, y) -> lambda (x * y)`.
    pub fn scale(&self, lambda: &Scalar) -> BilinearLaw {
        BilinearLaw {
            field: self.field.clone(),
            n: self.n,
            c: self.c.iter().map(|x| self.field.mul(x, lambda)).collect(),
            descriptor: self.descriptor.clone(),
        }
    }

    /// Checks that every nonzero `x` has an invertible `L(x)`.
    pub fn regularity_verdict(&self, policy: &Policy) -> Result<Regularity, LdbError> {
        let f = &self.field;
        let n = self.n;
        if let Some(q) = f.order() {
            let count = q.checked_pow(n as u32).map(|c| (c - 1) / (q - 1));
            let count = match count {
                Some(c) if c <= policy.exhaustive as u128 => c,
                c => {
                    return Err(LdbError::BudgetExceeded {
                        count: c.unwrap_or(u128::MAX),
                        budget: policy.exhaustive,
                    })
                }
            };
            for x in projective_points(f, n, q) {
                if !self.left_mul_matrix(&x)?.is_invertible() {
                    return Ok(Regularity::SingularWitness(x));
                }
            }
            return Ok(Regularity::Regular { checked: count });
        }
        let mut points = Vec::new();
        for i in 0..n {
            points.push(crate::forms::unit_vec(f, n, i));
            for j in i + 1..n {
                let mut v = crate::forms::unit_vec(f, n, i);
                v[j] = f.one();
                points.push(v);
            }
        }
        let mut rng = policy.rng("regularity");
        for _ in 0..policy.samples {
            let v = random_nonzero_vector(f, n, policy.height, &mut rng);
            points.push(v);
        }
        for x in &points {
            if !self.left_mul_matrix(x)?.is_invertible() {
                return Ok(Regularity::SingularWitness(x.clone()));
            }
        }
        Ok(Regularity::SampledOnly {
            checked: points.len() as u64,
        })
    }
}

/// Outcome of [`BilinearLaw::regularity_verdict`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    /// Every nonzero vector (up to scaling) was checked.
    Regular { checked: u128 },
    SingularWitness(Vector),
    /// No zero divisor among the sampled points; not a proof.
    SampledOnly { checked: u64 },
}

/// Projective representatives (first nonzero coordinate 1) over a finite field.
pub(crate) fn projective_points(f: &Field, n: usize, q: u128) -> impl Iterator<Item = Vector> + '_ {
    (0..n).flat_map(move |lead| {
        let total = q.pow((n - lead - 1) as u32);
        (0..total).map(move |idx| {
            let mut v = vec![f.zero(); n];
            v[lead] = f.one();
            let mut r = idx;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = f.element_at(r % q);
                r /= q;
            }
            v
        })
    })
}

pub(crate) fn random_vector<R: Rng + ?Sized>(f: &Field, n: usize, height: u32, rng: &mut R) -> Vector {
    (0..n).map(|_| f.random(rng, height)).collect()
}

pub(crate) fn random_nonzero_vector<R: Rng + ?Sized>(f: &Field, n: usize, height: u32, rng: &mut R) -> Vector {
    loop {
        let v = random_vector(f, n, height, rng);
        if v.iter().any(|x| !f.is_zero(x)) {
            return v;
        }
    }
}

/// Random invertible matrix with small entries.
pub fn random_invertible<R: Rng + ?Sized>(f: &Field, n: usize, height: u32, rng: &mut R) -> Matrix {
    loop {
        let m = Matrix::from_fn(f, n, n, |_, _| f.random(rng, height));
        if m.is_invertible() {
            return m;
        }
    }
}

/// How division-ness of a triple is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Division {
    /// The attached form was proven anisotropic.
    Certified(Evidence),
    /// No isotropic vector was found, but anisotropy is not proven.
    Unverified(String),
}

/// A bilinear law with a verified bilinear quasi-left-inversion and its
/// attached quadratic form: `x * (x . y) = q(x) y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdbTriple {
    star: BilinearLaw,
    bullet: BilinearLaw,
    form: QuadraticForm,
    division: Division,
}

impl LdbTriple {
    /// Verifies the identity, interpolates `q` and asks the anisotropy oracle
    /// about it; an isotropic vector is an error.
    pub fn new(star: BilinearLaw, bullet: BilinearLaw, policy: &Policy) -> Result<LdbTriple, LdbError> {
        let form = attach_form(&star, &bullet)?;
        let division = match form.anisotropy(policy) {
            Ok(v) => match v.tag {
                crate::forms::Anisotropy::Anisotropic => Division::Certified(v.evidence),
                crate::forms::Anisotropy::Isotropic(w) => {
                    let rendered = render_vec(form.field(), &w);
                    return Err(LdbError::Isotropic { witness: w, rendered });
                }
                crate::forms::Anisotropy::Unknown => Division::Unverified(format!(
                    "no isotropic vector found ({})",
                    evidence_summary(&v.evidence)
                )),
            },
            Err(FormError::BudgetExceeded { count, budget }) => {
                Division::Unverified(format!("anisotropy not checked: {count} vectors exceed budget {budget}"))
            }
            Err(e) => return Err(e.into()),
        };
        Ok(LdbTriple {
            star,
            bullet,
            form,
            division,
        })
    }

    /// Re-verifies the identity for laws obtained from a known triple by an
    /// operation that keeps the attached form in the same isometry class.
    fn derived(star: BilinearLaw, bullet: BilinearLaw, division: Division) -> Result<LdbTriple, LdbError> {
        let form = attach_form(&star, &bullet)?;
        Ok(LdbTriple {
            star,
            bullet,
            form,
            division,
        })
    }

    pub fn star(&self) -> &BilinearLaw {
        &self.star
    }

    pub fn bullet(&self) -> &BilinearLaw {
        &self.bullet
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn division(&self) -> &Division {
        &self.division
    }

    pub fn field(&self) -> &Field {
        self.star.field()
    }

    pub fn dim(&self) -> usize {
        self.star.dim()
    }

    /// The equivalent triple `x *' y = h(f(x) * g(y))`,
    /// `x .' y = g^-1(f(x) . h^-1(y))`, whose form is `q o f`.
    pub fn apply_isotopy(&self, f: &Matrix, g: &Matrix, h: &Matrix) -> Result<LdbTriple, LdbError> {
        let star = self.star.apply_isotopy(f, g, h)?;
        let g_inv = g.inverse()?.ok_or(LdbError::Singular("g"))?;
        let h_inv = h.inverse()?.ok_or(LdbError::Singular("h"))?;
        let bullet = self.bullet.apply_isotopy(f, &h_inv, &g_inv)?;
        LdbTriple::derived(star, bullet, self.division.clone())
    }

    pub fn apply_witness(&self, w: &EquivalenceWitness) -> Result<LdbTriple, LdbError> {
        self.apply_isotopy(&w.f, &w.g, &w.h)
    }

    /// `(A, *, lambda .)`, whose form is `lambda q`.
    pub fn rescale_bullet(&self, lambda: &Scalar) -> Result<LdbTriple, LdbError> {
        if self.field().is_zero(lambda) {
            return Err(LdbError::InvalidParameter("scale factor is zero".into()));
        }
        LdbTriple::derived(self.star.clone(), self.bullet.scale(lambda), self.division.clone())
    }
}

/// `f, g, h` with `x *' y = h(f(x) * g(y))` and `x .' y = g^-1(f(x) . h^-1(y))`
/// from a source triple to a target triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub f: Matrix,
    pub g: Matrix,
    pub h: Matrix,
}

impl EquivalenceWitness {
    pub fn identity(field: &Field, n: usize) -> EquivalenceWitness {
        let id = Matrix::identity(field, n);
        EquivalenceWitness {
            f: id.clone(),
            g: id.clone(),
            h: id,
        }
    }

    /// Witness for `x *' y = u^-1(u(x) * u(y))`, carrying a triple on `B` back
    /// to `A` along `u : A -> B`.
    pub fn transport(u: &Matrix) -> Result<EquivalenceWitness, LdbError> {
        let inv = u.inverse()?.ok_or(LdbError::Singular("isometry"))?;
        Ok(EquivalenceWitness {
            f: u.clone(),
            g: u.clone(),
            h: inv,
        })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &EquivalenceWitness) -> EquivalenceWitness {
        EquivalenceWitness {
            f: self.f.mul(&next.f),
            g: self.g.mul(&next.g),
            h: next.h.mul(&self.h),
        }
    }

    pub fn inverse(&self) -> Result<EquivalenceWitness, LdbError> {
        Ok(EquivalenceWitness {
            f: self.f.inverse()?.ok_or(LdbError::Singular("f"))?,
            g: self.g.inverse()?.ok_or(LdbError::Singular("g"))?,
            h: self.h.inverse()?.ok_or(LdbError::Singular("h"))?,
        })
    }

    /// Checks both defining identities as tensor identities.
    pub fn validate(&self, source: &LdbTriple, target: &LdbTriple) -> bool {
        let (Ok(Some(g_inv)), Ok(Some(h_inv))) = (self.g.inverse(), self.h.inverse()) else {
            return false;
        };
        let star = source.star.apply_isotopy(&self.f, &self.g, &self.h);
        let bullet = source.bullet.apply_isotopy(&self.f, &h_inv, &g_inv);
        matches!((star, bullet), (Ok(s), Ok(b)) if s == target.star && b == target.bullet)
    }
}

pub fn render_vec(f: &Field, v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| f.render(x)).collect();
    format!("({})", parts.join(", "))
}

pub fn evidence_summary(e: &Evidence) -> String {
    match e {
        Evidence::Exhaustive { checked } => format!("exhaustive, {checked} vectors"),
        Evidence::Definiteness => "definite over Q".into(),
        Evidence::BinaryCriterion => "binary criterion".into(),
        Evidence::PIndependence => "p-independence".into(),
        Evidence::BasisVector => "basis vector".into(),
        Evidence::BoundedSearch { tried } => format!("bounded search, {tried} vectors"),
    }
}
