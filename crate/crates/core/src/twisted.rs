//! The twisted operator space of an LDB triple.
//!
//! A point `p = x + (lam, mu)` of `A + K^2` is stored as a coordinate vector
//! of length `n + 2`: the coordinates of `x`, then `lam`, then `mu`. Its
//! operator acts on stacked pairs `(y, z)` by
//!
//! ```text
//! Gamma(p)(y, z) = (lam y + x * z, x . y + mu z)
//! ```
//!
//! so the block matrix is `[[lam I, L*(x)], [L.(x), mu I]]`.

use rand::Rng;

use crate::algebra::{LdbError, LdbTriple};
use crate::field::{Field, Scalar};
use crate::forms::{Anisotropy, AnisotropyVerdict, QuadraticForm};
use crate::linalg::{span_rank, Matrix, Vector};
use crate::Policy;

#[derive(Clone, Debug)]
pub struct TwistedSpace {
    base: LdbTriple,
    basis: Vec<Matrix>,
    qtilde: QuadraticForm,
}

/// How a scan chose its points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    Sampled,
}

impl ScanMode {
    pub fn name(self) -> &'static str {
        match self {
            ScanMode::Exhaustive => "exhaustive",
            ScanMode::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SingularLocusReport {
    pub mode: ScanMode,
    pub checked: u64,
    /// Points with `det Gamma = 0`.
    pub singular: u64,
    /// Points where `det Gamma = 0` and `q~ = 0` disagree.
    pub counterexamples: Vec<Vector>,
}

impl SingularLocusReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct HyperplaneFound {
    /// Functional on the `n + 2` coordinates whose kernel is the hyperplane.
    pub normal: Vector,
    pub label: String,
    pub restricted: QuadraticForm,
    pub verdict: AnisotropyVerdict,
}

#[derive(Clone, Debug)]
pub struct HyperplaneSearch {
    pub found: Option<HyperplaneFound>,
    pub tried: u64,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct MinRankReport {
    pub mode: ScanMode,
    pub checked: u64,
    pub min_rank: usize,
    pub full_rank: usize,
    /// First point (in `n + 2` coordinates) of rank below `full_rank`.
    pub degenerate: Option<Vector>,
}

#[derive(Clone, Debug)]
pub struct LocusComparison {
    pub mode: ScanMode,
    pub checked: u64,
    pub scale: Scalar,
    pub mismatches: Vec<Vector>,
}

impl TwistedSpace {
    pub fn new(base: &LdbTriple) -> TwistedSpace {
        let f = base.field();
        let n = base.dim();
        let mut basis: Vec<Matrix> = (0..n)
            .map(|i| {
                let top = Matrix::zeros(f, n, n).hstack(&base.star().basis_left(i));
                let bottom = base.bullet().basis_left(i).hstack(&Matrix::zeros(f, n, n));
                top.vstack(&bottom)
            })
            .collect();
        let id = Matrix::identity(f, n);
        let zero = Matrix::zeros(f, n, n);
        basis.push(id.hstack(&zero).vstack(&zero.hstack(&zero)));
        basis.push(zero.hstack(&zero).vstack(&zero.hstack(&id)));

        let q = base.form();
        let mut upper = Vec::with_capacity((n + 2) * (n + 3) / 2);
        for i in 0..n + 2 {
            for j in i..n + 2 {
                upper.push(if j < n {
                    q.coeff(i, j).clone()
                } else if (i, j) == (n, n + 1) {
                    f.neg(&f.one())
                } else {
                    f.zero()
                });
            }
        }
        let qtilde = QuadraticForm::from_upper(f, n + 2, &upper).expect("upper triangle has the right length");
        TwistedSpace {
            base: base.clone(),
            basis,
            qtilde,
        }
    }

    pub fn base(&self) -> &LdbTriple {
        &self.base
    }

    pub fn field(&self) -> &Field {
        self.base.field()
    }

    /// `n + 2`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Operators are `2n x 2n`.
    pub fn size(&self) -> usize {
        2 * self.base.dim()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn qtilde(&self) -> &QuadraticForm {
        &self.qtilde
    }

    pub fn gamma_operator(&self, x: &[Scalar], lam: &Scalar, mu: &Scalar) -> Result<Matrix, LdbError> {
        self.gamma_at(&point(x, lam, mu))
    }

    /// `Gamma` at a point given in `n + 2` coordinates.
    pub fn gamma_at(&self, p: &[Scalar]) -> Result<Matrix, LdbError> {
        if p.len() != self.dim() {
            return Err(LdbError::Dimension {
                expected: self.dim(),
                got: p.len(),
            });
        }
        Ok(crate::linalg::combine(self.field(), &self.basis, p))
    }

    pub fn qtilde_eval(&self, x: &[Scalar], lam: &Scalar, mu: &Scalar) -> Result<Scalar, LdbError> {
        Ok(self.qtilde.try_eval(&point(x, lam, mu))?)
    }

    fn singular_at(&self, p: &[Scalar]) -> Result<bool, LdbError> {
        Ok(self.field().is_zero(&self.gamma_at(p)?.determinant()?))
    }

    /// Checks `det Gamma(p) = 0 <=> q~(p) = 0`: over every point when the
    /// field is small enough, otherwise on basis points, pairwise sums and
    /// seeded samples (each sample also moved onto the cone as
    /// `x + (q(x), 1)`).
    pub fn singular_locus_check(&self, policy: &Policy) -> Result<SingularLocusReport, LdbError> {
        let f = self.field().clone();
        let d = self.dim();
        let mut report = SingularLocusReport {
            mode: ScanMode::Sampled,
            checked: 0,
            singular: 0,
            counterexamples: Vec::new(),
        };
        let check = |p: Vector, report: &mut SingularLocusReport| -> Result<(), LdbError> {
            let sing = self.singular_at(&p)?;
            let cone = f.is_zero(&self.qtilde.eval(&p));
            report.checked += 1;
            if sing {
                report.singular += 1;
            }
            if sing != cone {
                report.counterexamples.push(p);
            }
            Ok(())
        };
        if let Some(points) = all_points(&f, d, policy.exhaustive) {
            report.mode = ScanMode::Exhaustive;
            for p in points {
                check(p, &mut report)?;
            }
            return Ok(report);
        }
        let unit = |i: usize| crate::forms::unit_vec(&f, d, i);
        for i in 0..d {
            check(unit(i), &mut report)?;
            for j in i + 1..d {
                let s: Vector = unit(i).iter().zip(unit(j)).map(|(a, b)| f.add(a, &b)).collect();
                check(s, &mut report)?;
            }
        }
        let n = self.base.dim();
        let mut rng = policy.rng("singular-locus");
        for _ in 0..policy.samples {
            let p = random_point(&f, d, policy.height, &mut rng);
            let x = &p[..n];
            let on_cone = point(x, &self.base.form().eval(x), &f.one());
            check(p, &mut report)?;
            check(on_cone, &mut report)?;
        }
        Ok(report)
    }

    /// A nonzero `p` with `Gamma(p)(y, z) = 0`, re-verified.
    pub fn lld_certificate(&self, y: &[Scalar], z: &[Scalar]) -> Result<Vector, LdbError> {
        let n = self.base.dim();
        for v in [y, z] {
            if v.len() != n {
                return Err(LdbError::Dimension { expected: n, got: v.len() });
            }
        }
        let f = self.field();
        let yz: Vector = y.iter().chain(z).cloned().collect();
        let cols: Vec<Vector> = self.basis.iter().map(|b| b.mul_vec(&yz)).collect();
        let system = Matrix::from_columns(f, 2 * n, &cols);
        let cert = system
            .kernel_basis()
            .into_iter()
            .next()
            .ok_or_else(|| LdbError::Assertion("evaluation at (y, z) has trivial kernel".into()))?;
        if !self.gamma_at(&cert)?.mul_vec(&yz).iter().all(|c| f.is_zero(c)) {
            return Err(LdbError::Assertion("certificate does not annihilate (y, z)".into()));
        }
        Ok(cert)
    }

    /// Searches `mu = -lam`, then `mu = c lam`, then (exhaustively over finite
    /// fields, randomly elsewhere) other hyperplanes for one on which `q~`
    /// is anisotropic.
    pub fn anisotropic_hyperplane(&self, policy: &Policy) -> Result<HyperplaneSearch, LdbError> {
        let f = self.field().clone();
        let d = self.dim();
        let n = self.base.dim();
        let mut search = HyperplaneSearch {
            found: None,
            tried: 0,
            note: None,
        };
        if f.order().is_some() && n >= 2 {
            // dim >= 3 forms over finite fields are isotropic
            search.note = Some(format!(
                "no anisotropic hyperplane exists: restricted forms have dimension {} over a finite field",
                n + 1
            ));
            return Ok(search);
        }
        let lam_mu = |a: Scalar, b: Scalar| -> Vector {
            let mut v = vec![f.zero(); d];
            v[n] = a;
            v[n + 1] = b;
            v
        };
        let mut candidates: Vec<(Vector, String)> = vec![(lam_mu(f.one(), f.one()), "mu = -lam".into())];
        let scalars = match f.order() {
            Some(_) => f.enumerate(policy.exhaustive)?,
            None => f.enumerate(policy.height as u64)?,
        };
        for c in scalars {
            if f.is_zero(&c) || f.is_one(&f.neg(&c)) {
                continue;
            }
            let label = format!("mu = {} lam", f.render(&c));
            candidates.push((lam_mu(c, f.neg(&f.one())), label));
        }
        for (normal, label) in candidates {
            if let Some(hit) = self.try_hyperplane(&normal, &label, policy, &mut search)? {
                search.found = Some(hit);
                return Ok(search);
            }
        }
        match f.order() {
            Some(q) => {
                let count = q.checked_pow(d as u32).unwrap_or(u128::MAX);
                if count > policy.exhaustive as u128 {
                    search.note = Some(format!("{count} normals exceed the exhaustive budget"));
                    return Ok(search);
                }
                for normal in crate::algebra::projective_points(&f, d, q) {
                    if let Some(hit) = self.try_hyperplane(&normal, "enumerated", policy, &mut search)? {
                        search.found = Some(hit);
                        return Ok(search);
                    }
                }
                search.note = Some("every hyperplane is isotropic".into());
            }
            None => {
                let mut rng = policy.rng("hyperplane");
                for _ in 0..policy.budget {
                    let normal = random_point(&f, d, policy.height, &mut rng);
                    if let Some(hit) = self.try_hyperplane(&normal, "random", policy, &mut search)? {
                        search.found = Some(hit);
                        return Ok(search);
                    }
                }
                search.note = Some(format!("none found within budget {}", policy.budget));
            }
        }
        Ok(search)
    }

    fn try_hyperplane(
        &self,
        normal: &[Scalar],
        label: &str,
        policy: &Policy,
        search: &mut HyperplaneSearch,
    ) -> Result<Option<HyperplaneFound>, LdbError> {
        search.tried += 1;
        let p = hyperplane_basis(self.field(), normal)?;
        let restricted = self.qtilde.pullback(&p)?;
        let verdict = match restricted.anisotropy(policy) {
            Ok(v) => v,
            Err(crate::forms::FormError::BudgetExceeded { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        Ok((verdict.tag == Anisotropy::Anisotropic).then(|| HyperplaneFound {
            normal: normal.to_vec(),
            label: label.to_string(),
            restricted,
            verdict,
        }))
    }

    /// Ranks of `Gamma` over a hyperplane (or the whole space): subspace basis
    /// points first, then every nonzero point when small enough, else samples.
    pub fn min_rank_scan(&self, hyperplane: Option<&[Scalar]>, policy: &Policy) -> Result<MinRankReport, LdbError> {
        let f = self.field().clone();
        let d = self.dim();
        let span = match hyperplane {
            Some(normal) => hyperplane_basis(&f, normal)?,
            None => Matrix::identity(&f, d),
        };
        let k = span.cols();
        let full_rank = self.size();
        let mut report = MinRankReport {
            mode: ScanMode::Sampled,
            checked: 0,
            min_rank: full_rank,
            full_rank,
            degenerate: None,
        };
        let check = |c: &[Scalar], report: &mut MinRankReport| -> Result<(), LdbError> {
            let p = span.mul_vec(c);
            let r = self.gamma_at(&p)?.rank();
            report.checked += 1;
            if r < report.min_rank {
                report.min_rank = r;
            }
            if r < full_rank && report.degenerate.is_none() {
                report.degenerate = Some(p);
            }
            Ok(())
        };
        for i in 0..k {
            check(&crate::forms::unit_vec(&f, k, i), &mut report)?;
        }
        if let Some(points) = all_points(&f, k, policy.exhaustive) {
            report.mode = ScanMode::Exhaustive;
            for c in points.filter(|c| c.iter().any(|x| !f.is_zero(x))) {
                check(&c, &mut report)?;
            }
            return Ok(report);
        }
        let mut rng = policy.rng("min-rank");
        for _ in 0..policy.samples {
            let c = loop {
                let c = random_point(&f, k, policy.height, &mut rng);
                if c.iter().any(|x| !f.is_zero(x)) {
                    break c;
                }
            };
            check(&c, &mut report)?;
        }
        Ok(report)
    }

    pub fn operator_space(&self) -> OperatorSpace {
        OperatorSpace {
            basis: self.basis.clone(),
            descriptor: format!("T({})", self.base.star().descriptor()),
        }
    }

    /// The operators `Gamma(p)` with `p` in the kernel of `normal`.
    pub fn hyperplane_space(&self, normal: &[Scalar]) -> Result<OperatorSpace, LdbError> {
        let p = hyperplane_basis(self.field(), normal)?;
        let basis = p
            .columns()
            .iter()
            .map(|c| self.gamma_at(c))
            .collect::<Result<Vec<_>, _>>()?;
        OperatorSpace::new(basis, "hyperplane of T")
    }
}

/// Compares singular loci of two twisted spaces whose forms satisfy
/// `q_b(u x) = c q_a(x)`: `x + (lam, mu)` maps to `u x + (c lam, mu)`,
/// which carries the cone of `q~_a` onto that of `q~_b`.
pub fn compare_singular_loci(
    a: &TwistedSpace,
    b: &TwistedSpace,
    u: &Matrix,
    policy: &Policy,
) -> Result<LocusComparison, LdbError> {
    let f = a.field().clone();
    if b.field() != &f {
        return Err(LdbError::FieldMismatch);
    }
    let n = a.base.dim();
    if b.base.dim() != n || u.rows() != n || u.cols() != n {
        return Err(LdbError::Dimension {
            expected: n,
            got: b.base.dim(),
        });
    }
    let qa = a.base.form();
    let qb = b.base.form();
    let pulled = qb.pullback(u)?;
    let probe = (0..n)
        .map(|i| crate::forms::unit_vec(&f, n, i))
        .find(|e| !f.is_zero(&qa.eval(e)))
        .ok_or_else(|| LdbError::InvalidParameter("q_a vanishes on the basis".into()))?;
    let c = f.div(&pulled.eval(&probe), &qa.eval(&probe))?;
    if pulled != qa.scale(&c)? {
        return Err(LdbError::InvalidParameter("u is not a similarity between the forms".into()));
    }
    let map = |p: &[Scalar]| -> Vector {
        let mut out = u.mul_vec(&p[..n]);
        out.push(f.mul(&c, &p[n]));
        out.push(p[n + 1].clone());
        out
    };
    let mut report = LocusComparison {
        mode: ScanMode::Sampled,
        checked: 0,
        scale: c.clone(),
        mismatches: Vec::new(),
    };
    let check = |p: Vector, report: &mut LocusComparison| -> Result<(), LdbError> {
        report.checked += 1;
        if a.singular_at(&p)? != b.singular_at(&map(&p))? {
            report.mismatches.push(p);
        }
        Ok(())
    };
    if let Some(points) = all_points(&f, n + 2, policy.exhaustive) {
        report.mode = ScanMode::Exhaustive;
        for p in points {
            check(p, &mut report)?;
        }
        return Ok(report);
    }
    let mut rng = policy.rng("locus-comparison");
    for _ in 0..policy.samples {
        let p = random_point(&f, n + 2, policy.height, &mut rng);
        let on_cone = point(&p[..n], &qa.eval(&p[..n]), &f.one());
        check(p, &mut report)?;
        check(on_cone, &mut report)?;
    }
    Ok(report)
}

/// A linearly independent family of `rows x cols` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSpace {
    basis: Vec<Matrix>,
    descriptor: String,
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub closure: OperatorSpace,
    /// True when every `x` was enforced (finite fields within budget).
    pub exact: bool,
    pub enforced: u64,
    /// Consecutive random `x` that left the solution space unchanged.
    pub stable: u32,
}

impl ClosureReport {
    /// The closure strictly contains the input space.
    pub fn grew(&self, s: &OperatorSpace) -> bool {
        self.closure.dim() > s.dim()
    }
}

impl OperatorSpace {
    pub fn new(basis: Vec<Matrix>, descriptor: &str) -> Result<OperatorSpace, LdbError> {
        let Some(first) = basis.first() else {
            return Err(LdbError::InvalidParameter("operator space needs a basis".into()));
        };
        if basis.iter().any(|m| m.rows() != first.rows() || m.cols() != first.cols()) {
            return Err(LdbError::InvalidParameter("basis matrices differ in shape".into()));
        }
        if span_rank(first.field(), &basis) != basis.len() {
            return Err(LdbError::InvalidParameter("basis is linearly dependent".into()));
        }
        Ok(OperatorSpace {
            basis,
            descriptor: descriptor.to_string(),
        })
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn field(&self) -> &Field {
        self.basis[0].field()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        let mut all = self.basis.clone();
        all.push(m.clone());
        span_rank(self.field(), &all) == self.dim()
    }
}

/// `{F : F x in S x for every enforced x}`.
///
/// Over finite fields within `policy.exhaustive` every `x` (up to scaling) is
/// enforced and the result is exact. Elsewhere seeded random `x` are added
/// until `policy.patience` consecutive ones leave the solution space
/// unchanged; the result then contains the true closure.
pub fn reflexive_closure(s: &OperatorSpace, policy: &Policy) -> Result<ClosureReport, LdbError> {
    let f = s.field().clone();
    let rows = s.basis[0].rows();
    let cols = s.basis[0].cols();
    let unknowns = rows * cols;
    let mut eqs: Vec<Vector> = Vec::new();
    let enforce = |x: &[Scalar], eqs: &mut Vec<Vector>| {
        let images: Vec<Vector> = s.basis.iter().map(|b| b.mul_vec(x)).collect();
        // functionals vanishing on S x
        let annihilators = Matrix::from_rows(&f, &images).expect("rectangular").kernel_basis();
        for alpha in annihilators {
            let mut row = vec![f.zero(); unknowns];
            for r in 0..rows {
                if f.is_zero(&alpha[r]) {
                    continue;
                }
                for c in 0..cols {
                    row[r * cols + c] = f.mul(&alpha[r], &x[c]);
                }
            }
            eqs.push(row);
        }
        if eqs.len() > 2 * unknowns {
            *eqs = reduce_rows(&f, eqs);
        }
    };
    let mut report_exact = false;
    let mut enforced = 0u64;
    let mut stable = 0u32;
    match f.order() {
        Some(q) if q.checked_pow(cols as u32).is_some_and(|c| c <= policy.exhaustive as u128) => {
            for x in crate::algebra::projective_points(&f, cols, q) {
                enforce(&x, &mut eqs);
                enforced += 1;
            }
            report_exact = true;
        }
        _ => {
            let mut rng = policy.rng("reflexive-closure");
            let mut rank = 0;
            while stable < policy.patience && enforced < policy.budget {
                let x = random_point(&f, cols, policy.height, &mut rng);
                enforce(&x, &mut eqs);
                enforced += 1;
                let r = Matrix::from_rows(&f, &eqs).expect("rectangular").rank();
                if r == rank {
                    stable += 1;
                } else {
                    rank = r;
                    stable = 0;
                }
            }
        }
    }
    let kernel = if eqs.is_empty() {
        (0..unknowns).map(|i| crate::forms::unit_vec(&f, unknowns, i)).collect()
    } else {
        Matrix::from_rows(&f, &eqs).expect("rectangular").kernel_basis()
    };
    let basis: Vec<Matrix> = kernel
        .into_iter()
        .map(|v| Matrix::new(&f, rows, cols, v).expect("shape"))
        .collect();
    let closure = OperatorSpace::new(basis, &format!("closure({})", s.descriptor))?;
    if !s.basis.iter().all(|m| closure.contains(m)) {
        return Err(LdbError::Assertion("closure does not contain the space".into()));
    }
    Ok(ClosureReport {
        closure,
        exact: report_exact,
        enforced,
        stable,
    })
}

fn reduce_rows(f: &Field, eqs: &[Vector]) -> Vec<Vector> {
    let (r, pivots) = Matrix::from_rows(f, eqs).expect("rectangular").rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

fn point(x: &[Scalar], lam: &Scalar, mu: &Scalar) -> Vector {
    let mut p = x.to_vec();
    p.push(lam.clone());
    p.push(mu.clone());
    p
}

/// Columns spanning the kernel of a nonzero functional.
fn hyperplane_basis(f: &Field, normal: &[Scalar]) -> Result<Matrix, LdbError> {
    if normal.iter().all(|c| f.is_zero(c)) {
        return Err(LdbError::InvalidParameter("hyperplane normal is zero".into()));
    }
    let kernel = Matrix::from_rows(f, &[normal.to_vec()]).expect("row").kernel_basis();
    Ok(Matrix::from_columns(f, normal.len(), &kernel))
}

/// Every vector of `K^d` when the field is finite and `q^d <= budget`.
fn all_points(f: &Field, d: usize, budget: u64) -> Option<impl Iterator<Item = Vector> + '_> {
    let q = f.order()?;
    let total = q.checked_pow(d as u32).filter(|t| *t <= budget as u128)?;
    Some((0..total).map(move |idx| {
        let mut r = idx;
        (0..d)
            .map(|_| {
                let c = f.element_at(r % q);
                r /= q;
                c
            })
            .collect()
    }))
}

fn random_point<R: Rng + ?Sized>(f: &Field, d: usize, height: u32, rng: &mut R) -> Vector {
    (0..d).map(|_| f.random(rng, height)).collect()
}
