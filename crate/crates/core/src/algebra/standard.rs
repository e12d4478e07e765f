//! Standard LDB triples, standardization and equivalence witnesses.

use super::{conjugation_map, random_vector, EquivalenceWitness, LdbError, LdbTriple};
use crate::field::{Field, Scalar};
use crate::forms::{isometry_check, unit_vec, QuadraticForm};
use crate::linalg::{find_invertible_in_span, Matrix, Vector};
use crate::Policy;

/// True iff `e * -` is the identity and `x . y = conj(x) * y`.
pub fn is_standard(t: &LdbTriple, e: &[Scalar]) -> bool {
    let f = t.field();
    let n = t.dim();
    if e.len() != n || !f.is_one(&t.form().eval(e)) {
        return false;
    }
    let Ok(conj) = conjugation_map(t.form(), e) else {
        return false;
    };
    let id = Matrix::identity(f, n);
    let unit = t.star().left_mul_matrix(e).map(|m| m.is_identity()).unwrap_or(false);
    let standard = unit
        && t.star()
            .apply_isotopy(&conj, &id, &id)
            .map(|b| &b == t.bullet())
            .unwrap_or(false);
    if standard {
        // b(x, e) L(x) - L(x)^2 = q(x) I
        let be = t.form().polar_matrix().mul_vec(e);
        let check = |x: &Vector| {
            let l = t.star().left_mul_matrix(x).expect("dims checked");
            let bxe = dot(f, x, &be);
            let lhs = l.scale(&bxe).sub(&l.mul(&l));
            lhs == Matrix::scalar(f, n, &t.form().eval(x))
        };
        for i in 0..n {
            assert!(check(&unit_vec(f, n, i)), "standard identity fails at e{}", i + 1);
            for j in i + 1..n {
                let mut v = unit_vec(f, n, i);
                v[j] = f.one();
                assert!(check(&v), "standard identity fails at e{}+e{}", i + 1, j + 1);
            }
        }
    }
    standard
}

fn dot(f: &Field, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// Basis of `{X : X A_i = B_i X for all i}`.
///
/// The first nontrivial pair is solved over all `n^2` entries; each further
/// pair only constrains coefficients over the current basis, which keeps the
/// systems small.
fn intertwiners(f: &Field, n: usize, pairs: &[(Matrix, Matrix)]) -> Vec<Matrix> {
    let mut basis: Option<Vec<Matrix>> = None;
    for (a, b) in pairs {
        if a == b && a.is_scalar().is_some() {
            continue;
        }
        basis = Some(match basis {
            None => {
                let mut rows = Vec::with_capacity(n * n);
                for r in 0..n {
                    for c in 0..n {
                        let mut row = vec![f.zero(); n * n];
                        for s in 0..n {
                            row[r * n + s] = f.add(&row[r * n + s], a.get(s, c));
                            row[s * n + c] = f.sub(&row[s * n + c], b.get(r, s));
                        }
                        rows.push(row);
                    }
                }
                Matrix::from_rows(f, &rows)
                    .expect("rectangular")
                    .kernel_basis()
                    .into_iter()
                    .map(|v| Matrix::new(f, n, n, v).expect("square"))
                    .collect()
            }
            Some(current) => {
                let residuals: Vec<Matrix> = current.iter().map(|k| k.mul(a).sub(&b.mul(k))).collect();
                if residuals.iter().all(Matrix::is_zero) {
                    current
                } else {
                    let system = Matrix::from_columns(
                        f,
                        n * n,
                        &residuals.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>(),
                    );
                    system
                        .kernel_basis()
                        .into_iter()
                        .map(|c| crate::linalg::combine(f, &current, &c))
                        .collect()
                }
            }
        });
        if basis.as_ref().is_some_and(|b| b.is_empty()) {
            return Vec::new();
        }
    }
    basis.unwrap_or_else(|| {
        (0..n * n)
            .map(|p| Matrix::from_fn(f, n, n, |i, j| if i * n + j == p { f.one() } else { f.zero() }))
            .collect()
    })
}

/// Picks an invertible element of the span, preferring the identity.
fn invertible_in(
    f: &Field,
    n: usize,
    pairs: &[(Matrix, Matrix)],
    policy: &Policy,
    label: &str,
) -> Result<Option<Matrix>, LdbError> {
    let id = Matrix::identity(f, n);
    if pairs.iter().all(|(a, b)| a == b) {
        return Ok(Some(id));
    }
    let basis = intertwiners(f, n, pairs);
    if basis.is_empty() {
        return Ok(None);
    }
    let mut rng = policy.rng(label);
    Ok(find_invertible_in_span(&basis, policy.budget, policy.height, &mut rng)?.map(|(m, _)| m))
}

/// An equivalent `e`-standard triple with the same attached form, and the
/// witness from `t` to it.
pub fn standardize(t: &LdbTriple, e: &[Scalar], policy: &Policy) -> Result<(LdbTriple, EquivalenceWitness), LdbError> {
    let f = t.field().clone();
    let n = t.dim();
    if e.len() != n {
        return Err(LdbError::Dimension { expected: n, got: e.len() });
    }
    let q = t.form();
    let qe = q.eval(e);
    if !f.is_one(&qe) {
        return Err(LdbError::NotUnit(f.render(&qe)));
    }
    if is_standard(t, e) {
        return Ok((t.clone(), EquivalenceWitness::identity(&f, n)));
    }
    let conj = conjugation_map(q, e)?;
    // Find g, h with L.(x) = h L*(conj x) g. At x = e this fixes h from g;
    // the rest is the similarity problem g^-1 P_i g = Q_i.
    let m_e = t.star().left_mul_matrix(e)?;
    let n_e = t.bullet().left_mul_matrix(e)?;
    let m_e_inv = m_e.inverse()?.ok_or(LdbError::Singular("e * -"))?;
    let n_e_inv = n_e.inverse()?.ok_or(LdbError::Singular("e . -"))?;
    let pairs: Vec<(Matrix, Matrix)> = (0..n)
        .map(|i| -> Result<(Matrix, Matrix), LdbError> {
            let p = m_e_inv.mul(&t.star().left_mul_matrix(&conj.col(i))?);
            let qm = n_e_inv.mul(&t.bullet().basis_left(i));
            Ok((qm, p))
        })
        .collect::<Result<_, _>>()?;
    let g = invertible_in(&f, n, &pairs, policy, "standardize")?.ok_or_else(|| {
        LdbError::Undetermined(format!(
            "no invertible intertwiner found within budget {}",
            policy.budget
        ))
    })?;
    let g_inv = g.inverse()?.expect("invertible");
    let h = n_e.mul(&g_inv).mul(&m_e_inv);
    let ne = m_e.mul(&h);
    let ne_inv = ne.inverse()?.ok_or(LdbError::Singular("N(e)"))?;
    let w = EquivalenceWitness {
        f: Matrix::identity(&f, n),
        g: h,
        h: ne_inv,
    };
    let out = t.apply_witness(&w)?;
    if !is_standard(&out, e) {
        return Err(LdbError::Assertion("standardized triple is not standard".into()));
    }
    if out.form() != t.form() {
        return Err(LdbError::Assertion("standardization changed the attached form".into()));
    }
    if !w.validate(t, &out) {
        return Err(LdbError::Assertion("standardization witness does not validate".into()));
    }
    Ok((out, w))
}

/// First vector with `q(v) = 1`: basis vectors, pairwise sums, then small
/// vectors up to `policy.budget` trials.
pub fn find_unit_vector(q: &QuadraticForm, policy: &Policy) -> Option<Vector> {
    let f = q.field();
    let n = q.dim();
    let mut candidates: Vec<Vector> = (0..n).map(|i| unit_vec(f, n, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = unit_vec(f, n, i);
            v[j] = f.one();
            candidates.push(v);
        }
    }
    if let Some(v) = candidates.into_iter().find(|v| f.is_one(&q.eval(v))) {
        return Some(v);
    }
    let pool = f.enumerate(policy.height.max(1) as u64).ok()?;
    let k = pool.len() as u128;
    let total = k.checked_pow(n as u32)?;
    (1..total.min(policy.budget as u128 + 1))
        .map(|idx| {
            let mut r = idx;
            (0..n)
                .map(|_| {
                    let x = pool[(r % k) as usize].clone();
                    r /= k;
                    x
                })
                .collect::<Vector>()
        })
        .find(|v| f.is_one(&q.eval(v)))
}

/// Searches a witness from `t1` to `t2`, given `iso` with
/// `q2(iso x) = q1(x)` (identity when absent) and a common `e` with
/// `q1(e) = 1`. `Ok(None)` means nothing was found within budget.
pub fn equivalence_witness(
    t1: &LdbTriple,
    t2: &LdbTriple,
    iso: Option<&Matrix>,
    e: Option<&[Scalar]>,
    policy: &Policy,
) -> Result<Option<EquivalenceWitness>, LdbError> {
    let f = t1.field().clone();
    let n = t1.dim();
    if t2.field() != &f {
        return Err(LdbError::FieldMismatch);
    }
    if t2.dim() != n {
        return Err(LdbError::Dimension { expected: n, got: t2.dim() });
    }
    let u = iso.cloned().unwrap_or_else(|| Matrix::identity(&f, n));
    if !isometry_check(t1.form(), t2.form(), &u) {
        return Err(LdbError::InvalidParameter(
            "iso is not an isometry between the attached forms".into(),
        ));
    }
    let wt = EquivalenceWitness::transport(&u)?;
    let t2t = t2.apply_witness(&wt)?;
    let q = t1.form();
    let e: Vector = match e {
        Some(e) => e.to_vec(),
        None => find_unit_vector(q, policy).ok_or_else(|| LdbError::NotUnit("no vector found".into()))?,
    };
    let (s1, w1) = standardize(t1, &e, policy)?;
    let (s2, w2) = standardize(&t2t, &e, policy)?;
    let back = w2.inverse()?.then(&wt.inverse()?);
    for cand in conjugation_commutants(q, &e, policy)? {
        let pairs: Vec<(Matrix, Matrix)> = (0..n)
            .map(|i| -> Result<(Matrix, Matrix), LdbError> {
                Ok((s1.star().left_mul_matrix(&cand.col(i))?, s2.star().basis_left(i)))
            })
            .collect::<Result<_, _>>()?;
        let Some(h) = invertible_in(&f, n, &pairs, policy, "equivalence")? else {
            continue;
        };
        let w3 = EquivalenceWitness {
            f: cand.clone(),
            g: h.inverse()?.expect("invertible"),
            h,
        };
        if !w3.validate(&s1, &s2) {
            continue;
        }
        let total = w1.then(&w3).then(&back);
        if total.validate(t1, t2) {
            return Ok(Some(total));
        }
    }
    Ok(None)
}

/// Automorphisms commuting with `x -> conj(x)`: the identity, the
/// conjugation itself, reflections along basis vectors of `e^perp`, then
/// seeded random reflections along `e^perp`.
fn conjugation_commutants(q: &QuadraticForm, e: &[Scalar], policy: &Policy) -> Result<Vec<Matrix>, LdbError> {
    let f = q.field();
    let n = q.dim();
    let mut out = vec![Matrix::identity(f, n)];
    let conj = conjugation_map(q, e)?;
    if !conj.is_identity() {
        out.push(conj);
    }
    let be = q.polar_matrix().mul_vec(e);
    let perp = Matrix::from_rows(f, &[be]).expect("row").kernel_basis();
    for w in &perp {
        if let Ok(r) = q.reflection_matrix(w) {
            if !out.contains(&r) {
                out.push(r);
            }
        }
    }
    if !perp.is_empty() {
        let mut rng = policy.rng("commutants");
        for _ in 0..policy.patience {
            let c = random_vector(f, perp.len(), policy.height, &mut rng);
            let w = Matrix::from_columns(f, n, &perp).mul_vec(&c);
            if let Ok(r) = q.reflection_matrix(&w) {
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    Ok(out)
}

/// `(A, ., *)`, re-verified with the same form.
pub fn opposite_ldb(t: &LdbTriple) -> Result<LdbTriple, LdbError> {
    let out = LdbTriple::derived(t.bullet().clone(), t.star().clone(), t.division().clone())?;
    if out.form() != t.form() {
        return Err(LdbError::Assertion("opposite triple has a different form".into()));
    }
    Ok(out)
}
