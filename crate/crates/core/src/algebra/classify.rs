//! Classification of LDB triples against the canonical models.

use super::{construct_canonical, equivalence_witness, find_unit_vector, Canonical, EquivalenceWitness};
use super::{Division, LdbError, LdbTriple};
use crate::field::{ArtinSchreier, Field, Scalar};
use crate::forms::{unit_vec, ArfTriviality, QuadraticForm};
use crate::linalg::{Matrix, Vector};
use crate::Policy;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    NonDegenerate,
    TotallyDegenerate,
}

impl Degeneracy {
    pub fn name(&self) -> &'static str {
        match self {
            Degeneracy::NonDegenerate => "non-degenerate",
            Degeneracy::TotallyDegenerate => "totally-degenerate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeTag {
    Dim1,
    QuadraticSeparable,
    /// Two-dimensional and totally degenerate: an inseparable quadratic
    /// extension, which is also the one-generator hyper-radicial algebra.
    QuadraticInseparable,
    Quaternionic,
    Octonionic,
    HyperRadicial,
}

impl TypeTag {
    pub fn name(&self) -> &'static str {
        match self {
            TypeTag::Dim1 => "dim1",
            TypeTag::QuadraticSeparable => "quadratic-separable",
            TypeTag::QuadraticInseparable => "quadratic-inseparable-hyper-radicial",
            TypeTag::Quaternionic => "quaternionic",
            TypeTag::Octonionic => "octonionic",
            TypeTag::HyperRadicial => "hyper-radicial",
        }
    }

    /// Whether a triple built by `kind` may carry this tag.
    pub fn matches(&self, field: &Field, kind: &Canonical) -> bool {
        match (self, kind) {
            (TypeTag::Dim1, Canonical::Dim1) => true,
            (TypeTag::Dim1, Canonical::HyperRadicial { gens }) => gens.is_empty(),
            (TypeTag::QuadraticSeparable, Canonical::Quadratic { c1, .. }) => {
                field.characteristic() != 2 || !field.is_zero(c1)
            }
            (TypeTag::QuadraticInseparable, Canonical::Quadratic { c1, .. }) => {
                field.characteristic() == 2 && field.is_zero(c1)
            }
            (TypeTag::QuadraticInseparable, Canonical::HyperRadicial { gens }) => gens.len() == 1,
            (TypeTag::Quaternionic, Canonical::Quaternion { .. }) => true,
            (TypeTag::Octonionic, Canonical::Octonion { .. }) => true,
            (TypeTag::HyperRadicial, Canonical::HyperRadicial { gens }) => gens.len() > 1,
            _ => false,
        }
    }
}

/// Invariant data read off the (rescaled) attached form.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Invariants {
    /// Square-class representative, characteristic not 2.
    pub discriminant: Option<Scalar>,
    /// Arf representative and its triviality, characteristic 2.
    pub arf: Option<(Scalar, ArfTriviality)>,
    /// Named parameters of the canonical model.
    pub slots: Vec<(String, Scalar)>,
    /// Generator squares of a hyper-radicial model.
    pub generators: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessStatus {
    /// Validated witness from the rescaled triple to the model.
    Validated(EquivalenceWitness),
    Undetermined(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub degeneracy: Degeneracy,
    pub dimension: usize,
    pub tag: TypeTag,
    /// The bullet law was multiplied by `lambda` so that `q(unit) = 1`.
    pub lambda: Scalar,
    pub unit: Vector,
    pub invariants: Invariants,
    pub model: Option<Canonical>,
    pub witness: WitnessStatus,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    pub fn is_determined(&self) -> bool {
        matches!(self.witness, WitnessStatus::Validated(_))
    }
}

/// A model together with `B`, whose columns are the images of the model's
/// basis vectors, so that `q_model(B^-1 x) = q(x)`.
struct ModelChoice {
    model: Canonical,
    basis: Matrix,
}

pub fn classify(t: &LdbTriple, policy: &Policy) -> Result<ClassificationReport, LdbError> {
    let f = t.field().clone();
    let n = t.dim();
    let mut notes = Vec::new();
    if let Division::Unverified(why) = t.division() {
        notes.push(format!("division not certified: {why}"));
    }
    let (unit, lambda) = match find_unit_vector(t.form(), policy) {
        Some(v) => (v, f.one()),
        None => {
            let v = unit_vec(&f, n, 0);
            let lambda = f.inv(&t.form().eval(&v))?;
            (v, lambda)
        }
    };
    let scaled = if f.is_one(&lambda) {
        t.clone()
    } else {
        notes.push(format!("bullet rescaled by {}", f.render(&lambda)));
        t.rescale_bullet(&lambda)?
    };
    let q = scaled.form().clone();
    let degenerate = !q.radical_basis().is_empty();
    if degenerate && !q.is_totally_degenerate() {
        return Err(LdbError::Assertion(
            "attached form is degenerate but not totally degenerate".into(),
        ));
    }
    let degeneracy = if degenerate {
        Degeneracy::TotallyDegenerate
    } else {
        Degeneracy::NonDegenerate
    };
    if !n.is_power_of_two() {
        return Err(LdbError::Assertion(format!("dimension {n} is not a power of 2")));
    }
    if !degenerate && ![1, 2, 4, 8].contains(&n) {
        return Err(LdbError::Assertion(format!("non-degenerate dimension {n} outside {{1,2,4,8}}")));
    }
    let mut inv = Invariants::default();
    let char2 = f.characteristic() == 2;
    if !degenerate && n >= 2 {
        if char2 {
            let rep = q.arf_invariant()?;
            let triv = q.arf_is_trivial(&rep)?;
            if n >= 4 && triv == ArfTriviality::Nontrivial {
                return Err(LdbError::Assertion("Arf invariant is nontrivial".into()));
            }
            inv.arf = Some((rep, triv));
        } else {
            let d = q.discriminant()?;
            if n >= 4 && f.is_square(&d).is_none() {
                return Err(LdbError::Assertion(format!("discriminant {} is not a square", f.render(&d))));
            }
            inv.discriminant = Some(d);
        }
    }
    let (tag, choice) = if n == 1 {
        (TypeTag::Dim1, Ok(dim1_model(&f, &unit)))
    } else if degenerate {
        let tag = if n == 2 {
            TypeTag::QuadraticInseparable
        } else {
            TypeTag::HyperRadicial
        };
        (tag, hyper_radicial_model(&q, &mut inv))
    } else {
        match (n, char2) {
            (2, _) => (TypeTag::QuadraticSeparable, Ok(quadratic_model(&q, &unit, &mut inv))),
            (4, false) => (TypeTag::Quaternionic, quaternion_model(&q, &unit, &mut inv)),
            (4, true) => (TypeTag::Quaternionic, quaternion_model_char2(&q, &unit, &mut inv)),
            (8, false) => (TypeTag::Octonionic, octonion_model(&q, &unit, &mut inv)),
            _ => (
                TypeTag::Octonionic,
                Err("no model search for 8-dimensional forms in characteristic 2".to_string()),
            ),
        }
    };
    let (model, witness) = match choice {
        Err(why) => (None, WitnessStatus::Undetermined(why)),
        Ok(choice) => {
            let status = model_witness(&scaled, &choice, &unit, policy)?;
            (Some(choice.model), status)
        }
    };
    if let WitnessStatus::Undetermined(why) = &witness {
        notes.push(format!("witness undetermined: {why}"));
    }
    Ok(ClassificationReport {
        degeneracy,
        dimension: n,
        tag,
        lambda,
        unit,
        invariants: inv,
        model,
        witness,
        notes,
    })
}

fn model_witness(t: &LdbTriple, choice: &ModelChoice, unit: &[Scalar], policy: &Policy) -> Result<WitnessStatus, LdbError> {
    let f = t.field();
    let model = match construct_canonical(f, &choice.model, policy) {
        Ok(m) => m,
        Err(e) => return Ok(WitnessStatus::Undetermined(format!("model construction failed: {e}"))),
    };
    let Some(iso) = choice.basis.inverse()? else {
        return Err(LdbError::Assertion("model basis is singular".into()));
    };
    if !crate::forms::isometry_check(t.form(), model.form(), &iso) {
        return Err(LdbError::Assertion("model basis is not an isometry".into()));
    }
    Ok(match equivalence_witness(t, &model, Some(&iso), Some(unit), policy) {
        Ok(Some(w)) => WitnessStatus::Validated(w),
        Ok(None) => WitnessStatus::Undetermined(format!("no witness found within budget {}", policy.budget)),
        Err(LdbError::Undetermined(why)) => WitnessStatus::Undetermined(why),
        Err(e) => return Err(e),
    })
}

fn dim1_model(f: &Field, unit: &[Scalar]) -> ModelChoice {
    ModelChoice {
        model: Canonical::Dim1,
        basis: Matrix::from_columns(f, 1, &[unit.to_vec()]),
    }
}

/// Completes `v` to a basis with the first standard basis vector not in its span.
fn partner(q: &QuadraticForm, v: &[Scalar]) -> Vector {
    let f = q.field();
    let n = q.dim();
    (0..n)
        .map(|i| unit_vec(f, n, i))
        .find(|w| Matrix::from_columns(f, n, &[v.to_vec(), w.clone()]).rank() == 2)
        .expect("dimension at least 2")
}

fn quadratic_model(q: &QuadraticForm, unit: &[Scalar], inv: &mut Invariants) -> ModelChoice {
    let f = q.field();
    let w = partner(q, unit);
    let c0 = q.eval(&w);
    let c1 = f.neg(&q.polar(unit, &w));
    inv.slots = vec![("c0".into(), c0.clone()), ("c1".into(), c1.clone())];
    ModelChoice {
        model: Canonical::Quadratic { c0, c1 },
        basis: Matrix::from_columns(f, 2, &[unit.to_vec(), w]),
    }
}

/// Basis of `{x : b(x, v) = 0 for v in vs}`.
fn orthogonal_complement(q: &QuadraticForm, vs: &[Vector]) -> Vec<Vector> {
    let f = q.field();
    let b = q.polar_matrix();
    let rows: Vec<Vector> = vs.iter().map(|v| b.mul_vec(v)).collect();
    Matrix::from_rows(f, &rows).expect("rectangular").kernel_basis()
}

/// Orthogonal basis `unit, v_1, .., v_{n-1}` with values `1, d_1, ..`.
fn orthogonal_basis(q: &QuadraticForm, unit: &[Scalar]) -> Result<(Vec<Vector>, Vec<Scalar>), String> {
    let f = q.field();
    let n = q.dim();
    let perp = orthogonal_complement(q, &[unit.to_vec()]);
    let w = Matrix::from_columns(f, n, &perp);
    let restricted = q.pullback(&w).map_err(|e| e.to_string())?;
    let (p, d) = restricted.diagonalize().map_err(|e| e.to_string())?;
    let mut vs = vec![unit.to_vec()];
    vs.extend(w.mul(&p).columns());
    let mut ds = vec![f.one()];
    ds.extend(d);
    Ok((vs, ds))
}

fn scaled_column(f: &Field, v: &[Scalar], value: &Scalar, target: &Scalar) -> Option<Vector> {
    // q(v / r) = value / r^2 = target
    let r = f.is_square(&f.div(value, target).ok()?)?;
    let r_inv = f.inv(&r).ok()?;
    Some(v.iter().map(|x| f.mul(x, &r_inv)).collect())
}

fn quaternion_model(q: &QuadraticForm, unit: &[Scalar], inv: &mut Invariants) -> Result<ModelChoice, String> {
    let f = q.field();
    let (vs, d) = orthogonal_basis(q, unit)?;
    let (a, b) = (f.neg(&d[1]), f.neg(&d[2]));
    inv.slots = vec![("a".into(), a.clone()), ("b".into(), b.clone())];
    let target = f.mul(&d[1], &d[2]);
    let last = scaled_column(f, &vs[3], &d[3], &target).ok_or("d3/(d1 d2) is not a square")?;
    let q2 = QuadraticForm::diagonal(f, &[a, b]);
    Ok(ModelChoice {
        model: Canonical::Quaternion { q2 },
        basis: Matrix::from_columns(f, 4, &[vs[0].clone(), vs[1].clone(), vs[2].clone(), last]),
    })
}

/// Matches an orthogonal basis against the pattern
/// `1, d1, d2, d1 d2, c, c d1, c d2, c d1 d2` up to squares.
fn octonion_model(q: &QuadraticForm, unit: &[Scalar], inv: &mut Invariants) -> Result<ModelChoice, String> {
    let f = q.field();
    let (vs, d) = orthogonal_basis(q, unit)?;
    let rest: Vec<usize> = (1..8).collect();
    for &i1 in &rest {
        for &i2 in &rest {
            if i2 == i1 {
                continue;
            }
            let (d1, d2) = (&d[i1], &d[i2]);
            let d12 = f.mul(d1, d2);
            for &i3 in &rest {
                if [i1, i2].contains(&i3) {
                    continue;
                }
                let Some(c3) = scaled_column(f, &vs[i3], &d[i3], &d12) else {
                    continue;
                };
                for &i4 in &rest {
                    if [i1, i2, i3].contains(&i4) {
                        continue;
                    }
                    let c = &d[i4];
                    let targets = [f.mul(c, d1), f.mul(c, d2), f.mul(c, &d12)];
                    let mut used = vec![i1, i2, i3, i4];
                    let mut cols = Vec::new();
                    for t in &targets {
                        let hit = rest
                            .iter()
                            .filter(|i| !used.contains(i))
                            .find_map(|&i| scaled_column(f, &vs[i], &d[i], t).map(|col| (i, col)));
                        match hit {
                            Some((i, col)) => {
                                used.push(i);
                                cols.push(col);
                            }
                            None => break,
                        }
                    }
                    if cols.len() < 3 {
                        continue;
                    }
                    let (a, b, eps) = (f.neg(d1), f.neg(d2), f.neg(c));
                    inv.slots = vec![("a".into(), a.clone()), ("b".into(), b.clone()), ("c".into(), eps.clone())];
                    let mut basis = vec![vs[0].clone(), vs[i1].clone(), vs[i2].clone(), c3, vs[i4].clone()];
                    basis.extend(cols);
                    let q2 = QuadraticForm::diagonal(f, &[a, b]);
                    return Ok(ModelChoice {
                        model: Canonical::Octonion { q2, eps },
                        basis: Matrix::from_columns(f, 8, &basis),
                    });
                }
            }
        }
    }
    Err("orthogonal basis does not match a Pfister pattern".into())
}

/// `q = [1, c] + [alpha, beta]` from a symplectic decomposition through
/// `unit`; the model norm is `[1, alpha beta] + [alpha, beta]`, matched by
/// moving `f` to `f + z unit` with `z^2 + z = c + alpha beta`.
fn quaternion_model_char2(q: &QuadraticForm, unit: &[Scalar], inv: &mut Invariants) -> Result<ModelChoice, String> {
    let fld = q.field();
    let n = q.dim();
    let e = unit.to_vec();
    let scale = |v: &[Scalar], s: &Scalar| -> Vector { v.iter().map(|x| fld.mul(x, s)).collect() };
    let (w, bw) = (0..n)
        .map(|i| unit_vec(fld, n, i))
        .map(|w| {
            let b = q.polar(&e, &w);
            (w, b)
        })
        .find(|(_, b)| !fld.is_zero(b))
        .ok_or("unit vector lies in the radical")?;
    let fv = scale(&w, &fld.inv(&bw).map_err(|e| e.to_string())?);
    let c = q.eval(&fv);
    let perp = orthogonal_complement(q, &[e.clone(), fv.clone()]);
    let g1 = perp[0].clone();
    let b12 = q.polar(&g1, &perp[1]);
    let g2 = scale(&perp[1], &fld.inv(&b12).map_err(|e| e.to_string())?);
    let (alpha, beta) = (q.eval(&g1), q.eval(&g2));
    inv.slots = vec![("a".into(), alpha.clone()), ("b".into(), beta.clone())];
    let rep = fld.add(&c, &fld.mul(&alpha, &beta));
    let z = match fld.artin_schreier(&rep).map_err(|e| e.to_string())? {
        ArtinSchreier::Root(z) => z,
        ArtinSchreier::NotInImage => return Err("Arf representative c + ab is not of the form z^2 + z".into()),
        ArtinSchreier::Unknown(why) => return Err(format!("Artin-Schreier equation undecided: {why}")),
    };
    let last: Vector = fv.iter().zip(&e).map(|(x, y)| fld.add(x, &fld.mul(&z, y))).collect();
    let q2 = QuadraticForm::binary_char2(fld, &alpha, &beta).map_err(|e| e.to_string())?;
    Ok(ModelChoice {
        model: Canonical::Quaternion { q2 },
        basis: Matrix::from_columns(fld, 4, &[e, g1, g2, last]),
    })
}

/// Greedy generators: each diagonal value outside the `K^2`-span of the
/// products so far becomes a new generator. The isometry comes from the
/// p-basis coordinates, which are semilinear: `p(s^2 x) = s p(x)`.
fn hyper_radicial_model(q: &QuadraticForm, inv: &mut Invariants) -> Result<ModelChoice, String> {
    let f = q.field();
    let n = q.dim();
    let coords = |x: &Scalar| f.p_coordinates(x).map_err(|e| e.to_string());
    let diag: Vec<Scalar> = (0..n).map(|i| q.coeff(i, i).clone()).collect();
    let mut gens: Vec<Scalar> = Vec::new();
    let mut products = vec![f.one()];
    let width = coords(&f.one())?.len();
    let span_matrix = |ps: &[Scalar]| -> Result<Matrix, String> {
        let cols: Vec<Vector> = ps.iter().map(coords).collect::<Result<_, _>>()?;
        Ok(Matrix::from_columns(f, width, &cols))
    };
    for d in &diag {
        let m = span_matrix(&products)?;
        if m.solve(&coords(d)?).map_err(|e| e.to_string())?.is_none() {
            let more: Vec<Scalar> = products.iter().map(|p| f.mul(p, d)).collect();
            products.extend(more);
            gens.push(d.clone());
        }
    }
    if products.len() != n {
        return Err(format!(
            "{} generator products for dimension {n}",
            products.len()
        ));
    }
    let m = span_matrix(&products)?;
    let mut cols = Vec::with_capacity(n);
    for d in &diag {
        cols.push(
            m.solve(&coords(d)?)
                .map_err(|e| e.to_string())?
                .ok_or("diagonal value outside the generator span")?,
        );
    }
    // U maps A to the model; the report wants its inverse.
    let u = Matrix::from_columns(f, n, &cols);
    let basis = u.inverse().map_err(|e| e.to_string())?.ok_or("generator isometry is singular")?;
    inv.generators = gens.clone();
    Ok(ModelChoice {
        model: Canonical::HyperRadicial { gens },
        basis,
    })
}
