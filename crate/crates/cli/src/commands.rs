use std::path::Path;

use ldb_core::algebra::{
    attach_form, classify as classify_triple, construct_canonical, equivalence_witness, evidence_summary,
    quasi_left_inverse_space, render_vec, standardize as standardize_triple, BilinearLaw, Canonical, Division,
    LdbError, LdbTriple, Regularity, WitnessStatus,
};
use ldb_core::forms::{isometry_check, Anisotropy, ArfTriviality};
use ldb_core::linalg::span_rank;
use ldb_core::twisted::{reflexive_closure, TwistedSpace};
use ldb_core::{Field, Matrix, Policy, QuadraticForm, Scalar};

use crate::report::Report;
use crate::workspace::{scalars, Workspace};
use crate::{CliError, ConstructArgs, FormArgs, Kind, TripleArgs, TwistArgs};

fn precondition(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

/// Errors that describe bad input become exit 65; the rest are findings.
enum Finding {
    Failed(String),
    Undetermined(String),
}

fn classify_error(e: LdbError) -> Result<Finding, CliError> {
    match e {
        LdbError::Dimension { .. }
        | LdbError::FieldMismatch
        | LdbError::TensorSize { .. }
        | LdbError::InvalidParameter(_)
        | LdbError::NotUnit(_)
        | LdbError::Singular(_)
        | LdbError::Field(_)
        | LdbError::Form(_)
        | LdbError::Linalg(_) => Err(precondition(e)),
        LdbError::Undetermined(_) | LdbError::BudgetExceeded { .. } => Ok(Finding::Undetermined(e.to_string())),
        LdbError::NotScalar { .. } | LdbError::Mismatch { .. } | LdbError::Isotropic { .. } | LdbError::Assertion(_) => {
            Ok(Finding::Failed(e.to_string()))
        }
    }
}

/// Records a non-precondition error in the report; `None` means the command
/// cannot continue.
fn record<T>(report: &mut Report, label: &str, r: Result<T, LdbError>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) => {
            match classify_error(e)? {
                Finding::Failed(msg) => report.fail(format!("{label}: {msg}")),
                Finding::Undetermined(msg) => report.undetermined(format!("{label}: {msg}")),
            }
            Ok(None)
        }
    }
}

fn read_workspace(path: &Path) -> Result<Workspace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Precondition(format!("cannot read {}: {e}", path.display())))?;
    Workspace::parse(&text)
}

fn write_workspace(path: &Path, ws: &Workspace) -> Result<(), CliError> {
    std::fs::write(path, ws.render()).map_err(|e| CliError::Precondition(format!("cannot write {}: {e}", path.display())))
}

fn laws(ws: &Workspace, a: &TripleArgs) -> Result<(BilinearLaw, BilinearLaw), CliError> {
    Ok((ws.law(&a.star)?.clone(), ws.law(&a.bullet)?.clone()))
}

fn load_triple(ws: &Workspace, a: &TripleArgs, policy: &Policy, report: &mut Report) -> Result<Option<LdbTriple>, CliError> {
    let (star, bullet) = laws(ws, a)?;
    record(report, "triple", LdbTriple::new(star, bullet, policy))
}

fn render_matrix(f: &Field, m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| f.render(x)).collect::<Vec<_>>().join(", "))
        .collect();
    format!("[{}]", rows.join("; "))
}

/// `<d1, ..., dn>` for diagonal forms, `[a, b]` for binary forms with polar
/// coefficient 1, else the upper triangle.
fn show_form(q: &QuadraticForm) -> String {
    let f = q.field();
    let n = q.dim();
    let off_zero = (0..n).all(|i| (i + 1..n).all(|j| f.is_zero(q.coeff(i, j))));
    let diag: Vec<Scalar> = (0..n).map(|i| q.coeff(i, i).clone()).collect();
    if off_zero {
        format!("<{}>", render_list(f, &diag))
    } else if n == 2 && f.is_one(q.coeff(0, 1)) {
        format!("[{}]", render_list(f, &diag))
    } else {
        format!("upper({})", render_list(f, &q.upper()))
    }
}

fn render_list(f: &Field, v: &[Scalar]) -> String {
    v.iter().map(|x| f.render(x)).collect::<Vec<_>>().join(", ")
}

fn division_note(t: &LdbTriple, report: &mut Report) {
    match t.division() {
        Division::Certified(ev) => report.pass(format!("attached form anisotropic ({})", evidence_summary(ev))),
        Division::Unverified(why) => report.undetermined(format!("anisotropy: {why}")),
    }
}

fn model_summary(f: &Field, m: &Canonical) -> String {
    match m {
        Canonical::Dim1 => "dim1".into(),
        Canonical::Quadratic { c0, c1 } => format!("quadratic X^2 + ({})X + ({})", f.render(c1), f.render(c0)),
        Canonical::Quaternion { q2 } => format!("quaternion q2 = {}", show_form(q2)),
        Canonical::Octonion { q2, eps } => format!("octonion q2 = {}, eps = {}", show_form(q2), f.render(eps)),
        Canonical::HyperRadicial { gens } => format!("hyper_radicial gens = {}", render_list(f, gens)),
    }
}

fn one(f: &Field, text: Option<&str>, flag: &str) -> Result<Scalar, CliError> {
    let text = text.ok_or_else(|| CliError::Parse(format!("--{flag} is required for this kind")))?;
    f.parse(text).map_err(|e| CliError::Parse(format!("--{flag}: {e}")))
}

fn binary(f: &Field, text: Option<&str>) -> Result<QuadraticForm, CliError> {
    let text = text.ok_or_else(|| CliError::Parse("--q2 is required for this kind".into()))?;
    let v = scalars(f, 0, text)?;
    if v.len() != 2 {
        return Err(CliError::Parse("--q2 takes two entries a,b".into()));
    }
    if f.characteristic() == 2 {
        QuadraticForm::binary_char2(f, &v[0], &v[1]).map_err(precondition)
    } else {
        Ok(QuadraticForm::diagonal(f, &v))
    }
}

pub fn construct(a: &ConstructArgs, policy: &Policy) -> Result<Report, CliError> {
    let f = Field::parse_descriptor(&a.field).map_err(|e| CliError::Parse(format!("--field: {e}")))?;
    let kind = match a.kind {
        Kind::Dim1 => Canonical::Dim1,
        Kind::Quadratic => Canonical::Quadratic {
            c0: one(&f, a.c0.as_deref(), "c0")?,
            c1: one(&f, a.c1.as_deref(), "c1")?,
        },
        Kind::Quaternion => Canonical::Quaternion {
            q2: binary(&f, a.q2.as_deref())?,
        },
        Kind::Octonion => Canonical::Octonion {
            q2: binary(&f, a.q2.as_deref())?,
            eps: one(&f, a.eps.as_deref(), "eps")?,
        },
        Kind::HyperRadicial => Canonical::HyperRadicial {
            gens: scalars(&f, 0, a.gens.as_deref().unwrap_or(""))?,
        },
    };
    let mut report = Report::new("construct");
    report.value("field", f.to_string());
    report.value("kind", kind.name());
    let Some(t) = record(&mut report, "construction", construct_canonical(&f, &kind, policy))? else {
        return Ok(report);
    };
    report.value("model", model_summary(&f, &kind));
    report.value("dimension", t.dim().to_string());
    report.value("form", show_form(t.form()));
    report.pass("x * (x . y) = q(x) y holds as a tensor identity");
    division_note(&t, &mut report);
    let mut ws = Workspace::new(&f);
    ws.laws.push(("star".into(), t.star().clone()));
    ws.laws.push(("bullet".into(), t.bullet().clone()));
    ws.forms.push(("q".into(), t.form().clone()));
    let e: Vec<Scalar> = (0..t.dim()).map(|i| if i == 0 { f.one() } else { f.zero() }).collect();
    ws.vecs.push(("e".into(), e));
    if let Some(path) = &a.out {
        write_workspace(path, &ws)?;
        report.value("written", path.display().to_string());
    }
    Ok(report)
}

pub fn attach(a: &TripleArgs) -> Result<Report, CliError> {
    let ws = read_workspace(&a.file)?;
    let (star, bullet) = laws(&ws, a)?;
    let mut report = Report::new("attach");
    let Some(q) = record(&mut report, "attach", attach_form(&star, &bullet))? else {
        return Ok(report);
    };
    report.value("form", show_form(&q));
    report.pass("L*(x) L.(x) = q(x) I coefficient by coefficient");
    if let Ok(stored) = ws.form("q") {
        if stored == &q {
            report.pass("matches stored form q");
        } else {
            report.fail(format!("stored form q is {}", show_form(stored)));
        }
    }
    Ok(report)
}

pub fn verify(a: &TripleArgs, policy: &Policy) -> Result<Report, CliError> {
    let ws = read_workspace(&a.file)?;
    let mut report = Report::new("verify");
    let Some(t) = load_triple(&ws, a, policy, &mut report)? else {
        return Ok(report);
    };
    let f = t.field().clone();
    report.value("dimension", t.dim().to_string());
    report.value("form", show_form(t.form()));
    report.pass("x * (x . y) = q(x) y holds as a tensor identity");
    division_note(&t, &mut report);
    match t.star().regularity_verdict(policy) {
        Ok(Regularity::Regular { checked }) => report.pass(format!("regular: exhaustive over {checked} points")),
        Ok(Regularity::SingularWitness(v)) => report.fail(format!("zero divisor {}", render_vec(&f, &v))),
        Ok(Regularity::SampledOnly { checked }) => {
            if matches!(t.division(), Division::Certified(_)) {
                report.pass(format!(
                    "regular: L*(x) is invertible whenever q(x) != 0; {checked} samples agree"
                ));
            } else {
                report.undetermined(format!("regularity sampled at {checked} points only"));
            }
        }
        Err(e) => report.undetermined(format!("regularity: {e}")),
    }
    let space = quasi_left_inverse_space(t.star());
    report.value("inversion space dimension", space.len().to_string());
    let mut all: Vec<Matrix> = space.iter().map(tensor_row).collect();
    let in_span = {
        all.push(tensor_row(t.bullet()));
        span_rank(&f, &all) == space.len()
    };
    if space.len() == 1 && in_span {
        report.pass("bilinear quasi-left-inversion is unique up to scalar");
    } else {
        report.fail(format!(
            "quasi-left-inversion space has dimension {} (bullet in span: {in_span})",
            space.len()
        ));
    }
    Ok(report)
}

fn tensor_row(law: &BilinearLaw) -> Matrix {
    Matrix::new(law.field(), 1, law.tensor().len(), law.tensor().to_vec()).expect("row")
}

pub fn standardize(a: &TripleArgs, at: &str, out: Option<&Path>, policy: &Policy) -> Result<Report, CliError> {
    let ws = read_workspace(&a.file)?;
    let mut report = Report::new("standardize");
    let Some(t) = load_triple(&ws, a, policy, &mut report)? else {
        return Ok(report);
    };
    let f = t.field().clone();
    let e = ws.vector_arg(at)?;
    report.value("at", render_vec(&f, &e));
    let Some((s, w)) = record(&mut report, "standardize", standardize_triple(&t, &e, policy))? else {
        return Ok(report);
    };
    report.value("g", render_matrix(&f, &w.g));
    report.value("h", render_matrix(&f, &w.h));
    report.pass("result is e-standard");
    report.pass("attached form preserved");
    report.pass("witness validates");
    if let Some(path) = out {
        let mut ws = Workspace::new(&f);
        ws.laws.push(("star".into(), s.star().clone()));
        ws.laws.push(("bullet".into(), s.bullet().clone()));
        ws.forms.push(("q".into(), s.form().clone()));
        ws.vecs.push(("e".into(), e));
        ws.mats.push(("f".into(), w.f.clone()));
        ws.mats.push(("g".into(), w.g.clone()));
        ws.mats.push(("h".into(), w.h.clone()));
        write_workspace(path, &ws)?;
        report.value("written", path.display().to_string());
    }
    Ok(report)
}

pub fn classify(a: &TripleArgs, policy: &Policy) -> Result<Report, CliError> {
    let ws = read_workspace(&a.file)?;
    let mut report = Report::new("classify");
    let Some(t) = load_triple(&ws, a, policy, &mut report)? else {
        return Ok(report);
    };
    let f = t.field().clone();
    let Some(c) = record(&mut report, "classify", classify_triple(&t, policy))? else {
        return Ok(report);
    };
    report.value("degeneracy", c.degeneracy.name());
    report.value("dimension", c.dimension.to_string());
    report.value("type", c.tag.name());
    report.value("lambda", f.render(&c.lambda));
    report.value("unit", render_vec(&f, &c.unit));
    if let Some(d) = &c.invariants.discriminant {
        report.value("discriminant", f.render(d));
    }
    if let Some((rep, triv)) = &c.invariants.arf {
        let verdict = match triv {
            ArfTriviality::Trivial { root } => format!("trivial (root {})", f.render(root)),
            ArfTriviality::Nontrivial => "nontrivial".into(),
            ArfTriviality::Unknown { trace } => {
                report.undetermined(format!("Arf invariant: {trace}"));
                "unknown".into()
            }
        };
        report.value("arf", format!("{} {verdict}", f.render(rep)));
    }
    if !c.invariants.slots.is_empty() {
        let slots: Vec<String> = c.invariants.slots.iter().map(|(k, v)| format!("{k} = {}", f.render(v))).collect();
        report.value("slots", slots.join(", "));
    }
    if !c.invariants.generators.is_empty() {
        report.value("generators", render_list(&f, &c.invariants.generators));
    }
    if let Some(m) = &c.model {
        report.value("model", model_summary(&f, m));
    }
    for n in &c.notes {
        report.value("note", n.clone());
    }
    report.pass("dimension and degeneracy constraints on the attached form");
    division_note(&t, &mut report);
    match &c.witness {
        WitnessStatus::Validated(w) => {
            report.value("witness f", render_matrix(&f, &w.f));
            report.pass("witness to the canonical model validated");
        }
        WitnessStatus::Undetermined(why) => report.undetermined(format!("witness: {why}")),
    }
    Ok(report)
}

pub fn equiv(a: &Path, b: &Path, iso: Option<&str>, policy: &Policy) -> Result<Report, CliError> {
    let wa = read_workspace(a)?;
    let wb = read_workspace(b)?;
    let names = TripleArgs {
        file: a.to_path_buf(),
        star: "star".into(),
        bullet: "bullet".into(),
    };
    let mut report = Report::new("equiv");
    let Some(t1) = load_triple(&wa, &names, policy, &mut report)? else {
        return Ok(report);
    };
    let Some(t2) = load_triple(&wb, &names, policy, &mut report)? else {
        return Ok(report);
    };
    let u = match iso {
        Some(name) => Some(wa.mat(name).or_else(|_| wb.mat(name))?.clone()),
        None => None,
    };
    let f = t1.field().clone();
    let Some(found) = record(&mut report, "equiv", equivalence_witness(&t1, &t2, u.as_ref(), None, policy))? else {
        return Ok(report);
    };
    match found {
        Some(w) => {
            report.value("f", render_matrix(&f, &w.f));
            report.value("g", render_matrix(&f, &w.g));
            report.value("h", render_matrix(&f, &w.h));
            report.pass("equivalence witness validated");
        }
        None => report.undetermined(format!("no witness found within budget {}", policy.budget)),
    }
    Ok(report)
}

pub fn twist(a: &TwistArgs, policy: &Policy) -> Result<Report, CliError> {
    let ws = read_workspace(&a.triple.file)?;
    let mut report = Report::new("twist");
    let Some(t) = load_triple(&ws, &a.triple, policy, &mut report)? else {
        return Ok(report);
    };
    let f = t.field().clone();
    let space = TwistedSpace::new(&t);
    report.value("operators", format!("{} of size {}", space.dim(), space.size()));
    let nothing = !(a.singular_scan || a.lld.is_some() || a.hyperplane || a.minrank || a.closure);
    if a.singular_scan || nothing {
        let Some(r) = record(&mut report, "singular scan", space.singular_locus_check(policy))? else {
            return Ok(report);
        };
        report.value(
            "singular scan",
            format!("{}, {} points, {} singular", r.mode.name(), r.checked, r.singular),
        );
        if r.holds() {
            report.pass("det Gamma = 0 exactly on the cone q~ = 0");
        }
        for p in &r.counterexamples {
            report.fail(format!("singular locus disagrees at {}", render_vec(&f, p)));
        }
    }
    if let Some(pair) = &a.lld {
        let (y, z) = pair
            .split_once(',')
            .ok_or_else(|| CliError::Parse("--lld takes y,z".into()))?;
        let zero = vec![f.zero(); t.dim()];
        let pick = |n: &str| if n == "*" { Ok(zero.clone()) } else { ws.vec(n).cloned() };
        let (y, z) = (pick(y)?, pick(z)?);
        if let Some(c) = record(&mut report, "lld", space.lld_certificate(&y, &z))? {
            report.value("lld certificate", render_vec(&f, &c));
            report.pass("certificate annihilates (y, z)");
        }
    }
    let mut normal = None;
    if a.hyperplane {
        let Some(s) = record(&mut report, "hyperplane", space.anisotropic_hyperplane(policy))? else {
            return Ok(report);
        };
        match s.found {
            Some(h) => {
                report.value("hyperplane", format!("{} normal {}", h.label, render_vec(&f, &h.normal)));
                report.value("restricted form", show_form(&h.restricted));
                report.pass(format!(
                    "restricted form anisotropic ({})",
                    evidence_summary(&h.verdict.evidence)
                ));
                normal = Some(h.normal);
            }
            None => {
                let note = s.note.unwrap_or_default();
                report.value("hyperplane", format!("none after {} candidates: {note}", s.tried));
                if f.order().is_none() {
                    report.undetermined("no anisotropic hyperplane found");
                }
            }
        }
    }
    if a.minrank {
        let Some(r) = record(&mut report, "min rank", space.min_rank_scan(normal.as_deref(), policy))? else {
            return Ok(report);
        };
        let scope = if normal.is_some() { "hyperplane" } else { "full space" };
        report.value(
            "min rank",
            format!("{} over {} ({} points, {}), full rank {}", r.min_rank, scope, r.checked, r.mode.name(), r.full_rank),
        );
        match (&r.degenerate, normal.is_some()) {
            (None, true) => report.pass("every scanned nonzero operator of the hyperplane is invertible"),
            (Some(p), true) => report.fail(format!("rank {} at {}", r.min_rank, render_vec(&f, p))),
            (Some(p), false) => report.value("low-rank point", render_vec(&f, p)),
            (None, false) => {}
        }
    }
    if a.closure {
        let s = match &normal {
            Some(n) => record(&mut report, "closure", space.hyperplane_space(n))?,
            None => Some(space.operator_space()),
        };
        let Some(s) = s else {
            return Ok(report);
        };
        let Some(c) = record(&mut report, "closure", reflexive_closure(&s, policy))? else {
            return Ok(report);
        };
        let how = if c.exact {
            format!("exact, {} points enforced", c.enforced)
        } else {
            format!("upper bound, stable for {} of {} points", c.stable, c.enforced)
        };
        report.value("closure", format!("dimension {} from {} ({how})", c.closure.dim(), s.dim()));
        if c.exact {
            report.value("reflexive", if c.grew(&s) { "no" } else { "yes" });
        }
    }
    Ok(report)
}

pub fn form(a: &FormArgs, policy: &Policy) -> Result<Report, CliError> {
    let ws = read_workspace(&a.file)?;
    let mut report = Report::new("form");
    let q = match (&a.name, ws.forms.first()) {
        (Some(n), _) => ws.form(n)?.clone(),
        (None, Some((_, q))) => q.clone(),
        (None, None) => {
            let names = TripleArgs {
                file: a.file.clone(),
                star: "star".into(),
                bullet: "bullet".into(),
            };
            let (star, bullet) = laws(&ws, &names)?;
            let Some(q) = record(&mut report, "attach", attach_form(&star, &bullet))? else {
                return Ok(report);
            };
            q
        }
    };
    let f = q.field().clone();
    let odd = f.characteristic() != 2;
    let all = !(a.diag || a.arf || a.disc || a.aniso);
    report.value("form", show_form(&q));
    report.value("degenerate", if q.is_nondegenerate() { "no" } else { "yes" });
    if (a.diag || all) && odd {
        let (p, d) = q.diagonalize().map_err(precondition)?;
        report.value("diagonal", format!("<{}>", render_list(&f, &d)));
        report.value("basis", render_matrix(&f, &p));
        if isometry_check(&QuadraticForm::diagonal(&f, &d), &q, &p) {
            report.pass("diagonalization is an isometry");
        } else {
            report.fail("diagonalization is not an isometry");
        }
    } else if a.diag {
        return Err(precondition("diagonalization needs characteristic not 2"));
    }
    if (a.disc || all) && odd {
        match q.discriminant() {
            Ok(d) => report.value("discriminant", f.render(&d)),
            Err(e) => report.value("discriminant", e.to_string()),
        }
    } else if a.disc {
        return Err(precondition("discriminant needs characteristic not 2"));
    }
    if (a.arf || all) && !odd {
        match q.arf_invariant() {
            Ok(rep) => {
                let triv = q.arf_is_trivial(&rep).map_err(precondition)?;
                let verdict = match triv {
                    ArfTriviality::Trivial { root } => format!("trivial (root {})", f.render(&root)),
                    ArfTriviality::Nontrivial => "nontrivial".into(),
                    ArfTriviality::Unknown { trace } => {
                        report.undetermined(format!("Arf invariant: {trace}"));
                        "unknown".into()
                    }
                };
                report.value("arf", format!("{} {verdict}", f.render(&rep)));
            }
            Err(e) if a.arf => return Err(precondition(e)),
            Err(e) => report.value("arf", e.to_string()),
        }
    } else if a.arf {
        return Err(precondition("the Arf invariant needs characteristic 2"));
    }
    if a.aniso || all {
        match q.anisotropy(policy) {
            Ok(v) => match &v.tag {
                Anisotropy::Anisotropic => {
                    report.value("anisotropy", format!("anisotropic ({})", evidence_summary(&v.evidence)));
                    report.pass("form is anisotropic");
                }
                Anisotropy::Isotropic(w) => {
                    report.value("anisotropy", format!("isotropic at {}", render_vec(&f, w)));
                    report.fail(format!("isotropic vector {}", render_vec(&f, w)));
                }
                Anisotropy::Unknown => {
                    report.value("anisotropy", format!("unknown ({})", evidence_summary(&v.evidence)));
                    report.undetermined("anisotropy not decided");
                }
            },
            Err(e) => report.undetermined(format!("anisotropy: {e}")),
        }
    }
    Ok(report)
}
