//! Line-oriented workspace files.
//!
//! ```text
//! field Q
//! form q dim 2 coeffs 1,0,1
//! law star dim 1 tensor 1
//! vec e 1,0
//! mat u rows 2 cols 2 entries 1,0,0,1
//! ```
//!
//! `#` starts a comment line. Form coefficients are the upper triangle in row
//! order, tensors list `c[i][j][k]` lexicographically, matrices are row-major.

use std::fmt::Write as _;

use ldb_core::algebra::BilinearLaw;
use ldb_core::{Field, Matrix, QuadraticForm, Scalar, Vector};

use crate::CliError;

#[derive(Clone, Debug)]
pub struct Workspace {
    pub field: Field,
    pub forms: Vec<(String, QuadraticForm)>,
    pub laws: Vec<(String, BilinearLaw)>,
    pub vecs: Vec<(String, Vector)>,
    pub mats: Vec<(String, Matrix)>,
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("line {line}: {msg}"))
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str, what: &str) -> Result<&'a T, CliError> {
    items
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v)
        .ok_or_else(|| CliError::Precondition(format!("no {what} named `{name}`")))
}

impl Workspace {
    pub fn new(field: &Field) -> Workspace {
        Workspace {
            field: field.clone(),
            forms: Vec::new(),
            laws: Vec::new(),
            vecs: Vec::new(),
            mats: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Workspace, CliError> {
        let mut ws: Option<Workspace> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (keyword, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            let rest = rest.trim();
            if keyword == "field" {
                if ws.is_some() {
                    return Err(parse_err(line, "second field header"));
                }
                let f = Field::parse_descriptor(rest).map_err(|e| parse_err(line, e))?;
                ws = Some(Workspace::new(&f));
                continue;
            }
            let ws = ws.as_mut().ok_or_else(|| parse_err(line, "the `field` header must come first"))?;
            let f = ws.field.clone();
            let (name, rest) = rest
                .split_once(char::is_whitespace)
                .ok_or_else(|| parse_err(line, format!("`{keyword}` needs a name and a body")))?;
            let name = name.to_string();
            let taken = ws.forms.iter().map(|x| &x.0).chain(ws.laws.iter().map(|x| &x.0));
            if taken.chain(ws.vecs.iter().map(|x| &x.0)).chain(ws.mats.iter().map(|x| &x.0)).any(|n| *n == name) {
                return Err(parse_err(line, format!("`{name}` is defined twice")));
            }
            match keyword {
                "form" => {
                    let (n, list) = sized(line, rest, "dim", "coeffs")?;
                    let vals = scalars(&f, line, list)?;
                    let q = QuadraticForm::from_upper(&f, n, &vals).map_err(|e| parse_err(line, e))?;
                    ws.forms.push((name, q));
                }
                "law" => {
                    let (n, list) = sized(line, rest, "dim", "tensor")?;
                    let vals = scalars(&f, line, list)?;
                    let law = BilinearLaw::new(&f, n, vals, &name).map_err(|e| parse_err(line, e))?;
                    ws.laws.push((name, law));
                }
                "vec" => ws.vecs.push((name, scalars(&f, line, rest)?)),
                "mat" => {
                    let (r, after) = sized(line, rest, "rows", "cols")?;
                    let (num, tail) = after.split_once(char::is_whitespace).ok_or_else(|| parse_err(line, "expected `entries`"))?;
                    let c: usize = num.parse().map_err(|_| parse_err(line, format!("bad cols `{num}`")))?;
                    let list = tail.trim_start().strip_prefix("entries").ok_or_else(|| parse_err(line, "expected `entries`"))?;
                    let vals = scalars(&f, line, list)?;
                    let m = Matrix::new(&f, r, c, vals).map_err(|e| parse_err(line, e))?;
                    ws.mats.push((name, m));
                }
                other => return Err(parse_err(line, format!("unknown keyword `{other}`"))),
            }
        }
        ws.ok_or_else(|| CliError::Parse("missing `field` header".into()))
    }

    pub fn render(&self) -> String {
        let f = &self.field;
        let join = |v: &[Scalar]| v.iter().map(|x| f.render(x)).collect::<Vec<_>>().join(",");
        let mut out = format!("field {f}\n");
        for (name, q) in &self.forms {
            let _ = writeln!(out, "form {name} dim {} coeffs {}", q.dim(), join(&q.upper()));
        }
        for (name, law) in &self.laws {
            let _ = writeln!(out, "law {name} dim {} tensor {}", law.dim(), join(law.tensor()));
        }
        for (name, v) in &self.vecs {
            let _ = writeln!(out, "vec {name} {}", join(v));
        }
        for (name, m) in &self.mats {
            let _ = writeln!(out, "mat {name} rows {} cols {} entries {}", m.rows(), m.cols(), join(m.entries()));
        }
        out
    }

    pub fn law(&self, name: &str) -> Result<&BilinearLaw, CliError> {
        lookup(&self.laws, name, "law")
    }

    pub fn form(&self, name: &str) -> Result<&QuadraticForm, CliError> {
        lookup(&self.forms, name, "form")
    }

    pub fn vec(&self, name: &str) -> Result<&Vector, CliError> {
        lookup(&self.vecs, name, "vec")
    }

    pub fn mat(&self, name: &str) -> Result<&Matrix, CliError> {
        lookup(&self.mats, name, "mat")
    }

    /// A named vector, or a comma-separated literal.
    pub fn vector_arg(&self, text: &str) -> Result<Vector, CliError> {
        match self.vec(text) {
            Ok(v) => Ok(v.clone()),
            Err(_) if text.contains(',') || text.parse::<i64>().is_ok() => scalars(&self.field, 0, text),
            Err(e) => Err(e),
        }
    }
}

/// Splits `<k1> <n> <k2> <rest>`.
fn sized<'a>(line: usize, text: &'a str, k1: &str, k2: &str) -> Result<(usize, &'a str), CliError> {
    let text = text.trim();
    let rest = text
        .strip_prefix(k1)
        .ok_or_else(|| parse_err(line, format!("expected `{k1}`")))?
        .trim_start();
    let (num, rest) = rest
        .split_once(char::is_whitespace)
        .ok_or_else(|| parse_err(line, format!("expected `{k2}`")))?;
    let n: usize = num.parse().map_err(|_| parse_err(line, format!("bad {k1} `{num}`")))?;
    let rest = rest
        .trim_start()
        .strip_prefix(k2)
        .ok_or_else(|| parse_err(line, format!("expected `{k2}`")))?;
    Ok((n, rest.trim()))
}

pub fn scalars(f: &Field, line: usize, list: &str) -> Result<Vec<Scalar>, CliError> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|s| f.parse(s.trim()).map_err(|e| parse_err(line, format!("`{}`: {e}", s.trim()))))
        .collect()
}
