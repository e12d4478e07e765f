//! Text forms of field descriptors and elements.

use num_bigint::BigInt;
use num_traits::One;

use super::{gf, Field, FieldError, FieldKind, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, FieldError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(FieldError::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Cursor {
    fn new(text: &str) -> Result<Cursor, FieldError> {
        Ok(Cursor {
            toks: tokenize(text)?,
            pos: 0,
            end: text.chars().count(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FieldError> {
        Err(FieldError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FieldError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn finish(&self) -> Result<(), FieldError> {
        if self.pos < self.toks.len() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }

    fn int(&mut self) -> Result<u64, FieldError> {
        match self.next() {
            Some(Tok::Int(n)) => n.try_into().or_else(|_| {
                self.pos -= 1;
                self.err("integer too large")
            }),
            _ => {
                self.pos -= 1;
                self.err("expected an integer")
            }
        }
    }

    fn ident(&mut self) -> Result<String, FieldError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => {
                self.pos -= 1;
                self.err("expected a name")
            }
        }
    }
}

pub(super) fn parse_descriptor(text: &str) -> Result<Field, FieldError> {
    let mut c = Cursor::new(text)?;
    let f = descriptor(&mut c)?;
    c.finish()?;
    Ok(f)
}

fn descriptor(c: &mut Cursor) -> Result<Field, FieldError> {
    let start = c.offset();
    let name = c.ident()?;
    let mut field = match name.as_str() {
        "Q" | "QQ" => Field::rationals(),
        "Fp" => {
            c.expect('(')?;
            let p = c.int()?;
            c.expect(')')?;
            Field::prime(p)?
        }
        "GF" => {
            c.expect('(')?;
            let p = c.int()?;
            if c.eat(')') {
                // GF(q): pick the smallest irreducible modulus of the right degree.
                return postfix(c, default_galois(p, start)?);
            }
            c.expect(',')?;
            let k = c.int()? as usize;
            c.expect(',')?;
            let (coeffs, var) = modulus_poly(c, p)?;
            c.expect(')')?;
            if coeffs.len() != k + 1 {
                return Err(FieldError::InvalidDescriptor(format!(
                    "modulus has degree {}, expected {k}",
                    coeffs.len().saturating_sub(1)
                )));
            }
            Field::galois(p, coeffs, &var)?
        }
        "RF" => {
            c.expect('(')?;
            let inner = descriptor(c)?;
            c.expect(',')?;
            let var = c.ident()?;
            c.expect(')')?;
            Field::functions(&inner, &var)?
        }
        other => match other.strip_prefix('F').and_then(|d| d.parse::<u64>().ok()) {
            Some(p) => Field::prime(p)?,
            None => {
                return Err(FieldError::Syntax {
                    pos: start,
                    msg: format!("unknown field `{other}`"),
                })
            }
        },
    };
    field = postfix(c, field)?;
    Ok(field)
}

fn postfix(c: &mut Cursor, mut field: Field) -> Result<Field, FieldError> {
    while c.peek() == Some(&Tok::Sym('(')) {
        c.next();
        let var = c.ident()?;
        c.expect(')')?;
        field = Field::functions(&field, &var)?;
    }
    Ok(field)
}

fn default_galois(q: u64, pos: usize) -> Result<Field, FieldError> {
    let (p, k) = (2..=q)
        .find(|p| q.is_multiple_of(*p))
        .map(|p| {
            let mut k = 0;
            let mut r = q;
            while r.is_multiple_of(p) {
                r /= p;
                k += 1;
            }
            (p, if r == 1 { k } else { 0 })
        })
        .filter(|&(_, k)| k > 0)
        .ok_or(FieldError::Syntax {
            pos,
            msg: format!("{q} is not a prime power"),
        })?;
    if k == 1 {
        return Field::prime(p);
    }
    // Enumerate monic polynomials of degree k in increasing order.
    let total = (p as u128).pow(k as u32);
    for idx in 0..total {
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut r = idx;
        for _ in 0..k {
            coeffs.push((r % p as u128) as u64);
            r /= p as u128;
        }
        coeffs.push(1);
        if let Ok(f) = Field::galois(p, coeffs, "w") {
            return Ok(f);
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// A polynomial with integer coefficients in one variable, reduced mod p.
fn modulus_poly(c: &mut Cursor, p: u64) -> Result<(Vec<u64>, String), FieldError> {
    let mut coeffs: Vec<u64> = Vec::new();
    let mut var: Option<String> = None;
    let mut sign_neg = c.eat('-');
    loop {
        let mut coef = 1u64;
        let mut deg = 0usize;
        let mut saw = false;
        if let Some(Tok::Int(_)) = c.peek() {
            coef = c.int()? % p;
            saw = true;
            c.eat('*');
        }
        if let Some(Tok::Ident(_)) = c.peek() {
            let v = c.ident()?;
            match &var {
                Some(existing) if *existing != v => return c.err("modulus uses two variables"),
                _ => var = Some(v),
            }
            deg = 1;
            if c.eat('^') {
                deg = c.int()? as usize;
            }
            saw = true;
        }
        if !saw {
            return c.err("expected a modulus term");
        }
        if sign_neg {
            coef = (p - coef) % p;
        }
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, 0);
        }
        coeffs[deg] = (coeffs[deg] + coef) % p;
        if c.eat('+') {
            sign_neg = false;
        } else if c.eat('-') {
            sign_neg = true;
        } else {
            break;
        }
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Ok((coeffs, var.unwrap_or_else(|| "w".into())))
}

pub(super) fn parse_element(field: &Field, text: &str) -> Result<Scalar, FieldError> {
    let mut c = Cursor::new(text)?;
    if c.peek().is_none() {
        return c.err("empty element");
    }
    let v = expr(field, &mut c)?;
    c.finish()?;
    Ok(v)
}

fn expr(f: &Field, c: &mut Cursor) -> Result<Scalar, FieldError> {
    let mut acc = if c.eat('-') {
        f.neg(&term(f, c)?)
    } else {
        c.eat('+');
        term(f, c)?
    };
    loop {
        if c.eat('+') {
            acc = f.add(&acc, &term(f, c)?);
        } else if c.eat('-') {
            acc = f.sub(&acc, &term(f, c)?);
        } else {
            return Ok(acc);
        }
    }
}

fn term(f: &Field, c: &mut Cursor) -> Result<Scalar, FieldError> {
    let mut acc = power(f, c)?;
    loop {
        if c.eat('*') {
            acc = f.mul(&acc, &power(f, c)?);
        } else if c.eat('/') {
            let d = power(f, c)?;
            acc = f.div(&acc, &d)?;
        } else if matches!(c.peek(), Some(Tok::Ident(_)) | Some(Tok::Sym('('))) {
            // implicit multiplication such as `2t` or `3(t+1)`
            acc = f.mul(&acc, &power(f, c)?);
        } else {
            return Ok(acc);
        }
    }
}

fn power(f: &Field, c: &mut Cursor) -> Result<Scalar, FieldError> {
    let base = atom(f, c)?;
    if !c.eat('^') {
        return Ok(base);
    }
    let neg = c.eat('-');
    let e = c.int()?;
    let v = f.pow(&base, e as u128);
    if neg {
        f.inv(&v)
    } else {
        Ok(v)
    }
}

fn atom(f: &Field, c: &mut Cursor) -> Result<Scalar, FieldError> {
    match c.peek().cloned() {
        Some(Tok::Int(n)) => {
            c.next();
            Ok(f.from_bigint(&n))
        }
        Some(Tok::Ident(name)) => {
            c.next();
            f.variable(&name).ok_or(FieldError::UnknownVariable(name))
        }
        Some(Tok::Sym('(')) => {
            c.next();
            let v = expr(f, c)?;
            c.expect(')')?;
            Ok(v)
        }
        Some(Tok::Sym('-')) => {
            c.next();
            Ok(f.neg(&power(f, c)?))
        }
        _ => c.err("expected a number, variable or `(`"),
    }
}

pub(super) fn render(field: &Field, a: &Scalar) -> String {
    match (field.kind(), a) {
        (FieldKind::Rationals, Scalar::Rat(r)) => {
            if r.denom().is_one() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        (FieldKind::Prime(_), Scalar::Mod(x)) => x.to_string(),
        (FieldKind::Galois(g), Scalar::Ext(x)) => gf::render_poly_u64(x, &g.var),
        (FieldKind::Functions { base, var }, Scalar::Frac(n, d)) => {
            let num = render_poly(base, n, var);
            if d.len() == 1 {
                return num;
            }
            let den = render_poly(base, d, var);
            format!("{}/{}", wrap(&num), wrap_den(&den))
        }
        _ => panic!("scalar payload does not belong to field {field}"),
    }
}

fn is_compound(s: &str) -> bool {
    s.char_indices().any(|(i, ch)| "+*/".contains(ch) || ch == '-' && i > 0)
}

fn wrap(s: &str) -> String {
    if is_compound(s) {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn wrap_den(s: &str) -> String {
    if is_compound(s) || s.starts_with('-') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn render_poly(base: &Field, p: &[Scalar], var: &str) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if base.is_zero(c) {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let cs = render(base, c);
        let term = if i == 0 {
            wrap(&cs)
        } else if cs == "1" {
            mono
        } else if cs == "-1" {
            format!("-{mono}")
        } else {
            format!("{}*{mono}", wrap(&cs))
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push('-');
            out.push_str(rest);
        } else {
            out.push('+');
            out.push_str(&term);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_shorthands() {
        assert_eq!(parse_descriptor("F2(s)(t)").unwrap().to_string(), "RF(RF(Fp(2),s),t)");
        assert_eq!(parse_descriptor("Q(t)").unwrap().to_string(), "RF(Q,t)");
        assert_eq!(parse_descriptor("GF(2,2,w^2+w+1)").unwrap().order(), Some(4));
        assert_eq!(parse_descriptor("GF(9)").unwrap().order(), Some(9));
        assert!(parse_descriptor("GF(6)").is_err());
        assert!(matches!(parse_descriptor("Fp(3"), Err(FieldError::Syntax { .. })));
    }

    #[test]
    fn element_roundtrip_examples() {
        let f = parse_descriptor("Q(s)(t)").unwrap();
        for text in ["(s+1)*t^2-t/s", "1/(t-s)", "-3/2", "t^-2", "2t+3(s-1)"] {
            let v = parse_element(&f, text).unwrap();
            assert_eq!(parse_element(&f, &render(&f, &v)).unwrap(), v, "{text}");
        }
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let q = Field::rationals();
        match parse_element(&q, "1 + ") {
            Err(FieldError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_element(&q, "x"), Err(FieldError::UnknownVariable(_))));
    }
}
