//! Exact coefficient fields.
//!
//! A [`Field`] is a shared, immutable descriptor for one of
//!
//! - the rationals `Q`,
//! - a prime field `F_p`,
//! - a finite field `GF(p^k) = F_p[w]/(m)` with `m` monic irreducible,
//! - a univariate rational function field `F(t)` over any of the above,
//!   nested arbitrarily (`F_2(s)(t)` is `RF(RF(Fp(2),s),t)`).
//!
//! Values are stored as descriptor-free [`Scalar`] payloads that are always in
//! canonical form, so structural equality of payloads is equality of values.
//! [`FieldElement`] pairs a payload with its descriptor for callers that want
//! operator overloading.

mod enumerate;
mod gf;
mod parse;
pub mod poly;
mod roots;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use roots::ArtinSchreier;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("field descriptor mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not irreducible")]
    Reducible(String),
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("enumerating {count} elements exceeds budget {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
    #[error("operation requires characteristic 2, field has characteristic {0}")]
    WrongCharacteristic(u64),
    #[error("variable `{0}` already used in this tower")]
    DuplicateVariable(String),
}

/// Canonical payload of a field element. Only meaningful together with the
/// [`Field`] it was produced by.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Reduced fraction with positive denominator.
    Rat(BigRational),
    /// Residue in `[0, p)`.
    Mod(u64),
    /// Residue polynomial of `GF(p^k)`, low degree first, always `k` entries.
    Ext(Vec<u64>),
    /// Numerator and monic denominator over the base field, coprime, trimmed.
    Frac(Vec<Scalar>, Vec<Scalar>),
}

#[derive(Debug, PartialEq, Eq)]
pub struct GaloisData {
    pub p: u64,
    pub k: usize,
    /// Monic modulus, low degree first, `k + 1` entries.
    pub modulus: Vec<u64>,
    pub var: String,
}

#[derive(Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
    Galois(GaloisData),
    Functions { base: Field, var: String },
}

/// Shared field descriptor.
#[derive(Clone)]
pub struct Field(Arc<FieldKind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "Fp({p})"),
            FieldKind::Galois(g) => {
                let modulus = gf::render_poly_u64(&g.modulus, &g.var);
                write!(f, "GF({},{},{})", g.p, g.k, modulus)
            }
            FieldKind::Functions { base, var } => write!(f, "RF({base},{var})"),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldKind::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldKind::Prime(p))))
    }

    /// `GF(p^k)` with the given monic modulus (low degree first, `k + 1`
    /// coefficients). Irreducibility is checked exhaustively for `k <= 8`.
    pub fn galois(p: u64, modulus: Vec<u64>, var: &str) -> Result<Field, FieldError> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(FieldError::NotPrime(p));
        }
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        let k = modulus.len().saturating_sub(1);
        if k == 0 || modulus[k] != 1 {
            return Err(FieldError::InvalidDescriptor(format!(
                "modulus {} must be monic of positive degree",
                gf::render_poly_u64(&modulus, var)
            )));
        }
        if k > 8 {
            return Err(FieldError::InvalidDescriptor(
                "extension degree above 8 is not supported".into(),
            ));
        }
        if !gf::is_irreducible(p, &modulus) {
            return Err(FieldError::Reducible(gf::render_poly_u64(&modulus, var)));
        }
        Ok(Field(Arc::new(FieldKind::Galois(GaloisData {
            p,
            k,
            modulus,
            var: var.to_string(),
        }))))
    }

    /// The rational function field `base(var)`.
    pub fn functions(base: &Field, var: &str) -> Result<Field, FieldError> {
        if base.variable_names().iter().any(|v| v == var) {
            return Err(FieldError::DuplicateVariable(var.to_string()));
        }
        if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(FieldError::InvalidDescriptor(format!("bad variable name `{var}`")));
        }
        Ok(Field(Arc::new(FieldKind::Functions {
            base: base.clone(),
            var: var.to_string(),
        })))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0
    }

    /// Base field of a rational function field.
    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            FieldKind::Functions { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Characteristic, `0` for `Q` and towers over it.
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => *p,
            FieldKind::Galois(g) => g.p,
            FieldKind::Functions { base, .. } => base.characteristic(),
        }
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u128> {
        match &*self.0 {
            FieldKind::Prime(p) => Some(*p as u128),
            FieldKind::Galois(g) => Some((g.p as u128).pow(g.k as u32)),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// The prime subfield descriptor (`Q` or `F_p`).
    pub fn prime_field(&self) -> Field {
        match self.characteristic() {
            0 => Field::rationals(),
            p => Field::prime(p).expect("characteristic is prime"),
        }
    }

    /// All variable names bound in this tower, innermost first.
    pub fn variable_names(&self) -> Vec<String> {
        match &*self.0 {
            FieldKind::Rationals | FieldKind::Prime(_) => vec![],
            FieldKind::Galois(g) => vec![g.var.clone()],
            FieldKind::Functions { base, var } => {
                let mut v = base.variable_names();
                v.push(var.clone());
                v
            }
        }
    }

    /// Number of nested rational-function levels.
    pub fn tower_depth(&self) -> usize {
        match &*self.0 {
            FieldKind::Functions { base, .. } => 1 + base.tower_depth(),
            _ => 0,
        }
    }

    pub fn element(&self, value: Scalar) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    pub fn zero(&self) -> Scalar {
        match &*self.0 {
            FieldKind::Rationals => Scalar::Rat(BigRational::zero()),
            FieldKind::Prime(_) => Scalar::Mod(0),
            FieldKind::Galois(g) => Scalar::Ext(vec![0; g.k]),
            FieldKind::Functions { base, .. } => Scalar::Frac(vec![], vec![base.one()]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match &*self.0 {
            FieldKind::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            FieldKind::Prime(p) => Scalar::Mod(reduce_bigint(n, *p)),
            FieldKind::Galois(g) => {
                let mut v = vec![0; g.k];
                v[0] = reduce_bigint(n, g.p);
                Scalar::Ext(v)
            }
            FieldKind::Functions { base, .. } => self.lift(&base.from_bigint(n)),
        }
    }

    /// Embeds an element of the base field as a constant.
    pub fn lift(&self, c: &Scalar) -> Scalar {
        match &*self.0 {
            FieldKind::Functions { base, .. } => {
                Scalar::Frac(poly::trim(base, vec![c.clone()]), vec![base.one()])
            }
            _ => c.clone(),
        }
    }

    /// Value of a variable name anywhere in the tower.
    pub fn variable(&self, name: &str) -> Option<Scalar> {
        match &*self.0 {
            FieldKind::Rationals | FieldKind::Prime(_) => None,
            FieldKind::Galois(g) => {
                if g.var == name {
                    let mut v = vec![0; g.k];
                    if g.k == 1 {
                        // w is a root of the linear modulus w + c.
                        v[0] = (g.p - g.modulus[0]) % g.p;
                    } else {
                        v[1] = 1;
                    }
                    Some(Scalar::Ext(v))
                } else {
                    None
                }
            }
            FieldKind::Functions { base, var } => {
                if var == name {
                    Some(Scalar::Frac(vec![base.zero(), base.one()], vec![base.one()]))
                } else {
                    base.variable(name).map(|c| self.lift(&c))
                }
            }
        }
    }

    /// The generator variable of a rational function field.
    pub fn generator(&self) -> Option<Scalar> {
        match &*self.0 {
            FieldKind::Functions { var, .. } => self.variable(var),
            _ => None,
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(v) => *v == 0,
            Scalar::Ext(v) => v.iter().all(|c| *c == 0),
            Scalar::Frac(n, _) => n.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (FieldKind::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldKind::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            (FieldKind::Galois(g), Scalar::Ext(x), Scalar::Ext(y)) => {
                Scalar::Ext(x.iter().zip(y).map(|(u, v)| (u + v) % g.p).collect())
            }
            (FieldKind::Functions { base, .. }, Scalar::Frac(an, ad), Scalar::Frac(bn, bd)) => {
                if an.is_empty() {
                    return b.clone();
                }
                if bn.is_empty() {
                    return a.clone();
                }
                if ad == bd {
                    let num = poly::add(base, an, bn);
                    return frac_reduce(base, num, ad.clone());
                }
                // Work over lcm(ad, bd); only the shared factor can cancel.
                let g = poly::gcd(base, ad, bd);
                let ad_g = poly::exact_div(base, ad, &g);
                let bd_g = poly::exact_div(base, bd, &g);
                let num = poly::add(base, &poly::mul(base, an, &bd_g), &poly::mul(base, bn, &ad_g));
                if num.is_empty() {
                    return self.zero();
                }
                let h = poly::gcd(base, &num, &g);
                let num = poly::exact_div(base, &num, &h);
                let den = poly::mul(base, &ad_g, &poly::exact_div(base, bd, &h));
                frac_normalize_monic(base, num, den)
            }
            _ => panic!("scalar payload does not belong to field {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (&*self.0, a) {
            (FieldKind::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldKind::Prime(p), Scalar::Mod(x)) => Scalar::Mod((p - x) % p),
            (FieldKind::Galois(g), Scalar::Ext(x)) => {
                Scalar::Ext(x.iter().map(|u| (g.p - u) % g.p).collect())
            }
            (FieldKind::Functions { base, .. }, Scalar::Frac(n, d)) => {
                Scalar::Frac(poly::neg(base, n), d.clone())
            }
            _ => panic!("scalar payload does not belong to field {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (FieldKind::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldKind::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (FieldKind::Galois(g), Scalar::Ext(x), Scalar::Ext(y)) => Scalar::Ext(gf::mul(g, x, y)),
            (FieldKind::Functions { base, .. }, Scalar::Frac(an, ad), Scalar::Frac(bn, bd)) => {
                if an.is_empty() || bn.is_empty() {
                    return self.zero();
                }
                // Cross-cancel before multiplying to keep degrees small.
                let g1 = poly::gcd(base, an, bd);
                let g2 = poly::gcd(base, bn, ad);
                let an = poly::exact_div(base, an, &g1);
                let bd = poly::exact_div(base, bd, &g1);
                let bn = poly::exact_div(base, bn, &g2);
                let ad = poly::exact_div(base, ad, &g2);
                let num = poly::mul(base, &an, &bn);
                let den = poly::mul(base, &ad, &bd);
                frac_normalize_monic(base, num, den)
            }
            _ => panic!("scalar payload does not belong to field {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match (&*self.0, a) {
            (FieldKind::Rationals, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            (FieldKind::Prime(p), Scalar::Mod(x)) => Scalar::Mod(pow_mod(*x, p - 2, *p)),
            (FieldKind::Galois(g), Scalar::Ext(x)) => Scalar::Ext(gf::inv(g, x)),
            (FieldKind::Functions { base, .. }, Scalar::Frac(n, d)) => {
                frac_normalize_monic(base, d.clone(), n.clone())
            }
            _ => panic!("scalar payload does not belong to field {self}"),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u128) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Rough storage cost, used to pick cheap pivots.
    pub fn weight(&self, a: &Scalar) -> usize {
        match (&*self.0, a) {
            (FieldKind::Rationals, Scalar::Rat(x)) => (x.numer().bits() + x.denom().bits()) as usize,
            (FieldKind::Functions { base, .. }, Scalar::Frac(n, d)) => {
                n.iter().chain(d).map(|c| 1 + base.weight(c)).sum()
            }
            _ => 1,
        }
    }

    pub fn square(&self, a: &Scalar) -> Scalar {
        self.mul(a, a)
    }

    /// Checks that a payload has the shape and canonical form this field
    /// produces.
    pub fn is_canonical(&self, a: &Scalar) -> bool {
        match (&*self.0, a) {
            (FieldKind::Rationals, Scalar::Rat(r)) => r.denom().is_positive(),
            (FieldKind::Prime(p), Scalar::Mod(x)) => x < p,
            (FieldKind::Galois(g), Scalar::Ext(x)) => x.len() == g.k && x.iter().all(|c| *c < g.p),
            (FieldKind::Functions { base, .. }, Scalar::Frac(n, d)) => {
                let trimmed = |v: &Vec<Scalar>| v.last().is_none_or(|c| !base.is_zero(c));
                trimmed(n)
                    && trimmed(d)
                    && d.last().is_some_and(|c| base.is_one(c))
                    && n.iter().chain(d).all(|c| base.is_canonical(c))
                    && (n.is_empty() && d.len() == 1 || poly::degree(&poly::gcd(base, n, d)) == Some(0))
            }
            _ => false,
        }
    }

    pub fn render(&self, a: &Scalar) -> String {
        parse::render(self, a)
    }

    /// Parses an element literal (integers, variables, `+ - * / ^`, parentheses).
    pub fn parse(&self, text: &str) -> Result<Scalar, FieldError> {
        parse::parse_element(self, text)
    }

    /// Parses a descriptor expression such as `RF(Fp(2),t)` or the shorthand
    /// `F2(s)(t)`.
    pub fn parse_descriptor(text: &str) -> Result<Field, FieldError> {
        parse::parse_descriptor(text)
    }

    /// Numerator and denominator of a rational-function payload.
    pub fn fraction_parts<'a>(&self, a: &'a Scalar) -> Option<(&'a [Scalar], &'a [Scalar])> {
        match a {
            Scalar::Frac(n, d) => Some((n, d)),
            _ => None,
        }
    }

    /// Builds the canonical fraction `num / den` over the base field.
    pub fn fraction(&self, num: Vec<Scalar>, den: Vec<Scalar>) -> Result<Scalar, FieldError> {
        let base = self
            .base()
            .ok_or_else(|| FieldError::InvalidDescriptor(format!("{self} is not a function field")))?;
        let den = poly::trim(base, den);
        if den.is_empty() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(frac_reduce(base, poly::trim(base, num), den))
    }
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    r.try_into().expect("residue fits in u64")
}

pub(crate) fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let m = p as u128;
    let mut base = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

fn frac_reduce(base: &Field, num: Vec<Scalar>, den: Vec<Scalar>) -> Scalar {
    if num.is_empty() {
        return Scalar::Frac(vec![], vec![base.one()]);
    }
    let g = poly::gcd(base, &num, &den);
    let (num, den) = if poly::degree(&g) == Some(0) {
        (num, den)
    } else {
        (poly::exact_div(base, &num, &g), poly::exact_div(base, &den, &g))
    };
    frac_normalize_monic(base, num, den)
}

fn frac_normalize_monic(base: &Field, num: Vec<Scalar>, den: Vec<Scalar>) -> Scalar {
    if num.is_empty() {
        return Scalar::Frac(vec![], vec![base.one()]);
    }
    let lc = den.last().expect("nonzero denominator").clone();
    if base.is_one(&lc) {
        return Scalar::Frac(num, den);
    }
    let inv = base.inv(&lc).expect("leading coefficient is nonzero");
    Scalar::Frac(poly::scale(base, &num, &inv), poly::scale(base, &den, &inv))
}

/// A value together with its field descriptor.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    value: Scalar,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Scalar {
        &self.value
    }

    pub fn into_value(self) -> Scalar {
        self.value
    }

    pub fn parse(field: &Field, text: &str) -> Result<FieldElement, FieldError> {
        Ok(field.element(field.parse(text)?))
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.field.to_string(), other.field.to_string()))
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.add(&self.value, &other.value)))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.sub(&self.value, &other.value)))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.mul(&self.value, &other.value)))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.div(&self.value, &other.value)?))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(self.field.element(self.field.inv(&self.value)?))
    }

    pub fn pow(&self, e: u128) -> FieldElement {
        self.field.element(self.field.pow(&self.value, e))
    }

    /// A square root when the value is a square in its field.
    pub fn sqrt(&self) -> Option<FieldElement> {
        self.field.is_square(&self.value).map(|r| self.field.element(r))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.field.render(&self.value), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.render(&self.value))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.element(self.field.neg(&self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Helper for `Q`: the rational value of a payload.
pub fn as_rational(a: &Scalar) -> Option<&BigRational> {
    match a {
        Scalar::Rat(r) => Some(r),
        _ => None,
    }
}

/// `Q` payload from numerator and denominator.
pub fn rational(n: i64, d: i64) -> Scalar {
    Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        Field::galois(2, vec![1, 1, 1], "w").unwrap()
    }

    #[test]
    fn rational_arithmetic_reduces() {
        let q = Field::rationals();
        let a = q.parse("1/2").unwrap();
        let b = q.parse("2/3").unwrap();
        assert_eq!(q.mul(&a, &b), q.parse("1/3").unwrap());
        assert_eq!(q.parse("3/6").unwrap(), rational(1, 2));
    }

    #[test]
    fn characteristic_two_doubling_vanishes() {
        let f = Field::parse_descriptor("F2(t)").unwrap();
        let t = f.variable("t").unwrap();
        assert!(f.is_zero(&f.add(&t, &t)));
    }

    #[test]
    fn gf4_division_matches_brute_force() {
        let f = gf4();
        let elems = f.enumerate(4).unwrap();
        let w = f.parse("w").unwrap();
        let w1 = f.parse("w+1").unwrap();
        // brute-force the quotient: the unique c with c * (w+1) = w
        let brute: Vec<_> = elems.iter().filter(|c| f.mul(c, &w1) == w).cloned().collect();
        assert_eq!(brute.len(), 1);
        assert_eq!(f.div(&w, &w1).unwrap(), brute[0]);
        assert_eq!(brute[0], w1);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let q = Field::rationals();
        assert_eq!(q.inv(&q.zero()), Err(FieldError::DivisionByZero));
        let f = Field::parse_descriptor("F2(t)").unwrap();
        assert_eq!(f.parse("1/(t+t)"), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mismatched_descriptors_are_rejected() {
        let a = FieldElement::parse(&Field::rationals(), "1").unwrap();
        let b = FieldElement::parse(&Field::prime(3).unwrap(), "1").unwrap();
        assert!(matches!(a.checked_add(&b), Err(FieldError::Mismatch(..))));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // w^2 + 1 = (w + 1)^2 over F_2
        assert!(matches!(Field::galois(2, vec![1, 0, 1], "w"), Err(FieldError::Reducible(_))));
        assert!(Field::galois(3, vec![1, 0, 1], "i").is_ok());
        assert!(Field::galois(2, vec![1, 1, 0, 1], "w").is_ok());
        assert!(matches!(Field::prime(9), Err(FieldError::NotPrime(9))));
    }

    #[test]
    fn duplicate_tower_variable_rejected() {
        let f = Field::parse_descriptor("F2(t)").unwrap();
        assert!(matches!(Field::functions(&f, "t"), Err(FieldError::DuplicateVariable(_))));
    }

    #[test]
    fn function_field_canonical_form() {
        let f = Field::parse_descriptor("F2(t)").unwrap();
        let a = f.parse("t^2/(t+1)").unwrap();
        let (n, d) = f.fraction_parts(&a).unwrap();
        assert_eq!(n.len(), 3);
        assert_eq!(d.len(), 2);
        assert!(f.is_canonical(&a));
        // (t^2+t)/(t^2+1) = t/(t+1) over F_2
        let b = f.parse("(t^2+t)/(t^2+1)").unwrap();
        assert_eq!(b, f.parse("t/(t+1)").unwrap());
    }
}
