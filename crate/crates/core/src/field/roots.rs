//! Square roots, Artin–Schreier equations and p-basis coordinates.

use super::{poly, Field, FieldError, FieldKind, Scalar};

/// Outcome of solving `z^2 + z = r` in characteristic 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArtinSchreier {
    /// A solution `z`.
    Root(Scalar),
    /// Proven: `r` is not of the form `z^2 + z`.
    NotInImage,
    /// The solver could not decide; the message says why.
    Unknown(String),
}

impl Field {
    /// A square root of `a` if `a` is a square.
    pub fn is_square(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        match (self.kind(), a) {
            (FieldKind::Rationals, Scalar::Rat(r)) => {
                use num_traits::Signed;
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                    Some(Scalar::Rat(num_rational::BigRational::new(n, d)))
                } else {
                    None
                }
            }
            (FieldKind::Prime(_), _) | (FieldKind::Galois(_), _) => {
                let q = self.order().expect("finite");
                if self.characteristic() == 2 {
                    // a^q = a, so a^(q/2) squares to a
                    Some(self.pow(a, q / 2))
                } else {
                    self.tonelli_shanks(a, q)
                }
            }
            (FieldKind::Functions { base, .. }, Scalar::Frac(n, d)) => {
                let prod = poly::mul(base, n, d);
                let r = poly_sqrt(base, &prod)?;
                Some(self.fraction(r, d.clone()).expect("monic denominator"))
            }
            _ => panic!("scalar payload does not belong to field {self}"),
        }
    }

    /// `x` with `x^2 = a` in characteristic 2.
    pub fn frobenius_preimage(&self, a: &Scalar) -> Result<Option<Scalar>, FieldError> {
        match self.characteristic() {
            2 => Ok(self.is_square(a)),
            c => Err(FieldError::WrongCharacteristic(c)),
        }
    }

    fn tonelli_shanks(&self, a: &Scalar, q: u128) -> Option<Scalar> {
        let one = self.one();
        let minus_one = self.neg(&one);
        if self.pow(a, (q - 1) / 2) != one {
            return None;
        }
        let mut s = 0u32;
        let mut m = q - 1;
        while m.is_multiple_of(2) {
            m /= 2;
            s += 1;
        }
        let z = (2..q)
            .map(|i| self.element_at(i))
            .find(|z| self.pow(z, (q - 1) / 2) == minus_one)
            .expect("odd finite fields have non-residues");
        let mut c = self.pow(&z, m);
        let mut t = self.pow(a, m);
        let mut r = self.pow(a, m.div_ceil(2));
        let mut big_m = s;
        while t != one {
            let mut i = 0u32;
            let mut tt = t.clone();
            while tt != one {
                tt = self.square(&tt);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(big_m - i - 1) {
                b = self.square(&b);
            }
            big_m = i;
            c = self.square(&b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        debug_assert_eq!(&self.square(&r), a);
        Some(r)
    }

    /// Solves `z^2 + z = r` in characteristic 2.
    ///
    /// Exact over `F_2`, `GF(2^k)`, and over `K(t)` whenever the remaining
    /// fractional part lives over a finite `K`. Otherwise the fractional part
    /// yields [`ArtinSchreier::Unknown`].
    pub fn artin_schreier(&self, r: &Scalar) -> Result<ArtinSchreier, FieldError> {
        if self.characteristic() != 2 {
            return Err(FieldError::WrongCharacteristic(self.characteristic()));
        }
        let out = match (self.kind(), r) {
            (FieldKind::Prime(_), _) | (FieldKind::Galois(_), _) => {
                let q = self.order().expect("finite");
                (0..q)
                    .map(|i| self.element_at(i))
                    .find(|z| &self.add(&self.square(z), z) == r)
                    .map_or(ArtinSchreier::NotInImage, ArtinSchreier::Root)
            }
            (FieldKind::Functions { base, .. }, Scalar::Frac(n, d)) => {
                as_function_field(self, base, n, d)?
            }
            _ => panic!("scalar payload does not belong to field {self}"),
        };
        if let ArtinSchreier::Root(z) = &out {
            debug_assert_eq!(&self.add(&self.square(z), z), r);
        }
        Ok(out)
    }

    /// Coordinates of `x` over the p-basis of a characteristic-2 field:
    /// `x = sum_m c_m^2 * monomial(m)`, indexed by bitmasks over the tower's
    /// function-field variables (innermost variable is bit 0).
    pub fn p_coordinates(&self, x: &Scalar) -> Result<Vec<Scalar>, FieldError> {
        if self.characteristic() != 2 {
            return Err(FieldError::WrongCharacteristic(self.characteristic()));
        }
        Ok(match (self.kind(), x) {
            (FieldKind::Functions { base, .. }, Scalar::Frac(n, d)) => {
                let prod = poly::mul(base, n, d);
                let width = 1usize << base.tower_depth();
                let coeff_coords: Vec<Vec<Scalar>> = prod
                    .iter()
                    .map(|c| base.p_coordinates(c))
                    .collect::<Result<_, _>>()?;
                let mut out = Vec::with_capacity(2 * width);
                for parity in 0..2 {
                    for m in 0..width {
                        let num: Vec<Scalar> = coeff_coords
                            .iter()
                            .skip(parity)
                            .step_by(2)
                            .map(|cs| cs[m].clone())
                            .collect();
                        out.push(self.fraction(num, d.clone())?);
                    }
                }
                out
            }
            _ => vec![self.is_square(x).expect("finite fields of char 2 are perfect")],
        })
    }

    /// The p-basis monomial for a bitmask (see [`Field::p_coordinates`]).
    pub fn p_monomial(&self, mask: usize) -> Scalar {
        let vars: Vec<String> = self.function_variables();
        let mut out = self.one();
        for (i, v) in vars.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out = self.mul(&out, &self.variable(v).expect("tower variable"));
            }
        }
        out
    }

    /// Names of the rational-function variables, innermost first.
    pub fn function_variables(&self) -> Vec<String> {
        match self.kind() {
            FieldKind::Functions { base, var } => {
                let mut v = base.function_variables();
                v.push(var.clone());
                v
            }
            _ => vec![],
        }
    }
}

/// Square root of a polynomial, if it is the square of a polynomial.
pub(crate) fn poly_sqrt(base: &Field, p: &[Scalar]) -> Option<Vec<Scalar>> {
    let Some(deg) = poly::degree(p) else {
        return Some(vec![]);
    };
    if deg % 2 == 1 {
        return None;
    }
    if base.characteristic() == 2 {
        let mut out = Vec::with_capacity(deg / 2 + 1);
        for (i, c) in p.iter().enumerate() {
            if i % 2 == 1 {
                if !base.is_zero(c) {
                    return None;
                }
            } else {
                out.push(base.is_square(c)?);
            }
        }
        return Some(out);
    }
    let m = deg / 2;
    let s = base.is_square(&p[deg])?;
    let two_s_inv = base.inv(&base.add(&s, &s)).ok()?;
    let mut r = vec![base.zero(); m + 1];
    r[m] = s;
    for k in (0..m).rev() {
        let target = m + k;
        let mut acc = p[target].clone();
        for i in (k + 1)..=m {
            let j = target - i;
            if j > k && j <= m {
                acc = base.sub(&acc, &base.mul(&r[i], &r[j]));
            }
        }
        r[k] = base.mul(&acc, &two_s_inv);
    }
    let r = poly::trim(base, r);
    if poly::mul(base, &r, &r) == p {
        Some(r)
    } else {
        None
    }
}

fn as_function_field(
    f: &Field,
    base: &Field,
    n: &[Scalar],
    d: &[Scalar],
) -> Result<ArtinSchreier, FieldError> {
    if n.is_empty() {
        return Ok(ArtinSchreier::Root(f.zero()));
    }
    // A reduced z = a/b gives z^2 + z = (a^2 + ab)/b^2 in lowest terms.
    let Some(b) = poly_sqrt(base, d) else {
        return Ok(ArtinSchreier::NotInImage);
    };
    let (mut whole, frac) = poly::divrem(base, n, d);
    // Polynomial part: peel off the top term while the degree is positive.
    let mut w: Vec<Scalar> = vec![];
    while let Some(deg) = poly::degree(&whole) {
        if deg == 0 {
            break;
        }
        if deg % 2 == 1 {
            return Ok(ArtinSchreier::NotInImage);
        }
        let Some(s) = base.is_square(&whole[deg]) else {
            return Ok(ArtinSchreier::NotInImage);
        };
        let term = poly::shift(base, &[s], deg / 2);
        whole = poly::sub(base, &whole, &poly::add(base, &poly::mul(base, &term, &term), &term));
        w = poly::add(base, &w, &term);
    }
    let c0 = whole.first().cloned().unwrap_or_else(|| base.zero());
    match base.artin_schreier(&c0)? {
        ArtinSchreier::Root(z0) => w = poly::add(base, &w, &[z0]),
        ArtinSchreier::NotInImage => return Ok(ArtinSchreier::NotInImage),
        ArtinSchreier::Unknown(why) => return Ok(ArtinSchreier::Unknown(why)),
    }
    let w = poly::trim(base, w);
    let a = if frac.is_empty() {
        vec![]
    } else if base.is_finite() {
        match solve_fractional(base, &b, &frac) {
            Some(a) => a,
            None => return Ok(ArtinSchreier::NotInImage),
        }
    } else {
        return Ok(ArtinSchreier::Unknown(format!(
            "fractional part with denominator of degree {} over an infinite coefficient field",
            poly::degree(d).unwrap_or(0)
        )));
    };
    let z = f.add(
        &f.fraction(w, vec![base.one()])?,
        &f.fraction(a, b)?,
    );
    Ok(ArtinSchreier::Root(z))
}

/// Finds `a` with `deg a < deg b` and `a^2 + a b = target` over a finite
/// coefficient field of characteristic 2. The map is additive, so this is an
/// `F_2`-linear system.
fn solve_fractional(base: &Field, b: &[Scalar], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let m = b.len() - 1;
    let k = bit_width(base);
    let out_len = 2 * m * k;
    let unknowns = m * k;
    let image = |a: &[Scalar]| -> Vec<u8> {
        let a = poly::trim(base, a.to_vec());
        let v = poly::add(base, &poly::mul(base, &a, &a), &poly::mul(base, &a, b));
        flatten(base, &v, 2 * m)
    };
    let mut cols: Vec<Vec<u8>> = Vec::with_capacity(unknowns);
    for j in 0..m {
        for l in 0..k {
            let mut a = vec![base.zero(); m];
            a[j] = unit(base, l);
            cols.push(image(&a));
        }
    }
    let rhs = flatten(base, target, 2 * m);
    // Gaussian elimination on the augmented matrix, rows = output bits.
    let mut rows: Vec<Vec<u8>> = (0..out_len)
        .map(|r| {
            let mut row: Vec<u8> = cols.iter().map(|c| c[r]).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..unknowns {
        let Some(p) = (rank..out_len).find(|&r| rows[r][col] == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..out_len {
            if r != rank && rows[r][col] == 1 {
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot_row) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|row| row[unknowns] == 1) {
        return None;
    }
    let mut bits = vec![0u8; unknowns];
    for (r, &col) in pivots.iter().enumerate() {
        bits[col] = rows[r][unknowns];
    }
    let a: Vec<Scalar> = (0..m).map(|j| unflatten(base, &bits[j * k..(j + 1) * k])).collect();
    Some(poly::trim(base, a))
}

fn bit_width(base: &Field) -> usize {
    match base.kind() {
        FieldKind::Galois(g) => g.k,
        _ => 1,
    }
}

fn unit(base: &Field, l: usize) -> Scalar {
    match base.kind() {
        FieldKind::Galois(g) => {
            let mut v = vec![0; g.k];
            v[l] = 1;
            Scalar::Ext(v)
        }
        _ => base.one(),
    }
}

fn flatten(base: &Field, p: &[Scalar], len: usize) -> Vec<u8> {
    let k = bit_width(base);
    let mut out = vec![0u8; len * k];
    for (i, c) in p.iter().enumerate() {
        match c {
            Scalar::Mod(x) => out[i] = *x as u8,
            Scalar::Ext(v) => {
                for (l, x) in v.iter().enumerate() {
                    out[i * k + l] = *x as u8;
                }
            }
            _ => unreachable!("finite characteristic-2 coefficients"),
        }
    }
    out
}

fn unflatten(base: &Field, bits: &[u8]) -> Scalar {
    match base.kind() {
        FieldKind::Galois(_) => Scalar::Ext(bits.iter().map(|b| *b as u64).collect()),
        _ => Scalar::Mod(bits[0] as u64),
    }
}
