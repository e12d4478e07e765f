//! Deterministic enumeration and seeded sampling of field elements.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;

use super::{poly, Field, FieldError, FieldKind, Scalar};

/// Coefficient fields inside a tower are always enumerated in full; this caps
/// how large such a finite field may be.
const MAX_INNER_FINITE: u128 = 1 << 16;

/// Hard cap on the number of candidate fractions built for a function field.
const MAX_FRACTIONS: usize = 1 << 20;

impl Field {
    /// The `i`-th element of a finite field in base-`p` digit order
    /// (`0, 1, ..., p-1, w, w+1, ...`).
    pub fn element_at(&self, i: u128) -> Scalar {
        match self.kind() {
            FieldKind::Prime(p) => Scalar::Mod((i % *p as u128) as u64),
            FieldKind::Galois(g) => {
                let mut v = Vec::with_capacity(g.k);
                let mut r = i;
                for _ in 0..g.k {
                    v.push((r % g.p as u128) as u64);
                    r /= g.p as u128;
                }
                Scalar::Ext(v)
            }
            _ => panic!("element_at on infinite field {self}"),
        }
    }

    /// Enumerates elements deterministically.
    ///
    /// Finite fields: all `q` elements, or an error when `q > budget`.
    /// `Q`: reduced fractions of height at most `budget`.
    /// `K(t)`: reduced fractions whose numerator and denominator have degree
    /// at most `budget`, coefficients enumerated recursively (finite
    /// coefficient fields in full).
    pub fn enumerate(&self, budget: u64) -> Result<Vec<Scalar>, FieldError> {
        match self.kind() {
            FieldKind::Prime(_) | FieldKind::Galois(_) => {
                let q = self.order().expect("finite");
                if q > budget as u128 {
                    return Err(FieldError::BudgetExceeded { count: q, budget });
                }
                Ok((0..q).map(|i| self.element_at(i)).collect())
            }
            FieldKind::Rationals => Ok(rationals_by_height(budget)),
            FieldKind::Functions { base, .. } => {
                let coeffs = match base.order() {
                    Some(q) if q <= MAX_INNER_FINITE => base.enumerate(q as u64)?,
                    Some(q) => {
                        return Err(FieldError::BudgetExceeded {
                            count: q,
                            budget: MAX_INNER_FINITE as u64,
                        })
                    }
                    None => base.enumerate(budget)?,
                };
                let deg = budget as usize;
                let nums = polys_up_to(base, &coeffs, deg, false);
                let dens = polys_up_to(base, &coeffs, deg, true);
                if nums.len().saturating_mul(dens.len()) > MAX_FRACTIONS {
                    return Err(FieldError::BudgetExceeded {
                        count: (nums.len() * dens.len()) as u128,
                        budget: MAX_FRACTIONS as u64,
                    });
                }
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                for d in &dens {
                    for n in &nums {
                        let x = self.fraction(n.clone(), d.clone())?;
                        if seen.insert(x.clone()) {
                            out.push(x);
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// A seeded random element. `height` bounds numerators/denominators over
    /// `Q` and degrees in function fields; finite fields sample uniformly.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> Scalar {
        let h = height.max(1) as i64;
        match self.kind() {
            FieldKind::Prime(_) | FieldKind::Galois(_) => {
                let q = self.order().expect("finite");
                self.element_at(rng.gen_range(0..q))
            }
            FieldKind::Rationals => Scalar::Rat(BigRational::new(
                BigInt::from(rng.gen_range(-h..=h)),
                BigInt::from(rng.gen_range(1..=h)),
            )),
            FieldKind::Functions { base, .. } => {
                let deg_n = rng.gen_range(0..=height as usize);
                let deg_d = rng.gen_range(0..=height as usize);
                let num: Vec<Scalar> = (0..=deg_n).map(|_| base.random(rng, height)).collect();
                let mut den: Vec<Scalar> = (0..deg_d).map(|_| base.random(rng, height)).collect();
                den.push(base.one());
                self.fraction(num, den).expect("monic denominator is nonzero")
            }
        }
    }

    /// Like [`Field::random`] but never zero.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> Scalar {
        loop {
            let x = self.random(rng, height);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
}

fn rationals_by_height(h: u64) -> Vec<Scalar> {
    let mut out = vec![Scalar::Rat(BigRational::from_integer(0.into()))];
    for height in 1..=h {
        let height = height as i64;
        let mut push = |n: i64, d: i64| {
            if n.gcd(&d) == 1 {
                out.push(Scalar::Rat(BigRational::new(n.into(), d.into())));
                out.push(Scalar::Rat(BigRational::new((-n).into(), d.into())));
            }
        };
        // max(|n|, d) == height
        for d in 1..=height {
            push(height, d);
        }
        for n in 1..height {
            push(n, height);
        }
    }
    out
}

/// All polynomials of degree at most `deg` (or monic of degree at most `deg`)
/// with coefficients from `coeffs`, in lexicographic order.
fn polys_up_to(base: &Field, coeffs: &[Scalar], deg: usize, monic: bool) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    if monic {
        for d in 0..=deg {
            for mut lower in tuples(coeffs, d) {
                lower.push(base.one());
                out.push(lower);
            }
        }
    } else {
        for t in tuples(coeffs, deg + 1) {
            out.push(poly::trim(base, t));
        }
    }
    out
}

fn tuples(coeffs: &[Scalar], len: usize) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * coeffs.len());
        for prefix in &out {
            for c in coeffs {
                let mut v = prefix.clone();
                v.push(c.clone());
                next.push(v);
            }
        }
        out = next;
    }
    // Reverse each tuple so the constant coefficient varies fastest.
    for t in &mut out {
        t.reverse();
    }
    out
}
