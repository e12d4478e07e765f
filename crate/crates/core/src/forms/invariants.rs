//! Discriminant and Arf invariant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{FormError, QuadraticForm};
use crate::field::{ArtinSchreier, FieldKind, Scalar};

/// Whether an Arf representative lies in `{x^2 + x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArfTriviality {
    /// `representative = root^2 + root`.
    Trivial { root: Scalar },
    Nontrivial,
    /// Undecided; the trace records how far the reduction got.
    Unknown { trace: String },
}

impl QuadraticForm {
    /// Representative `sum_k q(e_{2k-1}) q(e_{2k})` over the computed
    /// symplectic basis.
    pub fn arf_invariant(&self) -> Result<Scalar, FormError> {
        let basis = self.symplectic_basis()?;
        Ok(self.arf_from_basis(&basis))
    }

    /// Arf representative over a given symplectic basis.
    pub fn arf_from_basis(&self, basis: &[crate::Vector]) -> Scalar {
        let f = self.field();
        basis.chunks(2).fold(f.zero(), |acc, pair| {
            f.add(&acc, &f.mul(&self.eval(&pair[0]), &self.eval(&pair[1])))
        })
    }

    /// Decides whether an Arf representative is trivial.
    pub fn arf_is_trivial(&self, rep: &Scalar) -> Result<ArfTriviality, FormError> {
        let f = self.field();
        Ok(match f.artin_schreier(rep)? {
            ArtinSchreier::Root(root) => ArfTriviality::Trivial { root },
            ArtinSchreier::NotInImage => ArfTriviality::Nontrivial,
            ArtinSchreier::Unknown(why) => ArfTriviality::Unknown {
                trace: format!("representative {}: {why}", f.render(rep)),
            },
        })
    }

    /// Product of diagonal entries; over `Q` reduced to a square-free integer.
    pub fn discriminant(&self) -> Result<Scalar, FormError> {
        let f = self.field();
        let (_, d) = self.diagonalize()?;
        if d.iter().any(|x| f.is_zero(x)) {
            return Err(FormError::Degenerate);
        }
        let prod = d.iter().fold(f.one(), |acc, x| f.mul(&acc, x));
        Ok(match (f.kind(), &prod) {
            (FieldKind::Rationals, Scalar::Rat(r)) => Scalar::Rat(square_free_class(r)),
            _ => prod,
        })
    }
}

/// Square-free integer in the square class of `r` (trial division; any
/// cofactor left beyond the trial bound is kept whole unless it is a perfect
/// square).
pub fn square_free_class(r: &BigRational) -> BigRational {
    let n = r.numer() * r.denom();
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    let bound = BigInt::from(1_000_000);
    while &p * &p <= m && p <= bound {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += 1;
    }
    let root = m.sqrt();
    if &root * &root != m {
        out *= m;
    }
    BigRational::from_integer(sign * out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Field;

    #[test]
    fn arf_examples() {
        let f2 = Field::prime(2).unwrap();
        let ab = QuadraticForm::binary_char2(&f2, &f2.one(), &f2.one()).unwrap();
        let rep = ab.arf_invariant().unwrap();
        assert_eq!(rep, f2.one());
        assert_eq!(ab.arf_is_trivial(&rep).unwrap(), ArfTriviality::Nontrivial);
        let gf4 = Field::galois(2, vec![1, 1, 1], "w").unwrap();
        let ab = QuadraticForm::binary_char2(&gf4, &gf4.one(), &gf4.one()).unwrap();
        let rep = ab.arf_invariant().unwrap();
        assert!(matches!(ab.arf_is_trivial(&rep).unwrap(), ArfTriviality::Trivial { .. }));
        let zero_b = QuadraticForm::binary_char2(&f2, &f2.zero(), &f2.one()).unwrap();
        assert!(f2.is_zero(&zero_b.arf_invariant().unwrap()));
    }

    #[test]
    fn discriminant_examples() {
        let q = Field::rationals();
        let d = |v: &[i64]| {
            QuadraticForm::diagonal(&q, &v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>())
                .discriminant()
                .unwrap()
        };
        assert_eq!(d(&[1, 1, 1, 1]), q.one());
        assert_eq!(d(&[1, -2]), q.from_i64(-2));
        assert_eq!(d(&[2, 8]), q.one());
        assert_eq!(
            QuadraticForm::diagonal(&q, &[q.parse("3/4").unwrap()]).discriminant().unwrap(),
            q.from_i64(3)
        );
    }
}
