//! Tiered anisotropy oracle.

use num_traits::Signed;
use serde::Serialize;

use super::{FormError, QuadraticForm};
use crate::field::{ArtinSchreier, FieldKind, Scalar};
use crate::linalg::{Matrix, Vector};
use crate::Policy;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anisotropy {
    Anisotropic,
    Isotropic(Vector),
    Unknown,
}

/// How a verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// Every nonzero vector (up to scaling) was evaluated.
    Exhaustive { checked: u128 },
    /// Diagonal entries over `Q` share a sign.
    Definiteness,
    /// Binary form decided by a square-class or Artin–Schreier test.
    BinaryCriterion,
    /// Totally degenerate form in characteristic 2 decided through p-basis
    /// coordinates of its diagonal.
    PIndependence,
    /// A zero was found among the basis vectors.
    BasisVector,
    /// Bounded search over small vectors.
    BoundedSearch { tried: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnisotropyVerdict {
    pub tag: Anisotropy,
    pub evidence: Evidence,
}

impl AnisotropyVerdict {
    fn new(q: &QuadraticForm, tag: Anisotropy, evidence: Evidence) -> AnisotropyVerdict {
        if let Anisotropy::Isotropic(v) = &tag {
            let f = q.field();
            assert!(v.iter().any(|x| !f.is_zero(x)), "isotropic witness must be nonzero");
            assert!(f.is_zero(&q.eval(v)), "isotropic witness must be a zero of q");
        }
        AnisotropyVerdict { tag, evidence }
    }

    pub fn is_anisotropic(&self) -> bool {
        self.tag == Anisotropy::Anisotropic
    }

    pub fn witness(&self) -> Option<&Vector> {
        match &self.tag {
            Anisotropy::Isotropic(v) => Some(v),
            _ => None,
        }
    }
}

impl QuadraticForm {
    /// Anisotropy verdict: exhaustive over finite fields (error when more
    /// than `policy.exhaustive` vectors), definiteness over `Q`, exact
    /// criteria for binary and totally degenerate characteristic-2 forms,
    /// otherwise a bounded search that may end in `Unknown`.
    pub fn anisotropy(&self, policy: &Policy) -> Result<AnisotropyVerdict, FormError> {
        let f = self.field().clone();
        let n = self.dim();
        if n == 0 {
            return Ok(AnisotropyVerdict::new(self, Anisotropy::Anisotropic, Evidence::Exhaustive { checked: 0 }));
        }
        for i in 0..n {
            if f.is_zero(self.coeff(i, i)) {
                let v = super::unit_vec(&f, n, i);
                return Ok(AnisotropyVerdict::new(self, Anisotropy::Isotropic(v), Evidence::BasisVector));
            }
        }
        if let Some(q) = f.order() {
            let count = q.checked_pow(n as u32).map(|c| c - 1);
            match count {
                Some(c) if c <= policy.exhaustive as u128 => return Ok(self.exhaustive(q)),
                _ => {
                    return Err(FormError::BudgetExceeded {
                        count: count.unwrap_or(u128::MAX),
                        budget: policy.exhaustive,
                    })
                }
            }
        }
        if f.characteristic() != 2 {
            let (p, d) = self.diagonalize()?;
            if let FieldKind::Rationals = f.kind() {
                let signs: Vec<bool> = d
                    .iter()
                    .map(|x| match x {
                        Scalar::Rat(r) => r.is_positive(),
                        _ => unreachable!(),
                    })
                    .collect();
                if d.iter().all(|x| !f.is_zero(x)) && (signs.iter().all(|s| *s) || signs.iter().all(|s| !*s)) {
                    return Ok(AnisotropyVerdict::new(self, Anisotropy::Anisotropic, Evidence::Definiteness));
                }
            }
            if let Some(k) = d.iter().position(|x| f.is_zero(x)) {
                let v = p.col(k);
                return Ok(AnisotropyVerdict::new(self, Anisotropy::Isotropic(v), Evidence::BinaryCriterion));
            }
            if n == 2 {
                let minus = f.neg(&f.mul(&d[0], &d[1]));
                return Ok(match f.is_square(&minus) {
                    Some(r) => {
                        let v = p.mul_vec(&[r, d[0].clone()]);
                        AnisotropyVerdict::new(self, Anisotropy::Isotropic(v), Evidence::BinaryCriterion)
                    }
                    None => AnisotropyVerdict::new(self, Anisotropy::Anisotropic, Evidence::BinaryCriterion),
                });
            }
        } else if self.is_totally_degenerate() {
            return self.p_independence();
        } else if n == 2 {
            if let Some(v) = self.binary_char2_verdict()? {
                return Ok(v);
            }
        }
        Ok(self.bounded_search(policy))
    }

    fn exhaustive(&self, q: u128) -> AnisotropyVerdict {
        let f = self.field();
        let n = self.dim();
        let mut checked = 0u128;
        // Projective points: first nonzero coordinate equal to 1.
        for lead in 0..n {
            let rest = n - lead - 1;
            let total = q.pow(rest as u32);
            for idx in 0..total {
                let mut v = vec![f.zero(); n];
                v[lead] = f.one();
                let mut r = idx;
                for slot in v.iter_mut().skip(lead + 1) {
                    *slot = f.element_at(r % q);
                    r /= q;
                }
                checked += 1;
                if f.is_zero(&self.eval(&v)) {
                    return AnisotropyVerdict::new(self, Anisotropy::Isotropic(v), Evidence::Exhaustive { checked });
                }
            }
        }
        AnisotropyVerdict::new(self, Anisotropy::Anisotropic, Evidence::Exhaustive { checked })
    }

    /// `sum a_i x_i^2` is isotropic iff the `a_i` are linearly dependent over
    /// `K^2`, i.e. iff their p-basis coordinate vectors are dependent over `K`;
    /// a kernel vector is then itself an isotropic vector.
    fn p_independence(&self) -> Result<AnisotropyVerdict, FormError> {
        let f = self.field();
        let n = self.dim();
        let coords: Vec<Vec<Scalar>> = (0..n)
            .map(|i| f.p_coordinates(self.coeff(i, i)))
            .collect::<Result<_, _>>()?;
        let rows = coords[0].len();
        let m = Matrix::from_fn(f, rows, n, |r, c| coords[c][r].clone());
        Ok(match m.kernel_basis().into_iter().next() {
            Some(v) => AnisotropyVerdict::new(self, Anisotropy::Isotropic(v), Evidence::PIndependence),
            None => AnisotropyVerdict::new(self, Anisotropy::Anisotropic, Evidence::PIndependence),
        })
    }

    /// `a x^2 + c x y + b y^2` with `a, c != 0`: substituting `x = (c/a) z y`
    /// reduces a zero to `z^2 + z = ab/c^2`.
    fn binary_char2_verdict(&self) -> Result<Option<AnisotropyVerdict>, FormError> {
        let f = self.field();
        let a = self.coeff(0, 0);
        let c = self.coeff(0, 1);
        let b = self.coeff(1, 1);
        let r = f.div(&f.mul(a, b), &f.square(c))?;
        Ok(match f.artin_schreier(&r)? {
            ArtinSchreier::Root(z) => {
                let x = f.mul(&f.div(c, a)?, &z);
                let v = vec![x, f.one()];
                Some(AnisotropyVerdict::new(self, Anisotropy::Isotropic(v), Evidence::BinaryCriterion))
            }
            ArtinSchreier::NotInImage => {
                Some(AnisotropyVerdict::new(self, Anisotropy::Anisotropic, Evidence::BinaryCriterion))
            }
            ArtinSchreier::Unknown(_) => None,
        })
    }

    /// Tries coordinate tuples drawn from growing enumerations of small
    /// elements, at most `policy.budget` vectors.
    fn bounded_search(&self, policy: &Policy) -> AnisotropyVerdict {
        let f = self.field();
        let n = self.dim();
        let mut tried = 0u64;
        let mut seen = std::collections::HashSet::new();
        for height in 1..=policy.height.max(1) as u64 {
            let Ok(pool) = f.enumerate(height) else { break };
            let k = pool.len() as u128;
            let Some(total) = k.checked_pow(n as u32) else { break };
            for idx in 1..total {
                if tried >= policy.budget {
                    return AnisotropyVerdict::new(self, Anisotropy::Unknown, Evidence::BoundedSearch { tried });
                }
                let mut r = idx;
                let v: Vector = (0..n)
                    .map(|_| {
                        let x = pool[(r % k) as usize].clone();
                        r /= k;
                        x
                    })
                    .collect();
                if !seen.insert(v.clone()) {
                    continue;
                }
                tried += 1;
                if f.is_zero(&self.eval(&v)) {
                    return AnisotropyVerdict::new(self, Anisotropy::Isotropic(v), Evidence::BoundedSearch { tried });
                }
            }
        }
        AnisotropyVerdict::new(self, Anisotropy::Unknown, Evidence::BoundedSearch { tried })
    }
}
