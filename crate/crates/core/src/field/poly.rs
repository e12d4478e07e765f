//! Dense univariate polynomials over a [`Field`], stored low degree first with
//! no trailing zeros. The zero polynomial is the empty vector.

use super::{Field, Scalar};

pub fn trim(f: &Field, mut p: Vec<Scalar>) -> Vec<Scalar> {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Scalar]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn add(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let zero = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub fn neg(f: &Field, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|c| f.neg(c)).collect()
}

pub fn sub(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    add(f, a, &neg(f, b))
}

pub fn scale(f: &Field, a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    if f.is_zero(c) {
        return vec![];
    }
    a.iter().map(|x| f.mul(x, c)).collect()
}

pub fn mul(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    if a.len() == 1 {
        return scale(f, b, &a[0]);
    }
    if b.len() == 1 {
        return scale(f, a, &b[0]);
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// `x^k * a`.
pub fn shift(f: &Field, a: &[Scalar], k: usize) -> Vec<Scalar> {
    if a.is_empty() {
        return vec![];
    }
    let mut out = vec![f.zero(); k];
    out.extend_from_slice(a);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: &Field, a: &[Scalar], b: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(&r[dr], &lead_inv);
        let k = dr - db;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
        }
        q[k] = c;
        r = trim(f, r);
    }
    (trim(f, q), r)
}

/// Division known to be exact.
pub fn exact_div(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if b.len() == 1 && f.is_one(&b[0]) {
        return a.to_vec();
    }
    let (q, r) = divrem(f, a, b);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

pub fn monic(f: &Field, a: &[Scalar]) -> Vec<Scalar> {
    match a.last() {
        None => vec![],
        Some(lc) if f.is_one(lc) => a.to_vec(),
        Some(lc) => scale(f, a, &f.inv(lc).expect("nonzero")),
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    // Fast path: a constant on either side.
    if x.len() == 1 || y.len() == 1 {
        return vec![f.one()];
    }
    // Monic remainders keep coefficient growth down over function fields.
    y = monic(f, &y);
    while !y.is_empty() {
        let (_, r) = divrem(f, &x, &y);
        x = y;
        y = if r.is_empty() { r } else { monic(f, &r) };
        if y.len() == 1 {
            return vec![f.one()];
        }
    }
    monic(f, &x)
}

pub fn eval(f: &Field, a: &[Scalar], x: &Scalar) -> Scalar {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn derivative(f: &Field, a: &[Scalar]) -> Vec<Scalar> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
        .collect();
    trim(f, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let q = Field::rationals();
        let a: Vec<_> = [3, 0, 2, 5].iter().map(|&c| q.from_i64(c)).collect();
        let b: Vec<_> = [1, 2].iter().map(|&c| q.from_i64(c)).collect();
        let (quo, rem) = divrem(&q, &a, &b);
        assert_eq!(add(&q, &mul(&q, &quo, &b), &rem), a);
        assert!(rem.len() < b.len());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = Field::prime(5).unwrap();
        let p = |v: &[i64]| trim(&f, v.iter().map(|&c| f.from_i64(c)).collect());
        // (x+1)(x+2) and (x+1)(x+3)
        let a = mul(&f, &p(&[1, 1]), &p(&[2, 1]));
        let b = mul(&f, &p(&[1, 1]), &p(&[3, 1]));
        assert_eq!(gcd(&f, &a, &b), p(&[1, 1]));
    }
}
