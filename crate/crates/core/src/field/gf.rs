//! Arithmetic on residues of `F_p[w]/(m)`, kept as plain `u64` vectors.

use super::{pow_mod, GaloisData};

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a nonzero `m` (trimmed output).
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let inv = pow_mod(m[dm], p - 2, p);
    let mut r = trim(a.to_vec());
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = mulmod(r[dr], inv, p);
        let k = dr - dm;
        for (j, &mj) in m.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mulmod(c, mj, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(p, &x, &y);
        x = y;
        y = r;
    }
    x
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    poly_rem(p, &poly_mul(p, a, b), m)
}

fn poly_powmod(p: u64, a: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_rem(p, a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(p, &acc, &base, m);
        }
        base = poly_mulmod(p, &base, &base, m);
        e >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic modulus.
pub(super) fn is_irreducible(p: u64, m: &[u64]) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut frob = x.clone();
    for i in 1..=k {
        frob = poly_powmod(p, &frob, p, m);
        // frob = x^(p^i) mod m
        // Every proper divisor i of k must give a trivial gcd.
        if i <= k / 2 && k.is_multiple_of(i) {
            let diff = sub(p, &frob, &x);
            let g = poly_gcd(p, m, &diff);
            if g.len() > 1 {
                return false;
            }
        }
    }
    trim(sub(p, &frob, &x)).is_empty()
}

fn sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn pad(mut v: Vec<u64>, k: usize) -> Vec<u64> {
    v.resize(k, 0);
    v
}

pub(super) fn mul(g: &GaloisData, a: &[u64], b: &[u64]) -> Vec<u64> {
    pad(poly_rem(g.p, &poly_mul(g.p, a, b), &g.modulus), g.k)
}

pub(super) fn inv(g: &GaloisData, a: &[u64]) -> Vec<u64> {
    // Extended Euclid over F_p[w].
    let p = g.p;
    let (mut r0, mut r1) = (g.modulus.clone(), trim(a.to_vec()));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(p, &r0, &r1);
        let s2 = sub(p, &s0, &poly_mul(p, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    // r0 is a nonzero constant since the modulus is irreducible.
    let c = pow_mod(r0[0], p - 2, p);
    let s: Vec<u64> = s0.iter().map(|x| mulmod(*x, c, p)).collect();
    pad(poly_rem(p, &s, &g.modulus), g.k)
}

fn divrem(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let inv = pow_mod(b[db], p - 2, p);
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mulmod(r[dr], inv, p);
        let k = dr - db;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mulmod(c, bj, p)) % p;
        }
        q[k] = c;
        r = trim(r);
    }
    (trim(q), r)
}

pub(crate) fn render_poly_u64(coeffs: &[u64], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}
