//! Univariate polynomials, low degree first. Only what idempotent splitting needs.

use crate::field::Field;

pub type Poly<F> = Vec<F>;

pub fn trim<F: Field>(p: &mut Poly<F>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree<F: Field>(p: &Poly<F>) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn mul<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![F::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    trim(&mut out);
    out
}

pub fn sub<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let n = a.len().max(b.len());
    let mut out: Poly<F> = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(F::zero) - b.get(i).cloned().unwrap_or_else(F::zero)
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem<F: Field>(a: &Poly<F>, b: &Poly<F>) -> (Poly<F>, Poly<F>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = b[db].inverse().expect("nonzero lead");
    let mut r = a.clone();
    trim(&mut r);
    let mut q = vec![F::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = r[dr].clone() * lead_inv.clone();
        let shift = dr - db;
        q[shift] = c.clone();
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[i + shift] = r[i + shift].clone() - c.clone() * bc.clone();
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn ext_gcd<F: Field>(a: &Poly<F>, b: &Poly<F>) -> (Poly<F>, Poly<F>, Poly<F>) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![F::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![F::one()]);
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        let t = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if let Some(d) = degree(&r0) {
        let inv = r0[d].inverse().expect("nonzero lead");
        let scale = |p: &Poly<F>| -> Poly<F> { p.iter().map(|c| c.clone() * inv.clone()).collect() };
        return (scale(&r0), scale(&s0), scale(&t0));
    }
    (r0, s0, t0)
}

/// `(x - root)^k`
pub fn linear_power<F: Field>(root: &F, k: usize) -> Poly<F> {
    let lin = vec![-root.clone(), F::one()];
    (0..k).fold(vec![F::one()], |acc, _| mul(&acc, &lin))
}

/// Splits off the full power of `(x - root)` dividing `p`: returns `(k, cofactor)`.
pub fn split_root<F: Field>(p: &Poly<F>, root: &F) -> (usize, Poly<F>) {
    let lin = vec![-root.clone(), F::one()];
    let mut k = 0;
    let mut cur = p.clone();
    trim(&mut cur);
    loop {
        let (q, r) = divrem(&cur, &lin);
        if degree(&r).is_some() || degree(&cur).is_none() {
            return (k, cur);
        }
        k += 1;
        cur = q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_traits::{One, Zero};

    type F = Fp<5>;

    fn p(v: &[i64]) -> Poly<F> {
        v.iter().map(|&x| F::new(x)).collect()
    }

    #[test]
    fn gcd_identity() {
        let a = mul(&p(&[1, 1]), &p(&[2, 1]));
        let b = mul(&p(&[1, 1]), &p(&[3, 0, 1]));
        let (g, s, t) = ext_gcd(&a, &b);
        assert_eq!(g, p(&[1, 1]));
        let lhs = sub(&mul(&s, &a), &mul(&mul(&t, &b), &p(&[-1])));
        assert_eq!(lhs, g);
    }

    #[test]
    fn split_root_counts_multiplicity() {
        let poly = mul(&linear_power(&F::new(2), 3), &p(&[1, 1]));
        let (k, co) = split_root(&poly, &F::new(2));
        assert_eq!(k, 3);
        assert_eq!(co, p(&[1, 1]));
        assert!(F::one() != F::zero());
    }
}
