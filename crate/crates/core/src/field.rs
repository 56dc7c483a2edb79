//! Scalar fields.
//!
//! All rank and nullspace computations in this crate are exact, so the scalar
//! types are exact fields: arbitrary-precision rationals and small prime
//! fields. Floating point types are deliberately not admitted.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact field usable as the scalar type of the path algebra.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Div<Output = Self>
    + 'static
{
    /// Zero for characteristic zero.
    const CHARACTERISTIC: u64;

    fn inverse(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    /// Distinct roots lying in the field of a polynomial given low degree first.
    fn roots(poly: &[Self]) -> Vec<Self>;

    fn field_name() -> String;
}

/// A field small enough to list.
pub trait FiniteField: Field {
    fn elements() -> Vec<Self>;
}

impl Field for BigRational {
    const CHARACTERISTIC: u64 = 0;

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn roots(poly: &[Self]) -> Vec<Self> {
        rational_roots(poly)
    }

    fn field_name() -> String {
        "rational".to_string()
    }
}

/// Integer divisors larger than this are not searched for rational roots.
const DIVISOR_SEARCH_LIMIT: u64 = 1 << 20;

fn rational_roots(poly: &[BigRational]) -> Vec<BigRational> {
    let mut coeffs: Vec<BigRational> = poly.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(BigRational::zero());
        coeffs.drain(..lead_zeros);
    }
    if coeffs.len() <= 1 {
        return roots;
    }
    let denom_lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let (Some(p_divs), Some(q_divs)) = (
        divisors(&ints[0].abs()),
        divisors(&ints[ints.len() - 1].abs()),
    ) else {
        return roots;
    };
    let mut found: Vec<BigRational> = Vec::new();
    for p in &p_divs {
        for q in &q_divs {
            for sign in [1i64, -1] {
                let cand = BigRational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                if found.contains(&cand) {
                    continue;
                }
                if eval_poly(&coeffs, &cand).is_zero() {
                    found.push(cand);
                }
            }
        }
    }
    roots.extend(found);
    roots
}

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.to_u64()?;
    if n == 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if d > DIVISOR_SEARCH_LIMIT {
            return None;
        }
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    Some(out)
}

/// Evaluates a polynomial (low degree first) at a scalar.
pub fn eval_poly<F: Field>(poly: &[F], x: &F) -> F {
    poly.iter()
        .rev()
        .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Integers modulo a prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in prime field")
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u32> Field for Fp<P> {
    const CHARACTERISTIC: u64 = P as u64;

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = *self;
        let mut exp = P - 2;
        let mut acc = Fp::<P>::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        Some(acc)
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }

    fn roots(poly: &[Self]) -> Vec<Self> {
        if poly.iter().all(|c| c.is_zero()) {
            return Vec::new();
        }
        Self::elements()
            .into_iter()
            .filter(|x| eval_poly(poly, x).is_zero())
            .collect()
    }

    fn field_name() -> String {
        format!("gf{P}")
    }
}

impl<const P: u32> FiniteField for Fp<P> {
    fn elements() -> Vec<Self> {
        (0..P).map(Fp).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn prime_field_arithmetic() {
        type F = Fp<3>;
        assert_eq!(F::new(2) + F::new(2), F::new(1));
        assert_eq!(F::new(2) * F::new(2), F::new(1));
        assert_eq!(F::new(2).inverse(), Some(F::new(2)));
        assert_eq!(-F::new(1), F::new(2));
        assert_eq!(F::new(0).inverse(), None);
    }

    #[test]
    fn rational_roots_found() {
        // (x - 1/2)(x + 3) x = x^3 + 5/2 x^2 - 3/2 x
        let poly = vec![q(0, 1), q(-3, 2), q(5, 2), q(1, 1)];
        let mut roots = Q::roots(&poly);
        roots.sort();
        assert_eq!(roots, vec![q(-3, 1), q(0, 1), q(1, 2)]);
    }

    #[test]
    fn irreducible_quadratic_has_no_rational_roots() {
        let poly = vec![q(-2, 1), q(0, 1), q(1, 1)];
        assert!(Q::roots(&poly).is_empty());
    }

    #[test]
    fn prime_field_roots() {
        type F = Fp<2>;
        // x^2 + x = x(x+1)
        let poly = vec![F::new(0), F::new(1), F::new(1)];
        assert_eq!(F::roots(&poly), vec![F::new(0), F::new(1)]);
    }
}
