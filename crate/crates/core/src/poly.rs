//! Arithmetic in a prime field F_q and dense univariate polynomials over it.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::Serialize;

/// The prime field F_q. Scalars are `u32` values in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    q: u32,
}

impl Fp {
    /// Caller guarantees `q` is prime; see [`is_prime`].
    pub const fn new(q: u32) -> Self {
        Fp { q }
    }

    #[inline]
    pub const fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn reduce(self, a: u64) -> u32 {
        (a % self.q as u64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero scalar.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a != 0, "inverse of zero");
        self.pow(a, self.q as u64 - 2)
    }
}

/// Trial-division primality test; adequate for field sizes below 2^32.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A polynomial over F_q, coefficients stored lowest degree first with no
/// trailing zeros (the zero polynomial has an empty coefficient list).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Poly {
    q: u32,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero(q: u32) -> Self {
        Poly { q, coeffs: Vec::new() }
    }

    pub fn one(q: u32) -> Self {
        Poly::constant(q, 1)
    }

    pub fn x(q: u32) -> Self {
        Poly::from_coeffs(q, vec![0, 1])
    }

    pub fn constant(q: u32, c: u32) -> Self {
        Poly::from_coeffs(q, vec![c])
    }

    /// Builds a polynomial from coefficients (lowest first), reducing mod q.
    pub fn from_coeffs(q: u32, coeffs: Vec<u32>) -> Self {
        let mut p = Poly {
            q,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    fn field(&self) -> Fp {
        Fp::new(self.q)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field().inv(self.lead());
        self.scale(inv)
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = self.field();
        Poly::from_coeffs(self.q, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.q, other.q);
        let f = self.field();
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::from_coeffs(self.q, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.q, other.q);
        let f = self.field();
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::from_coeffs(self.q, coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.q, other.q);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.q);
        }
        let f = self.field();
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(self.q, out)
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let f = self.field();
        let dd = divisor.coeffs.len() - 1;
        let inv_lead = f.inv(divisor.lead());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(self.q), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv_lead);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(c, b));
            }
        }
        (Poly::from_coeffs(self.q, quot), Poly::from_coeffs(self.q, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(self.q).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field();
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Irreducibility over F_q: no common factor with x^{q^e} - x for
    /// any e <= deg/2.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        let x = Poly::x(self.q);
        let mut frob = x.rem(self);
        for _ in 1..=d / 2 {
            frob = frob.pow_mod(self.q as u64, self);
            if !frob.sub(&x).gcd(self).is_one() {
                return false;
            }
        }
        true
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[q={}]({})", self.q, self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let a = Poly::from_coeffs(3, vec![1, 2, 0, 1, 2]);
        let b = Poly::from_coeffs(3, vec![2, 1, 1]);
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(quot.mul(&b).add(&rem), a);
        assert!(rem.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn irreducible_quadratics_over_f3() {
        // Root search oracle: a monic quadratic is irreducible iff it has no root.
        let mut found = Vec::new();
        for c0 in 0..3 {
            for c1 in 0..3 {
                let p = Poly::from_coeffs(3, vec![c0, c1, 1]);
                let rootless = (0..3).all(|x| p.eval(x) != 0);
                assert_eq!(p.is_irreducible(), rootless, "{p}");
                if rootless {
                    found.push(p);
                }
            }
        }
        assert_eq!(found.len(), 3);
    }

    #[test]
    fn gcd_is_monic() {
        let f = Poly::from_coeffs(5, vec![4, 0, 1]); // x^2 - 1
        let g = Poly::from_coeffs(5, vec![2, 2]); // 2(x + 1)
        assert_eq!(f.gcd(&g), Poly::from_coeffs(5, vec![1, 1]));
    }

    #[test]
    fn prime_helpers() {
        assert!(is_prime(2) && is_prime(3) && is_prime(65_537));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(4));
        assert_eq!(prime_factors(255), vec![3, 5, 17]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }
}
