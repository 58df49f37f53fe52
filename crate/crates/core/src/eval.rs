//! Evaluation of weight products and sums at roots of unity, in double
//! precision and exactly through prime fields and the Chinese remainder
//! theorem.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::RootOfUnity;
use crate::poly::prime_factors;
use crate::weightalg::{QNumFactor, RatioFactor, WeightProduct, WeightSum};

/// Fractional part in [0, 1).
fn turns(x: f64) -> f64 {
    let f = x - libm::floor(x);
    if f >= 1.0 { 0.0 } else { f }
}

/// Default absolute tolerance on |value - nearest integer|.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Phase tables are precomputed up to this many entries; beyond it values
/// are computed on demand.
const TABLE_LIMIT: u64 = 1 << 12;

/// t_r = exp(2 pi i e_r / N_r) for each variable r = 1, 2, ...
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootAssignment {
    pub roots: Vec<RootOfUnity>,
}

impl RootAssignment {
    pub fn new(roots: Vec<RootOfUnity>) -> Result<Self> {
        for r in &roots {
            if r.order == 0 || r.exponent >= r.order {
                return Err(Error::InvalidParameters(format!(
                    "bad root of unity {}/{}",
                    r.order, r.exponent
                )));
            }
        }
        Ok(RootAssignment { roots })
    }

    /// Every variable set to 1.
    pub fn ones(vars: usize) -> Self {
        RootAssignment {
            roots: vec![RootOfUnity::ONE; vars],
        }
    }

    /// Parse "1=3/1,2=1/0" (variable = order / exponent).
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("cannot parse assignment '{s}'"));
        let mut pairs: Vec<(usize, RootOfUnity)> = Vec::new();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (v, rest) = part.split_once('=').ok_or_else(bad)?;
            let (o, e) = rest.split_once('/').ok_or_else(bad)?;
            let v: usize = v.trim().parse().map_err(|_| bad())?;
            let order: u64 = o.trim().parse().map_err(|_| bad())?;
            let exponent: u64 = e.trim().parse().map_err(|_| bad())?;
            pairs.push((v, RootOfUnity { order, exponent }));
        }
        let max = pairs.iter().map(|p| p.0).max().unwrap_or(0);
        let mut roots = vec![RootOfUnity::ONE; max];
        for (v, r) in pairs {
            if v == 0 {
                return Err(bad());
            }
            roots[v - 1] = r;
        }
        RootAssignment::new(roots)
    }

    /// lcm of all orders.
    pub fn lcm(&self) -> u64 {
        self.roots.iter().fold(1u64, |acc, r| acc.lcm(&r.order))
    }

    /// Phase of each variable in units of 1/L, L = lcm.
    pub fn phases(&self) -> (u64, Vec<u64>) {
        let l = self.lcm();
        (l, self.roots.iter().map(|r| r.exponent * (l / r.order)).collect())
    }

    /// Replace every exponent e by N - e.
    pub fn conjugate(&self) -> Self {
        RootAssignment {
            roots: self
                .roots
                .iter()
                .map(|r| RootOfUnity {
                    order: r.order,
                    exponent: (r.order - r.exponent) % r.order,
                })
                .collect(),
        }
    }
}

/// Arithmetic needed to evaluate weights: a value ring and a group of
/// phases with t_var^e represented by a phase.
pub trait Evaluator {
    type Value: Copy;
    type Phase: Copy;

    fn base(&self, var: usize) -> Self::Phase;
    fn scale(&self, p: Self::Phase, k: u64) -> Self::Phase;
    fn padd(&self, a: Self::Phase, b: Self::Phase) -> Self::Phase;
    fn pneg(&self, a: Self::Phase) -> Self::Phase;
    /// Whether the phase is exactly that of 1.
    fn is_trivial(&self, p: Self::Phase) -> bool;
    fn value(&self, p: Self::Phase) -> Self::Value;

    fn from_i64(&self, n: i64) -> Self::Value;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    /// Division by a value known to be nonzero.
    fn div(&self, a: Self::Value, b: Self::Value) -> Self::Value;
}

fn q_power_phase<E: Evaluator>(ev: &E, q: u64, var: usize, e: u32) -> E::Phase {
    (0..e).fold(ev.base(var), |p, _| ev.scale(p, q))
}

/// [A, B]_{q^m} by its sum form, no division.
pub fn eval_qnum<E: Evaluator>(ev: &E, q: u64, f: &QNumFactor) -> E::Value {
    let pa = q_power_phase(ev, q, f.r, f.a);
    let pb = q_power_phase(ev, q, f.s, f.b);
    let big_q = q.pow(f.m);
    let step = ev.padd(pa, ev.pneg(pb));
    let mut cur = ev.scale(pb, big_q - 1);
    let mut acc = ev.value(cur);
    for _ in 1..big_q {
        cur = ev.padd(cur, step);
        acc = ev.add(acc, ev.value(cur));
    }
    acc
}

/// prod (1 - t^{a_i}) / prod (1 - t^{b_j}), taking the limit when factors
/// vanish: each vanishing 1 - t^a contributes a, matched against the
/// denominator's vanishing factors.
pub fn eval_ratio<E: Evaluator>(ev: &E, r: &RatioFactor) -> Result<E::Value> {
    let base = ev.base(r.var);
    let one = ev.from_i64(1);
    // each side: (product of the non-vanishing factors, number vanishing,
    // product of the vanishing exponents)
    let side = |exps: &[u64]| {
        let mut value = one;
        let mut limit = one;
        let mut vanishing = 0usize;
        for &e in exps {
            let p = ev.scale(base, e);
            if ev.is_trivial(p) {
                vanishing += 1;
                limit = ev.mul(limit, ev.from_i64(e as i64));
            } else {
                value = ev.mul(value, ev.sub(one, ev.value(p)));
            }
        }
        (value, vanishing, limit)
    };
    let (num, vn, ln) = side(&r.num);
    let (den, vd, ld) = side(&r.den);
    if vn > vd {
        return Ok(ev.from_i64(0));
    }
    if vn < vd {
        return Err(Error::Pole(format!(
            "{vd} vanishing denominator factors against {vn} in the numerator"
        )));
    }
    Ok(ev.div(ev.mul(num, ln), ev.mul(den, ld)))
}

pub fn eval_product_with<E: Evaluator>(ev: &E, q: u64, p: &WeightProduct) -> Result<E::Value> {
    let mut acc = ev.div(ev.from_i64(p.numer), ev.from_i64(p.denom as i64));
    for f in &p.factors {
        acc = ev.mul(acc, eval_qnum(ev, q, f));
    }
    for r in &p.ratios {
        acc = ev.mul(acc, eval_ratio(ev, r)?);
    }
    Ok(acc)
}

/// Terms summed in order so results are reproducible.
pub fn eval_sum_with<E: Evaluator>(ev: &E, s: &WeightSum) -> Result<E::Value> {
    let mut acc = ev.from_i64(0);
    for t in &s.terms {
        acc = ev.add(acc, eval_product_with(ev, s.q, &t.product)?);
    }
    Ok(acc)
}

fn check_vars(vars: usize, needed: usize) -> Result<()> {
    if needed > vars {
        return Err(Error::InvalidParameters(format!(
            "weight uses {needed} variables but only {vars} are assigned"
        )));
    }
    Ok(())
}

/// Complex evaluation at a root-of-unity assignment. Phases are exact
/// integers modulo L = lcm of the orders.
#[derive(Clone, Debug)]
pub struct ComplexRoots {
    l: u64,
    x: Vec<u64>,
    table: Option<Vec<Complex64>>,
}

impl ComplexRoots {
    pub fn new(a: &RootAssignment) -> Self {
        let (l, x) = a.phases();
        let table = (l <= TABLE_LIMIT).then(|| (0..l).map(|p| unit(p, l)).collect());
        ComplexRoots { l, x, table }
    }

    pub fn vars(&self) -> usize {
        self.x.len()
    }
}

fn unit(p: u64, l: u64) -> Complex64 {
    let theta = TAU * (p as f64) / (l as f64);
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

impl Evaluator for ComplexRoots {
    type Value = Complex64;
    type Phase = u64;

    fn base(&self, var: usize) -> u64 {
        self.x[var - 1]
    }
    fn scale(&self, p: u64, k: u64) -> u64 {
        ((p as u128 * k as u128) % self.l as u128) as u64
    }
    fn padd(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.l as u128) as u64
    }
    fn pneg(&self, a: u64) -> u64 {
        (self.l - a % self.l) % self.l
    }
    fn is_trivial(&self, p: u64) -> bool {
        p.is_multiple_of(self.l)
    }
    fn value(&self, p: u64) -> Complex64 {
        match &self.table {
            Some(t) => t[p as usize],
            None => unit(p, self.l),
        }
    }
    fn from_i64(&self, n: i64) -> Complex64 {
        Complex64::new(n as f64, 0.0)
    }
    fn add(&self, a: Complex64, b: Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: Complex64, b: Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: Complex64, b: Complex64) -> Complex64 {
        a * b
    }
    fn div(&self, a: Complex64, b: Complex64) -> Complex64 {
        a / b
    }
}

/// Evaluation at arbitrary points of the unit circle, t_r = exp(2 pi i θ_r)
/// with θ_r given in turns. Nothing is treated as exactly 1.
#[derive(Clone, Debug)]
pub struct UnitCircle {
    theta: Vec<f64>,
}

impl UnitCircle {
    pub fn new(theta: Vec<f64>) -> Self {
        UnitCircle { theta }
    }
}

impl Evaluator for UnitCircle {
    type Value = Complex64;
    type Phase = f64;

    fn base(&self, var: usize) -> f64 {
        self.theta[var - 1]
    }
    fn scale(&self, p: f64, k: u64) -> f64 {
        turns(p * k as f64)
    }
    fn padd(&self, a: f64, b: f64) -> f64 {
        turns(a + b)
    }
    fn pneg(&self, a: f64) -> f64 {
        turns(-a)
    }
    fn is_trivial(&self, _p: f64) -> bool {
        false
    }
    fn value(&self, p: f64) -> Complex64 {
        let t = TAU * p;
        Complex64::new(libm::cos(t), libm::sin(t))
    }
    fn from_i64(&self, n: i64) -> Complex64 {
        Complex64::new(n as f64, 0.0)
    }
    fn add(&self, a: Complex64, b: Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: Complex64, b: Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: Complex64, b: Complex64) -> Complex64 {
        a * b
    }
    fn div(&self, a: Complex64, b: Complex64) -> Complex64 {
        a / b
    }
}

/// [A, B]_{q^m} by the quotient (A^Q - B^Q) / (A - B); for cross-checks only.
pub fn eval_qnum_quotient(ev: &UnitCircle, q: u64, f: &QNumFactor) -> Complex64 {
    let pa = q_power_phase(ev, q, f.r, f.a);
    let pb = q_power_phase(ev, q, f.s, f.b);
    let big_q = q.pow(f.m);
    let (a, b) = (ev.value(pa), ev.value(pb));
    (ev.value(ev.scale(pa, big_q)) - ev.value(ev.scale(pb, big_q))) / (a - b)
}

/// Evaluation in F_p with t_r mapped to g^{x_r}, g of order exactly L.
#[derive(Clone, Debug)]
pub struct ModularRoots {
    p: u64,
    l: u64,
    x: Vec<u64>,
    table: Option<Vec<u64>>,
    g: u64,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes p ≡ 1 (mod L) above 2^20, ascending.
pub fn primes_one_mod(l: u64) -> impl Iterator<Item = u64> {
    let start = (1u64 << 20) / l + 1;
    (start..).map(move |m| m * l + 1).filter(|&p| is_prime_u64(p))
}

impl ModularRoots {
    pub fn new(a: &RootAssignment, p: u64) -> Result<Self> {
        let (l, x) = a.phases();
        if !(p - 1).is_multiple_of(l) {
            return Err(Error::InvalidParameters(format!("{p} is not 1 mod {l}")));
        }
        let primes = prime_factors(l);
        let g = (2..p)
            .map(|h| pow_mod(h, (p - 1) / l, p))
            .find(|&g| primes.iter().all(|&r| pow_mod(g, l / r, p) != 1))
            .ok_or(Error::NotAnInteger)?;
        let table = (l <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(l as usize);
            let mut cur = 1u64;
            for _ in 0..l {
                t.push(cur);
                cur = mul_mod(cur, g, p);
            }
            t
        });
        Ok(ModularRoots { p, l, x, table, g })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
}

impl Evaluator for ModularRoots {
    type Value = u64;
    type Phase = u64;

    fn base(&self, var: usize) -> u64 {
        self.x[var - 1]
    }
    fn scale(&self, p: u64, k: u64) -> u64 {
        ((p as u128 * k as u128) % self.l as u128) as u64
    }
    fn padd(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.l as u128) as u64
    }
    fn pneg(&self, a: u64) -> u64 {
        (self.l - a % self.l) % self.l
    }
    fn is_trivial(&self, p: u64) -> bool {
        p.is_multiple_of(self.l)
    }
    fn value(&self, ph: u64) -> u64 {
        match &self.table {
            Some(t) => t[ph as usize],
            None => pow_mod(self.g, ph, self.p),
        }
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }
    fn div(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, pow_mod(b, self.p - 2, self.p), self.p)
    }
}

/// Result of a floating-point evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    pub re: f64,
    pub im: f64,
    pub rounded: i64,
    pub residual: f64,
    pub exact: bool,
}

impl EvalResult {
    fn from_complex(z: Complex64) -> Self {
        let rounded = libm::round(z.re);
        EvalResult {
            re: z.re,
            im: z.im,
            rounded: rounded as i64,
            residual: (z - Complex64::new(rounded, 0.0)).norm(),
            exact: false,
        }
    }
}

pub fn eval_factor(f: &QNumFactor, q: u64, a: &RootAssignment) -> Complex64 {
    eval_qnum(&ComplexRoots::new(a), q, f)
}

/// Evaluate a product; fails if the residual exceeds `tolerance`.
pub fn eval_product(p: &WeightProduct, q: u64, a: &RootAssignment, tolerance: f64) -> Result<EvalResult> {
    check_vars(a.roots.len(), p.max_var())?;
    let z = eval_product_with(&ComplexRoots::new(a), q, p)?;
    finish(z, tolerance)
}

/// Evaluate a sum; the tolerance is scaled by the number of terms.
pub fn eval_sum(s: &WeightSum, a: &RootAssignment, tolerance: f64) -> Result<EvalResult> {
    check_vars(a.roots.len(), s.max_var())?;
    let z = eval_sum_with(&ComplexRoots::new(a), s)?;
    finish(z, tolerance * (s.len().max(1) as f64))
}

fn finish(z: Complex64, tolerance: f64) -> Result<EvalResult> {
    let r = EvalResult::from_complex(z);
    if !r.residual.is_finite() || r.residual >= tolerance {
        return Err(Error::NumericInstability {
            residual: r.residual,
            tolerance,
        });
    }
    Ok(r)
}

/// Upper bound on |S| at any root-of-unity point: the value at t = 1
/// (every coefficient of the polynomials handled here is nonnegative).
pub fn magnitude_bound(s: &WeightSum) -> Result<BigUint> {
    let ones = ComplexRoots::new(&RootAssignment::ones(s.max_var()));
    let v = eval_sum_with(&ones, s)?;
    let b = libm::ceil(v.norm() * 1.000_001) + 1.0;
    Ok(BigUint::from(b.to_u64().unwrap_or(u64::MAX)))
}

/// Exact integer value of `s` at `a`: residues modulo primes p ≡ 1 (mod L)
/// combined by CRT until the product exceeds twice the magnitude bound
/// (at least two primes), then confirmed against one further prime.
pub fn eval_exact_modular(s: &WeightSum, a: &RootAssignment) -> Result<BigInt> {
    check_vars(a.roots.len(), s.max_var())?;
    let bound = magnitude_bound(s)?;
    let needed = BigUint::from(2u32) * bound + 1u32;
    let l = a.lcm();
    let mut primes = primes_one_mod(l);
    let mut modulus = BigUint::one();
    let mut value = BigUint::zero();
    let mut used = 0;
    while used < 2 || modulus <= needed {
        let p = primes.next().expect("infinitely many primes");
        let ev = ModularRoots::new(a, p)?;
        let r = eval_sum_with(&ev, s)?;
        value = crt_step(&value, &modulus, r, p);
        modulus *= p;
        used += 1;
    }
    let m_int = BigInt::from(modulus.clone());
    let mut signed = BigInt::from(value);
    if signed.clone() * 2 > m_int {
        signed -= &m_int;
    }
    let check = primes.next().expect("infinitely many primes");
    let ev = ModularRoots::new(a, check)?;
    let r = eval_sum_with(&ev, s)?;
    let expect = signed.mod_floor(&BigInt::from(check));
    if expect != BigInt::from(r) {
        return Err(Error::NotAnInteger);
    }
    Ok(signed)
}

/// Combine x ≡ value (mod modulus) with x ≡ r (mod p).
fn crt_step(value: &BigUint, modulus: &BigUint, r: u64, p: u64) -> BigUint {
    let pb = BigUint::from(p);
    let v_mod_p = (value % &pb).to_u64().expect("reduced below p");
    let m_mod_p = (modulus % &pb).to_u64().expect("reduced below p");
    let diff = (r + p - v_mod_p) % p;
    let k = mul_mod(diff, pow_mod(m_mod_p, p - 2, p), p);
    value + modulus * BigUint::from(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weightalg::{grassmannian_csp_poly, qt_multinomial, qt_multinomial_sum, WeightSum};

    fn zeta(order: u64, e: u64) -> RootAssignment {
        RootAssignment::new(vec![RootOfUnity { order, exponent: e }]).unwrap()
    }

    #[test]
    fn qnum_at_one_and_roots() {
        let f = QNumFactor::new(1, 0, 1, 0);
        assert!((eval_factor(&f, 3, &RootAssignment::ones(1)) - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        let g = QNumFactor::new(1, 0, 1, 1);
        let v = eval_factor(&g, 2, &zeta(3, 1));
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        // (q-1)-th roots of unity: 1 if distinct, q if equal
        let two = RootAssignment::new(vec![
            RootOfUnity { order: 4, exponent: 1 },
            RootOfUnity { order: 4, exponent: 3 },
        ])
        .unwrap();
        let v = eval_factor(&QNumFactor::new(1, 0, 2, 0), 5, &two);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let v = eval_factor(&QNumFactor::new(1, 0, 1, 0), 5, &two);
        assert!((v - Complex64::new(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn small_sum_vanishes_at_cube_root() {
        let s = grassmannian_csp_poly(2, &[2], 1).unwrap();
        assert_eq!(eval_sum(&s, &zeta(3, 1), DEFAULT_TOLERANCE).unwrap().rounded, 0);
        assert_eq!(eval_sum(&s, &zeta(3, 0), DEFAULT_TOLERANCE).unwrap().rounded, 3);
        assert_eq!(eval_exact_modular(&s, &zeta(3, 1)).unwrap(), BigInt::zero());
        assert_eq!(eval_exact_modular(&s, &zeta(3, 2)).unwrap(), BigInt::zero());
        assert_eq!(eval_exact_modular(&s, &zeta(1, 0)).unwrap(), BigInt::from(3));
        let empty = WeightSum::single(2, "", WeightProduct::one());
        assert_eq!(eval_sum(&empty, &zeta(1, 0), DEFAULT_TOLERANCE).unwrap().rounded, 1);
    }

    #[test]
    fn qt_binomial_two_forms() {
        let sum = qt_multinomial_sum(2, &[1, 1]);
        let prod = WeightSum::single(2, "ratio", qt_multinomial(2, &[1, 1]));
        for e in 0..3 {
            let a = zeta(3, e);
            assert_eq!(eval_exact_modular(&sum, &a).unwrap(), eval_exact_modular(&prod, &a).unwrap());
        }
        for i in 0..20 {
            let ev = UnitCircle::new(vec![0.013 + i as f64 * 0.049]);
            let x = eval_sum_with(&ev, &sum).unwrap();
            let y = eval_sum_with(&ev, &prod).unwrap();
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn pole_is_reported() {
        let r = RatioFactor {
            var: 1,
            num: vec![1],
            den: vec![3, 6],
        };
        let p = WeightProduct::from_ratio(r);
        assert!(matches!(eval_product(&p, 2, &zeta(3, 1), 1e-6), Err(Error::Pole(_))));
    }

    #[test]
    fn miller_rabin_and_prime_search() {
        assert!(is_prime_u64(65_537) && is_prime_u64(1_000_000_007) && !is_prime_u64(561));
        let l = 255;
        let ps: Vec<u64> = primes_one_mod(l).take(3).collect();
        assert!(ps.iter().all(|&p| p > 1 << 20 && (p - 1) % l == 0 && is_prime_u64(p)));
    }

    #[test]
    fn parse_assignments() {
        let a = RootAssignment::parse("1=3/1,2=1/0").unwrap();
        assert_eq!(a.roots[0], RootOfUnity { order: 3, exponent: 1 });
        assert_eq!(a.lcm(), 3);
        assert!(RootAssignment::parse("1=3/4").is_err());
    }
}
