//! Extension fields F_{q^d} over a prime field, with discrete-log tables, and
//! the companion-matrix realisation of torus elements.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fqlinalg::MatFq;
use crate::poly::{is_prime, Fp, Poly};

/// Largest field size for which discrete-log tables are built.
pub const TABLE_BOUND: u64 = 1 << 20;

/// An element of F_{q^d}. `index` encodes the coefficient vector in base q,
/// constant term least significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExtElem {
    pub degree: usize,
    pub index: u32,
}

impl ExtElem {
    pub fn is_zero(&self) -> bool {
        self.index == 0
    }
}

/// A root of unity exp(2 pi i * exponent / order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RootOfUnity {
    pub order: u64,
    pub exponent: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exponent: 0 };
}

/// Serializable summary of one extension field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldDescriptor {
    pub q: u32,
    pub d: usize,
    pub modulus: Vec<u32>,
    pub generator: Vec<u32>,
}

/// F_{q^d} as F_q[x]/(f) with f the lexicographically smallest monic
/// irreducible of degree d.
#[derive(Clone, Debug)]
pub struct ExtField {
    q: u32,
    d: usize,
    modulus: Poly,
    size: u32,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn digits(q: u32, d: usize, mut index: u32) -> Vec<u32> {
    let mut out = vec![0; d];
    for c in out.iter_mut() {
        *c = index % q;
        index /= q;
    }
    out
}

fn undigits(q: u32, coeffs: &[u32]) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * q + c)
}

/// Builds F_{q^d}. Fails if `q` is not prime or `q^d` exceeds [`TABLE_BOUND`].
pub fn build_field(q: u32, d: usize) -> Result<ExtField> {
    if !is_prime(q as u64) {
        return Err(Error::InvalidField(format!("{q} is not prime")));
    }
    if d == 0 {
        return Err(Error::InvalidField("extension degree must be positive".into()));
    }
    let size = (q as u64).checked_pow(d as u32).filter(|&s| s <= TABLE_BOUND).ok_or_else(|| {
        Error::TooLarge(format!("field of order {q}^{d} exceeds table bound {TABLE_BOUND}"))
    })? as u32;

    let modulus = (0..size)
        .map(|low| {
            let mut c = digits(q, d, low);
            c.push(1);
            Poly::from_coeffs(q, c)
        })
        .find(Poly::is_irreducible)
        .expect("an irreducible polynomial exists in every degree");

    let n = size - 1;
    let poly_mul = |a: u32, b: u32| -> u32 {
        let pa = Poly::from_coeffs(q, digits(q, d, a));
        let pb = Poly::from_coeffs(q, digits(q, d, b));
        let mut c = pa.mul(&pb).rem(&modulus).coeffs().to_vec();
        c.resize(d, 0);
        undigits(q, &c)
    };

    let order_is_full = |g: u32| -> bool {
        // g has order n iff g^(n/p) != 1 for each prime p | n.
        crate::poly::prime_factors(n as u64).into_iter().all(|p| {
            let mut e = n as u64 / p;
            let (mut base, mut acc) = (g, 1u32);
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mul(acc, base);
                }
                base = poly_mul(base, base);
                e >>= 1;
            }
            acc != 1
        })
    };
    let generator = (1..size).find(|&g| order_is_full(g)).expect("multiplicative group is cyclic");

    let mut exp = vec![0u32; n as usize];
    let mut log = vec![u32::MAX; size as usize];
    let mut cur = 1u32;
    for (e, slot) in exp.iter_mut().enumerate() {
        *slot = cur;
        log[cur as usize] = e as u32;
        cur = poly_mul(cur, generator);
    }
    debug_assert_eq!(cur, 1);

    Ok(ExtField {
        q,
        d,
        modulus,
        size,
        generator,
        exp,
        log,
    })
}

impl ExtField {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Number of elements q^d.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Order of the multiplicative group, q^d - 1.
    pub fn unit_order(&self) -> u64 {
        self.size as u64 - 1
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            q: self.q,
            d: self.d,
            modulus: self.modulus.coeffs().to_vec(),
            generator: self.coefficients(self.generator()),
        }
    }

    pub fn elem(&self, index: u32) -> ExtElem {
        assert!(index < self.size, "index {index} outside F_{}^{}", self.q, self.d);
        ExtElem { degree: self.d, index }
    }

    pub fn zero(&self) -> ExtElem {
        self.elem(0)
    }

    pub fn one(&self) -> ExtElem {
        self.elem(1)
    }

    pub fn generator(&self) -> ExtElem {
        self.elem(self.generator)
    }

    /// The prime-field scalar `c` viewed in F_{q^d}.
    pub fn scalar(&self, c: u32) -> ExtElem {
        self.elem(c % self.q)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> ExtElem {
        assert!(coeffs.len() <= self.d);
        let c: Vec<u32> = coeffs.iter().map(|&x| x % self.q).collect();
        self.elem(undigits(self.q, &c))
    }

    pub fn coefficients(&self, x: ExtElem) -> Vec<u32> {
        digits(self.q, self.d, x.index)
    }

    /// All nonzero elements in index order.
    pub fn units(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (1..self.size).map(|i| self.elem(i))
    }

    pub fn add(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let f = Fp::new(self.q);
        let (ca, cb) = (self.coefficients(a), self.coefficients(b));
        let c: Vec<u32> = ca.iter().zip(&cb).map(|(&x, &y)| f.add(x, y)).collect();
        self.elem(undigits(self.q, &c))
    }

    pub fn neg(&self, a: ExtElem) -> ExtElem {
        let f = Fp::new(self.q);
        let c: Vec<u32> = self.coefficients(a).into_iter().map(|x| f.neg(x)).collect();
        self.elem(undigits(self.q, &c))
    }

    pub fn sub(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let n = self.unit_order();
        let e = (self.log[a.index as usize] as u64 + self.log[b.index as usize] as u64) % n;
        self.elem(self.exp[e as usize])
    }

    pub fn pow(&self, a: ExtElem, e: u64) -> ExtElem {
        if e == 0 {
            return self.one();
        }
        if a.is_zero() {
            return self.zero();
        }
        let n = self.unit_order();
        let l = (self.log[a.index as usize] as u64 * (e % n)) % n;
        self.elem(self.exp[l as usize])
    }

    pub fn inv(&self, a: ExtElem) -> Result<ExtElem> {
        if a.is_zero() {
            return Err(Error::NotAUnit);
        }
        let n = self.unit_order();
        let l = (n - self.log[a.index as usize] as u64) % n;
        Ok(self.elem(self.exp[l as usize]))
    }

    /// g^e for the chosen generator g.
    pub fn exp_of(&self, e: u64) -> ExtElem {
        self.elem(self.exp[(e % self.unit_order()) as usize])
    }

    /// Discrete logarithm with respect to the chosen generator.
    pub fn dlog(&self, a: ExtElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::NotAUnit);
        }
        Ok(self.log[a.index as usize] as u64)
    }

    pub fn multiplicative_order(&self, a: ExtElem) -> Result<u64> {
        let n = self.unit_order();
        Ok(n / n.gcd(&self.dlog(a)?))
    }

    /// x -> x^q.
    pub fn frobenius(&self, x: ExtElem) -> ExtElem {
        self.pow(x, self.q as u64)
    }

    /// Orbit of `u` under Frobenius: u, u^q, u^{q^2}, ...
    pub fn frobenius_orbit(&self, u: ExtElem) -> Vec<ExtElem> {
        let mut orbit = vec![u];
        let mut cur = self.frobenius(u);
        while cur != u {
            orbit.push(cur);
            cur = self.frobenius(cur);
        }
        orbit
    }

    /// [F_q[u] : F_q].
    pub fn subfield_degree(&self, u: ExtElem) -> usize {
        self.frobenius_orbit(u).len()
    }

    /// prod over the Frobenius orbit of (x - u^{q^i}); its coefficients lie
    /// in F_q.
    pub fn minimal_polynomial(&self, u: ExtElem) -> Poly {
        let mut acc: Vec<ExtElem> = vec![self.one()];
        for r in self.frobenius_orbit(u) {
            let mut next = vec![self.zero(); acc.len() + 1];
            for (i, &c) in acc.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.sub(next[i], self.mul(r, c));
            }
            acc = next;
        }
        let coeffs: Vec<u32> = acc
            .into_iter()
            .map(|c| {
                assert!(c.index < self.q, "minimal polynomial coefficient outside F_q");
                c.index
            })
            .collect();
        Poly::from_coeffs(self.q, coeffs)
    }

    /// Matrix of y -> y*u on F_{q^d} in the power basis 1, x, ..., x^{d-1},
    /// acting on row vectors.
    pub fn multiplication_matrix(&self, u: ExtElem) -> MatFq {
        let mut m = MatFq::zeros(self.q, self.d, self.d);
        let mut basis = self.one();
        let x = if self.d == 1 { self.one() } else { self.elem(self.q) };
        for i in 0..self.d {
            let row = self.coefficients(self.mul(basis, u));
            for (j, &c) in row.iter().enumerate() {
                m.set(i, j, c);
            }
            basis = self.mul(basis, x);
        }
        m
    }

    /// omega(u) = exp(2 pi i dlog(u) / (q^d - 1)).
    pub fn omega(&self, u: ExtElem) -> Result<RootOfUnity> {
        Ok(RootOfUnity {
            order: self.unit_order(),
            exponent: self.dlog(u)?,
        })
    }
}

/// Companion matrix of a monic f = x^d - a_{d-1} x^{d-1} - ... - a_0: the
/// subdiagonal-shifted identity with last row (a_0, ..., a_{d-1}).
pub fn companion_matrix(f: &Poly) -> MatFq {
    assert!(f.is_monic(), "companion matrix needs a monic polynomial");
    let d = f.degree().expect("nonzero polynomial");
    assert!(d >= 1, "companion matrix needs positive degree");
    let fp = Fp::new(f.q());
    let mut m = MatFq::zeros(f.q(), d, d);
    for i in 0..d - 1 {
        m.set(i, i + 1, 1);
    }
    for j in 0..d {
        m.set(d - 1, j, fp.neg(f.coeff(j)));
    }
    m
}

/// The fields F_{q^d} needed by a computation, built on demand.
#[derive(Clone, Debug)]
pub struct FieldTower {
    q: u32,
    fields: BTreeMap<usize, ExtField>,
}

impl FieldTower {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q as u64) {
            return Err(Error::InvalidField(format!("{q} is not prime")));
        }
        Ok(FieldTower {
            q,
            fields: BTreeMap::new(),
        })
    }

    /// Tower containing every degree in `degrees`.
    pub fn with_degrees(q: u32, degrees: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut t = FieldTower::new(q)?;
        for d in degrees {
            t.ensure(d)?;
        }
        Ok(t)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ensure(&mut self, d: usize) -> Result<&ExtField> {
        if !self.fields.contains_key(&d) {
            self.fields.insert(d, build_field(self.q, d)?);
        }
        Ok(&self.fields[&d])
    }

    /// Panics if degree `d` was never built.
    pub fn field(&self, d: usize) -> &ExtField {
        self.fields
            .get(&d)
            .unwrap_or_else(|| panic!("F_{}^{} not built", self.q, d))
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.fields.keys().copied()
    }

    pub fn descriptors(&self) -> Vec<FieldDescriptor> {
        self.fields.values().map(ExtField::descriptor).collect()
    }
}

/// Which way the blocks of a torus matrix are laid out along the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockOrder {
    /// Blocks 1, ..., l from top-left.
    Ascending,
    /// Blocks l, ..., 1 from top-left.
    Descending,
}

/// An element (u_1, ..., u_l) of F_{q^{a_1}}^x x ... x F_{q^{a_l}}^x.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TorusElement {
    pub alpha: Vec<usize>,
    pub components: Vec<ExtElem>,
}

impl TorusElement {
    pub fn new(alpha: Vec<usize>, components: Vec<ExtElem>) -> Result<Self> {
        if alpha.len() != components.len() {
            return Err(Error::InvalidParameters("one component per block required".into()));
        }
        for (&a, c) in alpha.iter().zip(&components) {
            if c.degree != a {
                return Err(Error::InvalidParameters(format!(
                    "component of degree {} in a block of size {a}",
                    c.degree
                )));
            }
            if c.is_zero() {
                return Err(Error::NotAUnit);
            }
        }
        Ok(TorusElement { alpha, components })
    }

    pub fn identity(alpha: &[usize]) -> Self {
        TorusElement {
            alpha: alpha.to_vec(),
            components: alpha.iter().map(|&a| ExtElem { degree: a, index: 1 }).collect(),
        }
    }

    /// (g_{a_1}, ..., g_{a_l}).
    pub fn generators(tower: &FieldTower, alpha: &[usize]) -> Self {
        TorusElement {
            alpha: alpha.to_vec(),
            components: alpha.iter().map(|&a| tower.field(a).generator()).collect(),
        }
    }

    /// d_r = [F_q[u_r] : F_q] for each block.
    pub fn subfield_degrees(&self, tower: &FieldTower) -> Vec<usize> {
        self.components
            .iter()
            .map(|&u| tower.field(u.degree).subfield_degree(u))
            .collect()
    }

    /// Per-block discrete logs.
    pub fn logs(&self, tower: &FieldTower) -> Vec<u64> {
        self.components
            .iter()
            .map(|&u| tower.field(u.degree).dlog(u).expect("torus components are units"))
            .collect()
    }

    pub fn omegas(&self, tower: &FieldTower) -> Vec<RootOfUnity> {
        self.components
            .iter()
            .map(|&u| tower.field(u.degree).omega(u).expect("torus components are units"))
            .collect()
    }

    /// Block-diagonal matrix with the companion matrix of u_r's minimal
    /// polynomial repeated a_r / d_r times for block r.
    pub fn matrix(&self, tower: &FieldTower, order: BlockOrder) -> MatFq {
        let per_block: Vec<Vec<MatFq>> = self
            .components
            .iter()
            .map(|&u| {
                let field = tower.field(u.degree);
                let f = field.minimal_polynomial(u);
                let d = f.degree().unwrap_or(0);
                assert!(d >= 1 && u.degree % d == 0, "subfield degree must divide block size");
                let c = companion_matrix(&f);
                vec![c; u.degree / d]
            })
            .collect();
        let blocks: Vec<MatFq> = match order {
            BlockOrder::Ascending => per_block.into_iter().flatten().collect(),
            BlockOrder::Descending => per_block.into_iter().rev().flatten().collect(),
        };
        MatFq::block_diag(tower.q(), &blocks)
    }

    /// Block-diagonal matrix of multiplication by u_r in the power basis of
    /// F_{q^{a_r}}; conjugate to [`TorusElement::matrix`] block by block.
    pub fn regular_matrix(&self, tower: &FieldTower, order: BlockOrder) -> MatFq {
        let mut blocks: Vec<MatFq> = self
            .components
            .iter()
            .map(|&u| tower.field(u.degree).multiplication_matrix(u))
            .collect();
        if order == BlockOrder::Descending {
            blocks.reverse();
        }
        MatFq::block_diag(tower.q(), &blocks)
    }
}

/// Every element of T_alpha, with the last block varying fastest.
pub fn torus_elements(tower: &FieldTower, alpha: &[usize]) -> Vec<TorusElement> {
    let sizes: Vec<u32> = alpha.iter().map(|&a| tower.field(a).size()).collect();
    let mut out = Vec::new();
    if alpha.is_empty() {
        out.push(TorusElement::identity(alpha));
        return out;
    }
    let mut idx = vec![1u32; alpha.len()];
    loop {
        out.push(TorusElement {
            alpha: alpha.to_vec(),
            components: alpha
                .iter()
                .zip(&idx)
                .map(|(&a, &i)| ExtElem { degree: a, index: i })
                .collect(),
        });
        let mut pos = alpha.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 1;
        }
    }
}

/// |T_alpha| = prod (q^{a_r} - 1), saturating.
pub fn torus_order(q: u32, alpha: &[usize]) -> u64 {
    alpha.iter().fold(1u64, |acc, &a| {
        let s = (q as u64).saturating_pow(a as u32).saturating_sub(1);
        acc.saturating_mul(s)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_f2() {
        let f = build_field(2, 1).unwrap();
        assert_eq!(f.unit_order(), 1);
        assert_eq!(f.generator().index, 1);
    }

    #[test]
    fn f4_is_x2_x_1_with_generator_x() {
        let f = build_field(2, 2).unwrap();
        assert_eq!(f.modulus().coeffs(), &[1, 1, 1]);
        assert_eq!(f.unit_order(), 3);
        assert_eq!(f.coefficients(f.generator()), vec![0, 1]);
        let g = f.generator();
        assert_eq!(f.frobenius(g), f.mul(g, g));
        assert_eq!(f.pow(g, 4), g);
        assert_eq!(f.omega(f.mul(g, g)).unwrap().exponent, 2);
    }

    #[test]
    fn f9_modulus_is_smallest_irreducible_quadratic() {
        let f = build_field(3, 2).unwrap();
        assert_eq!(f.unit_order(), 8);
        let irreducible: Vec<Poly> = (0..9)
            .map(|low| Poly::from_coeffs(3, vec![low % 3, low / 3, 1]))
            .filter(|p| (0..3).all(|x| p.eval(x) != 0))
            .collect();
        assert_eq!(irreducible.len(), 3);
        assert_eq!(f.modulus(), &irreducible[0]);
    }

    #[test]
    fn f8_modulus_and_minimal_polynomial_of_g3() {
        let f = build_field(2, 3).unwrap();
        assert_eq!(f.modulus().coeffs(), &[1, 1, 0, 1]);
        let g3 = f.exp_of(3);
        let orbit: Vec<u64> = f.frobenius_orbit(g3).iter().map(|&x| f.dlog(x).unwrap()).collect();
        assert_eq!(orbit, vec![3, 6, 5]);
        let m = f.minimal_polynomial(g3);
        assert_eq!(m.degree(), Some(3));
        assert!(m.is_irreducible());
    }

    #[test]
    fn errors() {
        assert!(matches!(build_field(4, 1), Err(Error::InvalidField(_))));
        assert!(matches!(build_field(2, 21), Err(Error::TooLarge(_))));
        let f = build_field(3, 1).unwrap();
        assert_eq!(f.dlog(f.zero()), Err(Error::NotAUnit));
    }

    #[test]
    fn companion_examples() {
        assert_eq!(companion_matrix(&Poly::from_coeffs(5, vec![2, 1])).to_rows(), vec![vec![3]]);
        let c = companion_matrix(&Poly::from_coeffs(2, vec![1, 1, 1]));
        assert_eq!(c.to_rows(), vec![vec![0, 1], vec![1, 1]]);
        let c = companion_matrix(&Poly::from_coeffs(2, vec![1, 1, 0, 1]));
        assert_eq!(c.to_rows(), vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn minimal_polynomials_vanish_and_companion_orders_match() {
        for (q, d) in [(2, 2), (2, 3), (3, 2)] {
            let f = build_field(q, d).unwrap();
            for u in f.units() {
                let m = f.minimal_polynomial(u);
                assert_eq!(d % m.degree().unwrap(), 0);
                // evaluate m at u inside the extension
                let mut acc = f.zero();
                for &c in m.coeffs().iter().rev() {
                    acc = f.add(f.mul(acc, u), f.scalar(c));
                }
                assert!(acc.is_zero());
                let ord = f.multiplicative_order(u).unwrap();
                assert_eq!(companion_matrix(&m).multiplicative_order(1000), Some(ord));
                assert_eq!(f.multiplication_matrix(u).multiplicative_order(1000), Some(ord));
            }
        }
    }

    #[test]
    fn torus_matrix_examples() {
        let tower = FieldTower::with_degrees(2, [2]).unwrap();
        let f4 = tower.field(2);
        let t = TorusElement::new(vec![2, 2], vec![f4.generator(), f4.one()]).unwrap();
        let m = t.matrix(&tower, BlockOrder::Ascending);
        assert_eq!(
            m.to_rows(),
            vec![vec![0, 1, 0, 0], vec![1, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]
        );
        let id = TorusElement::identity(&[2]).matrix(&tower, BlockOrder::Ascending);
        assert_eq!(id, MatFq::identity(2, 2));
        assert_eq!(torus_elements(&tower, &[2, 2]).len(), 9);
    }
}
