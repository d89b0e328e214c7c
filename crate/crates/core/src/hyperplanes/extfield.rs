//! `F_{q^d}` as `F_q[y]/(h)` for a monic irreducible `h` of degree `d`, elements stored as
//! coefficient vectors in the power basis `1, beta, .., beta^(d-1)`.

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// Monic polynomials are coefficient vectors, constant term first.
type Poly = Vec<Elem>;

fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_rem(f: &Field, a: &[Elem], b: &[Elem]) -> Poly {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv_lead = f.inv(b[db]);
    while r.len() > db {
        let c = f.mul(*r.last().unwrap(), inv_lead);
        let shift = r.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(f: &Field, a: &[Elem], b: &[Elem]) -> Poly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Clone, Debug)]
pub struct ExtField<'a> {
    base: &'a Field,
    /// Monic, length `d + 1`.
    modulus: Poly,
}

impl<'a> ExtField<'a> {
    /// Uses the first monic irreducible `h` of degree `d` in the order of its lower
    /// coefficients read as a base-`q` number, constant term least significant.
    pub fn new(base: &'a Field, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Configuration("extension degree >= 1".into()));
        }
        let q = base.order() as u64;
        let count = (q as u128).pow(d as u32);
        if count > 1 << 40 {
            return Err(Error::SizeCap {
                what: "extension field order",
                size: count,
                cap: 1 << 40,
            });
        }
        for code in 0..count as u64 {
            let mut h = vec![0; d + 1];
            let mut c = code;
            for slot in h.iter_mut().take(d) {
                *slot = (c % q) as Elem;
                c /= q;
            }
            h[d] = 1;
            let ext = ExtField { base, modulus: h };
            if ext.modulus_is_irreducible() {
                return Ok(ext);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    /// `q^d`.
    pub fn order(&self) -> u64 {
        (self.base.order() as u64).pow(self.degree() as u32)
    }

    pub fn one(&self) -> Vec<Elem> {
        let mut v = vec![0; self.degree()];
        v[0] = 1;
        v
    }

    /// `beta^i` for `i < d`.
    pub fn basis(&self, i: usize) -> Vec<Elem> {
        let mut v = vec![0; self.degree()];
        v[i] = 1;
        v
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = self.base;
        let d = self.degree();
        let mut prod = vec![0; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        let mut r = poly_rem(f, &prod, &self.modulus);
        r.resize(d, 0);
        r
    }

    pub fn pow(&self, a: &[Elem], mut e: u64) -> Vec<Elem> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Rabin's test: `y^(q^d) = y` and `gcd(y^(q^(d/r)) - y, h) = 1` for primes `r | d`.
    fn modulus_is_irreducible(&self) -> bool {
        let f = self.base;
        let d = self.degree();
        if d == 1 {
            return true;
        }
        let q = f.order() as u64;
        let y = self.basis(1);
        let frob_iter = |k: usize| {
            let mut v = y.clone();
            for _ in 0..k {
                v = self.pow(&v, q);
            }
            v
        };
        if frob_iter(d) != y {
            return false;
        }
        for r in prime_factors(d as u64) {
            let mut g = frob_iter(d / r as usize);
            g[1] = f.sub(g[1], 1);
            if poly_gcd(f, &g, &self.modulus).len() != 1 {
                return false;
            }
        }
        true
    }

    /// The first primitive element in coefficient order (constant term least significant).
    pub fn primitive(&self) -> Vec<Elem> {
        let q = self.base.order() as u64;
        let order = self.order() - 1;
        let factors = prime_factors(order);
        let one = self.one();
        for code in 1..self.order() {
            let mut v = vec![0; self.degree()];
            let mut c = code;
            for slot in v.iter_mut() {
                *slot = (c % q) as Elem;
                c /= q;
            }
            if factors.iter().all(|&r| self.pow(&v, order / r) != one) {
                return v;
            }
        }
        unreachable!("the multiplicative group is cyclic")
    }
}
