//! Table-driven arithmetic in `F_q`, `q = p^t <= 2^16`.
//!
//! An element is stored as the integer `sum c_i p^i` where `c_0 + c_1 y + ... + c_{t-1} y^{t-1}`
//! is its residue modulo the field modulus. The constant term is the least significant
//! base-`p` digit, so the prime subfield is `{0, .., p-1}` and `0`/`1` are the usual
//! additive and multiplicative identities.
//!
//! Multiplication goes through log/antilog tables. For `q <= 256` full addition and
//! multiplication tables are kept as well, since the exhaustive sweeps live at that size.

use crate::error::{Error, Result};

/// A field element in the base-`p` digit encoding.
pub type Elem = u16;

pub const MAX_ORDER: u32 = 1 << 16;
const FULL_TABLE_LIMIT: u32 = 256;
const AXIOM_CHECK_LIMIT: u32 = 64;

/// Default moduli (Conway polynomials), lowest coefficient first, leading 1 included.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, t)`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut t = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        t += 1;
    }
    (rest == 1).then_some((p, t))
}

// --- polynomials over F_p, lowest coefficient first -------------------------------

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let coef = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - coef * c % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    r as u32
}

fn digits_of(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = trim(modulus.to_vec());
    if m.len() < 2 {
        return false;
    }
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut div = digits_of(code, p, d);
            div.push(1);
            if poly_rem(&m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Finite field context. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    t: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: Elem,
    exp: Vec<Elem>,
    log: Vec<u32>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    add_table: Option<Vec<Elem>>,
    mul_table: Option<Vec<Elem>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.t == other.t && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds `F_{p^t}`. Without an explicit modulus the documented default is used.
    pub fn new(p: u32, t: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::CompositeCharacteristic(p));
        }
        let q = (p as u64).checked_pow(t).filter(|&q| t >= 1 && q <= MAX_ORDER as u64);
        let q = q.ok_or(Error::UnsupportedOrder { p, t })? as u32;
        let modulus = match modulus {
            Some(m) => {
                let m = trim(m.iter().map(|c| c % p).collect());
                if m.len() != t as usize + 1 || !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus { degree: t });
                }
                // normalize to monic
                let li = inv_mod(m[t as usize], p);
                m.iter().map(|c| c * li % p).collect()
            }
            None => default_modulus(p, t),
        };
        let mut field = Field {
            p,
            t,
            q,
            modulus,
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            inv: Vec::new(),
            add_table: None,
            mul_table: None,
        };
        field.build_tables()?;
        if q <= AXIOM_CHECK_LIMIT {
            field.check_axioms()?;
        }
        Ok(field)
    }

    /// Builds the field of order `q` with the default modulus.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, t) = prime_power(q).ok_or(Error::CompositeCharacteristic(q))?;
        Self::new(p, t, None)
    }

    fn poly(&self, a: Elem) -> Vec<u32> {
        trim(digits_of(a as u32, self.p, self.t as usize))
    }

    fn encode(&self, poly: &[u32]) -> Elem {
        poly.iter().rev().fold(0u32, |acc, &c| acc * self.p + c) as Elem
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let r = poly_mulmod(&self.poly(a), &self.poly(b), &self.modulus, self.p);
        self.encode(&r)
    }

    fn digit_add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a as u32, b as u32);
        let (mut r, mut place) = (0u32, 1u32);
        for _ in 0..self.t {
            r += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        r as Elem
    }

    fn build_tables(&mut self) -> Result<()> {
        let q = self.q as usize;
        let order = q - 1;
        let mut found = None;
        for g in 1..q as u32 {
            let g = g as Elem;
            let mut powers = Vec::with_capacity(order);
            let mut x: Elem = 1;
            for _ in 0..order {
                powers.push(x);
                x = self.slow_mul(x, g);
                if x == 1 {
                    break;
                }
            }
            if powers.len() == order && x == 1 {
                found = Some((g, powers));
                break;
            }
        }
        let (g, powers) =
            found.ok_or_else(|| Error::Consistency("no primitive element found".into()))?;
        self.primitive = g;
        let mut log = vec![0u32; q];
        for (i, &x) in powers.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let mut exp = powers.clone();
        exp.extend_from_slice(&powers);
        self.exp = exp;
        self.log = log;
        self.neg = (0..q as u32)
            .map(|a| {
                let d = digits_of(a, self.p, self.t as usize);
                let nd: Vec<u32> = d.iter().map(|&c| (self.p - c) % self.p).collect();
                self.encode(&nd)
            })
            .collect();
        self.inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    self.exp[(order - self.log[a] as usize) % order]
                }
            })
            .collect();
        if self.q <= FULL_TABLE_LIMIT {
            let mut add = vec![0; q * q];
            let mut mul = vec![0; q * q];
            for a in 0..q {
                for b in 0..q {
                    add[a * q + b] = self.digit_add(a as Elem, b as Elem);
                    mul[a * q + b] = self.log_mul(a as Elem, b as Elem);
                }
            }
            self.add_table = Some(add);
            self.mul_table = Some(mul);
        }
        Ok(())
    }

    fn check_axioms(&self) -> Result<()> {
        let q = self.q as Elem;
        for a in 0..q {
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return Err(Error::Consistency(format!("no inverse for {a}")));
            }
            for b in 0..q {
                if self.mul(a, b) != self.mul(b, a) || self.add(a, b) != self.add(b, a) {
                    return Err(Error::Consistency("commutativity".into()));
                }
                for c in 0..q {
                    let assoc = self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
                    let dist =
                        self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c));
                    if !assoc || !dist {
                        return Err(Error::Consistency(format!("axioms fail at {a},{b},{c}")));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn log_mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    /// Monic modulus, lowest coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The smallest element (in encoding order) that generates `F_q^*`.
    pub fn primitive(&self) -> Elem {
        self.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(|a| a as Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_table {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => self.digit_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.mul_table {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => self.log_mul(a, b),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// Discrete log base [`Field::primitive`]. Panics on zero.
    pub fn log(&self, a: Elem) -> u32 {
        assert!(a != 0, "log of zero");
        self.log[a as usize]
    }

    pub fn exp(&self, e: u64) -> Elem {
        self.exp[(e % (self.q as u64 - 1)) as usize]
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let v: u32 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
        if v >= self.q {
            return Err(Error::Parse(format!("element {v} is not below q = {}", self.q)));
        }
        Ok(v as Elem)
    }
}

/// Default modulus for `F_{p^t}`: the Conway polynomial from the built-in table, otherwise
/// the first monic irreducible (ordered by the integer encoding of its lower coefficients)
/// for which `y` is primitive.
pub fn default_modulus(p: u32, t: u32) -> Vec<u32> {
    if t == 1 {
        return vec![0, 1];
    }
    if let Some((_, _, m)) = DEFAULT_MODULI.iter().find(|(pp, tt, _)| *pp == p && *tt == t) {
        return m.to_vec();
    }
    let q = p.pow(t);
    for code in 0..q {
        let mut m = digits_of(code, p, t as usize);
        m.push(1);
        if m[0] == 0 || !is_irreducible(&m, p) {
            continue;
        }
        // is y primitive?
        let y = vec![0, 1];
        let mut x = vec![1u32];
        let mut ord = 0;
        loop {
            x = poly_mulmod(&x, &y, &m, p);
            ord += 1;
            if x == [1] {
                break;
            }
        }
        if ord == q - 1 {
            return m;
        }
    }
    unreachable!("primitive polynomials exist for every degree")
}

/// The automorphism `x -> x^(p^j)` of `F_{p^t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frobenius {
    j: u32,
    t: u32,
    fixed_order: u32,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Frobenius {
    pub fn new(field: &Field, j: u32) -> Result<Self> {
        let t = field.degree();
        if j >= t {
            return Err(Error::BadAutomorphism { j, t });
        }
        let p = field.characteristic() as u64;
        let e = p.pow(j);
        let table: Vec<Elem> = field.elements().map(|a| field.pow(a, e)).collect();
        let mut inverse = vec![0; table.len()];
        for (a, &b) in table.iter().enumerate() {
            inverse[b as usize] = a as Elem;
        }
        let g = gcd(j as u64, t as u64);
        Ok(Frobenius {
            j,
            t,
            fixed_order: p.pow(g as u32) as u32,
            table,
            inverse,
        })
    }

    /// Normalizes the indexing `x -> x^(s^k)` for a subfield order `s = p^e` into the
    /// exponent index `j = k e mod t` over the prime field.
    pub fn from_subfield_index(field: &Field, s: u32, k: u32) -> Result<Self> {
        let (ps, e) = prime_power(s).ok_or(Error::CompositeCharacteristic(s))?;
        if ps != field.characteristic() || !field.degree().is_multiple_of(e) {
            return Err(Error::Configuration(format!(
                "{s} is not a subfield order of F_{}",
                field.order()
            )));
        }
        Self::new(field, (k * e) % field.degree())
    }

    pub fn index(&self) -> u32 {
        self.j
    }

    /// Order `s` of the fixed subfield, `p^gcd(j,t)`.
    pub fn fixed_order(&self) -> u32 {
        self.fixed_order
    }

    /// Order of the automorphism in `Aut(F_q)`.
    pub fn order(&self) -> u32 {
        if self.j == 0 {
            1
        } else {
            self.t / gcd(self.j as u64, self.t as u64) as u32
        }
    }

    pub fn is_identity(&self) -> bool {
        self.j == 0
    }

    /// `sigma^2 = 1`, including the identity.
    pub fn is_involutory(&self) -> bool {
        (2 * self.j).is_multiple_of(self.t)
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.table[a as usize]
    }

    #[inline]
    pub fn apply_inverse(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    pub fn apply_slice(&self, v: &[Elem]) -> Vec<Elem> {
        v.iter().map(|&a| self.apply(a)).collect()
    }

    pub fn apply_inverse_slice(&self, v: &[Elem]) -> Vec<Elem> {
        v.iter().map(|&a| self.apply_inverse(a)).collect()
    }

    pub fn fixed_elements(&self) -> Vec<Elem> {
        (0..self.table.len())
            .map(|a| a as Elem)
            .filter(|&a| self.apply(a) == a)
            .collect()
    }

    pub fn is_fixed(&self, a: Elem) -> bool {
        self.apply(a) == a
    }

    fn require_order_two(&self) -> Result<()> {
        if self.is_identity() || !self.is_involutory() {
            return Err(Error::Configuration(
                "an automorphism with sigma != 1 and sigma^2 = 1".into(),
            ));
        }
        Ok(())
    }

    /// Relative norm `N(a) = a^(s+1)` onto the fixed subfield; needs `sigma` of order 2.
    pub fn norm(&self, field: &Field, a: Elem) -> Result<Elem> {
        self.require_order_two()?;
        Ok(field.pow(a, self.fixed_order as u64 + 1))
    }

    /// Counts `x != 0` with `x^(sigma - 1) = 1` and checks it against `s - 1`.
    pub fn kernel_size(&self, field: &Field) -> Result<usize> {
        if self.is_identity() {
            return Err(Error::Configuration("sigma != 1".into()));
        }
        let count = field
            .elements()
            .filter(|&x| x != 0 && field.div(self.apply(x), x) == 1)
            .count();
        if count != self.fixed_order as usize - 1 {
            return Err(Error::Consistency(format!(
                "kernel of x^(sigma-1) has {count} elements, expected {}",
                self.fixed_order - 1
            )));
        }
        Ok(count)
    }
}
