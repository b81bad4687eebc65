//! Arithmetic in GF(p^m) for field orders up to 2^16.
//!
//! Elements are encoded as the base-p integer of their coefficient vector
//! (lowest-degree coefficient is the least significant digit), so GF(2^8)
//! elements are the familiar byte values. Moduli use the same encoding
//! including the leading coefficient: x^8+x^4+x^3+x^2+1 is `0x11D`.
//!
//! Multiplication goes through exp/log tables built from a fixed primitive
//! element; addition is digit-wise modulo p.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Encoded field element.
pub type Elem = u32;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Primitive polynomials used when no modulus is given for GF(2^m).
const BINARY_MODULI: [u64; 17] = [
    0, 0x2, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

#[derive(Clone)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    modulus: u64,
    primitive: Elem,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
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

/// Splits `n` into `(p, m)` with `n = p^m`, if `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > n {
        return Some((n, 1));
    }
    let (mut rest, mut m) = (n, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

// Polynomials over GF(p) as coefficient vectors, lowest degree first.

fn digits(mut value: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = value % p;
        value /= p;
    }
    out
}

fn degree(poly: &[u64]) -> Option<usize> {
    poly.iter().rposition(|&c| c != 0)
}

fn poly_from_encoding(value: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut v = value;
    while v > 0 {
        out.push(v % p);
        v /= p;
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = degree(b).expect("nonzero divisor");
    let mut r = a.to_vec();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = r[dr];
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            r[i + shift] = (r[i + shift] + p - (c * bc) % p) % p;
        }
    }
    r.truncate(db);
    r
}

fn is_irreducible(modulus: &[u64], p: u64, m: u32) -> bool {
    for d in 1..=m / 2 {
        let count = p.pow(d);
        for low in 0..count {
            let divisor = poly_from_encoding(count + low, p);
            if degree(&poly_rem(modulus, &divisor, p)).is_none() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^m). Without a modulus a fixed default is used: modulus x for
    /// prime fields, a table of primitive polynomials for GF(2^m), and the
    /// smallest primitive polynomial otherwise.
    pub fn new(p: u64, m: u32, modulus: Option<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge { p, m })?;

        let modulus = match modulus {
            Some(md) => {
                let poly = poly_from_encoding(md, p);
                if poly.len() != m as usize + 1 || poly[m as usize] != 1 {
                    return Err(Error::BadModulus(md));
                }
                if !is_irreducible(&poly, p, m) {
                    return Err(Error::ReducibleModulus(md));
                }
                md
            }
            None if m == 1 => p,
            None if p == 2 => BINARY_MODULI[m as usize],
            None => Self::search_modulus(p, m, q),
        };

        let mut field = Field {
            p: p as u32,
            m,
            q: q as u32,
            modulus,
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.primitive = (1..q as Elem)
            .find(|&g| field.has_full_order(g))
            .expect("a finite field has a primitive element");
        field.build_tables();
        Ok(field)
    }

    /// GF(2) with modulus x.
    pub fn binary() -> Self {
        Self::new(2, 1, None).expect("GF(2) is valid")
    }

    fn search_modulus(p: u64, m: u32, q: u64) -> u64 {
        (0..q)
            .map(|low| q + low)
            .find(|&md| {
                let poly = poly_from_encoding(md, p);
                if !is_irreducible(&poly, p, m) {
                    return false;
                }
                let probe = Field {
                    p: p as u32,
                    m,
                    q: q as u32,
                    modulus: md,
                    primitive: 0,
                    exp: Vec::new(),
                    log: Vec::new(),
                };
                probe.has_full_order(p as Elem)
            })
            .expect("primitive polynomials exist for every degree")
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p as u64;
        let m = self.m as usize;
        let da = digits(a as u64, p, m);
        let db = digits(b as u64, p, m);
        let mut prod = vec![0u64; 2 * m];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let modulus = poly_from_encoding(self.modulus, p);
        let rem = poly_rem(&prod, &modulus, p);
        rem.iter().rev().fold(0u64, |acc, &c| acc * p + c) as Elem
    }

    fn slow_pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn has_full_order(&self, g: Elem) -> bool {
        let order = self.q as u64 - 1;
        if g == 0 {
            return false;
        }
        if order == 1 {
            return g == 1;
        }
        prime_factors(order)
            .into_iter()
            .all(|f| self.slow_pow(g, order / f) != 1)
    }

    fn build_tables(&mut self) {
        let order = (self.q - 1) as usize;
        let mut exp = vec![0; 2 * order];
        let mut log = vec![0; self.q as usize];
        let mut x: Elem = 1;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, self.primitive);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The fixed generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        self.primitive
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.q
    }

    /// Iterates over all elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            a ^ b
        } else if self.m == 1 {
            (a + b) % self.p
        } else {
            self.digitwise(a, b, |x, y, p| (x + y) % p)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            a ^ b
        } else if self.m == 1 {
            (a + self.p - b) % self.p
        } else {
            self.digitwise(a, b, |x, y, p| (x + p - y) % p)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.sub(0, a)
    }

    fn digitwise(&self, mut a: Elem, mut b: Elem, op: impl Fn(u32, u32, u32) -> u32) -> Elem {
        let p = self.p;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.m {
            out += op(a % p, b % p, p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation; `pow(0, 0) = 1`.
    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a + b * c`, the inner step of every matrix-vector product here.
    #[inline]
    pub fn mul_add(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        self.add(a, self.mul(b, c))
    }

    pub fn element(self: &Arc<Self>, value: u64) -> Result<FieldElement> {
        if value >= self.q as u64 {
            return Err(Error::NotAnElement { value, q: self.q });
        }
        Ok(FieldElement {
            value: value as Elem,
            field: Arc::clone(self),
        })
    }
}

/// A field element carrying its field, for checked mixed-field arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: Elem,
    field: Arc<Field>,
}

impl FieldElement {
    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with(&self, value: Elem) -> Self {
        FieldElement {
            value,
            field: Arc::clone(&self.field),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.field.neg(self.value))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(self.field.pow(self.value, e))
    }
}
