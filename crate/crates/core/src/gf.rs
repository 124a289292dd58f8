//! Finite fields GF(p^e) with elements encoded as base-p integers.
//!
//! An element with value `v = c_0 + c_1 p + ... + c_{e-1} p^{e-1}` stands for the
//! polynomial `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` reduced modulo the field's
//! defining polynomial. The defining polynomial is always the smallest monic
//! irreducible of degree `e` when coefficient vectors are compared
//! lexicographically from the constant term upwards, so two fields built from the
//! same `(p, e)` are identical down to element labels.

use std::fmt;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(u32),
    #[error("field order {p}^{e} exceeds the limit of {MAX_FIELD_ORDER}")]
    TooLarge { p: u64, e: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// Parameters identifying a field: characteristic, degree and defining polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Coefficients of the monic modulus, constant term first; length `e + 1`.
    pub modulus: Vec<u32>,
    pub q: u32,
}

/// An element of a [`GaloisField`], stored as its base-p index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// GF(p^e) with log/antilog tables for multiplication.
#[derive(Debug, Clone)]
pub struct GaloisField {
    spec: FieldSpec,
    /// `exp[i] = g^i` for `i` in `0..2(q-1)`, doubled to skip a reduction.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
    generator: FieldElem,
}

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

/// Splits `q` into `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
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

// Dense polynomials over GF(p), constant term first, no trailing zeros.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    // b is monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * bc) % p) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

fn digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    // every monic divisor of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = digits(low as u32, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The smallest monic irreducible of degree `e` over GF(p), comparing the
/// coefficient vector `(c_0, ..., c_{e-1})` lexicographically.
pub fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for idx in 0..count {
        // c_0 is the most significant digit of idx
        let mut coeffs = vec![0u32; e as usize];
        let mut rest = idx;
        for slot in coeffs.iter_mut().rev() {
            *slot = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl GaloisField {
    /// Builds GF(p^e).
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e < 1 {
            return Err(FieldError::BadDegree(e));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(FieldError::TooLarge { p, e })?;
        let p = p as u32;
        let q = q as u32;
        let modulus = smallest_irreducible(p, e);
        let spec = FieldSpec { p, e, modulus, q };

        let slow_mul = |a: u32, b: u32| -> u32 {
            let da = digits(a, p, e);
            let db = digits(b, p, e);
            let mut prod = vec![0u32; 2 * e as usize];
            for (i, &x) in da.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let r = poly_rem(&trim(prod), &spec.modulus, p);
            undigits(&r, p)
        };
        let slow_pow = |a: u32, mut k: u64| -> u32 {
            let mut base = a;
            let mut acc = 1;
            while k > 0 {
                if k & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                k >>= 1;
            }
            acc
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
            .expect("the multiplicative group of a finite field is cyclic");

        let m = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * m.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for (i, e) in exp.iter_mut().take(m).enumerate() {
            *e = cur;
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, generator);
        }
        exp.copy_within(0..m, m);
        Ok(GaloisField {
            spec,
            exp,
            log,
            generator: FieldElem(generator),
        })
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn with_order(q: u64) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, e)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.spec.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.spec.q).map(FieldElem)
    }

    /// The residue of the polynomial `x`. For prime fields this is a constant.
    pub fn x(&self) -> FieldElem {
        if self.spec.e == 1 {
            // x mod (x - c) = c, and the modulus is x + c_0
            FieldElem((self.spec.p - self.spec.modulus[0]) % self.spec.p)
        } else {
            FieldElem(self.spec.p)
        }
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.spec.p;
        if p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.spec.e == 1 {
            return FieldElem((a.0 + b.0) % p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.spec.p;
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElem(self.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let m = self.spec.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElem(self.exp[((m - l) % m) as usize]))
    }

    pub fn pow(&self, a: FieldElem, k: u64) -> FieldElem {
        if k == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        let m = (self.spec.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElem(self.exp[((l * (k % m)) % m) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElem) -> Option<u32> {
        if a.0 == 0 {
            return None;
        }
        let m = self.spec.q - 1;
        let l = self.log[a.0 as usize];
        Some(m / num_integer::gcd(m, l))
    }
}
