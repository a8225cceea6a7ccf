//! Arithmetic in GF(2^n) for 1 <= n <= 16 in a polynomial basis.
//!
//! Elements are plain `u32` bitmasks: bit `i` is the coefficient of `x^i`.
//! A [`Field`] carries the extension degree and the reduction polynomial, and
//! every operation takes its operands through it.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An element of GF(2^n), as a bitmask below `2^n`.
pub type Elem = u32;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Least irreducible polynomial of each degree 1..=16 with nonzero constant
/// term, ordered by integer value.
const DEFAULT_POLYS: [u32; 16] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b,
];

/// Default reduction polynomial for GF(2^n).
pub fn default_reduction_poly(n: u32) -> Result<u32> {
    if !(1..=MAX_DEGREE).contains(&n) {
        return Err(Error::DegreeOutOfRange(n));
    }
    Ok(DEFAULT_POLYS[n as usize - 1])
}

fn poly_degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree at most half the degree of `poly`.
pub fn is_irreducible(poly: u32) -> bool {
    if poly < 2 {
        return false;
    }
    let n = poly_degree(poly);
    if n == 1 {
        return true;
    }
    let limit = 1u32 << (n / 2 + 1);
    (2..limit).all(|d| poly_rem(poly, d) != 0)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Distinct prime factors, ascending.
fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= v {
        if v.is_multiple_of(p) {
            out.push(p);
            while v.is_multiple_of(p) {
                v /= p;
            }
        }
        p += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// The field GF(2^n) with a fixed reduction polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    n: u32,
    poly: u32,
}

impl Field {
    /// Validates degree and irreducibility of `poly`.
    pub fn new(n: u32, poly: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange(n));
        }
        if poly >> n != 1 {
            return Err(Error::PolynomialDegree { n, poly });
        }
        if !is_irreducible(poly) {
            return Err(Error::ReduciblePolynomial(poly));
        }
        Ok(Field { n, poly })
    }

    pub fn with_default_poly(n: u32) -> Result<Self> {
        Field::new(n, default_reduction_poly(n)?)
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn reduction_poly(&self) -> u32 {
        self.poly
    }

    /// Number of elements, `2^n`.
    pub fn order(&self) -> usize {
        1usize << self.n
    }

    /// Order of the multiplicative group, `2^n - 1`.
    pub fn group_order(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn contains(&self, x: Elem) -> bool {
        x <= self.mask()
    }

    pub fn check(&self, x: Elem) -> Result<Elem> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::ElementOutOfRange { n: self.n, value: x })
        }
    }

    /// All elements in ascending order.
    pub fn elements(&self) -> core::ops::Range<Elem> {
        0..(1u32 << self.n)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    /// Carry-less product reduced modulo the reduction polynomial.
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.contains(a) && self.contains(b));
        let mut acc: u64 = 0;
        let mut a = a as u64;
        let mut b = b;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            a <<= 1;
            b >>= 1;
        }
        let n = self.n;
        let poly = self.poly as u64;
        let mut i = 2 * n;
        while i > n {
            i -= 1;
            if (acc >> i) & 1 == 1 {
                acc ^= poly << (i - n);
            }
        }
        acc as Elem
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// `a^e` for `e >= 0`, with `a^0 = 1` for every `a` including zero.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let mut e = e % self.group_order();
        let mut base = a;
        let mut acc = 1;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for any integer `e`; negative exponents require `a != 0`.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            return Ok(self.pow(a, e as u64));
        }
        if a == 0 {
            return Err(Error::NegativePowerOfZero);
        }
        let e = e.rem_euclid(self.group_order() as i64) as u64;
        Ok(self.pow(a, e))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroNotInvertible);
        }
        Ok(self.pow(a, self.group_order() - 1))
    }

    /// `2^k` as an exponent of a power map, reduced modulo `2^n - 1`.
    ///
    /// Negative `k` gives the inverse of `2^|k|`, i.e. `2^(n - |k| mod n)`.
    pub fn pow2_exponent(&self, k: i64) -> u64 {
        1u64 << k.rem_euclid(self.n as i64)
    }

    /// Canonical representative of a monomial exponent.
    ///
    /// Exponent 0 stays 0 (the constant monomial); positive exponents map into
    /// `1..=2^n - 1` so that `x^(2^n - 1)` stays distinct from `x^0`.
    pub fn normalize_exponent(&self, e: u64) -> u64 {
        if e == 0 {
            0
        } else {
            (e - 1) % self.group_order() + 1
        }
    }

    /// Relative trace `Tr_r^n(x) = sum_{i < n/r} x^(2^(i r))`.
    pub fn trace(&self, x: Elem, r: u32) -> Result<Elem> {
        if r == 0 || !self.n.is_multiple_of(r) {
            return Err(Error::NotADivisor { r, n: self.n });
        }
        let mut acc = 0;
        let mut term = x;
        for _ in 0..self.n / r {
            acc ^= term;
            for _ in 0..r {
                term = self.square(term);
            }
        }
        Ok(acc)
    }

    /// Subfield of size `2^k`.
    pub fn subfield(&self, k: u32) -> Result<Subfield> {
        Subfield::new(k, self.n)
    }

    pub fn is_in_subfield(&self, x: Elem, sub: Subfield) -> bool {
        self.pow(x, sub.q()) == x
    }

    /// Elements fixed by `x -> x^q`, ascending.
    pub fn subfield_elements(&self, sub: Subfield) -> Vec<Elem> {
        self.elements()
            .filter(|&x| self.is_in_subfield(x, sub))
            .collect()
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroNotInvertible);
        }
        let mut ord = self.group_order();
        for p in prime_factors(ord) {
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == 1 {
                ord /= p;
            }
        }
        Ok(ord)
    }

    /// Least primitive element by value.
    pub fn find_primitive(&self) -> Elem {
        let order = self.group_order();
        let factors = prime_factors(order);
        (1..=self.mask())
            .find(|&g| factors.iter().all(|&p| self.pow(g, order / p) != 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

/// The subfield F_q of GF(2^n), `q = 2^k`, seen as GF(q^m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subfield {
    k: u32,
    m: u32,
}

impl Subfield {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        if k == 0 || !n.is_multiple_of(k) {
            return Err(Error::NotADivisor { r: k, n });
        }
        Ok(Subfield { k, m: n / k })
    }

    /// Subfield of a given size `q`, which must be a power of two.
    pub fn with_size(q: u64, n: u32) -> Result<Self> {
        if !q.is_power_of_two() || q < 2 {
            return Err(Error::Precondition("q is a power of 2 with q >= 2"));
        }
        Subfield::new(q.trailing_zeros(), n)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        1u64 << self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

pub(crate) fn gcd_u32(a: u32, b: u32) -> u32 {
    gcd(a as u64, b as u64) as u32
}
