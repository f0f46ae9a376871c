//! Arithmetic in GF(2^m) with a polynomial basis.
//!
//! Elements are `u32` values whose bit `i` is the coefficient of `x^i`.
//! The modulus is checked for irreducibility when a context is built, and
//! fields with `m <= 16` get log/antilog tables for multiplication.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element of GF(2^m), bit `i` = coefficient of `x^i`.
pub type FieldEl = u32;

/// Largest degree for which log/antilog tables are built.
pub const MAX_TABLE_DEGREE: u32 = 16;

/// Built-in moduli for the degrees used throughout the tooling.
const DEFAULT_MODULI: &[(u32, u64)] = &[
    (3, 0b1011),         // x^3 + x + 1
    (5, 0b10_0101),      // x^5 + x^2 + 1
    (7, 0b1000_0011),    // x^7 + x + 1
    (9, 0b10_0000_0011), // x^9 + x + 1
    (11, 0x805),         // x^11 + x^2 + 1
];

/// Operations shared by the base field and the quadratic tower, so that the
/// equation solvers can run over either one.
pub trait BinaryField {
    type El: Copy + Eq + Ord + Hash + fmt::Debug;

    /// Extension degree over GF(2).
    fn degree(&self) -> u32;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: Self::El, b: Self::El) -> Self::El;
    fn mul(&self, a: Self::El, b: Self::El) -> Self::El;
    fn square(&self, a: Self::El) -> Self::El;
    fn inv(&self, a: Self::El) -> Result<Self::El>;
    /// Absolute trace onto GF(2).
    fn trace(&self, a: Self::El) -> u8;
    /// GF(2)-coordinates of `a` (the canonical integer encoding).
    fn to_bits(&self, a: Self::El) -> u64;
    #[allow(clippy::wrong_self_convention)]
    fn from_bits(&self, bits: u64) -> Self::El;

    /// `a^(2^k)`.
    fn frob_pow(&self, a: Self::El, k: u32) -> Self::El {
        let mut r = a;
        for _ in 0..(k % self.degree()) {
            r = self.square(r);
        }
        r
    }

    fn div(&self, a: Self::El, b: Self::El) -> Result<Self::El> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn order(&self) -> u64 {
        1u64 << self.degree()
    }

    fn elements(&self) -> Box<dyn Iterator<Item = Self::El> + '_> {
        Box::new((0..self.order()).map(move |v| self.from_bits(v)))
    }
}

#[derive(Debug)]
struct LogTables {
    log: Vec<u32>,
    /// `exp[i] = g^i` for `0 <= i < 2 * (2^m - 1)`.
    exp: Vec<u32>,
}

/// A concrete GF(2^m). Immutable once built; cloning is cheap.
#[derive(Clone)]
pub struct FieldCtx {
    m: u32,
    modulus: u64,
    mask: u32,
    /// Bit `i` set iff `Tr(x^i) = 1`.
    trace_mask: u32,
    tables: Option<Arc<LogTables>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("m", &self.m)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds GF(2^m) with the given modulus, or the built-in default when
    /// `modulus` is `None`.
    pub fn new(m: u32, modulus: Option<u64>) -> Result<Self> {
        if !(2..=32).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        let modulus = match modulus {
            Some(p) => p,
            None => default_modulus(m)?,
        };
        if modulus == 0 || 63 - modulus.leading_zeros() != m {
            return Err(Error::DegreeMismatch { modulus, expected: m });
        }
        if !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus { modulus });
        }
        let mask = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        let mut ctx = FieldCtx {
            m,
            modulus,
            mask,
            trace_mask: 0,
            tables: None,
        };
        let mut trace_mask = 0;
        for i in 0..m {
            if ctx.trace_by_conjugates(1 << i) == 1 {
                trace_mask |= 1 << i;
            }
        }
        ctx.trace_mask = trace_mask;
        if m <= MAX_TABLE_DEGREE {
            ctx.tables = Some(Arc::new(build_tables(&ctx)));
        }
        Ok(ctx)
    }

    /// Same as [`FieldCtx::new`] with the default modulus.
    pub fn with_default(m: u32) -> Result<Self> {
        Self::new(m, None)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn size(&self) -> u64 {
        1u64 << self.m
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn contains(&self, a: FieldEl) -> bool {
        a & !self.mask == 0
    }

    /// Carry-less product reduced modulo the field polynomial, never using
    /// the log tables.
    pub fn mul_clmul(&self, a: FieldEl, b: FieldEl) -> FieldEl {
        reduce(clmul(a as u64, b as u64), self.modulus, self.m) as u32
    }

    #[inline]
    pub fn mul(&self, a: FieldEl, b: FieldEl) -> FieldEl {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
            None => self.mul_clmul(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: FieldEl) -> FieldEl {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldEl, mut e: u64) -> FieldEl {
        if let Some(t) = &self.tables {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let ord = (self.size() - 1) as u128;
            let idx = (t.log[a as usize] as u128 * (e as u128 % ord)) % ord;
            return t.exp[idx as usize];
        }
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Inverse via `a^(2^m - 2)`.
    pub fn inv(&self, a: FieldEl) -> Result<FieldEl> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.size() - 2))
    }

    pub fn div(&self, a: FieldEl, b: FieldEl) -> Result<FieldEl> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(2^k)` by repeated squaring; `k` is reduced modulo `m`.
    pub fn frob_pow(&self, a: FieldEl, k: u32) -> FieldEl {
        let mut r = a;
        for _ in 0..(k % self.m) {
            r = self.square(r);
        }
        r
    }

    /// The unique square root, `a^(2^(m-1))`.
    pub fn sqrt(&self, a: FieldEl) -> FieldEl {
        self.frob_pow(a, self.m - 1)
    }

    /// Absolute trace `Tr_1^m(a)`, evaluated as a GF(2)-linear form.
    #[inline]
    pub fn trace_abs(&self, a: FieldEl) -> u8 {
        ((a & self.trace_mask).count_ones() & 1) as u8
    }

    /// Absolute trace as the literal sum of conjugates.
    pub fn trace_by_conjugates(&self, a: FieldEl) -> u8 {
        let mut acc = 0;
        let mut c = a;
        for _ in 0..self.m {
            acc ^= c;
            c = self.mul_clmul(c, c);
        }
        debug_assert!(acc <= 1);
        acc as u8
    }

    /// `a^(2^k + 1)`.
    #[inline]
    pub fn pow_2k1(&self, a: FieldEl, k: u32) -> FieldEl {
        self.mul(self.frob_pow(a, k), a)
    }
}

impl BinaryField for FieldCtx {
    type El = FieldEl;

    fn degree(&self) -> u32 {
        self.m
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        FieldCtx::mul(self, a, b)
    }
    fn square(&self, a: u32) -> u32 {
        FieldCtx::square(self, a)
    }
    fn inv(&self, a: u32) -> Result<u32> {
        FieldCtx::inv(self, a)
    }
    fn trace(&self, a: u32) -> u8 {
        self.trace_abs(a)
    }
    fn to_bits(&self, a: u32) -> u64 {
        a as u64
    }
    fn from_bits(&self, bits: u64) -> u32 {
        bits as u32 & self.mask
    }
    fn frob_pow(&self, a: u32, k: u32) -> u32 {
        FieldCtx::frob_pow(self, a, k)
    }
}

/// The built-in modulus for degree `m`. Degrees outside the fixed table get
/// the irreducible polynomial of least weight, ties broken by integer value.
pub fn default_modulus(m: u32) -> Result<u64> {
    if !(2..=32).contains(&m) {
        return Err(Error::UnsupportedDegree(m));
    }
    if let Some(&(_, p)) = DEFAULT_MODULI.iter().find(|(d, _)| *d == m) {
        return Ok(p);
    }
    let top = 1u64 << m;
    // Trinomials, then pentanomials; every degree 2..=32 has one of these.
    for a in 1..m {
        let p = top | (1 << a) | 1;
        if is_irreducible(p) {
            return Ok(p);
        }
    }
    for c in 3..m {
        for b in 2..c {
            for a in 1..b {
                let p = top | (1 << c) | (1 << b) | (1 << a) | 1;
                if is_irreducible(p) {
                    return Ok(p);
                }
            }
        }
    }
    Err(Error::UnsupportedDegree(m))
}

/// Carry-less product of two polynomials of degree < 32.
#[inline]
pub fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut a = a;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

/// Reduces `v` (degree < 2m - 1) modulo `modulus` of degree `m`.
#[inline]
fn reduce(mut v: u64, modulus: u64, m: u32) -> u64 {
    while v >> m != 0 {
        let top = 63 - v.leading_zeros();
        v ^= modulus << (top - m);
    }
    v
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= db {
        a ^= b << (63 - a.leading_zeros() - db);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility over GF(2): `gcd(x^(2^i) + x, f) = 1` for `1 <= i <= deg/2`.
pub fn is_irreducible(f: u64) -> bool {
    if f < 2 {
        return false;
    }
    let m = 63 - f.leading_zeros();
    if m == 1 {
        return true;
    }
    if f & 1 == 0 {
        return false;
    }
    let mut xp = 0b10u64; // x^(2^i) mod f
    for _ in 1..=m / 2 {
        xp = reduce(clmul(xp, xp), f, m);
        if poly_gcd(f, xp ^ 0b10) != 1 {
            return false;
        }
    }
    true
}

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

fn build_tables(ctx: &FieldCtx) -> LogTables {
    let ord = ctx.size() - 1;
    let factors = prime_factors(ord);
    let pow_slow = |a: u32, mut e: u64| {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = ctx.mul_clmul(acc, base);
            }
            base = ctx.mul_clmul(base, base);
            e >>= 1;
        }
        acc
    };
    let g = (2..=ctx.mask)
        .find(|&g| factors.iter().all(|&p| pow_slow(g, ord / p) != 1))
        .expect("the multiplicative group is cyclic");
    let ord = ord as usize;
    let mut log = vec![0u32; ord + 1];
    let mut exp = vec![0u32; 2 * ord];
    let mut v = 1u32;
    for i in 0..ord {
        exp[i] = v;
        exp[i + ord] = v;
        log[v as usize] = i as u32;
        v = ctx.mul_clmul(v, g);
    }
    LogTables { log, exp }
}

/// `v^(-1) mod modulus` by extended Euclid.
pub fn mod_inverse(v: u64, modulus: u64) -> Option<u64> {
    let (mut r0, mut r1) = (modulus as i128, (v % modulus) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(modulus as i128) as u64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
