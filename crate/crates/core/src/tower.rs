//! GF(2^(2m)) as the quadratic extension GF(2^m)(ω), ω^2 = ω + 1, m odd.
//!
//! An element `x + ωy` has canonical integer encoding `x + 2^m * y`; every
//! S-box table over the tower is indexed by this encoding.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{BinaryField, FieldCtx, FieldEl};

/// `x + ωy` with `x, y` in the base field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize)]
pub struct TowerEl {
    pub x: FieldEl,
    pub y: FieldEl,
}

impl TowerEl {
    pub const ZERO: TowerEl = TowerEl { x: 0, y: 0 };
    pub const ONE: TowerEl = TowerEl { x: 1, y: 0 };
    pub const OMEGA: TowerEl = TowerEl { x: 0, y: 1 };

    pub const fn new(x: FieldEl, y: FieldEl) -> Self {
        TowerEl { x, y }
    }

    /// Embeds a base-field element.
    pub const fn base(x: FieldEl) -> Self {
        TowerEl { x, y: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn in_base(self) -> bool {
        self.y == 0
    }
}

impl std::ops::Add for TowerEl {
    type Output = TowerEl;
    #[inline]
    fn add(self, o: TowerEl) -> TowerEl {
        TowerEl { x: self.x ^ o.x, y: self.y ^ o.y }
    }
}

impl std::ops::AddAssign for TowerEl {
    fn add_assign(&mut self, o: TowerEl) {
        self.x ^= o.x;
        self.y ^= o.y;
    }
}

// Orders like the canonical encoding x + 2^m * y.
impl Ord for TowerEl {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for TowerEl {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// GF(2^(2m)) over a base field of odd degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerCtx {
    base: FieldCtx,
}

impl TowerCtx {
    pub fn new(base: FieldCtx) -> Result<Self> {
        if base.m().is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "tower needs odd m so that {{1, ω}} is a basis, got m = {}",
                base.m()
            )));
        }
        Ok(TowerCtx { base })
    }

    /// Tower over GF(2^m) with the default or given base modulus.
    pub fn with_modulus(m: u32, modulus: Option<u64>) -> Result<Self> {
        Self::new(FieldCtx::new(m, modulus)?)
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn m(&self) -> u32 {
        self.base.m()
    }

    pub fn n(&self) -> u32 {
        2 * self.base.m()
    }

    pub fn size(&self) -> u64 {
        1u64 << self.n()
    }

    #[inline]
    pub fn encode(&self, z: TowerEl) -> u64 {
        z.x as u64 | (z.y as u64) << self.m()
    }

    #[inline]
    pub fn decode(&self, v: u64) -> TowerEl {
        let m = self.m();
        let mask = (1u64 << m) - 1;
        TowerEl { x: (v & mask) as u32, y: ((v >> m) & mask) as u32 }
    }

    /// Conjugation `z^(2^m)`: `(x, y) -> (x + y, y)` since conj(ω) = ω + 1.
    #[inline]
    pub fn bar(&self, z: TowerEl) -> TowerEl {
        TowerEl { x: z.x ^ z.y, y: z.y }
    }

    /// `(x1 + ωy1)(x2 + ωy2) = (x1x2 + y1y2) + ω(x1y2 + x2y1 + y1y2)`, with
    /// three base multiplications.
    #[inline]
    pub fn mul(&self, a: TowerEl, b: TowerEl) -> TowerEl {
        let f = &self.base;
        let p = f.mul(a.x, b.x);
        let q = f.mul(a.y, b.y);
        let r = f.mul(a.x ^ a.y, b.x ^ b.y);
        TowerEl { x: p ^ q, y: r ^ p }
    }

    /// Multiplies by a base-field scalar.
    #[inline]
    pub fn scale(&self, c: FieldEl, z: TowerEl) -> TowerEl {
        TowerEl { x: self.base.mul(c, z.x), y: self.base.mul(c, z.y) }
    }

    /// `z^2 = (x^2 + y^2) + ωy^2`.
    #[inline]
    pub fn square(&self, z: TowerEl) -> TowerEl {
        let xs = self.base.square(z.x);
        let ys = self.base.square(z.y);
        TowerEl { x: xs ^ ys, y: ys }
    }

    /// Norm `z * conj(z)`, which lies in the base field.
    pub fn norm(&self, z: TowerEl) -> FieldEl {
        let f = &self.base;
        f.square(z.x) ^ f.mul(z.x, z.y) ^ f.square(z.y)
    }

    pub fn inv(&self, z: TowerEl) -> Result<TowerEl> {
        if z.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ninv = self.base.inv(self.norm(z))?;
        Ok(self.scale(ninv, self.bar(z)))
    }

    pub fn div(&self, a: TowerEl, b: TowerEl) -> Result<TowerEl> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, z: TowerEl, mut e: u64) -> TowerEl {
        let mut base = z;
        let mut acc = TowerEl::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `z^(2^k)`; multiples of `m` become conjugations.
    pub fn frob_pow(&self, z: TowerEl, k: u32) -> TowerEl {
        let k = k % self.n();
        let m = self.m();
        let (z, k) = if k >= m { (self.bar(z), k - m) } else { (z, k) };
        let mut r = z;
        for _ in 0..k {
            r = self.square(r);
        }
        r
    }

    /// `z^(2^k + 1)`.
    #[inline]
    pub fn pow_2k1(&self, z: TowerEl, k: u32) -> TowerEl {
        self.mul(self.frob_pow(z, k), z)
    }

    /// Relative trace `z + conj(z)`, which equals the ω-coordinate `y`.
    #[inline]
    pub fn trace_rel(&self, z: TowerEl) -> FieldEl {
        z.y
    }

    /// Absolute trace `Tr_1^n(z) = Tr_1^m(z + conj(z))`.
    #[inline]
    pub fn trace_abs_n(&self, z: TowerEl) -> u8 {
        self.base.trace_abs(z.y)
    }

    pub fn elements(&self) -> impl Iterator<Item = TowerEl> + '_ {
        (0..self.size()).map(move |v| self.decode(v))
    }

    /// Formats as n-bit hex of the canonical encoding.
    pub fn to_hex(&self, z: TowerEl) -> String {
        let digits = (self.n() as usize).div_ceil(4);
        format!("{:0digits$x}", self.encode(z))
    }

    pub fn parse_hex(&self, s: &str) -> Result<TowerEl> {
        let v = parse_hex_u64(s)?;
        if v >= self.size() {
            return Err(Error::Parse(format!("{s} does not fit in {} bits", self.n())));
        }
        Ok(self.decode(v))
    }
}

impl BinaryField for TowerCtx {
    type El = TowerEl;

    fn degree(&self) -> u32 {
        self.n()
    }
    fn zero(&self) -> TowerEl {
        TowerEl::ZERO
    }
    fn one(&self) -> TowerEl {
        TowerEl::ONE
    }
    fn add(&self, a: TowerEl, b: TowerEl) -> TowerEl {
        a + b
    }
    fn mul(&self, a: TowerEl, b: TowerEl) -> TowerEl {
        TowerCtx::mul(self, a, b)
    }
    fn square(&self, a: TowerEl) -> TowerEl {
        TowerCtx::square(self, a)
    }
    fn inv(&self, a: TowerEl) -> Result<TowerEl> {
        TowerCtx::inv(self, a)
    }
    fn trace(&self, a: TowerEl) -> u8 {
        self.trace_abs_n(a)
    }
    fn to_bits(&self, a: TowerEl) -> u64 {
        self.encode(a)
    }
    fn from_bits(&self, bits: u64) -> TowerEl {
        self.decode(bits)
    }
    fn frob_pow(&self, a: TowerEl, k: u32) -> TowerEl {
        TowerCtx::frob_pow(self, a, k)
    }
}

/// Parses `0x`-prefixed or bare hex.
pub fn parse_hex_u64(s: &str) -> Result<u64> {
    let t = s.trim();
    let t = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u64::from_str_radix(t, 16).map_err(|e| Error::Parse(format!("bad hex {s:?}: {e}")))
}

impl fmt::Display for TowerEl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:#x}, {:#x})", self.x, self.y)
    }
}
