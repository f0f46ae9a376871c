use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A lookup table on `n`-bit values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SBoxTable {
    n: u32,
    values: Vec<u32>,
}

impl SBoxTable {
    pub fn new(n: u32, values: Vec<u32>) -> Result<Self> {
        if n == 0 || n > 31 {
            return Err(Error::InvalidParams(format!("unsupported table width n = {n}")));
        }
        if values.len() != 1usize << n {
            return Err(Error::InvalidParams(format!(
                "table length {} != 2^{n}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v >> n != 0) {
            return Err(Error::InvalidParams(format!("value {v:#x} exceeds {n} bits")));
        }
        Ok(SBoxTable { n, values })
    }

    pub fn identity(n: u32) -> Self {
        SBoxTable { n, values: (0..1u32 << n).collect() }
    }

    pub fn from_fn(n: u32, f: impl Fn(u32) -> u32) -> Result<Self> {
        Self::new(n, (0..1u32 << n).map(f).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: u32) -> u32 {
        self.values[x as usize]
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.len()];
        for &v in &self.values {
            if std::mem::replace(&mut seen[v as usize], true) {
                return false;
            }
        }
        true
    }

    pub fn invert(&self) -> Result<SBoxTable> {
        let mut inv = vec![u32::MAX; self.len()];
        for (x, &y) in self.values.iter().enumerate() {
            if inv[y as usize] != u32::MAX {
                return Err(Error::NotAPermutation);
            }
            inv[y as usize] = x as u32;
        }
        Ok(SBoxTable { n: self.n, values: inv })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SBoxTable) -> Result<SBoxTable> {
        if self.n != inner.n {
            return Err(Error::InvalidParams("width mismatch".into()));
        }
        Ok(SBoxTable {
            n: self.n,
            values: inner.values.iter().map(|&v| self.values[v as usize]).collect(),
        })
    }

    /// Text format: `n=<int>` then one zero-padded lowercase hex value per
    /// line, in index order.
    pub fn to_text(&self) -> String {
        let digits = (self.n as usize).div_ceil(4);
        let mut s = String::with_capacity(self.len() * (digits + 1) + 8);
        writeln!(s, "n={}", self.n).unwrap();
        for &v in &self.values {
            writeln!(s, "{v:0digits$x}").unwrap();
        }
        s
    }

    /// Parses [`to_text`](Self::to_text) output; a `0x` prefix on values is
    /// accepted and blank lines are ignored.
    pub fn parse(text: &str) -> Result<SBoxTable> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty table file".into()))?;
        let n: u32 = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let values = lines
            .map(|l| crate::tower::parse_hex_u64(l).map(|v| v as u32))
            .collect::<Result<Vec<_>>>()?;
        if n == 0 || n > 31 || values.len() != 1usize << n {
            return Err(Error::Parse(format!("expected 2^{n} values, found {}", values.len())));
        }
        SBoxTable::new(n, values)
    }
}
