use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` for which full `2^n x 2^n` tables are materialized.
pub const MAX_FULL_N: u32 = 12;

/// Default work budget for exhaustive modes, as `log2` of inner iterations.
pub const DEFAULT_LOG2_BUDGET: f64 = 36.0;

pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpectrumKind {
    Ddt,
    Bct,
    /// Pair-count formulation of the BCT maximum; needs no inverse.
    BctLqsl,
    Walsh,
}

impl SpectrumKind {
    pub fn name(self) -> &'static str {
        match self {
            SpectrumKind::Ddt => "ddt",
            SpectrumKind::Bct => "bct",
            SpectrumKind::BctLqsl => "bct_lqsl",
            SpectrumKind::Walsh => "walsh",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Full,
    /// Streams rows and keeps only the maximum.
    MaxOnly,
    /// Uniform random `(a, b)` entries from a seeded generator.
    Sampled { seed: u64, count: usize },
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::MaxOnly => "max-only",
            Mode::Sampled { .. } => "sampled",
        }
    }

    pub fn seed(self) -> Option<u64> {
        match self {
            Mode::Sampled { seed, .. } => Some(seed),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entries {
    Counts(Vec<u16>),
    Signed(Vec<i32>),
}

/// Running maximum with a deterministic tie-break on the smallest `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Best {
    pub value: i64,
    pub at: (u32, u32),
}

impl Best {
    pub const NONE: Best = Best { value: i64::MIN, at: (u32::MAX, u32::MAX) };

    #[inline]
    pub fn consider(&mut self, value: i64, a: u32, b: u32) {
        if value > self.value || (value == self.value && (a, b) < self.at) {
            self.value = value;
            self.at = (a, b);
        }
    }

    pub fn merge(mut self, other: Best) -> Best {
        self.consider(other.value, other.at.0, other.at.1);
        self
    }
}

/// A DDT, BCT or Walsh table with its summary statistic.
///
/// `max` is `δ` for the DDT (over `a != 0`), `β` for the BCT routes (over
/// `a, b != 0`) and `max |W|` for Walsh (over `b != 0`). In sampled mode it
/// is the maximum over the sampled entries only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumTable {
    pub kind: SpectrumKind,
    pub n: u32,
    pub mode: Mode,
    /// Row-major `entries[a * 2^n + b]`, present in full mode.
    pub entries: Option<Entries>,
    /// `(a, b, value)` triples, present in sampled mode.
    pub samples: Vec<(u32, u32, i64)>,
    pub max: i64,
    pub argmax: (u32, u32),
}

impl SpectrumTable {
    pub fn get(&self, a: u32, b: u32) -> Option<i64> {
        let idx = ((a as usize) << self.n) | b as usize;
        match self.entries.as_ref()? {
            Entries::Counts(v) => Some(v[idx] as i64),
            Entries::Signed(v) => Some(v[idx] as i64),
        }
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    /// Nonzero `(a, b, value)` triples in row-major order; the sampled
    /// entries in sampled mode.
    pub fn nonzero(&self) -> Vec<(u32, u32, i64)> {
        match &self.entries {
            None => self.samples.iter().copied().filter(|e| e.2 != 0).collect(),
            Some(_) => {
                let size = self.size() as u32;
                let mut out = Vec::new();
                for a in 0..size {
                    for b in 0..size {
                        let v = self.get(a, b).unwrap();
                        if v != 0 {
                            out.push((a, b, v));
                        }
                    }
                }
                out
            }
        }
    }

    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::from("a,b,count\n");
        for (a, b, v) in self.nonzero() {
            writeln!(s, "{a},{b},{v}").unwrap();
        }
        s
    }

    pub fn summary(&self) -> SpectrumSummary {
        SpectrumSummary {
            kind: self.kind,
            n: self.n,
            delta_or_beta: self.max,
            argmax: [self.argmax.0, self.argmax.1],
            mode: self.mode.name().to_string(),
            seed: self.mode.seed(),
            samples: match self.mode {
                Mode::Sampled { count, .. } => Some(count),
                _ => None,
            },
            nonlinearity: (self.kind == SpectrumKind::Walsh)
                .then(|| (1i64 << (self.n - 1)) - self.max / 2),
        }
    }
}

/// Machine-readable summary written beside a spectrum export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumSummary {
    pub kind: SpectrumKind,
    pub n: u32,
    /// δ, β or max |W| depending on `kind`.
    pub delta_or_beta: i64,
    pub argmax: [u32; 2],
    pub mode: String,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonlinearity: Option<i64>,
}

/// `log2` of the inner-loop iterations a request needs.
pub fn estimated_log2_work(kind: SpectrumKind, n: u32, mode: Mode) -> f64 {
    let n = n as f64;
    match mode {
        Mode::Sampled { count, .. } => (count.max(1) as f64).log2() + n,
        Mode::Full | Mode::MaxOnly => match kind {
            SpectrumKind::Ddt => 2.0 * n,
            // pairs (x, x + a) are visited once
            SpectrumKind::Bct => 3.0 * n - 1.0,
            // rows cost about 2^n times the bucket size
            SpectrumKind::BctLqsl => 2.0 * n + 2.0,
            SpectrumKind::Walsh => 2.0 * n + n.log2(),
        },
    }
}

/// Refuses requests that exceed the storage limit or the work budget.
pub fn check_scale(kind: SpectrumKind, n: u32, mode: Mode, log2_budget: f64) -> Result<()> {
    if mode == Mode::Full && n > MAX_FULL_N {
        return Err(Error::ScaleRefusal(format!(
            "full {} tables are only stored for n <= {MAX_FULL_N} (n = {n}); use --mode max-only or --mode sampled",
            kind.name()
        )));
    }
    let work = estimated_log2_work(kind, n, mode);
    if work > log2_budget {
        return Err(Error::ScaleRefusal(format!(
            "{} in {} mode at n = {n} needs about 2^{work:.1} steps, over the budget of 2^{log2_budget}; use --mode sampled",
            kind.name(),
            mode.name()
        )));
    }
    Ok(())
}

/// Draws `count` pairs with `a` from `a_lo..size` and `b` from `b_lo..size`.
pub fn sample_pairs(seed: u64, count: usize, size: u32, a_lo: u32, b_lo: u32) -> Vec<(u32, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.random_range(a_lo..size), rng.random_range(b_lo..size)))
        .collect()
}

pub(crate) fn require_full_ok(kind: SpectrumKind, n: u32, mode: Mode) -> Result<()> {
    if mode == Mode::Full && n > MAX_FULL_N {
        return check_scale(kind, n, mode, f64::INFINITY);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn best_tie_breaks_on_smallest_pair() {
        let mut b = Best::NONE;
        b.consider(4, 3, 1);
        b.consider(4, 1, 9);
        b.consider(2, 0, 0);
        assert_eq!(b, Best { value: 4, at: (1, 9) });
        let other = Best { value: 4, at: (0, 5) };
        assert_eq!(b.merge(other).at, (0, 5));
    }

    #[test]
    fn scale_rules() {
        assert!(check_scale(SpectrumKind::Bct, 10, Mode::Full, DEFAULT_LOG2_BUDGET).is_ok());
        assert!(check_scale(SpectrumKind::Bct, 12, Mode::MaxOnly, DEFAULT_LOG2_BUDGET).is_ok());
        assert!(matches!(
            check_scale(SpectrumKind::Bct, 14, Mode::Full, DEFAULT_LOG2_BUDGET),
            Err(Error::ScaleRefusal(_))
        ));
        assert!(matches!(
            check_scale(SpectrumKind::Bct, 14, Mode::MaxOnly, DEFAULT_LOG2_BUDGET),
            Err(Error::ScaleRefusal(_))
        ));
        let sampled = Mode::Sampled { seed: 0, count: 10_000 };
        assert!(check_scale(SpectrumKind::Bct, 14, sampled, DEFAULT_LOG2_BUDGET).is_ok());
    }

    #[test]
    fn sampling_is_seeded() {
        let a = sample_pairs(42, 100, 64, 1, 1);
        assert_eq!(a, sample_pairs(42, 100, 64, 1, 1));
        assert_ne!(a, sample_pairs(43, 100, 64, 1, 1));
        assert!(a.iter().all(|&(x, y)| (1..64).contains(&x) && (1..64).contains(&y)));
    }
}
