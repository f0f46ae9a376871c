//! Boomerang connectivity by two independent routes.
//!
//! The definitional route counts `x` with
//! `F^-1(F(x) + b) + F^-1(F(x + a) + b) = a`, one `b` at a time with the
//! table `γ_b(x) = F^-1(F(x) + b)` precomputed. The pair-count route counts
//! `(x, y)` with `F(x + a) + F(y + a) = b` and `F(x) + F(y) = b`; it never
//! touches `F^-1` and its maximum over `a, b != 0` equals `β`.

use super::ddt::sampled_table;
use super::spectrum::{require_full_ok, sample_pairs};
use super::{sweep_rows, Entries, Mode, SBoxTable, SpectrumKind, SpectrumTable, Sweep};
use crate::error::{Error, Result};
use crate::par::{map_range, Exec};

fn gamma(t: &SBoxTable, inv: &SBoxTable, b: u32, out: &mut [u32]) {
    let (v, iv) = (t.values(), inv.values());
    for (x, g) in out.iter_mut().enumerate() {
        *g = iv[(v[x] ^ b) as usize];
    }
}

/// `#{x : γ(x) + γ(x + a) = a}`, visiting each pair `{x, x + a}` once.
#[inline]
fn count_for_a(g: &[u32], a: u32) -> u32 {
    if a == 0 {
        return g.len() as u32;
    }
    let hb = 1usize << (31 - a.leading_zeros());
    let au = a as usize;
    let mut c = 0u32;
    let mut base = 0;
    while base < g.len() {
        for x in base..base + hb {
            c += u32::from(g[x] ^ g[x ^ au] == a);
        }
        base += 2 * hb;
    }
    2 * c
}

/// One BCT entry by the definitional formula.
pub fn bct_entry(t: &SBoxTable, inv: &SBoxTable, a: u32, b: u32) -> u32 {
    let mut g = vec![0u32; t.len()];
    gamma(t, inv, b, &mut g);
    count_for_a(&g, a)
}

pub fn bct(t: &SBoxTable, mode: Mode) -> Result<SpectrumTable> {
    bct_with(t, mode, Exec::default())
}

pub fn bct_with(t: &SBoxTable, mode: Mode, exec: Exec) -> Result<SpectrumTable> {
    let n = t.n();
    let inv = t.invert()?;
    require_full_ok(SpectrumKind::Bct, n, mode)?;
    if let Mode::Sampled { seed, count } = mode {
        let pairs = sample_pairs(seed, count, 1 << n, 1, 1);
        let samples = map_range(exec, pairs.len(), |i| {
            let (a, b) = pairs[i];
            (a, b, bct_entry(t, &inv, a, b) as i64)
        });
        return Ok(sampled_table(SpectrumKind::Bct, n, mode, samples));
    }
    let size = t.len();
    let layout = Sweep { rows_are_a: false, skip_row0: true, skip_col0: true, abs: false };
    let (entries, best) = sweep_rows(
        exec,
        n,
        mode == Mode::Full,
        layout,
        || vec![0u32; size],
        |g, b, out: &mut [u32]| {
            if b == 0 {
                out.fill(size as u32);
                return;
            }
            gamma(t, &inv, b, g);
            for (a, o) in out.iter_mut().enumerate() {
                *o = count_for_a(g, a as u32);
            }
        },
    );
    Ok(SpectrumTable {
        kind: SpectrumKind::Bct,
        n,
        mode,
        entries: entries.map(|e| Entries::Counts(e.into_iter().map(|v| v as u16).collect())),
        samples: Vec::new(),
        max: best.value,
        argmax: best.at,
    })
}

/// Boomerang uniformity `β` by the definitional route.
pub fn boomerang_uniformity(t: &SBoxTable) -> Result<u32> {
    Ok(bct(t, Mode::MaxOnly)?.max as u32)
}

/// Scratch for grouping inputs by their derivative value.
pub(crate) struct Buckets {
    start: Vec<u32>,
    members: Vec<u32>,
    deriv: Vec<u32>,
}

impl Buckets {
    pub(crate) fn new(size: usize) -> Self {
        Buckets { start: vec![0; size + 1], members: vec![0; size], deriv: vec![0; size] }
    }

    /// Groups `x` by `F(x) + F(x + a)` with a counting sort.
    fn fill(&mut self, v: &[u32], a: u32) {
        let size = v.len();
        self.start.fill(0);
        for x in 0..size {
            let d = v[x] ^ v[x ^ a as usize];
            self.deriv[x] = d;
            self.start[d as usize + 1] += 1;
        }
        for i in 0..size {
            self.start[i + 1] += self.start[i];
        }
        let mut cursor = self.start.clone();
        for x in 0..size {
            let d = self.deriv[x] as usize;
            self.members[cursor[d] as usize] = x as u32;
            cursor[d] += 1;
        }
    }

    fn group(&self, d: u32) -> &[u32] {
        let d = d as usize;
        &self.members[self.start[d] as usize..self.start[d + 1] as usize]
    }
}

/// Row `S(a, ·)`: both equations together say `F(x) + F(x + a)` equals
/// `F(y) + F(y + a)`, so `y` ranges over the group of `x`.
fn lqsl_fill(t: &SBoxTable, buckets: &mut Buckets, a: u32, out: &mut [u32]) {
    let v = t.values();
    let size = v.len() as u32;
    out.fill(0);
    if a == 0 {
        out.fill(size);
        return;
    }
    buckets.fill(v, a);
    let mut d = 0usize;
    while d < v.len() {
        let group = buckets.group(d as u32);
        for &x in group {
            for &y in group {
                out[(v[x as usize] ^ v[y as usize]) as usize] += 1;
            }
        }
        d += 1;
    }
}

/// The full row `S_F(a, b)` for `b` in `0..2^n`.
pub fn bct_lqsl_row(t: &SBoxTable, a: u32) -> Vec<u32> {
    let mut out = vec![0u32; t.len()];
    let mut buckets = Buckets::new(t.len());
    lqsl_fill(t, &mut buckets, a, &mut out);
    out
}

/// `S_F(a, b)`, the number of pairs `(x, y)` with
/// `F(x + a) + F(y + a) = b` and `F(x) + F(y) = b`.
pub fn bct_lqsl(t: &SBoxTable, a: u32, b: u32) -> u32 {
    let v = t.values();
    if a == 0 {
        // every (x, y) with F(x) + F(y) = b
        let mut seen = vec![0u32; v.len()];
        for &y in v {
            seen[y as usize] += 1;
        }
        return v.iter().map(|&fx| seen[(fx ^ b) as usize]).sum();
    }
    let mut buckets = Buckets::new(v.len());
    buckets.fill(v, a);
    let mut c = 0;
    for x in 0..v.len() {
        let group = buckets.group(buckets.deriv[x]);
        c += group.iter().filter(|&&y| v[x] ^ v[y as usize] == b).count() as u32;
    }
    c
}

pub fn lqsl_table(t: &SBoxTable, mode: Mode) -> Result<SpectrumTable> {
    lqsl_table_with(t, mode, Exec::default())
}

pub fn lqsl_table_with(t: &SBoxTable, mode: Mode, exec: Exec) -> Result<SpectrumTable> {
    let n = t.n();
    if !t.is_permutation() {
        return Err(Error::NotAPermutation);
    }
    require_full_ok(SpectrumKind::BctLqsl, n, mode)?;
    if let Mode::Sampled { seed, count } = mode {
        let pairs = sample_pairs(seed, count, 1 << n, 1, 1);
        let samples = map_range(exec, pairs.len(), |i| {
            let (a, b) = pairs[i];
            (a, b, bct_lqsl(t, a, b) as i64)
        });
        return Ok(sampled_table(SpectrumKind::BctLqsl, n, mode, samples));
    }
    let size = t.len();
    let layout = Sweep { rows_are_a: true, skip_row0: true, skip_col0: true, abs: false };
    let (entries, best) = sweep_rows(
        exec,
        n,
        mode == Mode::Full,
        layout,
        || Buckets::new(size),
        |buckets, a, out: &mut [u32]| lqsl_fill(t, buckets, a, out),
    );
    Ok(SpectrumTable {
        kind: SpectrumKind::BctLqsl,
        n,
        mode,
        entries: entries.map(|e| Entries::Counts(e.into_iter().map(|v| v as u16).collect())),
        samples: Vec::new(),
        max: best.value,
        argmax: best.at,
    })
}

/// `β` as the maximum of `S_F(a, b)` over `a, b != 0`.
pub fn boomerang_uniformity_lqsl(t: &SBoxTable) -> Result<u32> {
    Ok(lqsl_table(t, Mode::MaxOnly)?.max as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Direct transcription of the BCT definition.
    fn bct_oracle(t: &SBoxTable, a: u32, b: u32) -> u32 {
        let inv = t.invert().unwrap();
        (0..t.len() as u32)
            .filter(|&x| inv.get(t.get(x) ^ b) ^ inv.get(t.get(x ^ a) ^ b) == a)
            .count() as u32
    }

    /// All pairs (x, y).
    fn lqsl_oracle(t: &SBoxTable, a: u32, b: u32) -> u32 {
        let size = t.len() as u32;
        let mut c = 0;
        for x in 0..size {
            for y in 0..size {
                if t.get(x ^ a) ^ t.get(y ^ a) == b && t.get(x) ^ t.get(y) == b {
                    c += 1;
                }
            }
        }
        c
    }

    fn random_perm(n: u32, seed: u64) -> SBoxTable {
        let mut v: Vec<u32> = (0..1 << n).collect();
        v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        SBoxTable::new(n, v).unwrap()
    }

    #[test]
    fn identity_table() {
        let t = SBoxTable::identity(4);
        let b = bct(&t, Mode::Full).unwrap();
        for a in 0..16 {
            for bb in 0..16 {
                assert_eq!(b.get(a, bb), Some(16));
            }
        }
        for bb in 1..16 {
            assert_eq!(bct_lqsl(&t, 3, bb), 16);
        }
    }

    #[test]
    fn routes_match_oracles_on_random_permutations() {
        for seed in 0..4 {
            let t = random_perm(5, seed);
            let b = bct(&t, Mode::Full).unwrap();
            let l = lqsl_table(&t, Mode::Full).unwrap();
            for a in 0..32 {
                let row = bct_lqsl_row(&t, a);
                for bb in 0..32 {
                    let want = bct_oracle(&t, a, bb);
                    assert_eq!(b.get(a, bb), Some(want as i64));
                    let s = lqsl_oracle(&t, a, bb);
                    assert_eq!(l.get(a, bb), Some(s as i64));
                    assert_eq!(row[bb as usize], s);
                    assert_eq!(bct_lqsl(&t, a, bb), s);
                    assert_eq!(b.get(a, bb).unwrap() % 2, 0);
                    if bb != 0 {
                        assert_eq!(s % 2, 0);
                    }
                }
                assert_eq!(b.get(a, 0), Some(32));
            }
            assert_eq!(b.max, l.max);
            assert!(b.max >= super::super::delta_uniformity(&t) as i64);
        }
    }

    #[test]
    fn strategies_and_modes_agree() {
        let t = random_perm(6, 9);
        let p = bct_with(&t, Mode::Full, Exec::Parallel).unwrap();
        let s = bct_with(&t, Mode::Full, Exec::Sequential).unwrap();
        assert_eq!(p, s);
        let mo = bct(&t, Mode::MaxOnly).unwrap();
        assert_eq!((mo.max, mo.argmax), (p.max, p.argmax));
        let lp = lqsl_table_with(&t, Mode::MaxOnly, Exec::Parallel).unwrap();
        let ls = lqsl_table_with(&t, Mode::MaxOnly, Exec::Sequential).unwrap();
        assert_eq!(lp, ls);
        let sm = bct(&t, Mode::Sampled { seed: 3, count: 300 }).unwrap();
        for &(a, b, v) in &sm.samples {
            assert!(a != 0 && b != 0);
            assert_eq!(p.get(a, b), Some(v));
        }
    }

    #[test]
    fn non_permutation_rejected() {
        let t = SBoxTable::new(2, vec![0, 0, 1, 2]).unwrap();
        assert_eq!(bct(&t, Mode::Full), Err(Error::NotAPermutation));
        assert_eq!(boomerang_uniformity_lqsl(&t), Err(Error::NotAPermutation));
    }
}
