use super::ddt::sampled_table;
use super::spectrum::{require_full_ok, sample_pairs};
use super::{sweep_rows, Entries, Mode, SBoxTable, SpectrumKind, SpectrumTable, Sweep};
use crate::error::Result;
use crate::par::{map_range, Exec};

/// In-place fast Walsh–Hadamard transform.
pub fn fwht(v: &mut [i32]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (v[j], v[j + h]);
                v[j] = x + y;
                v[j + h] = x - y;
            }
        }
        h *= 2;
    }
}

#[inline]
fn dot(a: u32, b: u32) -> u32 {
    (a & b).count_ones() & 1
}

/// `W(a, b) = Σ_x (-1)^(b·F(x) + a·x)` with the bitwise inner product.
pub fn walsh_entry(t: &SBoxTable, a: u32, b: u32) -> i32 {
    t.values()
        .iter()
        .enumerate()
        .map(|(x, &y)| if dot(b, y) ^ dot(a, x as u32) == 0 { 1 } else { -1 })
        .sum()
}

pub fn walsh(t: &SBoxTable, mode: Mode) -> Result<SpectrumTable> {
    walsh_with(t, mode, Exec::default())
}

/// Rows are output masks `b`; each row is one transform of the component
/// function `x -> b·F(x)`.
pub fn walsh_with(t: &SBoxTable, mode: Mode, exec: Exec) -> Result<SpectrumTable> {
    let n = t.n();
    require_full_ok(SpectrumKind::Walsh, n, mode)?;
    if let Mode::Sampled { seed, count } = mode {
        let pairs = sample_pairs(seed, count, 1 << n, 0, 1);
        let samples = map_range(exec, pairs.len(), |i| {
            let (a, b) = pairs[i];
            (a, b, walsh_entry(t, a, b) as i64)
        });
        return Ok(sampled_table(SpectrumKind::Walsh, n, mode, samples));
    }
    let layout = Sweep { rows_are_a: false, skip_row0: true, skip_col0: false, abs: true };
    let (entries, best) = sweep_rows(exec, n, mode == Mode::Full, layout, || (), |_, b, out: &mut [i32]| {
        for (o, &y) in out.iter_mut().zip(t.values()) {
            *o = if dot(b, y) == 0 { 1 } else { -1 };
        }
        fwht(out);
    });
    Ok(SpectrumTable {
        kind: SpectrumKind::Walsh,
        n,
        mode,
        entries: entries.map(Entries::Signed),
        samples: Vec::new(),
        max: best.value,
        argmax: best.at,
    })
}

/// `2^(n-1) - max|W| / 2` over nonzero component functions.
pub fn nonlinearity(t: &SBoxTable) -> u32 {
    let w = walsh(t, Mode::MaxOnly).expect("max-only mode never refuses");
    ((1i64 << (t.n() - 1)) - w.max / 2) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_matches_direct_sums() {
        let t = SBoxTable::new(4, vec![0xc, 5, 6, 0xb, 9, 0, 0xa, 0xd, 3, 0xe, 0xf, 8, 4, 7, 1, 2]).unwrap();
        let w = walsh(&t, Mode::Full).unwrap();
        for a in 0..16 {
            for b in 0..16 {
                assert_eq!(w.get(a, b), Some(walsh_entry(&t, a, b) as i64));
            }
        }
        // the PRESENT S-box has nonlinearity 4
        assert_eq!(nonlinearity(&t), 4);
        for b in 1..16 {
            let parseval: i64 = (0..16).map(|a| w.get(a, b).unwrap().pow(2)).sum();
            assert_eq!(parseval, 256);
        }
    }

    #[test]
    fn affine_table_has_zero_nonlinearity() {
        let t = SBoxTable::from_fn(5, |x| (x ^ (x >> 1)) ^ 0b10101).unwrap();
        let w = walsh(&t, Mode::MaxOnly).unwrap();
        assert_eq!(w.max, 32);
        assert_eq!(nonlinearity(&t), 0);
    }
}
