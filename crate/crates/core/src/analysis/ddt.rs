use super::spectrum::{require_full_ok, sample_pairs};
use super::{sweep_rows, Entries, Mode, SBoxTable, SpectrumKind, SpectrumTable, Sweep};
use crate::error::Result;
use crate::par::{map_range, Exec};

/// `#{x : F(x) + F(x + a) = b}`.
pub fn ddt_entry(t: &SBoxTable, a: u32, b: u32) -> u32 {
    let v = t.values();
    (0..v.len()).filter(|&x| v[x] ^ v[x ^ a as usize] == b).count() as u32
}

fn fill_row(t: &SBoxTable, a: u32, out: &mut [u32]) {
    out.fill(0);
    let v = t.values();
    for x in 0..v.len() {
        out[(v[x] ^ v[x ^ a as usize]) as usize] += 1;
    }
}

pub fn ddt(t: &SBoxTable, mode: Mode) -> Result<SpectrumTable> {
    ddt_with(t, mode, Exec::default())
}

pub fn ddt_with(t: &SBoxTable, mode: Mode, exec: Exec) -> Result<SpectrumTable> {
    let n = t.n();
    require_full_ok(SpectrumKind::Ddt, n, mode)?;
    if let Mode::Sampled { seed, count } = mode {
        let pairs = sample_pairs(seed, count, 1 << n, 1, 0);
        let samples: Vec<_> = map_range(exec, pairs.len(), |i| {
            let (a, b) = pairs[i];
            (a, b, ddt_entry(t, a, b) as i64)
        });
        return Ok(sampled_table(SpectrumKind::Ddt, n, mode, samples));
    }
    let layout = Sweep { rows_are_a: true, skip_row0: true, skip_col0: false, abs: false };
    let (entries, best) = sweep_rows(exec, n, mode == Mode::Full, layout, || (), |_, a, out: &mut [u32]| {
        fill_row(t, a, out)
    });
    Ok(SpectrumTable {
        kind: SpectrumKind::Ddt,
        n,
        mode,
        entries: entries.map(|e| Entries::Counts(e.into_iter().map(|v| v as u16).collect())),
        samples: Vec::new(),
        max: best.value,
        argmax: best.at,
    })
}

/// Differential uniformity `δ`, streaming over rows.
pub fn delta_uniformity(t: &SBoxTable) -> u32 {
    ddt(t, Mode::MaxOnly).expect("max-only mode never refuses").max as u32
}

pub(crate) fn sampled_table(kind: SpectrumKind, n: u32, mode: Mode, samples: Vec<(u32, u32, i64)>) -> SpectrumTable {
    let mut best = super::Best::NONE;
    for &(a, b, v) in &samples {
        let v = if kind == SpectrumKind::Walsh { v.abs() } else { v };
        best.consider(v, a, b);
    }
    SpectrumTable { kind, n, mode, entries: None, samples, max: best.value, argmax: best.at }
}
