//! Family-agnostic analysis of lookup tables: differential, boomerang and
//! Walsh spectra, plus the baseline families and random affine maps used as
//! equivalence witnesses.
//!
//! Every spectrum is computed row by row. Rows are independent work items
//! and are distributed through [`crate::par`]; per-row maxima are merged
//! with [`Best`], whose tie-break makes the result independent of the
//! execution strategy.

mod affine;
mod bct;
mod ddt;
mod families;
mod spectrum;
mod table;
mod walsh;

pub use affine::AffineMap;
pub use bct::{
    bct, bct_entry, bct_lqsl, bct_lqsl_row, bct_with, boomerang_uniformity, boomerang_uniformity_lqsl,
    lqsl_table, lqsl_table_with,
};
pub use ddt::{ddt, ddt_entry, ddt_with, delta_uniformity};
pub use families::{baseline_family, find_binomial_gamma, BaselineFamily};
pub use spectrum::{
    check_scale, estimated_log2_work, sample_pairs, Best, Entries, Mode, SpectrumKind, SpectrumSummary,
    SpectrumTable, DEFAULT_LOG2_BUDGET, DEFAULT_SAMPLES, MAX_FULL_N,
};
pub use table::SBoxTable;
pub use walsh::{fwht, nonlinearity, walsh, walsh_entry, walsh_with};

use crate::par::{map_range_with, Exec};

/// Layout of a row sweep.
#[derive(Clone, Copy)]
pub(crate) struct Sweep {
    /// Rows are indexed by `a` (otherwise by `b`).
    pub rows_are_a: bool,
    /// Row 0 is excluded from the maximum.
    pub skip_row0: bool,
    /// Column 0 is excluded from the maximum.
    pub skip_col0: bool,
    /// The maximum is taken over absolute values.
    pub abs: bool,
}

/// Runs `fill(scratch, row, out)` for every row and merges the maxima.
/// Returns the row-major `[a][b]` matrix when `keep` is set.
pub(crate) fn sweep_rows<T, S, I, F>(
    exec: Exec,
    n: u32,
    keep: bool,
    layout: Sweep,
    init: I,
    fill: F,
) -> (Option<Vec<T>>, Best)
where
    T: Copy + Default + Send + Into<i64>,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u32, &mut [T]) + Sync + Send,
{
    let size = 1usize << n;
    let rows = map_range_with(
        exec,
        size,
        || (init(), vec![T::default(); size]),
        |(scratch, buf), r| {
            fill(scratch, r as u32, buf);
            let mut best = Best::NONE;
            if !(layout.skip_row0 && r == 0) {
                let start = usize::from(layout.skip_col0);
                for (c, &v) in buf.iter().enumerate().skip(start) {
                    let v: i64 = v.into();
                    let v = if layout.abs { v.abs() } else { v };
                    let (a, b) = if layout.rows_are_a { (r as u32, c as u32) } else { (c as u32, r as u32) };
                    best.consider(v, a, b);
                }
            }
            (keep.then(|| buf.clone()), best)
        },
    );
    let best = rows.iter().fold(Best::NONE, |acc, (_, b)| acc.merge(*b));
    if !keep {
        return (None, best);
    }
    let mut out = vec![T::default(); size * size];
    for (r, (row, _)) in rows.into_iter().enumerate() {
        let row = row.expect("rows kept");
        if layout.rows_are_a {
            out[r * size..(r + 1) * size].copy_from_slice(&row);
        } else {
            for (c, v) in row.into_iter().enumerate() {
                out[c * size + r] = v;
            }
        }
    }
    (Some(out), best)
}
