//! Data-parallel helpers.
//!
//! Every sweep in the crate goes through these functions. With the `parallel`
//! feature they dispatch disjoint index ranges to rayon workers; without it,
//! or with [`Exec::Sequential`], they run the same closure in a plain loop.
//! Callers merge per-index results themselves, so both paths produce
//! identical output.

/// Execution strategy for a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when the `parallel` feature is off.
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Evaluates `f` on `0..len` and collects the results in index order.
pub fn map_range<R, F>(exec: Exec, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Like [`map_range`], with a per-worker scratch value built by `init`.
pub fn map_range_with<S, R, I, F>(exec: Exec, len: usize, init: I, f: F) -> Vec<R>
where
    R: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map_init(&init, |s, i| f(s, i)).collect();
    }
    let _ = exec;
    let mut scratch = init();
    (0..len).map(|i| f(&mut scratch, i)).collect()
}

/// Runs `f` over `0..len` for its side effect on per-index output slots.
pub fn for_each_chunk<T, F>(exec: Exec, out: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        out.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
        return;
    }
    let _ = exec;
    out.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_agree() {
        let seq = map_range(Exec::Sequential, 1000, |i| i * i);
        let par = map_range(Exec::Parallel, 1000, |i| i * i);
        assert_eq!(seq, par);

        let seq = map_range_with(Exec::Sequential, 100, || vec![0u8; 4], |s, i| {
            s[i % 4] += 1;
            i + 1
        });
        let par = map_range_with(Exec::Parallel, 100, || vec![0u8; 4], |s, i| {
            s[i % 4] = s[i % 4].wrapping_add(1);
            i + 1
        });
        assert_eq!(seq, par);
    }

    #[test]
    fn chunks_cover_output() {
        let mut out = vec![0usize; 37];
        for_each_chunk(Exec::Parallel, &mut out, 8, |ci, c| {
            for (j, v) in c.iter_mut().enumerate() {
                *v = ci * 8 + j;
            }
        });
        assert_eq!(out, (0..37).collect::<Vec<_>>());
    }
}
