use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SBoxTable;
use crate::error::Result;
use crate::solvers::LinearBasis;

/// `x -> Mx + c` on `n`-bit vectors, with `cols[i] = M e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    n: u32,
    cols: Vec<u32>,
    c: u32,
}

impl AffineMap {
    pub fn new(n: u32, cols: Vec<u32>, c: u32) -> Self {
        assert_eq!(cols.len(), n as usize);
        AffineMap { n, cols, c }
    }

    /// A uniformly random invertible affine map, drawn by rejection.
    pub fn random(n: u32, rng: &mut impl Rng) -> Self {
        let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        loop {
            let cols: Vec<u32> = (0..n).map(|_| rng.random::<u32>() & mask).collect();
            let map = AffineMap { n, cols, c: rng.random::<u32>() & mask };
            if map.is_invertible() {
                return map;
            }
        }
    }

    /// `count` maps from a seeded generator.
    pub fn seeded(n: u32, seed: u64, count: usize) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| Self::random(n, &mut rng)).collect()
    }

    pub fn linear(&self, x: u32) -> u32 {
        let mut y = 0;
        for (i, &col) in self.cols.iter().enumerate() {
            if x >> i & 1 == 1 {
                y ^= col;
            }
        }
        y
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.linear(x) ^ self.c
    }

    pub fn is_invertible(&self) -> bool {
        LinearBasis::from_map(self.n, |x| self.linear(x as u32) as u64).rank() == self.n as usize
    }

    pub fn to_table(&self) -> SBoxTable {
        SBoxTable::from_fn(self.n, |x| self.apply(x)).expect("values stay in range")
    }

    /// `outer ∘ t ∘ inner`.
    pub fn sandwich(outer: &AffineMap, t: &SBoxTable, inner: &AffineMap) -> Result<SBoxTable> {
        outer.to_table().compose(&t.compose(&inner.to_table())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_maps_are_bijections() {
        for map in AffineMap::seeded(6, 7, 20) {
            assert!(map.to_table().is_permutation());
        }
        assert_eq!(AffineMap::seeded(6, 7, 3), AffineMap::seeded(6, 7, 3));
    }

    #[test]
    fn singular_matrix_detected() {
        let m = AffineMap::new(3, vec![1, 2, 3], 0);
        assert!(!m.is_invertible());
        assert!(!m.to_table().is_permutation());
    }
}
