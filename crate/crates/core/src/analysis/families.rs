use serde::Serialize;

use super::SBoxTable;
use crate::error::{Error, Result};
use crate::field::gcd;
use crate::tower::{TowerCtx, TowerEl};

/// Known permutations with boomerang uniformity 4, for `n ≡ 2 (mod 4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum BaselineFamily {
    /// `x^(2^n - 2)`.
    Inverse,
    /// `x^(2^i + 1)` with `gcd(i, n) = 2`.
    Gold { i: u32 },
    /// `x^(2^t + 2) + γx` with `t = n/2` and `γ^(2^t - 1)` of order 3;
    /// `gamma` is a canonical encoding.
    Binomial { gamma: u64 },
}

impl BaselineFamily {
    pub fn id(self) -> u8 {
        match self {
            BaselineFamily::Inverse => 1,
            BaselineFamily::Gold { .. } => 2,
            BaselineFamily::Binomial { .. } => 3,
        }
    }
}

fn order_is_three(tower: &TowerCtx, z: TowerEl) -> bool {
    z != TowerEl::ONE && tower.pow(z, 3) == TowerEl::ONE
}

/// The smallest canonical `γ` admissible for the third family.
pub fn find_binomial_gamma(tower: &TowerCtx) -> Option<TowerEl> {
    let e = (1u64 << tower.m()) - 1;
    tower.elements().skip(1).find(|&g| order_is_three(tower, tower.pow(g, e)))
}

/// Evaluates a baseline family over the tower `GF(2^m)(ω)`.
pub fn baseline_family(tower: &TowerCtx, family: BaselineFamily) -> Result<SBoxTable> {
    let n = tower.n();
    let bad = |msg: String| Err(Error::InvalidFamilyParams(msg));
    if n % 4 != 2 {
        return bad(format!("n = {n} is not 2 mod 4"));
    }
    let size = tower.size();
    let f: Box<dyn Fn(TowerEl) -> TowerEl + '_> = match family {
        BaselineFamily::Inverse => Box::new(move |x| tower.pow(x, size - 2)),
        BaselineFamily::Gold { i } => {
            if i == 0 || i >= n || gcd(i as u64, n as u64) != 2 {
                return bad(format!("gcd({i}, {n}) must be 2"));
            }
            Box::new(move |x| tower.mul(tower.frob_pow(x, i), x))
        }
        BaselineFamily::Binomial { gamma } => {
            if gamma >= size {
                return bad(format!("gamma = {gamma:#x} is outside the field"));
            }
            let g = tower.decode(gamma);
            let e = (1u64 << tower.m()) - 1;
            if !order_is_three(tower, tower.pow(g, e)) {
                return bad(format!("gamma = {gamma:#x}: gamma^(2^t - 1) does not have order 3"));
            }
            Box::new(move |x| tower.mul(tower.bar(x), tower.square(x)) + tower.mul(g, x))
        }
    };
    SBoxTable::from_fn(n, |v| tower.encode(f(tower.decode(v as u64))) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{boomerang_uniformity, delta_uniformity};

    #[test]
    fn baselines_at_six_bits() {
        let tw = TowerCtx::with_modulus(3, None).unwrap();
        let g = find_binomial_gamma(&tw).unwrap();
        for fam in [
            BaselineFamily::Inverse,
            BaselineFamily::Gold { i: 2 },
            BaselineFamily::Gold { i: 4 },
            BaselineFamily::Binomial { gamma: tw.encode(g) },
        ] {
            let t = baseline_family(&tw, fam).unwrap();
            assert!(t.is_permutation(), "{fam:?}");
            assert_eq!(boomerang_uniformity(&t).unwrap(), 4, "{fam:?}");
        }
        let inv = baseline_family(&tw, BaselineFamily::Inverse).unwrap();
        assert_eq!(delta_uniformity(&inv), 4);
    }

    #[test]
    fn conjugate_form_is_the_power_map() {
        let tw = TowerCtx::with_modulus(3, None).unwrap();
        for x in tw.elements() {
            assert_eq!(tw.mul(tw.bar(x), tw.square(x)), tw.pow(x, 10));
        }
    }

    #[test]
    fn invalid_parameters() {
        let tw = TowerCtx::with_modulus(3, None).unwrap();
        assert!(matches!(baseline_family(&tw, BaselineFamily::Gold { i: 1 }), Err(Error::InvalidFamilyParams(_))));
        assert!(matches!(baseline_family(&tw, BaselineFamily::Gold { i: 3 }), Err(Error::InvalidFamilyParams(_))));
        assert!(matches!(baseline_family(&tw, BaselineFamily::Binomial { gamma: 1 }), Err(Error::InvalidFamilyParams(_))));
        let five = TowerCtx::with_modulus(5, None).unwrap();
        assert!(baseline_family(&five, BaselineFamily::Inverse).is_ok());
    }
}
