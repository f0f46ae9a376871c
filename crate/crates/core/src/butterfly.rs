//! Generalized butterfly constructions.
//!
//! `R(x, y) = (x + αy)^(2^k+1) + (βy)^(2^k+1)` over GF(2^m), the closed
//! butterfly `V_R(x, y) = (R(x, y), R(y, x))`, the open butterfly
//! `H_R(x, y) = (R(y, R_y^-1(x)), R_y^-1(x))`, and the univariate quadrinomial
//!
//! `F(z) = c1 z^(2^k+1) + c2 conj(z)^(2^k+1) + c3 z^(2^k) conj(z) + c4 z conj(z)^(2^k)`
//!
//! over the tower. Bivariate tables are indexed by `x + 2^m y` and store
//! `u + 2^m v`, the same encoding as tower elements `x + ωy`.

use crate::analysis::SBoxTable;
use crate::error::{Error, Result};
use crate::field::{gcd, mod_inverse, FieldCtx, FieldEl};
use crate::par::{map_range, Exec};
use crate::tower::{TowerCtx, TowerEl};

/// Maps `k` to the odd representative of `{k, m - k}`.
///
/// `R^(2^(m-k))` is the same butterfly with `k` replaced by `m - k`, so the
/// two exponents give equivalent functions.
pub fn normalize_k(m: u32, k: u32) -> Result<u32> {
    if k == 0 || k >= m {
        return Err(Error::InvalidParams(format!("k = {k} must satisfy 1 <= k < m = {m}")));
    }
    if gcd(k as u64, m as u64) != 1 {
        return Err(Error::NotCoprime { k, degree: m });
    }
    Ok(if k % 2 == 1 { k } else { m - k })
}

/// `(α, β) = (1 / (1 + θ + θ^2), θ^2 / (1 + θ + θ^2))`.
pub fn theta_to_alpha_beta(field: &FieldCtx, theta: FieldEl) -> Result<(FieldEl, FieldEl)> {
    if theta == 0 {
        return Err(Error::InvalidParams("theta must be nonzero".into()));
    }
    if theta == 1 {
        return Err(Error::ThetaYieldsTrivialPair);
    }
    let t2 = field.square(theta);
    let den = 1 ^ theta ^ t2;
    let alpha = field.inv(den)?;
    Ok((alpha, field.mul(t2, alpha)))
}

/// `α^2 + β^2 + αβ + 1 = 0`.
pub fn pair_condition(field: &FieldCtx, alpha: FieldEl, beta: FieldEl) -> bool {
    field.square(alpha) ^ field.square(beta) ^ field.mul(alpha, beta) ^ 1 == 0
}

/// The parameter `θ = (β + 1) / α + 1` that a condition-satisfying pair would
/// come from, if the θ-parametrization reproduces the pair.
pub fn theta_of_pair(field: &FieldCtx, alpha: FieldEl, beta: FieldEl) -> Option<FieldEl> {
    let theta = field.div(beta ^ 1, alpha).ok()? ^ 1;
    match theta_to_alpha_beta(field, theta) {
        Ok(p) if p == (alpha, beta) => Some(theta),
        _ => None,
    }
}

/// Both coefficient tuples of the univariate form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoeffSet {
    /// `e1..e4` from `(α, β)`; absent for a quadrinomial built from θ alone.
    pub e: Option<[FieldEl; 4]>,
    /// `c1..c4`.
    pub c: [FieldEl; 4],
}

/// One instance of the bivariate construction.
#[derive(Clone, Debug)]
pub struct ButterflyParams {
    tower: TowerCtx,
    k: u32,
    k_odd: u32,
    alpha: FieldEl,
    beta: FieldEl,
    theta: Option<FieldEl>,
    /// `(2^k + 1)^(-1) mod (2^m - 1)`.
    root_exp: u64,
}

impl ButterflyParams {
    pub fn from_theta(tower: &TowerCtx, k: u32, theta: FieldEl) -> Result<Self> {
        let (alpha, beta) = theta_to_alpha_beta(tower.base(), theta)?;
        let mut p = Self::from_alpha_beta(tower, k, alpha, beta)?;
        p.theta = Some(theta);
        Ok(p)
    }

    /// Raw `(α, β)`; the pair condition is not required.
    pub fn from_alpha_beta(tower: &TowerCtx, k: u32, alpha: FieldEl, beta: FieldEl) -> Result<Self> {
        let m = tower.m();
        let k_odd = normalize_k(m, k)?;
        let f = tower.base();
        if !f.contains(alpha) || !f.contains(beta) {
            return Err(Error::InvalidParams("alpha/beta out of range".into()));
        }
        if alpha <= 1 || beta <= 1 {
            return Err(Error::InvalidParams("alpha and beta must lie outside GF(2)".into()));
        }
        let ord = (1u64 << m) - 1;
        let root_exp = mod_inverse((1u64 << k) + 1, ord)
            .ok_or_else(|| Error::InvalidParams("2^k + 1 not invertible mod 2^m - 1".into()))?;
        Ok(ButterflyParams { tower: tower.clone(), k, k_odd, alpha, beta, theta: None, root_exp })
    }

    pub fn tower(&self) -> &TowerCtx {
        &self.tower
    }

    /// The exponent used by `R`, as supplied.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// The odd exponent used by the univariate form.
    pub fn k_odd(&self) -> u32 {
        self.k_odd
    }

    pub fn alpha(&self) -> FieldEl {
        self.alpha
    }

    pub fn beta(&self) -> FieldEl {
        self.beta
    }

    pub fn theta(&self) -> Option<FieldEl> {
        self.theta
    }

    pub fn condition_holds(&self) -> bool {
        pair_condition(self.tower.base(), self.alpha, self.beta)
    }

    /// `R(x, y) = (x + αy)^(2^k+1) + (βy)^(2^k+1)`.
    #[inline]
    pub fn r_eval(&self, x: FieldEl, y: FieldEl) -> FieldEl {
        let f = self.tower.base();
        f.pow_2k1(x ^ f.mul(self.alpha, y), self.k) ^ f.pow_2k1(f.mul(self.beta, y), self.k)
    }

    /// `R_y^(-1)(u) = (u + (βy)^(2^k+1))^d + αy`, `d = (2^k+1)^(-1)`.
    pub fn r_inv(&self, u: FieldEl, y: FieldEl) -> FieldEl {
        let f = self.tower.base();
        let t = u ^ f.pow_2k1(f.mul(self.beta, y), self.k);
        f.pow(t, self.root_exp) ^ f.mul(self.alpha, y)
    }

    /// `V_R(x, y) = (R(x, y), R(y, x))` as a tower element.
    pub fn closed_eval(&self, x: FieldEl, y: FieldEl) -> TowerEl {
        TowerEl::new(self.r_eval(x, y), self.r_eval(y, x))
    }

    pub fn open_eval(&self, x: FieldEl, y: FieldEl) -> TowerEl {
        let t = self.r_inv(x, y);
        TowerEl::new(self.r_eval(y, t), t)
    }

    pub fn closed_butterfly_table(&self) -> SBoxTable {
        self.closed_butterfly_table_with(Exec::default())
    }

    pub fn closed_butterfly_table_with(&self, exec: Exec) -> SBoxTable {
        self.bivariate_table(exec, |x, y| self.closed_eval(x, y))
    }

    pub fn open_butterfly_table(&self) -> SBoxTable {
        self.open_butterfly_table_with(Exec::default())
    }

    pub fn open_butterfly_table_with(&self, exec: Exec) -> SBoxTable {
        self.bivariate_table(exec, |x, y| self.open_eval(x, y))
    }

    fn bivariate_table(&self, exec: Exec, f: impl Fn(FieldEl, FieldEl) -> TowerEl + Sync + Send) -> SBoxTable {
        let t = &self.tower;
        let values = map_range(exec, t.size() as usize, |i| {
            let z = t.decode(i as u64);
            t.encode(f(z.x, z.y)) as u32
        });
        SBoxTable::new(t.n(), values).expect("encodings fit in n bits")
    }

    /// `e1..e4` for the odd exponent.
    pub fn e_coeffs(&self) -> [FieldEl; 4] {
        let f = self.tower.base();
        let k = self.k_odd;
        let a = self.alpha;
        let ak = f.frob_pow(a, k);
        let ak1 = f.mul(ak, a);
        let bk1 = f.pow_2k1(self.beta, k);
        [1 ^ a ^ ak1 ^ bk1, 1 ^ ak ^ ak1 ^ bk1, 1 ^ a ^ ak, a ^ ak ^ ak1 ^ bk1]
    }

    /// Coefficients of both forms. `c` comes from θ when known, otherwise
    /// from `c_i = e_i α^(-(2^k+1))`.
    pub fn coeffs(&self) -> CoeffSet {
        let f = self.tower.base();
        let e = self.e_coeffs();
        let scale = f.inv(f.pow_2k1(self.alpha, self.k_odd)).expect("alpha is nonzero");
        let c_from_e = e.map(|v| f.mul(v, scale));
        let c = match self.theta {
            Some(th) => {
                let c = theta_coeffs(f, self.k_odd, th);
                debug_assert_eq!(c, c_from_e);
                c
            }
            None => c_from_e,
        };
        CoeffSet { e: Some(e), c }
    }

    /// `G(z) = e1 z^(2^k+1) + e2 conj(z)^(2^k+1) + e3 z^(2^k) conj(z) + e4 z conj(z)^(2^k)`.
    pub fn g_eval(&self, z: TowerEl) -> TowerEl {
        quadrinomial_eval(&self.tower, self.k_odd, &self.e_coeffs(), z)
    }

    /// The univariate quadrinomial of this instance. Pairs built from raw
    /// `(α, β)` use the `c_i = e_i α^(-(2^k+1))` coefficients.
    pub fn quadrinomial(&self) -> Quadrinomial {
        match self.theta {
            Some(th) => Quadrinomial::new(&self.tower, self.k_odd, th).expect("theta is nonzero"),
            None => Quadrinomial {
                tower: self.tower.clone(),
                k: self.k_odd,
                theta: None,
                c: self.coeffs().c,
            },
        }
    }
}

/// `c1..c4` as functions of θ.
pub fn theta_coeffs(f: &FieldCtx, k: u32, theta: FieldEl) -> [FieldEl; 4] {
    let t2 = f.square(theta);
    let s = 1 ^ theta ^ t2; // 1 + θ + θ^2
    let p = f.pow_2k1(theta ^ t2, k); // (θ + θ^2)^(2^k+1)
    let q = f.pow_2k1(t2, k); // θ^(2(2^k+1))
    [
        s ^ p ^ q,
        f.frob_pow(s, k) ^ p ^ q,
        1 ^ p,
        f.pow_2k1(s, k) ^ p ^ q,
    ]
}

#[inline]
fn quadrinomial_eval(t: &TowerCtx, k: u32, c: &[FieldEl; 4], z: TowerEl) -> TowerEl {
    let zb = t.bar(z);
    let zk = t.frob_pow(z, k);
    let zbk = t.bar(zk);
    let left = t.scale(c[0], z) + t.scale(c[2], zb);
    let right = t.scale(c[1], zb) + t.scale(c[3], z);
    t.mul(zk, left) + t.mul(zbk, right)
}

/// `F(z) = c1 z^(2^k+1) + c2 conj(z)^(2^k+1) + c3 z^(2^k) conj(z) + c4 z conj(z)^(2^k)`
/// with odd `k`.
#[derive(Clone, Debug)]
pub struct Quadrinomial {
    tower: TowerCtx,
    k: u32,
    theta: Option<FieldEl>,
    c: [FieldEl; 4],
}

impl Quadrinomial {
    /// The θ-indexed instance; any `θ != 0` is accepted, including `θ = 1`.
    pub fn new(tower: &TowerCtx, k: u32, theta: FieldEl) -> Result<Self> {
        let k = normalize_k(tower.m(), k)?;
        let f = tower.base();
        if theta == 0 || !f.contains(theta) {
            return Err(Error::InvalidParams("theta must be a nonzero element of GF(2^m)".into()));
        }
        Ok(Quadrinomial { tower: tower.clone(), k, theta: Some(theta), c: theta_coeffs(f, k, theta) })
    }

    pub fn tower(&self) -> &TowerCtx {
        &self.tower
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn theta(&self) -> Option<FieldEl> {
        self.theta
    }

    pub fn c(&self) -> [FieldEl; 4] {
        self.c
    }

    #[inline]
    pub fn eval(&self, z: TowerEl) -> TowerEl {
        quadrinomial_eval(&self.tower, self.k, &self.c, z)
    }

    pub fn table(&self) -> SBoxTable {
        self.table_with(Exec::default())
    }

    pub fn table_with(&self, exec: Exec) -> SBoxTable {
        let t = &self.tower;
        let values = map_range(exec, t.size() as usize, |i| t.encode(self.eval(t.decode(i as u64))) as u32);
        SBoxTable::new(t.n(), values).expect("encodings fit in n bits")
    }
}
