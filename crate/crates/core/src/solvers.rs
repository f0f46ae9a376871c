//! Constructive solvers for the three equation families the butterfly
//! analysis is built on:
//!
//! * quadratics `x^2 + ax + b = 0`,
//! * Artin–Schreier equations `x^(2^k) + x = a` with `gcd(k, degree) = 1`,
//! * the linearized equation `L(x) = x^(2^k) + μ conj(x) + (μ + 1)x + ν = 0`
//!   over the tower, with a closed-form root-count classification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gcd, mod_inverse, BinaryField, FieldEl};
use crate::tower::{TowerCtx, TowerEl};

/// Echelon basis of the image of a GF(2)-linear map on `d`-bit vectors,
/// each image vector paired with a preimage.
#[derive(Clone, Debug)]
pub struct LinearBasis {
    /// `rows[bit] = (image, preimage)` with `image`'s top set bit at `bit`.
    rows: Vec<Option<(u64, u64)>>,
    kernel: Vec<u64>,
}

impl LinearBasis {
    /// Builds the basis from the images of the unit vectors.
    pub fn from_map(d: u32, f: impl Fn(u64) -> u64) -> Self {
        let mut basis = LinearBasis { rows: vec![None; d as usize], kernel: Vec::new() };
        for j in 0..d {
            let (mut img, mut pre) = (f(1 << j), 1u64 << j);
            loop {
                if img == 0 {
                    basis.kernel.push(pre);
                    break;
                }
                let top = 63 - img.leading_zeros() as usize;
                match basis.rows[top] {
                    Some((bi, bp)) => {
                        img ^= bi;
                        pre ^= bp;
                    }
                    None => {
                        basis.rows[top] = Some((img, pre));
                        break;
                    }
                }
            }
        }
        basis
    }

    /// Some `x` with `f(x) = target`, if `target` lies in the image.
    pub fn preimage(&self, mut target: u64) -> Option<u64> {
        let mut pre = 0;
        while target != 0 {
            let top = 63 - target.leading_zeros() as usize;
            let (bi, bp) = self.rows.get(top).copied().flatten()?;
            target ^= bi;
            pre ^= bp;
        }
        Some(pre)
    }

    /// A basis of the kernel.
    pub fn kernel(&self) -> &[u64] {
        &self.kernel
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().flatten().count()
    }
}

/// Prepared solver for `x^(2^k) + x = a` over a fixed field.
#[derive(Clone, Debug)]
pub struct ArtinSchreier {
    k: u32,
    basis: LinearBasis,
}

impl ArtinSchreier {
    pub fn new<F: BinaryField>(field: &F, k: u32) -> Result<Self> {
        let d = field.degree();
        if k == 0 || gcd(k as u64, d as u64) != 1 {
            return Err(Error::NotCoprime { k, degree: d });
        }
        let basis = LinearBasis::from_map(d, |v| {
            let x = field.from_bits(v);
            field.to_bits(field.add(field.frob_pow(x, k), x))
        });
        debug_assert_eq!(basis.kernel(), &[field.to_bits(field.one())]);
        Ok(ArtinSchreier { k, basis })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// One root; the other is this plus one.
    pub fn solve_one<F: BinaryField>(&self, field: &F, a: F::El) -> Option<F::El> {
        self.basis.preimage(field.to_bits(a)).map(|v| field.from_bits(v))
    }

    /// Both roots in increasing canonical order, or none.
    pub fn solve<F: BinaryField>(&self, field: &F, a: F::El) -> Vec<F::El> {
        match self.solve_one(field, a) {
            Some(r) => {
                let mut v = vec![r, field.add(r, field.one())];
                v.sort_by_key(|&e| field.to_bits(e));
                v
            }
            None => Vec::new(),
        }
    }
}

/// All roots of `x^(2^k) + x = a`. Two roots iff `Tr(a) = 0`.
pub fn solve_artin_schreier<F: BinaryField>(field: &F, k: u32, a: F::El) -> Result<Vec<F::El>> {
    Ok(ArtinSchreier::new(field, k)?.solve(field, a))
}

/// All roots of `x^2 + ax + b` for `a != 0`: two iff `Tr(b / a^2) = 0`,
/// and they differ by `a`.
pub fn solve_quadratic<F: BinaryField>(field: &F, a: F::El, b: F::El) -> Result<Vec<F::El>> {
    if a == field.zero() {
        return Err(Error::ZeroLinearCoefficient);
    }
    // x = a t turns it into t^2 + t = b / a^2
    let c = field.div(b, field.square(a))?;
    let ts = solve_artin_schreier(field, 1, c)?;
    let mut roots: Vec<_> = ts.into_iter().map(|t| field.mul(a, t)).collect();
    roots.sort_by_key(|&e| field.to_bits(e));
    Ok(roots)
}

/// Which criterion decided a nonzero root count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `1 + μ + conj(μ) = 0` and the compatibility sum matches.
    Case1i,
    /// `1 + μ + conj(μ) != 0`, `Tr(Δ) = 0`, `λ + conj(λ) = ξ + 1`.
    Case1ii,
    /// `1 + μ + conj(μ) != 0`, `Tr(Δ) = 0`, `λ + conj(λ) = ξ`, second trace zero.
    Case2,
    /// No roots.
    None,
}

/// Predicted root count of `L_{μ,ν}` and the auxiliary quantities behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LClassification {
    pub count: u8,
    /// `ξ` with `ξ^(2^k - 1) = 1 + μ + conj(μ)`; zero when that is zero.
    pub xi: FieldEl,
    /// `(ν + conj(ν)) / ξ^(2^k)`, undefined when `ξ = 0`.
    pub delta: Option<FieldEl>,
    /// A solution of `λ^(2^k) + λ = μξ`.
    pub lambda: TowerEl,
    pub branch: Branch,
}

/// Prepared solver for `L_{μ,ν}(x) = 0` over a fixed tower and odd `k`.
///
/// The Artin–Schreier bases over the base field and the tower are built
/// once; the handle is immutable and can be shared across threads.
#[derive(Clone, Debug)]
pub struct LinearizedSolver {
    tower: TowerCtx,
    k: u32,
    /// `(2^k - 1)^(-1) mod (2^m - 1)`.
    xi_exp: u64,
    base_as: ArtinSchreier,
    tower_as: ArtinSchreier,
}

impl LinearizedSolver {
    pub fn new(tower: &TowerCtx, k: u32) -> Result<Self> {
        let m = tower.m();
        if k.is_multiple_of(2) || gcd(k as u64, m as u64) != 1 {
            return Err(Error::NotCoprime { k, degree: tower.n() });
        }
        let ord = (1u64 << m) - 1;
        let kk = k % m;
        let xi_exp = mod_inverse((1u64 << kk) - 1, ord)
            .ok_or(Error::NotCoprime { k, degree: m })?;
        Ok(LinearizedSolver {
            tower: tower.clone(),
            k,
            xi_exp,
            base_as: ArtinSchreier::new(tower.base(), k)?,
            tower_as: ArtinSchreier::new(tower, k)?,
        })
    }

    pub fn tower(&self) -> &TowerCtx {
        &self.tower
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `L_{μ,ν}(x)` evaluated directly.
    pub fn eval(&self, mu: TowerEl, nu: TowerEl, x: TowerEl) -> TowerEl {
        let t = &self.tower;
        t.frob_pow(x, self.k) + t.mul(mu, t.bar(x)) + t.mul(mu + TowerEl::ONE, x) + nu
    }

    /// `ξ` with `ξ^(2^k - 1) = s`, unique in the base field.
    pub fn xi_of(&self, s: FieldEl) -> FieldEl {
        self.tower.base().pow(s, self.xi_exp)
    }

    /// Both solutions of `λ^(2^k) + λ = μξ`, smaller encoding first.
    pub fn lambdas(&self, mu: TowerEl, xi: FieldEl) -> Vec<TowerEl> {
        let t = &self.tower;
        self.tower_as.solve(t, t.scale(xi, mu))
    }

    /// `Σ_{i<m} w^(2^(ki))`.
    fn frob_orbit_sum(&self, w: TowerEl) -> TowerEl {
        let t = &self.tower;
        let mut acc = TowerEl::ZERO;
        let mut c = w;
        for _ in 0..t.m() {
            acc += c;
            c = t.frob_pow(c, self.k);
        }
        acc
    }

    /// Root count by the closed-form criteria, without enumerating roots.
    pub fn classify(&self, mu: TowerEl, nu: TowerEl) -> LClassification {
        let s = 1 ^ self.tower.trace_rel(mu);
        let xi = self.xi_of(s);
        let lambda = self.lambdas(mu, xi)[0];
        self.classify_with_lambda(mu, nu, lambda)
    }

    /// [`classify`](Self::classify) with a caller-chosen solution `λ` of
    /// `λ^(2^k) + λ = μξ`.
    pub fn classify_with_lambda(&self, mu: TowerEl, nu: TowerEl, lambda: TowerEl) -> LClassification {
        let t = &self.tower;
        let f = t.base();
        let k = self.k;
        let s = 1 ^ t.trace_rel(mu);
        let nu_rel = t.trace_rel(nu);
        if s == 0 {
            // unique z with z^(2^k) = ν + conj(ν)
            let w = t.scale(nu_rel, t.frob_pow(mu, k)) + t.frob_pow(nu, k);
            let ok = self.frob_orbit_sum(w) == TowerEl::base(nu_rel);
            return LClassification {
                count: if ok { 2 } else { 0 },
                xi: 0,
                delta: None,
                lambda,
                branch: if ok { Branch::Case1i } else { Branch::None },
            };
        }
        let xi = self.xi_of(s);
        let xi_k = f.frob_pow(xi, k);
        let delta = f.div(nu_rel, xi_k).expect("xi is nonzero");
        let zero = |count: u8| LClassification {
            count,
            xi,
            delta: Some(delta),
            lambda,
            branch: Branch::None,
        };
        if f.trace_abs(delta) == 1 {
            return zero(0);
        }
        let lam_rel = t.trace_rel(lambda);
        if lam_rel == xi ^ 1 {
            return LClassification { branch: Branch::Case1ii, ..zero(2) };
        }
        debug_assert_eq!(lam_rel, xi, "λ + conj(λ) must be ξ or ξ + 1");
        let arg = t.scale(f.inv(xi_k).expect("xi is nonzero"), t.mul(t.frob_pow(lambda, k), t.bar(nu)));
        if t.trace_abs_n(arg) == 0 {
            LClassification { branch: Branch::Case2, ..zero(4) }
        } else {
            zero(0)
        }
    }

    /// The exact root set, in increasing canonical order.
    ///
    /// With `z = x + conj(x)` the equation splits into a base-field equation
    /// for `z`, a compatibility condition on `z`, and the lift
    /// `x^(2^k) + x = μz + ν` over the tower.
    pub fn solve(&self, mu: TowerEl, nu: TowerEl) -> Vec<TowerEl> {
        let t = &self.tower;
        let f = t.base();
        let k = self.k;
        let m = t.m();
        let s = 1 ^ t.trace_rel(mu);
        let nu_rel = t.trace_rel(nu);

        // z^(2^k) + s z + (ν + conj(ν)) = 0 over the base field
        let zs: Vec<FieldEl> = if s == 0 {
            vec![f.frob_pow(nu_rel, m - k % m)]
        } else {
            let xi = self.xi_of(s);
            let delta = f.div(nu_rel, f.frob_pow(xi, k)).expect("xi is nonzero");
            self.base_as
                .solve(f, delta)
                .into_iter()
                .map(|rho| f.mul(xi, rho))
                .collect()
        };

        let mut roots = Vec::with_capacity(4);
        for z in zs {
            let rhs = t.scale(z, mu) + nu;
            if self.frob_orbit_sum(rhs) + TowerEl::base(z) != TowerEl::ZERO {
                continue;
            }
            roots.extend(self.tower_as.solve(t, rhs));
        }
        roots.sort();
        roots
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_roots(s: &LinearizedSolver, mu: TowerEl, nu: TowerEl) -> Vec<TowerEl> {
        s.tower().elements().filter(|&x| s.eval(mu, nu, x).is_zero()).collect()
    }

    #[test]
    fn linear_basis_preimages() {
        // x -> x ^ (x >> 1) on 8 bits is invertible
        let b = LinearBasis::from_map(8, |v| v ^ (v >> 1));
        assert_eq!(b.rank(), 8);
        for t in 0..256u64 {
            let p = b.preimage(t).unwrap();
            assert_eq!(p ^ (p >> 1), t);
        }
        // projection onto the low nibble
        let b = LinearBasis::from_map(8, |v| v & 0xf);
        assert_eq!(b.kernel().len(), 4);
        assert!(b.preimage(0x10).is_none());
    }

    #[test]
    fn quadratic_examples() {
        let f = FieldCtx::with_default(3).unwrap();
        assert!(solve_quadratic(&f, 1, 1).unwrap().is_empty());
        assert_eq!(solve_quadratic(&f, 1, 0).unwrap(), vec![0, 1]);
        assert_eq!(solve_quadratic(&f, 0, 1), Err(Error::ZeroLinearCoefficient));
    }

    #[test]
    fn quadratic_matches_enumeration_gf64() {
        let f = FieldCtx::with_default(6).unwrap();
        for a in 1..64u32 {
            for b in 0..64u32 {
                let brute: Vec<u32> = (0..64u32)
                    .filter(|&x| f.square(x) ^ f.mul(a, x) ^ b == 0)
                    .collect();
                let got = solve_quadratic(&f, a, b).unwrap();
                assert_eq!(got, brute);
                let tr = f.trace_abs(f.div(b, f.square(a)).unwrap());
                assert_eq!(got.len(), if tr == 0 { 2 } else { 0 });
                if got.len() == 2 {
                    assert_eq!(got[0] ^ got[1], a);
                }
            }
        }
    }

    #[test]
    fn quadratic_over_tower() {
        let t = TowerCtx::with_modulus(3, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = t.decode(rng.random_range(1..64));
            let b = t.decode(rng.random_range(0..64));
            let brute: Vec<TowerEl> = t
                .elements()
                .filter(|&x| (t.square(x) + t.mul(a, x) + b).is_zero())
                .collect();
            let got = solve_quadratic(&t, a, b).unwrap();
            assert_eq!(got, brute);
        }
    }

    #[test]
    fn artin_schreier_examples() {
        let f = FieldCtx::with_default(3).unwrap();
        assert_eq!(solve_artin_schreier(&f, 1, 0).unwrap(), vec![0, 1]);
        assert!(solve_artin_schreier(&f, 1, 1).unwrap().is_empty());
        let g = 0b010;
        let a = f.square(g) ^ g;
        assert_eq!(solve_artin_schreier(&f, 1, a).unwrap(), vec![g, g ^ 1]);
        assert_eq!(
            solve_artin_schreier(&f, 3, 0).unwrap_err(),
            Error::NotCoprime { k: 3, degree: 3 }
        );
    }

    #[test]
    fn artin_schreier_trace_criterion() {
        for (m, k) in [(5, 1), (5, 2), (5, 3), (7, 3), (6, 5)] {
            let f = FieldCtx::with_default(m).unwrap();
            let solver = ArtinSchreier::new(&f, k).unwrap();
            for a in 0..f.size() as u32 {
                let roots = solver.solve(&f, a);
                assert_eq!(roots.len(), if f.trace_abs(a) == 0 { 2 } else { 0 });
                for &r in &roots {
                    assert_eq!(f.frob_pow(r, k) ^ r, a);
                }
                if roots.len() == 2 {
                    assert_eq!(roots[0] ^ roots[1], 1);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_k() {
        let t = TowerCtx::with_modulus(3, None).unwrap();
        assert!(LinearizedSolver::new(&t, 2).is_err());
        assert!(LinearizedSolver::new(&t, 3).is_err());
        assert!(LinearizedSolver::new(&t, 1).is_ok());
        assert!(LinearizedSolver::new(&t, 5).is_ok());
    }

    #[test]
    fn homogeneous_trivial_instance() {
        let t = TowerCtx::with_modulus(3, None).unwrap();
        let s = LinearizedSolver::new(&t, 1).unwrap();
        let c = s.classify(TowerEl::ZERO, TowerEl::ZERO);
        assert_eq!(c.count, 2);
        assert_eq!(s.solve(TowerEl::ZERO, TowerEl::ZERO), vec![TowerEl::ZERO, TowerEl::ONE]);
    }

    #[test]
    fn four_roots_are_0_1_lambda_lambda1() {
        let t = TowerCtx::with_modulus(3, None).unwrap();
        let s = LinearizedSolver::new(&t, 1).unwrap();
        let mut hits = 0;
        for mu in t.elements() {
            let c = s.classify(mu, TowerEl::ZERO);
            if c.xi != 0 && t.trace_rel(c.lambda) == c.xi {
                hits += 1;
                assert_eq!(c.count, 4);
                let mut want = vec![TowerEl::ZERO, TowerEl::ONE, c.lambda, c.lambda + TowerEl::ONE];
                want.sort();
                assert_eq!(s.solve(mu, TowerEl::ZERO), want);
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn exhaustive_n6_all_odd_k() {
        let t = TowerCtx::with_modulus(3, None).unwrap();
        for k in [1, 5] {
            let s = LinearizedSolver::new(&t, k).unwrap();
            for mu in t.elements() {
                let c0 = s.classify(mu, TowerEl::ZERO);
                let lams = s.lambdas(mu, c0.xi);
                assert_eq!(lams.len(), 2);
                for &l in &lams {
                    let rel = t.trace_rel(l);
                    if c0.xi != 0 {
                        assert!(rel == c0.xi || rel == c0.xi ^ 1);
                    }
                }
                for nu in t.elements() {
                    let brute = brute_roots(&s, mu, nu);
                    let c = s.classify(mu, nu);
                    assert_eq!(c.count as usize, brute.len(), "mu={mu} nu={nu}");
                    assert_eq!(s.solve(mu, nu), brute);
                    // the other λ gives the same verdict
                    let c2 = s.classify_with_lambda(mu, nu, lams[1]);
                    assert_eq!(c2.count, c.count);
                }
            }
        }
    }

    #[test]
    fn kernel_image_duality_n6() {
        let t = TowerCtx::with_modulus(3, None).unwrap();
        let s = LinearizedSolver::new(&t, 1).unwrap();
        for mu in t.elements() {
            let kappa = s.solve(mu, TowerEl::ZERO).len();
            assert!(matches!(kappa, 1 | 2 | 4));
            let mut solvable = 0;
            for nu in t.elements() {
                let r = s.solve(mu, nu).len();
                if r > 0 {
                    assert_eq!(r, kappa);
                    solvable += 1;
                }
            }
            assert_eq!(solvable * kappa, 64);
        }
    }
}
