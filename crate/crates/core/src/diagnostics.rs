//! Structural solution of `F(x + a) + F(x) = b` for the quadrinomial and
//! the trace criteria behind its boomerang uniformity.
//!
//! With `x -> ax` the difference equation becomes
//! `τ1 conj(x)^(2^k) + τ2 x^(2^k) + τ3 conj(x) + τ4 x + τ5 = 0`, and
//! eliminating `conj(x)^(2^k)` gives `v1 x^(2^k) + v2 conj(x) + v3 x + v4 = 0`,
//! which after division by `v1` is an instance of `L_{μ,ν}`.

use serde::Serialize;

use crate::butterfly::Quadrinomial;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldEl};
use crate::solvers::LinearizedSolver;
use crate::tower::{TowerCtx, TowerEl};

/// Coefficients of the substituted and the eliminated difference equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiffCoeffs {
    pub tau: [TowerEl; 5],
    pub v: [TowerEl; 4],
}

/// Which of the coefficient identities hold for one `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiffProperties {
    /// `v1 + v2 + v3 = 0`.
    pub v_sum: bool,
    /// `τ1 + τ2 = τ3 + τ4 = τ5 + b`.
    pub tau_sums: bool,
    /// `v4 = v1 + τ1 conj(b) + conj(τ2) b`.
    pub v4_relation: bool,
    /// The three bilinear identities that make the elimination reversible.
    pub bilinear: [bool; 3],
    pub v1_nonzero: bool,
    /// `v1` lies in the base field.
    pub v1_real: bool,
}

impl DiffProperties {
    pub fn all(&self) -> bool {
        self.v_sum && self.tau_sums && self.v4_relation && self.bilinear.iter().all(|&x| x) && self.v1_nonzero && self.v1_real
    }
}

/// `μ`, `ξ`, `λ` and `γ = conj(a)/a` for one direction `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MuXiLambda {
    /// Closed form in `θ` and `γ`.
    pub mu: TowerEl,
    /// `v2 / v1` from the coefficient lists.
    pub mu_from_v: TowerEl,
    pub xi: FieldEl,
    pub lambda: TowerEl,
    pub gamma: TowerEl,
}

/// Per-`z` quantities for `F(x + z) + F(x) = b`, `z ∈ Z_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZTrace {
    pub z: TowerEl,
    pub mu: TowerEl,
    pub nu: TowerEl,
    /// `μ_z` and `ν_z` agree with the reduction of the difference equation
    /// in direction `z`.
    pub matches_reduction: bool,
    pub xi: FieldEl,
    pub lambda: TowerEl,
    /// `λ^(2^k) + λ = μξ` and `λ + conj(λ) = ξ`.
    pub lambda_ok: bool,
    pub e: FieldEl,
    pub delta_trace: u8,
    pub delta_trace_closed: u8,
    pub second_trace: u8,
    pub second_trace_closed: u8,
    /// Root count predicted by the generic solver's classification.
    pub solver_count: u8,
    /// All `x` with `F(x + z) + F(x) = b`.
    pub solutions: Vec<TowerEl>,
}

impl ZTrace {
    /// Four roots exactly when both traces vanish.
    pub fn predicts_four(&self) -> bool {
        self.delta_trace == 0 && self.second_trace == 0
    }

    pub fn consistent(&self) -> bool {
        let expected = if self.predicts_four() { 4 } else { 0 };
        self.matches_reduction
            && self.lambda_ok
            && self.delta_trace == self.delta_trace_closed
            && self.second_trace == self.second_trace_closed
            && self.solver_count == expected
            && self.solutions.len() == expected as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoomerangReport {
    pub a: TowerEl,
    pub b: TowerEl,
    pub eta: TowerEl,
    pub per_z: Vec<ZTrace>,
    /// `Σ_z Tr(Δ_z)` over GF(2).
    pub delta_trace_sum: u8,
    /// `F(a) + F(η) + F(a + η) = 0`.
    pub f_sum_zero: bool,
    /// `E` takes one nonzero value on `Z_a`.
    pub e_invariant: bool,
    /// `S_F(a, b)` as the number of pairs `(x, x + z)`.
    pub s_f: usize,
}

impl BoomerangReport {
    pub fn consistent(&self) -> bool {
        self.delta_trace_sum == 0
            && self.f_sum_zero
            && self.e_invariant
            && self.per_z.iter().all(ZTrace::consistent)
            && self.s_f <= 4
    }
}

/// Full report for one `(a, b)`, as emitted by the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferenceReport {
    pub a: TowerEl,
    pub b: TowerEl,
    pub coeffs: DiffCoeffs,
    pub properties: DiffProperties,
    pub mu_xi_lambda: MuXiLambda,
    pub nu: TowerEl,
    pub solutions: Vec<TowerEl>,
    pub kernel: [TowerEl; 4],
    pub boomerang: Option<BoomerangReport>,
}

/// Diagnostics for a θ-indexed quadrinomial.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    q: Quadrinomial,
    solver: LinearizedSolver,
    theta: FieldEl,
    /// `θ^2`, `(θ^2)^(2^k)`, `θ + 1`, `(1 + θ + θ^(2^k))^2`.
    t2: FieldEl,
    t2k: FieldEl,
    t1: FieldEl,
    s2: FieldEl,
}

impl Diagnostics {
    pub fn new(q: &Quadrinomial) -> Result<Self> {
        let theta = q
            .theta()
            .ok_or_else(|| Error::InvalidParams("diagnostics need the θ-indexed form".into()))?;
        let t = q.tower();
        let f = t.base();
        let k = q.k();
        let t2 = f.square(theta);
        let s = 1 ^ theta ^ f.frob_pow(theta, k);
        Ok(Diagnostics {
            q: q.clone(),
            solver: LinearizedSolver::new(t, k)?,
            theta,
            t2,
            t2k: f.frob_pow(t2, k),
            t1: theta ^ 1,
            s2: f.square(s),
        })
    }

    pub fn quadrinomial(&self) -> &Quadrinomial {
        &self.q
    }

    pub fn solver(&self) -> &LinearizedSolver {
        &self.solver
    }

    fn t(&self) -> &TowerCtx {
        self.q.tower()
    }

    fn f(&self) -> &FieldCtx {
        self.q.tower().base()
    }

    fn k(&self) -> u32 {
        self.q.k()
    }

    pub fn diff_coeffs(&self, a: TowerEl, b: TowerEl) -> Result<DiffCoeffs> {
        if a.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let t = self.t();
        let [c1, c2, c3, c4] = self.q.c();
        let ak = t.frob_pow(a, self.k());
        let abk = t.bar(ak);
        let ak1 = t.mul(ak, a);
        let abk1 = t.bar(ak1);
        let a_abk = t.mul(a, abk);
        let ak_ab = t.bar(a_abk);
        let tau = [
            t.scale(c2, abk1) + t.scale(c4, a_abk),
            t.scale(c1, ak1) + t.scale(c3, ak_ab),
            t.scale(c2, abk1) + t.scale(c3, ak_ab),
            t.scale(c1, ak1) + t.scale(c4, a_abk),
            self.q.eval(a) + b,
        ];
        let bar = |z| t.bar(z);
        let v = [
            t.mul(tau[0], bar(tau[0])) + t.mul(tau[1], bar(tau[1])),
            t.mul(tau[0], bar(tau[3])) + t.mul(bar(tau[1]), tau[2]),
            t.mul(tau[0], bar(tau[2])) + t.mul(bar(tau[1]), tau[3]),
            t.mul(tau[0], bar(tau[4])) + t.mul(bar(tau[1]), tau[4]),
        ];
        Ok(DiffCoeffs { tau, v })
    }

    pub fn properties(&self, dc: &DiffCoeffs, b: TowerEl) -> DiffProperties {
        let t = self.t();
        let [t1, t2, t3, t4, t5] = dc.tau;
        let [v1, v2, v3, v4] = dc.v;
        let zero = TowerEl::ZERO;
        DiffProperties {
            v_sum: v1 + v2 + v3 == zero,
            tau_sums: t1 + t2 == t3 + t4 && t3 + t4 == t5 + b,
            v4_relation: v4 == v1 + t.mul(t1, t.bar(b)) + t.mul(t.bar(t2), b),
            bilinear: [
                t.mul(t1, t.bar(v3)) + t.mul(t2, v2) + t.mul(t3, v1) == zero,
                t.mul(t1, t.bar(v2)) + t.mul(t2, v3) + t.mul(t4, v1) == zero,
                t.mul(t1, t.bar(v4)) + t.mul(t2, v4) + t.mul(t5, v1) == zero,
            ],
            v1_nonzero: !v1.is_zero(),
            v1_real: v1.in_base(),
        }
    }

    /// `(τ1 conj(b) + conj(τ2) b) / v1 + 1`.
    pub fn reduced_nu(&self, dc: &DiffCoeffs, b: TowerEl) -> Result<TowerEl> {
        let t = self.t();
        let num = t.mul(dc.tau[0], t.bar(b)) + t.mul(t.bar(dc.tau[1]), b);
        Ok(t.div(num, dc.v[0])? + TowerEl::ONE)
    }

    /// `(μ, ν)` of the reduced equation in direction `a`.
    pub fn reduced_mu_nu(&self, a: TowerEl, b: TowerEl) -> Result<(TowerEl, TowerEl)> {
        let dc = self.diff_coeffs(a, b)?;
        let mu = self.t().div(dc.v[1], dc.v[0])?;
        Ok((mu, self.reduced_nu(&dc, b)?))
    }

    /// `(θ + 1)(γ + conj(γ)) + θ^2` for `γ = conj(z)/z`.
    fn xi_numerator(&self, gamma: TowerEl) -> FieldEl {
        let f = self.f();
        f.mul(self.t1, self.t().trace_rel(gamma)) ^ self.t2
    }

    /// `μ` from `θ` and `γ` alone.
    pub fn mu_closed(&self, gamma: TowerEl) -> Result<TowerEl> {
        let t = self.t();
        let f = self.f();
        let k = self.k();
        let c0 = f.mul(self.t2, 1 ^ f.frob_pow(self.theta, k));
        let c1 = f.mul(self.t2k, self.t1);
        let c2 = f.square(f.pow_2k1(self.t1, k) ^ 1);
        let num = t.scale(c0, t.frob_pow(gamma, k)) + t.scale(c1, gamma) + TowerEl::base(c2);
        let den = f.mul(self.t2k, self.xi_numerator(gamma));
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(t.scale(f.inv(den)?, num))
    }

    fn xi_closed(&self, gamma: TowerEl) -> FieldEl {
        self.f().div(self.xi_numerator(gamma), self.t2).expect("theta is nonzero")
    }

    /// `(1 + θ) γ / θ^2 + 1/θ^2 + ω`.
    fn lambda_closed(&self, gamma: TowerEl) -> TowerEl {
        let f = self.f();
        let it2 = f.inv(self.t2).expect("theta is nonzero");
        self.t().scale(f.mul(self.t1, it2), gamma) + TowerEl::base(it2) + TowerEl::OMEGA
    }

    pub fn mu_xi_lambda(&self, a: TowerEl) -> Result<MuXiLambda> {
        let t = self.t();
        let (mu_from_v, _) = self.reduced_mu_nu(a, TowerEl::ZERO)?;
        let gamma = t.div(t.bar(a), a)?;
        Ok(MuXiLambda {
            mu: self.mu_closed(gamma)?,
            mu_from_v,
            xi: self.xi_closed(gamma),
            lambda: self.lambda_closed(gamma),
            gamma,
        })
    }

    /// `λ^(2^k) + λ = μξ`, `λ + conj(λ) = ξ`, `1 + μ + conj(μ) = ξ^(2^k - 1)`
    /// and agreement of both `μ` routes.
    pub fn mxl_holds(&self, mxl: &MuXiLambda) -> bool {
        let t = self.t();
        let f = self.f();
        let k = self.k();
        let rel = 1 ^ t.trace_rel(mxl.mu);
        mxl.mu == mxl.mu_from_v
            && rel != 0
            && f.pow(mxl.xi, (1u64 << k) - 1) == rel
            && self.solver.xi_of(rel) == mxl.xi
            && t.frob_pow(mxl.lambda, k) + mxl.lambda == t.scale(mxl.xi, mxl.mu)
            && t.trace_rel(mxl.lambda) == mxl.xi
    }

    /// All `x` with `F(x + a) + F(x) = b`, through the linearized solver.
    pub fn solve_difference(&self, a: TowerEl, b: TowerEl) -> Result<Vec<TowerEl>> {
        let (mu, nu) = self.reduced_mu_nu(a, b)?;
        let t = self.t();
        let mut roots: Vec<_> = self.solver.solve(mu, nu).into_iter().map(|x| t.mul(a, x)).collect();
        roots.sort();
        Ok(roots)
    }

    /// `τ1 conj(x)^(2^k) + τ2 x^(2^k) + τ3 conj(x) + τ4 x + τ5`.
    pub fn substituted_eval(&self, dc: &DiffCoeffs, x: TowerEl) -> TowerEl {
        let t = self.t();
        let xk = t.frob_pow(x, self.k());
        let [t1, t2, t3, t4, t5] = dc.tau;
        t.mul(t1, t.bar(xk)) + t.mul(t2, xk) + t.mul(t3, t.bar(x)) + t.mul(t4, x) + t5
    }

    /// Whether the substituted and the reduced equation have the same roots,
    /// by exhaustive evaluation.
    pub fn reduction_roots_agree(&self, a: TowerEl, b: TowerEl) -> Result<bool> {
        let dc = self.diff_coeffs(a, b)?;
        let t = self.t();
        let mu = t.div(dc.v[1], dc.v[0])?;
        let nu = self.reduced_nu(&dc, b)?;
        Ok(t.elements().all(|x| {
            self.substituted_eval(&dc, x).is_zero() == self.solver.eval(mu, nu, x).is_zero()
        }))
    }

    /// `η_a = aλ`.
    pub fn eta(&self, a: TowerEl) -> Result<TowerEl> {
        if a.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let t = self.t();
        Ok(t.mul(a, self.lambda_closed(t.div(t.bar(a), a)?)))
    }

    /// `{0, a, η_a, a + η_a}`, the zeros of `x -> F(x + a) + F(x) + F(a)`.
    pub fn kernel_h(&self, a: TowerEl) -> Result<[TowerEl; 4]> {
        let eta = self.eta(a)?;
        Ok([TowerEl::ZERO, a, eta, a + eta])
    }

    /// `(θ + 1)(z^2 + conj(z)^2) + θ^2 z conj(z)`.
    pub fn e_eval(&self, z: TowerEl) -> FieldEl {
        let t = self.t();
        let f = self.f();
        let s = t.trace_rel(z);
        f.mul(self.t1, f.square(s)) ^ f.mul(self.t2, t.norm(z))
    }

    /// `(1 + θ) conj(z) / θ^2 + (1/θ^2 + ω) z`.
    pub fn phi(&self, z: TowerEl) -> TowerEl {
        let t = self.t();
        let f = self.f();
        let it2 = f.inv(self.t2).expect("theta is nonzero");
        t.scale(f.mul(self.t1, it2), t.bar(z)) + t.mul(TowerEl::new(it2, 1), z)
    }

    /// `conj(φ(z))^(2^k) (c2 conj(z) + c4 z) + φ(z)^(2^k) (c1 z + c3 conj(z))`.
    pub fn h_eval(&self, z: TowerEl) -> TowerEl {
        let t = self.t();
        let [c1, c2, c3, c4] = self.q.c();
        let pk = t.frob_pow(self.phi(z), self.k());
        let zb = t.bar(z);
        t.mul(t.bar(pk), t.scale(c2, zb) + t.scale(c4, z)) + t.mul(pk, t.scale(c1, z) + t.scale(c3, zb))
    }

    /// `ν_z` from its explicit fraction.
    fn nu_closed(&self, z: TowerEl, b: TowerEl) -> Result<TowerEl> {
        let t = self.t();
        let f = self.f();
        let [c1, c2, c3, c4] = self.q.c();
        let zb = t.bar(z);
        let num = t.mul(t.scale(c1, zb) + t.scale(c3, z), b) + t.mul(t.scale(c2, zb) + t.scale(c4, z), t.bar(b));
        let d = f.mul(f.mul(self.t2k, self.s2), self.e_eval(z));
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        let den = t.scale(d, t.frob_pow(z, self.k()));
        Ok(t.div(num, den)? + TowerEl::ONE)
    }

    /// `Tr_n(w conj(b) / ((1 + θ + θ^(2^k))^2 E^(2^k+1)))`.
    fn closed_trace(&self, w: TowerEl, b: TowerEl, e: FieldEl) -> u8 {
        let t = self.t();
        let f = self.f();
        let den = f.mul(self.s2, f.pow_2k1(e, self.k()));
        let arg = t.scale(f.inv(den).expect("denominator is nonzero"), t.mul(w, t.bar(b)));
        t.trace_abs_n(arg)
    }

    fn z_trace(&self, z: TowerEl, b: TowerEl) -> Result<ZTrace> {
        let t = self.t();
        let f = self.f();
        let k = self.k();
        let gamma = t.div(t.bar(z), z)?;
        let mu = self.mu_closed(gamma)?;
        let nu = self.nu_closed(z, b)?;
        let (mu_r, nu_r) = self.reduced_mu_nu(z, b)?;
        let xi = self.xi_closed(gamma);
        let lambda = self.lambda_closed(gamma);
        let lambda_ok = t.frob_pow(lambda, k) + lambda == t.scale(xi, mu) && t.trace_rel(lambda) == xi;
        let xik = f.frob_pow(xi, k);
        let delta = f.div(t.trace_rel(nu), xik)?;
        let second = t.scale(f.inv(xik)?, t.mul(t.frob_pow(lambda, k), t.bar(nu)));
        let e = self.e_eval(z);
        Ok(ZTrace {
            z,
            mu,
            nu,
            matches_reduction: mu == mu_r && nu == nu_r,
            xi,
            lambda,
            lambda_ok,
            e,
            delta_trace: f.trace_abs(delta),
            delta_trace_closed: self.closed_trace(self.q.eval(z), b, e),
            second_trace: t.trace_abs_n(second),
            second_trace_closed: self.closed_trace(self.h_eval(z), b, e) ^ 1,
            solver_count: self.solver.classify(mu, nu).count,
            solutions: self.solve_difference(z, b)?,
        })
    }

    pub fn boomerang_traces(&self, a: TowerEl, b: TowerEl) -> Result<BoomerangReport> {
        if a.is_zero() {
            return Err(Error::ZeroDirection);
        }
        if b.is_zero() {
            return Err(Error::ZeroB);
        }
        let [_, _, eta, ae] = self.kernel_h(a)?;
        let per_z = [a, eta, ae].into_iter().map(|z| self.z_trace(z, b)).collect::<Result<Vec<_>>>()?;
        let es: Vec<FieldEl> = per_z.iter().map(|z| z.e).collect();
        let q = &self.q;
        Ok(BoomerangReport {
            a,
            b,
            eta,
            delta_trace_sum: per_z.iter().fold(0, |acc, z| acc ^ z.delta_trace),
            f_sum_zero: (q.eval(a) + q.eval(eta) + q.eval(ae)).is_zero(),
            e_invariant: es[0] != 0 && es.iter().all(|&e| e == es[0]),
            s_f: per_z.iter().map(|z| z.solutions.len()).sum(),
            per_z,
        })
    }

    /// Everything the command line reports for one `(a, b)`.
    pub fn report(&self, a: TowerEl, b: TowerEl) -> Result<DifferenceReport> {
        let coeffs = self.diff_coeffs(a, b)?;
        Ok(DifferenceReport {
            a,
            b,
            properties: self.properties(&coeffs, b),
            nu: self.reduced_nu(&coeffs, b)?,
            coeffs,
            mu_xi_lambda: self.mu_xi_lambda(a)?,
            solutions: self.solve_difference(a, b)?,
            kernel: self.kernel_h(a)?,
            boomerang: if b.is_zero() { None } else { Some(self.boomerang_traces(a, b)?) },
        })
    }
}
