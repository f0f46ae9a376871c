//! Verification suites. Each returns one [`CheckResult`] per claim and
//! scope; a failing check carries the first counterexample found.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    bct, SBoxTable, boomerang_uniformity_lqsl, check_scale, ddt, nonlinearity, Mode, SpectrumKind, DEFAULT_LOG2_BUDGET,
};
use crate::butterfly::{theta_of_pair, ButterflyParams, Quadrinomial};
use crate::diagnostics::Diagnostics;
use crate::error::{Error, Result};
use crate::field::FieldEl;
use crate::par::{map_range, Exec};
use crate::solvers::LinearizedSolver;
use crate::tower::{TowerCtx, TowerEl};

/// Largest `n` for which suites compute full spectra.
pub const MAX_VERIFY_N: u32 = 10;

/// Largest `n` for which the lemma suite enumerates instead of sampling.
pub const EXHAUSTIVE_LEMMA_N: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub scope: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckResult {
    fn new(check: &str, scope: String, failure: Option<String>) -> Self {
        CheckResult { check: check.to_string(), scope, pass: failure.is_none(), counterexample: failure }
    }
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Theorem,
    Necessity,
    OpenButterfly,
    Lemmas,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem => "theorem",
            Suite::Necessity => "necessity",
            Suite::OpenButterfly => "open-butterfly",
            Suite::Lemmas => "lemmas",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub m: u32,
    pub modulus: Option<u64>,
    pub ks: Vec<u32>,
    /// `None` means every nonzero θ.
    pub thetas: Option<Vec<FieldEl>>,
    pub seed: u64,
    pub samples: usize,
    pub log2_budget: f64,
    pub exec: Exec,
}

impl VerifyConfig {
    pub fn new(m: u32) -> Self {
        VerifyConfig {
            m,
            modulus: None,
            ks: vec![1],
            thetas: None,
            seed: 0,
            samples: 1000,
            log2_budget: DEFAULT_LOG2_BUDGET,
            exec: Exec::default(),
        }
    }

    fn thetas(&self) -> Vec<FieldEl> {
        self.thetas.clone().unwrap_or_else(|| (1..1u32 << self.m).collect())
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let tower = TowerCtx::with_modulus(cfg.m, cfg.modulus)?;
    match suite {
        Suite::Theorem => theorem_suite(&tower, cfg),
        Suite::Necessity => necessity_suite(&tower, cfg),
        Suite::OpenButterfly => open_butterfly_suite(&tower, cfg),
        Suite::Lemmas => lemma_suite(&tower, cfg),
    }
}

fn require_desk_scale(tower: &TowerCtx, cfg: &VerifyConfig) -> Result<()> {
    let n = tower.n();
    if n > MAX_VERIFY_N {
        return Err(Error::ScaleRefusal(format!(
            "full spectra are verified only for n <= {MAX_VERIFY_N} (n = {n}); use analyze --mode sampled"
        )));
    }
    check_scale(SpectrumKind::Bct, n, Mode::MaxOnly, cfg.log2_budget)
}

/// First failure among per-instance outcomes.
fn first_failure<T>(items: &[T], f: impl Fn(&T) -> Option<String>) -> Option<String> {
    items.iter().find_map(f)
}

fn hex(v: FieldEl) -> String {
    format!("{v:#x}")
}

fn el(t: &TowerCtx, z: TowerEl) -> String {
    format!("0x{}", t.to_hex(z))
}

struct TheoremRow {
    theta: FieldEl,
    permutation: bool,
    ddt_values_ok: bool,
    delta: i64,
    beta: i64,
    beta_lqsl: i64,
    /// `(δ, β)` of the closed butterfly, when θ yields a pair.
    closed: Option<(i64, i64)>,
}

/// Permutation, δ = 4 and β = 4 for every θ, plus agreement with the
/// bivariate closed butterfly.
pub fn theorem_suite(tower: &TowerCtx, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    require_desk_scale(tower, cfg)?;
    let thetas = cfg.thetas();
    let mut out = Vec::new();
    for &k in &cfg.ks {
        let rows = map_range(cfg.exec, thetas.len(), |i| -> Result<TheoremRow> {
            let theta = thetas[i];
            let q = Quadrinomial::new(tower, k, theta)?;
            let t = q.table_with(Exec::Sequential);
            let permutation = t.is_permutation();
            let d = ddt(&t, Mode::Full)?;
            let ddt_values_ok = d.nonzero().iter().all(|&(a, _, v)| a == 0 || v == 4);
            let (beta, beta_lqsl) = if permutation {
                (bct(&t, Mode::MaxOnly)?.max, boomerang_uniformity_lqsl(&t)? as i64)
            } else {
                (-1, -1)
            };
            let closed = match ButterflyParams::from_theta(tower, k, theta) {
                Ok(p) => {
                    let v = p.closed_butterfly_table_with(Exec::Sequential);
                    let b = if v.is_permutation() { bct(&v, Mode::MaxOnly)?.max } else { -1 };
                    Some((ddt(&v, Mode::MaxOnly)?.max, b))
                }
                Err(Error::ThetaYieldsTrivialPair) => None,
                Err(e) => return Err(e),
            };
            Ok(TheoremRow { theta, permutation, ddt_values_ok, delta: d.max, beta, beta_lqsl, closed })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let scope = format!("m={} k={k} theta: {} values", tower.m(), rows.len());
        out.push(CheckResult::new(
            "permutation",
            scope.clone(),
            first_failure(&rows, |r| (!r.permutation).then(|| format!("theta={}", hex(r.theta)))),
        ));
        out.push(CheckResult::new(
            "ddt-entries-0-or-4",
            scope.clone(),
            first_failure(&rows, |r| (!r.ddt_values_ok).then(|| format!("theta={}", hex(r.theta)))),
        ));
        out.push(CheckResult::new(
            "delta=4",
            scope.clone(),
            first_failure(&rows, |r| (r.delta != 4).then(|| format!("theta={} delta={}", hex(r.theta), r.delta))),
        ));
        out.push(CheckResult::new(
            "beta=4 (definitional)",
            scope.clone(),
            first_failure(&rows, |r| (r.beta != 4).then(|| format!("theta={} beta={}", hex(r.theta), r.beta))),
        ));
        out.push(CheckResult::new(
            "beta=4 (pair count)",
            scope.clone(),
            first_failure(&rows, |r| {
                (r.beta_lqsl != 4).then(|| format!("theta={} beta={}", hex(r.theta), r.beta_lqsl))
            }),
        ));
        out.push(CheckResult::new(
            "closed butterfly matches",
            scope,
            first_failure(&rows, |r| match r.closed {
                Some((d, b)) if (d, b) != (r.delta, r.beta) => {
                    Some(format!("theta={} closed delta={d} beta={b}", hex(r.theta)))
                }
                _ => None,
            }),
        ));
    }
    Ok(out)
}

/// Every raw pair `(α, β)` outside GF(2): the closed butterfly is a
/// permutation exactly when the pair condition holds.
pub fn necessity_suite(tower: &TowerCtx, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    require_desk_scale(tower, cfg)?;
    let f = tower.base();
    let size = f.size() as u32;
    let pairs: Vec<(FieldEl, FieldEl)> = (2..size).flat_map(|a| (2..size).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for &k in &cfg.ks {
        let rows = map_range(cfg.exec, pairs.len(), |i| -> Result<(FieldEl, FieldEl, bool, bool)> {
            let (a, b) = pairs[i];
            let p = ButterflyParams::from_alpha_beta(tower, k, a, b)?;
            Ok((a, b, p.condition_holds(), p.closed_butterfly_table_with(Exec::Sequential).is_permutation()))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let satisfied = rows.iter().filter(|r| r.2).count();
        let scope = format!("m={} k={k}: {} pairs, {satisfied} satisfy the condition", tower.m(), rows.len());
        out.push(CheckResult::new(
            "permutation iff condition",
            scope.clone(),
            first_failure(&rows, |&(a, b, c, p)| {
                (c != p).then(|| format!("alpha={} beta={} condition={c} permutation={p}", hex(a), hex(b)))
            }),
        ));
        out.push(CheckResult::new(
            "theta parametrization covers condition pairs",
            scope,
            first_failure(&rows, |&(a, b, c, _)| {
                (c && theta_of_pair(f, a, b).is_none()).then(|| format!("alpha={} beta={}", hex(a), hex(b)))
            }),
        ));
    }
    Ok(out)
}

/// The open butterfly is an involution for every raw pair, and its
/// boomerang uniformity exceeds 4 for some pair satisfying the condition.
pub fn open_butterfly_suite(tower: &TowerCtx, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    require_desk_scale(tower, cfg)?;
    let f = tower.base();
    let size = f.size() as u32;
    let pairs: Vec<(FieldEl, FieldEl)> = (2..size).flat_map(|a| (2..size).map(move |b| (a, b))).collect();
    let thetas: Vec<FieldEl> = cfg.thetas().into_iter().filter(|&t| t != 1).collect();
    let mut out = Vec::new();
    for &k in &cfg.ks {
        let invol = map_range(cfg.exec, pairs.len(), |i| -> Result<(FieldEl, FieldEl, bool)> {
            let (a, b) = pairs[i];
            let h = ButterflyParams::from_alpha_beta(tower, k, a, b)?.open_butterfly_table_with(Exec::Sequential);
            Ok((a, b, h.compose(&h)? == SBoxTable::identity(h.n())))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        out.push(CheckResult::new(
            "involution",
            format!("m={} k={k}: {} pairs", tower.m(), invol.len()),
            first_failure(&invol, |&(a, b, ok)| (!ok).then(|| format!("alpha={} beta={}", hex(a), hex(b)))),
        ));
        let betas = map_range(cfg.exec, thetas.len(), |i| -> Result<(FieldEl, i64)> {
            let h = ButterflyParams::from_theta(tower, k, thetas[i])?.open_butterfly_table_with(Exec::Sequential);
            Ok((thetas[i], bct(&h, Mode::MaxOnly)?.max))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let best = betas.iter().max_by_key(|r| (r.1, std::cmp::Reverse(r.0)));
        let scope = format!(
            "m={} k={k}: {} valid thetas, max beta={}",
            tower.m(),
            betas.len(),
            best.map_or(-1, |r| r.1)
        );
        let failure = match best {
            Some(&(_, b)) if b > 4 => None,
            _ => Some("no valid instance has beta > 4".to_string()),
        };
        out.push(CheckResult::new("beta > 4 for some valid instance", scope, failure));
    }
    Ok(out)
}

/// Work items for the lemma suite: every `(θ, a, b)` at small `n`, seeded
/// samples otherwise.
fn lemma_items(tower: &TowerCtx, cfg: &VerifyConfig, with_b: bool) -> (Vec<(FieldEl, TowerEl, TowerEl)>, String) {
    let thetas = cfg.thetas();
    let size = tower.size();
    if tower.n() <= EXHAUSTIVE_LEMMA_N {
        let mut items = Vec::new();
        for &th in &thetas {
            for a in 1..size {
                let bs: Box<dyn Iterator<Item = u64>> = if with_b { Box::new(0..size) } else { Box::new(0..1) };
                for b in bs {
                    items.push((th, tower.decode(a), tower.decode(b)));
                }
            }
        }
        let what = if with_b { "all (a, b)" } else { "all a" };
        (items, format!("{} thetas, {what}", thetas.len()))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let items = (0..cfg.samples)
            .map(|_| {
                let th = thetas[rng.random_range(0..thetas.len())];
                let a = tower.decode(rng.random_range(1..size));
                let b = tower.decode(rng.random_range(0..size));
                (th, a, b)
            })
            .collect();
        (items, format!("{} seeded samples, seed {}", cfg.samples, cfg.seed))
    }
}

/// Outcome of the per-`(θ, a, b)` identity checks, as named failures.
fn lemma_failures(d: &Diagnostics, a: TowerEl, b: TowerEl) -> Result<Vec<&'static str>> {
    let t = d.quadrinomial().tower();
    let q = d.quadrinomial();
    let mut fails = Vec::new();
    let dc = d.diff_coeffs(a, b)?;
    let props = d.properties(&dc, b);
    if !props.v1_nonzero {
        fails.push("v1 nonzero");
    }
    if !(props.v_sum && props.tau_sums && props.v4_relation && props.bilinear.iter().all(|&x| x) && props.v1_real) {
        fails.push("coefficient identities");
    }
    if !d.mxl_holds(&d.mu_xi_lambda(a)?) {
        fails.push("mu/xi/lambda closed forms");
    }
    if !d.reduction_roots_agree(a, b)? {
        fails.push("reduction keeps the root set");
    }
    let sols = d.solve_difference(a, b)?;
    let brute: Vec<TowerEl> = t.elements().filter(|&x| q.eval(x + a) + q.eval(x) == b).collect();
    if sols != brute || !(sols.is_empty() || sols.len() == 4) {
        fails.push("difference solutions 0 or 4");
    }
    let [_, _, eta, ae] = d.kernel_h(a)?;
    let e = d.e_eval(a);
    if e == 0 || d.e_eval(eta) != e || d.e_eval(ae) != e || !(q.eval(a) + q.eval(eta) + q.eval(ae)).is_zero() {
        fails.push("E invariant and F sums to zero on Z_a");
    }
    if d.h_eval(a) != q.eval(ae) || d.h_eval(eta) != q.eval(a) || d.h_eval(ae) != q.eval(eta) {
        fails.push("H matches F on Z_a");
    }
    if !b.is_zero() {
        let r = d.boomerang_traces(a, b)?;
        if r.delta_trace_sum != 0 {
            fails.push("delta traces sum to zero");
        }
        if !r.consistent() {
            fails.push("trace criteria and pair count");
        }
    }
    Ok(fails)
}

const LEMMA_CHECKS: [&str; 10] = [
    "v1 nonzero",
    "coefficient identities",
    "mu/xi/lambda closed forms",
    "reduction keeps the root set",
    "difference solutions 0 or 4",
    "E invariant and F sums to zero on Z_a",
    "H matches F on Z_a",
    "delta traces sum to zero",
    "trace criteria and pair count",
    "linearized solver matches enumeration",
];

/// The linearized-equation classification and solver against enumeration.
pub fn solver_checks(tower: &TowerCtx, k: u32, cfg: &VerifyConfig) -> Result<CheckResult> {
    let solver = LinearizedSolver::new(tower, k)?;
    let size = tower.size();
    let pairs: Vec<(u64, u64)> = if tower.n() <= EXHAUSTIVE_LEMMA_N {
        (0..size).flat_map(|mu| (0..size).map(move |nu| (mu, nu))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ k as u64);
        (0..cfg.samples.max(1)).map(|_| (rng.random_range(0..size), rng.random_range(0..size))).collect()
    };
    let scope = format!("m={} k={k}: {} (mu, nu) pairs", tower.m(), pairs.len());
    let fails = map_range(cfg.exec, pairs.len(), |i| {
        let (mu, nu) = (tower.decode(pairs[i].0), tower.decode(pairs[i].1));
        let brute: Vec<TowerEl> = tower.elements().filter(|&x| solver.eval(mu, nu, x).is_zero()).collect();
        let c = solver.classify(mu, nu).count as usize;
        let roots = solver.solve(mu, nu);
        (roots != brute || c != brute.len() || ![0, 2, 4].contains(&c))
            .then(|| format!("mu={} nu={} count={} classified={c}", el(tower, mu), el(tower, nu), brute.len()))
    });
    Ok(CheckResult::new(LEMMA_CHECKS[9], scope, fails.into_iter().flatten().next()))
}

pub fn lemma_suite(tower: &TowerCtx, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    require_desk_scale(tower, cfg)?;
    let mut out = Vec::new();
    for &k in &cfg.ks {
        out.push(solver_checks(tower, k, cfg)?);
        let diags = cfg
            .thetas()
            .into_iter()
            .map(|th| Ok((th, Diagnostics::new(&Quadrinomial::new(tower, k, th)?)?)))
            .collect::<Result<Vec<_>>>()?;
        let (items, what) = lemma_items(tower, cfg, true);
        let outcomes = map_range(cfg.exec, items.len(), |i| {
            let (th, a, b) = items[i];
            let d = &diags.iter().find(|(t, _)| *t == th).expect("theta present").1;
            lemma_failures(d, a, b).map(|f| (th, a, b, f))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let scope = format!("m={} k={k}: {what}", tower.m());
        for name in &LEMMA_CHECKS[..9] {
            let failure = outcomes.iter().find(|o| o.3.contains(name)).map(|(th, a, b, _)| {
                format!("theta={} a={} b={}", hex(*th), el(tower, *a), el(tower, *b))
            });
            out.push(CheckResult::new(name, scope.clone(), failure));
        }
    }
    Ok(out)
}

/// Nonlinearity of the quadrinomial, for reporting.
pub fn quadrinomial_nonlinearity(tower: &TowerCtx, k: u32, theta: FieldEl) -> Result<u32> {
    Ok(nonlinearity(&Quadrinomial::new(tower, k, theta)?.table()))
}
