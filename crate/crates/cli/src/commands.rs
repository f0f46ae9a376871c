use std::path::{Path, PathBuf};
use std::time::Instant;

use butterfly_bct::analysis::{
    self, baseline_family, check_scale, find_binomial_gamma, BaselineFamily, Mode, SBoxTable, SpectrumKind,
    SpectrumTable,
};
use butterfly_bct::butterfly::{ButterflyParams, Quadrinomial};
use butterfly_bct::diagnostics::Diagnostics;
use butterfly_bct::field::{FieldCtx, FieldEl};
use butterfly_bct::solvers::LinearizedSolver;
use butterfly_bct::tower::{parse_hex_u64, TowerCtx, TowerEl};
use butterfly_bct::verify::{all_pass, run_suite, Suite, VerifyConfig};
use butterfly_bct::{Error, Exec};
use serde_json::{json, Value};

use crate::args::*;
use crate::manifest::{manifest, manifest_path, out_dir, write_json, write_text};
use crate::{CliError, Outcome};

type CmdResult = Result<Outcome, CliError>;

pub fn run(cli: &Cli) -> CmdResult {
    let dir = out_dir(cli.out_dir.as_deref());
    match &cli.command {
        Command::Build(a) => build(a, &dir, cli.threads),
        Command::Analyze(a) => analyze(a, &dir, cli.threads),
        Command::Diagnose(a) => diagnose(a, cli.threads),
        Command::SolveL(a) => solve_l(a),
        Command::Verify(a) => verify(a, cli.threads),
        Command::Bench(a) => bench(a),
    }
}

fn tower(field: &FieldArgs) -> Result<TowerCtx, CliError> {
    let modulus = match field.modulus.trim() {
        "default" => None,
        s => Some(parse_hex_u64(s)?),
    };
    Ok(TowerCtx::with_modulus(field.m, modulus)?)
}

fn field_el(f: &FieldCtx, s: &str, what: &str) -> Result<FieldEl, CliError> {
    let v = parse_hex_u64(s)?;
    if v >= f.size() {
        return Err(CliError::Usage(format!("{what} = {s} is outside GF(2^{})", f.m())));
    }
    Ok(v as FieldEl)
}

fn hex(v: u64) -> String {
    format!("{v:#x}")
}

fn el_hex(t: &TowerCtx, z: TowerEl) -> String {
    format!("0x{}", t.to_hex(z))
}

fn field_params(t: &TowerCtx) -> Value {
    json!({ "m": t.m(), "n": t.n(), "modulus": hex(t.base().modulus()) })
}

fn print_json(v: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("json values serialize");
    // a closed pipe downstream is not an error
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn build(a: &BuildArgs, dir: &Path, threads: Option<usize>) -> CmdResult {
    let t = tower(&a.field)?;
    let f = t.base();
    let mut params = json!({
        "family": a.family.name(),
        "field": field_params(&t),
        "k": a.k,
        "threads": threads,
    });
    let table: SBoxTable = match a.family {
        Family::ButterflyClosed | Family::ButterflyOpen | Family::Univariate => {
            if a.family == Family::Univariate {
                let theta = a.theta.as_deref().ok_or_else(|| CliError::Usage("--theta is required".into()))?;
                let q = Quadrinomial::new(&t, a.k, field_el(f, theta, "theta")?)?;
                params["theta"] = json!(hex(q.theta().unwrap_or(0) as u64));
                params["k_odd"] = json!(q.k());
                params["c"] = json!(q.c().iter().map(|&c| hex(c as u64)).collect::<Vec<_>>());
                q.table()
            } else {
                let p = match (&a.theta, &a.alpha, &a.beta) {
                    (Some(th), None, None) => ButterflyParams::from_theta(&t, a.k, field_el(f, th, "theta")?)?,
                    (None, Some(al), Some(be)) => ButterflyParams::from_alpha_beta(
                        &t,
                        a.k,
                        field_el(f, al, "alpha")?,
                        field_el(f, be, "beta")?,
                    )?,
                    _ => return Err(CliError::Usage("give either --theta or both --alpha and --beta".into())),
                };
                params["theta"] = json!(p.theta().map(|v| hex(v as u64)));
                params["alpha"] = json!(hex(p.alpha() as u64));
                params["beta"] = json!(hex(p.beta() as u64));
                params["condition_holds"] = json!(p.condition_holds());
                if a.family == Family::ButterflyClosed {
                    p.closed_butterfly_table()
                } else {
                    p.open_butterfly_table()
                }
            }
        }
        Family::Inverse => baseline_family(&t, BaselineFamily::Inverse)?,
        Family::Gold => {
            let i = a.i.ok_or_else(|| Error::InvalidFamilyParams("--i is required for family 2".into()))?;
            params["i"] = json!(i);
            baseline_family(&t, BaselineFamily::Gold { i })?
        }
        Family::Binomial => {
            let gamma = match a.gamma.as_deref() {
                Some("auto") => t.encode(
                    find_binomial_gamma(&t)
                        .ok_or_else(|| Error::InvalidFamilyParams("no admissible gamma exists".into()))?,
                ),
                Some(s) => parse_hex_u64(s)?,
                None => {
                    return Err(Error::InvalidFamilyParams(
                        "--gamma is required for family 3 (hex, or `auto`)".into(),
                    )
                    .into())
                }
            };
            params["gamma"] = json!(hex(gamma));
            baseline_family(&t, BaselineFamily::Binomial { gamma })?
        }
    };
    params["is_permutation"] = json!(table.is_permutation());
    let path = match &a.output {
        Some(p) => p.clone(),
        None => dir.join(format!("{}-m{}-k{}.tbl", a.family.name(), t.m(), a.k)),
    };
    write_text(&path, &table.to_text())?;
    let man = manifest("build", params, std::slice::from_ref(&path));
    write_json(&manifest_path(&path), &man)?;
    print_json(&man);
    Ok(Outcome::Ok)
}

fn spectrum_kind(s: SpectrumArg) -> SpectrumKind {
    match s {
        SpectrumArg::Ddt => SpectrumKind::Ddt,
        SpectrumArg::Bct => SpectrumKind::Bct,
        SpectrumArg::BctLqsl => SpectrumKind::BctLqsl,
        SpectrumArg::Walsh => SpectrumKind::Walsh,
    }
}

fn compute(kind: SpectrumKind, t: &SBoxTable, mode: Mode) -> butterfly_bct::Result<SpectrumTable> {
    let exec = Exec::Parallel;
    match kind {
        SpectrumKind::Ddt => analysis::ddt_with(t, mode, exec),
        SpectrumKind::Bct => analysis::bct_with(t, mode, exec),
        SpectrumKind::BctLqsl => analysis::lqsl_table_with(t, mode, exec),
        SpectrumKind::Walsh => analysis::walsh_with(t, mode, exec),
    }
}

fn export_json(s: &SpectrumTable) -> Value {
    json!({
        "summary": s.summary(),
        "entries": s.nonzero().iter().map(|&(a, b, v)| [a as i64, b as i64, v]).collect::<Vec<_>>(),
    })
}

fn analyze(a: &AnalyzeArgs, dir: &Path, threads: Option<usize>) -> CmdResult {
    let text = std::fs::read_to_string(&a.input)?;
    let table = SBoxTable::parse(&text)?;
    let n = table.n();
    let mode = match a.mode {
        ModeArg::Full => Mode::Full,
        ModeArg::MaxOnly => Mode::MaxOnly,
        ModeArg::Sampled => Mode::Sampled { seed: a.seed, count: a.samples },
    };
    let explicit = !a.spectra.is_empty();
    let kinds: Vec<SpectrumKind> = if explicit {
        a.spectra.iter().map(|&s| spectrum_kind(s)).collect()
    } else {
        vec![SpectrumKind::Ddt, SpectrumKind::Bct, SpectrumKind::BctLqsl, SpectrumKind::Walsh]
    };
    for &kind in &kinds {
        check_scale(kind, n, mode, a.budget)?;
    }
    let permutation = table.is_permutation();
    let stem = a.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "table".into());
    let mut outputs: Vec<PathBuf> = Vec::new();
    let mut summaries = Vec::new();
    let mut skipped = Vec::new();
    for kind in kinds {
        let needs_perm = matches!(kind, SpectrumKind::Bct | SpectrumKind::BctLqsl);
        if needs_perm && !permutation {
            if explicit {
                return Err(Error::NotAPermutation.into());
            }
            skipped.push(kind.name());
            continue;
        }
        let s = compute(kind, &table, mode)?;
        let base = format!("{stem}.{}", kind.name());
        if mode != Mode::MaxOnly {
            let path = match a.format {
                Format::Csv => {
                    let p = dir.join(format!("{base}.csv"));
                    write_text(&p, &s.to_csv())?;
                    p
                }
                Format::Json => {
                    let p = dir.join(format!("{base}.json"));
                    write_json(&p, &export_json(&s))?;
                    p
                }
            };
            outputs.push(path);
        }
        let summary = serde_json::to_value(s.summary())?;
        let spath = dir.join(format!("{base}.summary.json"));
        write_json(&spath, &summary)?;
        outputs.push(spath);
        summaries.push(summary);
    }
    let params = json!({
        "input": a.input.display().to_string(),
        "n": n,
        "is_permutation": permutation,
        "mode": mode.name(),
        "seed": mode.seed(),
        "samples": matches!(mode, Mode::Sampled { .. }).then_some(a.samples),
        "budget_log2": a.budget,
        "format": match a.format { Format::Csv => "csv", Format::Json => "json" },
        "skipped": skipped,
        "threads": threads,
    });
    let man = manifest("analyze", params, &outputs);
    write_json(&manifest_path(&dir.join(format!("{stem}.analyze"))), &man)?;
    print_json(&json!({ "is_permutation": permutation, "skipped": skipped, "spectra": summaries }));
    Ok(Outcome::Ok)
}

fn diagnose(a: &DiagnoseArgs, threads: Option<usize>) -> CmdResult {
    let t = tower(&a.field)?;
    let theta = field_el(t.base(), &a.theta, "theta")?;
    let d = Diagnostics::new(&Quadrinomial::new(&t, a.k, theta)?)?;
    let (za, zb) = (t.parse_hex(&a.a)?, t.parse_hex(&a.b)?);
    let report = d.report(za, zb)?;
    let out = json!({
        "field": field_params(&t),
        "k": d.quadrinomial().k(),
        "theta": hex(theta as u64),
        "a_hex": el_hex(&t, za),
        "b_hex": el_hex(&t, zb),
        "solutions_hex": report.solutions.iter().map(|&z| el_hex(&t, z)).collect::<Vec<_>>(),
        "kernel_hex": report.kernel.iter().map(|&z| el_hex(&t, z)).collect::<Vec<_>>(),
        "report": report,
    });
    if let Some(p) = &a.output {
        write_json(p, &out)?;
        let params = json!({
            "field": field_params(&t), "k": a.k, "theta": hex(theta as u64),
            "a": el_hex(&t, za), "b": el_hex(&t, zb), "threads": threads,
        });
        write_json(&manifest_path(p), &manifest("diagnose", params, std::slice::from_ref(p)))?;
    }
    print_json(&out);
    Ok(Outcome::Ok)
}

fn solve_l(a: &SolveLArgs) -> CmdResult {
    let t = tower(&a.field)?;
    let solver = LinearizedSolver::new(&t, a.k)?;
    let (mu, nu) = (t.parse_hex(&a.mu)?, t.parse_hex(&a.nu)?);
    let c = solver.classify(mu, nu);
    let roots = solver.solve(mu, nu);
    print_json(&json!({
        "field": field_params(&t),
        "k": a.k,
        "mu": el_hex(&t, mu),
        "nu": el_hex(&t, nu),
        "count": c.count,
        "branch": c.branch,
        "xi": hex(c.xi as u64),
        "delta": c.delta.map(|d| hex(d as u64)),
        "lambda": el_hex(&t, c.lambda),
        "roots": roots.iter().map(|&z| el_hex(&t, z)).collect::<Vec<_>>(),
    }));
    Ok(Outcome::Ok)
}

fn verify(a: &VerifyArgs, threads: Option<usize>) -> CmdResult {
    let t = tower(&a.field)?;
    let suite = match a.suite {
        SuiteArg::Theorem => Suite::Theorem,
        SuiteArg::Necessity => Suite::Necessity,
        SuiteArg::OpenButterfly => Suite::OpenButterfly,
        SuiteArg::Lemmas => Suite::Lemmas,
    };
    let thetas = if a.theta.is_empty() {
        None
    } else {
        Some(a.theta.iter().map(|s| field_el(t.base(), s, "theta")).collect::<Result<Vec<_>, _>>()?)
    };
    let cfg = VerifyConfig {
        m: t.m(),
        modulus: Some(t.base().modulus()),
        ks: a.k.clone(),
        thetas,
        seed: a.seed,
        samples: a.samples,
        log2_budget: a.budget,
        exec: Exec::Parallel,
    };
    let results = run_suite(suite, &cfg)?;
    let out = serde_json::to_value(&results)?;
    if let Some(p) = &a.output {
        write_json(p, &out)?;
        let params = json!({
            "suite": suite.name(), "field": field_params(&t), "k": a.k,
            "theta": cfg.thetas.as_ref().map(|v| v.iter().map(|&x| hex(x as u64)).collect::<Vec<_>>()),
            "samples": a.samples, "seed": a.seed, "budget_log2": a.budget, "threads": threads,
        });
        write_json(&manifest_path(p), &manifest("verify", params, std::slice::from_ref(p)))?;
    }
    print_json(&out);
    Ok(if all_pass(&results) { Outcome::Ok } else { Outcome::VerificationFailed })
}

fn timed<R>(f: impl FnOnce() -> R) -> (R, f64) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed().as_secs_f64())
}

fn bench(a: &BenchArgs) -> CmdResult {
    let mut rows = Vec::new();
    for &n in &a.n {
        if n % 2 != 0 {
            return Err(CliError::Usage(format!("n = {n} must be even")));
        }
        check_scale(SpectrumKind::Bct, n, Mode::Full, a.budget)?;
        let t = TowerCtx::with_modulus(n / 2, None)?;
        let f = t.base();
        let muls = 1u32 << 20;
        let (acc, mul_s) = timed(|| {
            let mut acc: FieldEl = 1;
            for i in 0..muls {
                acc = f.mul(acc ^ (i & (f.size() as u32 - 1)), 0b10 | acc);
            }
            acc
        });
        std::hint::black_box(acc);
        let q = Quadrinomial::new(&t, 1, 0b10)?;
        let (table, build_s) = timed(|| q.table());
        let (d, ddt_s) = timed(|| analysis::ddt(&table, Mode::Full));
        let (b, bct_s) = timed(|| analysis::bct(&table, Mode::Full));
        let (l, lqsl_s) = timed(|| analysis::lqsl_table(&table, Mode::MaxOnly));
        let (d, b, l) = (d?, b?, l?);
        let entries = (table.len() * table.len()) as f64;
        rows.push(json!({
            "n": n,
            "field_mul_per_s": muls as f64 / mul_s,
            "table_build_s": build_s,
            "ddt_full_s": ddt_s,
            "bct_full_s": bct_s,
            "bct_entries_per_s": entries / bct_s,
            "bct_lqsl_max_s": lqsl_s,
            "delta": d.max,
            "beta": b.max,
            "beta_lqsl": l.max,
        }));
    }
    print_json(&json!({ "threads": rayon::current_num_threads(), "results": rows }));
    Ok(Outcome::Ok)
}
