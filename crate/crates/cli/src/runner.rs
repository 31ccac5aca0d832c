//! Check execution: dispatch declarations onto the verification pipelines,
//! across a bounded worker pool, with order-stable record assembly.

use crate::report::{summarize, CheckRecord, Report};
use crate::scenario::{print_module, ComplexArg, ResolvedScenario};
use adic_core::adic::{psi_comparison, wpr_check, AdicContext};
use adic_core::modcplx::{tensor_complexes, Complex};
use adic_core::theorems::{
    check_cofiniteness, check_completion_of_torsion, check_diagonal_completed, check_diagonal_fg,
    check_diagonal_torsion, check_mgm_complete_side, check_mgm_torsion_side,
    check_telescope_koszul, check_torsion_completion_invariance, check_torsion_of_completion,
    serre_chi,
    CofinitenessInput, TheoremInstance, Verdict,
};
use adic_core::towers::{pro_iso_check, ProMap, ProModule, TowerStatus};
use adic_core::{FpModule, ModuleMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

pub const DEFAULT_BOUND: u32 = 8;

pub struct RunOptions {
    pub bound_override: Option<u32>,
    pub jobs: usize,
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { bound_override: None, jobs: 1, timings: false }
    }
}

pub fn list_checks() -> Vec<(&'static str, &'static str)> {
    vec![
        ("wpr", "weak proregularity of the context's generating sequence"),
        ("psi", "tensor-against-quotient vs reduction at one level (args: module, level=N)"),
        ("telescope-koszul", "telescope stage vs dual Koszul stage smashed with a module"),
        ("torsion-of-completion", "derived torsion of the derived completion (args: complex)"),
        ("completion-of-torsion", "derived completion of the derived torsion (args: complex)"),
        ("torsion-completion-invariance", "torsion smash invariance for flat complexes"),
        ("mgm-tor", "torsion-side round trip on a certified torsion complex"),
        ("mgm-com", "complete-side round trip on a certified complete complex"),
        ("serre", "intersection multiplicity via both routes (diagonal context, two modules)"),
        ("diagonal-fg", "reduction to the diagonal, finite-length form"),
        ("diagonal-completed", "reduction to the diagonal, completed towers"),
        ("diagonal-torsion", "reduction to the diagonal, torsion-smashed"),
        ("cofiniteness", "ext finiteness vs derived-completion finiteness (arg: ind=SYSTEM)"),
        ("zero-map", "deliberately false comparison: the zero map on a nonzero module"),
    ]
}

fn verdict_string(v: &Verdict) -> (&'static str, String) {
    match v {
        Verdict::Verified => ("verified", String::new()),
        Verdict::Failed(d) => ("failed", d.clone()),
        Verdict::Inconclusive(d) => ("inconclusive", d.clone()),
    }
}

fn record_from_instance(index: usize, inputs: String, inst: TheoremInstance) -> CheckRecord {
    let (verdict, detail) = verdict_string(&inst.verdict);
    CheckRecord {
        index,
        id: inst.id.name().to_string(),
        inputs,
        verdict: verdict.to_string(),
        detail,
        witnesses: inst.trace,
        wall_ms: None,
    }
}

fn complex_arg(rs: &ResolvedScenario, ctx: &AdicContext, arg: &ComplexArg) -> Result<Complex, String> {
    match arg {
        ComplexArg::Module(name) => {
            let m = rs
                .modules
                .get(name)
                .ok_or_else(|| format!("undeclared module `{}`", name))?;
            Ok(Complex::single(m.clone(), 0))
        }
        ComplexArg::Torsion(name, stage) => {
            let m = rs
                .modules
                .get(name)
                .ok_or_else(|| format!("undeclared module `{}`", name))?;
            Ok(tensor_complexes(&ctx.dual_stage(*stage), &Complex::single(m.clone(), 0)))
        }
        ComplexArg::Completion(name, stage) => {
            let m = rs
                .modules
                .get(name)
                .ok_or_else(|| format!("undeclared module `{}`", name))?;
            Ok(tensor_complexes(&ctx.koszul_stage(*stage), &Complex::single(m.clone(), 0)))
        }
    }
}

fn arg_label(arg: &ComplexArg) -> String {
    match arg {
        ComplexArg::Module(n) => n.clone(),
        ComplexArg::Torsion(n, s) => format!("torsion({}, {})", n, s),
        ComplexArg::Completion(n, s) => format!("completion({}, {})", n, s),
    }
}

pub fn execute_check(
    rs: &ResolvedScenario,
    index: usize,
    check: &crate::scenario::CheckDecl,
    default_bound: u32,
) -> CheckRecord {
    let bound = check.bound.unwrap_or(default_bound);
    let inputs = format!(
        "context={} args=[{}] bound={}",
        check.context,
        check.args.iter().map(arg_label).collect::<Vec<_>>().join(", "),
        bound
    );
    let result = execute_inner(rs, check, bound, &inputs, index);
    match result {
        Ok(rec) => rec,
        Err(msg) => CheckRecord {
            index,
            id: check.kind.clone(),
            inputs,
            verdict: "error".to_string(),
            detail: msg,
            witnesses: Vec::new(),
            wall_ms: None,
        },
    }
}

fn execute_inner(
    rs: &ResolvedScenario,
    check: &crate::scenario::CheckDecl,
    bound: u32,
    inputs: &str,
    index: usize,
) -> Result<CheckRecord, String> {
    let kind = check.kind.as_str();
    if let Some(dctx) = rs.diagonals.get(&check.context) {
        let modules: Vec<&FpModule> = check
            .modules
            .iter()
            .map(|n| rs.modules.get(n).ok_or_else(|| format!("undeclared module `{}`", n)))
            .collect::<Result<_, _>>()?;
        if modules.len() != 2 {
            return Err(format!("`{}` needs exactly two modules", kind));
        }
        let (m, n) = (modules[0], modules[1]);
        return match kind {
            "serre" => {
                let chi = serre_chi(dctx, m, n).map_err(|e| e.to_string())?;
                Ok(CheckRecord {
                    index,
                    id: "serre".into(),
                    inputs: inputs.to_string(),
                    verdict: "verified".into(),
                    detail: format!("chi = {}", chi.value),
                    witnesses: vec![
                        format!("direct route lengths {:?}", chi.direct),
                        format!("diagonal route lengths {:?}", chi.diagonal),
                    ],
                    wall_ms: None,
                })
            }
            "diagonal-fg" => {
                let inst = check_diagonal_fg(dctx, m, n, bound).map_err(|e| e.to_string())?;
                Ok(record_from_instance(index, inputs.to_string(), inst))
            }
            "diagonal-completed" => {
                let inst = check_diagonal_completed(dctx, m, n, bound).map_err(|e| e.to_string())?;
                Ok(record_from_instance(index, inputs.to_string(), inst))
            }
            "diagonal-torsion" => {
                let inst = check_diagonal_torsion(dctx, m, n, bound).map_err(|e| e.to_string())?;
                Ok(record_from_instance(index, inputs.to_string(), inst))
            }
            other => Err(format!("check `{}` does not take a diagonal context", other)),
        };
    }

    let ctx = rs
        .contexts
        .get(&check.context)
        .ok_or_else(|| format!("undeclared context `{}`", check.context))?;
    match kind {
        "wpr" => {
            let rep = wpr_check(ctx, bound);
            let witnesses: Vec<String> = rep
                .per_degree
                .iter()
                .map(|(i, r)| format!("degree {}: {:?}", i, r.status))
                .collect();
            Ok(CheckRecord {
                index,
                id: "wpr".into(),
                inputs: inputs.to_string(),
                verdict: if rep.verified { "verified" } else { "inconclusive" }.into(),
                detail: if rep.verified {
                    "all positive-degree stage towers are pro-zero".into()
                } else {
                    "some stage tower not certified pro-zero".into()
                },
                witnesses,
                wall_ms: None,
            })
        }
        "psi" => {
            let name = check
                .modules
                .first()
                .ok_or_else(|| "psi needs a module".to_string())?;
            let m = rs.modules.get(name).ok_or_else(|| format!("undeclared module `{}`", name))?;
            let level = check.level.unwrap_or(1);
            let rep = psi_comparison(m, ctx, level);
            Ok(CheckRecord {
                index,
                id: "psi".into(),
                inputs: inputs.to_string(),
                verdict: if rep.iso { "verified" } else { "failed" }.into(),
                detail: format!("level {} comparison", level),
                witnesses: vec![
                    print_module("tensor_side", &rep.tensor_side.ring().to_string(), &rep.tensor_side),
                    print_module("quotient_side", &rep.quotient_side.ring().to_string(), &rep.quotient_side),
                ],
                wall_ms: None,
            })
        }
        "telescope-koszul" => {
            let name = check
                .modules
                .first()
                .ok_or_else(|| "telescope-koszul needs a module".to_string())?;
            let m = rs.modules.get(name).ok_or_else(|| format!("undeclared module `{}`", name))?;
            let inst = check_telescope_koszul(ctx, m, bound).map_err(|e| e.to_string())?;
            Ok(record_from_instance(index, inputs.to_string(), inst))
        }
        "torsion-of-completion" => {
            let arg = check.args.first().ok_or_else(|| "needs a complex argument".to_string())?;
            let x = complex_arg(rs, ctx, arg)?;
            let inst = check_torsion_of_completion(ctx, &x, bound).map_err(|e| e.to_string())?;
            Ok(record_from_instance(index, inputs.to_string(), inst))
        }
        "completion-of-torsion" => {
            let arg = check.args.first().ok_or_else(|| "needs a complex argument".to_string())?;
            let x = complex_arg(rs, ctx, arg)?;
            let inst = check_completion_of_torsion(ctx, &x, bound).map_err(|e| e.to_string())?;
            Ok(record_from_instance(index, inputs.to_string(), inst))
        }
        "torsion-completion-invariance" => {
            let arg = check.args.first().ok_or_else(|| "needs a complex argument".to_string())?;
            let x = complex_arg(rs, ctx, arg)?;
            let inst =
                check_torsion_completion_invariance(ctx, &x, bound).map_err(|e| e.to_string())?;
            Ok(record_from_instance(index, inputs.to_string(), inst))
        }
        "mgm-tor" => {
            let arg = check.args.first().ok_or_else(|| "needs a complex argument".to_string())?;
            let x = complex_arg(rs, ctx, arg)?;
            let inst = check_mgm_torsion_side(ctx, &x, bound).map_err(|e| e.to_string())?;
            Ok(record_from_instance(index, inputs.to_string(), inst))
        }
        "mgm-com" => {
            let arg = check.args.first().ok_or_else(|| "needs a complex argument".to_string())?;
            let x = complex_arg(rs, ctx, arg)?;
            let inst = check_mgm_complete_side(ctx, &x, bound).map_err(|e| e.to_string())?;
            Ok(record_from_instance(index, inputs.to_string(), inst))
        }
        "cofiniteness" => {
            let input = if let Some(w) = &check.ind {
                let (sys, label) = rs
                    .inds
                    .get(w)
                    .ok_or_else(|| format!("undeclared direct system `{}`", w))?;
                CofinitenessInput::Ind(sys.clone(), label.clone())
            } else {
                let name = check
                    .modules
                    .first()
                    .ok_or_else(|| "cofiniteness needs a module or ind=SYSTEM".to_string())?;
                let m = rs
                    .modules
                    .get(name)
                    .ok_or_else(|| format!("undeclared module `{}`", name))?;
                CofinitenessInput::Module(m.clone())
            };
            let inst = check_cofiniteness(ctx, &input, bound).map_err(|e| e.to_string())?;
            Ok(record_from_instance(index, inputs.to_string(), inst))
        }
        "zero-map" => {
            let name = check
                .modules
                .first()
                .ok_or_else(|| "zero-map needs a module".to_string())?;
            let m = rs.modules.get(name).ok_or_else(|| format!("undeclared module `{}`", name))?;
            let source = ProModule::constant(m.clone());
            let target = ProModule::constant(m.clone());
            let mz = m.clone();
            let f = ProMap::new(source, target, move |_| {
                ModuleMap::zero_map(mz.clone(), mz.clone())
            });
            let rep = pro_iso_check(&f, bound).map_err(|e| e.to_string())?;
            let verdict = match &rep.status {
                TowerStatus::Failed { .. } => "failed",
                s if s.is_verified() => "verified",
                _ => "inconclusive",
            };
            Ok(CheckRecord {
                index,
                id: "zero-map".into(),
                inputs: inputs.to_string(),
                verdict: verdict.into(),
                detail: format!("{:?}", rep.status),
                witnesses: vec![print_module("witness", &m.ring().to_string(), m)],
                wall_ms: None,
            })
        }
        other => Err(format!("unknown check kind `{}`", other)),
    }
}

pub fn run(rs: &ResolvedScenario, name: &str, opts: &RunOptions) -> Report {
    let default_bound = opts.bound_override.unwrap_or(DEFAULT_BOUND);
    let checks = &rs.scenario.checks;
    let records: Mutex<Vec<Option<CheckRecord>>> = Mutex::new(vec![None; checks.len()]);
    let next = AtomicUsize::new(0);
    let jobs = opts.jobs.max(1).min(checks.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= checks.len() {
                    break;
                }
                let started = Instant::now();
                let mut rec = execute_check(rs, i, &checks[i], default_bound);
                if opts.timings {
                    rec.wall_ms = Some(started.elapsed().as_millis() as u64);
                }
                records.lock().unwrap()[i] = Some(rec);
            });
        }
    });
    let checks: Vec<CheckRecord> = records
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("all checks executed"))
        .collect();
    let summary = summarize(&checks);
    Report {
        format: "adic-report-v1",
        scenario: name.to_string(),
        bound: default_bound,
        checks,
        summary,
    }
}
