//! One function per CLI subcommand. Each returns an unstamped [`Report`].

use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::braid::{torus_bridge_number, BridgePresentation};
use crate::chain::build_chain;
use crate::error::{Error, Result};
use crate::gluing::{log_transform_gluing, seifert_coefficients};
use crate::invariants::InvariantSummary;
use crate::link::FramedLink;
use crate::monodromy::verify_eq1;
use crate::moves::{replay, MoveScript};
use crate::report::{Report, RunConfig, Status};
use crate::search::{cross_validate, EngineRegistry, Goal, MoveSet, Outcome, SearchEngine, SearchProblem, SearchResult};
use crate::theorem::ledger::{tags, PLUMBING};
use crate::theorem::{check_knot_surgery_with, check_log_transform_with, FeasibilityReport, StrategyRegistry};
use crate::unlink::{unlink_framings, unlink_instance, unlink_pair};

fn engine<'a>(registry: &'a EngineRegistry, cfg: &RunConfig) -> Result<&'a dyn SearchEngine> {
    registry
        .get(&cfg.engine)
        .ok_or_else(|| Error::invalid(format!("unknown engine {:?}; known: {}", cfg.engine, registry.names().join(", "))))
}

fn strategies(cfg: &RunConfig) -> Result<StrategyRegistry> {
    match &cfg.strategy {
        Some(name) => StrategyRegistry::default().restricted_to(name),
        None => Ok(StrategyRegistry::default()),
    }
}

fn search_status(r: &SearchResult) -> Status {
    if r.found() {
        Status::Pass
    } else {
        Status::Inconclusive
    }
}

pub fn verify_monodromy(cfg: &RunConfig, n: u32) -> Result<Report> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let r = verify_eq1(n)?;
    let status = if r.passed() { Status::Pass } else { Status::Fail };
    let failures = r.failures();
    Report::new(cfg, status, &[tags::MONODROMY, tags::A_CYCLES], json!({ "eq1": r, "failures": failures }))
}

pub fn build_chain_cmd(cfg: &RunConfig, k: usize, verify: bool) -> Result<Report> {
    let b = build_chain(k)?;
    let mut body = json!({
        "k": k,
        "chain_length": b.spec.length,
        "initial": b.initial.matrix(),
        "final": b.link.matrix(),
        "roles": b.roles,
        "residual_linking": b.residual_linking,
        "script_id": b.script.id(),
        "script": b.script,
        "invariants": InvariantSummary::of(&b.link)?,
    });
    let mut status = Status::Pass;
    if verify {
        let depth = cfg.max_depth.min(b.script.len());
        let problem = SearchProblem::new(b.initial.clone(), Goal::MatrixEquals { target: b.link.clone() }, MoveSet::all(k), depth)
            .with_max_states(cfg.max_states);
        let registry = EngineRegistry::default();
        let cv = cross_validate(&b.script, &problem, engine(&registry, cfg)?)?;
        if !cv.passed() {
            status = Status::Fail;
        } else if cv.witness.as_ref().is_some_and(|w| !w.found()) {
            status = Status::Inconclusive;
        }
        body["oracle"] = json!({ "passed": cv.passed(), "mismatch": cv.mismatch(), "cross_validation": cv });
    }
    Report::new(cfg, status, &[tags::CHAIN], body)
}

pub fn unlink_cmd(cfg: &RunConfig, m: i64, emit_script: bool) -> Result<Report> {
    let chain_len = usize::try_from(m + 1).map_err(|_| Error::invalid("m must be at least 1"))?;
    let (link, pair, chain) = unlink_instance(m, chain_len)?;
    let out = unlink_pair(&link, pair, &chain)?;
    let expected = unlink_framings(m)?;
    let status = if out.framings == expected && out.link.linking(pair.0, pair.1) == 0 { Status::Pass } else { Status::Fail };
    let mut body = json!({
        "m": m,
        "framings": out.framings,
        "expected_framings": expected,
        "stages": out.stages,
        "reductions": out.reductions,
        "chain_rows": out.chain_rows,
        "script_id": out.script.id(),
        "slides": out.script.slide_count(),
    });
    if emit_script {
        body["initial"] = serde_json::to_value(&link).map_err(|e| Error::Schema(e.to_string()))?;
        body["script"] = serde_json::to_value(&out.script).map_err(|e| Error::Schema(e.to_string()))?;
    }
    Report::new(cfg, status, &[tags::UNLINK, tags::STAGE_ONE], body)
}

fn feasibility(cfg: &RunConfig, r: FeasibilityReport, extra: serde_json::Value) -> Result<Report> {
    let status = if r.is_yes() { Status::Yes } else { Status::NotGuaranteed };
    let mut cites: Vec<&str> = vec![r.theorem.as_str()];
    cites.extend(r.ledger.iter().map(|l| l.citation.as_str()).filter(|c| *c != PLUMBING));
    let mut body = serde_json::to_value(&r).map_err(|e| Error::Schema(e.to_string()))?;
    if let (Some(obj), serde_json::Value::Object(more)) = (body.as_object_mut(), extra) {
        obj.extend(more);
    }
    Report::new(cfg, status, &cites, body)
}

pub enum KnotSpec {
    Bridge(u32),
    Torus(u64, u64),
}

pub fn check_knot_surgery_cmd(cfg: &RunConfig, n: u32, knot: KnotSpec) -> Result<Report> {
    let (bridges, extra) = match knot {
        KnotSpec::Bridge(b) => (b as usize, json!({})),
        KnotSpec::Torus(p, q) => {
            let b = torus_bridge_number(p, q)?;
            (b as usize, json!({ "torus": [p, q], "torus_bridge_number": b }))
        }
    };
    if bridges < 1 {
        return Err(Error::invalid("bridge number must be at least 1"));
    }
    let r = check_knot_surgery_with(n, BridgePresentation::trivial(bridges)?, &strategies(cfg)?)?;
    feasibility(cfg, r, extra)
}

pub fn check_log_transform_cmd(cfg: &RunConfig, n: u32, p: i64, q: i64) -> Result<Report> {
    let r = check_log_transform_with(n, p, q, &strategies(cfg)?)?;
    let gluing = log_transform_gluing(p, q)?;
    let (u, v) = seifert_coefficients(p, q)?;
    let extra = json!({
        "gluing": gluing,
        "gluing_det": gluing.det() as i64,
        "seifert": { "u": u, "v": v, "identity": "p*v + q*u = 1", "note": tags::SEIFERT },
    });
    let mut report = feasibility(cfg, r, extra)?;
    report.citations.push(tags::GLUING.to_string());
    Ok(report)
}

pub fn invariants_cmd(cfg: &RunConfig, link: &FramedLink) -> Result<Report> {
    let s = InvariantSummary::of(link)?;
    let body = json!({
        "components": link.len(),
        "dotted": link.dotted_count(),
        "three_handles": link.three_handles(),
        "nullity": s.nullity(),
        "torsion": s.torsion_part(),
        "summary": s,
    });
    Report::new(cfg, Status::Pass, &[PLUMBING], body)
}

pub fn replay_cmd(cfg: &RunConfig, link: &FramedLink, script: &MoveScript) -> Result<Report> {
    let r = replay(link, script)?;
    let body = json!({
        "script_id": script.id(),
        "moves": script.len(),
        "initial_summary": r.initial_summary,
        "final_summary": r.final_summary,
        "steps": r.steps,
        "final": r.final_link,
    });
    Report::new(cfg, Status::Pass, &[PLUMBING], body)
}

pub fn search_cmd(cfg: &RunConfig, problem: &SearchProblem) -> Result<Report> {
    let registry = EngineRegistry::default();
    let r = engine(&registry, cfg)?.run(problem)?;
    let note = match r.outcome {
        Outcome::Found => "shortest witness, first in (rider, over, sign) order".to_string(),
        Outcome::NotFoundWithinDepth => format!("no witness within depth {}", problem.max_depth),
        Outcome::BudgetExceeded => format!("state budget {} exhausted", problem.max_states),
    };
    Report::new(cfg, search_status(&r), &[PLUMBING], json!({ "result": r, "note": note }))
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub m: i64,
    pub goal: &'static str,
    pub outcome: Outcome,
    pub witness_len: Option<usize>,
    pub states: usize,
    pub dedup_hits: usize,
    pub dedup_rate: f64,
    pub peak_frontier: usize,
    pub seconds: f64,
    pub states_per_second: f64,
}

/// Timed oracle searches on the unlinking instances m = 1..=max_m. Timing
/// fields vary between runs.
pub fn bench_cmd(cfg: &RunConfig, max_m: i64) -> Result<Report> {
    if max_m < 1 {
        return Err(Error::invalid("bench needs max m >= 1"));
    }
    let registry = EngineRegistry::default();
    let eng = engine(&registry, cfg)?;
    let mut rows = Vec::new();
    for m in 1..=max_m {
        let (link, pair, chain) = unlink_instance(m, m as usize + 1)?;
        let target = unlink_pair(&link, pair, &chain)?.link;
        let goals = [
            ("mutual_linking_zero", Goal::MutualLinkingZero { pair }),
            ("matrix_equals", Goal::MatrixEquals { target }),
        ];
        for (name, goal) in goals {
            let p = SearchProblem::new(link.clone(), goal, MoveSet::over(vec![pair.0, pair.1], chain.clone()), cfg.max_depth)
                .with_max_states(cfg.max_states);
            let t = Instant::now();
            let r = eng.run(&p)?;
            let secs = t.elapsed().as_secs_f64();
            let attempts = r.states_explored + r.canonical_dedup_hits;
            rows.push(BenchRow {
                m,
                goal: name,
                outcome: r.outcome,
                witness_len: r.script.as_ref().map(MoveScript::len),
                states: r.states_explored,
                dedup_hits: r.canonical_dedup_hits,
                dedup_rate: if attempts == 0 { 0.0 } else { r.canonical_dedup_hits as f64 / attempts as f64 },
                peak_frontier: r.peak_frontier,
                seconds: secs,
                states_per_second: if secs > 0.0 { r.states_explored as f64 / secs } else { 0.0 },
            });
        }
    }
    Report::new(cfg, Status::Pass, &[tags::UNLINK], json!({ "engine": eng.name(), "rows": rows }))
}
