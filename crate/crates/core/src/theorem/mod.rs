//! Feasibility checks for 1-handle cancellation in knot-surgered and
//! log-transformed elliptic surfaces.
//!
//! A positive verdict always ships a move script that has been replayed
//! from the initial diagram to a diagram without dotted circles.

pub mod diagram;
pub mod ledger;
pub mod strategy;

use serde::Serialize;

use crate::braid::{torus_bridge_number, BridgePresentation};
use crate::error::{Error, Result};
use crate::moves::{replay_with, InvariantPolicy, ReplayOptions};

pub use diagram::{elliptic_diagram, euler_characteristic, Surgery};
pub use ledger::{budget_ledger, BudgetLedger, LedgerRow};
pub use strategy::{CancellationStrategy, Case, Certificate, StrategyRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "yes")]
    Yes,
    #[serde(rename = "notGuaranteed")]
    NotGuaranteed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScriptSummary {
    pub id: String,
    pub moves: usize,
    pub slides: usize,
    pub components_before: usize,
    pub dotted_before: usize,
    pub components_after: usize,
    pub dotted_after: usize,
    pub euler_characteristic: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: Verdict,
    pub theorem: String,
    pub case: Case,
    pub strategy: Option<String>,
    pub ledger: Vec<LedgerRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub framing_tuple: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub script: Option<ScriptSummary>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub certificate: Option<Certificate>,
}

impl FeasibilityReport {
    pub fn is_yes(&self) -> bool {
        self.feasible == Verdict::Yes
    }

    pub fn script_refs(&self) -> Vec<String> {
        self.script.iter().map(|s| s.id.clone()).collect()
    }
}

/// Replays the certificate from its initial diagram and checks it ends at
/// the claimed diagram with no dotted circles.
pub fn verify_certificate(cert: &Certificate) -> Result<ScriptSummary> {
    let opts = ReplayOptions { invariants: InvariantPolicy::Off, reconstruct_slides: false };
    let r = replay_with(&cert.initial, &cert.script, opts)?;
    if !r.final_link.same_diagram(&cert.final_link) {
        return Err(Error::assertion("replayed script does not reach the certificate's final diagram"));
    }
    if r.final_link.dotted_count() != 0 {
        return Err(Error::assertion("replayed script leaves dotted circles"));
    }
    let chi = euler_characteristic(&cert.initial);
    if euler_characteristic(&r.final_link) != chi {
        return Err(Error::assertion("euler characteristic changed along the script"));
    }
    Ok(ScriptSummary {
        id: cert.script.id(),
        moves: cert.script.len(),
        slides: cert.script.slide_count(),
        components_before: cert.initial.len(),
        dotted_before: cert.initial.dotted_count(),
        components_after: r.final_link.len(),
        dotted_after: r.final_link.dotted_count(),
        euler_characteristic: chi,
    })
}

fn report_for(case: Case, theorem: &str, registry: &StrategyRegistry, negative_rows: Vec<LedgerRow>, notes: Vec<String>) -> Result<FeasibilityReport> {
    match registry.select(&case) {
        Some(s) => {
            let cert = s.certify(&case)?;
            let summary = verify_certificate(&cert)?;
            Ok(FeasibilityReport {
                feasible: Verdict::Yes,
                theorem: theorem.to_string(),
                case,
                strategy: Some(s.name().to_string()),
                ledger: cert.ledger.clone(),
                framing_tuple: cert.framing_tuple.clone(),
                script: Some(summary),
                notes,
                certificate: Some(cert),
            })
        }
        None => Ok(FeasibilityReport {
            feasible: Verdict::NotGuaranteed,
            theorem: theorem.to_string(),
            case,
            strategy: None,
            ledger: negative_rows,
            framing_tuple: None,
            script: None,
            notes,
            certificate: None,
        }),
    }
}

pub fn check_knot_surgery(n: u32, bridge: u32) -> Result<FeasibilityReport> {
    if bridge < 1 {
        return Err(Error::invalid("bridge number must be at least 1"));
    }
    let pres = BridgePresentation::trivial(bridge as usize)?;
    check_knot_surgery_with(n, pres, &StrategyRegistry::default())
}

pub fn check_knot_surgery_with(n: u32, pres: BridgePresentation, registry: &StrategyRegistry) -> Result<FeasibilityReport> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    pres.check()?;
    let b = pres.bridges as u64;
    let mut notes = Vec::new();
    if b > 9 * u64::from(n) {
        notes.push(format!("b(K) = {b} exceeds 9n = {}; the converse is open", 9 * n));
    }
    let rows = ledger::knot_surgery_rows(n, b, false);
    report_for(Case::KnotSurgery { n, presentation: pres }, ledger::tags::KNOT_SURGERY, registry, rows, notes)
}

pub fn check_log_transform(n: u32, p: i64, q: i64) -> Result<FeasibilityReport> {
    check_log_transform_with(n, p, q, &StrategyRegistry::default())
}

pub fn check_log_transform_with(n: u32, p: i64, q: i64, registry: &StrategyRegistry) -> Result<FeasibilityReport> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if p < 1 || q < 1 {
        return Err(Error::invalid("p and q must be positive"));
    }
    torus_bridge_number(p as u64, q as u64)?;
    let min = p.min(q);
    let (theorem, mut notes) = if n == 1 {
        (ledger::tags::TORUS_REDUCTION, vec!["n = 1 is routed through knot surgery on T(p,q)".to_string()])
    } else {
        (ledger::tags::LOG_TRANSFORM, Vec::new())
    };
    if (n == 1 && min > 9) || (n >= 2 && min > 4) {
        notes.push(format!("min(p,q) = {min} is outside the sufficient condition; other constructions may apply"));
    }
    let rows = if n == 1 {
        let b = min as u64;
        let mut r = ledger::torus_rows(p, q, b);
        r.push(LedgerRow::new("a_cycle_slots", 9, ledger::tags::A_CYCLES));
        r
    } else {
        ledger::log_transform_rows(n, p, q, min > 2)
    };
    report_for(Case::LogTransform { n, p, q }, theorem, registry, rows, notes)
}
