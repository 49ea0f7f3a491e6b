//! 1-handle cancellation strategies behind one trait, registered by name.

use serde::Serialize;

use crate::braid::{torus_bridge_number, BridgePresentation};
use crate::chain::{chain_moves, select_subchain, ChainRole};
use crate::error::{Error, Result};
use crate::link::FramedLink;
use crate::moves::{MoveScript, ScriptBuilder};
use crate::unlink::{stage_two_chain_needs, unlink_in};

use super::diagram::{a_labels, elliptic_diagram, Surgery};
use super::ledger::LedgerRow;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "surgery", rename_all = "snake_case")]
pub enum Case {
    KnotSurgery { n: u32, presentation: BridgePresentation },
    LogTransform { n: u32, p: i64, q: i64 },
}

impl Case {
    pub fn n(&self) -> u32 {
        match self {
            Case::KnotSurgery { n, .. } | Case::LogTransform { n, .. } => *n,
        }
    }

    fn min_pq(&self) -> Option<i64> {
        match self {
            Case::LogTransform { p, q, .. } => Some(*p.min(q)),
            Case::KnotSurgery { .. } => None,
        }
    }
}

/// A replayable cancellation: `script` takes `initial` to `final_link`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub strategy: String,
    pub initial: FramedLink,
    pub script: MoveScript,
    pub final_link: FramedLink,
    pub ledger: Vec<LedgerRow>,
    pub framing_tuple: Option<Vec<i64>>,
    pub chain_roles: Vec<(String, ChainRole)>,
}

pub trait CancellationStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Whether the strategy's construction is guaranteed to work on `case`.
    fn applies(&self, case: &Case) -> bool;
    fn certify(&self, case: &Case) -> Result<Certificate>;
}

pub struct StrategyRegistry {
    entries: Vec<Box<dyn CancellationStrategy>>,
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut r = StrategyRegistry::empty();
        r.register(Box::new(BridgeCancel));
        r.register(Box::new(TorusReduction));
        r.register(Box::new(SingleUnlink));
        r.register(Box::new(DoubleUnlink));
        r
    }
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry { entries: Vec::new() }
    }

    /// Replaces any strategy registered under the same name.
    pub fn register(&mut self, s: Box<dyn CancellationStrategy>) {
        self.entries.retain(|e| e.name() != s.name());
        self.entries.push(s);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn CancellationStrategy> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }

    /// First registered strategy that applies.
    /// Keeps only the strategy called `name`.
    pub fn restricted_to(mut self, name: &str) -> Result<Self> {
        if self.get(name).is_none() {
            return Err(Error::invalid(format!("unknown strategy {name:?}; known: {}", self.names().join(", "))));
        }
        self.entries.retain(|e| e.name() == name);
        Ok(self)
    }

    pub fn select(&self, case: &Case) -> Option<&dyn CancellationStrategy> {
        self.entries.iter().find(|e| e.applies(case)).map(|e| e.as_ref())
    }
}

/// Slides `handle` over ferry `r{beta}` so it runs over `x{beta}` instead of `x1`.
fn ferry(b: &mut ScriptBuilder, handle: &str, beta: usize) -> Result<()> {
    b.slide(handle, &format!("r{beta}"), -1)
}

fn finish(
    name: &str,
    b: ScriptBuilder,
    ledger: Vec<LedgerRow>,
    framing_tuple: Option<Vec<i64>>,
    chain_roles: Vec<(String, ChainRole)>,
) -> Result<Certificate> {
    let (initial, script, final_link) = b.finish();
    if final_link.dotted_count() != 0 {
        return Err(Error::assertion(format!("{name}: {} dotted circles survive", final_link.dotted_count())));
    }
    Ok(Certificate { strategy: name.to_string(), initial, script, final_link, ledger, framing_tuple, chain_roles })
}

/// Knot surgery along a b-bridge knot with b <= 9n: one a-cycle handle per
/// bridge, the first b-cycle handle for `s`.
pub struct BridgeCancel;

impl BridgeCancel {
    fn run(&self, n: u32, pres: &BridgePresentation, name: &str) -> Result<Certificate> {
        let bridges = pres.bridges;
        if bridges > 9 * n as usize {
            return Err(Error::Budget { needed: bridges, available: 9 * n as usize });
        }
        let mut b = ScriptBuilder::new(elliptic_diagram(n, pres, Surgery::Knot)?);
        for beta in 2..=bridges {
            ferry(&mut b, &format!("a{beta}"), beta)?;
        }
        b.clear_and_cancel("s", "b1")?;
        for beta in 1..=bridges {
            b.clear_and_cancel(&format!("x{beta}"), &format!("a{beta}"))?;
        }
        let ledger = super::ledger::knot_surgery_rows(n, bridges as u64, true);
        finish(name, b, ledger, None, Vec::new())
    }
}

impl CancellationStrategy for BridgeCancel {
    fn name(&self) -> &'static str {
        "bridge-cancel"
    }

    fn summary(&self) -> &'static str {
        "knot surgery: cancel x1..xb against a-cycle handles ferried by the relation handles, s against a b-cycle handle"
    }

    fn applies(&self, case: &Case) -> bool {
        matches!(case, Case::KnotSurgery { n, presentation } if presentation.bridges <= 9 * *n as usize)
    }

    fn certify(&self, case: &Case) -> Result<Certificate> {
        match case {
            Case::KnotSurgery { n, presentation } => self.run(*n, presentation, self.name()),
            _ => Err(Error::invalid("bridge-cancel handles knot surgery only")),
        }
    }
}

/// E(1)_{p,q} through knot surgery on T(p,q), b(T(p,q)) = min(p,q) <= 9.
pub struct TorusReduction;

impl CancellationStrategy for TorusReduction {
    fn name(&self) -> &'static str {
        "torus-reduction"
    }

    fn summary(&self) -> &'static str {
        "n = 1: E(1)_{p,q} = E(1)_{T(p,q)}, then bridge-cancel with min(p,q) bridges"
    }

    fn applies(&self, case: &Case) -> bool {
        matches!(case, Case::LogTransform { n: 1, .. }) && case.min_pq().is_some_and(|m| m <= 9)
    }

    fn certify(&self, case: &Case) -> Result<Certificate> {
        let Case::LogTransform { n: 1, p, q } = *case else {
            return Err(Error::invalid("torus-reduction needs a log transform with n = 1"));
        };
        let bridges = torus_bridge_number(p as u64, q as u64)?;
        let pres = BridgePresentation::trivial(bridges as usize)?;
        let mut cert = BridgeCancel.run(1, &pres, self.name())?;
        cert.ledger.extend(super::ledger::torus_rows(p, q, bridges));
        Ok(cert)
    }
}

struct StageOne {
    builder: ScriptBuilder,
    reserve: Vec<String>,
    roles: Vec<(String, ChainRole)>,
    bridges: usize,
}

/// Chain from the a-cycles, h1 from a cancelling pair slid over h0, then the
/// pair unlinked over the first n+1 chain components.
fn stage_one(n: u32, p: i64, q: i64) -> Result<StageOne> {
    let bridges = p.min(q) as usize;
    let pres = BridgePresentation::trivial(bridges)?;
    let mut b = ScriptBuilder::new(elliptic_diagram(n, &pres, Surgery::Log { p, q })?);

    let a = a_labels(n);
    let idx: Vec<usize> = a.iter().map(|l| b.idx(l)).collect::<Result<_>>()?;
    for mv in chain_moves(&idx) {
        b.apply(mv)?;
    }
    let chain_idx = &idx[..idx.len() - 1];
    let sel = select_subchain(b.link(), chain_idx, n as usize + 2)?;
    let label_of = |i: usize, b: &ScriptBuilder| b.link().label(i).unwrap_or_default().to_string();
    let mut roles: Vec<(String, ChainRole)> = sel.roles().into_iter().map(|(i, r)| (label_of(i, &b), r)).collect();
    roles.push((a[a.len() - 1].clone(), ChainRole::Residual));
    let reserve: Vec<String> = sel.reserved.iter().map(|&i| label_of(i, &b)).collect();

    b.add_canceling_pair("h1")?;
    b.slide("h1", "h0", 1)?;
    let pair = (b.idx("h0")?, b.idx("h1")?);
    let (link, script) = b.parts_mut();
    unlink_in(link, script, pair, &sel.active)?;
    Ok(StageOne { builder: b, reserve, roles, bridges })
}

/// Cancels s, then x1..x{bridges} against the listed meridian handles.
fn cancel_meridians(b: &mut ScriptBuilder, meridians: &[&str], bridges: usize) -> Result<()> {
    for (beta, h) in meridians.iter().enumerate().skip(1).take(bridges.saturating_sub(1)) {
        ferry(b, h, beta + 1)?;
    }
    b.clear_and_cancel("s", "b1")?;
    for (beta, h) in meridians.iter().enumerate().take(bridges) {
        b.clear_and_cancel(&format!("x{}", beta + 1), h)?;
    }
    Ok(())
}

/// n >= 2, min(p,q) <= 2: one round of unlinking gives two meridians.
pub struct SingleUnlink;

impl CancellationStrategy for SingleUnlink {
    fn name(&self) -> &'static str {
        "single-unlink"
    }

    fn summary(&self) -> &'static str {
        "n >= 2, min(p,q) <= 2: unlink (h0, h1) over a chain of length n+1, cancel x1 and x2"
    }

    fn applies(&self, case: &Case) -> bool {
        matches!(case, Case::LogTransform { n, .. } if *n >= 2) && case.min_pq().is_some_and(|m| m <= 2)
    }

    fn certify(&self, case: &Case) -> Result<Certificate> {
        let Case::LogTransform { n, p, q } = *case else {
            return Err(Error::invalid("single-unlink needs a log transform"));
        };
        let StageOne { builder: mut b, roles, bridges, .. } = stage_one(n, p, q)?;
        let tuple = vec![b.link().framing(b.idx("h0")?).unwrap_or(0), b.link().framing(b.idx("h1")?).unwrap_or(0)];
        cancel_meridians(&mut b, &["h0", "h1"], bridges)?;
        let ledger = super::ledger::log_transform_rows(n, p, q, false);
        finish(self.name(), b, ledger, Some(tuple), roles)
    }
}

/// n >= 2, min(p,q) in {3, 4}: a second round on the reserve chain gives
/// four meridians.
pub struct DoubleUnlink;

impl CancellationStrategy for DoubleUnlink {
    fn name(&self) -> &'static str {
        "double-unlink"
    }

    fn summary(&self) -> &'static str {
        "n >= 2, min(p,q) in {3,4}: unlink (h0,h2) and (h1,h3) over the reserve chain, cancel x1..x4"
    }

    fn applies(&self, case: &Case) -> bool {
        matches!(case, Case::LogTransform { n, .. } if *n >= 2) && case.min_pq().is_some_and(|m| (3..=4).contains(&m))
    }

    fn certify(&self, case: &Case) -> Result<Certificate> {
        let Case::LogTransform { n, p, q } = *case else {
            return Err(Error::invalid("double-unlink needs a log transform"));
        };
        let StageOne { builder: mut b, reserve, mut roles, bridges } = stage_one(n, p, q)?;
        let (need_a, need_b) = stage_two_chain_needs(i64::from(n))?;
        let (need_a, need_b) = (need_a as usize, need_b as usize);
        if need_a + 1 + need_b > reserve.len() {
            return Err(Error::Budget { needed: need_a + 1 + need_b, available: reserve.len() });
        }
        for (k, l) in reserve.iter().enumerate() {
            let role = if k < need_a {
                ChainRole::Chain { position: k + 1 }
            } else if k == need_a {
                ChainRole::Separator
            } else if k <= need_a + need_b {
                ChainRole::Chain { position: k - need_a }
            } else {
                ChainRole::Reserved { position: k - need_a - need_b }
            };
            if let Some(r) = roles.iter_mut().find(|(name, _)| name == l) {
                r.1 = role;
            }
        }

        for (fresh, base) in [("h2", "h0"), ("h3", "h1")] {
            b.add_canceling_pair(fresh)?;
            b.slide(fresh, base, 1)?;
        }
        let lookup = |b: &ScriptBuilder, ls: &[String]| ls.iter().map(|l| b.idx(l)).collect::<Result<Vec<_>>>();
        let sub_a = lookup(&b, &reserve[..need_a])?;
        let sub_b = lookup(&b, &reserve[need_a + 1..need_a + 1 + need_b])?;
        for ((x, y), sub) in [(("h0", "h2"), sub_a), (("h1", "h3"), sub_b)] {
            let pair = (b.idx(x)?, b.idx(y)?);
            let (link, script) = b.parts_mut();
            unlink_in(link, script, pair, &sub)?;
        }
        let tuple = ["h0", "h2", "h1", "h3"]
            .iter()
            .map(|l| Ok(b.link().framing(b.idx(l)?).unwrap_or(0)))
            .collect::<Result<Vec<i64>>>()?;
        cancel_meridians(&mut b, &["h0", "h1", "h2", "h3"], bridges)?;
        let ledger = super::ledger::log_transform_rows(n, p, q, true);
        finish(self.name(), b, ledger, Some(tuple), roles)
    }
}
