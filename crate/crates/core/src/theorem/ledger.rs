use serde::Serialize;

use crate::error::{Error, Result};
use crate::unlink::{stage_two_chain_needs, stage_two_total};

pub const PLUMBING: &str = "plumbing";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerRow {
    pub name: String,
    pub value: i64,
    /// Formula tag of the statement the row instantiates, or "plumbing".
    pub citation: String,
}

impl LedgerRow {
    pub fn new(name: &str, value: i64, citation: &str) -> Self {
        LedgerRow { name: name.to_string(), value, citation: citation.to_string() }
    }
}

pub mod tags {
    pub const KNOT_SURGERY: &str = "knot-surgery: b(K) <= 9n cancels all 1-handles of E(n)_K";
    pub const LOG_TRANSFORM: &str = "log-transform: min(p,q) <= 4 cancels all 1-handles of E(n)_{p,q}";
    pub const TORUS_REDUCTION: &str = "torus-reduction: E(1)_{p,q} = E(1)_{T(p,q)}, min(p,q) <= 9";
    pub const A_CYCLES: &str = "monodromy (a^3 b a^3 b a^3 b)^n: 9n a-cycles";
    pub const ONE_HANDLES: &str = "(S^3 - nu K) x S^1: b(K)+1 1-handles";
    pub const MERIDIAN_D: &str = "gluing: a meridian is sent to d";
    pub const TORUS_BRIDGE: &str = "b(T(p,q)) = min(p,q)";
    pub const CHAIN_TOTAL: &str = "-2-chain of length 9n-1";
    pub const STAGE_ONE: &str = "unlink -n linking: chain of length n+1";
    pub const REMAINDER: &str = "remaining chain: 8n-3";
    pub const STAGE_TWO: &str = "(2n+2)+1+(2n+2) = (2n+1)+1+(2n+3) = 4n+5";
    pub const BUDGET: &str = "4n+5 <= 8n-3 for n >= 2";
    pub const FOUR_MERIDIANS: &str = "four meridians distributed by the centered 0-framed handles";
    pub const MONODROMY: &str = "(ab)^{6n} ~ (a^2 b a^3 b a^3 b a)^n ~ (a^3 b a^3 b a^3 b)^n";
    pub const CHAIN: &str = "k parallel -1 cycles slide to a -2-chain of length k-1 and one -1 residual";
    pub const UNLINK: &str = "(-m linking, m+2 components) -> (-(m-1) linking, m+1 components)";
    pub const GLUING: &str = "log transform gluing: unit determinant with entry -pq";
    pub const SEIFERT: &str = "Bezout identity p v + q u = 1 (orientation of the identity is a convention)";
}

pub(crate) fn knot_surgery_rows(n: u32, bridges: u64, feasible: bool) -> Vec<LedgerRow> {
    let n = i64::from(n);
    let b = bridges as i64;
    let mut rows = vec![
        LedgerRow::new("a_cycle_slots", 9 * n, tags::A_CYCLES),
        LedgerRow::new("bridge_number", b, tags::KNOT_SURGERY),
        LedgerRow::new("one_handles_to_cancel", b + 1, tags::ONE_HANDLES),
        LedgerRow::new("meridian_hit_by_d", 1, tags::MERIDIAN_D),
        LedgerRow::new("slots_minus_bridges", 9 * n - b, tags::KNOT_SURGERY),
    ];
    if feasible {
        rows.push(LedgerRow::new("euler_characteristic", 12 * n, PLUMBING));
    }
    rows
}

pub(crate) fn torus_rows(p: i64, q: i64, bridges: u64) -> Vec<LedgerRow> {
    vec![
        LedgerRow::new("p", p, tags::TORUS_REDUCTION),
        LedgerRow::new("q", q, tags::TORUS_REDUCTION),
        LedgerRow::new("torus_bridge_number", bridges as i64, tags::TORUS_BRIDGE),
    ]
}

pub(crate) fn log_transform_rows(n: u32, p: i64, q: i64, stage_two: bool) -> Vec<LedgerRow> {
    let l = budget_ledger(i64::from(n)).expect("n >= 1");
    let mut rows = vec![
        LedgerRow::new("min_pq", p.min(q), tags::LOG_TRANSFORM),
        LedgerRow::new("total_chain", l.total_chain, tags::CHAIN_TOTAL),
        LedgerRow::new("stage1_active", l.stage1_active, tags::STAGE_ONE),
    ];
    if stage_two {
        rows.extend([
            LedgerRow::new("separator", l.separator, tags::STAGE_TWO),
            LedgerRow::new("remainder", l.remainder, tags::REMAINDER),
            LedgerRow::new("stage2_need", l.stage2_need, tags::STAGE_TWO),
            LedgerRow::new("stage2_feasible", i64::from(l.stage2_feasible), tags::BUDGET),
            LedgerRow::new("meridians", 4, tags::FOUR_MERIDIANS),
        ]);
    } else {
        rows.push(LedgerRow::new("meridians", 2, tags::STAGE_ONE));
    }
    rows.push(LedgerRow::new("euler_characteristic", 12 * i64::from(n), PLUMBING));
    rows
}

/// Chain budget of the log-transform construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BudgetLedger {
    pub n: i64,
    pub total_chain: i64,
    pub stage1_active: i64,
    pub separator: i64,
    pub remainder: i64,
    pub stage2_need: i64,
    pub stage2_feasible: bool,
    /// (2n+2, 2n+2) and (2n+1, 2n+3).
    pub parity_branches: [(i64, i64); 2],
}

impl BudgetLedger {
    pub fn rows(&self) -> Vec<LedgerRow> {
        vec![
            LedgerRow::new("total_chain", self.total_chain, tags::CHAIN_TOTAL),
            LedgerRow::new("stage1_active", self.stage1_active, tags::STAGE_ONE),
            LedgerRow::new("separator", self.separator, tags::STAGE_TWO),
            LedgerRow::new("remainder", self.remainder, tags::REMAINDER),
            LedgerRow::new("stage2_need", self.stage2_need, tags::STAGE_TWO),
            LedgerRow::new("stage2_feasible", i64::from(self.stage2_feasible), tags::BUDGET),
        ]
    }
}

pub fn budget_ledger(n: i64) -> Result<BudgetLedger> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let total_chain = 9 * n - 1;
    let stage1_active = n + 1;
    let separator = 1;
    let remainder = total_chain - stage1_active - separator;
    let stage2_need = stage_two_total(n)?;
    let used = stage_two_chain_needs(n)?;
    let branches = [(2 * n + 2, 2 * n + 2), (2 * n + 1, 2 * n + 3)];
    if !branches.contains(&used) || branches.iter().any(|(a, b)| a + separator + b != stage2_need) {
        return Err(Error::assertion("parity branches disagree on the stage-two total"));
    }
    Ok(BudgetLedger {
        n,
        total_chain,
        stage1_active,
        separator,
        remainder,
        stage2_need,
        stage2_feasible: stage2_need <= remainder,
        parity_branches: branches,
    })
}
