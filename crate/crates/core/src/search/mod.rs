//! Bounded breadth-first search over handle slides.
//!
//! States are deduplicated by a canonical key that also colours components
//! by their role in the move set and the goal, so that two identified
//! states have the same future. Witnesses are shortest, and among the
//! shortest the first in (rider, over, sign) order.

pub mod canonical;
pub mod engine;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::FramedLink;
use crate::moves::{replay_with, MoveScript, ReplayOptions, SlideMove};

pub use canonical::{canonical_form, canonical_key, canonical_key_colored, Canonical, Key};
pub use engine::{BfsEngine, EngineRegistry, ParallelBfsEngine, SearchEngine};

/// Default cap on distinct states; override with `HANDLECALC_MAX_STATES`.
pub const DEFAULT_MAX_STATES: usize = 2_000_000;
pub const MAX_STATES_ENV: &str = "HANDLECALC_MAX_STATES";

pub fn default_max_states() -> usize {
    std::env::var(MAX_STATES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_STATES)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "goal", rename_all = "snake_case")]
pub enum Goal {
    MutualLinkingZero { pair: (usize, usize) },
    /// Mutual linking zero and the pair's framings equal `framings` as a
    /// multiset.
    PairFramings { pair: (usize, usize), framings: (i64, i64) },
    /// Equal to `target` up to a permutation of components.
    MatrixEquals { target: FramedLink },
}

impl Goal {
    fn pair(&self) -> Option<(usize, usize)> {
        match self {
            Goal::MutualLinkingZero { pair } | Goal::PairFramings { pair, .. } => Some(*pair),
            Goal::MatrixEquals { .. } => None,
        }
    }
}

pub(crate) struct GoalCheck<'a> {
    goal: &'a Goal,
    target_key: Option<Key>,
}

impl<'a> GoalCheck<'a> {
    pub(crate) fn new(goal: &'a Goal) -> Self {
        let target_key = match goal {
            Goal::MatrixEquals { target } => Some(canonical_key(target)),
            _ => None,
        };
        GoalCheck { goal, target_key }
    }

    pub(crate) fn holds(&self, link: &FramedLink) -> bool {
        match self.goal {
            Goal::MutualLinkingZero { pair } => link.linking(pair.0, pair.1) == 0,
            Goal::PairFramings { pair, framings } => {
                let mut got = [link.linking(pair.0, pair.0), link.linking(pair.1, pair.1)];
                let mut want = [framings.0, framings.1];
                got.sort_unstable();
                want.sort_unstable();
                link.linking(pair.0, pair.1) == 0 && got == want
            }
            Goal::MatrixEquals { target } => {
                target.len() == link.len()
                    && self.target_key.as_deref() == Some(&*canonical_key(link))
            }
        }
    }
}

/// Slides of any rider over any different over, with the listed signs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSet {
    pub riders: Vec<usize>,
    pub overs: Vec<usize>,
    pub signs: Vec<i8>,
}

impl MoveSet {
    pub fn all(n: usize) -> Self {
        MoveSet { riders: (0..n).collect(), overs: (0..n).collect(), signs: vec![-1, 1] }
    }

    pub fn over(riders: Vec<usize>, overs: Vec<usize>) -> Self {
        MoveSet { riders, overs, signs: vec![-1, 1] }
    }

    pub fn with_signs(mut self, signs: Vec<i8>) -> Self {
        self.signs = signs;
        self
    }

    /// Lexicographic by (rider, over, sign).
    pub fn moves(&self) -> Vec<SlideMove> {
        let mut riders = self.riders.clone();
        let mut overs = self.overs.clone();
        let mut signs = self.signs.clone();
        for v in [&mut riders, &mut overs] {
            v.sort_unstable();
            v.dedup();
        }
        signs.sort_unstable();
        signs.dedup();
        let mut out = Vec::new();
        for &r in &riders {
            for &o in &overs {
                if r != o {
                    out.extend(signs.iter().map(|&s| SlideMove::new(r, o, s)));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchProblem {
    pub initial: FramedLink,
    pub goal: Goal,
    pub moves: MoveSet,
    pub max_depth: usize,
    #[serde(default = "default_max_states")]
    pub max_states: usize,
}

impl SearchProblem {
    pub fn new(initial: FramedLink, goal: Goal, moves: MoveSet, max_depth: usize) -> Self {
        SearchProblem { initial, goal, moves, max_depth, max_states: default_max_states() }
    }

    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.initial.len();
        for &i in self.moves.riders.iter().chain(&self.moves.overs) {
            self.initial.check_index(i)?;
            if self.initial.is_dotted(i) {
                return Err(Error::NotTwoHandle(i));
            }
        }
        if self.moves.signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid("move signs must be +1 or -1"));
        }
        if let Some((a, b)) = self.goal.pair() {
            if a >= n || b >= n || a == b {
                return Err(Error::invalid(format!("goal pair ({a}, {b}) is not two distinct components")));
            }
        }
        if let Goal::MatrixEquals { target } = &self.goal {
            target.validate()?;
        }
        Ok(())
    }

    /// Dedup colours: bit 0 rider, bit 1 over, bit 2 goal pair.
    pub(crate) fn colors(&self) -> Vec<u64> {
        let mut c = vec![0u64; self.initial.len()];
        for &r in &self.moves.riders {
            c[r] |= 1;
        }
        for &o in &self.moves.overs {
            c[o] |= 2;
        }
        if let Some((a, b)) = self.goal.pair() {
            c[a] |= 4;
            c[b] |= 4;
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    /// No witness within `max_depth`; says nothing about longer scripts.
    NotFoundWithinDepth,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub script: Option<MoveScript>,
    pub final_link: Option<FramedLink>,
    pub depth_reached: usize,
    pub states_explored: usize,
    pub canonical_dedup_hits: usize,
    pub peak_frontier: usize,
}

impl SearchResult {
    pub fn found(&self) -> bool {
        self.outcome == Outcome::Found
    }
}

pub fn search(problem: &SearchProblem) -> Result<SearchResult> {
    BfsEngine.run(problem)
}

/// Confirms a returned witness before it leaves the engine.
pub(crate) fn confirm_witness(problem: &SearchProblem, script: &MoveScript) -> Result<FramedLink> {
    let r = replay_with(&problem.initial, script, ReplayOptions::light())?;
    if !GoalCheck::new(&problem.goal).holds(&r.final_link) {
        return Err(Error::assertion("search witness does not satisfy the goal on replay"));
    }
    Ok(r.final_link)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub constructive_satisfies_goal: bool,
    pub witness: Option<SearchResult>,
    /// Whether constructive and witness final links agree up to permutation.
    pub finals_agree: Option<bool>,
    pub constructive_final: Vec<Vec<i64>>,
    pub witness_final: Option<Vec<Vec<i64>>>,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.constructive_satisfies_goal && self.finals_agree != Some(false)
    }

    pub fn mismatch(&self) -> Option<String> {
        if self.passed() {
            return None;
        }
        Some(format!(
            "constructive final {:?} (goal satisfied: {}) vs witness final {:?}",
            self.constructive_final, self.constructive_satisfies_goal, self.witness_final
        ))
    }
}

pub fn cross_validate(script: &MoveScript, problem: &SearchProblem, engine: &dyn SearchEngine) -> Result<CrossValidation> {
    problem.validate()?;
    let replayed = replay_with(&problem.initial, script, ReplayOptions::default())?;
    let fin = replayed.final_link;
    let constructive_satisfies_goal = fin.len() == problem.initial.len() && GoalCheck::new(&problem.goal).holds(&fin);
    let witness = engine.run(problem)?;
    let (finals_agree, witness_final) = match &witness.final_link {
        Some(w) => (Some(canonical_key(w) == canonical_key(&fin)), Some(w.matrix())),
        None => (None, None),
    };
    Ok(CrossValidation {
        constructive_satisfies_goal,
        witness: Some(witness),
        finals_agree,
        constructive_final: fin.matrix(),
        witness_final,
    })
}
