use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::Result;
use crate::link::FramedLink;
use crate::moves::{Move, MoveScript, SlideMove};

use super::{canonical_key_colored, confirm_witness, GoalCheck, Key, Outcome, SearchProblem, SearchResult};

pub trait SearchEngine: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, problem: &SearchProblem) -> Result<SearchResult>;
}

pub struct EngineRegistry {
    entries: Vec<Box<dyn SearchEngine>>,
}

impl Default for EngineRegistry {
    fn default() -> Self {
        EngineRegistry { entries: vec![Box::new(BfsEngine), Box::new(ParallelBfsEngine)] }
    }
}

impl EngineRegistry {
    pub fn register(&mut self, e: Box<dyn SearchEngine>) {
        self.entries.retain(|x| x.name() != e.name());
        self.entries.push(e);
    }

    pub fn get(&self, name: &str) -> Option<&dyn SearchEngine> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}

pub struct BfsEngine;
pub struct ParallelBfsEngine;

impl SearchEngine for BfsEngine {
    fn name(&self) -> &'static str {
        "bfs"
    }

    fn run(&self, problem: &SearchProblem) -> Result<SearchResult> {
        run_bfs(problem, false)
    }
}

impl SearchEngine for ParallelBfsEngine {
    fn name(&self) -> &'static str {
        "bfs-parallel"
    }

    fn run(&self, problem: &SearchProblem) -> Result<SearchResult> {
        run_bfs(problem, true)
    }
}

struct Node {
    parent: u32,
    mv: SlideMove,
}

const ROOT: u32 = u32::MAX;

struct Child {
    mv: SlideMove,
    key: Key,
    goal: bool,
}

struct Tree<'a> {
    problem: &'a SearchProblem,
    nodes: Vec<Node>,
}

impl Tree<'_> {
    fn path(&self, mut id: u32) -> Vec<SlideMove> {
        let mut out = Vec::new();
        while id != ROOT {
            let node = &self.nodes[id as usize];
            out.push(node.mv);
            id = node.parent;
        }
        out.reverse();
        out
    }

    fn rebuild(&self, id: u32) -> Result<FramedLink> {
        let mut link = self.problem.initial.clone();
        for mv in self.path(id) {
            link.slide_mut(mv)?;
        }
        Ok(link)
    }
}

fn expand(
    link: &FramedLink,
    moves: &[SlideMove],
    colors: &[u64],
    goal: &GoalCheck<'_>,
) -> Result<Vec<Child>> {
    moves
        .iter()
        .map(|&mv| {
            let child = link.slide(mv)?;
            Ok(Child { mv, key: canonical_key_colored(&child, colors), goal: goal.holds(&child) })
        })
        .collect()
}

/// Level-synchronous BFS. The parallel variant computes successors of a
/// whole level concurrently and merges them in frontier order, so both
/// variants return identical results.
fn run_bfs(problem: &SearchProblem, parallel: bool) -> Result<SearchResult> {
    problem.validate()?;
    let goal = GoalCheck::new(&problem.goal);
    let colors = problem.colors();
    let moves = problem.moves.moves();
    let mut tree = Tree { problem, nodes: Vec::new() };
    let mut visited: HashSet<Key> = HashSet::new();
    visited.insert(canonical_key_colored(&problem.initial, &colors));

    let mut result = SearchResult {
        outcome: Outcome::NotFoundWithinDepth,
        script: None,
        final_link: None,
        depth_reached: 0,
        states_explored: 1,
        canonical_dedup_hits: 0,
        peak_frontier: 1,
    };
    let finish_found = |tree: &Tree<'_>, id: Option<u32>, mut result: SearchResult| -> Result<SearchResult> {
        let script: MoveScript = id.map_or_else(Vec::new, |i| tree.path(i)).into_iter().map(Move::Slide).collect();
        result.final_link = Some(confirm_witness(problem, &script)?);
        result.script = Some(script);
        result.outcome = Outcome::Found;
        Ok(result)
    };
    if goal.holds(&problem.initial) {
        return finish_found(&tree, None, result);
    }

    let mut frontier: Vec<u32> = vec![ROOT];
    for depth in 0..problem.max_depth {
        result.depth_reached = depth + 1;
        let expanded: Vec<Result<Vec<Child>>> = if parallel {
            frontier
                .par_iter()
                .map(|&id| expand(&tree.rebuild(id)?, &moves, &colors, &goal))
                .collect()
        } else {
            frontier.iter().map(|&id| expand(&tree.rebuild(id)?, &moves, &colors, &goal)).collect()
        };
        let mut next = Vec::new();
        for (&parent, children) in frontier.iter().zip(expanded) {
            for child in children? {
                if !visited.insert(child.key) {
                    result.canonical_dedup_hits += 1;
                    continue;
                }
                result.states_explored += 1;
                let id = tree.nodes.len() as u32;
                tree.nodes.push(Node { parent, mv: child.mv });
                if child.goal {
                    return finish_found(&tree, Some(id), result);
                }
                if result.states_explored > problem.max_states {
                    result.outcome = Outcome::BudgetExceeded;
                    return Ok(result);
                }
                next.push(id);
            }
        }
        result.peak_frontier = result.peak_frontier.max(next.len());
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(result)
}
