//! -2-chains built from parallel -1-framed vanishing-cycle handles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::{ComponentKind, FramedLink};
use crate::moves::{Move, MoveScript, SlideMove};

/// Linear chain of -2-framed unknots, consecutive ones linking
/// `adjacency_sign`, all others unlinked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub length: usize,
    pub adjacency_sign: i8,
}

impl ChainSpec {
    pub fn new(length: usize) -> Self {
        ChainSpec { length, adjacency_sign: 1 }
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let m = self.length;
        let mut a = vec![vec![0; m]; m];
        for i in 0..m {
            a[i][i] = -2;
            if i + 1 < m {
                a[i][i + 1] = i64::from(self.adjacency_sign);
                a[i + 1][i] = i64::from(self.adjacency_sign);
            }
        }
        a
    }

    /// Whether `indices`, in order, form this chain inside `link`.
    pub fn matches(&self, link: &FramedLink, indices: &[usize]) -> bool {
        if indices.len() != self.length || indices.iter().any(|&i| i >= link.len() || link.is_dotted(i)) {
            return false;
        }
        let want = self.matrix();
        indices
            .iter()
            .enumerate()
            .all(|(a, &i)| indices.iter().enumerate().all(|(b, &j)| link.linking(i, j) == want[a][b]))
    }
}

/// `k` parallel copies of an `framing`-framed vanishing cycle.
///
/// Copies are pushed off along the fibre, so they are pairwise unlinked;
/// see [`blackboard_push_offs`] for the other convention.
pub fn parallel_cycles(k: usize, framing: i64) -> Result<FramedLink> {
    if k < 1 {
        return Err(Error::invalid("need at least one component"));
    }
    let mut link = FramedLink::empty();
    for i in 1..=k {
        link.push(ComponentKind::TwoHandle { framing }, &[], Some(format!("p{i}")))?;
    }
    Ok(link)
}

/// Push-offs with pairwise linking equal to the framing. The matrix is
/// `framing` times all-ones, of rank at most 1, so no slide sequence turns
/// it into a chain of length 2 or more.
pub fn blackboard_push_offs(k: usize, framing: i64) -> Result<FramedLink> {
    if k < 1 {
        return Err(Error::invalid("need at least one component"));
    }
    let link = FramedLink::from_matrix(&vec![vec![framing; k]; k])?;
    Ok(link.with_labels((1..=k).map(|i| format!("p{i}"))))
}

/// Slides p_i over p_{i+1} with sign -1 for consecutive entries of
/// `indices`. On pairwise unlinked -1-framed components this leaves a
/// -2-chain on all but the last index, and the last one -1-framed linking
/// the chain end once.
pub fn chain_moves(indices: &[usize]) -> Vec<Move> {
    indices
        .windows(2)
        .map(|w| Move::Slide(SlideMove::new(w[0], w[1], -1)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum ChainRole {
    /// 1-based position in the chain.
    Chain { position: usize },
    Residual,
    /// Split point dropped by a sub-chain selection.
    Separator,
    Reserved { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainBuild {
    pub initial: FramedLink,
    pub script: MoveScript,
    pub link: FramedLink,
    pub spec: ChainSpec,
    pub roles: Vec<ChainRole>,
    /// Linking of the residual component with chain positions 1..k-1.
    pub residual_linking: Vec<i64>,
}

pub fn build_chain(k: usize) -> Result<ChainBuild> {
    if k < 2 {
        return Err(Error::invalid("a chain needs at least two parallel components"));
    }
    let initial = parallel_cycles(k, -1)?;
    let order: Vec<usize> = (0..k).collect();
    let script: MoveScript = chain_moves(&order).into_iter().collect();
    let mut link = initial.clone();
    for mv in &script.moves {
        link.apply_mut(mv)?;
    }
    let spec = ChainSpec::new(k - 1);
    if !spec.matches(&link, &order[..k - 1]) || link.framing(k - 1) != Some(-1) {
        return Err(Error::assertion("chain script did not produce a -2-chain"));
    }
    let mut roles: Vec<ChainRole> = (1..k).map(|position| ChainRole::Chain { position }).collect();
    roles.push(ChainRole::Residual);
    let residual_linking = (0..k - 1).map(|i| link.linking(k - 1, i)).collect();
    Ok(ChainBuild { initial, script, link, spec, roles, residual_linking })
}

/// Partition of a chain into an active prefix, one separator and a reserve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubchainSelection {
    pub active: Vec<usize>,
    pub separator: usize,
    pub reserved: Vec<usize>,
}

impl SubchainSelection {
    pub fn roles(&self) -> Vec<(usize, ChainRole)> {
        let mut out: Vec<(usize, ChainRole)> = self
            .active
            .iter()
            .enumerate()
            .map(|(p, &i)| (i, ChainRole::Chain { position: p + 1 }))
            .collect();
        out.push((self.separator, ChainRole::Separator));
        out.extend(self.reserved.iter().enumerate().map(|(p, &i)| (i, ChainRole::Reserved { position: p + 1 })));
        out
    }
}

/// Sets aside the chain component at 1-based `drop_position`. Nothing is
/// deleted; the components after it stay in the diagram as a reserve.
pub fn select_subchain(link: &FramedLink, chain: &[usize], drop_position: usize) -> Result<SubchainSelection> {
    if !ChainSpec::new(chain.len()).matches(link, chain) {
        return Err(Error::invalid("indices do not form a -2-chain"));
    }
    if drop_position < 1 || drop_position > chain.len() {
        return Err(Error::invalid(format!(
            "drop position {drop_position} outside chain of length {}",
            chain.len()
        )));
    }
    if drop_position == 1 {
        return Err(Error::invalid("dropping the first component leaves an empty active chain"));
    }
    Ok(SubchainSelection {
        active: chain[..drop_position - 1].to_vec(),
        separator: chain[drop_position - 1],
        reserved: chain[drop_position..].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn framings(link: &FramedLink) -> Vec<i64> {
        (0..link.len()).map(|i| link.framing(i).unwrap()).collect()
    }

    #[test]
    fn parallel_cycle_shapes() {
        assert_eq!(parallel_cycles(1, -1).unwrap().matrix(), vec![vec![-1]]);
        let four = parallel_cycles(4, -1).unwrap();
        assert_eq!(framings(&four), vec![-1; 4]);
        let zero = parallel_cycles(2, 0).unwrap();
        assert_eq!(zero.matrix(), vec![vec![0, 0], vec![0, 0]]);
        assert!(parallel_cycles(0, -1).is_err());
    }

    #[test]
    fn blackboard_push_offs_have_rank_one() {
        let link = blackboard_push_offs(4, -1).unwrap();
        assert_eq!(link.invariants().unwrap().rank, 1);
        assert_eq!(ChainSpec::new(3).matrix().len(), 3);
        let chain_rank = FramedLink::from_matrix(&ChainSpec::new(3).matrix()).unwrap().invariants().unwrap().rank;
        assert_eq!(chain_rank, 3);
    }

    #[test]
    fn small_chains() {
        assert_eq!(framings(&build_chain(2).unwrap().link), vec![-2, -1]);
        assert_eq!(framings(&build_chain(4).unwrap().link), vec![-2, -2, -2, -1]);
        let b = build_chain(4).unwrap();
        assert_eq!(b.residual_linking, vec![0, 0, 1]);
        assert_eq!(b.script.len(), 3);
        assert!(build_chain(1).is_err());
    }

    #[test]
    fn chain_of_length_eight_from_nine() {
        let b = build_chain(9).unwrap();
        assert_eq!(b.spec.length, 8);
        assert!(b.spec.matches(&b.link, &(0..8).collect::<Vec<_>>()));
    }

    #[test]
    fn subchain_budgets() {
        let b = build_chain(9).unwrap();
        let chain: Vec<usize> = (0..8).collect();
        let s = select_subchain(&b.link, &chain, 3).unwrap();
        assert_eq!((s.active.len(), s.reserved.len()), (2, 5));
        assert!(ChainSpec::new(2).matches(&b.link, &s.active));

        let b = build_chain(18).unwrap();
        let chain: Vec<usize> = (0..17).collect();
        let s = select_subchain(&b.link, &chain, 4).unwrap();
        assert_eq!((s.active.len(), s.reserved.len()), (3, 13));
        assert!(select_subchain(&b.link, &chain, 1).is_err());
        assert!(select_subchain(&b.link, &chain, 18).is_err());
        assert!(select_subchain(&b.link, &[0, 2], 2).is_err());
    }
}
