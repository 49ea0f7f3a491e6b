//! Splitting a linked pair of meridian 2-handles by sliding it over a
//! -2-chain.
//!
//! With the pair (P0, P1) linking -m and a chain c1..c_{m+1}, slide P1 over
//! c1, P0 over c2, P1 over c3, and so on, always with sign +1. Afterwards
//! P0 carries c2 + c4 + ..., P1 carries c1 + c3 + ..., their mutual linking
//! is 0 and the framings depend only on the parity of m.

use serde::Serialize;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::link::{ComponentKind, FramedLink};
use crate::moves::{Move, MoveScript, SlideMove};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairSetup {
    pub initial: FramedLink,
    pub script: MoveScript,
    pub link: FramedLink,
}

/// A -n-framed `h0` and a fresh 0-framed `h1` from a 2/3-cancelling pair,
/// with `h1` slid over `h0`.
pub fn pair_setup(n: i64) -> Result<PairSetup> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let mut initial = FramedLink::empty();
    initial.push(ComponentKind::TwoHandle { framing: -n }, &[], Some("h0".into()))?;
    let script: MoveScript = [Move::AddCancelingPair { label: Some("h1".into()) }, Move::slide(1, 0, 1)]
        .into_iter()
        .collect();
    let mut link = initial.clone();
    for mv in &script.moves {
        link.apply_mut(mv)?;
    }
    Ok(PairSetup { initial, script, link })
}

/// `pair_setup(m)` followed by a -2-chain of length `chain_len` split off
/// from the pair. Returns the link, the pair and the chain indices.
pub fn unlink_instance(m: i64, chain_len: usize) -> Result<(FramedLink, (usize, usize), Vec<usize>)> {
    let mut link = pair_setup(m)?.link;
    let spec = ChainSpec::new(chain_len);
    let base = link.len();
    let chain = FramedLink::from_matrix(&spec.matrix())?;
    for i in 0..chain_len {
        let links: Vec<(usize, i64)> = (0..i).map(|j| (base + j, chain.linking(i, j))).collect();
        link.push(chain.component(i), &links, Some(format!("c{}", i + 1)))?;
    }
    Ok((link, (0, 1), (base..base + chain_len).collect()))
}

/// Output framings of the pair after unlinking a -m linking.
pub fn unlink_framings(m: i64) -> Result<(i64, i64)> {
    if m < 1 {
        return Err(Error::invalid("m must be at least 1"));
    }
    Ok(if m % 2 == 1 { (-2 * m - 1, -2 * m - 1) } else { (-2 * m, -2 * m - 2) })
}

/// (|mutual linking|, pair plus chain components still to be used).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub linking: i64,
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnlinkOutcome {
    pub m: i64,
    pub script: MoveScript,
    pub link: FramedLink,
    pub stages: Vec<Stage>,
    /// Number of (m, c) -> (m-1, c-1) reductions before the base slide.
    pub reductions: usize,
    pub framings: (i64, i64),
    /// Linking of each pair member with the chain components used.
    pub chain_rows: [Vec<i64>; 2],
}

/// Unlinks `pair` over the first m+1 entries of `chain`, where -m is the
/// pair's mutual linking.
pub fn unlink_pair(link: &FramedLink, pair: (usize, usize), chain: &[usize]) -> Result<UnlinkOutcome> {
    let mut out = link.clone();
    let mut script = MoveScript::new();
    let (stages, m, used) = unlink_in(&mut out, &mut script, pair, chain)?;
    let framings = (out.framing(pair.0).unwrap_or(0), out.framing(pair.1).unwrap_or(0));
    let chain_rows = [
        used.iter().map(|&c| out.linking(pair.0, c)).collect(),
        used.iter().map(|&c| out.linking(pair.1, c)).collect(),
    ];
    Ok(UnlinkOutcome { m, script, link: out, reductions: stages.len().saturating_sub(2), stages, framings, chain_rows })
}

/// In-place form used by the theorem scripts. Returns the stage records,
/// m, and the chain components consumed.
pub(crate) fn unlink_in(
    link: &mut FramedLink,
    script: &mut MoveScript,
    pair: (usize, usize),
    chain: &[usize],
) -> Result<(Vec<Stage>, i64, Vec<usize>)> {
    let (p0, p1) = pair;
    for i in [p0, p1] {
        link.check_index(i)?;
        if link.is_dotted(i) {
            return Err(Error::NotTwoHandle(i));
        }
    }
    if p0 == p1 {
        return Err(Error::invalid("pair members must differ"));
    }
    let m = -link.linking(p0, p1);
    if m < 1 {
        return Err(Error::invalid(format!("pair linking must be negative, found {}", -m)));
    }
    let needed = usize::try_from(m + 1).map_err(|_| Error::Overflow("chain length"))?;
    if chain.len() < needed {
        return Err(Error::Budget { needed, available: chain.len() });
    }
    let used = &chain[..needed];
    if !ChainSpec::new(needed).matches(link, used) {
        return Err(Error::invalid("chain components do not form a -2-chain"));
    }
    if let Some(&c) = used.iter().find(|&&c| c == p0 || c == p1 || link.linking(p0, c) != 0 || link.linking(p1, c) != 0) {
        return Err(Error::invalid(format!("pair is already linked with chain component {c}")));
    }

    let mut stages = Vec::with_capacity(needed);
    for (k, &c) in used.iter().enumerate() {
        let rider = if k % 2 == 0 { p1 } else { p0 };
        let mv = Move::Slide(SlideMove::new(rider, c, 1));
        link.apply_mut(&mv).map_err(|e| e.at_step(script.len()))?;
        script.push(mv);
        let stage = Stage { linking: link.linking(p0, p1).abs(), components: 2 + needed - k - 1 };
        let expect = Stage { linking: m - k as i64, components: 2 + needed - k - 1 };
        if stage != expect {
            return Err(Error::assertion(format!("unlinking stage {k}: expected {expect:?}, found {stage:?}")));
        }
        stages.push(stage);
    }
    let want = unlink_framings(m)?;
    let got = (link.framing(p0).unwrap_or(0), link.framing(p1).unwrap_or(0));
    if got != want || link.linking(p0, p1) != 0 {
        return Err(Error::assertion(format!("unlinking ended at framings {got:?}, expected {want:?}")));
    }
    Ok((stages, m, used.to_vec()))
}

/// Framings of (h0'', h2', h1'', h3') after the second round of unlinking.
pub fn double_unlink_framings(n: i64) -> Result<[i64; 4]> {
    if n < 2 {
        return Err(Error::invalid("the second round needs n >= 2"));
    }
    let closed = if n % 2 == 1 {
        [-4 * n - 3; 4]
    } else {
        [-4 * n, -4 * n - 2, -4 * n - 4, -4 * n - 6]
    };
    let (f0, f1) = unlink_framings(n)?;
    let (a, b) = unlink_framings(-f0)?;
    let (c, d) = unlink_framings(-f1)?;
    if [a, b, c, d] != closed {
        return Err(Error::assertion(format!("composed framings {:?} differ from {closed:?}", [a, b, c, d])));
    }
    Ok(closed)
}

/// Chain lengths needed by the two second-round pairs.
pub fn stage_two_chain_needs(n: i64) -> Result<(i64, i64)> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    Ok(if n % 2 == 1 { (2 * n + 2, 2 * n + 2) } else { (2 * n + 1, 2 * n + 3) })
}

/// Both chains plus the separator between them.
pub fn stage_two_total(n: i64) -> Result<i64> {
    let (a, b) = stage_two_chain_needs(n)?;
    Ok(a + 1 + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup_with_chain(m: i64) -> (FramedLink, (usize, usize), Vec<usize>) {
        unlink_instance(m, m as usize + 1).unwrap()
    }

    #[test]
    fn pair_setup_values() {
        for n in 1..=3 {
            let l = pair_setup(n).unwrap().link;
            assert_eq!((l.framing(0), l.framing(1), l.linking(0, 1)), (Some(-n), Some(-n), -n));
            assert_eq!(l.three_handles(), 1);
        }
        assert!(pair_setup(0).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(unlink_framings(1).unwrap(), (-3, -3));
        assert_eq!(unlink_framings(2).unwrap(), (-4, -6));
        assert_eq!(unlink_framings(3).unwrap(), (-7, -7));
        assert!(unlink_framings(0).is_err());
    }

    #[test]
    fn unlinks_small_pairs() {
        for (m, want) in [(1, (-3, -3)), (2, (-4, -6)), (3, (-7, -7)), (6, (-12, -14))] {
            let (link, pair, chain) = setup_with_chain(m);
            let out = unlink_pair(&link, pair, &chain).unwrap();
            assert_eq!(out.framings, want);
            assert_eq!(out.link.linking(0, 1), 0);
            assert!(out.script.slides_only());
            assert_eq!(out.reductions as i64, m - 1);
            assert_eq!(out.stages.first().unwrap(), &Stage { linking: m, components: m as usize + 2 });
            assert_eq!(out.stages.last().unwrap(), &Stage { linking: 0, components: 2 });
        }
    }

    #[test]
    fn short_chain_is_a_budget_error() {
        let (link, pair, chain) = setup_with_chain(2);
        assert_eq!(unlink_pair(&link, pair, &chain[..2]), Err(Error::Budget { needed: 3, available: 2 }));
    }

    #[test]
    fn double_round() {
        assert_eq!(double_unlink_framings(3).unwrap(), [-15; 4]);
        assert_eq!(double_unlink_framings(2).unwrap(), [-8, -10, -12, -14]);
        assert!(double_unlink_framings(1).is_err());
        assert_eq!(stage_two_chain_needs(3).unwrap(), (8, 8));
        assert_eq!(stage_two_chain_needs(2).unwrap(), (5, 7));
        assert_eq!(stage_two_total(2).unwrap(), 13);
        assert_eq!(stage_two_total(3).unwrap(), 17);
    }
}
