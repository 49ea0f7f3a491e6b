//! Handle moves as exact integer transformations, move scripts and replay.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{add, mul, Error, Result};
use crate::invariants::InvariantSummary;
use crate::linalg::{self, Matrix};
use crate::link::{ComponentKind, FramedLink};

pub const SCRIPT_SCHEMA: &str = "mvs-1";

/// Slide `rider` over `over`. `sign = +1` is handle addition, `-1` handle
/// subtraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SlideMove {
    pub rider: usize,
    pub over: usize,
    pub sign: i8,
}

impl SlideMove {
    pub fn new(rider: usize, over: usize, sign: i8) -> Self {
        SlideMove { rider, over, sign }
    }

    pub fn inverse(self) -> Self {
        SlideMove { sign: -self.sign, ..self }
    }

    /// The elementary matrix E adding `sign` times column `over` to column
    /// `rider`; a slide replaces the linking matrix M by E^T M E.
    pub fn elementary(self, n: usize) -> Matrix {
        let mut e = linalg::identity(n);
        e[self.over][self.rider] = i64::from(self.sign);
        e
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Move {
    Slide(SlideMove),
    /// A 0-framed split unknot together with a 3-handle.
    AddCancelingPair {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Cancel12 { dotted: usize, handle: usize },
    BlowUp { sign: i8 },
    BlowDown { index: usize },
    /// Declares the active sublink for the moves that follow. No matrix change.
    SelectSublink { indices: Vec<usize> },
    /// A diagram isotopy with no effect on the linking matrix.
    Isotopy { note: String },
}

impl Move {
    pub fn slide(rider: usize, over: usize, sign: i8) -> Self {
        Move::Slide(SlideMove::new(rider, over, sign))
    }

    pub fn is_slide(&self) -> bool {
        matches!(self, Move::Slide(_))
    }

    /// True for moves that leave the linking matrix untouched.
    pub fn is_annotation(&self) -> bool {
        matches!(self, Move::SelectSublink { .. } | Move::Isotopy { .. })
    }
}

fn check_sign(sign: i8) -> Result<i64> {
    match sign {
        1 | -1 => Ok(i64::from(sign)),
        _ => Err(Error::InvalidMove(format!("sign must be +1 or -1, got {sign}"))),
    }
}

impl FramedLink {
    fn require_two_handle(&self, i: usize) -> Result<()> {
        self.check_index(i)?;
        if self.is_dotted(i) {
            Err(Error::NotTwoHandle(i))
        } else {
            Ok(())
        }
    }

    pub(crate) fn slide_mut(&mut self, mv: SlideMove) -> Result<()> {
        let SlideMove { rider: i, over: j, sign } = mv;
        let e = check_sign(sign)?;
        self.require_two_handle(i)?;
        self.require_two_handle(j)?;
        if i == j {
            return Err(Error::InvalidMove(format!("cannot slide component {i} over itself")));
        }
        let (fi, fj, lij) = (self.at(i, i), self.at(j, j), self.at(i, j));
        let mut row = Vec::with_capacity(self.len());
        for k in 0..self.len() {
            let v = if k == i {
                add(add(fi, fj)?, mul(2 * e, lij)?)?
            } else if k == j {
                add(lij, mul(e, fj)?)?
            } else {
                add(self.at(i, k), mul(e, self.at(j, k))?)?
            };
            row.push(v);
        }
        for (k, v) in row.into_iter().enumerate() {
            self.set_sym(i, k, v);
        }
        Ok(())
    }

    pub fn slide(&self, mv: SlideMove) -> Result<FramedLink> {
        let mut out = self.clone();
        out.slide_mut(mv)?;
        Ok(out)
    }

    pub fn add_canceling_pair(&self) -> FramedLink {
        let mut out = self.clone();
        out.push(ComponentKind::TwoHandle { framing: 0 }, &[], None)
            .expect("pushing an unlinked component cannot fail");
        out.set_three_handles(self.three_handles() + 1);
        out
    }

    pub(crate) fn cancel12_mut(&mut self, dotted: usize, handle: usize) -> Result<()> {
        self.check_index(dotted)?;
        if !self.is_dotted(dotted) {
            return Err(Error::NotDotted(dotted));
        }
        self.require_two_handle(handle)?;
        let through = self.at(dotted, handle);
        if through.abs() != 1 {
            return Err(Error::InvalidMove(format!(
                "handle {handle} runs {through} times over dotted {dotted}; cancellation needs exactly one"
            )));
        }
        if let Some(k) = (0..self.len()).find(|&k| k != dotted && k != handle && self.at(dotted, k) != 0) {
            return Err(Error::ResidualLinking { dotted, residual: k, value: self.at(dotted, k) });
        }
        self.remove(&[dotted, handle]);
        Ok(())
    }

    pub fn cancel12(&self, dotted: usize, handle: usize) -> Result<FramedLink> {
        let mut out = self.clone();
        out.cancel12_mut(dotted, handle)?;
        Ok(out)
    }

    pub fn blow_up(&self, sign: i8) -> Result<FramedLink> {
        let f = check_sign(sign)?;
        let mut out = self.clone();
        out.push(ComponentKind::TwoHandle { framing: f }, &[], None)?;
        Ok(out)
    }

    pub(crate) fn blow_down_mut(&mut self, index: usize) -> Result<()> {
        self.require_two_handle(index)?;
        let f = self.at(index, index);
        if f.abs() != 1 {
            return Err(Error::InvalidMove(format!("component {index} has framing {f}, not +-1")));
        }
        if let Some(k) = (0..self.len()).find(|&k| k != index && self.at(index, k) != 0) {
            return Err(Error::InvalidMove(format!("component {index} is still linked with {k}")));
        }
        self.remove(&[index]);
        Ok(())
    }

    pub fn blow_down(&self, index: usize) -> Result<FramedLink> {
        let mut out = self.clone();
        out.blow_down_mut(index)?;
        Ok(out)
    }

    pub(crate) fn apply_mut(&mut self, mv: &Move) -> Result<()> {
        match mv {
            Move::Slide(s) => self.slide_mut(*s),
            Move::AddCancelingPair { label } => {
                self.push(ComponentKind::TwoHandle { framing: 0 }, &[], label.clone())?;
                self.set_three_handles(self.three_handles() + 1);
                Ok(())
            }
            Move::Cancel12 { dotted, handle } => self.cancel12_mut(*dotted, *handle),
            Move::BlowUp { sign } => {
                let f = check_sign(*sign)?;
                self.push(ComponentKind::TwoHandle { framing: f }, &[], None).map(drop)
            }
            Move::BlowDown { index } => self.blow_down_mut(*index),
            Move::SelectSublink { indices } => indices.iter().try_for_each(|&i| self.check_index(i)),
            Move::Isotopy { .. } => Ok(()),
        }
    }

    pub fn apply(&self, mv: &Move) -> Result<FramedLink> {
        let mut out = self.clone();
        out.apply_mut(mv)?;
        Ok(out)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ScriptWire", into = "ScriptWire")]
pub struct MoveScript {
    pub moves: Vec<Move>,
}

#[derive(Serialize, Deserialize)]
struct ScriptWire {
    schema: String,
    moves: Vec<Move>,
}

impl From<MoveScript> for ScriptWire {
    fn from(s: MoveScript) -> Self {
        ScriptWire { schema: SCRIPT_SCHEMA.into(), moves: s.moves }
    }
}

impl TryFrom<ScriptWire> for MoveScript {
    type Error = Error;

    fn try_from(w: ScriptWire) -> Result<Self> {
        if w.schema != SCRIPT_SCHEMA {
            return Err(Error::Schema(format!("expected schema {SCRIPT_SCHEMA}, found {}", w.schema)));
        }
        Ok(MoveScript { moves: w.moves })
    }
}

impl MoveScript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, mv: Move) {
        self.moves.push(mv);
    }

    pub fn slide_count(&self) -> usize {
        self.moves.iter().filter(|m| m.is_slide()).count()
    }

    /// Only slides and annotations.
    pub fn slides_only(&self) -> bool {
        self.moves.iter().all(|m| m.is_slide() || m.is_annotation())
    }

    pub fn truncated(&self, len: usize) -> MoveScript {
        MoveScript { moves: self.moves[..len.min(self.len())].to_vec() }
    }

    /// Renumbers component indices through `map` (old index -> new index).
    pub fn remapped(&self, map: &[usize]) -> Result<MoveScript> {
        let get = |i: usize| map.get(i).copied().ok_or(Error::IndexOutOfRange { index: i, len: map.len() });
        let moves = self
            .moves
            .iter()
            .map(|m| {
                Ok(match m {
                    Move::Slide(s) => Move::slide(get(s.rider)?, get(s.over)?, s.sign),
                    Move::Cancel12 { dotted, handle } => Move::Cancel12 { dotted: get(*dotted)?, handle: get(*handle)? },
                    Move::BlowDown { index } => Move::BlowDown { index: get(*index)? },
                    Move::SelectSublink { indices } => Move::SelectSublink {
                        indices: indices.iter().map(|&i| get(i)).collect::<Result<_>>()?,
                    },
                    other => other.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(MoveScript { moves })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scripts always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    /// Content hash of the compact JSON form.
    pub fn id(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("scripts always serialize");
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        format!("{SCRIPT_SCHEMA}:{hex}")
    }
}

impl FromIterator<Move> for MoveScript {
    fn from_iter<I: IntoIterator<Item = Move>>(iter: I) -> Self {
        MoveScript { moves: iter.into_iter().collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantPolicy {
    /// Summary after every move, with the expected change asserted.
    EveryStep,
    Endpoints,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplayOptions {
    pub invariants: InvariantPolicy,
    /// Rebuild E^T M E densely for every slide and compare.
    pub reconstruct_slides: bool,
}

impl Default for ReplayOptions {
    fn default() -> Self {
        ReplayOptions { invariants: InvariantPolicy::EveryStep, reconstruct_slides: true }
    }
}

impl ReplayOptions {
    /// Preconditions only; for long scripts on large diagrams.
    pub fn light() -> Self {
        ReplayOptions { invariants: InvariantPolicy::Off, reconstruct_slides: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub summary: Option<InvariantSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Replay {
    pub initial_summary: Option<InvariantSummary>,
    pub steps: Vec<StepRecord>,
    pub final_summary: Option<InvariantSummary>,
    pub final_link: FramedLink,
}

pub fn replay(initial: &FramedLink, script: &MoveScript) -> Result<Replay> {
    replay_with(initial, script, ReplayOptions::default())
}

pub fn replay_with(initial: &FramedLink, script: &MoveScript, opts: ReplayOptions) -> Result<Replay> {
    let every = opts.invariants == InvariantPolicy::EveryStep;
    let initial_summary = match opts.invariants {
        InvariantPolicy::Off => None,
        _ => Some(initial.invariants()?),
    };
    let mut link = initial.clone();
    let mut current = initial_summary.clone();
    let mut steps = Vec::with_capacity(script.len());

    for (step, mv) in script.moves.iter().enumerate() {
        let before = opts.reconstruct_slides.then(|| link.matrix());
        link.apply_mut(mv).map_err(|e| e.at_step(step))?;

        if let (Move::Slide(s), Some(before)) = (mv, before) {
            let e = s.elementary(link.len());
            let expected = linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(&e), &before)?, &e)?;
            if expected != link.matrix() {
                return Err(Error::assertion("slide result differs from E^T M E").at_step(step));
            }
        }

        let summary = if every {
            let after = link.invariants().map_err(|e| e.at_step(step))?;
            if let Some(prev) = &current {
                expect_change(mv, prev, &after).map_err(|e| e.at_step(step))?;
            }
            current = Some(after.clone());
            Some(after)
        } else {
            None
        };
        steps.push(StepRecord { step, summary });
    }

    let final_summary = match opts.invariants {
        InvariantPolicy::Off => None,
        InvariantPolicy::EveryStep => current,
        InvariantPolicy::Endpoints => Some(link.invariants()?),
    };
    Ok(Replay { initial_summary, steps, final_summary, final_link: link })
}

fn expect_change(mv: &Move, before: &InvariantSummary, after: &InvariantSummary) -> Result<()> {
    let ok = match mv {
        Move::Slide(_) | Move::SelectSublink { .. } | Move::Isotopy { .. } => before == after,
        Move::AddCancelingPair { .. } => {
            let mut expected = before.boundary_torsion.clone();
            expected.push(0);
            after.rank == before.rank && after.signature == before.signature && after.boundary_torsion == expected
        }
        Move::BlowUp { sign } => {
            let mut expected = vec![1];
            expected.extend(&before.boundary_torsion);
            after.rank == before.rank + 1
                && after.signature == before.signature + i64::from(*sign)
                && after.abs_determinant == before.abs_determinant
                && after.boundary_torsion == expected
        }
        Move::BlowDown { .. } => {
            after.rank + 1 == before.rank
                && after.signature.abs_diff(before.signature) == 1
                && after.abs_determinant == before.abs_determinant
        }
        // the 2-handle block loses a row; nothing is conserved at this level
        Move::Cancel12 { .. } => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::assertion(format!(
            "invariants changed unexpectedly under {mv:?}: {before:?} -> {after:?}"
        )))
    }
}

/// Applies moves to a live link while recording them. Components are found
/// by label, so callers never track index shifts after cancellations.
#[derive(Debug, Clone)]
pub struct ScriptBuilder {
    initial: FramedLink,
    link: FramedLink,
    script: MoveScript,
}

impl ScriptBuilder {
    pub fn new(initial: FramedLink) -> Self {
        ScriptBuilder { link: initial.clone(), initial, script: MoveScript::new() }
    }

    pub fn link(&self) -> &FramedLink {
        &self.link
    }

    pub fn script(&self) -> &MoveScript {
        &self.script
    }

    pub fn idx(&self, label: &str) -> Result<usize> {
        self.link
            .index_of(label)
            .ok_or_else(|| Error::invalid(format!("no component labelled {label:?}")))
    }

    pub fn apply(&mut self, mv: Move) -> Result<()> {
        self.link.apply_mut(&mv).map_err(|e| e.at_step(self.script.len()))?;
        self.script.push(mv);
        Ok(())
    }

    pub fn slide(&mut self, rider: &str, over: &str, sign: i8) -> Result<()> {
        let mv = Move::slide(self.idx(rider)?, self.idx(over)?, sign);
        self.apply(mv)
    }

    pub fn add_canceling_pair(&mut self, label: &str) -> Result<usize> {
        if self.link.index_of(label).is_some() {
            return Err(Error::invalid(format!("label {label:?} already in use")));
        }
        self.apply(Move::AddCancelingPair { label: Some(label.to_string()) })?;
        Ok(self.link.len() - 1)
    }

    pub fn select(&mut self, labels: &[&str]) -> Result<()> {
        let indices = labels.iter().map(|l| self.idx(l)).collect::<Result<_>>()?;
        self.apply(Move::SelectSublink { indices })
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.script.push(Move::Isotopy { note: text.into() });
    }

    pub fn cancel(&mut self, dotted: &str, handle: &str) -> Result<()> {
        let mv = Move::Cancel12 { dotted: self.idx(dotted)?, handle: self.idx(handle)? };
        self.apply(mv)
    }

    /// Slides every other 2-handle off `dotted` using `handle`, which must
    /// run over it exactly once, then cancels the pair.
    pub fn clear_and_cancel(&mut self, dotted: &str, handle: &str) -> Result<()> {
        let d = self.idx(dotted)?;
        let h = self.idx(handle)?;
        let through = self.link.linking(d, h);
        if through.abs() != 1 {
            return Err(Error::InvalidMove(format!(
                "{handle} runs {through} times over {dotted}; cannot use it to cancel"
            )));
        }
        for k in 0..self.link.len() {
            if k == d || k == h || self.link.is_dotted(k) {
                continue;
            }
            let v = self.link.linking(d, k);
            let sign = if v * through > 0 { -1 } else { 1 };
            for _ in 0..v.unsigned_abs() {
                self.apply(Move::slide(k, h, sign))?;
            }
        }
        self.apply(Move::Cancel12 { dotted: d, handle: h })
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut FramedLink, &mut MoveScript) {
        (&mut self.link, &mut self.script)
    }

    pub fn finish(self) -> (FramedLink, MoveScript, FramedLink) {
        (self.initial, self.script, self.link)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> FramedLink {
        FramedLink::from_matrix(&[vec![-1, -1], vec![-1, -1]]).unwrap()
    }

    fn congruence(link: &FramedLink, mv: SlideMove) -> Matrix {
        let e = mv.elementary(link.len());
        linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(&e), &link.matrix()).unwrap(), &e).unwrap()
    }

    #[test]
    fn subtracting_parallel_copies_unlinks() {
        let mv = SlideMove::new(0, 1, -1);
        let out = pair().slide(mv).unwrap();
        assert_eq!(out.matrix(), vec![vec![0, 0], vec![0, -1]]);
        assert_eq!(out.matrix(), congruence(&pair(), mv));
    }

    #[test]
    fn adding_parallel_copies() {
        let mv = SlideMove::new(0, 1, 1);
        let out = pair().slide(mv).unwrap();
        assert_eq!(out.matrix(), vec![vec![-4, -2], vec![-2, -1]]);
        assert_eq!(out.matrix(), congruence(&pair(), mv));
    }

    #[test]
    fn slide_over_unlinked_zero_framed_is_identity() {
        let link = FramedLink::from_matrix(&[vec![-3, 0, 2], vec![0, 0, 0], vec![2, 0, 5]]).unwrap();
        assert_eq!(link.slide(SlideMove::new(0, 1, 1)).unwrap(), link);
    }

    #[test]
    fn slide_errors() {
        let kinds = [ComponentKind::Dotted, ComponentKind::TwoHandle { framing: 0 }];
        let link = FramedLink::from_parts(&kinds, &[vec![0, 1], vec![1, 0]], 0).unwrap();
        assert_eq!(link.slide(SlideMove::new(1, 0, 1)), Err(Error::NotTwoHandle(0)));
        assert!(matches!(link.slide(SlideMove::new(1, 5, 1)), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(pair().slide(SlideMove::new(0, 0, 1)), Err(Error::InvalidMove(_))));
        assert!(matches!(pair().slide(SlideMove::new(0, 1, 2)), Err(Error::InvalidMove(_))));
        let huge = FramedLink::from_matrix(&[vec![i64::MAX, 0], vec![0, 1]]).unwrap();
        assert!(matches!(huge.slide(SlideMove::new(0, 1, 1)), Err(Error::Overflow(_))));
    }

    #[test]
    fn dotted_rows_follow_the_rider() {
        let kinds = [
            ComponentKind::Dotted,
            ComponentKind::TwoHandle { framing: -1 },
            ComponentKind::TwoHandle { framing: -1 },
        ];
        let m = vec![vec![0, 1, 1], vec![1, -1, 0], vec![1, 0, -1]];
        let link = FramedLink::from_parts(&kinds, &m, 0).unwrap();
        let out = link.slide(SlideMove::new(1, 2, -1)).unwrap();
        assert_eq!(out.linking(0, 1), 0);
        assert_eq!(out.framing(1), Some(-2));
        assert_eq!(out.matrix(), congruence(&link, SlideMove::new(1, 2, -1)));
    }

    #[test]
    fn canceling_pairs() {
        let once = FramedLink::empty().add_canceling_pair();
        assert_eq!(once.len(), 1);
        assert_eq!(once.framing(0), Some(0));
        assert_eq!(once.three_handles(), 1);
        let twice = once.add_canceling_pair();
        assert_eq!(twice.matrix(), vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(twice.three_handles(), 2);
    }

    #[test]
    fn canceling_pair_adds_a_zero_divisor() {
        let link = FramedLink::from_matrix(&[vec![-2, 1], vec![1, -2]]).unwrap();
        let before = link.invariants().unwrap();
        let after = link.add_canceling_pair().invariants().unwrap();
        assert_eq!(after.rank, before.rank);
        assert_eq!(after.signature, before.signature);
        assert_eq!(after.boundary_torsion, vec![1, 3, 0]);
    }

    #[test]
    fn cancel12_cases() {
        let kinds = [ComponentKind::Dotted, ComponentKind::TwoHandle { framing: 0 }];
        let link = FramedLink::from_parts(&kinds, &[vec![0, 1], vec![1, 0]], 0).unwrap();
        assert!(link.cancel12(0, 1).unwrap().is_empty());

        let kinds = [
            ComponentKind::Dotted,
            ComponentKind::TwoHandle { framing: 0 },
            ComponentKind::TwoHandle { framing: -1 },
        ];
        let m = vec![vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, -1]];
        let link = FramedLink::from_parts(&kinds, &m, 0).unwrap();
        assert_eq!(link.cancel12(0, 1), Err(Error::ResidualLinking { dotted: 0, residual: 2, value: 1 }));
        assert_eq!(link.cancel12(1, 2), Err(Error::NotDotted(1)));
    }

    #[test]
    fn blow_up_and_down() {
        let up = FramedLink::empty().blow_up(-1).unwrap();
        assert_eq!(up.matrix(), vec![vec![-1]]);
        assert_eq!(up.invariants().unwrap().signature, -1);
        assert_eq!(up.blow_down(0).unwrap(), FramedLink::empty());

        let linked = FramedLink::from_matrix(&[vec![-1, 1], vec![1, 3]]).unwrap();
        assert!(linked.blow_down(0).is_err());
        assert!(linked.blow_down(1).is_err());
    }

    #[test]
    fn replay_identity_and_inverse() {
        let link = FramedLink::from_matrix(&[vec![-2, 1, 0], vec![1, -3, 4], vec![0, 4, 1]]).unwrap();
        let r = replay(&link, &MoveScript::new()).unwrap();
        assert_eq!(r.final_link, link);

        let mv = SlideMove::new(2, 0, 1);
        let script: MoveScript = [Move::Slide(mv), Move::Slide(mv.inverse())].into_iter().collect();
        let r = replay(&link, &script).unwrap();
        assert_eq!(r.final_link, link);
        assert_eq!(r.steps.len(), 2);
        assert!(r.steps.iter().all(|s| s.summary == r.initial_summary));
    }

    #[test]
    fn replay_reports_the_failing_step() {
        let script: MoveScript = [Move::slide(0, 1, 1), Move::BlowDown { index: 0 }].into_iter().collect();
        match replay(&pair(), &script) {
            Err(Error::AtStep { step: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn replay_checks_blow_ups() {
        let script: MoveScript =
            [Move::BlowUp { sign: -1 }, Move::BlowUp { sign: 1 }, Move::BlowDown { index: 3 }].into_iter().collect();
        let r = replay(&pair(), &script).unwrap();
        assert_eq!(r.final_link.len(), 3);
        assert_eq!(r.final_summary.unwrap().signature, -2);
    }

    #[test]
    fn script_json_round_trip() {
        let script: MoveScript = [
            Move::slide(0, 1, -1),
            Move::AddCancelingPair { label: Some("h1".into()) },
            Move::Cancel12 { dotted: 0, handle: 2 },
            Move::BlowUp { sign: 1 },
            Move::BlowDown { index: 3 },
            Move::SelectSublink { indices: vec![1, 2] },
            Move::Isotopy { note: "twist".into() },
        ]
        .into_iter()
        .collect();
        let text = script.to_json();
        assert!(text.contains("\"mvs-1\""));
        assert!(text.contains("\"op\": \"slide\""));
        assert_eq!(MoveScript::from_json(&text).unwrap(), script);
        assert!(MoveScript::from_json(&text.replace("mvs-1", "mvs-2")).is_err());
        assert_eq!(script.id(), MoveScript::from_json(&text).unwrap().id());
    }

    #[test]
    fn builder_clears_residual_links_before_cancelling() {
        let kinds = [
            ComponentKind::Dotted,
            ComponentKind::TwoHandle { framing: -1 },
            ComponentKind::TwoHandle { framing: -1 },
            ComponentKind::TwoHandle { framing: 0 },
        ];
        let m = vec![vec![0, 1, 1, -2], vec![1, -1, 0, 0], vec![1, 0, -1, 0], vec![-2, 0, 0, 0]];
        let link = FramedLink::from_parts(&kinds, &m, 0).unwrap().with_labels(["x", "a1", "a2", "r"]);
        let mut b = ScriptBuilder::new(link.clone());
        b.clear_and_cancel("x", "a1").unwrap();
        let (initial, script, last) = b.finish();
        assert_eq!(last.dotted_count(), 0);
        assert_eq!(last.len(), 2);
        assert_eq!(script.slide_count(), 3);
        let r = replay(&initial, &script).unwrap();
        assert!(r.final_link.same_diagram(&last));
    }
}
