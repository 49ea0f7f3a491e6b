//! Linking-matrix diagrams of knot-surgered and log-transformed E(n).
//!
//! Both start from the skeleton of [`emit_surgery_skeleton`] and add
//! - `a1..a{9n}`: -1-framed a-cycle handles, pairwise unlinked;
//! - `b1..b{3n}`: -1-framed b-cycle handles, each running once over `s`;
//! - `h0`: the -n-framed section handle;
//! - two 3-handles.
//!
//! Knot surgery: every a-cycle runs once over `x1`, `h0` misses all dotted
//! circles. Log transform: every a-cycle runs pq times over `x1`, `h0` once.

use crate::braid::{emit_surgery_skeleton, BridgePresentation};
use crate::error::{Error, Result};
use crate::link::{ComponentKind, FramedLink};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surgery {
    Knot,
    Log { p: i64, q: i64 },
}

pub fn elliptic_diagram(n: u32, pres: &BridgePresentation, surgery: Surgery) -> Result<FramedLink> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let mut link = emit_surgery_skeleton(pres)?;
    let s = link.index_of("s").expect("skeleton has s");
    let x1 = link.index_of("x1").expect("skeleton has x1");
    let (a_over_x1, h0_over_x1) = match surgery {
        Surgery::Knot => (1, 0),
        Surgery::Log { p, q } => (p.checked_mul(q).ok_or(Error::Overflow("p*q"))?, 1),
    };
    let minus_one = ComponentKind::TwoHandle { framing: -1 };
    for i in 1..=9 * n {
        link.push(minus_one, &[(x1, a_over_x1)], Some(format!("a{i}")))?;
    }
    for j in 1..=3 * n {
        link.push(minus_one, &[(s, 1)], Some(format!("b{j}")))?;
    }
    link.push(ComponentKind::TwoHandle { framing: -i64::from(n) }, &[(x1, h0_over_x1)], Some("h0".into()))?;
    link.set_three_handles(link.three_handles() + 2);
    Ok(link)
}

/// 1 - #1-handles + #2-handles - #3-handles + 1.
pub fn euler_characteristic(link: &FramedLink) -> i64 {
    let dotted = link.dotted_count() as i64;
    let two = link.len() as i64 - dotted;
    2 - dotted + two - link.three_handles() as i64
}

pub fn a_labels(n: u32) -> Vec<String> {
    (1..=9 * n).map(|i| format!("a{i}")).collect()
}
