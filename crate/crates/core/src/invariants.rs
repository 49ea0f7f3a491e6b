use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg;
use crate::link::FramedLink;

/// Conserved quantities of the 2-handle block under handle slides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantSummary {
    pub rank: usize,
    pub signature: i64,
    pub abs_determinant: u128,
    /// Elementary divisors d1 | d2 | ... of the 2-handle block, one per
    /// 2-handle, zeros last.
    pub boundary_torsion: Vec<u128>,
}

impl InvariantSummary {
    pub fn of(link: &FramedLink) -> Result<Self> {
        let form = linalg::analyze(&link.two_handle_block())?;
        Ok(InvariantSummary {
            rank: form.rank,
            signature: form.signature,
            abs_determinant: form.abs_det,
            boundary_torsion: form.divisors,
        })
    }

    pub fn nullity(&self) -> usize {
        self.boundary_torsion.len() - self.rank
    }

    pub fn is_divisor_chain(&self) -> bool {
        self.boundary_torsion.windows(2).all(|w| match (w[0], w[1]) {
            (_, 0) => true,
            (0, _) => false,
            (a, b) => b % a == 0,
        })
    }

    /// Nontrivial part: divisors other than 1.
    pub fn torsion_part(&self) -> Vec<u128> {
        self.boundary_torsion.iter().copied().filter(|&d| d != 1).collect()
    }
}

impl FramedLink {
    pub fn invariants(&self) -> Result<InvariantSummary> {
        InvariantSummary::of(self)
    }
}
